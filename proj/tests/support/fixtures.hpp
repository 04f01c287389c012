#pragma once

#include <atomic>
#include <filesystem>
#include <string>

#include <unistd.h>

#include "psyrisk/corpus/corpus.hpp"

namespace psyrisk::fixture {

/// One or two keywords per domain plus a Mood and a Substance keyphrase.
inline KeywordLexicon small_lexicon()
{
    KeywordLexicon lex;
    lex[Domain::Appearance].keywords = {"disheveled", "groomed"};
    lex[Domain::ThoughtContent].keywords = {"delusion", "paranoid"};
    lex[Domain::Interpersonal].keywords = {"boyfriend", "family"};
    lex[Domain::Mood].keywords = {"anxious", "depressed"};
    lex[Domain::Mood].keyphrases = {parse_phrase("panic attack", Domain::Mood)};
    lex[Domain::Occupation].keywords = {"job", "school"};
    lex[Domain::ThoughtProcess].keywords = {"tangential"};
    lex[Domain::Substance].keywords = {"cocaine", "marijuana"};
    lex[Domain::Substance].keyphrases = {parse_phrase("drug screen", Domain::Substance)};
    return lex;
}

/// Fresh empty directory under the system temp dir, removed on destruction.
class TempDir {
  public:
    TempDir()
    {
        static std::atomic<int> counter{0};
        m_path = std::filesystem::temp_directory_path()
                 / ("psyrisk-test-" + std::to_string(::getpid()) + "-"
                    + std::to_string(counter.fetch_add(1)));
        std::filesystem::remove_all(m_path);
        std::filesystem::create_directories(m_path);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;
    ~TempDir()
    {
        std::error_code ec;
        std::filesystem::remove_all(m_path, ec);
    }
    const std::filesystem::path& path() const noexcept { return m_path; }
    std::filesystem::path operator/(const std::string& name) const { return m_path / name; }

  private:
    std::filesystem::path m_path;
};

}  // namespace psyrisk::fixture
