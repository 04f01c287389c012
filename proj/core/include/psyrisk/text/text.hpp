#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "psyrisk/domain.hpp"

namespace psyrisk {

inline constexpr char kMweSeparator = '_';

/// A single post-fusion unit of text. For a fused multiword expression the
/// stem is the joined surface form, unstemmed.
struct Token {
    std::string surface;
    std::string stem;
    bool is_mwe = false;

    friend bool operator==(const Token&, const Token&) = default;
};

/// A multiword keyphrase owned by one risk domain.
struct MwePhrase {
    std::vector<std::string> words;
    Domain domain = Domain::Other;

    /// Words joined by the MWE separator, e.g. "panic_attack".
    std::string fused() const;
    /// Words joined by single spaces, as written in lexicon files.
    std::string text() const;
};

/// Parses a space-separated keyphrase ("panic attack"). Throws ConfigError
/// on fewer than two words or non-lowercase content.
MwePhrase parse_phrase(std::string_view text, Domain domain);

/// Multiset of unigram, bigram and trigram terms.
using TermBag = std::map<std::string, std::size_t>;

/// Maximal runs of ASCII letters, lowercased. Everything else separates.
std::vector<std::string> tokenize(std::string_view text);

/// Lookup structure for longest-match phrase scanning.
class PhraseIndex {
  public:
    PhraseIndex() = default;
    explicit PhraseIndex(std::span<const MwePhrase> phrases);

    /// Longest phrase starting at `pos`, or nullptr.
    const MwePhrase* longest_match(std::span<const std::string> words, std::size_t pos) const;

    bool empty() const noexcept { return m_phrases.empty(); }
    std::span<const MwePhrase> phrases() const noexcept { return m_phrases; }

  private:
    std::vector<MwePhrase> m_phrases;
    // first word -> phrase indices, longest first
    std::unordered_map<std::string, std::vector<std::size_t>> m_by_first;
};

/// Longest-match, left-to-right, non-overlapping fusion of phrases on
/// unstemmed words; unmatched words become Porter-stemmed tokens.
std::vector<Token> fuse_mwes(std::span<const std::string> words, const PhraseIndex& phrases);
std::vector<Token> fuse_mwes(std::span<const std::string> words,
                             std::span<const MwePhrase> phrases);

/// Unigrams (token stems) plus space-joined bigrams and trigrams over the
/// token sequence.
TermBag extract_terms(std::span<const Token> tokens);

/// tokenize -> fuse_mwes -> extract_terms with a fixed phrase set.
class TextAnalyzer {
  public:
    TextAnalyzer() = default;
    explicit TextAnalyzer(std::span<const MwePhrase> phrases) : m_index(phrases) {}

    std::vector<Token> tokens(std::string_view text) const;
    TermBag terms(std::string_view text) const;
    const PhraseIndex& phrases() const noexcept { return m_index; }

  private:
    PhraseIndex m_index;
};

}  // namespace psyrisk
