#include "psyrisk/text/text.hpp"

#include <algorithm>

#include "psyrisk/errors.hpp"
#include "psyrisk/text/porter.hpp"

namespace psyrisk {

namespace {

bool is_ascii_alpha(char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z'); }

char ascii_lower(char c) { return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c; }

std::string join(std::span<const std::string> words, char sep)
{
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) {
            out.push_back(sep);
        }
        out += words[i];
    }
    return out;
}

Token stemmed_token(const std::string& word)
{
    auto stem = porter_stem(word);
    // The bare algorithm reduces "s" to the empty string; keep a usable term.
    if (stem.empty()) {
        stem = word;
    }
    return Token{word, std::move(stem), false};
}

}  // namespace

std::string MwePhrase::fused() const { return join(words, kMweSeparator); }

std::string MwePhrase::text() const { return join(words, ' '); }

MwePhrase parse_phrase(std::string_view text, Domain domain)
{
    MwePhrase phrase{{}, domain};
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && text[i] == ' ') {
            ++i;
        }
        std::size_t j = i;
        while (j < text.size() && text[j] != ' ') {
            if (!(text[j] >= 'a' && text[j] <= 'z')) {
                throw ConfigError("keyphrase '" + std::string(text)
                                  + "' must contain only lowercase letters and spaces");
            }
            ++j;
        }
        if (j > i) {
            phrase.words.emplace_back(text.substr(i, j - i));
        }
        i = j;
    }
    if (phrase.words.size() < 2) {
        throw ConfigError("keyphrase '" + std::string(text) + "' needs at least two words");
    }
    return phrase;
}

std::vector<std::string> tokenize(std::string_view text)
{
    std::vector<std::string> words;
    std::string current;
    for (char c : text) {
        if (is_ascii_alpha(c)) {
            current.push_back(ascii_lower(c));
        } else if (!current.empty()) {
            words.push_back(std::move(current));
            current.clear();
        }
    }
    if (!current.empty()) {
        words.push_back(std::move(current));
    }
    return words;
}

PhraseIndex::PhraseIndex(std::span<const MwePhrase> phrases)
    : m_phrases(phrases.begin(), phrases.end())
{
    for (std::size_t i = 0; i < m_phrases.size(); ++i) {
        if (m_phrases[i].words.size() < 2) {
            throw ConfigError("multiword phrase needs at least two words");
        }
        m_by_first[m_phrases[i].words.front()].push_back(i);
    }
    for (auto& [first, ids] : m_by_first) {
        std::stable_sort(ids.begin(), ids.end(), [this](std::size_t a, std::size_t b) {
            return m_phrases[a].words.size() > m_phrases[b].words.size();
        });
    }
}

const MwePhrase* PhraseIndex::longest_match(std::span<const std::string> words,
                                            std::size_t pos) const
{
    auto it = m_by_first.find(words[pos]);
    if (it == m_by_first.end()) {
        return nullptr;
    }
    for (std::size_t id : it->second) {
        const auto& phrase = m_phrases[id].words;
        if (pos + phrase.size() > words.size()) {
            continue;
        }
        if (std::equal(phrase.begin(), phrase.end(), words.begin() + pos)) {
            return &m_phrases[id];
        }
    }
    return nullptr;
}

std::vector<Token> fuse_mwes(std::span<const std::string> words, const PhraseIndex& phrases)
{
    std::vector<Token> tokens;
    tokens.reserve(words.size());
    std::size_t pos = 0;
    while (pos < words.size()) {
        if (const auto* match = phrases.longest_match(words, pos)) {
            auto fused = match->fused();
            tokens.push_back(Token{fused, fused, true});
            pos += match->words.size();
        } else {
            tokens.push_back(stemmed_token(words[pos]));
            ++pos;
        }
    }
    return tokens;
}

std::vector<Token> fuse_mwes(std::span<const std::string> words,
                             std::span<const MwePhrase> phrases)
{
    return fuse_mwes(words, PhraseIndex(phrases));
}

TermBag extract_terms(std::span<const Token> tokens)
{
    TermBag terms;
    const std::size_t n = tokens.size();
    for (std::size_t i = 0; i < n; ++i) {
        ++terms[tokens[i].stem];
        if (i + 1 < n) {
            ++terms[tokens[i].stem + ' ' + tokens[i + 1].stem];
        }
        if (i + 2 < n) {
            ++terms[tokens[i].stem + ' ' + tokens[i + 1].stem + ' ' + tokens[i + 2].stem];
        }
    }
    return terms;
}

std::vector<Token> TextAnalyzer::tokens(std::string_view text) const
{
    const auto words = tokenize(text);
    return fuse_mwes(words, m_index);
}

TermBag TextAnalyzer::terms(std::string_view text) const { return extract_terms(tokens(text)); }

}  // namespace psyrisk
