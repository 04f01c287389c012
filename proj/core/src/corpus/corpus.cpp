#include "psyrisk/corpus/corpus.hpp"

#include <algorithm>
#include <set>

#include "psyrisk/errors.hpp"

namespace psyrisk {

namespace {

bool is_lower_word(std::string_view w)
{
    return !w.empty() && std::all_of(w.begin(), w.end(), [](char c) { return c >= 'a' && c <= 'z'; });
}

}  // namespace

std::string_view source_name(Source s) noexcept
{
    switch (s) {
    case Source::Training: return "training";
    case Source::Target: return "target";
    case Source::Synthetic: return "synthetic";
    }
    return "synthetic";
}

std::optional<Source> parse_source(std::string_view name) noexcept
{
    if (name == "training") return Source::Training;
    if (name == "target") return Source::Target;
    if (name == "synthetic") return Source::Synthetic;
    return std::nullopt;
}

std::vector<MwePhrase> KeywordLexicon::all_phrases() const
{
    std::vector<MwePhrase> out;
    for (const auto& d : domains) {
        out.insert(out.end(), d.keyphrases.begin(), d.keyphrases.end());
    }
    return out;
}

KeywordLexicon KeywordLexicon::without_keyphrases() const
{
    KeywordLexicon copy = *this;
    for (auto& d : copy.domains) {
        d.keyphrases.clear();
    }
    return copy;
}

void KeywordLexicon::validate() const
{
    std::set<std::vector<std::string>> seen_phrases;
    for (auto domain : kRiskDomains) {
        const auto& entry = (*this)[domain];
        const std::string name(domain_name(domain));
        if (entry.keywords.empty() && entry.keyphrases.empty()) {
            throw ConfigError("lexicon has no keywords or keyphrases for domain " + name);
        }
        std::set<std::string> keywords;
        for (const auto& k : entry.keywords) {
            if (!is_lower_word(k)) {
                throw ConfigError("lexicon keyword '" + k + "' in " + name
                                  + " must be a single lowercase word");
            }
            if (!keywords.insert(k).second) {
                throw ConfigError("duplicate keyword '" + k + "' in " + name);
            }
        }
        for (const auto& p : entry.keyphrases) {
            if (p.words.size() < 2) {
                throw ConfigError("keyphrase in " + name + " has fewer than two words");
            }
            for (const auto& w : p.words) {
                if (!is_lower_word(w)) {
                    throw ConfigError("keyphrase '" + p.text() + "' in " + name
                                      + " must be lowercase words");
                }
            }
            if (p.domain != domain) {
                throw ConfigError("keyphrase '" + p.text() + "' filed under wrong domain");
            }
            if (!seen_phrases.insert(p.words).second) {
                throw ConfigError("duplicate keyphrase '" + p.text() + "'");
            }
        }
    }
}

std::array<std::size_t, kNumRiskDomains> lexicon_hits(std::string_view text,
                                                      const KeywordLexicon& lexicon,
                                                      const PhraseIndex& phrases)
{
    std::array<std::size_t, kNumRiskDomains> hits{};
    const auto words = tokenize(text);
    std::size_t pos = 0;
    while (pos < words.size()) {
        if (const auto* match = phrases.longest_match(words, pos)) {
            ++hits[domain_index(match->domain)];
            pos += match->words.size();
            continue;
        }
        for (auto d : kRiskDomains) {
            const auto& kw = lexicon[d].keywords;
            if (std::find(kw.begin(), kw.end(), words[pos]) != kw.end()) {
                ++hits[domain_index(d)];
            }
        }
        ++pos;
    }
    return hits;
}

TrainingCorpus weak_label(std::span<const Paragraph> paragraphs, const KeywordLexicon& lexicon)
{
    lexicon.validate();
    const auto phrases = lexicon.all_phrases();
    const PhraseIndex index(phrases);

    TrainingCorpus corpus;
    for (const auto& p : paragraphs) {
        const auto hits = lexicon_hits(p.text, lexicon, index);
        const auto best = std::max_element(hits.begin(), hits.end());
        if (*best == 0 || std::count(hits.begin(), hits.end(), *best) > 1) {
            continue;
        }
        corpus.entries.push_back({p, kRiskDomains[static_cast<std::size_t>(best - hits.begin())]});
    }
    return corpus;
}

std::array<Megadocument, kNumRiskDomains> build_megadocuments(const TrainingCorpus& corpus,
                                                               const TextAnalyzer& analyzer)
{
    std::array<Megadocument, kNumRiskDomains> docs;
    for (auto d : kRiskDomains) {
        docs[domain_index(d)].domain = d;
    }
    for (const auto& entry : corpus.entries) {
        if (!is_risk_domain(entry.domain)) {
            throw DataError("training entry '" + entry.paragraph.id + "' is labeled Other");
        }
        auto& doc = docs[domain_index(entry.domain)];
        doc.paragraph_ids.push_back(entry.paragraph.id);
        for (const auto& [term, count] : analyzer.terms(entry.paragraph.text)) {
            doc.terms[term] += count;
        }
    }
    for (const auto& doc : docs) {
        if (doc.paragraph_ids.empty()) {
            throw DataError("no training paragraphs for domain "
                            + std::string(domain_name(doc.domain)));
        }
    }
    return docs;
}

}  // namespace psyrisk
