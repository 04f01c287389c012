#pragma once

#include <array>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psyrisk/domain.hpp"
#include "psyrisk/text/text.hpp"

namespace psyrisk {

enum class Source { Training, Target, Synthetic };

std::string_view source_name(Source s) noexcept;
std::optional<Source> parse_source(std::string_view name) noexcept;

struct Paragraph {
    std::string id;
    std::string text;
    Source source = Source::Synthetic;
};

/// A paragraph with ordered domain labels, most prevalent first.
struct AnnotatedParagraph {
    Paragraph paragraph;
    std::vector<Domain> labels;
};

/// Gold-standard record as stored on disk: id plus ordered labels.
struct GoldRecord {
    std::string id;
    std::vector<Domain> labels;
};

struct DomainLexicon {
    std::vector<std::string> keywords;
    std::vector<MwePhrase> keyphrases;
};

/// Clinician keywords and multiword keyphrases per risk domain.
struct KeywordLexicon {
    std::array<DomainLexicon, kNumRiskDomains> domains;

    DomainLexicon& operator[](Domain d) { return domains[domain_index(d)]; }
    const DomainLexicon& operator[](Domain d) const { return domains[domain_index(d)]; }

    /// Every keyphrase, in domain order.
    std::vector<MwePhrase> all_phrases() const;

    /// Copy with keyphrases removed (the no-MWE configuration).
    KeywordLexicon without_keyphrases() const;

    /// Throws ConfigError for an empty domain, non-lowercase entries,
    /// duplicates within a domain, or a keyphrase listed twice.
    void validate() const;
};

struct TrainingEntry {
    Paragraph paragraph;
    Domain domain = Domain::Other;
};

/// Weakly labeled paragraphs, exactly one risk domain each.
struct TrainingCorpus {
    std::vector<TrainingEntry> entries;
};

struct Megadocument {
    Domain domain = Domain::Other;
    std::vector<std::string> paragraph_ids;
    TermBag terms;
};

/// Per-domain keyword plus keyphrase hit counts for one paragraph.
/// Keyphrases are matched longest-first on unstemmed words and a matched
/// phrase's words do not also count as keywords.
std::array<std::size_t, kNumRiskDomains> lexicon_hits(std::string_view text,
                                                      const KeywordLexicon& lexicon,
                                                      const PhraseIndex& phrases);

/// Labels each paragraph with its unique arg-max hit domain. Paragraphs with
/// no hits or a tied maximum are left out.
TrainingCorpus weak_label(std::span<const Paragraph> paragraphs, const KeywordLexicon& lexicon);

/// One megadocument per risk domain, in domain order. Term multisets are
/// the sum of the member paragraphs' bags under `analyzer`.
std::array<Megadocument, kNumRiskDomains> build_megadocuments(const TrainingCorpus& corpus,
                                                               const TextAnalyzer& analyzer);

}  // namespace psyrisk
