#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "psyrisk/corpus/corpus.hpp"

namespace psyrisk {

/// Vocabulary and paragraph count for one synthetic risk domain.
struct SyntheticDomainSpec {
    std::vector<std::string> keywords;    ///< also emitted as lexicon keywords
    std::vector<std::string> related;     ///< unlisted domain words; only in keyphrase-style paragraphs
    std::vector<std::string> keyphrases;  ///< space-separated, built from noise words
    std::size_t count = 0;                ///< paragraphs with this primary label
};

/// Recipe for a synthetic stand-in corpus.
///
/// Keyphrase constituents live in the shared noise pool, so on their own
/// they carry no domain signal; only the fused expression does. A share of
/// each domain's paragraphs expresses the domain through keyphrases plus a
/// single non-lexicon word, which the keyword lexicon alone cannot label.
struct SyntheticConfig {
    std::array<SyntheticDomainSpec, kNumRiskDomains> domains;
    std::vector<std::string> noise;    ///< filler pool, most frequent first
    double noise_zipf_exponent = 0.0;  ///< filler rank r drawn with weight (r+1)^-s; 0 is uniform
    std::size_t other_count = 0;       ///< noise-only paragraphs labeled Other
    double multilabel_fraction = 0.0;  ///< share of risk paragraphs given a second domain
    double mwe_only_fraction = 0.0;    ///< share expressed through keyphrases
    double keyphrase_rate = 0.0;       ///< keyword-style paragraphs that also carry a keyphrase
    std::size_t min_keyphrases = 1;    ///< keyphrases per keyphrase-style paragraph
    std::size_t max_keyphrases = 2;
    std::size_t min_related = 1;       ///< unlisted domain words per keyphrase-style paragraph
    std::size_t max_related = 1;
    std::size_t min_words = 12;
    std::size_t max_words = 24;

    /// The configuration used by the acceptance suite and `synth` defaults:
    /// 200 paragraphs per domain plus 100 Other.
    static SyntheticConfig standard();

    /// Throws ConfigError on empty pools, zero counts, bad fractions, or
    /// Porter-stem overlap between domain pools and the noise pool.
    void validate() const;

    /// Keywords and keyphrases as a lexicon.
    KeywordLexicon lexicon() const;

    std::size_t total_paragraphs() const;
};

struct SyntheticCorpus {
    std::vector<Paragraph> paragraphs;
    std::vector<AnnotatedParagraph> gold;
    KeywordLexicon lexicon;
};

/// Deterministic in (config, seed). Exactly `count` paragraphs carry each
/// domain as first label, `other_count` carry [Other], and
/// round(multilabel_fraction * risk paragraphs) carry a second domain.
SyntheticCorpus generate_synthetic_corpus(const SyntheticConfig& config, std::uint64_t seed);

/// Paragraphs drawn from the noise vocabulary only.
std::vector<Paragraph> generate_noise_paragraphs(const SyntheticConfig& config, std::size_t count,
                                                 std::uint64_t seed);

}  // namespace psyrisk
