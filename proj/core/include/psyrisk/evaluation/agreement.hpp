#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "psyrisk/corpus/corpus.hpp"
#include "psyrisk/errors.hpp"

namespace psyrisk {

inline constexpr std::size_t kAnnotators = 3;

/// Chance agreement equals one (every rating in a single category), so
/// kappa is undefined.
class UndefinedKappaError : public NumericalError {
  public:
    using NumericalError::NumericalError;
};

/// Categorical ratings, one row per item and one column per rater.
using RatingTable = std::vector<std::vector<int>>;

struct KappaResult {
    double observed = 0.0;  ///< mean pairwise agreement over items
    double expected = 0.0;  ///< chance agreement
    double kappa = 0.0;
};

/// Fleiss's kappa: chance agreement from category proportions pooled over
/// all raters.
KappaResult fleiss_kappa(const RatingTable& ratings);

/// Davies-Fleiss multi-rater kappa: chance agreement averaged over rater
/// pairs, each pair using its own two marginal distributions. Equals
/// Cohen's kappa for two raters.
KappaResult multi_kappa(const RatingTable& ratings);

/// "Slight", "Fair", "Moderate", "Substantial", "Almost perfect", or "Poor".
std::string_view landis_koch_band(double kappa) noexcept;

struct AnnotationRecord {
    std::string id;
    std::array<std::vector<Domain>, kAnnotators> annotators;
};

struct AgreementStats {
    std::size_t total_agreement = 0;     ///< all three label sets identical
    std::size_t total_disagreement = 0;  ///< empty three-way intersection
    std::size_t partial = 0;
    double single_domain_share = 0.0;    ///< of total-agreement items, share with one label
};

AgreementStats agreement_stats(std::span<const AnnotationRecord> annotations);

struct AccuracyVariant {
    std::array<double, kAnnotators> per_annotator{};
    double mean = 0.0;
};

struct AnnotatorAccuracy {
    AccuracyVariant exact_set;     ///< annotator set equals gold set
    AccuracyVariant first_domain;  ///< first labels match
};

/// Throws DataError naming the first annotated id without a gold entry.
AnnotatorAccuracy annotator_accuracy(std::span<const AnnotationRecord> annotations,
                                     std::span<const GoldRecord> gold);

/// First label of each annotator, as domain indices.
RatingTable first_label_table(std::span<const AnnotationRecord> annotations);

/// Eight binary items per paragraph (label present / absent per domain).
RatingTable binary_item_table(std::span<const AnnotationRecord> annotations);

struct AgreementRow {
    std::string label;
    KappaResult fleiss;
    KappaResult multi;
    double mean_accuracy = 0.0;
};

struct AgreementReport {
    std::size_t paragraphs = 0;
    AgreementRow overall;        ///< binary-item kappas, exact-set accuracy
    AgreementRow first_domain;   ///< first-label kappas, first-domain accuracy
    AgreementStats stats;
    AnnotatorAccuracy accuracy;
};

AgreementReport make_agreement_report(std::span<const AnnotationRecord> annotations,
                                      std::span<const GoldRecord> gold);

std::string agreement_to_json(const AgreementReport& report);
std::string agreement_to_text(const AgreementReport& report);

/// Three simulated annotators derived from gold labels: each annotator
/// independently replaces, drops, or appends labels with probability
/// `noise` per paragraph.
std::vector<AnnotationRecord> simulate_annotations(std::span<const AnnotatedParagraph> gold,
                                                   double noise, std::uint64_t seed);

}  // namespace psyrisk
