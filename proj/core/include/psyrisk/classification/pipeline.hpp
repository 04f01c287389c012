#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "psyrisk/classification/thresholds.hpp"
#include "psyrisk/corpus/corpus.hpp"
#include "psyrisk/networks/mlp.hpp"
#include "psyrisk/networks/rbf.hpp"
#include "psyrisk/text/text.hpp"
#include "psyrisk/vector_space/svd.hpp"
#include "psyrisk/vector_space/tfidf.hpp"

namespace psyrisk {

enum class ModelKind { Cosine, Mlp, Rbf };

std::string_view model_kind_name(ModelKind kind) noexcept;
std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept;

/// 0.78 for the MLP, 1.2 for the RBF network, 1.0 for the cosine baseline.
double default_alpha(ModelKind kind) noexcept;

using MegadocVectors = std::array<DocVector, kNumRiskDomains>;

struct CosineScorer {
    MegadocVectors megadocs;
};

/// score_d = cosine(doc, megadoc_d). Throws NumericalError on a zero vector.
DomainScores cosine_baseline_scores(const DocVector& doc, const MegadocVectors& megadocs);

struct Classification {
    std::vector<Domain> labels;
    DomainScores scores{};
    bool all_unknown = false;  ///< no known term; labels are [Other] and scores 0
};

/// A fitted classifier. Each stage is optional so that partially built
/// pipelines fail with the name of the missing stage.
struct Pipeline {
    ModelKind kind = ModelKind::Mlp;
    std::optional<KeywordLexicon> lexicon;  ///< the lexicon whose keyphrases are fused
    TextAnalyzer analyzer;                  ///< built from `lexicon`
    std::optional<TfidfModel> tfidf;
    std::optional<SvdProjection> svd;
    std::optional<CosineScorer> cosine;
    std::optional<MlpModel> mlp;
    std::optional<RbfModel> rbf;
    std::optional<ThresholdSet> thresholds;

    void set_lexicon(KeywordLexicon lex);

    /// Reduced-space vector; nullopt when the text has no known term.
    std::optional<DocVector> embed(std::string_view text) const;

    DomainScores score(const DocVector& doc) const;
};

/// tokenize, fuse, vectorize, project, score, assign. Throws ConfigError
/// naming the first unfitted stage.
Classification classify_paragraph(const Pipeline& pipeline, std::string_view text);

/// Output order equals input order. `threads` 0 uses the hardware count.
std::vector<Classification> classify_batch(const Pipeline& pipeline,
                                           std::span<const Paragraph> paragraphs,
                                           std::size_t threads = 0);

struct TrainOptions {
    ModelKind kind = ModelKind::Mlp;
    bool use_mwe = true;  ///< false drops keyphrases from labeling and fusion
    std::optional<double> alpha;
    std::size_t svd_k = 100;
    TrainConfig train;
    std::size_t prototypes_per_domain = kRbfPrototypesPerDomain;
    bool clamp_prototypes = false;
    /// M in the RBF width d_max / sqrt(2 M); 0 means the prototype count.
    std::size_t rbf_width_centers = kNumRiskDomains;
    /// Share of input paragraphs held out from fitting and used only to
    /// calibrate thresholds; 0 calibrates on the fitting paragraphs.
    double calibration_fraction = 0.2;
    std::uint64_t seed = 0;

    /// Kind-specific training defaults (30 epochs and binary cross entropy for
    /// the MLP, 50 epochs and squared error for the RBF network).
    static TrainOptions defaults(ModelKind kind);

    double effective_alpha() const { return alpha.value_or(default_alpha(kind)); }
};

struct TrainReport {
    std::size_t input_paragraphs = 0;
    std::size_t fitting_paragraphs = 0;
    std::size_t weak_labeled = 0;
    std::array<std::size_t, kNumRiskDomains> per_domain{};
    std::size_t vocabulary = 0;
    std::size_t svd_rank = 0;
    std::size_t calibration_paragraphs = 0;
    double rbf_width = 0.0;
    TrainHistory history;
};

/// weak_label -> megadocuments -> TF-IDF -> SVD -> scorer -> calibrate.
/// A seeded calibration_fraction of the input paragraphs is held out of
/// every fitting stage; thresholds are calibrated on the scores of those
/// held-out paragraphs that have at least one known term. Errors keep
/// their type and gain the stage name.
Pipeline train_pipeline(std::span<const Paragraph> paragraphs, const KeywordLexicon& lexicon,
                        const TrainOptions& options, TrainReport* report = nullptr);

}  // namespace psyrisk
