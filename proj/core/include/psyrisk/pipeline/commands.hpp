#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "psyrisk/classification/pipeline.hpp"
#include "psyrisk/evaluation/agreement.hpp"
#include "psyrisk/evaluation/metrics.hpp"

namespace psyrisk {

/// Settings shared by every subcommand. Loaded from a JSON object whose keys
/// match the field names (synthetic settings nest under "synthetic");
/// relative paths resolve against the config file's directory. Unknown keys
/// are a ConfigError.
struct PipelineConfig {
    std::filesystem::path corpus;
    std::filesystem::path lexicon;
    std::filesystem::path gold;
    std::filesystem::path annotations;
    std::filesystem::path predictions;
    std::filesystem::path bundle;
    std::filesystem::path output;

    ModelKind model = ModelKind::Mlp;
    std::optional<double> alpha;
    std::size_t svd_k = 100;
    bool use_mwe = true;
    std::optional<std::size_t> epochs;
    std::optional<std::size_t> batch_size;
    std::optional<LossKind> loss;
    std::size_t prototypes_per_domain = kRbfPrototypesPerDomain;
    bool clamp_prototypes = false;
    std::size_t rbf_width_centers = kNumRiskDomains;
    double calibration_fraction = 0.2;
    std::uint64_t seed = 7;
    std::size_t threads = 0;

    std::size_t paragraphs_per_domain = 200;
    std::size_t other_count = 100;
    double annotator_noise = 0.15;
    std::size_t noise_paragraphs = 0;

    static PipelineConfig parse(const std::string& json_text,
                                const std::filesystem::path& base_dir = {});
    static PipelineConfig load(const std::filesystem::path& path);

    /// Throws ConfigError when svd_k is zero, alpha is not finite, or a
    /// training override is zero.
    void validate() const;

    TrainOptions train_options() const;
};

/// corpus.jsonl, gold.jsonl, lexicon.json and annotations.jsonl (three
/// simulated annotators) in `output`, plus noise.jsonl when
/// noise_paragraphs > 0.
void cmd_synth(const PipelineConfig& config);

/// Trains on `corpus` with `lexicon` and writes a bundle to `output`.
TrainReport cmd_train(const PipelineConfig& config);

/// Classifies `corpus` with `bundle`; predictions go to `output` when set,
/// otherwise to `out`. Returns the number of paragraphs.
std::size_t cmd_classify(const PipelineConfig& config, std::ostream& out);

/// Scores `predictions` against `gold`. With `output` set, writes
/// metrics.json and metrics.txt there; otherwise prints the table to `out`.
MetricsReport cmd_evaluate(const PipelineConfig& config, std::ostream& out);

/// Agreement report for `annotations` against `gold`, written as
/// agreement.json and agreement.txt to `output` or printed to `out`.
AgreementReport cmd_agreement(const PipelineConfig& config, std::ostream& out);

/// lda.csv and lda.svg in `output` for the paragraphs of `corpus`, labeled
/// by the first `gold` label when a gold file is given and by weak labels
/// from the bundle lexicon otherwise. Returns the number of plotted rows.
std::size_t cmd_project_lda(const PipelineConfig& config);

}  // namespace psyrisk
