#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "psyrisk/corpus/corpus.hpp"
#include "psyrisk/domain.hpp"

namespace psyrisk {

struct PredictionRecord {
    std::string id;
    std::vector<Domain> predicted;
    std::vector<Domain> gold;
};

struct PrfScore {
    double precision = 0.0;
    double recall = 0.0;
    double f1 = 0.0;
};

/// F1 as the harmonic mean of P and R, 0 when both are 0.
double f1_score(double precision, double recall) noexcept;

/// Per-paragraph set precision/recall/F1, averaged without weights over
/// paragraphs. Throws DataError on an empty record list.
PrfScore example_prf(std::span<const PredictionRecord> records);

struct DomainRow {
    Domain domain = Domain::Other;
    PrfScore score;
    std::size_t true_positives = 0;
    std::size_t false_positives = 0;
    std::size_t false_negatives = 0;
    bool precision_degenerate = false;  ///< never predicted; precision reported as 0
    bool recall_degenerate = false;     ///< never in gold; recall reported as 0
};

/// One-vs-rest P/R/F1 for all eight labels, in Domain order.
std::array<DomainRow, kNumDomains> per_domain_prf(std::span<const PredictionRecord> records);

struct MetricsReport {
    std::string model;
    std::size_t records = 0;
    PrfScore overall;
    std::array<DomainRow, kNumDomains> domains;
};

MetricsReport make_metrics_report(std::span<const PredictionRecord> records, std::string model);

std::string metrics_to_json(const MetricsReport& report);

/// Aligned table with the overall row followed by the eight label rows in
/// alphabetical display order.
std::string metrics_to_text(const MetricsReport& report);

/// Pairs predictions with gold by id, in prediction order. Throws DataError
/// listing up to ten ids that are missing on either side.
std::vector<PredictionRecord> align_predictions(std::span<const GoldRecord> predictions,
                                                std::span<const GoldRecord> gold);

}  // namespace psyrisk
