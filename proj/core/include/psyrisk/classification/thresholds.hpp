#pragma once

#include <array>
#include <span>
#include <vector>

#include "psyrisk/domain.hpp"

namespace psyrisk {

struct DomainThreshold {
    double mean = 0.0;
    double sigma = 0.0;      ///< population standard deviation
    double threshold = 0.0;  ///< mean + alpha * sigma
};

struct ThresholdSet {
    double alpha = 0.0;
    std::array<DomainThreshold, kNumRiskDomains> domains{};

    const DomainThreshold& operator[](Domain d) const { return domains.at(domain_index(d)); }
};

/// Per-domain score lists, indexed by domain_index().
using ScoreColumns = std::array<std::vector<double>, kNumRiskDomains>;

/// Throws DataError for an empty or non-finite score list and ConfigError
/// for a non-finite alpha.
ThresholdSet calibrate(const ScoreColumns& scores, double alpha);

/// Transposes per-paragraph scores into per-domain columns.
ScoreColumns score_columns(std::span<const DomainScores> scores);

/// Domains with score >= threshold, by descending margin with ties in
/// domain order; [Other] when none qualify.
std::vector<Domain> assign(const DomainScores& scores, const ThresholdSet& thresholds);

}  // namespace psyrisk
