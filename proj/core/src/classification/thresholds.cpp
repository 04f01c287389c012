#include "psyrisk/classification/thresholds.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "psyrisk/errors.hpp"

namespace psyrisk {

ThresholdSet calibrate(const ScoreColumns& scores, double alpha)
{
    if (!std::isfinite(alpha)) {
        throw ConfigError("alpha must be finite");
    }
    ThresholdSet set;
    set.alpha = alpha;
    for (Domain d : kRiskDomains) {
        const auto& column = scores[domain_index(d)];
        if (column.empty()) {
            throw DataError("no calibration scores for domain " + std::string(domain_name(d)));
        }
        double sum = 0.0;
        for (double s : column) {
            if (!std::isfinite(s)) {
                throw DataError("non-finite calibration score for domain " + std::string(domain_name(d)));
            }
            sum += s;
        }
        const double mean = sum / static_cast<double>(column.size());
        double sq = 0.0;
        for (double s : column) {
            sq += (s - mean) * (s - mean);
        }
        DomainThreshold& t = set.domains[domain_index(d)];
        t.mean = mean;
        t.sigma = std::sqrt(sq / static_cast<double>(column.size()));
        t.threshold = t.mean + alpha * t.sigma;
    }
    return set;
}

ScoreColumns score_columns(std::span<const DomainScores> scores)
{
    ScoreColumns columns;
    for (auto& c : columns) {
        c.reserve(scores.size());
    }
    for (const auto& row : scores) {
        for (std::size_t d = 0; d < kNumRiskDomains; ++d) {
            columns[d].push_back(row[d]);
        }
    }
    return columns;
}

std::vector<Domain> assign(const DomainScores& scores, const ThresholdSet& thresholds)
{
    std::vector<std::pair<double, Domain>> qualifying;
    for (Domain d : kRiskDomains) {
        const double margin = scores[domain_index(d)] - thresholds[d].threshold;
        if (scores[domain_index(d)] >= thresholds[d].threshold) {
            qualifying.emplace_back(margin, d);
        }
    }
    if (qualifying.empty()) {
        return {Domain::Other};
    }
    std::stable_sort(qualifying.begin(), qualifying.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    std::vector<Domain> labels;
    labels.reserve(qualifying.size());
    for (const auto& q : qualifying) {
        labels.push_back(q.second);
    }
    return labels;
}

}  // namespace psyrisk
