#include "psyrisk/evaluation/metrics.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "psyrisk/errors.hpp"

namespace psyrisk {

namespace {

bool contains(const std::vector<Domain>& labels, Domain d)
{
    return std::find(labels.begin(), labels.end(), d) != labels.end();
}

nlohmann::ordered_json prf_json(const PrfScore& s)
{
    return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}};
}

}  // namespace

double f1_score(double precision, double recall) noexcept
{
    const double sum = precision + recall;
    return sum > 0.0 ? 2.0 * precision * recall / sum : 0.0;
}

PrfScore example_prf(std::span<const PredictionRecord> records)
{
    if (records.empty()) {
        throw DataError("no prediction records to evaluate");
    }
    PrfScore total;
    for (const auto& r : records) {
        if (r.predicted.empty() || r.gold.empty()) {
            throw DataError("record '" + r.id + "' has an empty label list");
        }
        const auto overlap = static_cast<double>(std::count_if(
            r.predicted.begin(), r.predicted.end(), [&](Domain d) { return contains(r.gold, d); }));
        const double p = overlap / static_cast<double>(r.predicted.size());
        const double rec = overlap / static_cast<double>(r.gold.size());
        total.precision += p;
        total.recall += rec;
        total.f1 += f1_score(p, rec);
    }
    const auto n = static_cast<double>(records.size());
    total.precision /= n;
    total.recall /= n;
    total.f1 /= n;
    return total;
}

std::array<DomainRow, kNumDomains> per_domain_prf(std::span<const PredictionRecord> records)
{
    if (records.empty()) {
        throw DataError("no prediction records to evaluate");
    }
    std::array<DomainRow, kNumDomains> rows;
    for (auto d : kAllDomains) {
        auto& row = rows[domain_index(d)];
        row.domain = d;
        for (const auto& r : records) {
            const bool in_pred = contains(r.predicted, d);
            const bool in_gold = contains(r.gold, d);
            row.true_positives += (in_pred && in_gold) ? 1 : 0;
            row.false_positives += (in_pred && !in_gold) ? 1 : 0;
            row.false_negatives += (!in_pred && in_gold) ? 1 : 0;
        }
        const auto tp = static_cast<double>(row.true_positives);
        const std::size_t predicted = row.true_positives + row.false_positives;
        const std::size_t actual = row.true_positives + row.false_negatives;
        row.precision_degenerate = predicted == 0;
        row.recall_degenerate = actual == 0;
        row.score.precision = predicted > 0 ? tp / static_cast<double>(predicted) : 0.0;
        row.score.recall = actual > 0 ? tp / static_cast<double>(actual) : 0.0;
        row.score.f1 = f1_score(row.score.precision, row.score.recall);
    }
    return rows;
}

MetricsReport make_metrics_report(std::span<const PredictionRecord> records, std::string model)
{
    MetricsReport report;
    report.model = std::move(model);
    report.records = records.size();
    report.overall = example_prf(records);
    report.domains = per_domain_prf(records);
    return report;
}

std::string metrics_to_json(const MetricsReport& report)
{
    nlohmann::ordered_json j;
    j["model"] = report.model;
    j["records"] = report.records;
    j["averaging"] = "per-paragraph set precision/recall/F1, unweighted mean over paragraphs";
    j["overall"] = prf_json(report.overall);
    auto& rows = j["domains"];
    rows = nlohmann::ordered_json::array();
    for (const auto& row : report.domains) {
        auto r = prf_json(row.score);
        r["domain"] = domain_name(row.domain);
        r["true_positives"] = row.true_positives;
        r["false_positives"] = row.false_positives;
        r["false_negatives"] = row.false_negatives;
        r["precision_degenerate"] = row.precision_degenerate;
        r["recall_degenerate"] = row.recall_degenerate;
        rows.push_back(std::move(r));
    }
    return j.dump(2) + "\n";
}

std::string metrics_to_text(const MetricsReport& report)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(3);
    const std::string model = report.model.empty() ? "Model" : report.model;
    out << std::left << std::setw(24) << "" << std::right << std::setw(10) << "Precision"
        << std::setw(10) << "Recall" << std::setw(10) << "F1" << '\n';
    out << std::left << std::setw(24) << model << std::right << std::setw(10)
        << report.overall.precision << std::setw(10) << report.overall.recall << std::setw(10)
        << report.overall.f1 << '\n';

    std::vector<const DomainRow*> rows;
    for (const auto& row : report.domains) {
        rows.push_back(&row);
    }
    // Other stays last; the risk domains are listed alphabetically.
    std::stable_sort(rows.begin(), rows.end(), [](const DomainRow* a, const DomainRow* b) {
        if ((a->domain == Domain::Other) != (b->domain == Domain::Other)) {
            return b->domain == Domain::Other;
        }
        return domain_display_name(a->domain) < domain_display_name(b->domain);
    });
    for (const auto* row : rows) {
        std::string name = "  " + std::string(domain_display_name(row->domain));
        if (row->precision_degenerate || row->recall_degenerate) {
            name += " *";
        }
        out << std::left << std::setw(24) << name << std::right << std::setw(10)
            << row->score.precision << std::setw(10) << row->score.recall << std::setw(10)
            << row->score.f1 << '\n';
    }
    out << "(* degenerate row: label never predicted or never in gold)\n";
    return out.str();
}

std::vector<PredictionRecord> align_predictions(std::span<const GoldRecord> predictions,
                                                std::span<const GoldRecord> gold)
{
    std::map<std::string, const GoldRecord*> gold_by_id;
    for (const auto& g : gold) {
        gold_by_id.emplace(g.id, &g);
    }
    std::vector<std::string> offenders;
    std::map<std::string, bool> predicted_ids;
    std::vector<PredictionRecord> out;
    out.reserve(predictions.size());
    for (const auto& p : predictions) {
        predicted_ids.emplace(p.id, true);
        auto it = gold_by_id.find(p.id);
        if (it == gold_by_id.end()) {
            offenders.push_back(p.id + " (no gold)");
            continue;
        }
        out.push_back({p.id, p.labels, it->second->labels});
    }
    for (const auto& g : gold) {
        if (!predicted_ids.contains(g.id)) {
            offenders.push_back(g.id + " (no prediction)");
        }
    }
    if (!offenders.empty()) {
        std::string msg = "prediction and gold ids do not align (" + std::to_string(offenders.size())
                          + " offenders):";
        for (std::size_t i = 0; i < std::min<std::size_t>(10, offenders.size()); ++i) {
            msg += " " + offenders[i];
        }
        throw DataError(msg);
    }
    return out;
}

}  // namespace psyrisk
