#include "psyrisk/evaluation/agreement.hpp"

#include <algorithm>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "psyrisk/random.hpp"

namespace psyrisk {

namespace {

struct TableShape {
    std::size_t items = 0;
    std::size_t raters = 0;
};

TableShape check_table(const RatingTable& ratings)
{
    if (ratings.size() < 2) {
        throw DataError("kappa needs at least two rated items");
    }
    const std::size_t raters = ratings.front().size();
    if (raters < 2) {
        throw DataError("kappa needs at least two raters per item");
    }
    for (const auto& row : ratings) {
        if (row.size() != raters) {
            throw DataError("every item must have the same number of ratings");
        }
    }
    return {ratings.size(), raters};
}

/// Dense category ids 0..C-1 for whatever labels appear in the table.
std::map<int, std::size_t> category_ids(const RatingTable& ratings)
{
    std::map<int, std::size_t> ids;
    for (const auto& row : ratings) {
        for (int c : row) {
            ids.emplace(c, 0);
        }
    }
    std::size_t next = 0;
    for (auto& [c, id] : ids) {
        id = next++;
    }
    return ids;
}

double mean_pairwise_agreement(const RatingTable& ratings, const std::map<int, std::size_t>& ids,
                               std::size_t raters)
{
    double total = 0.0;
    std::vector<double> counts(ids.size());
    const auto m = static_cast<double>(raters);
    for (const auto& row : ratings) {
        std::fill(counts.begin(), counts.end(), 0.0);
        for (int c : row) {
            counts[ids.at(c)] += 1.0;
        }
        double sq = 0.0;
        for (double n : counts) {
            sq += n * n;
        }
        total += (sq - m) / (m * (m - 1.0));
    }
    return total / static_cast<double>(ratings.size());
}

KappaResult finish(double observed, double expected)
{
    if (1.0 - expected <= 1e-12) {
        throw UndefinedKappaError("kappa is undefined: chance agreement is 1 (all ratings fall in "
                                  "one category)");
    }
    return {observed, expected, (observed - expected) / (1.0 - expected)};
}

std::set<Domain> as_set(const std::vector<Domain>& labels) { return {labels.begin(), labels.end()}; }

Domain random_domain(Rng& rng) { return kAllDomains[rng.below(kNumDomains)]; }

nlohmann::ordered_json row_json(const AgreementRow& row)
{
    return {
        {"label", row.label},
        {"fleiss_kappa", row.fleiss.kappa},
        {"fleiss_band", landis_koch_band(row.fleiss.kappa)},
        {"fleiss_observed", row.fleiss.observed},
        {"fleiss_expected", row.fleiss.expected},
        {"multi_kappa", row.multi.kappa},
        {"multi_kappa_band", landis_koch_band(row.multi.kappa)},
        {"multi_observed", row.multi.observed},
        {"multi_expected", row.multi.expected},
        {"mean_accuracy", row.mean_accuracy},
    };
}

}  // namespace

KappaResult fleiss_kappa(const RatingTable& ratings)
{
    const auto shape = check_table(ratings);
    const auto ids = category_ids(ratings);
    const double observed = mean_pairwise_agreement(ratings, ids, shape.raters);

    std::vector<double> totals(ids.size(), 0.0);
    for (const auto& row : ratings) {
        for (int c : row) {
            totals[ids.at(c)] += 1.0;
        }
    }
    const auto all = static_cast<double>(shape.items * shape.raters);
    double expected = 0.0;
    for (double t : totals) {
        expected += (t / all) * (t / all);
    }
    return finish(observed, expected);
}

KappaResult multi_kappa(const RatingTable& ratings)
{
    const auto shape = check_table(ratings);
    const auto ids = category_ids(ratings);
    const double observed = mean_pairwise_agreement(ratings, ids, shape.raters);

    // marginals[r][j]: share of items rater r put in category j
    std::vector<std::vector<double>> marginals(shape.raters, std::vector<double>(ids.size(), 0.0));
    for (const auto& row : ratings) {
        for (std::size_t r = 0; r < shape.raters; ++r) {
            marginals[r][ids.at(row[r])] += 1.0 / static_cast<double>(shape.items);
        }
    }
    double expected = 0.0;
    std::size_t pairs = 0;
    for (std::size_t r = 0; r < shape.raters; ++r) {
        for (std::size_t s = r + 1; s < shape.raters; ++s) {
            double chance = 0.0;
            for (std::size_t j = 0; j < ids.size(); ++j) {
                chance += marginals[r][j] * marginals[s][j];
            }
            expected += chance;
            ++pairs;
        }
    }
    return finish(observed, expected / static_cast<double>(pairs));
}

std::string_view landis_koch_band(double kappa) noexcept
{
    if (kappa < 0.0) return "Poor";
    if (kappa <= 0.20) return "Slight";
    if (kappa <= 0.40) return "Fair";
    if (kappa <= 0.60) return "Moderate";
    if (kappa <= 0.80) return "Substantial";
    return "Almost perfect";
}

AgreementStats agreement_stats(std::span<const AnnotationRecord> annotations)
{
    AgreementStats stats;
    std::size_t single = 0;
    for (const auto& rec : annotations) {
        const auto a = as_set(rec.annotators[0]);
        const auto b = as_set(rec.annotators[1]);
        const auto c = as_set(rec.annotators[2]);
        if (a == b && b == c) {
            ++stats.total_agreement;
            single += a.size() == 1 ? 1 : 0;
            continue;
        }
        const bool common = std::any_of(a.begin(), a.end(),
                                        [&](Domain d) { return b.contains(d) && c.contains(d); });
        if (common) {
            ++stats.partial;
        } else {
            ++stats.total_disagreement;
        }
    }
    if (stats.total_agreement > 0) {
        stats.single_domain_share =
            static_cast<double>(single) / static_cast<double>(stats.total_agreement);
    }
    return stats;
}

AnnotatorAccuracy annotator_accuracy(std::span<const AnnotationRecord> annotations,
                                     std::span<const GoldRecord> gold)
{
    if (annotations.empty()) {
        throw DataError("no annotations to score");
    }
    std::map<std::string, const GoldRecord*> by_id;
    for (const auto& g : gold) {
        by_id.emplace(g.id, &g);
    }
    AnnotatorAccuracy acc;
    for (const auto& rec : annotations) {
        auto it = by_id.find(rec.id);
        if (it == by_id.end()) {
            throw DataError("annotated paragraph '" + rec.id + "' has no gold entry");
        }
        const auto& truth = it->second->labels;
        for (std::size_t r = 0; r < kAnnotators; ++r) {
            const auto& labels = rec.annotators[r];
            if (as_set(labels) == as_set(truth)) {
                acc.exact_set.per_annotator[r] += 1.0;
            }
            if (!labels.empty() && !truth.empty() && labels.front() == truth.front()) {
                acc.first_domain.per_annotator[r] += 1.0;
            }
        }
    }
    const auto n = static_cast<double>(annotations.size());
    for (auto* variant : {&acc.exact_set, &acc.first_domain}) {
        double sum = 0.0;
        for (auto& a : variant->per_annotator) {
            a /= n;
            sum += a;
        }
        variant->mean = sum / static_cast<double>(kAnnotators);
    }
    return acc;
}

RatingTable first_label_table(std::span<const AnnotationRecord> annotations)
{
    RatingTable table;
    table.reserve(annotations.size());
    for (const auto& rec : annotations) {
        std::vector<int> row;
        for (const auto& labels : rec.annotators) {
            if (labels.empty()) {
                throw DataError("annotation for '" + rec.id + "' is empty");
            }
            row.push_back(static_cast<int>(domain_index(labels.front())));
        }
        table.push_back(std::move(row));
    }
    return table;
}

RatingTable binary_item_table(std::span<const AnnotationRecord> annotations)
{
    RatingTable table;
    table.reserve(annotations.size() * kNumDomains);
    for (const auto& rec : annotations) {
        for (auto d : kAllDomains) {
            std::vector<int> row;
            for (const auto& labels : rec.annotators) {
                row.push_back(std::find(labels.begin(), labels.end(), d) != labels.end() ? 1 : 0);
            }
            table.push_back(std::move(row));
        }
    }
    return table;
}

AgreementReport make_agreement_report(std::span<const AnnotationRecord> annotations,
                                      std::span<const GoldRecord> gold)
{
    AgreementReport report;
    report.paragraphs = annotations.size();
    report.accuracy = annotator_accuracy(annotations, gold);
    report.stats = agreement_stats(annotations);

    const auto binary = binary_item_table(annotations);
    report.overall = {"Overall", fleiss_kappa(binary), multi_kappa(binary),
                      report.accuracy.exact_set.mean};
    const auto first = first_label_table(annotations);
    report.first_domain = {"First Domain Only", fleiss_kappa(first), multi_kappa(first),
                           report.accuracy.first_domain.mean};
    return report;
}

std::string agreement_to_json(const AgreementReport& report)
{
    nlohmann::ordered_json j;
    j["paragraphs"] = report.paragraphs;
    j["definitions"] = {
        {"overall_kappa", "each paragraph-domain pair is a binary rating item (8 per paragraph)"},
        {"first_domain_kappa", "first label of each annotator as a single category"},
        {"overall_accuracy", "annotator label set equals gold label set"},
        {"first_domain_accuracy", "annotator first label equals gold first label"},
        {"total_agreement", "all three label sets identical"},
        {"total_disagreement", "three-way intersection of label sets is empty"},
    };
    j["rows"] = {row_json(report.overall), row_json(report.first_domain)};
    j["agreement"] = {
        {"total_agreement", report.stats.total_agreement},
        {"partial_agreement", report.stats.partial},
        {"total_disagreement", report.stats.total_disagreement},
        {"single_domain_share_of_total_agreement", report.stats.single_domain_share},
    };
    auto per = [](const AccuracyVariant& v) {
        return nlohmann::ordered_json{{"per_annotator", v.per_annotator}, {"mean", v.mean}};
    };
    j["accuracy"] = {{"exact_set", per(report.accuracy.exact_set)},
                     {"first_domain", per(report.accuracy.first_domain)}};
    return j.dump(2) + "\n";
}

std::string agreement_to_text(const AgreementReport& report)
{
    std::ostringstream out;
    out << std::fixed << std::setprecision(3);
    out << std::left << std::setw(20) << "Labels" << std::setw(16) << "Fleiss's Kappa"
        << std::setw(20) << "Cohen's Multi-Kappa" << "Mean Accuracy\n";
    for (const auto* row : {&report.overall, &report.first_domain}) {
        out << std::left << std::setw(20) << row->label << std::setw(16) << row->fleiss.kappa
            << std::setw(20) << row->multi.kappa << row->mean_accuracy << '\n';
    }
    out << "\nFleiss band (Landis-Koch): overall " << landis_koch_band(report.overall.fleiss.kappa)
        << ", first domain " << landis_koch_band(report.first_domain.fleiss.kappa) << '\n';
    const auto n = static_cast<double>(std::max<std::size_t>(report.paragraphs, 1));
    out << "Paragraphs: " << report.paragraphs << '\n';
    out << "Total agreement: " << report.stats.total_agreement << " ("
        << std::setprecision(1) << 100.0 * static_cast<double>(report.stats.total_agreement) / n
        << "%), single-domain share " << 100.0 * report.stats.single_domain_share << "%\n";
    out << "Partial agreement: " << report.stats.partial << '\n';
    out << "Total disagreement: " << report.stats.total_disagreement << '\n';
    return out.str();
}

std::vector<AnnotationRecord> simulate_annotations(std::span<const AnnotatedParagraph> gold,
                                                   double noise, std::uint64_t seed)
{
    Rng rng(mix_seed(seed, 0xa770));
    std::vector<AnnotationRecord> out;
    out.reserve(gold.size());
    for (const auto& g : gold) {
        AnnotationRecord rec{g.paragraph.id, {}};
        for (auto& labels : rec.annotators) {
            labels = g.labels;
            if (!rng.bernoulli(noise)) {
                continue;
            }
            const auto action = rng.below(3);
            if (action == 0 || labels.front() == Domain::Other) {
                const Domain d = random_domain(rng);
                if (d == Domain::Other) {
                    labels = {Domain::Other};
                } else if (std::find(labels.begin(), labels.end(), d) == labels.end()) {
                    labels.front() = d;
                }
            } else if (action == 1 && labels.size() > 1) {
                labels.pop_back();
            } else {
                const Domain d = kRiskDomains[rng.below(kNumRiskDomains)];
                if (std::find(labels.begin(), labels.end(), d) == labels.end()) {
                    labels.push_back(d);
                }
            }
        }
        out.push_back(std::move(rec));
    }
    return out;
}

}  // namespace psyrisk
