#include "psyrisk/classification/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <string>
#include <thread>

#include <spdlog/spdlog.h>

#include "psyrisk/errors.hpp"
#include "psyrisk/vector_space/similarity.hpp"

namespace psyrisk {

namespace {

template <typename F>
auto run_stage(std::string_view stage, F&& body) -> decltype(body())
{
    const std::string prefix = std::string(stage) + " stage: ";
    try {
        return body();
    } catch (const ConfigError& e) {
        throw ConfigError(prefix + e.what());
    } catch (const DataError& e) {
        throw DataError(prefix + e.what());
    } catch (const NumericalError& e) {
        throw NumericalError(prefix + e.what());
    }
}

[[noreturn]] void unfitted(std::string_view stage)
{
    throw ConfigError("pipeline stage '" + std::string(stage) + "' is not fitted");
}

Eigen::MatrixXd stack_rows(const std::vector<DocVector>& vectors)
{
    Eigen::MatrixXd m(static_cast<Eigen::Index>(vectors.size()),
                      vectors.empty() ? 0 : vectors.front().size());
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        m.row(static_cast<Eigen::Index>(i)) = vectors[i].transpose();
    }
    return m;
}

void split_calibration(std::span<const Paragraph> paragraphs, double fraction, std::uint64_t seed,
                       std::vector<Paragraph>& fitting, std::vector<Paragraph>& calibration)
{
    const auto held = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(paragraphs.size())));
    if (held == 0) {
        fitting.assign(paragraphs.begin(), paragraphs.end());
        calibration = fitting;
        return;
    }
    std::vector<std::size_t> order(paragraphs.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    std::vector<bool> is_held(paragraphs.size(), false);
    for (std::size_t i = 0; i < held; ++i) {
        is_held[order[i]] = true;
    }
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        (is_held[i] ? calibration : fitting).push_back(paragraphs[i]);
    }
}

}  // namespace

std::string_view model_kind_name(ModelKind kind) noexcept
{
    switch (kind) {
    case ModelKind::Cosine: return "cosine";
    case ModelKind::Mlp: return "mlp";
    case ModelKind::Rbf: return "rbf";
    }
    return "";
}

std::optional<ModelKind> parse_model_kind(std::string_view name) noexcept
{
    for (ModelKind k : {ModelKind::Cosine, ModelKind::Mlp, ModelKind::Rbf}) {
        if (model_kind_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

double default_alpha(ModelKind kind) noexcept
{
    switch (kind) {
    case ModelKind::Mlp: return 0.78;
    case ModelKind::Rbf: return 1.2;
    case ModelKind::Cosine: return 1.0;
    }
    return 1.0;
}

DomainScores cosine_baseline_scores(const DocVector& doc, const MegadocVectors& megadocs)
{
    DomainScores scores{};
    for (std::size_t d = 0; d < kNumRiskDomains; ++d) {
        scores[d] = cosine(doc, megadocs[d]);
    }
    return scores;
}

void Pipeline::set_lexicon(KeywordLexicon lex)
{
    const std::vector<MwePhrase> phrases = lex.all_phrases();
    analyzer = TextAnalyzer(phrases);
    lexicon = std::move(lex);
}

std::optional<DocVector> Pipeline::embed(std::string_view text) const
{
    if (!lexicon) {
        unfitted("lexicon");
    }
    if (!tfidf) {
        unfitted("tfidf");
    }
    if (!svd) {
        unfitted("svd");
    }
    const TfidfVector v = tfidf->vectorize(analyzer.terms(text));
    if (v.all_unknown) {
        return std::nullopt;
    }
    DocVector doc = project(*svd, v.weights);
    const double norm = doc.norm();
    if (norm == 0.0) {
        return std::nullopt;
    }
    return doc / norm;
}

DomainScores Pipeline::score(const DocVector& doc) const
{
    switch (kind) {
    case ModelKind::Cosine:
        if (!cosine) {
            unfitted("cosine scorer");
        }
        return cosine_baseline_scores(doc, cosine->megadocs);
    case ModelKind::Mlp:
        if (!mlp) {
            unfitted("mlp");
        }
        return mlp_forward(*mlp, doc, Mode::Infer);
    case ModelKind::Rbf:
        if (!rbf) {
            unfitted("rbf");
        }
        return rbf_forward(*rbf, doc);
    }
    unfitted("scorer");
}

Classification classify_paragraph(const Pipeline& pipeline, std::string_view text)
{
    const std::optional<DocVector> doc = pipeline.embed(text);
    if (!pipeline.thresholds) {
        unfitted("thresholds");
    }
    Classification out;
    if (!doc) {
        out.labels = {Domain::Other};
        out.all_unknown = true;
        return out;
    }
    out.scores = pipeline.score(*doc);
    out.labels = assign(out.scores, *pipeline.thresholds);
    return out;
}

std::vector<Classification> classify_batch(const Pipeline& pipeline,
                                           std::span<const Paragraph> paragraphs, std::size_t threads)
{
    std::vector<Classification> out(paragraphs.size());
    if (threads == 0) {
        threads = std::max(1U, std::thread::hardware_concurrency());
    }
    threads = std::min(threads, std::max<std::size_t>(1, paragraphs.size() / 64));
    if (threads <= 1) {
        for (std::size_t i = 0; i < paragraphs.size(); ++i) {
            out[i] = classify_paragraph(pipeline, paragraphs[i].text);
        }
        return out;
    }

    std::vector<std::exception_ptr> errors(threads);
    std::vector<std::thread> workers;
    const std::size_t chunk = (paragraphs.size() + threads - 1) / threads;
    for (std::size_t t = 0; t < threads; ++t) {
        workers.emplace_back([&, t] {
            try {
                const std::size_t stop = std::min(paragraphs.size(), (t + 1) * chunk);
                for (std::size_t i = t * chunk; i < stop; ++i) {
                    out[i] = classify_paragraph(pipeline, paragraphs[i].text);
                }
            } catch (...) {
                errors[t] = std::current_exception();
            }
        });
    }
    for (auto& w : workers) {
        w.join();
    }
    for (const auto& e : errors) {
        if (e) {
            std::rethrow_exception(e);
        }
    }
    return out;
}

TrainOptions TrainOptions::defaults(ModelKind kind)
{
    TrainOptions o;
    o.kind = kind;
    o.train = kind == ModelKind::Rbf ? TrainConfig::rbf_defaults() : TrainConfig::mlp_defaults();
    return o;
}

Pipeline train_pipeline(std::span<const Paragraph> paragraphs, const KeywordLexicon& lexicon,
                        const TrainOptions& options, TrainReport* report)
{
    TrainReport local;
    TrainReport& r = report != nullptr ? *report : local;
    r = TrainReport{};
    r.input_paragraphs = paragraphs.size();

    if (options.svd_k == 0) {
        throw ConfigError("svd_k must be at least 1");
    }
    const double alpha = options.effective_alpha();
    if (!std::isfinite(alpha)) {
        throw ConfigError("alpha must be finite");
    }

    Pipeline p;
    p.kind = options.kind;
    run_stage("lexicon", [&] {
        lexicon.validate();
        p.set_lexicon(options.use_mwe ? lexicon : lexicon.without_keyphrases());
    });

    if (!(options.calibration_fraction >= 0.0 && options.calibration_fraction < 1.0)) {
        throw ConfigError("calibration_fraction must lie in [0, 1)");
    }
    std::vector<Paragraph> fitting;
    std::vector<Paragraph> calibration;
    split_calibration(paragraphs, options.calibration_fraction, mix_seed(options.seed, 13), fitting,
                      calibration);
    r.fitting_paragraphs = fitting.size();

    const TrainingCorpus corpus = run_stage("weak_label", [&] {
        TrainingCorpus c = weak_label(fitting, *p.lexicon);
        if (c.entries.empty()) {
            throw DataError("no paragraph received a weak label");
        }
        return c;
    });
    r.weak_labeled = corpus.entries.size();
    for (const auto& e : corpus.entries) {
        ++r.per_domain[domain_index(e.domain)];
    }
    spdlog::info("weak labeling kept {} of {} paragraphs", r.weak_labeled, r.input_paragraphs);

    const auto megadocs = run_stage("megadocuments", [&] { return build_megadocuments(corpus, p.analyzer); });

    std::vector<TermBag> bags;
    bags.reserve(corpus.entries.size());
    for (const auto& e : corpus.entries) {
        bags.push_back(p.analyzer.terms(e.paragraph.text));
    }
    p.tfidf = run_stage("tfidf", [&] { return fit_tfidf(bags); });
    r.vocabulary = p.tfidf->dimension();
    spdlog::info("vocabulary has {} terms", r.vocabulary);

    const SparseRowMatrix matrix = tfidf_matrix(*p.tfidf, bags);
    p.svd = run_stage("svd", [&] {
        SvdOptions svd_options;
        svd_options.k = options.svd_k;
        svd_options.seed = mix_seed(options.seed, 10);
        return fit_svd(matrix, svd_options);
    });
    r.svd_rank = p.svd->rank();

    std::vector<DocVector> train_vectors;
    std::vector<Domain> train_labels;
    train_vectors.reserve(corpus.entries.size());
    for (std::size_t i = 0; i < corpus.entries.size(); ++i) {
        DocVector v = project(*p.svd, Eigen::SparseVector<double>(matrix.row(static_cast<Eigen::Index>(i)).transpose()));
        const double norm = v.norm();
        if (norm > 0.0) {
            v /= norm;
        }
        train_vectors.push_back(std::move(v));
        train_labels.push_back(corpus.entries[i].domain);
    }

    TrainConfig train = options.train;
    train.seed = mix_seed(options.seed, 11);
    switch (options.kind) {
    case ModelKind::Cosine:
        p.cosine = run_stage("cosine", [&] {
            CosineScorer scorer;
            for (std::size_t d = 0; d < kNumRiskDomains; ++d) {
                scorer.megadocs[d] = project(*p.svd, p.tfidf->vectorize(megadocs[d].terms).weights);
                if (scorer.megadocs[d].squaredNorm() == 0.0) {
                    throw NumericalError("megadocument for " + std::string(domain_name(kRiskDomains[d]))
                                         + " projects to the zero vector");
                }
            }
            return scorer;
        });
        break;
    case ModelKind::Mlp:
        p.mlp = run_stage("mlp", [&] {
            return train_mlp(stack_rows(train_vectors), one_hot_targets(train_labels), train, &r.history);
        });
        break;
    case ModelKind::Rbf:
        p.rbf = run_stage("rbf", [&] {
            DomainVectors per_domain;
            for (Domain d : kRiskDomains) {
                std::vector<DocVector> rows;
                for (std::size_t i = 0; i < train_vectors.size(); ++i) {
                    if (train_labels[i] == d) {
                        rows.push_back(train_vectors[i]);
                    }
                }
                per_domain[domain_index(d)] = stack_rows(rows);
            }
            RbfModel model;
            model.prototypes = build_rbf_prototypes(per_domain, options.prototypes_per_domain,
                                                    mix_seed(options.seed, 12), options.clamp_prototypes);
            model.width = compute_rbf_width(model.prototypes, options.rbf_width_centers);
            r.rbf_width = model.width;
            spdlog::info("rbf: {} prototypes, width {:.6f}", model.prototypes.rows(), model.width);
            return train_rbf(std::move(model), stack_rows(train_vectors), one_hot_targets(train_labels),
                             train, &r.history);
        });
        break;
    }

    p.thresholds = run_stage("calibrate", [&] {
        std::vector<DomainScores> scores;
        scores.reserve(calibration.size());
        for (const auto& para : calibration) {
            if (const auto doc = p.embed(para.text)) {
                scores.push_back(p.score(*doc));
            }
        }
        r.calibration_paragraphs = scores.size();
        return calibrate(score_columns(scores), alpha);
    });
    return p;
}

}  // namespace psyrisk
