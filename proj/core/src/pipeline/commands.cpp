#include "psyrisk/pipeline/commands.hpp"

#include <cmath>
#include <map>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "psyrisk/corpus/io.hpp"
#include "psyrisk/corpus/synthetic.hpp"
#include "psyrisk/errors.hpp"
#include "psyrisk/pipeline/bundle.hpp"
#include "psyrisk/pipeline/plot.hpp"
#include "psyrisk/vector_space/lda.hpp"

namespace psyrisk {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const fs::path& require_path(const fs::path& p, std::string_view what)
{
    if (p.empty()) {
        throw ConfigError("missing required setting '" + std::string(what) + "'");
    }
    return p;
}

void ensure_directory(const fs::path& dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec || !fs::is_directory(dir)) {
        throw DataError("cannot create output directory " + dir.string()
                        + (ec ? ": " + ec.message() : ""));
    }
}

template <typename T>
T get_as(const json& j, std::string_view key)
{
    try {
        return j.get<T>();
    } catch (const json::exception&) {
        throw ConfigError("config key '" + std::string(key) + "' has the wrong type");
    }
}

fs::path resolve(const json& j, std::string_view key, const fs::path& base)
{
    fs::path p = get_as<std::string>(j, key);
    return p.is_relative() && !base.empty() ? base / p : p;
}

}  // namespace

PipelineConfig PipelineConfig::parse(const std::string& json_text, const fs::path& base_dir)
{
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) {
        throw ConfigError("config must be a JSON object");
    }

    PipelineConfig c;
    const std::map<std::string, fs::path PipelineConfig::*> paths{
        {"corpus", &PipelineConfig::corpus},           {"lexicon", &PipelineConfig::lexicon},
        {"gold", &PipelineConfig::gold},               {"annotations", &PipelineConfig::annotations},
        {"predictions", &PipelineConfig::predictions}, {"bundle", &PipelineConfig::bundle},
        {"output", &PipelineConfig::output},
    };
    for (const auto& [key, value] : root.items()) {
        if (auto it = paths.find(key); it != paths.end()) {
            c.*(it->second) = resolve(value, key, base_dir);
        } else if (key == "model") {
            const auto kind = parse_model_kind(get_as<std::string>(value, key));
            if (!kind) {
                throw ConfigError("unknown model kind '" + value.get<std::string>() + "'");
            }
            c.model = *kind;
        } else if (key == "alpha") {
            if (!value.is_null()) {
                c.alpha = get_as<double>(value, key);
            }
        } else if (key == "svd_k") {
            c.svd_k = get_as<std::size_t>(value, key);
        } else if (key == "use_mwe") {
            c.use_mwe = get_as<bool>(value, key);
        } else if (key == "epochs") {
            c.epochs = get_as<std::size_t>(value, key);
        } else if (key == "batch_size") {
            c.batch_size = get_as<std::size_t>(value, key);
        } else if (key == "loss") {
            const auto loss = parse_loss(get_as<std::string>(value, key));
            if (!loss) {
                throw ConfigError("unknown loss '" + value.get<std::string>() + "'");
            }
            c.loss = *loss;
        } else if (key == "prototypes_per_domain") {
            c.prototypes_per_domain = get_as<std::size_t>(value, key);
        } else if (key == "clamp_prototypes") {
            c.clamp_prototypes = get_as<bool>(value, key);
        } else if (key == "rbf_width_centers") {
            c.rbf_width_centers = get_as<std::size_t>(value, key);
        } else if (key == "calibration_fraction") {
            c.calibration_fraction = get_as<double>(value, key);
        } else if (key == "seed") {
            c.seed = get_as<std::uint64_t>(value, key);
        } else if (key == "threads") {
            c.threads = get_as<std::size_t>(value, key);
        } else if (key == "synthetic") {
            if (!value.is_object()) {
                throw ConfigError("config key 'synthetic' must be an object");
            }
            for (const auto& [skey, svalue] : value.items()) {
                if (skey == "paragraphs_per_domain") {
                    c.paragraphs_per_domain = get_as<std::size_t>(svalue, skey);
                } else if (skey == "other_count") {
                    c.other_count = get_as<std::size_t>(svalue, skey);
                } else if (skey == "annotator_noise") {
                    c.annotator_noise = get_as<double>(svalue, skey);
                } else if (skey == "noise_paragraphs") {
                    c.noise_paragraphs = get_as<std::size_t>(svalue, skey);
                } else {
                    throw ConfigError("unknown config key 'synthetic." + skey + "'");
                }
            }
        } else {
            throw ConfigError("unknown config key '" + key + "'");
        }
    }
    c.validate();
    return c;
}

PipelineConfig PipelineConfig::load(const fs::path& path)
{
    std::string text;
    try {
        text = read_text_file(path);
    } catch (const DataError& e) {
        throw ConfigError(e.what());
    }
    try {
        return parse(text, path.parent_path());
    } catch (const ConfigError& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
}

void PipelineConfig::validate() const
{
    if (svd_k == 0) {
        throw ConfigError("svd_k must be at least 1");
    }
    if (alpha && !std::isfinite(*alpha)) {
        throw ConfigError("alpha must be finite");
    }
    if ((epochs && *epochs == 0) || (batch_size && *batch_size == 0)) {
        throw ConfigError("epochs and batch_size must be at least 1");
    }
    if (prototypes_per_domain == 0) {
        throw ConfigError("prototypes_per_domain must be at least 1");
    }
    if (!(calibration_fraction >= 0.0 && calibration_fraction < 1.0)) {
        throw ConfigError("calibration_fraction must lie in [0, 1)");
    }
    if (paragraphs_per_domain == 0) {
        throw ConfigError("synthetic.paragraphs_per_domain must be at least 1");
    }
    if (!(annotator_noise >= 0.0 && annotator_noise <= 1.0)) {
        throw ConfigError("synthetic.annotator_noise must lie in [0, 1]");
    }
}

TrainOptions PipelineConfig::train_options() const
{
    validate();
    TrainOptions o = TrainOptions::defaults(model);
    o.use_mwe = use_mwe;
    o.alpha = alpha;
    o.svd_k = svd_k;
    o.prototypes_per_domain = prototypes_per_domain;
    o.clamp_prototypes = clamp_prototypes;
    o.rbf_width_centers = rbf_width_centers;
    o.calibration_fraction = calibration_fraction;
    o.seed = seed;
    if (epochs) {
        o.train.epochs = *epochs;
    }
    if (batch_size) {
        o.train.batch_size = *batch_size;
    }
    if (loss) {
        o.train.loss = *loss;
    }
    return o;
}

void cmd_synth(const PipelineConfig& config)
{
    const fs::path& out = require_path(config.output, "output");
    SyntheticConfig synth = SyntheticConfig::standard();
    for (auto& spec : synth.domains) {
        spec.count = config.paragraphs_per_domain;
    }
    synth.other_count = config.other_count;
    const SyntheticCorpus corpus = generate_synthetic_corpus(synth, config.seed);

    ensure_directory(out);
    write_paragraphs(out / "corpus.jsonl", corpus.paragraphs);
    write_gold(out / "gold.jsonl", to_gold_records(corpus.gold));
    write_lexicon(out / "lexicon.json", corpus.lexicon);
    write_annotations(out / "annotations.jsonl",
                      simulate_annotations(corpus.gold, config.annotator_noise, mix_seed(config.seed, 1)));
    if (config.noise_paragraphs > 0) {
        write_paragraphs(out / "noise.jsonl",
                         generate_noise_paragraphs(synth, config.noise_paragraphs, mix_seed(config.seed, 2)));
    }
    spdlog::info("wrote {} paragraphs to {}", corpus.paragraphs.size(), out.string());
}

TrainReport cmd_train(const PipelineConfig& config)
{
    const TrainOptions options = config.train_options();
    const auto paragraphs = read_paragraphs(require_path(config.corpus, "corpus"));
    const auto lexicon = read_lexicon(require_path(config.lexicon, "lexicon"));
    const fs::path& out = require_path(config.output, "output");

    spdlog::info("training {} model on {} paragraphs", model_kind_name(options.kind), paragraphs.size());
    TrainReport report;
    const Pipeline pipeline = train_pipeline(paragraphs, lexicon, options, &report);
    save_bundle(out, pipeline, BundleRecord{options, report});
    spdlog::info("bundle written to {}", out.string());
    return report;
}

std::size_t cmd_classify(const PipelineConfig& config, std::ostream& out)
{
    const Pipeline pipeline = load_bundle(require_path(config.bundle, "bundle"));
    const auto paragraphs = read_paragraphs(require_path(config.corpus, "corpus"));
    const auto results = classify_batch(pipeline, paragraphs, config.threads);

    std::vector<ScoredPrediction> predictions;
    predictions.reserve(results.size());
    for (std::size_t i = 0; i < results.size(); ++i) {
        predictions.push_back({paragraphs[i].id, results[i].labels, results[i].scores});
    }
    if (!config.output.empty()) {
        if (config.output.has_parent_path()) {
            ensure_directory(config.output.parent_path());
        }
        write_predictions(config.output, predictions);
    } else {
        for (const auto& p : predictions) {
            out << prediction_to_json_line(p) << '\n';
        }
    }
    spdlog::info("classified {} paragraphs", predictions.size());
    return predictions.size();
}

MetricsReport cmd_evaluate(const PipelineConfig& config, std::ostream& out)
{
    const fs::path& pred_path = require_path(config.predictions, "predictions");
    const auto predictions = read_prediction_labels(pred_path);
    const auto gold = read_gold(require_path(config.gold, "gold"));
    const auto records = align_predictions(predictions, gold);
    const MetricsReport report = make_metrics_report(records, pred_path.stem().string());
    if (!config.output.empty()) {
        ensure_directory(config.output);
        write_text_file(config.output / "metrics.json", metrics_to_json(report));
        write_text_file(config.output / "metrics.txt", metrics_to_text(report));
    } else {
        out << metrics_to_text(report);
    }
    return report;
}

AgreementReport cmd_agreement(const PipelineConfig& config, std::ostream& out)
{
    const auto annotations = read_annotations(require_path(config.annotations, "annotations"));
    const auto gold = read_gold(require_path(config.gold, "gold"));
    const AgreementReport report = make_agreement_report(annotations, gold);
    if (!config.output.empty()) {
        ensure_directory(config.output);
        write_text_file(config.output / "agreement.json", agreement_to_json(report));
        write_text_file(config.output / "agreement.txt", agreement_to_text(report));
    } else {
        out << agreement_to_text(report);
    }
    return report;
}

std::size_t cmd_project_lda(const PipelineConfig& config)
{
    const Pipeline pipeline = load_bundle(require_path(config.bundle, "bundle"));
    const auto paragraphs = read_paragraphs(require_path(config.corpus, "corpus"));
    const fs::path& out = require_path(config.output, "output");

    std::vector<const Paragraph*> members;
    std::vector<Domain> labels;
    if (!config.gold.empty()) {
        std::map<std::string, Domain> first;
        for (const auto& g : read_gold(config.gold)) {
            first.emplace(g.id, g.labels.front());
        }
        for (const auto& p : paragraphs) {
            if (auto it = first.find(p.id); it != first.end()) {
                members.push_back(&p);
                labels.push_back(it->second);
            }
        }
    } else {
        const TrainingCorpus weak = weak_label(paragraphs, *pipeline.lexicon);
        std::map<std::string, const Paragraph*> by_id;
        for (const auto& p : paragraphs) {
            by_id.emplace(p.id, &p);
        }
        for (const auto& e : weak.entries) {
            members.push_back(by_id.at(e.paragraph.id));
            labels.push_back(e.domain);
        }
    }

    std::vector<DocVector> vectors;
    vectors.reserve(members.size());
    for (const Paragraph* p : members) {
        vectors.push_back(pipeline.embed(p->text).value_or(DocVector::Zero(
            static_cast<Eigen::Index>(pipeline.svd->rank()))));
    }
    const Eigen::MatrixXd coords = lda_2d(vectors, labels);

    std::vector<ScatterPoint> points;
    points.reserve(members.size());
    for (std::size_t i = 0; i < members.size(); ++i) {
        const auto r = static_cast<Eigen::Index>(i);
        points.push_back({members[i]->id, labels[i], coords(r, 0), coords(r, 1)});
    }
    ensure_directory(out);
    write_text_file(out / "lda.csv", scatter_csv(points));
    write_text_file(out / "lda.svg", scatter_svg(points, "Linear discriminant projection"));
    spdlog::info("projected {} paragraphs", points.size());
    return points.size();
}

}  // namespace psyrisk
