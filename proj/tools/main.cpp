#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <spdlog/sinks/stdout_sinks.h>
#include <spdlog/spdlog.h>

#include "psyrisk/errors.hpp"
#include "psyrisk/pipeline/commands.hpp"

namespace {

using psyrisk::PipelineConfig;

enum ExitCode : int { kOk = 0, kConfig = 1, kData = 2, kNumerical = 3 };

/// Flag values; each one that was given overrides the config file.
struct Overrides {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> corpus, lexicon, gold, annotations, predictions, bundle;
    std::optional<std::string> model, loss;
    std::optional<double> alpha, annotator_noise, calibration_fraction;
    std::optional<std::size_t> svd_k, epochs, batch_size, prototypes, width_centers, threads;
    std::optional<std::size_t> per_domain, other, noise_paragraphs;
    bool no_mwe = false;
    bool clamp = false;
};

void add_common(CLI::App* cmd, Overrides& o)
{
    cmd->add_option("--config", o.config, "JSON config file")->check(CLI::ExistingFile);
    cmd->add_option("--seed", o.seed, "random seed");
    cmd->add_option("--out", o.out, "output path");
}

PipelineConfig resolve(const Overrides& o)
{
    PipelineConfig c = o.config.empty() ? PipelineConfig{} : PipelineConfig::load(o.config);
    auto set_path = [](std::filesystem::path& dst, const std::optional<std::string>& src) {
        if (src) {
            dst = *src;
        }
    };
    set_path(c.output, o.out);
    set_path(c.corpus, o.corpus);
    set_path(c.lexicon, o.lexicon);
    set_path(c.gold, o.gold);
    set_path(c.annotations, o.annotations);
    set_path(c.predictions, o.predictions);
    set_path(c.bundle, o.bundle);
    if (o.seed) {
        c.seed = *o.seed;
    }
    if (o.model) {
        const auto kind = psyrisk::parse_model_kind(*o.model);
        if (!kind) {
            throw psyrisk::ConfigError("unknown model kind '" + *o.model + "'");
        }
        c.model = *kind;
    }
    if (o.loss) {
        const auto loss = psyrisk::parse_loss(*o.loss);
        if (!loss) {
            throw psyrisk::ConfigError("unknown loss '" + *o.loss + "'");
        }
        c.loss = *loss;
    }
    if (o.alpha) {
        c.alpha = *o.alpha;
    }
    if (o.svd_k) {
        c.svd_k = *o.svd_k;
    }
    if (o.epochs) {
        c.epochs = *o.epochs;
    }
    if (o.batch_size) {
        c.batch_size = *o.batch_size;
    }
    if (o.prototypes) {
        c.prototypes_per_domain = *o.prototypes;
    }
    if (o.width_centers) {
        c.rbf_width_centers = *o.width_centers;
    }
    if (o.calibration_fraction) {
        c.calibration_fraction = *o.calibration_fraction;
    }
    if (o.threads) {
        c.threads = *o.threads;
    }
    if (o.per_domain) {
        c.paragraphs_per_domain = *o.per_domain;
    }
    if (o.other) {
        c.other_count = *o.other;
    }
    if (o.noise_paragraphs) {
        c.noise_paragraphs = *o.noise_paragraphs;
    }
    if (o.annotator_noise) {
        c.annotator_noise = *o.annotator_noise;
    }
    if (o.no_mwe) {
        c.use_mwe = false;
    }
    if (o.clamp) {
        c.clamp_prototypes = true;
    }
    c.validate();
    return c;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Risk factor domain classification for clinical paragraphs"};
    app.require_subcommand(1);
    app.fallthrough();
    bool verbose = false;
    bool quiet = false;
    app.add_flag("-v,--verbose", verbose, "debug logging");
    app.add_flag("-q,--quiet", quiet, "log warnings and errors only");

    Overrides o;

    auto* synth = app.add_subcommand("synth", "generate a synthetic corpus, gold, lexicon and annotations");
    add_common(synth, o);
    synth->add_option("--per-domain", o.per_domain, "paragraphs per risk domain");
    synth->add_option("--other", o.other, "noise-only paragraphs labeled Other");
    synth->add_option("--noise-paragraphs", o.noise_paragraphs, "extra unlabeled noise paragraphs");
    synth->add_option("--annotator-noise", o.annotator_noise, "per-annotator label noise rate");

    auto* train = app.add_subcommand("train", "train a model bundle");
    add_common(train, o);
    train->add_option("--corpus", o.corpus, "paragraph JSON-lines file");
    train->add_option("--lexicon", o.lexicon, "lexicon JSON file");
    train->add_option("--model", o.model, "cosine, mlp or rbf");
    train->add_option("--alpha", o.alpha, "threshold alpha");
    train->add_option("--svd-k", o.svd_k, "reduced dimension");
    train->add_option("--epochs", o.epochs, "training epochs");
    train->add_option("--batch-size", o.batch_size, "minibatch size");
    train->add_option("--loss", o.loss, "training loss");
    train->add_option("--prototypes-per-domain", o.prototypes, "RBF prototypes per domain");
    train->add_option("--rbf-width-centers", o.width_centers, "M in the RBF width d_max/sqrt(2M); 0 = prototype count");
    train->add_option("--calibration-fraction", o.calibration_fraction, "share of paragraphs held out for calibration");
    train->add_flag("--clamp-prototypes", o.clamp, "allow domains with fewer vectors than prototypes");
    train->add_flag("--no-mwe", o.no_mwe, "drop keyphrases from labeling and fusion");

    auto* classify = app.add_subcommand("classify", "classify paragraphs with a bundle");
    add_common(classify, o);
    classify->add_option("--bundle", o.bundle, "model bundle directory");
    classify->add_option("--corpus", o.corpus, "paragraph JSON-lines file");
    classify->add_option("--threads", o.threads, "worker threads (0 = all cores)");

    auto* evaluate = app.add_subcommand("evaluate", "score predictions against gold labels");
    add_common(evaluate, o);
    evaluate->add_option("--predictions", o.predictions, "predictions JSON-lines file");
    evaluate->add_option("--gold", o.gold, "gold JSON-lines file");

    auto* agreement = app.add_subcommand("agreement", "inter-annotator agreement report");
    add_common(agreement, o);
    agreement->add_option("--annotations", o.annotations, "annotations JSON-lines file");
    agreement->add_option("--gold", o.gold, "gold JSON-lines file");

    auto* lda = app.add_subcommand("project-lda", "2-d discriminant projection as CSV and SVG");
    add_common(lda, o);
    lda->add_option("--bundle", o.bundle, "model bundle directory");
    lda->add_option("--corpus", o.corpus, "paragraph JSON-lines file");
    lda->add_option("--gold", o.gold, "gold labels (weak labels when omitted)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kConfig;
    }

    auto logger = spdlog::stderr_logger_mt("psyrisk");
    logger->set_pattern("[%l] %v");
    logger->set_level(verbose ? spdlog::level::debug : quiet ? spdlog::level::warn : spdlog::level::info);
    spdlog::set_default_logger(logger);

    try {
        const PipelineConfig config = resolve(o);
        if (synth->parsed()) {
            psyrisk::cmd_synth(config);
        } else if (train->parsed()) {
            psyrisk::cmd_train(config);
        } else if (classify->parsed()) {
            psyrisk::cmd_classify(config, std::cout);
        } else if (evaluate->parsed()) {
            psyrisk::cmd_evaluate(config, std::cout);
        } else if (agreement->parsed()) {
            psyrisk::cmd_agreement(config, std::cout);
        } else if (lda->parsed()) {
            psyrisk::cmd_project_lda(config);
        }
    } catch (const psyrisk::ConfigError& e) {
        spdlog::error("{}", e.what());
        return kConfig;
    } catch (const psyrisk::DataError& e) {
        spdlog::error("{}", e.what());
        return kData;
    } catch (const psyrisk::NumericalError& e) {
        spdlog::error("{}", e.what());
        return kNumerical;
    } catch (const std::filesystem::filesystem_error& e) {
        spdlog::error("{}", e.what());
        return kData;
    } catch (const std::exception& e) {
        spdlog::error("{}", e.what());
        return kNumerical;
    }
    return kOk;
}
