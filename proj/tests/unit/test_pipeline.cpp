#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include <gtest/gtest.h>
#include <json.hpp>

#include "fixtures.hpp"
#include "psyrisk/corpus/io.hpp"
#include "psyrisk/errors.hpp"
#include "psyrisk/pipeline/bundle.hpp"
#include "psyrisk/pipeline/commands.hpp"
#include "psyrisk/pipeline/plot.hpp"

using namespace psyrisk;
namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::map<std::string, std::string> directory_bytes(const fs::path& dir)
{
    std::map<std::string, std::string> out;
    for (const auto& entry : fs::directory_iterator(dir)) {
        out[entry.path().filename().string()] = read_text_file(entry.path());
    }
    return out;
}

std::size_t count_lines(const fs::path& path)
{
    std::ifstream in(path);
    std::size_t n = 0;
    std::string line;
    while (std::getline(in, line)) {
        n += line.empty() ? 0 : 1;
    }
    return n;
}

int run_cli(const std::string& args)
{
    const std::string cmd = std::string(PSYRISK_CLI_PATH) + " -q " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

PipelineConfig small_synth_config(const fs::path& out)
{
    PipelineConfig c;
    c.output = out;
    c.paragraphs_per_domain = 40;
    c.other_count = 10;
    c.seed = 7;
    return c;
}

/// Synthetic files plus trained bundles shared by the suite.
class PipelineFiles : public ::testing::Test {
  protected:
    static void SetUpTestSuite()
    {
        s_dir = new fixture::TempDir();
        cmd_synth(small_synth_config(data()));
        for (const char* kind : {"cosine", "mlp", "rbf"}) {
            cmd_train(train_config(kind, bundle(kind)));
        }
    }
    static void TearDownTestSuite()
    {
        delete s_dir;
        s_dir = nullptr;
    }

    static fs::path data() { return s_dir->path() / "data"; }
    static fs::path bundle(const std::string& kind) { return s_dir->path() / ("bundle-" + kind); }

    static PipelineConfig train_config(const std::string& kind, const fs::path& out)
    {
        PipelineConfig c;
        c.corpus = data() / "corpus.jsonl";
        c.lexicon = data() / "lexicon.json";
        c.output = out;
        c.model = *parse_model_kind(kind);
        c.svd_k = 30;
        c.prototypes_per_domain = 8;
        c.epochs = 60;
        c.seed = 3;
        return c;
    }

    static inline fixture::TempDir* s_dir = nullptr;
};

}  // namespace

TEST(PipelineConfig, ParsesAndResolvesPaths)
{
    const auto c = PipelineConfig::parse(
        R"({"corpus": "data/c.jsonl", "bundle": "/abs/b", "model": "rbf", "alpha": 0.5, "svd_k": 20,
            "use_mwe": false, "synthetic": {"paragraphs_per_domain": 12, "noise_paragraphs": 4}})",
        "/base");
    EXPECT_EQ(c.corpus, fs::path("/base/data/c.jsonl"));
    EXPECT_EQ(c.bundle, fs::path("/abs/b"));
    EXPECT_EQ(c.model, ModelKind::Rbf);
    EXPECT_EQ(c.alpha, 0.5);
    EXPECT_EQ(c.svd_k, 20u);
    EXPECT_FALSE(c.use_mwe);
    EXPECT_EQ(c.paragraphs_per_domain, 12u);
    EXPECT_EQ(c.noise_paragraphs, 4u);
    EXPECT_EQ(c.train_options().effective_alpha(), 0.5);
    EXPECT_FALSE(c.train_options().use_mwe);
}

TEST(PipelineConfig, Errors)
{
    EXPECT_THROW(PipelineConfig::parse(R"({"corpos": "x"})"), ConfigError);
    EXPECT_THROW(PipelineConfig::parse(R"({"synthetic": {"bogus": 1}})"), ConfigError);
    EXPECT_THROW(PipelineConfig::parse(R"({"svd_k": 0})"), ConfigError);
    EXPECT_THROW(PipelineConfig::parse(R"({"model": "svm"})"), ConfigError);
    EXPECT_THROW(PipelineConfig::parse(R"({"svd_k": "many"})"), ConfigError);
    EXPECT_THROW(PipelineConfig::parse("[1, 2]"), ConfigError);
    EXPECT_THROW(PipelineConfig::parse("{not json"), ConfigError);
}

TEST(Synth, DeterministicAndSized)
{
    fixture::TempDir dir;
    auto c = small_synth_config(dir / "a");
    c.paragraphs_per_domain = 200;
    c.other_count = 0;
    c.noise_paragraphs = 5;
    cmd_synth(c);
    c.output = dir / "b";
    cmd_synth(c);
    EXPECT_EQ(directory_bytes(dir / "a"), directory_bytes(dir / "b"));
    EXPECT_EQ(count_lines(dir / "a" / "gold.jsonl"), 1400u);
    EXPECT_EQ(count_lines(dir / "a" / "annotations.jsonl"), 1400u);
    EXPECT_EQ(count_lines(dir / "a" / "noise.jsonl"), 5u);

    c.output = dir / "c";
    c.seed = 8;
    cmd_synth(c);
    EXPECT_NE(read_text_file(dir / "a" / "corpus.jsonl"), read_text_file(dir / "c" / "corpus.jsonl"));
}

TEST(Synth, UnwritableOutputIsAnError)
{
    fixture::TempDir dir;
    write_text_file(dir / "file", "x");
    auto c = small_synth_config(dir / "file" / "sub");
    EXPECT_ANY_THROW(cmd_synth(c));
}

TEST_F(PipelineFiles, CosineBundleHasNoNetworkArrays)
{
    const json manifest = json::parse(read_text_file(bundle("cosine") / "manifest.json"));
    EXPECT_EQ(manifest.at("model"), "cosine");
    EXPECT_TRUE(manifest.at("arrays").contains("megadoc_vectors"));
    for (const auto& [name, spec] : manifest.at("arrays").items()) {
        EXPECT_EQ(name.rfind("mlp", 0), std::string::npos) << name;
        EXPECT_EQ(name.rfind("rbf", 0), std::string::npos) << name;
    }
    EXPECT_TRUE(manifest.contains("thresholds"));
    EXPECT_TRUE(fs::exists(bundle("cosine") / "vocab.txt"));
    EXPECT_TRUE(fs::exists(bundle("cosine") / "lexicon.json"));
}

TEST_F(PipelineFiles, RetrainingGivesIdenticalBundleBytes)
{
    fixture::TempDir dir;
    for (const char* kind : {"mlp", "rbf"}) {
        const fs::path out = dir / kind;
        cmd_train(train_config(kind, out));
        EXPECT_EQ(directory_bytes(out), directory_bytes(bundle(kind))) << kind;
    }
}

TEST_F(PipelineFiles, BundleRoundTripClassifiesIdentically)
{
    const auto paragraphs = read_paragraphs(data() / "corpus.jsonl");
    const auto lexicon = read_lexicon(data() / "lexicon.json");
    for (const char* kind : {"cosine", "mlp", "rbf"}) {
        const auto config = train_config(kind, {});
        const TrainOptions options = config.train_options();
        TrainReport report;
        const Pipeline memory = train_pipeline(paragraphs, lexicon, options, &report);
        fixture::TempDir dir;
        save_bundle(dir / "b", memory, BundleRecord{options, report});
        const Pipeline loaded = load_bundle(dir / "b");
        const auto a = classify_batch(memory, paragraphs, 1);
        const auto b = classify_batch(loaded, paragraphs, 2);
        ASSERT_EQ(a.size(), b.size());
        for (std::size_t i = 0; i < a.size(); ++i) {
            EXPECT_EQ(a[i].labels, b[i].labels) << kind << " " << paragraphs[i].id;
            EXPECT_EQ(a[i].scores, b[i].scores) << kind << " " << paragraphs[i].id;
        }
        EXPECT_EQ(directory_bytes(dir / "b"), directory_bytes(bundle(kind))) << kind;
    }
}

TEST_F(PipelineFiles, CorruptBundlesAreRejected)
{
    fixture::TempDir dir;
    fs::copy(bundle("mlp"), dir / "v");
    json manifest = json::parse(read_text_file(dir / "v" / "manifest.json"));
    manifest["format_version"] = kBundleFormatVersion + 1;
    write_text_file(dir / "v" / "manifest.json", manifest.dump());
    EXPECT_THROW(load_bundle(dir / "v"), DataError);

    fs::copy(bundle("mlp"), dir / "s");
    fs::resize_file(dir / "s" / "mlp_w1.f64", 16);
    EXPECT_THROW(load_bundle(dir / "s"), DataError);

    fs::copy(bundle("mlp"), dir / "m");
    fs::remove(dir / "m" / "vocab.txt");
    EXPECT_THROW(load_bundle(dir / "m"), DataError);

    EXPECT_THROW(load_bundle(dir / "absent"), DataError);
}

TEST_F(PipelineFiles, ClassifyThenEvaluate)
{
    fixture::TempDir dir;
    PipelineConfig c;
    c.bundle = bundle("mlp");
    c.corpus = data() / "corpus.jsonl";
    c.output = dir / "pred.jsonl";
    std::ostringstream sink;
    EXPECT_EQ(cmd_classify(c, sink), count_lines(c.corpus));
    EXPECT_TRUE(sink.str().empty());
    EXPECT_EQ(count_lines(c.output), count_lines(c.corpus));

    PipelineConfig e;
    e.predictions = dir / "pred.jsonl";
    e.gold = data() / "gold.jsonl";
    e.output = dir / "metrics";
    const auto report = cmd_evaluate(e, sink);
    EXPECT_TRUE(fs::exists(dir / "metrics" / "metrics.json"));
    EXPECT_TRUE(fs::exists(dir / "metrics" / "metrics.txt"));

    // Same numbers as scoring in memory.
    const auto pipeline = load_bundle(bundle("mlp"));
    const auto paragraphs = read_paragraphs(c.corpus);
    const auto results = classify_batch(pipeline, paragraphs, 1);
    std::vector<GoldRecord> preds;
    for (std::size_t i = 0; i < paragraphs.size(); ++i) {
        preds.push_back({paragraphs[i].id, results[i].labels});
    }
    const auto gold = read_gold(e.gold);
    const auto direct = make_metrics_report(align_predictions(preds, gold), "mlp");
    EXPECT_EQ(direct.overall.f1, report.overall.f1);
    EXPECT_EQ(direct.overall.precision, report.overall.precision);
    EXPECT_GT(report.overall.f1, 0.5);
}

TEST_F(PipelineFiles, EmptyCorpusClassifiesToNothing)
{
    fixture::TempDir dir;
    write_text_file(dir / "empty.jsonl", "");
    PipelineConfig c;
    c.bundle = bundle("cosine");
    c.corpus = dir / "empty.jsonl";
    std::ostringstream out;
    EXPECT_EQ(cmd_classify(c, out), 0u);
    EXPECT_TRUE(out.str().empty());
}

TEST_F(PipelineFiles, ProjectLdaSeparatesDomains)
{
    fixture::TempDir dir;
    PipelineConfig c;
    c.bundle = bundle("cosine");
    c.corpus = data() / "corpus.jsonl";
    c.gold = data() / "gold.jsonl";
    c.output = dir / "lda";
    const std::size_t rows = cmd_project_lda(c);
    EXPECT_EQ(rows, count_lines(c.corpus));
    EXPECT_EQ(count_lines(dir / "lda" / "lda.csv"), rows + 1);
    const std::string svg = read_text_file(dir / "lda" / "lda.svg");
    EXPECT_NE(svg.find("<svg"), std::string::npos);
    EXPECT_NE(svg.find("Substance"), std::string::npos);

    // Parse the CSV and compare class centroid separation to spread.
    std::istringstream in(read_text_file(dir / "lda" / "lda.csv"));
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "id,domain,x,y");
    std::map<std::string, std::vector<std::pair<double, double>>> by_class;
    while (std::getline(in, line)) {
        std::stringstream ss(line);
        std::string id, domain, x, y;
        std::getline(ss, id, ',');
        std::getline(ss, domain, ',');
        std::getline(ss, x, ',');
        std::getline(ss, y, ',');
        by_class[domain].emplace_back(std::stod(x), std::stod(y));
    }
    std::vector<std::pair<double, double>> centroids;
    double spread = 0.0;
    std::size_t points = 0;
    for (const auto& [domain, pts] : by_class) {
        double cx = 0.0, cy = 0.0;
        for (auto [x, y] : pts) {
            cx += x;
            cy += y;
        }
        cx /= static_cast<double>(pts.size());
        cy /= static_cast<double>(pts.size());
        for (auto [x, y] : pts) {
            spread += std::hypot(x - cx, y - cy);
            ++points;
        }
        centroids.emplace_back(cx, cy);
    }
    spread /= static_cast<double>(points);
    double separation = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < centroids.size(); ++i) {
        for (std::size_t j = i + 1; j < centroids.size(); ++j) {
            separation += std::hypot(centroids[i].first - centroids[j].first,
                                     centroids[i].second - centroids[j].second);
            ++pairs;
        }
    }
    separation /= static_cast<double>(pairs);
    EXPECT_GT(separation, spread);

    // Deterministic.
    c.output = dir / "again";
    cmd_project_lda(c);
    EXPECT_EQ(read_text_file(dir / "lda" / "lda.csv"), read_text_file(dir / "again" / "lda.csv"));
}

TEST_F(PipelineFiles, AgreementFixtures)
{
    std::ostringstream out;
    PipelineConfig c;
    c.annotations = data() / "annotations.jsonl";
    c.gold = data() / "gold.jsonl";
    const auto report = cmd_agreement(c, out);
    EXPECT_GT(report.overall.fleiss.kappa, 0.0);
    EXPECT_LT(report.overall.fleiss.kappa, 1.0);
    EXPECT_FALSE(out.str().empty());

    fixture::TempDir dir;
    write_text_file(dir / "gold.jsonl",
                    "{\"id\":\"a\",\"labels\":[\"Mood\"]}\n{\"id\":\"b\",\"labels\":[\"Substance\"]}\n");
    write_text_file(dir / "perfect.jsonl",
                    "{\"id\":\"a\",\"annotations\":[[\"Mood\"],[\"Mood\"],[\"Mood\"]]}\n"
                    "{\"id\":\"b\",\"annotations\":[[\"Substance\"],[\"Substance\"],[\"Substance\"]]}\n");
    c.annotations = dir / "perfect.jsonl";
    c.gold = dir / "gold.jsonl";
    const auto perfect = cmd_agreement(c, out);
    EXPECT_DOUBLE_EQ(perfect.first_domain.fleiss.kappa, 1.0);
    EXPECT_DOUBLE_EQ(perfect.first_domain.multi.kappa, 1.0);
    EXPECT_DOUBLE_EQ(perfect.overall.fleiss.kappa, 1.0);
    EXPECT_DOUBLE_EQ(perfect.accuracy.exact_set.mean, 1.0);
    EXPECT_DOUBLE_EQ(perfect.accuracy.first_domain.mean, 1.0);

    write_text_file(dir / "single.jsonl",
                    "{\"id\":\"a\",\"annotations\":[[\"Mood\"],[\"Mood\"],[\"Mood\"]]}\n"
                    "{\"id\":\"b\",\"annotations\":[[\"Mood\"],[\"Mood\"],[\"Mood\"]]}\n");
    c.annotations = dir / "single.jsonl";
    EXPECT_THROW(cmd_agreement(c, out), UndefinedKappaError);

    write_text_file(dir / "two.jsonl", "{\"id\":\"a\",\"annotations\":[[\"Mood\"],[\"Mood\"]]}\n");
    c.annotations = dir / "two.jsonl";
    EXPECT_THROW(cmd_agreement(c, out), DataError);
}

TEST(Evaluate, ToyFixture)
{
    fixture::TempDir dir;
    write_text_file(dir / "gold.jsonl", "{\"id\":\"1\",\"labels\":[\"Mood\"]}\n"
                                        "{\"id\":\"2\",\"labels\":[\"Mood\",\"Substance\"]}\n"
                                        "{\"id\":\"3\",\"labels\":[\"Appearance\"]}\n");
    write_text_file(dir / "pred.jsonl", "{\"id\":\"1\",\"labels\":[\"Mood\"]}\n"
                                        "{\"id\":\"2\",\"labels\":[\"Mood\"]}\n"
                                        "{\"id\":\"3\",\"labels\":[\"Other\"]}\n");
    PipelineConfig c;
    c.gold = dir / "gold.jsonl";
    c.predictions = dir / "pred.jsonl";
    std::ostringstream out;
    const auto r = cmd_evaluate(c, out);
    EXPECT_NEAR(r.overall.precision, 2.0 / 3.0, 1e-15);
    EXPECT_NEAR(r.overall.recall, 0.5, 1e-15);
    EXPECT_NEAR(r.overall.f1, 5.0 / 9.0, 1e-15);
    EXPECT_DOUBLE_EQ(r.domains[domain_index(Domain::Mood)].score.f1, 1.0);
    EXPECT_DOUBLE_EQ(r.domains[domain_index(Domain::Substance)].score.recall, 0.0);
    // The overall row carries the predictions file stem.
    EXPECT_NE(out.str().find("pred "), std::string::npos);
    EXPECT_NE(out.str().find("0.667     0.500     0.556"), std::string::npos) << out.str();

    c.predictions = c.gold;
    EXPECT_DOUBLE_EQ(cmd_evaluate(c, out).overall.f1, 1.0);

    write_text_file(dir / "other.jsonl", "{\"id\":\"1\",\"labels\":[\"Other\"]}\n"
                                         "{\"id\":\"2\",\"labels\":[\"Other\"]}\n"
                                         "{\"id\":\"3\",\"labels\":[\"Other\"]}\n");
    c.predictions = dir / "other.jsonl";
    const auto zero = cmd_evaluate(c, out);
    EXPECT_EQ(zero.overall.precision, 0.0);
    EXPECT_EQ(zero.overall.recall, 0.0);
    EXPECT_EQ(zero.overall.f1, 0.0);
}

TEST(Plot, CsvQuotingAndSvgLegend)
{
    const std::vector<ScatterPoint> pts{{"a,b", Domain::Mood, 1.0, 2.0}, {"c", Domain::Other, -1.0, 0.5}};
    const std::string csv = scatter_csv(pts);
    EXPECT_EQ(csv.rfind("id,domain,x,y\n", 0), 0u);
    EXPECT_NE(csv.find("\"a,b\",Mood,"), std::string::npos);
    const std::string svg = scatter_svg(pts, "title");
    EXPECT_NE(svg.find("version=\"1.1\""), std::string::npos);
    EXPECT_NE(svg.find("Mood"), std::string::npos);
    EXPECT_EQ(svg.find("Substance"), std::string::npos);
}

TEST(Cli, ExitCodes)
{
    fixture::TempDir dir;
    const std::string out = (dir / "syn").string();
    EXPECT_EQ(run_cli("synth --out " + out + " --per-domain 12 --other 4 --seed 1"), 0);
    EXPECT_TRUE(fs::exists(dir / "syn" / "corpus.jsonl"));

    EXPECT_EQ(run_cli("bogus-command"), 1);
    EXPECT_EQ(run_cli("train --svd-k 0 --corpus " + out + "/corpus.jsonl"), 1);
    write_text_file(dir / "bad.json", "{\"unknown\": 1}");
    EXPECT_EQ(run_cli("train --config " + (dir / "bad.json").string()), 1);

    EXPECT_EQ(run_cli("train --corpus " + (dir / "missing.jsonl").string() + " --lexicon " + out +
                      "/lexicon.json --out " + (dir / "b").string()),
              2);
    EXPECT_FALSE(fs::exists(dir / "b"));

    write_text_file(dir / "single.jsonl",
                    "{\"id\":\"a\",\"annotations\":[[\"Mood\"],[\"Mood\"],[\"Mood\"]]}\n"
                    "{\"id\":\"b\",\"annotations\":[[\"Mood\"],[\"Mood\"],[\"Mood\"]]}\n");
    write_text_file(dir / "gold.jsonl",
                    "{\"id\":\"a\",\"labels\":[\"Mood\"]}\n{\"id\":\"b\",\"labels\":[\"Mood\"]}\n");
    EXPECT_EQ(run_cli("agreement --annotations " + (dir / "single.jsonl").string() + " --gold " +
                      (dir / "gold.jsonl").string()),
              3);

    const std::string bundle = (dir / "bundle").string();
    EXPECT_EQ(run_cli("train --model cosine --svd-k 20 --corpus " + out + "/corpus.jsonl --lexicon " +
                      out + "/lexicon.json --out " + bundle),
              0);
    EXPECT_EQ(run_cli("classify --bundle " + bundle + " --corpus " + out + "/corpus.jsonl --out " +
                      (dir / "pred.jsonl").string()),
              0);
    EXPECT_EQ(run_cli("evaluate --predictions " + (dir / "pred.jsonl").string() + " --gold " + out +
                      "/gold.jsonl"),
              0);
}
