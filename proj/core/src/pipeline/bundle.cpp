#include "psyrisk/pipeline/bundle.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "psyrisk/corpus/io.hpp"
#include "psyrisk/errors.hpp"

namespace psyrisk {

namespace fs = std::filesystem;
using nlohmann::json;
using nlohmann::ordered_json;

namespace {

using Shape = std::vector<std::size_t>;
using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr std::string_view kFormatName = "psyrisk-model-bundle";

std::uint64_t to_little_endian(std::uint64_t v)
{
    if constexpr (std::endian::native == std::endian::little) {
        return v;
    } else {
        std::uint64_t out = 0;
        for (int i = 0; i < 8; ++i) {
            out = (out << 8) | ((v >> (8 * i)) & 0xff);
        }
        return out;
    }
}

std::size_t element_count(const Shape& shape)
{
    std::size_t n = 1;
    for (auto s : shape) {
        n *= s;
    }
    return n;
}

class ArrayWriter {
  public:
    ArrayWriter(fs::path dir, ordered_json& arrays) : m_dir(std::move(dir)), m_arrays(arrays) {}

    void write(const std::string& name, const double* data, const Shape& shape)
    {
        const std::string file = name + ".f64";
        const std::size_t n = element_count(shape);
        std::string bytes(n * 8, '\0');
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t bits = 0;
            std::memcpy(&bits, data + i, 8);
            bits = to_little_endian(bits);
            std::memcpy(bytes.data() + 8 * i, &bits, 8);
        }
        write_text_file(m_dir / file, bytes);
        m_arrays[name] = ordered_json{{"file", file}, {"shape", shape}};
    }

    void write(const std::string& name, const Eigen::MatrixXd& m)
    {
        const RowMajor rm = m;
        write(name, rm.data(),
              {static_cast<std::size_t>(m.rows()), static_cast<std::size_t>(m.cols())});
    }

    void write(const std::string& name, const Eigen::VectorXd& v)
    {
        write(name, v.data(), {static_cast<std::size_t>(v.size())});
    }

  private:
    fs::path m_dir;
    ordered_json& m_arrays;
};

class ArrayReader {
  public:
    ArrayReader(fs::path dir, const json& arrays) : m_dir(std::move(dir)), m_arrays(arrays) {}

    std::vector<double> read(const std::string& name, Shape& shape) const
    {
        if (!m_arrays.contains(name)) {
            throw DataError("bundle manifest lists no array '" + name + "'");
        }
        const json& entry = m_arrays.at(name);
        const fs::path path = m_dir / entry.at("file").get<std::string>();
        shape = entry.at("shape").get<Shape>();
        const std::string bytes = read_text_file(path);
        const std::size_t n = element_count(shape);
        if (bytes.size() != n * 8) {
            throw DataError(path.string() + ": " + std::to_string(bytes.size())
                            + " bytes do not match manifest shape of " + std::to_string(n)
                            + " doubles");
        }
        std::vector<double> out(n);
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t bits = 0;
            std::memcpy(&bits, bytes.data() + 8 * i, 8);
            bits = to_little_endian(bits);
            std::memcpy(&out[i], &bits, 8);
        }
        return out;
    }

    Eigen::MatrixXd matrix(const std::string& name, std::optional<std::size_t> rows,
                           std::optional<std::size_t> cols) const
    {
        Shape shape;
        const std::vector<double> data = read(name, shape);
        if (shape.size() != 2 || (rows && shape[0] != *rows) || (cols && shape[1] != *cols)) {
            throw DataError("bundle array '" + name + "' has an unexpected shape");
        }
        const auto r = static_cast<Eigen::Index>(shape[0]);
        const auto c = static_cast<Eigen::Index>(shape[1]);
        return Eigen::Map<const RowMajor>(data.data(), r, c);
    }

    Eigen::VectorXd vector(const std::string& name, std::optional<std::size_t> size) const
    {
        Shape shape;
        const std::vector<double> data = read(name, shape);
        if (shape.size() != 1 || (size && shape[0] != *size)) {
            throw DataError("bundle array '" + name + "' has an unexpected shape");
        }
        return Eigen::Map<const Eigen::VectorXd>(data.data(), static_cast<Eigen::Index>(data.size()));
    }

  private:
    fs::path m_dir;
    const json& m_arrays;
};

ordered_json parameters_json(const TrainOptions& o)
{
    ordered_json j;
    j["use_mwe"] = o.use_mwe;
    j["svd_k"] = o.svd_k;
    j["alpha"] = o.effective_alpha();
    j["calibration_fraction"] = o.calibration_fraction;
    j["seed"] = o.seed;
    if (o.kind != ModelKind::Cosine) {
        j["epochs"] = o.train.epochs;
        j["batch_size"] = o.train.batch_size;
        j["loss"] = loss_name(o.train.loss);
    }
    if (o.kind == ModelKind::Rbf) {
        j["prototypes_per_domain"] = o.prototypes_per_domain;
        j["clamp_prototypes"] = o.clamp_prototypes;
        j["rbf_width_centers"] = o.rbf_width_centers;
    }
    return j;
}

ordered_json training_json(const TrainReport& r, ModelKind kind)
{
    ordered_json j;
    j["input_paragraphs"] = r.input_paragraphs;
    j["fitting_paragraphs"] = r.fitting_paragraphs;
    j["weak_labeled"] = r.weak_labeled;
    ordered_json per_domain;
    for (Domain d : kRiskDomains) {
        per_domain[std::string(domain_name(d))] = r.per_domain[domain_index(d)];
    }
    j["weak_labeled_per_domain"] = per_domain;
    j["vocabulary"] = r.vocabulary;
    j["svd_rank"] = r.svd_rank;
    j["calibration_paragraphs"] = r.calibration_paragraphs;
    if (kind != ModelKind::Cosine) {
        j["initial_loss"] = r.history.initial_loss;
        j["final_loss"] = r.history.final_loss;
        j["epoch_loss"] = r.history.epoch_loss;
        j["steps"] = r.history.steps;
    }
    return j;
}

void write_bundle_contents(const fs::path& dir, const Pipeline& p, const BundleRecord& record)
{
    if (!p.lexicon || !p.tfidf || !p.svd) {
        throw ConfigError("cannot save a pipeline without lexicon, tfidf and svd stages");
    }
    ordered_json manifest;
    manifest["format"] = kFormatName;
    manifest["format_version"] = kBundleFormatVersion;
    manifest["model"] = model_kind_name(p.kind);
    ordered_json domains = ordered_json::array();
    for (Domain d : kRiskDomains) {
        domains.push_back(domain_name(d));
    }
    manifest["domains"] = domains;
    manifest["parameters"] = parameters_json(record.options);
    manifest["tfidf"] = ordered_json{{"corpus_size", p.tfidf->corpus_size()},
                                     {"vocabulary_size", p.tfidf->dimension()}};

    if (p.thresholds) {
        ordered_json t;
        t["alpha"] = p.thresholds->alpha;
        ordered_json per;
        for (Domain d : kRiskDomains) {
            const DomainThreshold& dt = (*p.thresholds)[d];
            per[std::string(domain_name(d))] =
                ordered_json{{"threshold", dt.threshold}, {"mean", dt.mean}, {"sigma", dt.sigma}};
        }
        t["domains"] = per;
        manifest["thresholds"] = t;
    }
    manifest["training"] = training_json(record.report, p.kind);

    ordered_json arrays = ordered_json::object();
    ArrayWriter writer(dir, arrays);
    const auto idf = p.tfidf->idf();
    writer.write("idf", idf.data(), {idf.size()});
    writer.write("svd_components", p.svd->components);
    writer.write("svd_singular_values", p.svd->singular_values);

    switch (p.kind) {
    case ModelKind::Cosine: {
        if (!p.cosine) {
            throw ConfigError("cosine pipeline has no megadocument vectors");
        }
        Eigen::MatrixXd m(static_cast<Eigen::Index>(kNumRiskDomains), p.svd->components.rows());
        for (std::size_t d = 0; d < kNumRiskDomains; ++d) {
            m.row(static_cast<Eigen::Index>(d)) = p.cosine->megadocs[d].transpose();
        }
        writer.write("megadoc_vectors", m);
        break;
    }
    case ModelKind::Mlp:
        if (!p.mlp) {
            throw ConfigError("mlp pipeline has no network");
        }
        manifest["mlp"] = ordered_json{{"input_dropout", p.mlp->input_dropout},
                                       {"hidden_dropout", p.mlp->hidden_dropout}};
        for (std::size_t i = 0; i < p.mlp->layers.size(); ++i) {
            writer.write("mlp_w" + std::to_string(i + 1), p.mlp->layers[i].weights);
            writer.write("mlp_b" + std::to_string(i + 1), p.mlp->layers[i].bias);
        }
        break;
    case ModelKind::Rbf:
        if (!p.rbf) {
            throw ConfigError("rbf pipeline has no network");
        }
        manifest["rbf"] = ordered_json{{"width", p.rbf->width}, {"input_dropout", p.rbf->input_dropout}};
        writer.write("rbf_prototypes", p.rbf->prototypes);
        writer.write("rbf_output_weights", p.rbf->output.weights);
        writer.write("rbf_output_bias", p.rbf->output.bias);
        break;
    }
    manifest["arrays"] = arrays;

    std::ostringstream vocab;
    const Vocabulary& v = p.tfidf->vocabulary();
    for (std::size_t i = 0; i < v.size(); ++i) {
        vocab << v.term(i) << '\t' << v.document_frequency(i) << '\n';
    }
    write_text_file(dir / "vocab.txt", vocab.str());
    write_text_file(dir / "lexicon.json", lexicon_to_json(*p.lexicon));
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

Vocabulary read_vocabulary(const fs::path& path)
{
    std::istringstream in(read_text_file(path));
    std::vector<std::string> terms;
    std::vector<std::size_t> df;
    std::string line;
    std::size_t number = 0;
    while (std::getline(in, line)) {
        ++number;
        const auto tab = line.rfind('\t');
        if (tab == std::string::npos) {
            throw DataError(path.string() + ":" + std::to_string(number) + ": expected term<TAB>df");
        }
        terms.push_back(line.substr(0, tab));
        try {
            df.push_back(std::stoul(line.substr(tab + 1)));
        } catch (const std::exception&) {
            throw DataError(path.string() + ":" + std::to_string(number) + ": invalid document frequency");
        }
    }
    return Vocabulary(std::move(terms), std::move(df));
}

Pipeline read_bundle(const fs::path& dir, const json& manifest)
{
    if (manifest.value("format", "") != kFormatName) {
        throw DataError(dir.string() + " is not a model bundle");
    }
    const int version = manifest.at("format_version").get<int>();
    if (version != kBundleFormatVersion) {
        throw DataError("bundle format version " + std::to_string(version) + " is not supported (expected "
                        + std::to_string(kBundleFormatVersion) + ")");
    }
    const auto kind = parse_model_kind(manifest.at("model").get<std::string>());
    if (!kind) {
        throw DataError("bundle names an unknown model kind");
    }
    const auto domains = manifest.at("domains").get<std::vector<std::string>>();
    if (domains.size() != kNumRiskDomains) {
        throw DataError("bundle domain order has the wrong length");
    }
    for (std::size_t i = 0; i < kNumRiskDomains; ++i) {
        if (domains[i] != domain_name(kRiskDomains[i])) {
            throw DataError("bundle domain order differs from this build");
        }
    }

    Pipeline p;
    p.kind = *kind;
    p.set_lexicon(read_lexicon(dir / "lexicon.json"));

    Vocabulary vocab = read_vocabulary(dir / "vocab.txt");
    const std::size_t v = vocab.size();
    const auto corpus_size = manifest.at("tfidf").at("corpus_size").get<std::size_t>();
    p.tfidf = TfidfModel(std::move(vocab), corpus_size);

    const ArrayReader reader(dir, manifest.at("arrays"));
    const Eigen::VectorXd idf = reader.vector("idf", v);
    const auto expected_idf = p.tfidf->idf();
    for (std::size_t i = 0; i < v; ++i) {
        if (idf(static_cast<Eigen::Index>(i)) != expected_idf[i]) {
            throw DataError("bundle idf disagrees with vocab.txt document frequencies");
        }
    }

    SvdProjection svd;
    svd.components = reader.matrix("svd_components", std::nullopt, v);
    const auto k = static_cast<std::size_t>(svd.components.rows());
    svd.singular_values = reader.vector("svd_singular_values", k);
    p.svd = std::move(svd);

    switch (p.kind) {
    case ModelKind::Cosine: {
        const Eigen::MatrixXd m = reader.matrix("megadoc_vectors", kNumRiskDomains, k);
        CosineScorer scorer;
        for (std::size_t d = 0; d < kNumRiskDomains; ++d) {
            scorer.megadocs[d] = m.row(static_cast<Eigen::Index>(d)).transpose();
        }
        p.cosine = std::move(scorer);
        break;
    }
    case ModelKind::Mlp: {
        MlpModel mlp;
        const json& meta = manifest.at("mlp");
        mlp.input_dropout = meta.at("input_dropout").get<double>();
        mlp.hidden_dropout = meta.at("hidden_dropout").get<double>();
        const std::array<std::size_t, 3> outs{kMlpHidden, kMlpHidden, kNumRiskDomains};
        std::size_t ins = k;
        for (std::size_t i = 0; i < 3; ++i) {
            mlp.layers[i].weights = reader.matrix("mlp_w" + std::to_string(i + 1), outs[i], ins);
            mlp.layers[i].bias = reader.vector("mlp_b" + std::to_string(i + 1), outs[i]);
            ins = outs[i];
        }
        mlp.validate();
        p.mlp = std::move(mlp);
        break;
    }
    case ModelKind::Rbf: {
        RbfModel rbf;
        const json& meta = manifest.at("rbf");
        rbf.width = meta.at("width").get<double>();
        rbf.input_dropout = meta.at("input_dropout").get<double>();
        rbf.prototypes = reader.matrix("rbf_prototypes", std::nullopt, k);
        const auto h = static_cast<std::size_t>(rbf.prototypes.rows());
        rbf.output.weights = reader.matrix("rbf_output_weights", kNumRiskDomains, h);
        rbf.output.bias = reader.vector("rbf_output_bias", kNumRiskDomains);
        rbf.validate();
        p.rbf = std::move(rbf);
        break;
    }
    }

    if (manifest.contains("thresholds")) {
        const json& t = manifest.at("thresholds");
        ThresholdSet set;
        set.alpha = t.at("alpha").get<double>();
        for (Domain d : kRiskDomains) {
            const json& e = t.at("domains").at(std::string(domain_name(d)));
            DomainThreshold& dt = set.domains[domain_index(d)];
            dt.threshold = e.at("threshold").get<double>();
            dt.mean = e.at("mean").get<double>();
            dt.sigma = e.at("sigma").get<double>();
        }
        p.thresholds = set;
    }
    return p;
}

}  // namespace

void save_bundle(const fs::path& dir_in, const Pipeline& pipeline, const BundleRecord& record)
{
    fs::path dir = dir_in;
    if (dir.filename().empty()) {
        dir = dir.parent_path();
    }
    if (dir.empty()) {
        throw ConfigError("bundle path is empty");
    }
    const fs::path parent = dir.has_parent_path() ? dir.parent_path() : fs::path(".");
    const fs::path staging = parent / ("." + dir.filename().string() + ".partial");
    std::error_code ec;
    try {
        fs::create_directories(parent);
        fs::remove_all(staging);
        fs::create_directory(staging);
        write_bundle_contents(staging, pipeline, record);
        fs::remove_all(dir);
        fs::rename(staging, dir);
    } catch (const fs::filesystem_error& e) {
        fs::remove_all(staging, ec);
        throw DataError("cannot write bundle " + dir.string() + ": " + e.code().message());
    } catch (...) {
        fs::remove_all(staging, ec);
        throw;
    }
}

Pipeline load_bundle(const fs::path& dir)
{
    const fs::path manifest_path = dir / "manifest.json";
    json manifest;
    try {
        manifest = json::parse(read_text_file(manifest_path));
    } catch (const json::exception& e) {
        throw DataError(manifest_path.string() + ": invalid JSON: " + e.what());
    }
    try {
        return read_bundle(dir, manifest);
    } catch (const json::exception& e) {
        throw DataError(manifest_path.string() + ": " + e.what());
    }
}

}  // namespace psyrisk
