#include "psyrisk/networks/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "minibatch.hpp"
#include "psyrisk/errors.hpp"

namespace psyrisk {

namespace {

double softplus(double x)
{
    return std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
}

double sigmoid(double x)
{
    return 1.0 / (1.0 + std::exp(-x));
}

Eigen::MatrixXd affine(const Eigen::MatrixXd& inputs, const DenseLayer& layer)
{
    Eigen::MatrixXd z = inputs * layer.weights.transpose();
    z.rowwise() += layer.bias.transpose();
    return z;
}

Eigen::MatrixXd relu(const Eigen::MatrixXd& z)
{
    return z.cwiseMax(0.0);
}

Eigen::MatrixXd relu_grad(const Eigen::MatrixXd& z)
{
    return (z.array() > 0.0).cast<double>().matrix();
}

void check_input(const MlpModel& model, const Eigen::MatrixXd& inputs)
{
    if (static_cast<std::size_t>(inputs.cols()) != model.input_dimension()) {
        throw DataError("MLP expects input dimension " + std::to_string(model.input_dimension())
                        + ", got " + std::to_string(inputs.cols()));
    }
}

struct ForwardTrace {
    Eigen::MatrixXd z1, a1, mask1;
    Eigen::MatrixXd z2, a2, mask2;
    Eigen::MatrixXd z3;
};

ForwardTrace forward_trace(const MlpModel& model, const Eigen::MatrixXd& inputs, Rng* rng)
{
    ForwardTrace t;
    t.z1 = affine(inputs, model.layers[0]);
    t.a1 = relu(t.z1);
    if (rng != nullptr) {
        t.mask1 = apply_dropout(t.a1, model.input_dropout, *rng);
    }
    t.z2 = affine(t.a1, model.layers[1]);
    t.a2 = relu(t.z2);
    if (rng != nullptr) {
        t.mask2 = apply_dropout(t.a2, model.hidden_dropout, *rng);
    }
    t.z3 = affine(t.a2, model.layers[2]);
    return t;
}

void write_layer(const DenseLayer& layer, std::vector<double>& flat, std::size_t& pos)
{
    std::copy_n(layer.weights.data(), layer.weights.size(), flat.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += static_cast<std::size_t>(layer.weights.size());
    std::copy_n(layer.bias.data(), layer.bias.size(), flat.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += static_cast<std::size_t>(layer.bias.size());
}

void write_grad(const Eigen::MatrixXd& dw, const Eigen::VectorXd& db, std::vector<double>& flat,
                std::size_t& pos)
{
    std::copy_n(dw.data(), dw.size(), flat.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += static_cast<std::size_t>(dw.size());
    std::copy_n(db.data(), db.size(), flat.begin() + static_cast<std::ptrdiff_t>(pos));
    pos += static_cast<std::size_t>(db.size());
}

}  // namespace

DenseLayer glorot_layer(std::size_t inputs, std::size_t outputs, Rng& rng)
{
    const double limit = std::sqrt(6.0 / static_cast<double>(inputs + outputs));
    DenseLayer layer;
    layer.weights.resize(static_cast<Eigen::Index>(outputs), static_cast<Eigen::Index>(inputs));
    for (Eigen::Index j = 0; j < layer.weights.cols(); ++j) {
        for (Eigen::Index i = 0; i < layer.weights.rows(); ++i) {
            layer.weights(i, j) = rng.uniform(-limit, limit);
        }
    }
    layer.bias = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(outputs));
    return layer;
}

std::size_t MlpModel::parameter_count() const noexcept
{
    std::size_t n = 0;
    for (const auto& layer : layers) {
        n += layer.parameter_count();
    }
    return n;
}

void MlpModel::validate() const
{
    for (std::size_t i = 0; i < layers.size(); ++i) {
        const auto& layer = layers[i];
        if (layer.bias.size() != layer.weights.rows()) {
            throw DataError("MLP layer " + std::to_string(i + 1) + " bias does not match its weights");
        }
        if (i > 0 && layer.inputs() != layers[i - 1].outputs()) {
            throw DataError("MLP layer " + std::to_string(i + 1) + " does not chain to the previous layer");
        }
        if (!layer.weights.allFinite() || !layer.bias.allFinite()) {
            throw NumericalError("MLP layer " + std::to_string(i + 1) + " has non-finite parameters");
        }
    }
    if (layers[0].inputs() == 0 || layers[2].outputs() != kNumRiskDomains) {
        throw DataError("MLP must map a non-empty input to " + std::to_string(kNumRiskDomains)
                        + " outputs");
    }
    if (!(input_dropout >= 0.0 && input_dropout < 1.0)
        || !(hidden_dropout >= 0.0 && hidden_dropout < 1.0)) {
        throw DataError("MLP dropout rates must lie in [0, 1)");
    }
}

MlpModel init_mlp(std::size_t input_dimension, std::uint64_t seed)
{
    if (input_dimension == 0) {
        throw DataError("MLP input dimension must be positive");
    }
    Rng rng(seed);
    MlpModel model;
    model.layers[0] = glorot_layer(input_dimension, kMlpHidden, rng);
    model.layers[1] = glorot_layer(kMlpHidden, kMlpHidden, rng);
    model.layers[2] = glorot_layer(kMlpHidden, kNumRiskDomains, rng);
    return model;
}

std::string_view loss_name(LossKind kind) noexcept
{
    switch (kind) {
    case LossKind::CategoricalCrossEntropy: return "categorical_crossentropy";
    case LossKind::NormalizedCategoricalCrossEntropy: return "normalized_categorical_crossentropy";
    case LossKind::BinaryCrossEntropy: return "binary_crossentropy";
    case LossKind::MeanSquaredError: return "mean_squared_error";
    }
    return "";
}

std::optional<LossKind> parse_loss(std::string_view name) noexcept
{
    for (LossKind k : {LossKind::CategoricalCrossEntropy, LossKind::NormalizedCategoricalCrossEntropy,
                       LossKind::BinaryCrossEntropy, LossKind::MeanSquaredError}) {
        if (loss_name(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

double output_loss(const Eigen::MatrixXd& z, const Eigen::MatrixXd& targets, LossKind loss,
                   OutputActivation activation, Eigen::MatrixXd* grad)
{
    if (z.rows() != targets.rows() || z.cols() != targets.cols()) {
        throw DataError("loss targets do not match outputs");
    }
    if (z.rows() == 0) {
        throw DataError("loss over an empty batch");
    }
    if (activation == OutputActivation::Linear && loss != LossKind::MeanSquaredError) {
        throw ConfigError(std::string(loss_name(loss)) + " needs sigmoid outputs");
    }
    const auto batch = static_cast<double>(z.rows());
    const auto classes = static_cast<double>(z.cols());
    if (grad != nullptr) {
        grad->resize(z.rows(), z.cols());
    }
    double total = 0.0;
    for (Eigen::Index i = 0; i < z.rows(); ++i) {
        double y_sum = 0.0;
        double p_sum = 0.0;
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            y_sum += targets(i, c);
            p_sum += sigmoid(z(i, c));
        }
        for (Eigen::Index c = 0; c < z.cols(); ++c) {
            const double zc = z(i, c);
            const double y = targets(i, c);
            const double p = activation == OutputActivation::Sigmoid ? sigmoid(zc) : zc;
            double l = 0.0;
            double dz = 0.0;
            switch (loss) {
            case LossKind::CategoricalCrossEntropy:
                l = y * softplus(-zc);
                dz = -y * (1.0 - p);
                break;
            case LossKind::NormalizedCategoricalCrossEntropy:
                l = y * softplus(-zc);
                dz = -y * (1.0 - p) + y_sum * p * (1.0 - p) / p_sum;
                break;
            case LossKind::BinaryCrossEntropy:
                l = y * softplus(-zc) + (1.0 - y) * softplus(zc);
                dz = p - y;
                break;
            case LossKind::MeanSquaredError: {
                const double e = p - y;
                l = e * e / classes;
                const double slope = activation == OutputActivation::Sigmoid ? p * (1.0 - p) : 1.0;
                dz = 2.0 * e / classes * slope;
                break;
            }
            }
            total += l;
            if (grad != nullptr) {
                (*grad)(i, c) = dz / batch;
            }
        }
        if (loss == LossKind::NormalizedCategoricalCrossEntropy) {
            total += y_sum * std::log(p_sum);
        }
    }
    return total / batch;
}

Eigen::MatrixXd apply_dropout(Eigen::MatrixXd& values, double rate, Rng& rng)
{
    Eigen::MatrixXd mask(values.rows(), values.cols());
    if (rate <= 0.0) {
        mask.setOnes();
        return mask;
    }
    const double keep_scale = 1.0 / (1.0 - rate);
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
        for (Eigen::Index i = 0; i < values.rows(); ++i) {
            mask(i, j) = rng.uniform() < rate ? 0.0 : keep_scale;
        }
    }
    values.array() *= mask.array();
    return mask;
}

Eigen::MatrixXd mlp_forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs, Mode mode,
                                  Rng* rng)
{
    check_input(model, inputs);
    if (mode == Mode::Train && rng == nullptr) {
        throw ConfigError("MLP train-mode forward needs a random stream");
    }
    const ForwardTrace t = forward_trace(model, inputs, mode == Mode::Train ? rng : nullptr);
    return t.z3.unaryExpr([](double v) { return sigmoid(v); });
}

DomainScores mlp_forward(const MlpModel& model, const DocVector& x, Mode mode, Rng* rng)
{
    const Eigen::MatrixXd out = mlp_forward_batch(model, x.transpose(), mode, rng);
    DomainScores scores{};
    for (std::size_t c = 0; c < kNumRiskDomains; ++c) {
        scores[c] = out(0, static_cast<Eigen::Index>(c));
    }
    return scores;
}

std::vector<double> pack_parameters(const MlpModel& model)
{
    std::vector<double> flat(model.parameter_count());
    std::size_t pos = 0;
    for (const auto& layer : model.layers) {
        write_layer(layer, flat, pos);
    }
    return flat;
}

void unpack_parameters(MlpModel& model, const std::vector<double>& flat)
{
    if (flat.size() != model.parameter_count()) {
        throw DataError("MLP parameter vector has " + std::to_string(flat.size())
                        + " entries, expected " + std::to_string(model.parameter_count()));
    }
    std::size_t pos = 0;
    for (auto& layer : model.layers) {
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), layer.weights.size(),
                    layer.weights.data());
        pos += static_cast<std::size_t>(layer.weights.size());
        std::copy_n(flat.begin() + static_cast<std::ptrdiff_t>(pos), layer.bias.size(),
                    layer.bias.data());
        pos += static_cast<std::size_t>(layer.bias.size());
    }
}

double mlp_loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& inputs,
                             const Eigen::MatrixXd& targets, LossKind loss, Rng* rng,
                             std::vector<double>* gradient)
{
    check_input(model, inputs);
    const ForwardTrace t = forward_trace(model, inputs, rng);
    Eigen::MatrixXd dz3;
    const double value = output_loss(t.z3, targets, loss, OutputActivation::Sigmoid,
                                     gradient != nullptr ? &dz3 : nullptr);
    if (gradient == nullptr) {
        return value;
    }

    const Eigen::MatrixXd dw3 = dz3.transpose() * t.a2;
    const Eigen::VectorXd db3 = dz3.colwise().sum().transpose();
    Eigen::MatrixXd da2 = dz3 * model.layers[2].weights;
    if (rng != nullptr) {
        da2.array() *= t.mask2.array();
    }
    const Eigen::MatrixXd dz2 = da2.cwiseProduct(relu_grad(t.z2));
    const Eigen::MatrixXd dw2 = dz2.transpose() * t.a1;
    const Eigen::VectorXd db2 = dz2.colwise().sum().transpose();
    Eigen::MatrixXd da1 = dz2 * model.layers[1].weights;
    if (rng != nullptr) {
        da1.array() *= t.mask1.array();
    }
    const Eigen::MatrixXd dz1 = da1.cwiseProduct(relu_grad(t.z1));
    const Eigen::MatrixXd dw1 = dz1.transpose() * inputs;
    const Eigen::VectorXd db1 = dz1.colwise().sum().transpose();

    gradient->assign(model.parameter_count(), 0.0);
    std::size_t pos = 0;
    write_grad(dw1, db1, *gradient, pos);
    write_grad(dw2, db2, *gradient, pos);
    write_grad(dw3, db3, *gradient, pos);
    return value;
}

TrainConfig TrainConfig::mlp_defaults()
{
    TrainConfig c;
    c.loss = LossKind::BinaryCrossEntropy;
    return c;
}

TrainConfig TrainConfig::rbf_defaults()
{
    TrainConfig c;
    c.epochs = 50;
    c.loss = LossKind::MeanSquaredError;
    return c;
}

void TrainConfig::validate() const
{
    if (epochs == 0) {
        throw ConfigError("training needs at least one epoch");
    }
    if (batch_size == 0) {
        throw ConfigError("batch size must be at least 1");
    }
}

Eigen::MatrixXd one_hot_targets(const std::vector<Domain>& labels)
{
    Eigen::MatrixXd y = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(labels.size()),
                                              static_cast<Eigen::Index>(kNumRiskDomains));
    for (std::size_t i = 0; i < labels.size(); ++i) {
        if (!is_risk_domain(labels[i])) {
            throw DataError("training targets cannot use the Other label");
        }
        y(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(domain_index(labels[i]))) = 1.0;
    }
    return y;
}

MlpModel train_mlp(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                   const TrainConfig& config, TrainHistory* history)
{
    config.validate();
    if (inputs.rows() == 0) {
        throw DataError("MLP training data is empty");
    }
    if (targets.rows() != inputs.rows() || static_cast<std::size_t>(targets.cols()) != kNumRiskDomains) {
        throw DataError("MLP targets must be N x " + std::to_string(kNumRiskDomains));
    }
    MlpModel model = init_mlp(static_cast<std::size_t>(inputs.cols()), mix_seed(config.seed, 1));
    TrainHistory local;
    TrainHistory& h = history != nullptr ? *history : local;
    h = TrainHistory{};
    h.initial_loss = mlp_loss_and_gradient(model, inputs, targets, config.loss, nullptr, nullptr);

    std::vector<double> params = pack_parameters(model);
    detail::minibatch_adam(
        "mlp", static_cast<std::size_t>(inputs.rows()), config, params,
        [&](const std::vector<std::size_t>& rows, Rng& rng, std::vector<double>& grad) {
            unpack_parameters(model, params);
            return mlp_loss_and_gradient(model, detail::gather_rows(inputs, rows),
                                         detail::gather_rows(targets, rows), config.loss, &rng,
                                         &grad);
        },
        h);
    unpack_parameters(model, params);
    h.final_loss = mlp_loss_and_gradient(model, inputs, targets, config.loss, nullptr, nullptr);
    model.validate();
    return model;
}

}  // namespace psyrisk
