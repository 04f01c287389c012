#include "psyrisk/networks/rbf.hpp"

#include <cmath>
#include <string>

#include <spdlog/spdlog.h>

#include "minibatch.hpp"
#include "psyrisk/errors.hpp"
#include "psyrisk/networks/kmeans.hpp"

namespace psyrisk {

void RbfModel::validate() const
{
    if (prototypes.rows() == 0 || prototypes.cols() == 0) {
        throw DataError("RBF model has no prototypes");
    }
    if (static_cast<std::size_t>(output.weights.rows()) != kNumRiskDomains
        || output.weights.cols() != prototypes.rows() || output.bias.size() != output.weights.rows()) {
        throw DataError("RBF output layer must be " + std::to_string(kNumRiskDomains) + " x "
                        + std::to_string(prototypes.rows()));
    }
    if (!(width > 0.0) || !std::isfinite(width)) {
        throw NumericalError("RBF width must be positive and finite");
    }
    if (!prototypes.allFinite() || !output.weights.allFinite() || !output.bias.allFinite()) {
        throw NumericalError("RBF model has non-finite parameters");
    }
}

Eigen::MatrixXd build_rbf_prototypes(const DomainVectors& vectors, std::size_t per_domain_k,
                                     std::uint64_t seed, bool clamp)
{
    if (per_domain_k == 0) {
        throw ConfigError("prototypes per domain must be at least 1");
    }
    Eigen::Index dim = -1;
    Eigen::Index total = 0;
    for (Domain d : kRiskDomains) {
        const auto& m = vectors[domain_index(d)];
        const auto n = static_cast<std::size_t>(m.rows());
        if (n == 0) {
            throw DataError("no training vectors for domain " + std::string(domain_name(d)));
        }
        if (dim >= 0 && m.cols() != dim) {
            throw DataError("prototype inputs differ in dimension for domain "
                            + std::string(domain_name(d)));
        }
        dim = m.cols();
        if (n < per_domain_k && !clamp) {
            throw DataError("domain " + std::string(domain_name(d)) + " has " + std::to_string(n)
                            + " training vectors, fewer than " + std::to_string(per_domain_k)
                            + " prototypes");
        }
        total += static_cast<Eigen::Index>(std::min(n, per_domain_k));
    }

    Eigen::MatrixXd prototypes(total, dim);
    Eigen::Index row = 0;
    for (Domain d : kRiskDomains) {
        const auto& m = vectors[domain_index(d)];
        const auto n = static_cast<std::size_t>(m.rows());
        if (n < per_domain_k) {
            spdlog::warn("domain {} has {} training vectors; using all of them as prototypes",
                         domain_name(d), n);
            prototypes.middleRows(row, m.rows()) = m;
            row += m.rows();
            continue;
        }
        const KMeansResult km = kmeans(m, per_domain_k, mix_seed(seed, domain_index(d)));
        prototypes.middleRows(row, km.centroids.rows()) = km.centroids;
        row += km.centroids.rows();
    }
    return prototypes;
}

double compute_rbf_width(const Eigen::MatrixXd& prototypes, std::size_t centers)
{
    const Eigen::Index h = prototypes.rows();
    if (h < 2) {
        throw DataError("RBF width needs at least two prototypes");
    }
    double max_sq = 0.0;
    for (Eigen::Index i = 0; i < h; ++i) {
        for (Eigen::Index j = i + 1; j < h; ++j) {
            max_sq = std::max(max_sq, (prototypes.row(i) - prototypes.row(j)).squaredNorm());
        }
    }
    if (max_sq == 0.0) {
        throw NumericalError("all RBF prototypes coincide; width would be zero");
    }
    const auto m = centers == 0 ? static_cast<double>(h) : static_cast<double>(centers);
    return std::sqrt(max_sq) / std::sqrt(2.0 * m);
}

Eigen::MatrixXd rbf_hidden(const RbfModel& model, const Eigen::MatrixXd& inputs)
{
    if (inputs.cols() != model.prototypes.cols()) {
        throw DataError("RBF expects input dimension " + std::to_string(model.prototypes.cols())
                        + ", got " + std::to_string(inputs.cols()));
    }
    const double denom = 2.0 * model.width * model.width;
    Eigen::MatrixXd h(inputs.rows(), model.prototypes.rows());
    for (Eigen::Index i = 0; i < inputs.rows(); ++i) {
        for (Eigen::Index j = 0; j < model.prototypes.rows(); ++j) {
            h(i, j) = std::exp(-(inputs.row(i) - model.prototypes.row(j)).squaredNorm() / denom);
        }
    }
    return h;
}

Eigen::MatrixXd rbf_forward_batch(const RbfModel& model, const Eigen::MatrixXd& inputs)
{
    Eigen::MatrixXd out = rbf_hidden(model, inputs) * model.output.weights.transpose();
    out.rowwise() += model.output.bias.transpose();
    return out;
}

DomainScores rbf_forward(const RbfModel& model, const DocVector& x)
{
    const Eigen::MatrixXd out = rbf_forward_batch(model, x.transpose());
    DomainScores scores{};
    for (std::size_t c = 0; c < kNumRiskDomains; ++c) {
        scores[c] = out(0, static_cast<Eigen::Index>(c));
    }
    return scores;
}

std::vector<double> pack_output_parameters(const RbfModel& model)
{
    std::vector<double> flat(model.output.parameter_count());
    std::copy_n(model.output.weights.data(), model.output.weights.size(), flat.begin());
    std::copy_n(model.output.bias.data(), model.output.bias.size(),
                flat.begin() + model.output.weights.size());
    return flat;
}

void unpack_output_parameters(RbfModel& model, const std::vector<double>& flat)
{
    if (flat.size() != model.output.parameter_count()) {
        throw DataError("RBF output parameter vector has " + std::to_string(flat.size())
                        + " entries, expected " + std::to_string(model.output.parameter_count()));
    }
    std::copy_n(flat.begin(), model.output.weights.size(), model.output.weights.data());
    std::copy_n(flat.begin() + model.output.weights.size(), model.output.bias.size(),
                model.output.bias.data());
}

double rbf_loss_and_gradient(const RbfModel& model, const Eigen::MatrixXd& inputs,
                             const Eigen::MatrixXd& targets, Rng* rng,
                             std::vector<double>* gradient)
{
    Eigen::MatrixXd x = inputs;
    if (rng != nullptr) {
        apply_dropout(x, model.input_dropout, *rng);
    }
    const Eigen::MatrixXd h = rbf_hidden(model, x);
    Eigen::MatrixXd z = h * model.output.weights.transpose();
    z.rowwise() += model.output.bias.transpose();
    Eigen::MatrixXd dz;
    const double value = output_loss(z, targets, LossKind::MeanSquaredError, OutputActivation::Linear,
                                     gradient != nullptr ? &dz : nullptr);
    if (gradient != nullptr) {
        const Eigen::MatrixXd dw = dz.transpose() * h;
        const Eigen::VectorXd db = dz.colwise().sum().transpose();
        gradient->resize(model.output.parameter_count());
        std::copy_n(dw.data(), dw.size(), gradient->begin());
        std::copy_n(db.data(), db.size(), gradient->begin() + dw.size());
    }
    return value;
}

RbfModel train_rbf(RbfModel model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                   const TrainConfig& config, TrainHistory* history)
{
    config.validate();
    if (config.loss != LossKind::MeanSquaredError) {
        throw ConfigError("RBF training supports only mean_squared_error");
    }
    if (inputs.rows() == 0) {
        throw DataError("RBF training data is empty");
    }
    if (targets.rows() != inputs.rows() || static_cast<std::size_t>(targets.cols()) != kNumRiskDomains) {
        throw DataError("RBF targets must be N x " + std::to_string(kNumRiskDomains));
    }
    Rng init_rng(mix_seed(config.seed, 1));
    model.output = glorot_layer(model.hidden(), kNumRiskDomains, init_rng);
    model.validate();

    TrainHistory local;
    TrainHistory& h = history != nullptr ? *history : local;
    h = TrainHistory{};
    h.initial_loss = rbf_loss_and_gradient(model, inputs, targets, nullptr, nullptr);

    std::vector<double> params = pack_output_parameters(model);
    detail::minibatch_adam(
        "rbf", static_cast<std::size_t>(inputs.rows()), config, params,
        [&](const std::vector<std::size_t>& rows, Rng& rng, std::vector<double>& grad) {
            unpack_output_parameters(model, params);
            return rbf_loss_and_gradient(model, detail::gather_rows(inputs, rows),
                                         detail::gather_rows(targets, rows), &rng, &grad);
        },
        h);
    unpack_output_parameters(model, params);
    h.final_loss = rbf_loss_and_gradient(model, inputs, targets, nullptr, nullptr);
    model.validate();
    return model;
}

}  // namespace psyrisk
