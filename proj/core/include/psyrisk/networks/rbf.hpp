#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "psyrisk/domain.hpp"
#include "psyrisk/networks/mlp.hpp"

namespace psyrisk {

inline constexpr std::size_t kRbfPrototypesPerDomain = 50;
inline constexpr double kRbfInputDropout = 0.2;

/// Gaussian hidden layer over fixed prototypes followed by a linear
/// 7-output layer.
struct RbfModel {
    Eigen::MatrixXd prototypes;  ///< H x d, grouped by domain in domain order
    double width = 0.0;          ///< shared Gaussian width, > 0
    DenseLayer output;           ///< 7 x H
    double input_dropout = kRbfInputDropout;

    std::size_t hidden() const noexcept { return static_cast<std::size_t>(prototypes.rows()); }
    std::size_t input_dimension() const noexcept
    {
        return static_cast<std::size_t>(prototypes.cols());
    }

    /// Throws DataError on inconsistent shapes and NumericalError on a
    /// non-positive width or non-finite parameters.
    void validate() const;
};

/// Rows of `vectors` per risk domain, in domain order.
using DomainVectors = std::array<Eigen::MatrixXd, kNumRiskDomains>;

/// Independent k-means per domain, centroids stacked in domain order. A
/// domain with fewer than `per_domain_k` vectors is a DataError naming it,
/// unless `clamp` is set, in which case that domain contributes all of its
/// vectors as prototypes and a warning is logged.
Eigen::MatrixXd build_rbf_prototypes(const DomainVectors& vectors, std::size_t per_domain_k,
                                     std::uint64_t seed, bool clamp = false);

/// d_max / sqrt(2 M) with d_max the largest pairwise prototype distance and
/// M = `centers`, or the prototype count H when `centers` is 0. Throws
/// DataError with fewer than two prototypes and NumericalError when all
/// prototypes coincide.
double compute_rbf_width(const Eigen::MatrixXd& prototypes, std::size_t centers = 0);

/// exp(-|x - c_j|^2 / (2 width^2)) for each row x and prototype c_j.
Eigen::MatrixXd rbf_hidden(const RbfModel& model, const Eigen::MatrixXd& inputs);

/// Linear output scores per input row.
Eigen::MatrixXd rbf_forward_batch(const RbfModel& model, const Eigen::MatrixXd& inputs);
DomainScores rbf_forward(const RbfModel& model, const DocVector& x);

/// Output-layer parameters, weights (column-major) then bias.
std::vector<double> pack_output_parameters(const RbfModel& model);
void unpack_output_parameters(RbfModel& model, const std::vector<double>& flat);

/// Mean squared error over the batch and outputs, with the gradient for
/// the output layer in pack_output_parameters layout. With `rng` null no
/// input dropout is applied.
double rbf_loss_and_gradient(const RbfModel& model, const Eigen::MatrixXd& inputs,
                             const Eigen::MatrixXd& targets, Rng* rng,
                             std::vector<double>* gradient);

/// Trains only the output layer of `model` (prototypes and width fixed),
/// starting from a Glorot-initialized output layer. `config.loss` must be
/// mean squared error.
RbfModel train_rbf(RbfModel model, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                   const TrainConfig& config, TrainHistory* history = nullptr);

}  // namespace psyrisk
