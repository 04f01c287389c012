#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "psyrisk/domain.hpp"
#include "psyrisk/random.hpp"
#include "psyrisk/vector_space/svd.hpp"

namespace psyrisk {

/// y = W x + b, with W stored out x in.
struct DenseLayer {
    Eigen::MatrixXd weights;
    Eigen::VectorXd bias;

    std::size_t inputs() const noexcept { return static_cast<std::size_t>(weights.cols()); }
    std::size_t outputs() const noexcept { return static_cast<std::size_t>(weights.rows()); }
    std::size_t parameter_count() const noexcept
    {
        return static_cast<std::size_t>(weights.size() + bias.size());
    }
};

/// Glorot-uniform weights, zero bias.
DenseLayer glorot_layer(std::size_t inputs, std::size_t outputs, Rng& rng);

inline constexpr std::size_t kMlpHidden = 100;
inline constexpr double kMlpInputDropout = 0.2;
inline constexpr double kMlpHiddenDropout = 0.5;

/// input -> [affine 100, ReLU, dropout 0.2] -> [affine 100, ReLU, dropout 0.5]
///       -> [affine 7, sigmoid]
struct MlpModel {
    std::array<DenseLayer, 3> layers;
    double input_dropout = kMlpInputDropout;
    double hidden_dropout = kMlpHiddenDropout;

    std::size_t input_dimension() const noexcept { return layers[0].inputs(); }
    std::size_t parameter_count() const noexcept;

    /// Throws DataError when shapes do not chain to 7 outputs and
    /// NumericalError on non-finite parameters.
    void validate() const;
};

MlpModel init_mlp(std::size_t input_dimension, std::uint64_t seed);

enum class Mode { Train, Infer };

enum class LossKind {
    CategoricalCrossEntropy,            ///< -sum y_c ln p_c on raw sigmoid outputs
    NormalizedCategoricalCrossEntropy,  ///< same with p_c / sum_j p_j
    BinaryCrossEntropy,                 ///< summed over the outputs
    MeanSquaredError,                   ///< averaged over the outputs
};

std::string_view loss_name(LossKind kind) noexcept;
std::optional<LossKind> parse_loss(std::string_view name) noexcept;

enum class OutputActivation { Sigmoid, Linear };

/// Per-sample loss for output pre-activations z (rows = samples), averaged
/// over the batch, plus dL/dz when `grad` is non-null.
double output_loss(const Eigen::MatrixXd& z, const Eigen::MatrixXd& targets, LossKind loss,
                   OutputActivation activation, Eigen::MatrixXd* grad);

/// Inverted dropout: zeroes each entry with probability `rate` and scales
/// survivors by 1 / (1 - rate). Returns the mask that was applied.
Eigen::MatrixXd apply_dropout(Eigen::MatrixXd& values, double rate, Rng& rng);

/// Scores for each row of `inputs`. Train mode draws dropout masks from
/// `rng`, which must then be non-null. Throws DataError on a dimension
/// mismatch.
Eigen::MatrixXd mlp_forward_batch(const MlpModel& model, const Eigen::MatrixXd& inputs, Mode mode,
                                  Rng* rng = nullptr);

DomainScores mlp_forward(const MlpModel& model, const DocVector& x, Mode mode = Mode::Infer,
                         Rng* rng = nullptr);

/// Flat parameter vector: layer by layer, weights (column-major) then bias.
std::vector<double> pack_parameters(const MlpModel& model);
void unpack_parameters(MlpModel& model, const std::vector<double>& flat);

/// Batch loss and its gradient in pack_parameters layout. With `rng` null
/// dropout is off.
double mlp_loss_and_gradient(const MlpModel& model, const Eigen::MatrixXd& inputs,
                             const Eigen::MatrixXd& targets, LossKind loss, Rng* rng,
                             std::vector<double>* gradient);

struct TrainConfig {
    std::size_t epochs = 30;
    std::size_t batch_size = 128;
    LossKind loss = LossKind::CategoricalCrossEntropy;
    std::uint64_t seed = 0;

    /// 30 epochs, binary cross entropy: each sigmoid is an independent
    /// membership score, which keeps unseen inputs near zero.
    static TrainConfig mlp_defaults();
    static TrainConfig rbf_defaults();

    /// Throws ConfigError for zero epochs or batch size.
    void validate() const;
};

struct TrainHistory {
    double initial_loss = 0.0;        ///< full-data loss before training, dropout off
    std::vector<double> epoch_loss;   ///< mean minibatch loss per epoch, dropout on
    double final_loss = 0.0;          ///< full-data loss after training, dropout off
    std::size_t steps = 0;
};

/// One-hot target rows for the given risk domains.
Eigen::MatrixXd one_hot_targets(const std::vector<Domain>& labels);

/// Minibatch Adam for exactly epochs * ceil(N / batch_size) steps. Inputs
/// are rows. Throws DataError on empty or mismatched data and
/// NumericalError on a non-finite loss.
MlpModel train_mlp(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                   const TrainConfig& config, TrainHistory* history = nullptr);

}  // namespace psyrisk
