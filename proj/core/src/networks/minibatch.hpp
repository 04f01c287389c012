#pragma once

#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include <spdlog/spdlog.h>

#include "psyrisk/errors.hpp"
#include "psyrisk/networks/adam.hpp"
#include "psyrisk/networks/mlp.hpp"
#include "psyrisk/random.hpp"

namespace psyrisk::detail {

inline Eigen::MatrixXd gather_rows(const Eigen::MatrixXd& m, const std::vector<std::size_t>& rows)
{
    Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), m.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Eigen::Index>(i)) = m.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
}

/// Shuffled minibatch Adam over `params`. `step_loss(batch_rows, rng,
/// grad)` returns the batch loss and fills the gradient.
template <typename StepLoss>
void minibatch_adam(std::string_view name, std::size_t samples, const TrainConfig& config,
                    std::vector<double>& params, StepLoss&& step_loss, TrainHistory& history)
{
    Rng order_rng(mix_seed(config.seed, 2));
    Rng dropout_rng(mix_seed(config.seed, 3));
    AdamState adam(params.size());
    std::vector<std::size_t> order(samples);
    std::vector<double> grad(params.size());

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        std::iota(order.begin(), order.end(), std::size_t{0});
        order_rng.shuffle(order);
        double loss_sum = 0.0;
        std::size_t batches = 0;
        for (std::size_t start = 0; start < samples; start += config.batch_size) {
            const std::size_t stop = std::min(samples, start + config.batch_size);
            const std::vector<std::size_t> batch(order.begin() + static_cast<std::ptrdiff_t>(start),
                                                 order.begin() + static_cast<std::ptrdiff_t>(stop));
            const double loss = step_loss(batch, dropout_rng, grad);
            if (!std::isfinite(loss)) {
                throw NumericalError(std::string(name) + " training loss became non-finite at epoch "
                                     + std::to_string(epoch + 1) + ", batch "
                                     + std::to_string(batches + 1));
            }
            adam.step(params, grad);
            loss_sum += loss;
            ++batches;
            ++history.steps;
        }
        history.epoch_loss.push_back(loss_sum / static_cast<double>(batches));
        spdlog::info("{} epoch {}/{} loss {:.6f}", name, epoch + 1, config.epochs,
                     history.epoch_loss.back());
    }
}

}  // namespace psyrisk::detail
