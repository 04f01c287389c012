#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace psyrisk {

struct AdamConfig {
    double learning_rate = 0.001;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

/// Moment accumulators for a flat parameter vector.
class AdamState {
  public:
    AdamState() = default;
    AdamState(std::size_t parameter_count, AdamConfig config = {});

    std::size_t timestep() const noexcept { return m_t; }
    std::size_t size() const noexcept { return m_m.size(); }
    const AdamConfig& config() const noexcept { return m_config; }
    std::span<const double> first_moment() const noexcept { return m_m; }
    std::span<const double> second_moment() const noexcept { return m_v; }

    /// Bias-corrected update in place. Throws DataError when the spans do
    /// not match the state size and NumericalError on a non-finite gradient;
    /// on error neither params nor state change.
    void step(std::span<double> params, std::span<const double> grads);

  private:
    AdamConfig m_config;
    std::vector<double> m_m;
    std::vector<double> m_v;
    std::size_t m_t = 0;
};

inline void adam_step(AdamState& state, std::span<double> params, std::span<const double> grads)
{
    state.step(params, grads);
}

}  // namespace psyrisk
