#include "psyrisk/networks/adam.hpp"

#include <cmath>
#include <string>

#include "psyrisk/errors.hpp"

namespace psyrisk {

AdamState::AdamState(std::size_t parameter_count, AdamConfig config)
    : m_config(config), m_m(parameter_count, 0.0), m_v(parameter_count, 0.0)
{
    if (!(config.learning_rate > 0.0) || !(config.beta1 >= 0.0 && config.beta1 < 1.0)
        || !(config.beta2 >= 0.0 && config.beta2 < 1.0) || !(config.epsilon > 0.0)) {
        throw ConfigError("Adam hyperparameters out of range");
    }
}

void AdamState::step(std::span<double> params, std::span<const double> grads)
{
    if (params.size() != m_m.size() || grads.size() != m_m.size()) {
        throw DataError("Adam step expects " + std::to_string(m_m.size()) + " parameters, got "
                        + std::to_string(params.size()) + " parameters and "
                        + std::to_string(grads.size()) + " gradients");
    }
    for (std::size_t i = 0; i < grads.size(); ++i) {
        if (!std::isfinite(grads[i])) {
            throw NumericalError("non-finite gradient at parameter " + std::to_string(i));
        }
    }
    ++m_t;
    const double b1 = m_config.beta1;
    const double b2 = m_config.beta2;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(m_t));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(m_t));
    for (std::size_t i = 0; i < params.size(); ++i) {
        const double g = grads[i];
        m_m[i] = b1 * m_m[i] + (1.0 - b1) * g;
        m_v[i] = b2 * m_v[i] + (1.0 - b2) * g * g;
        const double m_hat = m_m[i] / c1;
        const double v_hat = m_v[i] / c2;
        params[i] -= m_config.learning_rate * m_hat / (std::sqrt(v_hat) + m_config.epsilon);
    }
}

}  // namespace psyrisk
