#include "hybridctl/model.hpp"

#include <cmath>
#include <stdexcept>

namespace hybridctl {

void SystemModel::validate() const {
    if (state_dim == 0) throw std::invalid_argument("SystemModel: state_dim must be positive");
    if (input_dim == 0) throw std::invalid_argument("SystemModel: input_dim must be positive");
    if (!drift) throw std::invalid_argument("SystemModel: drift is not set");
    if (!feedback_law) throw std::invalid_argument("SystemModel: feedback_law is not set");
    if (!impulse_law) throw std::invalid_argument("SystemModel: impulse_law is not set");
    if (input_gain.rows != state_dim || input_gain.cols != input_dim)
        throw std::invalid_argument("SystemModel: input_gain must be state_dim x input_dim");
    for (double d : delays)
        if (!(d >= 0.0)) throw std::invalid_argument("SystemModel: delays must be nonnegative");
}

SystemModel scalar_delay_model(double b, double k_gain, double r, double beta) {
    if (!(r >= 0.0)) throw std::invalid_argument("scalar_delay_model: delay r must be nonnegative");
    SystemModel m;
    m.state_dim = 1;
    m.input_dim = 1;
    if (r > 0.0) m.delays = {r};
    m.input_gain = Matrix::scalar(1.0);
    m.drift = [b, r](double, const HistoryWindow& w) -> Vec {
        const Vec xd = w.at_delay(r);
        return {b * xd[0]};
    };
    m.feedback_law = [k_gain](const Vec& x) -> Vec { return {k_gain * x[0]}; };
    m.impulse_law = [beta](const Vec& x) -> Vec { return {beta * x[0]}; };
    return m;
}

InitialFn constant_initial(const Vec& value) {
    return [value](double) { return value; };
}

void SolverConfig::validate(const SystemModel& model) const {
    if (!(dt > 0.0)) throw std::invalid_argument("SolverConfig: dt must be positive");
    if (!(tol_event > 0.0)) throw std::invalid_argument("SolverConfig: tol_event must be positive");
    if (!(horizon > 0.0)) throw std::invalid_argument("SolverConfig: horizon must be positive");
    const double dmin = model.min_positive_delay();
    if (dt > dmin)
        throw std::invalid_argument("SolverConfig: dt must not exceed the smallest positive delay");
}

void seed_history(HistoryBuffer& buffer, const InitialFn& phi, double t0, double tau, double dt) {
    if (tau > 0.0) {
        const auto steps = static_cast<std::size_t>(std::ceil(tau / dt - 1e-9));
        for (std::size_t k = 0; k < steps; ++k) {
            const double t = t0 - tau + static_cast<double>(k) * dt;
            if (t >= t0) break;
            buffer.append(t, phi(t - t0));
        }
    }
    buffer.append(t0, phi(0.0));
}

}  // namespace hybridctl
