#include "etsim/plant.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace etsim {

void PlantParams::validate() const {
    if (!(A > 0.0))
        throw std::invalid_argument("PlantParams: A must be > 0, got " + std::to_string(A));
    if (!(M >= 0.0))
        throw std::invalid_argument("PlantParams: M must be >= 0, got " + std::to_string(M));
    if (!(L > 0.0))
        throw std::invalid_argument("PlantParams: L must be > 0, got " + std::to_string(L));
}

ControllerGain make_gain(const PlantParams& p, double K) {
    p.validate();
    const double alpha = p.B * K - p.A;
    if (!(alpha > 0.0))
        throw std::invalid_argument("ControllerGain: B*K - A must be > 0, got alpha = " +
                                    std::to_string(alpha));
    return ControllerGain{K, alpha};
}

ControllerGain pole_mirror_gain(const PlantParams& p) {
    p.validate();
    if (p.B == 0.0)
        throw std::invalid_argument("pole_mirror_gain: B must be nonzero");
    return make_gain(p, 2.0 * p.A / p.B);
}

double hold_weight(double A, double h) {
    return std::expm1(A * h) / A;
}

double step_plant_exact(double x, double u, double w, double h, const PlantParams& p) {
    if (!(h > 0.0))
        throw std::invalid_argument("step_plant_exact: step length must be > 0");
    if (std::abs(w) > p.M)
        throw std::invalid_argument("step_plant_exact: |w| exceeds the disturbance bound M");
    return std::exp(p.A * h) * x + hold_weight(p.A, h) * (p.B * u + w);
}

double step_estimator(double xhat, double u, double h, const PlantParams& p) {
    if (!(h > 0.0))
        throw std::invalid_argument("step_estimator: step length must be > 0");
    return std::exp(p.A * h) * xhat + hold_weight(p.A, h) * (p.B * u);
}

double z_growth_bound(double z0, double tau, const PlantParams& p) {
    if (tau < 0.0)
        throw std::invalid_argument("z_growth_bound: elapsed time must be >= 0");
    if (z0 < 0.0)
        throw std::invalid_argument("z_growth_bound: z0 must be >= 0");
    return z0 * std::exp(p.A * tau) + (p.M / p.A) * std::expm1(p.A * tau);
}

} // namespace etsim
