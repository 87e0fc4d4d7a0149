#pragma once

namespace etsim {

/// Constants of the scalar plant  xdot = A*x + B*u + w  with |w| <= M and
/// |x(0)| <= L. The scheme targets the unstable case, so A must be positive.
struct PlantParams {
    double A = 1.0; ///< open-loop growth rate [1/s], > 0
    double B = 1.0; ///< input gain, nonzero when actuation is required
    double M = 0.0; ///< disturbance magnitude bound, >= 0
    double L = 1.0; ///< initial-state magnitude bound, > 0

    /// Throws std::invalid_argument when a bound is out of range.
    void validate() const;
};

/// State feedback u = -K*xhat and the resulting closed-loop decay rate
/// alpha = B*K - A (> 0 for a stable loop).
struct ControllerGain {
    double K = 0.0;
    double alpha = 0.0;
};

/// Builds a gain and checks alpha > 0.
ControllerGain make_gain(const PlantParams& p, double K);

/// K = 2A/B, mirroring the open-loop pole to -A.
ControllerGain pole_mirror_gain(const PlantParams& p);

/// (e^{A h} - 1)/A, the zero-order-hold input weight over one step.
[[nodiscard]] double hold_weight(double A, double h);

/// Advances the plant exactly over one step of length h with u and w held
/// constant: returns e^{A h} x + hold_weight(A,h) * (B u + w).
[[nodiscard]] double step_plant_exact(double x, double u, double w, double h,
                                      const PlantParams& p);

/// Same map with w = 0; the controller-side estimate between receptions.
[[nodiscard]] double step_estimator(double xhat, double u, double h,
                                    const PlantParams& p);

/// Upper bound on |z| tau seconds after |z| = z0 with no reception in
/// between: z0 e^{A tau} + (M/A)(e^{A tau} - 1).
[[nodiscard]] double z_growth_bound(double z0, double tau, const PlantParams& p);

} // namespace etsim
