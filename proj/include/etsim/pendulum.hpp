#pragma once

#include "etsim/simulate.hpp"

#include <Eigen/Dense>

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace etsim {

/// Linearized cart-pendulum in physical and modal coordinates. Modes are
/// ordered by ascending eigenvalue real part, so the single unstable mode is
/// always last (index 3) and the zero eigenvalue of the cart position sits
/// third.
struct PendulumModel {
    Eigen::Matrix4d A;
    Eigen::Vector4d B;
    Eigen::RowVector4d k;    ///< stabilizing state feedback, u = -k s
    Eigen::Vector4d eigvals; ///< ascending real parts
    Eigen::Matrix4d P;       ///< eigenvector columns, unit norm
    Eigen::Matrix4d Pinv;
    Eigen::Matrix4d Atil;    ///< diag(eigvals)
    Eigen::Vector4d Btil;    ///< Pinv * B
    Eigen::RowVector4d ktil; ///< k * P
};

/// Eigendecomposition of a 4x4 state matrix with distinct real eigenvalues;
/// repeated or complex spectra throw std::invalid_argument. Columns are
/// unit-norm with the largest-magnitude entry positive, so an already
/// diagonal matrix (ascending) comes back with P = I.
PendulumModel diagonalize(const Eigen::Matrix4d& A, const Eigen::Vector4d& B,
                          const Eigen::RowVector4d& k);

/// The cart-pendulum of the case study: pendulum mass 0.2 kg, cart mass
/// 0.5 kg, damping 0.1 N/m/s, length 0.3 m, inertia 0.006 kg m^2, gravity
/// 9.8 m/s^2, with the quadratic-regulator gain for identity weights.
PendulumModel cart_pole_model();

/// Worst-case bound on the unstable mode's disturbance when every physical
/// component is bounded by M: M * sum_j |Pinv(last row, j)|.
double transformed_disturbance_bound(const Eigen::Matrix4d& P, double M_component);

/// Per-mode worst-case bounds, same row-sum construction for every mode.
Eigen::Vector4d modal_disturbance_bounds(const Eigen::Matrix4d& P, double M_component);

/// How the disturbance bound M is interpreted for the 4-state loop.
enum class BoundMode {
    per_mode, ///< M bounds each modal component; the mode-4 design uses M directly
    physical, ///< M bounds each physical component; modal bounds via row sums of Pinv
};

/// The three case-study settings: (a) no disturbance, delay bound = one
/// step; (b) disturbance, delay bound = one step; (c) disturbance, delay
/// bound 0.1 s.
enum class Scenario { a, b, c };

struct PendulumOverrides {
    std::optional<double> M, gamma, T, h, rho0, b;
    std::optional<BoundMode> bound_mode;
    std::optional<DisturbanceKind> disturbance;
    std::optional<DelayKind> delay_kind;
    std::optional<std::uint64_t> delay_seed, disturbance_seed;
};

/// Fully resolved 4-state run configuration.
struct PendulumConfig {
    Scenario scenario = Scenario::a;
    double M = 0.0;       ///< disturbance magnitude bound (see bound_mode)
    double gamma = 0.005;
    double T = 5.0;
    double h = 0.005;
    double rho0 = 0.9;
    double b = 1.0001;
    BoundMode bound_mode = BoundMode::per_mode;
    DisturbanceKind disturbance = DisturbanceKind::zero;
    DelayKind delay_kind = DelayKind::uniform_random;
    std::uint64_t delay_seed = 101;
    std::uint64_t disturbance_seed = 202;
};

/// Applies scenario defaults and overrides; forces the zero disturbance kind
/// when the effective bound is zero so degenerate overrides reduce exactly.
PendulumConfig resolve_scenario(Scenario s, const PendulumOverrides& ov = {});

struct PendulumRow {
    double t;
    std::array<double, 4> s_modal;
    std::array<double, 4> s_phys;
    double xhat4, z4, u, w4;
    bool trigger, reception;
};

/// Finite-horizon practical-stability certificate for the exact discrete
/// 4x4 closed loop, componentwise in modal and physical coordinates.
struct ModalCertificate {
    std::array<double, 4> kappa_modal;
    std::array<double, 4> kappa_phys;
    double T0 = 0.0;
    double spectral_radius = 0.0; ///< of the discrete closed-loop matrix
};

struct PendulumRun {
    PendulumModel model;
    PendulumConfig config;
    TriggerDesign design;
    double M_design = 0.0; ///< mode-4 disturbance bound fed to the design
    std::vector<PendulumRow> rows;
    SimTrace mode4;        ///< scalar view of the unstable mode (rows + events)
    RateStats rates;
    ModalCertificate cert;
};

/// Event-triggered loop on the unstable mode with the other three estimated
/// open loop under the shared input. Runtime invariants are enforced as in
/// run_scalar, plus the componentwise modal/physical state certificates.
PendulumRun run_pendulum(const PendulumConfig& cfg);
PendulumRun run_pendulum(Scenario s, const PendulumOverrides& ov = {});

} // namespace etsim
