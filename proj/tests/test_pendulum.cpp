#include <doctest.h>

#include "etsim/design.hpp"
#include "etsim/pendulum.hpp"

#include <cmath>

using namespace etsim;
using doctest::Approx;

namespace {

// The case-study state matrices as printed (rounded) rather than as derived
// from the physical constants.
Eigen::Matrix4d printed_A() {
    Eigen::Matrix4d A;
    A << 0, 1, 0, 0,
         0, -0.1818, 2.6730, 0,
         0, 0, 0, 1,
         0, -0.4545, 31.1800, 0;
    return A;
}

Eigen::Vector4d printed_B() { return {0, 1.8180, 0, 4.5450}; }
Eigen::RowVector4d printed_k() { return {-1.00, -2.04, 20.36, 3.93}; }

// Reference values in ascending eigenvalue order.
const double kEig[4] = {-5.6041, -0.1428, 0.0, 5.5651};
const double kBtil[4] = {-2.3865, 10.0979, 10.0000, 2.2513};
const double kKtil[4] = {-0.1295, 0.7422, -1.0000, 7.2624};

} // namespace

TEST_CASE("diagonalize: printed matrix reproduces the reference spectrum") {
    const PendulumModel m = diagonalize(printed_A(), printed_B(), printed_k());
    for (int i = 0; i < 4; ++i)
        CHECK(m.eigvals(i) == Approx(kEig[i]).epsilon(0).scale(1).margin(1e-3));
    // eigenbasis identity A P = P Atil
    CHECK((printed_A() * m.P - m.P * m.Atil).cwiseAbs().maxCoeff() < 1e-6);
    // input coupling magnitudes match the reference display
    for (int i = 0; i < 4; ++i)
        CHECK(std::abs(m.Btil(i)) == Approx(std::abs(kBtil[i])).margin(1e-3));
    CHECK((m.Pinv * printed_B() - m.Btil).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("diagonalize: ascending diagonal input comes back unchanged") {
    Eigen::Matrix4d A = Eigen::Vector4d(-2.0, -1.0, 0.5, 3.0).asDiagonal();
    const Eigen::Vector4d B(1, 2, 3, 4);
    const Eigen::RowVector4d k(1, 1, 1, 1);
    const PendulumModel m = diagonalize(A, B, k);
    CHECK((m.P - Eigen::Matrix4d::Identity()).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m.Btil - B).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((m.ktil - k).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("diagonalize: repeated or complex spectra are rejected") {
    Eigen::Matrix4d rep = Eigen::Vector4d(1, 1, 2, 3).asDiagonal();
    CHECK_THROWS_AS(diagonalize(rep, printed_B(), printed_k()), std::invalid_argument);
    Eigen::Matrix4d rot = Eigen::Matrix4d::Zero();
    rot(0, 1) = -1;
    rot(1, 0) = 1; // +/- i pair
    rot(2, 2) = 2;
    rot(3, 3) = 3;
    CHECK_THROWS_AS(diagonalize(rot, printed_B(), printed_k()), std::invalid_argument);
}

TEST_CASE("cart-pole model matches the reference displays to 1e-3") {
    const PendulumModel m = cart_pole_model();
    for (int i = 0; i < 4; ++i) {
        CHECK(m.eigvals(i) == Approx(kEig[i]).epsilon(0).scale(1).margin(1e-3));
        CHECK(m.Btil(i) == Approx(kBtil[i]).epsilon(0).scale(1).margin(1e-3));
        CHECK(m.ktil(i) == Approx(kKtil[i]).epsilon(0).scale(1).margin(1e-3));
    }
    CHECK((m.A * m.P - m.P * m.Atil).cwiseAbs().maxCoeff() < 1e-6);
    // the printed 2-decimal gain is the rounded version of the model's gain
    CHECK(std::abs(m.k(0) - (-1.00)) < 0.005);
    CHECK(std::abs(m.k(1) - (-2.04)) < 0.005);
    CHECK(std::abs(m.k(3) - 3.93) < 0.005);
}

TEST_CASE("transformed disturbance bound") {
    CHECK(transformed_disturbance_bound(Eigen::Matrix4d::Identity(), 0.3) ==
          Approx(0.3).epsilon(1e-14));
    const PendulumModel m = cart_pole_model();
    const double mt4 = transformed_disturbance_bound(m.P, 0.05);
    CHECK(mt4 >= 0.05); // unit columns make the inverse rows at least unit size
    CHECK(mt4 == Approx(0.169915).epsilon(1e-4));
    CHECK(transformed_disturbance_bound(m.P, 0.0) == 0.0);
    CHECK_THROWS_AS(transformed_disturbance_bound(Eigen::Matrix4d::Zero(), 0.1),
                    std::invalid_argument);
}

TEST_CASE("scenario designs reproduce the reported packet sizes") {
    CHECK(run_pendulum(Scenario::a).design.bits == 1);
    CHECK(run_pendulum(Scenario::b).design.bits == 1);
    const PendulumRun c = run_pendulum(Scenario::c);
    CHECK(c.design.bits == 4);
    for (const EventRow& e : c.mode4.events)
        CHECK(e.bits == 4);
    // closed-form integerized size disagrees for (c): 3 against 4
    PlantParams p4{c.model.eigvals(3), c.model.Btil(3), c.M_design, 1.0};
    CHECK(packet_size_paper(p4, c.design.J, 0.9, 1.0001, 0.1).bits == 3);
}

TEST_CASE("scenario runs hold every closed-loop guarantee") {
    for (Scenario s : {Scenario::a, Scenario::b, Scenario::c}) {
        const PendulumRun run = run_pendulum(s); // throws on any violation
        REQUIRE(run.mode4.trigger_count > 0);
        const double rho0J = run.design.rho0 * run.design.J;
        for (const TraceRow& r : run.mode4.rows)
            if (r.reception)
                CHECK(std::abs(r.z) <= rho0J + 1e-9 * run.design.J);
        CHECK(run.cert.T0 < run.config.T);
        CHECK(run.cert.spectral_radius < 1.0);
        for (const PendulumRow& r : run.rows)
            if (r.t >= run.cert.T0)
                for (int i = 0; i < 4; ++i) {
                    CHECK(std::isfinite(r.s_phys[i]));
                    CHECK(std::abs(r.s_phys[i]) <= run.cert.kappa_phys[i]);
                }
        CHECK(run.rates.r_tr <= run.rates.r_tr_bound + 1.0 / run.config.T);
        CHECK(run.rates.r_s <= run.rates.r_s_bound);
    }
}

TEST_CASE("physical bound mode widens the design for the unstable mode") {
    PendulumOverrides ov;
    ov.bound_mode = BoundMode::physical;
    const PendulumRun run = run_pendulum(Scenario::c, ov);
    CHECK(run.M_design == Approx(0.169915).epsilon(1e-4));
    CHECK(run.design.bits == 5);
    // under the row-sum bound the closed-form integer size becomes 4
    PlantParams p4{run.model.eigvals(3), run.model.Btil(3), run.M_design, 1.0};
    CHECK(packet_size_paper(p4, run.design.J, 0.9, 1.0001, 0.1).bits == 4);
    REQUIRE(run.mode4.trigger_count > 0); // and the run still satisfies every invariant
}

TEST_CASE("zero-disturbance override of (b) reduces exactly to (a)") {
    PendulumOverrides ov;
    ov.M = 0.0;
    const PendulumRun b0 = run_pendulum(Scenario::b, ov);
    const PendulumRun a = run_pendulum(Scenario::a);
    REQUIRE(b0.rows.size() == a.rows.size());
    CHECK(b0.design.J == a.design.J);
    for (std::size_t i = 0; i < a.rows.size(); ++i)
        for (int j = 0; j < 4; ++j)
            CHECK(b0.rows[i].s_modal[j] == a.rows[i].s_modal[j]);
}

TEST_CASE("pendulum runs are deterministic") {
    const PendulumRun r1 = run_pendulum(Scenario::c);
    const PendulumRun r2 = run_pendulum(Scenario::c);
    REQUIRE(r1.rows.size() == r2.rows.size());
    for (std::size_t i = 0; i < r1.rows.size(); ++i) {
        CHECK(r1.rows[i].s_modal[3] == r2.rows[i].s_modal[3]);
        CHECK(r1.rows[i].w4 == r2.rows[i].w4);
    }
}

TEST_CASE("adversarial modal disturbance stays within every bound") {
    PendulumOverrides ov;
    ov.disturbance = DisturbanceKind::adversarial;
    const PendulumRun run = run_pendulum(Scenario::c, ov);
    CHECK(run.mode4.trigger_count > 0);
    ov.bound_mode = BoundMode::physical;
    const PendulumRun run2 = run_pendulum(Scenario::c, ov);
    CHECK(run2.mode4.trigger_count > 0);
}
