#include <doctest.h>

#include "etsim/design.hpp"
#include "etsim/errors.hpp"
#include "etsim/trigger.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace etsim;
using doctest::Approx;

namespace {

const PlantParams kFig2{5.5651, 1.0, 0.2, 1.0};

double uniform(std::mt19937_64& rng, double lo, double hi) {
    return lo + (hi - lo) * (static_cast<double>(rng() >> 11) * 0x1.0p-53);
}

} // namespace

TEST_CASE("feasibility floor") {
    PlantParams p0{5.5651, 1.0, 0.0, 1.0};
    CHECK(min_feasible_J(p0, 0.5, 0.3) == 0.0);
    CHECK(min_feasible_J(kFig2, 0.1, 0.0) == 0.0);
    CHECK(min_feasible_J(kFig2, 0.1, 0.1) == Approx(0.26758667501423190).epsilon(1e-12));
}

TEST_CASE("closed-form packet size") {
    PlantParams pa{5.5651, 1.0, 0.0, 1.0};
    const PaperPacketSize ga = packet_size_paper(pa, 0.005, 0.9, 1.0001, 0.005);
    CHECK(ga.raw == Approx(-3.4979082621599015).epsilon(1e-12));
    CHECK(ga.bound == 0.0);
    CHECK(ga.bits == 1);

    PlantParams pc{5.5651, 1.0, 0.05, 1.0};
    const PaperPacketSize gc =
        packet_size_paper(pc, 0.012432963194839776, 0.9, 1.0001, 0.1);
    CHECK(gc.raw == Approx(2.5617988918422624).epsilon(1e-12));
    CHECK(gc.bits == 3); // the constructive encoder uses 4 for this setting

    // vanishing delay: the bound clamps to zero but one bit is still sent
    const PaperPacketSize g0 = packet_size_paper(pc, 0.05, 0.9, 1.0001, 0.0);
    CHECK(g0.bound == 0.0);
    CHECK(g0.bits == 1);

    CHECK_THROWS_AS(packet_size_paper(pc, 0.001, 0.9, 1.0001, 0.1), FeasibilityError);
}

TEST_CASE("minimum inter-event time") {
    PlantParams p0{5.5651, 1.0, 0.0, 1.0};
    CHECK(min_inter_event(p0, 1.0, 0.1) == Approx(0.41375448653106785).epsilon(1e-12));
    CHECK(min_inter_event(kFig2, 0.36758667501423190, 0.1) ==
          Approx(0.30797994347051044).epsilon(1e-12));
    // rho0 -> 1 collapses the spacing
    CHECK(min_inter_event(p0, 1.0, 0.999999) == Approx(0.0).epsilon(1e-3));
    // strictly positive whenever rho0 < 1
    std::mt19937_64 rng(4);
    for (int i = 0; i < 200; ++i) {
        PlantParams p{uniform(rng, 0.2, 9.0), 1.0, uniform(rng, 0.0, 0.5), 1.0};
        CHECK(min_inter_event(p, uniform(rng, 1e-3, 2.0), uniform(rng, 0.01, 0.99)) > 0.0);
    }
}

TEST_CASE("maximum trigger rate") {
    PlantParams p0{5.5651, 1.0, 0.0, 1.0};
    CHECK(max_trigger_rate(p0, 1.0, 0.1) == Approx(2.4168922212397867).epsilon(1e-12));
    // with M = 0 the rate depends only on the contraction, not J
    CHECK(max_trigger_rate(p0, 0.02, 0.1) == Approx(max_trigger_rate(p0, 0.04, 0.1)));
}

TEST_CASE("sufficient rate and the data-rate threshold") {
    CHECK(datarate_threshold(kFig2) == Approx(8.0287421720511703).epsilon(1e-14));
    // small gamma: the packet-size clamp zeroes the whole rate
    const double J1 = min_feasible_J(kFig2, 0.1, 0.002) + 0.1;
    CHECK(sufficient_rate(kFig2, J1, 0.1, 1.0001, 0.002) == 0.0);
    // the case-study rate curve crosses the threshold inside (0, 0.2]
    const auto rate_at = [&](double gamma) {
        return sufficient_rate(kFig2, min_feasible_J(kFig2, 0.1, gamma) + 0.1, 0.1,
                               1.0001, gamma);
    };
    CHECK(rate_at(0.0001) < datarate_threshold(kFig2));
    CHECK(rate_at(0.2) > datarate_threshold(kFig2));
    double lo = 0.0001, hi = 0.2;
    for (int i = 0; i < 100; ++i) {
        const double mid = 0.5 * (lo + hi);
        (rate_at(mid) < datarate_threshold(kFig2) ? lo : hi) = mid;
    }
    CHECK(0.5 * (lo + hi) == Approx(0.019566928).epsilon(1e-6));
}

TEST_CASE("rate curve sweep") {
    const JRule rule{false, 0.1};
    SUBCASE("single point") {
        const std::vector<double> grid{0.1};
        const auto pts = rate_curve_sweep(kFig2, 0.1, 1.0001, rule, grid);
        REQUIRE(pts.size() == 1);
        CHECK(pts[0].error.empty());
        CHECK(pts[0].rs_bound > 0.0);
        CHECK(pts[0].J == Approx(0.36758667501423190).epsilon(1e-12));
    }
    SUBCASE("fully clamped grid") {
        const std::vector<double> grid{0.0005, 0.001, 0.002};
        for (const auto& pt : rate_curve_sweep(kFig2, 0.1, 1.0001, rule, grid)) {
            CHECK(pt.error.empty());
            CHECK(pt.rs_bound == 0.0);
        }
    }
    SUBCASE("monotone grid gives a non-decreasing constructive size") {
        std::vector<double> grid;
        for (int i = 1; i <= 60; ++i)
            grid.push_back(0.005 * i);
        int prev = 0;
        for (const auto& pt : rate_curve_sweep(kFig2, 0.1, 1.0001, rule, grid)) {
            CHECK(pt.g_constructive >= prev);
            prev = pt.g_constructive;
        }
    }
    SUBCASE("infeasible fixed-J point is reported with its index") {
        const std::vector<double> grid{0.001, 0.3};
        const auto pts = rate_curve_sweep(kFig2, 0.1, 1.0001, JRule{true, 0.05}, grid);
        CHECK(pts[0].error.empty());
        CHECK(pts[1].error.find("point 1") != std::string::npos);
    }
    SUBCASE("non-increasing grid rejected") {
        const std::vector<double> grid{0.1, 0.1};
        CHECK_THROWS(rate_curve_sweep(kFig2, 0.1, 1.0001, rule, grid));
    }
}

TEST_CASE("integerized closed form tracks the constructive size") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 1000; ++i) {
        PlantParams p{uniform(rng, 0.3, 8.0), 1.0, uniform(rng, 0.0, 0.4), 1.0};
        const double rho0 = uniform(rng, 0.05, 0.95);
        const double gamma = uniform(rng, 0.0, 0.5);
        const double b = uniform(rng, 1.0 + 1e-6, 2.0);
        const double J = min_feasible_J(p, rho0, gamma) + uniform(rng, 1e-4, 0.3);
        const TriggerDesign d = build_design(p, J, rho0, b, gamma);
        const PaperPacketSize g = packet_size_paper(p, J, rho0, b, gamma);
        CHECK(g.bits <= d.bits + 1);
        CHECK(g.bits >= d.bits - 2);
    }
}
