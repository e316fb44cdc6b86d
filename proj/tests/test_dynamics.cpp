#include <doctest.h>

#include <cmath>
#include <sstream>

#include "srflow/dynamics.hpp"
#include "srflow/errors.hpp"

using namespace srflow;
using namespace srflow::dyn;

namespace {
constexpr double PI = 3.14159265358979323846;
}

TEST_CASE("Q = 0: straight line at the initial angle") {
    auto q = QField::constant(0.0);
    State ic{0, 0, 0, PI / 3};
    auto traj = integrate(q, ic, 10.0, {});
    REQUIRE(traj.complete);
    const auto& last = traj.states.back();
    CHECK(last.t == doctest::Approx(10.0));
    CHECK(last.x == doctest::Approx(10.0 * std::cos(PI / 3)).epsilon(1e-12));
    CHECK(last.y == doctest::Approx(10.0 * std::sin(PI / 3)).epsilon(1e-12));
    CHECK(last.z == doctest::Approx(PI / 3));
}

TEST_CASE("Q = 1: the unit circle closes to 1e-9 over ten periods") {
    auto q = QField::constant(1.0);
    State ic{0, 0, 0, 0};
    const double T = 2 * PI;
    auto states = integrate_at_times(q, ic, {10 * T}, {});
    REQUIRE(states.size() == 1);
    // closed form: x = sin t, y = 1 - cos t, z = t
    CHECK(std::fabs(states[0].x - 0.0) < 1e-9);
    CHECK(std::fabs(states[0].y - 0.0) < 1e-9);
    CHECK(std::fabs(states[0].z - 10 * T) < 1e-9);

    auto mid = integrate_at_times(q, ic, {1.0, 2.5}, {});
    CHECK(mid[0].x == doctest::Approx(std::sin(1.0)).epsilon(1e-10));
    CHECK(mid[0].y == doctest::Approx(1 - std::cos(1.0)).epsilon(1e-10));
    CHECK(mid[1].x == doctest::Approx(std::sin(2.5)).epsilon(1e-10));
}

TEST_CASE("speed identity holds at every accepted state") {
    auto q = QField::q1(10.0, -0.1);
    auto traj = integrate(q, {0, 0, -5, 0}, 30.0, {});
    REQUIRE(traj.complete);
    for (const auto& s : traj.states) {
        const double c = std::cos(s.z), sn = std::sin(s.z);
        CHECK(std::fabs(c * c + sn * sn - 1.0) < 1e-15);
    }
}

TEST_CASE("accuracy check") {
    auto q = QField::constant(1.0);
    CHECK(accuracy_check(q, {0, 0, 0, 0}, 100.0, {}) < 1e-8);
    CHECK(accuracy_check(q, {0, 0, 0, 0}, 0.0, {}) == 0.0);
    // chaotic parameters: the deviation is reported, no bound asserted
    auto qc = QField::q1(10.0, -0.1);
    const double dev = accuracy_check(qc, {0, 0, -5, 0}, 50.0, {});
    CHECK(std::isfinite(dev));
}

TEST_CASE("step budget exhaustion is flagged with the last good state") {
    auto q = QField::q1(10.0, -0.1);
    IntegratorConfig cfg;
    cfg.max_steps = 25;
    auto traj = integrate(q, {0, 0, -5, 0}, 1000.0, cfg);
    CHECK_FALSE(traj.complete);
    CHECK(traj.flag == "max_steps exceeded");
    CHECK(traj.states.size() >= 2);
    CHECK(traj.states.back().t < 1000.0);
}

TEST_CASE("reversibility on regular orbits") {
    auto q = QField::constant(1.0);
    auto fwd = integrate_at_times(q, {0, 0.3, -0.2, 0.5}, {40.0}, {});
    State end = fwd[0];
    auto back = integrate_at_times(q, end, {0.0}, {});
    CHECK(std::fabs(back[0].x - 0.3) < 1e-6);
    CHECK(std::fabs(back[0].y + 0.2) < 1e-6);
    CHECK(std::fabs(back[0].z - 0.5) < 1e-6);

    auto qe = QField::q2(1.0, 1.0, 0.0);
    auto f2 = integrate_at_times(qe, {0, 1, 0, 0}, {5.0}, {});
    auto b2 = integrate_at_times(qe, f2[0], {0.0}, {});
    CHECK(std::fabs(b2[0].x - 1.0) < 1e-6);
    CHECK(std::fabs(b2[0].y) < 1e-6);
    CHECK(std::fabs(b2[0].z) < 1e-6);
}

TEST_CASE("z-sections: modular crossings, direction and tolerance") {
    auto q = QField::q1(10.0, -0.1);
    SectionSpec spec;
    spec.coordinate = SectionSpec::Coord::z;
    spec.level = 0.0;
    spec.direction = +1;
    spec.count = 200;
    auto sec = poincare_section(q, {0, 0, 0, 0}, spec, {});
    REQUIRE(sec.complete);
    REQUIRE(sec.points.size() == 200);
    for (const auto& s : sec.points) {
        // crossing refined into the section plane
        const double m = std::round(s.z / (2 * PI));
        CHECK(std::fabs(s.z - 2 * PI * m) < 1e-11);
        // increasing direction means zdot = Q > 0 at the crossing
        CHECK(q(s.x, s.y) > 0.0);
    }
}

TEST_CASE("x-sections: plain level crossings with cos z > 0") {
    auto q = QField::q1(10.0, -0.1);
    SectionSpec spec;
    spec.coordinate = SectionSpec::Coord::x;
    spec.level = 0.0;
    spec.direction = +1;
    spec.count = 100;
    auto sec = poincare_section(q, {0, 0, -5, 0}, spec, {});
    REQUIRE(sec.complete);
    REQUIRE(sec.points.size() == 100);
    for (const auto& s : sec.points) {
        CHECK(std::fabs(s.x) < 1e-11);
        CHECK(std::cos(s.z) > 0.0); // xdot > 0
    }
}

TEST_CASE("section on a flow that never crosses returns empty with a flag") {
    auto q = QField::constant(0.0); // z frozen at pi/2, drifts along y
    SectionSpec spec;
    spec.coordinate = SectionSpec::Coord::x;
    spec.level = 5.0;
    spec.direction = +1;
    spec.count = 3;
    IntegratorConfig cfg;
    cfg.max_steps = 2000;
    auto sec = poincare_section(q, {0, 0, 0, PI / 2}, spec, cfg);
    CHECK_FALSE(sec.complete);
    CHECK(sec.points.empty());
}

TEST_CASE("elliptic invariant drift stays below tolerance (a = b)") {
    reduce::ReducedSystem rs;
    rs.kind = reduce::QKind::Q2;
    rs.exact = true;
    rs.a = Rational(1);
    rs.b = Rational(1);
    rs.c = Rational(0);
    auto q = QField::q2(1.0, 1.0, 0.0);
    auto traj = integrate(q, {0, 1, 0, 0}, 200.0, {});
    REQUIRE(traj.complete);
    auto mon = invariant_monitor(rs, traj);
    CHECK_FALSE(mon.singular);
    CHECK(mon.max_drift < 1e-8);

    // constant-Q circle: F = -r sin(s) is conserved as well
    reduce::ReducedSystem rc;
    rc.kind = reduce::QKind::Constant;
    rc.exact = true;
    rc.c = Rational(1);
    auto qc = QField::constant(1.0);
    auto tc = integrate(qc, {0, 1, 0, 0}, 100.0, {});
    auto mc = invariant_monitor(rc, tc);
    CHECK(mc.max_drift < 1e-9);

    // a != b is rejected
    reduce::ReducedSystem bad = rs;
    bad.b = Rational(2);
    CHECK_THROWS_AS(invariant_monitor(bad, traj), precondition_error);

    // a trajectory touching r = 0 raises the singularity flag
    Trajectory through_origin;
    through_origin.states.push_back({0, 1, 0, 0});
    through_origin.states.push_back({1, 0, 0, 0});
    auto ms = invariant_monitor(rs, through_origin);
    CHECK(ms.singular);
}

TEST_CASE("pendulum residual") {
    auto q = QField::q1(10.0, -0.1);
    auto traj = integrate(q, {0, 0, -5, 0}, 50.0, {});
    REQUIRE(traj.complete);
    // analytic z'' = Q_x cos z + Q_y sin z: the residual vanishes identically
    CHECK(pendulum_residual(10.0, -0.1, traj) == 0.0);

    // finite-difference z'' reproduces it to O(h^2)
    const double h = 1e-3;
    double worst = 0.0;
    for (double t : {5.0, 12.5, 33.0}) {
        auto s = integrate_at_times(q, {0, 0, -5, 0}, {t - h, t, t + h}, {});
        const double zpp_fd = (s[2].z - 2 * s[1].z + s[0].z) / (h * h);
        const double res =
            zpp_fd - (-0.1) * std::sin(s[1].z) - 2 * 10.0 * s[1].x * std::cos(s[1].z);
        worst = std::max(worst, std::fabs(res));
    }
    CHECK(worst < 1e-4);

    auto off = integrate(q, {0, 5, 0, 0}, 1.0, {});
    CHECK_THROWS_AS(pendulum_residual(10.0, -0.1, off), precondition_error);
}

TEST_CASE("csv writers") {
    Trajectory traj;
    traj.states.push_back({0, 1.0 / 3.0, 0, 0});
    std::ostringstream os;
    write_trajectory_csv(os, traj);
    CHECK(os.str() == "t,x,y,z\n0,0.33333333333333331,0,0\n");

    SectionResult sec;
    sec.points.push_back({1, 2, 3, 4});
    SectionSpec zspec;
    zspec.coordinate = SectionSpec::Coord::z;
    std::ostringstream zs;
    write_section_csv(zs, sec, zspec);
    CHECK(zs.str() == "x,y\n2,3\n");
    SectionSpec xspec;
    xspec.coordinate = SectionSpec::Coord::x;
    std::ostringstream xs;
    write_section_csv(xs, sec, xspec);
    CHECK(xs.str() == "z,y\n4,3\n");

    std::ostringstream svg;
    write_section_svg(svg, sec, zspec);
    CHECK(svg.str().find("<svg") != std::string::npos);
    CHECK(svg.str().find("<circle") != std::string::npos);
}

TEST_CASE("non-finite input is rejected") {
    CHECK_THROWS_AS(integrate(QField::constant(1.0),
                              {0, std::nan(""), 0, 0}, 1.0, {}),
                    input_error);
}
