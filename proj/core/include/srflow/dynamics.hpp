#ifndef SRFLOW_DYNAMICS_HPP
#define SRFLOW_DYNAMICS_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "srflow/reduce.hpp"

namespace srflow::dyn {

struct State {
    double t = 0, x = 0, y = 0, z = 0;
};

struct IntegratorConfig {
    double rel_tol = 1e-12;
    double abs_tol = 1e-14;
    double h_init = 1e-3;
    double h_max = 0.1;
    long long max_steps = 100000000;
};

/// Right-hand side ydot = (cos z, sin z, Q(x,y)) with quadratic Q.
struct QField {
    double q20 = 0, q11 = 0, q02 = 0, q10 = 0, q01 = 0, q00 = 0;

    static QField from_qpoly(const reduce::QPoly& q);
    static QField q1(double a, double b) { return {a, 0, 0, 0, b, 0}; }
    static QField q2(double a, double b, double c) { return {a, 0, b, 0, 0, c}; }
    static QField constant(double c) { return {0, 0, 0, 0, 0, c}; }

    double operator()(double x, double y) const {
        return q20 * x * x + q11 * x * y + q02 * y * y + q10 * x + q01 * y + q00;
    }
    double dx(double x, double y) const { return 2 * q20 * x + q11 * y + q10; }
    double dy(double x, double y) const { return q11 * x + 2 * q02 * y + q01; }
};

struct Trajectory {
    std::vector<State> states; // accepted steps, initial state first
    bool complete = true;
    std::string flag; // failure reason when !complete
};

/// Adaptive embedded Cash-Karp 4(5) integration from ic.t to t_end
/// (either direction). States are monotone in t; on step-budget exhaustion
/// or step underflow the trajectory is returned truncated with a flag.
Trajectory integrate(const QField& q, const State& ic, double t_end,
                     const IntegratorConfig& cfg);

/// Integrates and samples the states exactly at the given times.
std::vector<State> integrate_at_times(const QField& q, const State& ic,
                                      const std::vector<double>& times,
                                      const IntegratorConfig& cfg);

struct SectionSpec {
    enum class Coord { x, y, z };
    Coord coordinate = Coord::z;
    double level = 0.0;
    int direction = +1; // +1 increasing, -1 decreasing
    long long count = 1;
};

struct SectionResult {
    std::vector<State> points;
    bool complete = true; // emitted exactly spec.count points
    std::string flag;
};

/// Poincare return map data. For the z coordinate the crossing condition is
/// z = level (mod 2pi) in the given direction (the phase space is
/// R^2 x S^1); for x and y it is a plain level crossing. Each crossing time
/// is refined by bisection until the section coordinate is within 1e-11 of
/// the level.
SectionResult poincare_section(const QField& q, const State& ic, const SectionSpec& spec,
                               const IntegratorConfig& cfg);

/// Re-integrates with tolerances and maximal step tightened by 10x and
/// returns the maximum pointwise deviation at shared sample times.
double accuracy_check(const QField& q, const State& ic, double t_end,
                      const IntegratorConfig& cfg);

struct MonitorResult {
    double max_drift = 0.0;
    bool singular = false; // trajectory hit r = 0
};

/// Drift of the elliptic invariant along a trajectory; requires an exact
/// Q2 reduced system with a = b.
MonitorResult invariant_monitor(const reduce::ReducedSystem& rs, const Trajectory& traj);

/// Max over samples of |z'' - b sin z - 2 a x cos z| with z'' evaluated
/// analytically as Q_x cos z + Q_y sin z; requires x(0) = 0 so that the
/// time antiderivative of cos z equals x.
double pendulum_residual(double a, double b, const Trajectory& traj);

/// CSV: header `t,x,y,z`, 17 significant digits.
void write_trajectory_csv(std::ostream& os, const Trajectory& traj);

/// CSV with header matching the section plane (`x,y` for z-sections,
/// `z,y` for x-sections, `x,z` for y-sections).
void write_section_csv(std::ostream& os, const SectionResult& sec, const SectionSpec& spec);

/// Minimal SVG scatter: fixed 1000x1000 canvas, linear axes autoscaled to
/// the data, one mark per point.
void write_section_svg(std::ostream& os, const SectionResult& sec, const SectionSpec& spec);

} // namespace srflow::dyn

#endif
