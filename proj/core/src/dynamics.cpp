#include "srflow/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

#include "srflow/errors.hpp"

namespace srflow::dyn {

namespace {

constexpr double TWO_PI = 6.283185307179586476925286766559;

struct Vec3 {
    double x, y, z;
};

inline Vec3 rhs(const QField& q, const Vec3& s) {
    return {std::cos(s.z), std::sin(s.z), q(s.x, s.y)};
}

// Cash-Karp embedded 4(5) pair.
struct StepOut {
    Vec3 y5;     // 5th order solution increment applied
    double err;  // scaled error estimate (accept iff <= 1)
};

StepOut ck_step(const QField& q, const Vec3& y, double h, double rel, double abs) {
    static constexpr double b21 = 1.0 / 5;
    static constexpr double b31 = 3.0 / 40, b32 = 9.0 / 40;
    static constexpr double b41 = 3.0 / 10, b42 = -9.0 / 10, b43 = 6.0 / 5;
    static constexpr double b51 = -11.0 / 54, b52 = 5.0 / 2, b53 = -70.0 / 27, b54 = 35.0 / 27;
    static constexpr double b61 = 1631.0 / 55296, b62 = 175.0 / 512, b63 = 575.0 / 13824,
                            b64 = 44275.0 / 110592, b65 = 253.0 / 4096;
    static constexpr double c1 = 37.0 / 378, c3 = 250.0 / 621, c4 = 125.0 / 594,
                            c6 = 512.0 / 1771;
    static constexpr double d1 = c1 - 2825.0 / 27648, d3 = c3 - 18575.0 / 48384,
                            d4 = c4 - 13525.0 / 55296, d5 = -277.0 / 14336, d6 = c6 - 0.25;

    const Vec3 k1 = rhs(q, y);
    const Vec3 k2 = rhs(q, {y.x + h * b21 * k1.x, y.y + h * b21 * k1.y, y.z + h * b21 * k1.z});
    const Vec3 k3 = rhs(q, {y.x + h * (b31 * k1.x + b32 * k2.x),
                            y.y + h * (b31 * k1.y + b32 * k2.y),
                            y.z + h * (b31 * k1.z + b32 * k2.z)});
    const Vec3 k4 = rhs(q, {y.x + h * (b41 * k1.x + b42 * k2.x + b43 * k3.x),
                            y.y + h * (b41 * k1.y + b42 * k2.y + b43 * k3.y),
                            y.z + h * (b41 * k1.z + b42 * k2.z + b43 * k3.z)});
    const Vec3 k5 = rhs(q, {y.x + h * (b51 * k1.x + b52 * k2.x + b53 * k3.x + b54 * k4.x),
                            y.y + h * (b51 * k1.y + b52 * k2.y + b53 * k3.y + b54 * k4.y),
                            y.z + h * (b51 * k1.z + b52 * k2.z + b53 * k3.z + b54 * k4.z)});
    const Vec3 k6 =
        rhs(q, {y.x + h * (b61 * k1.x + b62 * k2.x + b63 * k3.x + b64 * k4.x + b65 * k5.x),
                y.y + h * (b61 * k1.y + b62 * k2.y + b63 * k3.y + b64 * k4.y + b65 * k5.y),
                y.z + h * (b61 * k1.z + b62 * k2.z + b63 * k3.z + b64 * k4.z + b65 * k5.z)});

    const double dx = h * (c1 * k1.x + c3 * k3.x + c4 * k4.x + c6 * k6.x);
    const double dy = h * (c1 * k1.y + c3 * k3.y + c4 * k4.y + c6 * k6.y);
    const double dz = h * (c1 * k1.z + c3 * k3.z + c4 * k4.z + c6 * k6.z);
    const double ex = h * (d1 * k1.x + d3 * k3.x + d4 * k4.x + d5 * k5.x + d6 * k6.x);
    const double ey = h * (d1 * k1.y + d3 * k3.y + d4 * k4.y + d5 * k5.y + d6 * k6.y);
    const double ez = h * (d1 * k1.z + d3 * k3.z + d4 * k4.z + d5 * k5.z + d6 * k6.z);

    StepOut out;
    out.y5 = {y.x + dx, y.y + dy, y.z + dz};
    auto scaled = [&](double e, double a0, double a1) {
        const double sc = abs + rel * std::max(std::fabs(a0), std::fabs(a1));
        return std::fabs(e) / sc;
    };
    out.err = std::max({scaled(ex, y.x, out.y5.x), scaled(ey, y.y, out.y5.y),
                        scaled(ez, y.z, out.y5.z)});
    return out;
}

/// Driver state: the angle is kept wrapped in (-pi, pi] with a winding
/// counter, so section arithmetic near z = level stays fully resolved even
/// after 10^5 turns.
struct Driver {
    const QField& q;
    IntegratorConfig cfg;
    double t;
    Vec3 y;           // y.z is the wrapped angle
    long long wind = 0;
    double h;
    long long steps = 0;
    std::string flag;

    Driver(const QField& q_, const State& ic, double dir, const IntegratorConfig& c)
        : q(q_), cfg(c), t(ic.t), y{ic.x, ic.y, ic.z} {
        if (!(cfg.rel_tol > 0) || !(cfg.abs_tol > 0) || !(cfg.h_init > 0) ||
            cfg.h_init > cfg.h_max || cfg.max_steps < 1)
            throw input_error("bad integrator configuration");
        h = std::copysign(std::min(cfg.h_init, cfg.h_max), dir);
        rewrap();
    }

    double z_unwrapped() const { return y.z + TWO_PI * static_cast<double>(wind); }

    void rewrap() {
        if (y.z > 3.2 || y.z <= -3.2) {
            const double k = std::floor((y.z + 3.141592653589793) / TWO_PI);
            y.z -= TWO_PI * k;
            wind += static_cast<long long>(k);
        }
    }

    State state() const { return {t, y.x, y.y, z_unwrapped()}; }

    /// One accepted adaptive step, not crossing t_stop. Returns false when
    /// the budget is exhausted, the step underflows, or t_stop is reached.
    bool advance(double t_stop) {
        if (t == t_stop) return false;
        const double dir = std::copysign(1.0, t_stop - t);
        h = std::copysign(std::min(std::fabs(h), cfg.h_max), dir);
        while (true) {
            if (steps++ >= cfg.max_steps) {
                flag = "max_steps exceeded";
                return false;
            }
            bool clipped = false;
            double hh = h;
            if ((t + hh - t_stop) * dir > 0) {
                hh = t_stop - t;
                clipped = true;
            }
            if (std::fabs(hh) < 1e-15 * std::max(1.0, std::fabs(t))) {
                // the remaining gap is below resolution; land on t_stop
                t = t_stop;
                return false;
            }
            StepOut s = ck_step(q, y, hh, cfg.rel_tol, cfg.abs_tol);
            if (s.err <= 1.0) {
                t = clipped ? t_stop : t + hh;
                y = s.y5;
                rewrap();
                if (!clipped) {
                    const double grow = (s.err > 1e-10) ? 0.9 * std::pow(s.err, -0.2) : 5.0;
                    h = std::copysign(std::min(std::fabs(h) * std::min(grow, 5.0), cfg.h_max), dir);
                }
                return !clipped || t != t_stop;
            }
            const double shrink = std::max(0.9 * std::pow(s.err, -0.25), 0.1);
            h = hh * shrink;
            if (std::fabs(h) < 1e-15 * std::max(1.0, std::fabs(t))) {
                flag = "step size underflow";
                return false;
            }
        }
    }
};

} // namespace

QField QField::from_qpoly(const reduce::QPoly& q) {
    return {q.q20.to_double(), q.q11.to_double(), q.q02.to_double(),
            q.q10.to_double(), q.q01.to_double(), q.q00.to_double()};
}

Trajectory integrate(const QField& q, const State& ic, double t_end,
                     const IntegratorConfig& cfg) {
    Trajectory traj;
    if (!std::isfinite(ic.x) || !std::isfinite(ic.y) || !std::isfinite(ic.z) ||
        !std::isfinite(t_end))
        throw input_error("integrate: non-finite input");
    Driver drv(q, ic, t_end >= ic.t ? 1.0 : -1.0, cfg);
    traj.states.push_back(drv.state());
    if (t_end == ic.t) return traj;
    while (true) {
        bool more = drv.advance(t_end);
        traj.states.push_back(drv.state());
        if (!more) break;
    }
    if (!drv.flag.empty()) {
        traj.complete = false;
        traj.flag = drv.flag;
    }
    return traj;
}

std::vector<State> integrate_at_times(const QField& q, const State& ic,
                                      const std::vector<double>& times,
                                      const IntegratorConfig& cfg) {
    std::vector<State> out;
    if (times.empty()) return out;
    Driver drv(q, ic, times.front() >= ic.t ? 1.0 : -1.0, cfg);
    for (double target : times) {
        while (drv.advance(target)) {
        }
        if (!drv.flag.empty()) throw numeric_error("integration failed: " + drv.flag);
        out.push_back(drv.state());
    }
    return out;
}

namespace {

double coord_of(const State& s, SectionSpec::Coord c) {
    switch (c) {
        case SectionSpec::Coord::x: return s.x;
        case SectionSpec::Coord::y: return s.y;
        case SectionSpec::Coord::z: return s.z;
    }
    return 0;
}

double coord_rate(const QField& q, const State& s, SectionSpec::Coord c) {
    switch (c) {
        case SectionSpec::Coord::x: return std::cos(s.z);
        case SectionSpec::Coord::y: return std::sin(s.z);
        case SectionSpec::Coord::z: return q(s.x, s.y);
    }
    return 0;
}

} // namespace

SectionResult poincare_section(const QField& q, const State& ic, const SectionSpec& spec,
                               const IntegratorConfig& cfg) {
    if (spec.count < 1) throw input_error("section count must be >= 1");
    SectionResult res;
    const bool modular = (spec.coordinate == SectionSpec::Coord::z);
    const double dirsign = spec.direction >= 0 ? 1.0 : -1.0;

    Driver drv(q, ic, 1.0, cfg);
    // crossing measure: g(state) for plain levels; floor((z - level)/2pi)
    // bookkeeping for the angular coordinate
    auto g_plain = [&](const State& s) { return coord_of(s, spec.coordinate) - spec.level; };
    auto z_floor = [&](const Driver& d) {
        return d.wind +
               static_cast<long long>(std::floor((d.y.z - spec.level) / TWO_PI));
    };

    double g_prev = modular ? 0.0 : g_plain(drv.state());
    long long floor_prev = modular ? z_floor(drv) : 0;
    double t_prev = drv.t;
    Vec3 y_prev = drv.y;
    long long wind_prev = drv.wind;

    IntegratorConfig refine_cfg = cfg;
    refine_cfg.rel_tol = std::min(cfg.rel_tol, 1e-13);
    refine_cfg.abs_tol = std::min(cfg.abs_tol, 1e-14);
    refine_cfg.max_steps = cfg.max_steps;

    // evaluates the state at t_prev + tau by re-integration from the step start;
    // the driver is seeded with the wrapped angle so the winding stays exact
    auto eval_at = [&](double tau) -> State {
        if (tau <= 0.0)
            return {t_prev, y_prev.x, y_prev.y,
                    y_prev.z + TWO_PI * static_cast<double>(wind_prev)};
        Driver d(q, State{t_prev, y_prev.x, y_prev.y, y_prev.z}, 1.0, refine_cfg);
        d.wind = wind_prev;
        while (d.advance(t_prev + tau)) {
        }
        return d.state();
    };

    const double tol = 1e-11;
    long long emitted = 0;

    while (emitted < spec.count) {
        if (!drv.advance(std::numeric_limits<double>::infinity())) {
            res.complete = false;
            res.flag = drv.flag.empty() ? "integration stopped" : drv.flag;
            break;
        }
        State cur = drv.state();
        const double h_step = drv.t - t_prev;

        std::vector<double> targets; // crossing offsets g(tau) = z_u - boundary
        if (modular) {
            long long floor_cur = z_floor(drv);
            if (spec.direction >= 0) {
                for (long long m = floor_prev + 1; m <= floor_cur && emitted < spec.count; ++m)
                    targets.push_back(spec.level + TWO_PI * static_cast<double>(m));
            } else {
                for (long long m = floor_prev; m > floor_cur && emitted < spec.count; --m)
                    targets.push_back(spec.level + TWO_PI * static_cast<double>(m));
            }
            floor_prev = floor_cur;
        } else {
            const double g_cur = g_plain(cur);
            const bool crossed = (spec.direction >= 0) ? (g_prev < 0.0 && g_cur >= 0.0)
                                                       : (g_prev > 0.0 && g_cur <= 0.0);
            if (crossed) targets.push_back(spec.level);
            g_prev = g_cur;
        }

        for (double boundary : targets) {
            // bisection on tau in [0, h_step]
            double lo = 0.0, hi = h_step;
            State best = cur;
            double gbest = coord_of(cur, spec.coordinate) - boundary;
            for (int it = 0; it < 128; ++it) {
                const double mid = 0.5 * (lo + hi);
                State sm = eval_at(mid);
                const double gm = coord_of(sm, spec.coordinate) - boundary;
                if (std::fabs(gm) < std::fabs(gbest)) {
                    best = sm;
                    gbest = gm;
                }
                if (std::fabs(gbest) < tol) break;
                const bool below = (dirsign > 0) ? (gm < 0.0) : (gm > 0.0);
                if (below) lo = mid;
                else hi = mid;
                if (hi - lo < 1e-16 * std::max(1.0, std::fabs(t_prev))) break;
            }
            // direction check at the refined point
            if (coord_rate(q, best, spec.coordinate) * dirsign <= 0.0) continue;
            res.points.push_back(best);
            ++emitted;
            if (emitted >= spec.count) break;
        }

        t_prev = drv.t;
        y_prev = drv.y;
        wind_prev = drv.wind;
    }
    if (emitted < spec.count) res.complete = false;
    return res;
}

double accuracy_check(const QField& q, const State& ic, double t_end,
                      const IntegratorConfig& cfg) {
    if (t_end == ic.t) return 0.0;
    const int n = 256;
    std::vector<double> times;
    for (int i = 1; i <= n; ++i)
        times.push_back(ic.t + (t_end - ic.t) * static_cast<double>(i) / n);
    IntegratorConfig tight = cfg;
    tight.rel_tol /= 10;
    tight.abs_tol /= 10;
    tight.h_max /= 10;
    tight.h_init /= 10;
    auto coarse = integrate_at_times(q, ic, times, cfg);
    auto fine = integrate_at_times(q, ic, times, tight);
    double dev = 0.0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        dev = std::max(dev, std::fabs(coarse[i].x - fine[i].x));
        dev = std::max(dev, std::fabs(coarse[i].y - fine[i].y));
        dev = std::max(dev, std::fabs(coarse[i].z - fine[i].z));
    }
    return dev;
}

MonitorResult invariant_monitor(const reduce::ReducedSystem& rs, const Trajectory& traj) {
    const bool constant_q = (rs.kind == reduce::QKind::Constant);
    if (!(constant_q || rs.kind == reduce::QKind::Q2) || !rs.exact || rs.a != rs.b)
        throw precondition_error("invariant monitor needs an exact Q2 system with a = b");
    if (traj.states.empty()) return {};
    reduce::EllipticInvariant F = reduce::elliptic_invariant(rs.a, rs.c);
    MonitorResult out;
    double f0 = 0.0;
    bool have0 = false;
    for (const auto& s : traj.states) {
        if (std::hypot(s.x, s.y) < 1e-14) {
            out.singular = true;
            continue;
        }
        const double f = F(s.x, s.y, s.z);
        if (!have0) {
            f0 = f;
            have0 = true;
        }
        out.max_drift = std::max(out.max_drift, std::fabs(f - f0));
    }
    return out;
}

double pendulum_residual(double a, double b, const Trajectory& traj) {
    if (traj.states.empty()) return 0.0;
    if (std::fabs(traj.states.front().x) > 1e-9)
        throw precondition_error("pendulum residual needs x(0) = 0");
    const QField q = QField::q1(a, b);
    double worst = 0.0;
    for (const auto& s : traj.states) {
        // z'' = Q_x cos z + Q_y sin z, compared term by term with the
        // pendulum form 2 a x cos z + b sin z
        const double cz = std::cos(s.z), sz = std::sin(s.z);
        const double r = (q.dx(s.x, s.y) * cz - 2.0 * a * s.x * cz) +
                         (q.dy(s.x, s.y) * sz - b * sz);
        worst = std::max(worst, std::fabs(r));
    }
    return worst;
}

namespace {

void print_num(std::ostream& os, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
}

} // namespace

void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
    os << "t,x,y,z\n";
    for (const auto& s : traj.states) {
        print_num(os, s.t);
        os << ",";
        print_num(os, s.x);
        os << ",";
        print_num(os, s.y);
        os << ",";
        print_num(os, s.z);
        os << "\n";
    }
}

namespace {

std::pair<double State::*, double State::*> section_plane(const SectionSpec& spec) {
    switch (spec.coordinate) {
        case SectionSpec::Coord::z: return {&State::x, &State::y};
        case SectionSpec::Coord::x: return {&State::z, &State::y};
        case SectionSpec::Coord::y: return {&State::x, &State::z};
    }
    return {&State::x, &State::y};
}

std::pair<const char*, const char*> plane_names(const SectionSpec& spec) {
    switch (spec.coordinate) {
        case SectionSpec::Coord::z: return {"x", "y"};
        case SectionSpec::Coord::x: return {"z", "y"};
        case SectionSpec::Coord::y: return {"x", "z"};
    }
    return {"x", "y"};
}

} // namespace

void write_section_csv(std::ostream& os, const SectionResult& sec, const SectionSpec& spec) {
    auto [am, bm] = section_plane(spec);
    auto [an, bn] = plane_names(spec);
    os << an << "," << bn << "\n";
    for (const auto& s : sec.points) {
        print_num(os, s.*am);
        os << ",";
        print_num(os, s.*bm);
        os << "\n";
    }
}

void write_section_svg(std::ostream& os, const SectionResult& sec, const SectionSpec& spec) {
    auto [am, bm] = section_plane(spec);
    const double W = 1000, H = 1000, margin = 40;
    double amin = 0, amax = 1, bmin = 0, bmax = 1;
    if (!sec.points.empty()) {
        amin = amax = sec.points[0].*am;
        bmin = bmax = sec.points[0].*bm;
        for (const auto& s : sec.points) {
            amin = std::min(amin, s.*am);
            amax = std::max(amax, s.*am);
            bmin = std::min(bmin, s.*bm);
            bmax = std::max(bmax, s.*bm);
        }
    }
    if (amax == amin) amax = amin + 1;
    if (bmax == bmin) bmax = bmin + 1;
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H
       << "\" viewBox=\"0 0 " << W << " " << H << "\">\n";
    for (const auto& s : sec.points) {
        const double px = margin + (s.*am - amin) / (amax - amin) * (W - 2 * margin);
        const double py = H - margin - (s.*bm - bmin) / (bmax - bmin) * (H - 2 * margin);
        os << "<circle cx=\"" << px << "\" cy=\"" << py << "\" r=\"1\"/>\n";
    }
    os << "</svg>\n";
}

} // namespace srflow::dyn
