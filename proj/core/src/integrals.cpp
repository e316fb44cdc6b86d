#include "srflow/integrals.hpp"

#include <algorithm>

#include "srflow/errors.hpp"
#include "srflow/rank.hpp"

namespace srflow::integrals {

using carnot::SRSystem;
using poly::Var;

bool check_commute(const PhasePolynomial& H, const PhasePolynomial& F) {
    return poisson_bracket(H, F).is_zero();
}

std::vector<std::vector<bool>> check_involutive(const IntegralSet& set) {
    const std::size_t n = set.members.size();
    std::vector<std::vector<bool>> table(n, std::vector<bool>(n, true));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = j + 1; k < n; ++k) {
            bool ok = poisson_bracket(set.members[j].second, set.members[k].second).is_zero();
            table[j][k] = table[k][j] = ok;
        }
    return table;
}

bool all_involutive(const std::vector<std::vector<bool>>& table) {
    for (const auto& row : table)
        for (bool b : row)
            if (!b) return false;
    return true;
}

bool check_identity(const PhasePolynomial& lhs, const PhasePolynomial& rhs) {
    return lhs == rhs;
}

namespace {

std::uint64_t splitmix64(std::uint64_t& state) {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

Rational small_rational(std::uint64_t& state) {
    long num = static_cast<long>(splitmix64(state) % 19) - 9; // [-9, 9]
    long den = static_cast<long>(splitmix64(state) % 7) + 1;  // [1, 7]
    if (num == 0) num = 1;
    return Rational(num, den);
}

} // namespace

std::vector<PhasePoint> sample_points(int D, int count, std::uint64_t seed) {
    std::uint64_t state = seed;
    std::vector<PhasePoint> pts;
    for (int i = 0; i < count; ++i) {
        PhasePoint pt;
        for (int j = 0; j < D; ++j) pt.x.push_back(small_rational(state));
        for (int j = 0; j < D; ++j) pt.p.push_back(small_rational(state));
        pts.push_back(std::move(pt));
    }
    return pts;
}

int jacobian_rank_at(const IntegralSet& set, const std::vector<PhasePoint>& points) {
    if (points.empty()) throw input_error("jacobian_rank_at needs at least one point");
    int best = 0;
    const std::size_t n = set.members.size();
    if (n == 0) return 0;
    const int D = set.members[0].second.num_base_vars();

    // derivative polynomials are point-independent; compute once
    std::vector<std::vector<PhasePolynomial>> grads;
    for (const auto& [name, f] : set.members) {
        std::vector<PhasePolynomial> g;
        for (int i = 1; i <= D; ++i) g.push_back(f.derivative(Var::x(i)));
        for (int i = 1; i <= D; ++i) g.push_back(f.derivative(Var::p(i)));
        grads.push_back(std::move(g));
    }

    for (const auto& pt : points) {
        std::vector<linalg::IntRow> rows;
        for (const auto& g : grads) {
            // evaluate, then scale the row to integers
            std::vector<Rational> vals;
            BigInt lcm = 1;
            for (const auto& df : g) {
                Rational v = df.evaluate(pt.x, pt.p);
                BigInt den = v.denominator();
                mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), den.get_mpz_t());
                vals.push_back(v);
            }
            linalg::IntRow row;
            for (std::size_t c = 0; c < vals.size(); ++c) {
                Rational scaled = vals[c] * Rational(lcm);
                if (!scaled.is_zero())
                    row.emplace_back(static_cast<std::uint32_t>(c), scaled.numerator());
            }
            rows.push_back(std::move(row));
        }
        int r = static_cast<int>(linalg::rank_integer_rows(std::move(rows), 2 * D));
        best = std::max(best, r);
    }
    return best;
}

// ---- the claimed families --------------------------------------------------

namespace {

PhasePolynomial half_of(const PhasePolynomial& f) { return f.scale(Rational(1, 2)); }

PhasePolynomial parse_for(const SRSystem& sys, const std::string& text) {
    const int D = sys.algebra.dim;
    return PhasePolynomial::parse(text, D, D);
}

PhasePolynomial momentum(const SRSystem& sys, int i) {
    return PhasePolynomial::variable(sys.algebra.dim, sys.algebra.dim, Var::p(i));
}

/// Frame of omega polynomials (closure-completed where the catalog only
/// carries omega_1, omega_2).
std::vector<PhasePolynomial> frame_of(const SRSystem& sys) {
    auto rep = carnot::verify_realization(sys);
    if (!rep.passed)
        throw internal_error("catalog realization of '" + sys.name +
                             "' failed verification: " + rep.detail);
    return rep.frame;
}

} // namespace

IntegralSet noether_family(const carnot::SRSystem& sys) {
    const int D = sys.algebra.dim;
    IntegralSet s{sys.name, {{"H", half_of(sys.hamiltonian2)}}, true, D - 1, {}, {}};
    for (int i = 3; i <= D; ++i)
        s.members.push_back({"I" + std::to_string(i - 1), momentum(sys, i)});
    return s;
}

std::vector<IntegralSet> integral_sets_for(const std::string& name) {
    SRSystem sys = (name == "gen6") ? carnot::catalog_lookup("gen6", Rational(0), Rational(1))
                                    : carnot::catalog_lookup(name);
    const PhasePolynomial H = half_of(sys.hamiltonian2);
    std::vector<IntegralSet> out;

    if (name == "heis3") {
        IntegralSet s{name,
                      {{"H", H}, {"I2", parse_for(sys, "p1")}, {"I3", parse_for(sys, "p3")}},
                      true,
                      3,
                      {},
                      {}};
        s.extras.push_back({"I4", parse_for(sys, "p2 + x1 p3")});
        out.push_back(std::move(s));
    } else if (name == "engel") {
        IntegralSet s{name,
                      {{"H", H},
                       {"I2", parse_for(sys, "p2 + x1 p3 + 1/2 x1^2 p4")},
                       {"I3", parse_for(sys, "p3 + x1 p4")},
                       {"I4", parse_for(sys, "p4")}},
                      true,
                      4,
                      {},
                      {}};
        s.extras.push_back({"I5", parse_for(sys, "p1")});
        PhasePolynomial J4 = parse_for(sys, "p3^2 - 2 p2 p4");
        PhasePolynomial I2 = s.members[1].second, I3 = s.members[2].second,
                        I4 = s.members[3].second;
        s.identities.push_back({"J4 = I3^2 - 2 I2 I4", J4, I3 * I3 - (I2 * I4).scale(Rational(2))});
        out.push_back(std::move(s));
        // alternative involutive family J2, J3, J4
        IntegralSet js{name + ":J",
                       {{"H", H},
                        {"J2", parse_for(sys, "p1")},
                        {"J3", parse_for(sys, "p4")},
                        {"J4", J4}},
                       true,
                       4,
                       {},
                       {}};
        out.push_back(std::move(js));
    } else if (name == "cartan5") {
        PhasePolynomial Jm = parse_for(sys, "x1 p4 - x2 p5");
        PhasePolynomial Jp = parse_for(sys, "x1 p4 + x2 p5");
        PhasePolynomial p3 = momentum(sys, 3);
        PhasePolynomial I2 = parse_for(sys, "p1 p5 - p2 p4 + 1/2 p3^2") +
                             half_of(Jm * Jm) + half_of(p3 * Jp);
        IntegralSet s{name,
                      {{"H", H},
                       {"I2", I2},
                       {"I3", p3},
                       {"I4", momentum(sys, 4)},
                       {"I5", momentum(sys, 5)}},
                      true,
                      5,
                      {},
                      {}};
        s.extras.push_back(
            {"I6", parse_for(sys, "p1 + 1/2 x2 p3 + x3 p4 - 1/2 x1 x2 p4 + 1/2 x2^2 p5")});
        s.extras.push_back(
            {"I6p", parse_for(sys, "p2 - 1/2 x1 p3 - 1/2 x1^2 p4 + x3 p5 + 1/2 x1 x2 p5")});
        out.push_back(std::move(s));
    } else if (name == "ell6") {
        PhasePolynomial w3 =
            parse_for(sys, "p3 + x1 p4 + x2 p5 + 1/2 x1^2 p6 + 1/2 x2^2 p6");
        PhasePolynomial I2 = sys.u1 * parse_for(sys, "p5 + x2 p6") -
                             sys.u2 * parse_for(sys, "p4 + x1 p6") + half_of(w3 * w3);
        IntegralSet s{name,
                      {{"H", H},
                       {"I2", I2},
                       {"I3", momentum(sys, 3)},
                       {"I4", momentum(sys, 4)},
                       {"I5", momentum(sys, 5)},
                       {"I6", momentum(sys, 6)}},
                      true,
                      6,
                      {},
                      {}};
        auto w = frame_of(sys);
        PhasePolynomial C = half_of(w[3] * w[3] + w[4] * w[4]) - w[2] * w[5];
        PhasePolynomial I4 = s.members[3].second, I5 = s.members[4].second;
        s.identities.push_back({"C = (I4^2 + I5^2)/2 - I3 I6",
                                C,
                                half_of(I4 * I4 + I5 * I5) - momentum(sys, 3) * momentum(sys, 6)});
        out.push_back(std::move(s));
    } else if (name == "hyp6") {
        auto w = frame_of(sys);
        PhasePolynomial C = w[3] * w[4] - w[2] * w[5];
        IntegralSet s{name,
                      {{"H", H},
                       {"C", C},
                       {"I3", momentum(sys, 3)},
                       {"I4", momentum(sys, 4)},
                       {"I5", momentum(sys, 5)},
                       {"I6", momentum(sys, 6)}},
                      true,
                      5, // the family of 6 is functionally dependent
                      {},
                      {}};
        s.identities.push_back({"C = I4 I5 - I3 I6",
                                C,
                                momentum(sys, 4) * momentum(sys, 5) -
                                    momentum(sys, 3) * momentum(sys, 6)});
        out.push_back(std::move(s));
    } else if (name == "par6" || name == "gen6") {
        out.push_back(noether_family(sys));
    } else if (name == "dim7") {
        IntegralSet s = noether_family(sys);
        auto w = frame_of(sys);
        // cubic Casimir w3 (w6^2 + w7^2) - (w4^2 - w5^2) w6 / 2 - w4 w5 w7
        PhasePolynomial cas = w[2] * (w[5] * w[5] + w[6] * w[6]) -
                              half_of((w[3] * w[3] - w[4] * w[4]) * w[5]) -
                              w[3] * w[4] * w[6];
        s.extras.push_back({"Casimir3", cas});
        out.push_back(std::move(s));
    } else if (name == "dim8_23568") {
        const auto& om = sys.realization->omegas;
        std::vector<PhasePolynomial> w;
        for (const auto& o : om) w.push_back(*o);
        PhasePolynomial I7 = w[0] * w[7] - w[1] * w[6] + w[2] * w[5] -
                             half_of(w[3] * w[3] + w[4] * w[4]);
        PhasePolynomial I8 = w[0] * w[4] - w[1] * w[3] + half_of(w[2] * w[2]);
        IntegralSet s{name, {{"H", H}}, true, 8, {}, {}};
        for (int i = 4; i <= 8; ++i)
            s.members.push_back({"I" + std::to_string(i - 2), momentum(sys, i)});
        s.members.push_back({"I7", I7});
        s.members.push_back({"I8", I8});
        PhasePolynomial C = w[3] * w[6] + w[4] * w[7] - half_of(w[5] * w[5]);
        s.identities.push_back(
            {"C = I2 I5 + I3 I6 - I4^2/2",
             C,
             momentum(sys, 4) * momentum(sys, 7) + momentum(sys, 5) * momentum(sys, 8) -
                 half_of(momentum(sys, 6) * momentum(sys, 6))});
        out.push_back(std::move(s));
    } else if (name == "dim8_2358") {
        out.push_back(noether_family(sys));
    } else {
        throw input_error("no integral catalog for system '" + name + "'");
    }
    return out;
}

} // namespace srflow::integrals
