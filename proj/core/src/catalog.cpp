#include <functional>
#include <map>

#include "srflow/carnot.hpp"
#include "srflow/errors.hpp"

namespace srflow::carnot {

namespace {

struct EntrySpec {
    int D;
    std::vector<int> grading;
    std::vector<BracketTerm> brackets;
    std::string u1, u2;
    std::vector<std::string> full_omegas; // empty -> only u1, u2 are transcribed
    std::map<int, std::string> thetas;
    int eps = -1;
    bool obstruct_ready = true;
};

SRSystem build(const std::string& name, const EntrySpec& e) {
    const int D = e.D;
    SRSystem sys{name,
                 CarnotAlgebra{name, D, e.grading, e.brackets},
                 PhasePolynomial(D, D),
                 PhasePolynomial::parse(e.u1, D, D),
                 PhasePolynomial::parse(e.u2, D, D),
                 e.obstruct_ready,
                 {},
                 std::nullopt};
    sys.hamiltonian2 = sys.u1 * sys.u1 + sys.u2 * sys.u2;
    for (int i = 3; i <= D; ++i) sys.noether_momenta.push_back(i);
    CoordinateRealization real;
    real.sign_flag = e.eps;
    real.omegas.resize(D);
    if (!e.full_omegas.empty()) {
        for (int i = 0; i < D; ++i)
            real.omegas[i] = PhasePolynomial::parse(e.full_omegas[i], D, D);
    } else {
        real.omegas[0] = sys.u1;
        real.omegas[1] = sys.u2;
    }
    for (const auto& [i, expr] : e.thetas)
        real.thetas.emplace(i, PhasePolynomial::parse(expr, D, D));
    sys.realization = std::move(real);
    return sys;
}

const std::map<std::string, EntrySpec>& entries() {
    static const std::map<std::string, EntrySpec> table = [] {
        std::map<std::string, EntrySpec> t;
        t["heis3"] = {
            3,
            {2, 1},
            {{1, 2, 3, Rational(1)}},
            "p1 + x2 p3",
            "p2",
            {"p1 + x2 p3", "p2", "p3"},
            {{1, "p1"}, {2, "p2 + x1 p3"}, {3, "p3"}},
            +1,
            true,
        };
        t["engel"] = {
            4,
            {2, 1, 1},
            {{1, 2, 3, Rational(1)}, {1, 3, 4, Rational(1)}},
            "p1 + x2 p3 + x3 p4",
            "p2",
            {"p1 + x2 p3 + x3 p4", "p2", "p3", "p4"},
            {{1, "-p1"},
             {2, "p2 + x1 p3 + 1/2 x1^2 p4"},
             {3, "p3 + x1 p4"},
             {4, "p4"}},
            +1,
            false, // the Hamiltonian involves x3
        };
        t["cartan5"] = {
            5,
            {2, 1, 2},
            {{1, 2, 3, Rational(1)}, {1, 3, 4, Rational(1)}, {2, 3, 5, Rational(1)}},
            "p1 - 1/2 x2 p3 - x1 x2 p4",
            "p2 + 1/2 x1 p3 + x1 x2 p5",
            {},
            {{3, "p3"}, {4, "p4"}, {5, "p5"}},
            -1,
            true,
        };
        t["ell6"] = {
            6,
            {2, 1, 2, 1},
            {{1, 2, 3, Rational(1)},
             {1, 3, 4, Rational(1)},
             {2, 3, 5, Rational(1)},
             {1, 4, 6, Rational(1)},
             {2, 5, 6, Rational(1)}},
            "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6",
            "p2 + 1/2 x1 p3 + x1 x2 p5 + 1/2 x1 x2^2 p6",
            {},
            {{3, "p3"}, {4, "p4"}, {5, "p5"}, {6, "p6"}},
            -1,
            true,
        };
        t["par6"] = {
            6,
            {2, 1, 2, 1},
            {{1, 2, 3, Rational(1)},
             {1, 3, 4, Rational(1)},
             {2, 3, 5, Rational(1)},
             {1, 4, 6, Rational(1)}},
            "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6",
            "p2 + 1/2 x1 p3 + x1 x2 p5",
            {},
            {{3, "p3"}, {4, "p4"}, {5, "p5"}, {6, "p6"}},
            -1,
            true,
        };
        t["hyp6"] = {
            6,
            {2, 1, 2, 1},
            {{1, 2, 3, Rational(1)},
             {1, 3, 4, Rational(1)},
             {2, 3, 5, Rational(1)},
             {1, 5, 6, Rational(1)},
             {2, 4, 6, Rational(1)}},
            "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/4 x1 x2^2 p6",
            "p2 + 1/2 x1 p3 + x1 x2 p5 + 1/4 x1^2 x2 p6",
            {},
            {{3, "p3"}, {4, "p4"}, {5, "p5"}, {6, "p6"}},
            -1,
            true,
        };
        t["dim7"] = {
            7,
            {2, 1, 2, 2},
            {{1, 2, 3, Rational(1)},
             {1, 3, 4, Rational(1)},
             {2, 3, 5, Rational(1)},
             {1, 4, 6, Rational(1)},
             {2, 5, 6, Rational(-1)},
             {1, 5, 7, Rational(1)},
             {2, 4, 7, Rational(1)}},
            "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6 - 1/4 x1 x2^2 p7",
            "p2 + 1/2 x1 p3 + x1 x2 p5 - 1/2 x1 x2^2 p6 + 1/4 x1^2 x2 p7",
            {},
            {{3, "p3"}, {4, "p4"}, {5, "p5"}, {6, "p6"}, {7, "p7"}},
            -1,
            true,
        };
        t["dim8_23568"] = {
            8,
            {2, 1, 2, 1, 2},
            {{1, 2, 3, Rational(1)},
             {1, 3, 4, Rational(1)},
             {2, 3, 5, Rational(1)},
             {1, 4, 6, Rational(1)},
             {2, 5, 6, Rational(1)},
             {1, 6, 7, Rational(1)},
             {2, 6, 8, Rational(1)},
             {3, 4, 8, Rational(-1)},
             {3, 5, 7, Rational(1)}},
            "p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6 - 1/5 x1^2 x3 p7 - 2/5 x2^2 x3 p7 "
            "+ 1/5 x1 x2 x3 p8",
            "p2 + 1/2 x1 p3 + x1 x2 p5 + 1/2 x1 x2^2 p6 + 1/5 x1 x2 x3 p7 - 2/5 x1^2 x3 p8 "
            "- 1/5 x2^2 x3 p8",
            {"p1 - 1/2 x2 p3 - x1 x2 p4 - 1/2 x1^2 x2 p6 - 1/5 x1^2 x3 p7 - 2/5 x2^2 x3 p7 "
             "+ 1/5 x1 x2 x3 p8",
             "p2 + 1/2 x1 p3 + x1 x2 p5 + 1/2 x1 x2^2 p6 + 1/5 x1 x2 x3 p7 - 2/5 x1^2 x3 p8 "
             "- 1/5 x2^2 x3 p8",
             "p3 + x1 p4 + x2 p5 + 1/2 x1^2 p6 + 1/2 x2^2 p6 + 1/10 x1^3 p7 + 1/10 x1 x2^2 p7 "
             "+ x2 x3 p7 + 1/10 x1^2 x2 p8 + 1/10 x2^3 p8 - x1 x3 p8",
             "p4 + x1 p6 + 1/2 x1^2 p7 + 1/2 x1 x2 p8 - x3 p8",
             "p5 + x2 p6 + 1/2 x1 x2 p7 + x3 p7 + 1/2 x2^2 p8",
             "p6 + x1 p7 + x2 p8",
             "p7",
             "p8"},
            {{4, "p4"}, {5, "p5"}, {6, "p6"}, {7, "p7"}, {8, "p8"}},
            -1,
            false, // omegas involve x3
        };
        t["dim8_2358"] = {
            8,
            {2, 1, 2, 3},
            {{1, 2, 3, Rational(1)},
             {1, 3, 4, Rational(1)},
             {2, 3, 5, Rational(1)},
             {1, 4, 6, Rational(1)},
             {1, 5, 7, Rational(1)},
             {2, 4, 7, Rational(1)},
             {2, 5, 8, Rational(1)}},
            "p1 - 1/2 x2 p3 - 1/2 x1^2 p5 - 1/2 x2^2 p5 - 1/4 x1 x2^2 p7 - 1/6 x2^3 p8",
            "p2 + 1/2 x1 p3 + 1/2 x1^2 p4 + 1/2 x2^2 p4 + 1/6 x1^3 p6 + 1/4 x1^2 x2 p7",
            {},
            {{3, "p3"}, {4, "p4"}, {5, "p5"}, {6, "p6"}, {7, "p7"}, {8, "p8"}},
            -1,
            true,
        };
        return t;
    }();
    return table;
}

} // namespace

std::vector<std::string> catalog_names() {
    std::vector<std::string> names;
    for (const auto& [n, e] : entries()) names.push_back(n);
    names.push_back("gen6");
    std::sort(names.begin(), names.end());
    return names;
}

SRSystem catalog_lookup(const std::string& name, std::optional<Rational> a,
                        std::optional<Rational> b) {
    if (name == "gen6") {
        if (!a || !b) throw input_error("gen6 needs parameters a and b");
        if (b->is_zero()) throw input_error("gen6 requires b != 0");
        SRSystem sys = build("gen6", entries().at("ell6"));
        sys.name = "gen6";
        sys.algebra.name = "gen6";
        // 2H = w1^2 + (a w1 + b w2)^2 over the elliptic frame
        PhasePolynomial w1 = *sys.realization->omegas[0];
        PhasePolynomial w2 = *sys.realization->omegas[1];
        sys.u1 = w1;
        sys.u2 = w1.scale(*a) + w2.scale(*b);
        sys.hamiltonian2 = sys.u1 * sys.u1 + sys.u2 * sys.u2;
        sys.realization->thetas.clear();
        return sys;
    }
    auto it = entries().find(name);
    if (it == entries().end()) throw input_error("unknown system '" + name + "'");
    if (a || b) throw input_error("system '" + name + "' takes no parameters");
    return build(name, it->second);
}

} // namespace srflow::carnot
