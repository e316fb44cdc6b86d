#include "srflow/carnot.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "srflow/errors.hpp"

namespace srflow::carnot {

int CarnotAlgebra::layer_of(int i) const {
    int idx = i;
    for (std::size_t l = 0; l < grading.size(); ++l) {
        idx -= grading[l];
        if (idx <= 0) return static_cast<int>(l) + 1;
    }
    throw input_error("basis index " + std::to_string(i) + " beyond the grading");
}

std::map<int, Rational> CarnotAlgebra::bracket(int i, int j) const {
    std::map<int, Rational> out;
    int sign = 1;
    if (i == j) return out;
    if (i > j) {
        std::swap(i, j);
        sign = -1;
    }
    for (const auto& b : brackets) {
        if (b.i == i && b.j == j) {
            auto [it, fresh] = out.emplace(b.k, Rational(sign) * b.c);
            if (!fresh) it->second += Rational(sign) * b.c;
        }
    }
    for (auto it = out.begin(); it != out.end();) {
        if (it->second.is_zero()) it = out.erase(it);
        else ++it;
    }
    return out;
}

namespace {

/// Exact rank of a small dense rational matrix (rows as vectors).
int dense_rank(std::vector<std::vector<Rational>> rows) {
    if (rows.empty()) return 0;
    const std::size_t cols = rows[0].size();
    int rank = 0;
    std::size_t rpos = 0;
    for (std::size_t c = 0; c < cols && rpos < rows.size(); ++c) {
        std::size_t piv = rpos;
        while (piv < rows.size() && rows[piv][c].is_zero()) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[rpos], rows[piv]);
        for (std::size_t r = 0; r < rows.size(); ++r) {
            if (r == rpos || rows[r][c].is_zero()) continue;
            Rational f = rows[r][c] / rows[rpos][c];
            for (std::size_t cc = c; cc < cols; ++cc)
                rows[r][cc] -= f * rows[rpos][cc];
        }
        ++rpos;
        ++rank;
    }
    return rank;
}

} // namespace

ValidationReport validate_algebra(const CarnotAlgebra& alg) {
    const int D = alg.dim;
    if (D <= 0) throw input_error("algebra dimension must be positive");
    int gsum = 0;
    for (int g : alg.grading) {
        if (g <= 0) throw input_error("grading layers must be positive");
        gsum += g;
    }
    if (gsum != D) throw input_error("grading does not sum to the dimension");
    for (const auto& b : alg.brackets) {
        if (b.i < 1 || b.j < 1 || b.k < 1 || b.i > D || b.j > D || b.k > D)
            throw input_error("bracket index out of range");
        if (b.i >= b.j)
            throw input_error("brackets must be stored with i < j");
    }

    ValidationReport rep;
    auto push = [&rep](const std::string& name, bool ok, std::string detail = "") {
        rep.checks.push_back({name, ok, std::move(detail)});
    };

    // grading compatibility: [g_a, g_b] inside g_{a+b}
    {
        bool ok = true;
        std::string detail;
        for (const auto& b : alg.brackets) {
            if (b.c.is_zero()) continue;
            int want = alg.layer_of(b.i) + alg.layer_of(b.j);
            if (want > static_cast<int>(alg.grading.size()) || alg.layer_of(b.k) != want) {
                ok = false;
                std::ostringstream os;
                os << "[e" << b.i << ",e" << b.j << "] hits e" << b.k << " (layer "
                   << alg.layer_of(b.k) << ", expected layer " << want << ")";
                detail = os.str();
                break;
            }
        }
        push("grading-compatibility", ok, detail);
    }

    // Jacobi: [[ei,ej],ek] + [[ej,ek],ei] + [[ek,ei],ej] = 0
    {
        bool ok = true;
        std::string detail;
        for (int i = 1; i <= D && ok; ++i)
            for (int j = i + 1; j <= D && ok; ++j)
                for (int k = j + 1; k <= D && ok; ++k) {
                    std::vector<Rational> total(D + 1, Rational(0));
                    auto acc = [&](int a, int b, int c) {
                        for (const auto& [l, cl] : alg.bracket(a, b))
                            for (const auto& [m, cm] : alg.bracket(l, c))
                                total[m] += cl * cm;
                    };
                    acc(i, j, k);
                    acc(j, k, i);
                    acc(k, i, j);
                    for (int m = 1; m <= D; ++m) {
                        if (!total[m].is_zero()) {
                            ok = false;
                            std::ostringstream os;
                            os << "jacobi fails on (e" << i << ",e" << j << ",e" << k
                               << "), component e" << m;
                            detail = os.str();
                            break;
                        }
                    }
                }
        push("jacobi", ok, detail);
    }

    // bracket generation by the first layer
    {
        auto gv = growth_vector(alg);
        bool ok = !gv.empty() && gv.back() == D;
        for (std::size_t i = 1; i < gv.size(); ++i)
            if (gv[i] <= gv[i - 1]) ok = false;
        push("bracket-generation", ok,
             ok ? "" : "first layer does not generate the whole algebra");
    }

    rep.passed = std::all_of(rep.checks.begin(), rep.checks.end(),
                             [](const ValidationCheck& c) { return c.passed; });
    return rep;
}

std::vector<int> growth_vector(const CarnotAlgebra& alg) {
    const int D = alg.dim;
    const int n1 = alg.grading.empty() ? D : alg.grading[0];
    // span vectors in Q^D; start with e_1..e_{n1}
    std::vector<std::vector<Rational>> span;
    for (int i = 1; i <= n1; ++i) {
        std::vector<Rational> v(D, Rational(0));
        v[i - 1] = Rational(1);
        span.push_back(v);
    }
    std::vector<int> growth;
    int prev = dense_rank(span);
    growth.push_back(prev);
    while (true) {
        // bracket g_1 with everything currently in the span; the span basis
        // stays the standard e_i directions because the flag is graded, but
        // we work with general vectors to keep this correct for any input.
        std::vector<std::vector<Rational>> next = span;
        for (int i = 1; i <= n1; ++i) {
            for (const auto& v : span) {
                std::vector<Rational> w(D, Rational(0));
                for (int j = 1; j <= D; ++j) {
                    if (v[j - 1].is_zero() || i == j) continue;
                    for (const auto& [k, c] : alg.bracket(i, j))
                        w[k - 1] += v[j - 1] * c;
                }
                bool nz = std::any_of(w.begin(), w.end(),
                                      [](const Rational& r) { return !r.is_zero(); });
                if (nz) next.push_back(w);
            }
        }
        int r = dense_rank(next);
        if (r == prev) break;
        growth.push_back(r);
        span = std::move(next);
        prev = r;
        if (r == D) break;
    }
    return growth;
}

RealizationReport verify_realization(const SRSystem& sys) {
    RealizationReport rep;
    if (!sys.realization) {
        rep.detail = "no realization provided";
        return rep;
    }
    const auto& real = *sys.realization;
    const auto& alg = sys.algebra;
    const int D = alg.dim;
    const int nx = sys.hamiltonian2.num_base_vars();
    const int np = sys.hamiltonian2.num_momenta();

    bool full = true;
    for (int i = 0; i < D; ++i)
        if (static_cast<int>(real.omegas.size()) <= i || !real.omegas[i]) full = false;

    std::vector<PhasePolynomial> w;
    auto p_var = [&](int i) { return PhasePolynomial::variable(nx, np, Var::p(i)); };

    if (full) {
        for (int i = 0; i < D; ++i) w.push_back(*real.omegas[i]);
        // origin normalization omega_i(o) = p_i
        std::map<Var, Rational> origin;
        for (int i = 1; i <= nx; ++i) origin.emplace(Var::x(i), Rational(0));
        for (int i = 0; i < D; ++i) {
            if (w[i].substitute(origin) != p_var(i + 1)) {
                rep.detail = "omega_" + std::to_string(i + 1) + " is not p_" +
                             std::to_string(i + 1) + " at the origin";
                return rep;
            }
        }
        for (int eps : {+1, -1}) {
            bool ok = true;
            for (int i = 1; i <= D && ok; ++i)
                for (int j = i + 1; j <= D && ok; ++j) {
                    PhasePolynomial rhs(nx, np);
                    for (const auto& [k, c] : alg.bracket(i, j))
                        rhs = rhs + w[k - 1].scale(Rational(eps) * c);
                    if (poisson_bracket(w[i - 1], w[j - 1]) != rhs) {
                        ok = false;
                        if (!rep.detail.empty()) rep.detail += "; ";
                        rep.detail += "eps=" + std::to_string(eps) + " fails at pair (" +
                                      std::to_string(i) + "," + std::to_string(j) + ")";
                    }
                }
            if (ok) {
                rep.passed = true;
                rep.eps = eps;
                rep.detail.clear();
                break;
            }
        }
    } else {
        // closure from omega_1, omega_2; single-target brackets define the rest
        if (real.omegas.size() < 2 || !real.omegas[0] || !real.omegas[1]) {
            rep.detail = "need at least omega_1 and omega_2";
            return rep;
        }
        rep.closure_used = true;
        std::vector<std::optional<PhasePolynomial>> wv(D);
        wv[0] = *real.omegas[0];
        wv[1] = *real.omegas[1];
        bool changed = true;
        while (changed) {
            changed = false;
            for (int i = 1; i <= D; ++i)
                for (int j = i + 1; j <= D; ++j) {
                    if (!wv[i - 1] || !wv[j - 1]) continue;
                    auto br = alg.bracket(i, j);
                    if (br.size() != 1) continue;
                    auto [k, c] = *br.begin();
                    if (wv[k - 1]) continue;
                    wv[k - 1] = poisson_bracket(*wv[i - 1], *wv[j - 1])
                                    .scale(Rational(1) / c);
                    changed = true;
                }
        }
        for (int i = 0; i < D; ++i) {
            if (!wv[i]) {
                rep.detail = "closure could not reach e_" + std::to_string(i + 1);
                return rep;
            }
            w.push_back(*wv[i]);
        }
        // all pairs must close with no sign (closure absorbs eps)
        for (int i = 1; i <= D; ++i)
            for (int j = i + 1; j <= D; ++j) {
                PhasePolynomial rhs(nx, np);
                for (const auto& [k, c] : alg.bracket(i, j))
                    rhs = rhs + w[k - 1].scale(c);
                if (poisson_bracket(w[i - 1], w[j - 1]) != rhs) {
                    rep.detail = "closure bracket (" + std::to_string(i) + "," +
                                 std::to_string(j) + ") does not match the structure constants";
                    return rep;
                }
            }
        // derived frame satisfies w_k(o) = eps^(layer-1) p_k
        std::map<Var, Rational> origin;
        for (int i = 1; i <= nx; ++i) origin.emplace(Var::x(i), Rational(0));
        int eps = 0;
        for (int k = 1; k <= D; ++k) {
            PhasePolynomial at0 = w[k - 1].substitute(origin);
            int s;
            if (at0 == p_var(k)) s = +1;
            else if (at0 == -p_var(k)) s = -1;
            else {
                rep.detail = "omega_" + std::to_string(k) + " is not +-p_" +
                             std::to_string(k) + " at the origin";
                return rep;
            }
            int layer = alg.layer_of(k);
            if (layer % 2 == 1) { // eps^(layer-1) = +1
                if (s != +1) {
                    rep.detail = "origin sign of omega_" + std::to_string(k) +
                                 " breaks the sign pattern";
                    return rep;
                }
            } else {
                if (eps == 0) eps = s;
                else if (eps != s) {
                    rep.detail = "no single sign fits the derived frame";
                    return rep;
                }
            }
        }
        rep.eps = (eps == 0) ? +1 : eps;
        rep.passed = true;
    }

    if (!rep.passed) {
        if (rep.detail.empty()) rep.detail = "bracket relations fail for both signs";
        return rep;
    }

    // {omega_i, theta_j} = 0 for every provided theta
    for (const auto& [j, th] : real.thetas) {
        for (int i = 1; i <= D; ++i) {
            if (!poisson_bracket(w[i - 1], th).is_zero()) {
                rep.passed = false;
                rep.detail = "{omega_" + std::to_string(i) + ", theta_" +
                             std::to_string(j) + "} != 0";
                return rep;
            }
        }
    }
    rep.frame = std::move(w);
    return rep;
}

// ---- algebra text files --------------------------------------------------

AlgebraFile load_algebra_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw input_error("cannot open algebra file '" + path + "'");
    AlgebraFile out;
    out.algebra.name = path;
    int D = -1;
    std::vector<std::pair<int, std::string>> omega_lines, theta_lines;
    std::string ham_line;
    std::string line;
    int lineno = 0;
    auto bad = [&](const std::string& what) {
        throw input_error(path + ":" + std::to_string(lineno) + ": " + what);
    };
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        std::istringstream ls(line);
        std::string key;
        if (!(ls >> key)) continue;
        if (key == "dim") {
            if (!(ls >> D) || D <= 0) bad("bad 'dim' line");
            out.algebra.dim = D;
        } else if (key == "grading") {
            int g;
            while (ls >> g) out.algebra.grading.push_back(g);
            if (out.algebra.grading.empty()) bad("empty grading");
        } else if (key == "bracket") {
            int i, j, k;
            std::string c;
            if (!(ls >> i >> j >> k >> c)) bad("bad 'bracket' line");
            out.algebra.brackets.push_back({i, j, k, Rational::parse(c)});
        } else if (key == "omega" || key == "theta") {
            int i;
            std::string eq;
            if (!(ls >> i >> eq) || eq != "=") bad("expected '" + key + " i = <expr>'");
            std::string expr;
            std::getline(ls, expr);
            if (key == "omega") omega_lines.emplace_back(i, expr);
            else theta_lines.emplace_back(i, expr);
        } else if (key == "hamiltonian2") {
            std::string eq;
            if (!(ls >> eq) || eq != "=") bad("expected 'hamiltonian2 = <expr>'");
            std::getline(ls, ham_line);
        } else {
            bad("unknown directive '" + key + "'");
        }
    }
    if (D <= 0) throw input_error(path + ": missing 'dim' line");
    out.omegas.resize(D);
    for (auto& [i, expr] : omega_lines) {
        if (i < 1 || i > D) throw input_error(path + ": omega index out of range");
        out.omegas[i - 1] = PhasePolynomial::parse(expr, D, D);
    }
    for (auto& [i, expr] : theta_lines) {
        if (i < 1 || i > D) throw input_error(path + ": theta index out of range");
        out.thetas.emplace(i, PhasePolynomial::parse(expr, D, D));
    }
    if (!ham_line.empty())
        out.hamiltonian2 = PhasePolynomial::parse(ham_line, D, D);
    return out;
}

SRSystem system_from_file(const AlgebraFile& file, const std::string& name) {
    const int D = file.algebra.dim;
    SRSystem sys{name,
                 file.algebra,
                 PhasePolynomial(D, D),
                 PhasePolynomial(D, D),
                 PhasePolynomial(D, D),
                 false,
                 {},
                 std::nullopt};
    if (file.hamiltonian2) {
        sys.hamiltonian2 = *file.hamiltonian2;
    } else if (file.omegas.size() >= 2 && file.omegas[0] && file.omegas[1]) {
        sys.u1 = *file.omegas[0];
        sys.u2 = *file.omegas[1];
        sys.hamiltonian2 = sys.u1 * sys.u1 + sys.u2 * sys.u2;
    } else {
        throw input_error("algebra file provides neither hamiltonian2 nor omega 1, omega 2");
    }
    if (file.omegas.size() >= 2 && file.omegas[0] && file.omegas[1]) {
        sys.u1 = *file.omegas[0];
        sys.u2 = *file.omegas[1];
    }
    bool ready = true;
    for (int i = 3; i <= D; ++i)
        if (sys.hamiltonian2.depends_on(Var::x(i))) ready = false;
    sys.obstruct_ready = ready;
    for (int i = 3; i <= D; ++i) sys.noether_momenta.push_back(i);
    bool any_omega = false;
    for (const auto& o : file.omegas)
        if (o) any_omega = true;
    if (any_omega || !file.thetas.empty()) {
        CoordinateRealization real;
        real.omegas = file.omegas;
        real.thetas = file.thetas;
        sys.realization = std::move(real);
    }
    return sys;
}

} // namespace srflow::carnot
