#include "srflow/obstruct.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <set>
#include <sstream>

#include <json.hpp>

#include "srflow/errors.hpp"
#include "srflow/version.hpp"

namespace srflow::obstruct {

using poly::PhasePolynomial;
using poly::Var;

long long binomial(long long n, long long k) {
    if (k < 0 || k > n) return 0;
    k = std::min(k, n - k);
    long long r = 1;
    for (long long i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

long long trivial_count(int D, int d) {
    if (D < 3 || d < 0) throw input_error("trivial_count needs D >= 3, d >= 0");
    long long total = 0;
    for (int i = 0; 2 * i <= d; ++i) total += binomial(d - 2 * i + D - 3, D - 3);
    return total;
}

long long prolonged_rows(int D, int d, int k) {
    return binomial(d + D, D - 1) * binomial(k + 2, 2);
}

long long prolonged_cols(int D, int d, int k) {
    return binomial(d + D - 1, D - 1) * binomial(k + 3, 2);
}

std::vector<std::vector<std::uint8_t>> momentum_multi_indices(int D, int deg) {
    std::vector<std::vector<std::uint8_t>> out;
    std::vector<std::uint8_t> cur(D, 0);
    auto rec = [&](auto&& self, int pos, int rem) -> void {
        if (pos == D - 1) {
            cur[pos] = static_cast<std::uint8_t>(rem);
            out.push_back(cur);
            return;
        }
        for (int e = rem; e >= 0; --e) {
            cur[pos] = static_cast<std::uint8_t>(e);
            self(self, pos + 1, rem - e);
        }
    };
    rec(rec, 0, deg);
    return out;
}

std::vector<std::pair<int, int>> jet_multi_indices(int order) {
    std::vector<std::pair<int, int>> out;
    for (int t = 0; t <= order; ++t)
        for (int a = t; a >= 0; --a) out.emplace_back(a, t - a);
    return out;
}

PdeSystem build_pde_system(const carnot::SRSystem& sys, int d) {
    if (!sys.obstruct_ready)
        throw precondition_error("system '" + sys.name +
                                 "' is not obstruct-ready (H involves x_j, j >= 3)");
    if (d < 1) throw input_error("ansatz degree must be >= 1");
    const int D = sys.algebra.dim;
    auto [P, scale] = sys.hamiltonian2.clear_denominators();
    (void)scale;
    if (!P.homogeneous_in_momenta(2))
        throw precondition_error("Hamiltonian is not homogeneous of degree 2 in momenta");

    PdeSystem out;
    out.D = D;
    out.d = d;

    // Momentum-monomial expansions of dP/dx_i (degree 2 in p) and dP/dp_i
    // (degree 1 in p), i = 1, 2, with x-polynomial coefficients.
    using XPoly = std::vector<PdeSystem::XTerm>;
    std::array<std::map<std::vector<std::uint8_t>, XPoly>, 2> A, B;
    for (int i = 0; i < 2; ++i) {
        auto split = [&](const PhasePolynomial& f,
                         std::map<std::vector<std::uint8_t>, XPoly>& table) {
            for (const auto& [e, c] : f.terms()) {
                if (!c.is_integer())
                    throw internal_error("scaled Hamiltonian has a non-integer coefficient");
                BigInt num = c.numerator();
                if (!num.fits_slong_p())
                    throw internal_error("Hamiltonian coefficient exceeds word size");
                for (int j = 2; j < D; ++j)
                    if (e[j] != 0)
                        throw precondition_error("Hamiltonian involves x_" +
                                                 std::to_string(j + 1));
                std::vector<std::uint8_t> nu(e.begin() + D, e.end());
                table[nu].push_back({static_cast<std::uint8_t>(e[0]),
                                     static_cast<std::uint8_t>(e[1]),
                                     static_cast<long long>(num.get_si())});
            }
        };
        split(P.derivative(Var::x(i + 1)), A[i]);
        split(P.derivative(Var::p(i + 1)), B[i]);
    }

    const auto taus = momentum_multi_indices(D, d);
    const auto mus = momentum_multi_indices(D, d + 1);
    std::map<std::vector<std::uint8_t>, std::uint32_t> tau_index;
    for (std::uint32_t t = 0; t < taus.size(); ++t) tau_index.emplace(taus[t], t);

    out.zero_order.resize(mus.size());
    out.first_order[0].resize(mus.size());
    out.first_order[1].resize(mus.size());

    std::vector<std::uint8_t> tau(D);
    for (std::size_t mi = 0; mi < mus.size(); ++mi) {
        const auto& mu = mus[mi];
        for (int i = 0; i < 2; ++i) {
            // {P,F} zero-order part: dP/dx_i * dF/dp_i with
            // dF/dp_i = sum_tau tau_i a_tau p^(tau - e_i); tau = mu - nu + e_i
            for (const auto& [nu, xp] : A[i]) {
                bool ok = true;
                for (int j = 0; j < D; ++j) {
                    int v = static_cast<int>(mu[j]) - static_cast<int>(nu[j]) + (j == i ? 1 : 0);
                    if (v < 0) {
                        ok = false;
                        break;
                    }
                    tau[j] = static_cast<std::uint8_t>(v);
                }
                if (!ok) continue;
                const long long taui = tau[i];
                if (taui == 0) continue;
                auto it = tau_index.find(tau);
                if (it == tau_index.end()) continue;
                XPoly scaled = xp;
                for (auto& t : scaled) t.coeff *= taui;
                out.zero_order[mi].push_back({it->second, std::move(scaled)});
            }
            // first-order part: -dP/dp_i * dF/dx_i; tau = mu - nu
            for (const auto& [nu, xp] : B[i]) {
                bool ok = true;
                for (int j = 0; j < D; ++j) {
                    int v = static_cast<int>(mu[j]) - static_cast<int>(nu[j]);
                    if (v < 0) {
                        ok = false;
                        break;
                    }
                    tau[j] = static_cast<std::uint8_t>(v);
                }
                if (!ok) continue;
                auto it = tau_index.find(tau);
                if (it == tau_index.end()) continue;
                XPoly negated = xp;
                for (auto& t : negated) t.coeff = -t.coeff;
                out.first_order[i][mi].push_back({it->second, std::move(negated)});
            }
        }
    }
    return out;
}

linalg::SparseIntMatrix prolong_evaluate(const PdeSystem& sys, int k) {
    if (k < 0) throw input_error("prolongation order must be >= 0");
    const auto row_jets = jet_multi_indices(k);
    const auto col_jets = jet_multi_indices(k + 1);
    std::map<std::pair<int, int>, std::uint32_t> col_jet_index;
    for (std::uint32_t j = 0; j < col_jets.size(); ++j) col_jet_index.emplace(col_jets[j], j);

    const std::size_t n_mu = sys.zero_order.size();
    const std::size_t n_rows = n_mu * row_jets.size();
    const std::size_t n_cols =
        static_cast<std::size_t>(sys.num_unknowns()) * col_jets.size();
    linalg::SparseIntMatrix m(n_rows, n_cols);

    // falling factorial s!/(s-b)!
    auto ff = [](int s, int b) {
        long r = 1;
        for (int i = 0; i < b; ++i) r *= (s - i);
        return r;
    };
    const auto njc = static_cast<std::uint32_t>(col_jets.size());

    linalg::SparseIntMatrix::Row row;
    for (std::size_t mi = 0; mi < n_mu; ++mi) {
        for (std::size_t si = 0; si < row_jets.size(); ++si) {
            const auto [s1, s2] = row_jets[si];
            row.clear();
            for (const auto& term : sys.zero_order[mi]) {
                for (const auto& xt : term.poly) {
                    if (xt.bx > s1 || xt.by > s2) continue;
                    const long w = ff(s1, xt.bx) * ff(s2, xt.by) * static_cast<long>(xt.coeff);
                    const std::uint32_t jet =
                        col_jet_index.at({s1 - xt.bx, s2 - xt.by});
                    row.emplace_back(term.tau * njc + jet, BigInt(w));
                }
            }
            for (int i = 0; i < 2; ++i) {
                for (const auto& term : sys.first_order[i][mi]) {
                    for (const auto& xt : term.poly) {
                        if (xt.bx > s1 || xt.by > s2) continue;
                        const long w =
                            ff(s1, xt.bx) * ff(s2, xt.by) * static_cast<long>(xt.coeff);
                        const std::uint32_t jet = col_jet_index.at(
                            {s1 - xt.bx + (i == 0 ? 1 : 0), s2 - xt.by + (i == 1 ? 1 : 0)});
                        row.emplace_back(term.tau * njc + jet, BigInt(w));
                    }
                }
            }
            m.set_row(mi * row_jets.size() + si, std::move(row));
            row = {};
        }
    }
    return m;
}

// ---- reduction pipeline ---------------------------------------------------

namespace {

/// One generic pipeline over an abstract field: Value is either BigInt (Q)
/// or uint64_t residues (GF(p)). Ops differ only in how a bimonomial
/// substitution rescales rows.
template <class Row>
struct Cascade {
    std::vector<Row>& rows;
    std::size_t ncols;
    std::vector<char> live;
    std::vector<std::vector<std::uint32_t>> col_rows;
    std::vector<std::uint32_t> col_count;
    std::deque<std::uint32_t> work;
    std::vector<char> queued;
    long long v_mon = 0, v_bimon = 0;
    std::vector<char> col_consumed; // killed or merged away

    Cascade(std::vector<Row>& r, std::size_t n)
        : rows(r), ncols(n), live(r.size(), 1), col_rows(n), col_count(n, 0),
          queued(r.size(), 0), col_consumed(n, 0) {
        for (std::uint32_t i = 0; i < rows.size(); ++i) {
            if (rows[i].empty()) {
                live[i] = 0;
                continue;
            }
            for (const auto& e : rows[i]) {
                col_rows[e.first].push_back(i);
                ++col_count[e.first];
            }
            maybe_enqueue(i);
        }
    }

    void maybe_enqueue(std::uint32_t r) {
        if (live[r] && !queued[r] && rows[r].size() <= 2) {
            work.push_back(r);
            queued[r] = 1;
        }
    }

    std::vector<std::uint32_t> holders(std::uint32_t col) {
        auto& cand = col_rows[col];
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        std::vector<std::uint32_t> out;
        for (auto r : cand) {
            if (!live[r]) continue;
            auto it = std::lower_bound(rows[r].begin(), rows[r].end(), col,
                                       [](const auto& e, std::uint32_t c) { return e.first < c; });
            if (it != rows[r].end() && it->first == col) out.push_back(r);
        }
        cand = out;
        return out;
    }

    void retire_row(std::uint32_t r) {
        for (const auto& e : rows[r]) --col_count[e.first];
        live[r] = 0;
        rows[r].clear();
    }
};

void kill_column_entry(std::vector<linalg::IntRow>& rows, std::uint32_t r, std::uint32_t col) {
    auto& row = rows[r];
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& e, std::uint32_t c) { return e.first < c; });
    row.erase(it);
}

void kill_column_entry(std::vector<linalg::ResidueRow>& rows, std::uint32_t r,
                       std::uint32_t col) {
    auto& row = rows[r];
    auto it = std::lower_bound(row.begin(), row.end(), col,
                               [](const auto& e, std::uint32_t c) { return e.first < c; });
    row.erase(it);
}

void normalize_row(linalg::IntRow& r) {
    if (r.empty()) return;
    BigInt g = 0;
    for (const auto& e : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1) break;
    }
    if (g > 1)
        for (auto& e : r) e.second /= g;
    if (r[0].second < 0)
        for (auto& e : r) e.second = -e.second;
}

// Substitutes u = -(b/a) v into one row holding coefficient g at u.
// Exact: row := a*row (u dropped) with -g*b added at v, then content-stripped.
void fold_bimonomial(linalg::IntRow& row, std::uint32_t u, std::uint32_t v,
                     const BigInt& a, const BigInt& b, std::uint64_t /*p*/) {
    BigInt g;
    linalg::IntRow out;
    out.reserve(row.size() + 1);
    for (auto& e : row) {
        if (e.first == u) g = e.second;
    }
    bool placed = false;
    for (auto& e : row) {
        if (e.first == u) continue;
        if (e.first == v) {
            BigInt nv = a * e.second - g * b;
            if (nv != 0) out.emplace_back(v, std::move(nv));
            placed = true;
        } else {
            if (!placed && e.first > v) {
                BigInt nv = -g * b;
                if (nv != 0) out.emplace_back(v, std::move(nv));
                placed = true;
            }
            out.emplace_back(e.first, a * e.second);
        }
    }
    if (!placed) {
        BigInt nv = -g * b;
        if (nv != 0) out.emplace_back(v, std::move(nv));
        std::sort(out.begin(), out.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
    }
    normalize_row(out);
    row = std::move(out);
}

// GF(p): row[v] += -g * b * a^{-1}; u dropped.
void fold_bimonomial(linalg::ResidueRow& row, std::uint32_t u, std::uint32_t v,
                     const std::uint64_t& a, const std::uint64_t& b, std::uint64_t p) {
    auto mul = [p](std::uint64_t x, std::uint64_t y) {
        return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
    };
    std::uint64_t ainv = 1, base = a % p, e = p - 2;
    while (e) {
        if (e & 1) ainv = mul(ainv, base);
        base = mul(base, base);
        e >>= 1;
    }
    std::uint64_t g = 0;
    for (auto& en : row)
        if (en.first == u) g = en.second;
    std::uint64_t delta = p - mul(mul(g, b % p), ainv);
    if (delta == p) delta = 0;
    linalg::ResidueRow out;
    out.reserve(row.size() + 1);
    bool placed = false;
    for (auto& en : row) {
        if (en.first == u) continue;
        if (en.first == v) {
            std::uint64_t nv = (en.second + delta) % p;
            if (nv) out.emplace_back(v, nv);
            placed = true;
        } else {
            if (!placed && en.first > v) {
                if (delta) out.emplace_back(v, delta);
                placed = true;
            }
            out.emplace_back(en);
        }
    }
    if (!placed && delta) {
        out.emplace_back(v, delta);
        std::sort(out.begin(), out.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
    }
    row = std::move(out);
}

template <class Row>
void run_cascade(Cascade<Row>& c, std::uint64_t p) {
    while (!c.work.empty()) {
        std::uint32_t r = c.work.front();
        c.work.pop_front();
        c.queued[r] = 0;
        if (!c.live[r]) continue;
        if (c.rows[r].empty()) {
            c.live[r] = 0;
            continue;
        }
        if (c.rows[r].size() == 1) {
            // monomial: the unknown is 0; drop the column everywhere
            const std::uint32_t col = c.rows[r][0].first;
            c.retire_row(r);
            ++c.v_mon;
            c.col_consumed[col] = 1;
            for (auto rr : c.holders(col)) {
                kill_column_entry(c.rows, rr, col);
                --c.col_count[col];
                if (c.rows[rr].empty()) c.live[rr] = 0;
                else c.maybe_enqueue(rr);
            }
            c.col_count[col] = 0;
            c.col_rows[col].clear();
        } else if (c.rows[r].size() == 2) {
            // bimonomial a*u + b*v = 0: express the larger column via the
            // smaller and merge it away
            auto e0 = c.rows[r][0];
            auto e1 = c.rows[r][1];
            const std::uint32_t v = e0.first, u = e1.first; // u > v
            const auto a = e1.second;                        // coefficient at u
            const auto b = e0.second;                        // coefficient at v
            c.retire_row(r);
            ++c.v_bimon;
            c.col_consumed[u] = 1;
            for (auto rr : c.holders(u)) {
                // remove old column registrations for rr's entries at v
                bool had_v = false;
                for (const auto& en : c.rows[rr])
                    if (en.first == v) had_v = true;
                fold_bimonomial(c.rows[rr], u, v, a, b, p);
                --c.col_count[u];
                bool has_v = false;
                for (const auto& en : c.rows[rr])
                    if (en.first == v) has_v = true;
                if (has_v && !had_v) {
                    c.col_rows[v].push_back(rr);
                    ++c.col_count[v];
                } else if (!has_v && had_v) {
                    --c.col_count[v];
                }
                if (c.rows[rr].empty()) c.live[rr] = 0;
                else c.maybe_enqueue(rr);
            }
            c.col_count[u] = 0;
            c.col_rows[u].clear();
        }
    }
}

} // namespace

Reduction reduce_system(const linalg::SparseIntMatrix& m, bool modular, std::uint64_t p,
                        long long lambda0) {
    Reduction red;
    red.modular = modular;
    red.p = p;
    red.num_cols = m.num_cols();
    if (modular && (!linalg::is_prime(p) || p >= (1ull << 62)))
        throw input_error("modulus must be a prime below 2^62");

    if (modular) {
        // residues, leading-one normal form, dedupe
        std::set<linalg::ResidueRow> seen;
        auto mul = [p](std::uint64_t x, std::uint64_t y) {
            return static_cast<std::uint64_t>(static_cast<unsigned __int128>(x) * y % p);
        };
        for (std::size_t i = 0; i < m.num_rows(); ++i) {
            linalg::ResidueRow r;
            for (const auto& [c, v] : m.row(i)) {
                std::uint64_t rv = linalg::mod_reduce(v, p);
                if (rv) r.emplace_back(c, rv);
            }
            if (r.empty()) continue;
            std::uint64_t lead = r[0].second, inv = 1, base = lead, e = p - 2;
            while (e) {
                if (e & 1) inv = mul(inv, base);
                base = mul(base, base);
                e >>= 1;
            }
            for (auto& en : r) en.second = mul(en.second, inv);
            if (seen.insert(r).second) red.rrows.push_back(std::move(r));
        }
        red.rows_after_dedupe = static_cast<long long>(red.rrows.size());
        Cascade<linalg::ResidueRow> cas(red.rrows, red.num_cols);
        run_cascade(cas, p);
        red.v_mon = cas.v_mon;
        red.v_bimon = cas.v_bimon;
        long long used = 0;
        for (std::size_t c = 0; c < red.num_cols; ++c)
            if (!cas.col_consumed[c] && cas.col_count[c] > 0) ++used;
        red.v_red = used;
        red.v_spfl = static_cast<long long>(red.num_cols) - red.v_mon - red.v_bimon - used;
        std::vector<linalg::ResidueRow> keep;
        for (std::size_t i = 0; i < red.rrows.size(); ++i)
            if (cas.live[i] && !red.rrows[i].empty()) keep.push_back(std::move(red.rrows[i]));
        red.rrows = std::move(keep);
        red.rows_reduced = static_cast<long long>(red.rrows.size());
    } else {
        std::set<linalg::IntRow> seen;
        for (std::size_t i = 0; i < m.num_rows(); ++i) {
            linalg::IntRow r = m.row(i);
            if (r.empty()) continue;
            normalize_row(r);
            if (seen.insert(r).second) red.rows.push_back(std::move(r));
        }
        red.rows_after_dedupe = static_cast<long long>(red.rows.size());
        Cascade<linalg::IntRow> cas(red.rows, red.num_cols);
        run_cascade(cas, p);
        red.v_mon = cas.v_mon;
        red.v_bimon = cas.v_bimon;
        long long used = 0;
        for (std::size_t c = 0; c < red.num_cols; ++c)
            if (!cas.col_consumed[c] && cas.col_count[c] > 0) ++used;
        red.v_red = used;
        red.v_spfl = static_cast<long long>(red.num_cols) - red.v_mon - red.v_bimon - used;
        std::vector<linalg::IntRow> keep;
        for (std::size_t i = 0; i < red.rows.size(); ++i)
            if (cas.live[i] && !red.rows[i].empty()) keep.push_back(std::move(red.rows[i]));
        red.rows = std::move(keep);
        red.rows_reduced = static_cast<long long>(red.rows.size());
    }
    red.spfl_bound_ok = red.v_spfl >= lambda0;
    return red;
}

std::pair<long long, long long> rank_and_delta(Reduction& red) {
    long long rank;
    if (red.modular)
        rank = static_cast<long long>(
            linalg::rank_residue_rows(std::move(red.rrows), red.num_cols, red.p));
    else
        rank = static_cast<long long>(
            linalg::rank_integer_rows(std::move(red.rows), red.num_cols));
    return {rank, red.v_red + red.v_spfl - rank};
}

std::vector<std::uint64_t> auto_prime_sequence(int count) {
    // splitmix64 with a fixed seed; strictly increasing primes in [31, 2^31)
    std::uint64_t state = 0x5eedf00d5eedf00dull;
    auto next = [&state]() {
        state += 0x9e3779b97f4a7c15ull;
        std::uint64_t z = state;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    };
    std::vector<std::uint64_t> primes;
    std::uint64_t lo = 31;
    const std::uint64_t hi = 1ull << 31;
    while (static_cast<int>(primes.size()) < count) {
        std::uint64_t cand = lo + next() % (hi - lo);
        while (!linalg::is_prime(cand)) ++cand;
        if (cand >= hi) continue;
        primes.push_back(cand);
        lo = cand + 1;
    }
    return primes;
}

namespace {

ObstructionReport decide_single(const carnot::SRSystem& sys, int d, int k, bool modular,
                                std::uint64_t p) {
    const auto t0 = std::chrono::steady_clock::now();
    ObstructionReport rep;
    rep.system = sys.name;
    rep.D = sys.algebra.dim;
    rep.degree = d;
    rep.prolongations = k;
    rep.lambda0 = trivial_count(rep.D, d);
    if (modular) rep.modulus = p;

    PdeSystem pde = build_pde_system(sys, d);
    linalg::SparseIntMatrix m = prolong_evaluate(pde, k);
    rep.num_equations = static_cast<long long>(m.num_rows());
    rep.num_unknowns = static_cast<long long>(m.num_cols());

    Reduction red = reduce_system(m, modular, p, rep.lambda0);
    rep.v_spfl = red.v_spfl;
    rep.v_mon = red.v_mon;
    rep.v_bimon = red.v_bimon;
    rep.v_red = red.v_red;
    rep.rows_after_dedupe = red.rows_after_dedupe;
    rep.rows_reduced = red.rows_reduced;
    rep.spfl_bound_ok = red.spfl_bound_ok;

    auto [rank, delta] = rank_and_delta(red);
    rep.rank_red = rank;
    rep.delta = delta;
    if (delta < rep.lambda0) {
        std::ostringstream os;
        os << "delta = " << delta << " fell below Lambda0 = " << rep.lambda0
           << " for " << sys.name << " d=" << d
           << "; this is mathematically impossible and signals a bug";
        throw internal_error(os.str());
    }
    rep.no_final_integral = (delta == rep.lambda0);
    rep.elapsed_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

} // namespace

ObstructionReport decide(const carnot::SRSystem& sys, int d, const DecideOptions& opts) {
    const int k = opts.k_override.value_or(d + 1);
    switch (opts.mode) {
        case Mode::exact:
            return decide_single(sys, d, k, false, 0);
        case Mode::mod_p:
            return decide_single(sys, d, k, true, opts.p);
        case Mode::auto_primes: {
            const auto t0 = std::chrono::steady_clock::now();
            ObstructionReport last;
            for (auto p : auto_prime_sequence(opts.max_prime_attempts)) {
                last = decide_single(sys, d, k, true, p);
                if (last.no_final_integral) break;
            }
            last.elapsed_s =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            return last;
        }
    }
    throw input_error("unknown decide mode");
}

DerivedVerdict degree_reduction_note(int d_low, int d_high, const carnot::SRSystem& sys) {
    if (d_low > d_high) throw input_error("degree_reduction_note needs d_low <= d_high");
    if (sys.noether_momenta.empty())
        throw precondition_error("degree reduction needs a Noether momentum");
    DerivedVerdict v;
    v.system = sys.name;
    v.d_low = d_low;
    v.d_high = d_high;
    v.no_final_integral = true;
    std::ostringstream os;
    if (d_low == d_high) {
        os << "degree " << d_low << ": restates the established verdict";
    } else {
        os << "a nontrivial integral of degree " << d_low << " times p_" << sys.algebra.dim
           << "^" << (d_high - d_low) << " would be a nontrivial integral of degree "
           << d_high << ", which is excluded";
    }
    v.note = os.str();
    return v;
}

std::string report_to_json(const ObstructionReport& rep) {
    nlohmann::ordered_json j;
    j["system"] = rep.system;
    j["D"] = rep.D;
    j["degree"] = rep.degree;
    j["prolongations"] = rep.prolongations;
    j["num_equations"] = rep.num_equations;
    j["num_unknowns"] = rep.num_unknowns;
    j["v_spfl"] = rep.v_spfl;
    j["v_mon"] = rep.v_mon;
    j["v_bimon"] = rep.v_bimon;
    j["v_red"] = rep.v_red;
    j["rank_red"] = rep.rank_red;
    j["delta"] = rep.delta;
    j["lambda0"] = rep.lambda0;
    if (rep.modulus) j["modulus"] = *rep.modulus;
    else j["modulus"] = nullptr;
    j["verdict"] = rep.verdict_name();
    j["elapsed_s"] = rep.elapsed_s;
    j["tool_version"] = version_string();
    return j.dump(2);
}

} // namespace srflow::obstruct
