#include "srflow/rank.hpp"

#include <algorithm>
#include <map>
#include <queue>

#include "srflow/errors.hpp"

namespace srflow::linalg {

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 p) { return static_cast<u64>(static_cast<u128>(a) * b % p); }

u64 powmod(u64 a, u64 e, u64 p) {
    u64 r = 1 % p;
    a %= p;
    while (e) {
        if (e & 1) r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

u64 invmod(u64 a, u64 p) { return powmod(a, p - 2, p); }

bool miller_rabin(u64 n, u64 a) {
    if (a % n == 0) return true;
    u64 d = n - 1;
    int s = 0;
    while ((d & 1) == 0) {
        d >>= 1;
        ++s;
    }
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) return true;
    for (int i = 1; i < s; ++i) {
        x = mulmod(x, x, n);
        if (x == n - 1) return true;
    }
    return false;
}

} // namespace

bool is_prime(u64 n) {
    if (n < 2) return false;
    for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n == q) return true;
        if (n % q == 0) return false;
    }
    for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull})
        if (!miller_rabin(n, a)) return false;
    return true;
}

u64 mod_reduce(const BigInt& v, u64 p) {
    return mpz_fdiv_ui(v.get_mpz_t(), p); // non-negative remainder
}

namespace {

/// Column-occupancy bookkeeping shared by both elimination engines.
struct Occupancy {
    std::vector<std::vector<std::uint32_t>> col_rows; // lazily maintained
    std::vector<std::uint32_t> col_count;             // exact live counts
    // heap of (count, col); stale pairs skipped on pop
    std::priority_queue<std::pair<std::uint32_t, std::uint32_t>,
                        std::vector<std::pair<std::uint32_t, std::uint32_t>>,
                        std::greater<>>
        heap;

    explicit Occupancy(std::size_t ncols) : col_rows(ncols), col_count(ncols, 0) {}

    void add(std::uint32_t col, std::uint32_t row) {
        col_rows[col].push_back(row);
        heap.emplace(++col_count[col], col);
    }
    void remove(std::uint32_t col) {
        heap.emplace(--col_count[col], col);
    }
};

template <class Row, class Eliminate>
std::size_t eliminate_all(std::vector<Row>& rows, std::size_t ncols,
                          Eliminate&& eliminate_col) {
    Occupancy occ(ncols);
    std::vector<char> live(rows.size(), 1);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].empty()) {
            live[r] = 0;
            continue;
        }
        for (const auto& e : rows[r]) occ.add(e.first, static_cast<std::uint32_t>(r));
    }
    std::size_t rank = 0;
    while (!occ.heap.empty()) {
        auto [cnt, col] = occ.heap.top();
        occ.heap.pop();
        if (cnt != occ.col_count[col] || cnt == 0) continue;
        rank += eliminate_col(col, occ, live);
    }
    return rank;
}

template <class Row>
bool row_has(const Row& r, std::uint32_t col) {
    auto it = std::lower_bound(r.begin(), r.end(), col,
                               [](const auto& e, std::uint32_t c) { return e.first < c; });
    return it != r.end() && it->first == col;
}

template <class Row>
auto row_value(const Row& r, std::uint32_t col) {
    auto it = std::lower_bound(r.begin(), r.end(), col,
                               [](const auto& e, std::uint32_t c) { return e.first < c; });
    return it->second;
}

template <class Row>
std::vector<std::uint32_t> live_rows_with(Occupancy& occ, std::vector<Row>& rows,
                                          std::vector<char>& live, std::uint32_t col) {
    auto& cands = occ.col_rows[col];
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    std::vector<std::uint32_t> out;
    for (auto r : cands)
        if (live[r] && row_has(rows[r], col)) out.push_back(r);
    occ.col_rows[col] = out; // compact away stale ids
    return out;
}

} // namespace

std::size_t rank_residue_rows(std::vector<ResidueRow> rows, std::size_t ncols, u64 p) {
    auto eliminate = [&](std::uint32_t col, Occupancy& occ, std::vector<char>& live) -> std::size_t {
        auto hold = live_rows_with(occ, rows, live, col);
        if (hold.empty()) return 0;
        // pivot: fewest entries, then lowest id
        std::uint32_t piv = hold[0];
        for (auto r : hold)
            if (rows[r].size() < rows[piv].size() || (rows[r].size() == rows[piv].size() && r < piv))
                piv = r;
        const u64 pv = row_value(rows[piv], col);
        const u64 pv_inv = invmod(pv, p);
        for (auto r : hold) {
            if (r == piv) continue;
            const u64 f = mulmod(row_value(rows[r], col), pv_inv, p);
            // rows[r] -= f * rows[piv]
            ResidueRow merged;
            merged.reserve(rows[r].size() + rows[piv].size());
            auto a = rows[r].begin(), ae = rows[r].end();
            auto b = rows[piv].begin(), be = rows[piv].end();
            while (a != ae || b != be) {
                if (b == be || (a != ae && a->first < b->first)) {
                    merged.push_back(*a++);
                } else if (a == ae || b->first < a->first) {
                    u64 nv = p - mulmod(f, b->second, p);
                    if (nv == p) nv = 0;
                    if (nv) {
                        merged.emplace_back(b->first, nv);
                        occ.add(b->first, r);
                    }
                    ++b;
                } else {
                    u64 nv = (a->second + p - mulmod(f, b->second, p)) % p;
                    if (nv) merged.emplace_back(a->first, nv);
                    else occ.remove(a->first);
                    ++a;
                    ++b;
                }
            }
            rows[r] = std::move(merged);
            if (rows[r].empty()) live[r] = 0;
        }
        for (const auto& e : rows[piv]) occ.remove(e.first);
        live[piv] = 0;
        rows[piv].clear();
        rows[piv].shrink_to_fit();
        return 1;
    };
    return eliminate_all(rows, ncols, eliminate);
}

namespace {

void strip_content(IntRow& r) {
    if (r.empty()) return;
    BigInt g = 0;
    for (const auto& e : r) {
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e.second.get_mpz_t());
        if (g == 1) break;
    }
    if (g > 1)
        for (auto& e : r) e.second /= g;
}

} // namespace

std::size_t rank_integer_rows(std::vector<IntRow> rows, std::size_t ncols) {
    for (auto& r : rows) strip_content(r);
    auto eliminate = [&](std::uint32_t col, Occupancy& occ, std::vector<char>& live) -> std::size_t {
        auto hold = live_rows_with(occ, rows, live, col);
        if (hold.empty()) return 0;
        // prefer unit pivots (no coefficient growth), then fewest entries
        auto score = [&](std::uint32_t r) {
            const BigInt& v = row_value(rows[r], col);
            int unit = (v == 1 || v == -1) ? 0 : 1;
            return std::tuple<int, std::size_t, std::uint32_t>(unit, rows[r].size(), r);
        };
        std::uint32_t piv = hold[0];
        for (auto r : hold)
            if (score(r) < score(piv)) piv = r;
        const BigInt pv = row_value(rows[piv], col);
        for (auto r : hold) {
            if (r == piv) continue;
            const BigInt rv = row_value(rows[r], col);
            // rows[r] = pv * rows[r] - rv * rows[piv], then content-stripped
            IntRow merged;
            merged.reserve(rows[r].size() + rows[piv].size());
            auto a = rows[r].begin(), ae = rows[r].end();
            auto b = rows[piv].begin(), be = rows[piv].end();
            while (a != ae || b != be) {
                if (b == be || (a != ae && a->first < b->first)) {
                    merged.emplace_back(a->first, pv * a->second);
                    ++a;
                } else if (a == ae || b->first < a->first) {
                    merged.emplace_back(b->first, -rv * b->second);
                    occ.add(b->first, r);
                    ++b;
                } else {
                    BigInt nv = pv * a->second - rv * b->second;
                    if (nv != 0) merged.emplace_back(a->first, std::move(nv));
                    else occ.remove(a->first);
                    ++a;
                    ++b;
                }
            }
            strip_content(merged);
            rows[r] = std::move(merged);
            if (rows[r].empty()) live[r] = 0;
        }
        for (const auto& e : rows[piv]) occ.remove(e.first);
        live[piv] = 0;
        rows[piv].clear();
        rows[piv].shrink_to_fit();
        return 1;
    };
    return eliminate_all(rows, ncols, eliminate);
}

std::size_t rank_mod_p(const SparseIntMatrix& m, u64 p) {
    if (!is_prime(p)) throw input_error("modulus " + std::to_string(p) + " is not prime");
    if (p >= (1ull << 62)) throw input_error("modulus must be below 2^62");
    std::vector<ResidueRow> rows;
    rows.reserve(m.num_rows());
    for (std::size_t i = 0; i < m.num_rows(); ++i) {
        ResidueRow r;
        for (const auto& [c, v] : m.row(i)) {
            u64 rv = mod_reduce(v, p);
            if (rv) r.emplace_back(c, rv);
        }
        rows.push_back(std::move(r));
    }
    return rank_residue_rows(std::move(rows), m.num_cols(), p);
}

std::size_t rank_exact(const SparseIntMatrix& m) {
    std::vector<IntRow> rows;
    rows.reserve(m.num_rows());
    for (std::size_t i = 0; i < m.num_rows(); ++i) rows.push_back(m.row(i));
    return rank_integer_rows(std::move(rows), m.num_cols());
}

SparseIntMatrix dedupe_rows(const SparseIntMatrix& m) {
    std::map<IntRow, bool> seen;
    std::vector<IntRow> kept;
    for (std::size_t i = 0; i < m.num_rows(); ++i) {
        IntRow r = m.row(i);
        if (r.empty()) continue;
        strip_content(r);
        if (r[0].second < 0)
            for (auto& e : r) e.second = -e.second;
        if (seen.emplace(r, true).second) kept.push_back(std::move(r));
    }
    SparseIntMatrix out(kept.size(), m.num_cols());
    for (std::size_t i = 0; i < kept.size(); ++i) out.set_row(i, std::move(kept[i]));
    return out;
}

} // namespace srflow::linalg
