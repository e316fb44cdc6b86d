#include <doctest.h>

#include "srflow/errors.hpp"
#include "srflow/integrals.hpp"
#include "srflow/obstruct.hpp"
#include "test_support.hpp"

using namespace srflow;
using namespace srflow::obstruct;
using linalg::SparseIntMatrix;
using poly::PhasePolynomial;
using poly::Var;

namespace {

long long delta_at(const std::string& name, int d, int k) {
    auto sys = carnot::catalog_lookup(name);
    DecideOptions opts;
    opts.mode = Mode::exact;
    opts.k_override = k;
    return decide(sys, d, opts).delta;
}

std::size_t dense_rank_oracle(const SparseIntMatrix& m) {
    std::vector<std::vector<Rational>> a(m.num_rows(),
                                         std::vector<Rational>(m.num_cols(), Rational(0)));
    for (std::size_t i = 0; i < m.num_rows(); ++i)
        for (const auto& [c, v] : m.row(i)) a[i][c] = Rational(BigInt(v));
    std::size_t rank = 0, rpos = 0;
    for (std::size_t c = 0; c < m.num_cols() && rpos < m.num_rows(); ++c) {
        std::size_t piv = rpos;
        while (piv < m.num_rows() && a[piv][c].is_zero()) ++piv;
        if (piv == m.num_rows()) continue;
        std::swap(a[rpos], a[piv]);
        for (std::size_t r = 0; r < m.num_rows(); ++r) {
            if (r == rpos || a[r][c].is_zero()) continue;
            Rational f = a[r][c] / a[rpos][c];
            for (std::size_t cc = c; cc < m.num_cols(); ++cc) a[r][cc] -= f * a[rpos][cc];
        }
        ++rpos;
        ++rank;
    }
    return rank;
}

} // namespace

TEST_CASE("trivial integral counts") {
    CHECK(trivial_count(6, 6) == 130);
    CHECK(trivial_count(7, 5) == 166);
    CHECK(trivial_count(7, 6) == 296);
    CHECK(trivial_count(8, 5) == 314);
    CHECK(trivial_count(6, 0) == 1);
    CHECK(trivial_count(3, 0) == 1);
    // the 6D ladder used by the desk-scale verdicts
    CHECK(trivial_count(6, 1) == 4);
    CHECK(trivial_count(6, 2) == 11);
    CHECK(trivial_count(6, 3) == 24);
    CHECK(trivial_count(6, 4) == 46);
    CHECK(trivial_count(5, 2) == 7);
    CHECK_THROWS_AS(trivial_count(2, 1), input_error);
}

TEST_CASE("prolonged system dimensions match the published tables") {
    CHECK(prolonged_rows(6, 6, 7) == 28512);
    CHECK(prolonged_cols(6, 6, 7) == 20790);
    CHECK(prolonged_rows(7, 5, 6) == 25872);
    CHECK(prolonged_cols(7, 5, 6) == 16632);
    CHECK(prolonged_rows(7, 6, 7) == 61776);
    CHECK(prolonged_cols(7, 6, 7) == 41580);
    CHECK(prolonged_rows(8, 5, 6) == 48048);
    CHECK(prolonged_cols(8, 5, 6) == 28512);
}

TEST_CASE("PdeSystem counts and a constructed matrix agree with the formulas") {
    auto heis = carnot::catalog_lookup("heis3");
    auto pde = build_pde_system(heis, 1);
    CHECK(pde.num_equations() == 6); // C(4,2)
    CHECK(pde.num_unknowns() == 3);  // C(3,2)

    auto par6 = carnot::catalog_lookup("par6");
    auto pde6 = build_pde_system(par6, 6);
    CHECK(pde6.num_equations() == 792);
    CHECK(pde6.num_unknowns() == 462);

    auto m = prolong_evaluate(build_pde_system(par6, 2), 3);
    CHECK(m.num_rows() == static_cast<std::size_t>(prolonged_rows(6, 2, 3)));
    CHECK(m.num_cols() == static_cast<std::size_t>(prolonged_cols(6, 2, 3)));

    auto d8 = carnot::catalog_lookup("dim8_2358");
    auto pde8 = build_pde_system(d8, 5);
    CHECK(pde8.num_equations() == 1716);
    CHECK(pde8.num_unknowns() == 792);
}

TEST_CASE("build_pde_system preconditions") {
    CHECK_THROWS_AS(build_pde_system(carnot::catalog_lookup("engel"), 2), precondition_error);
    CHECK_THROWS_AS(build_pde_system(carnot::catalog_lookup("dim8_23568"), 2),
                    precondition_error);
    CHECK_THROWS_AS(build_pde_system(carnot::catalog_lookup("heis3"), 0), input_error);
}

TEST_CASE("deltas stabilize at k = d + 1 and never increase in k") {
    // independently computed dense-reference values
    CHECK(delta_at("heis3", 1, 2) == 4);
    CHECK(delta_at("heis3", 2, 3) == 10);
    CHECK(delta_at("heis3", 3, 4) == 20);
    CHECK(delta_at("par6", 1, 1) == 5); // one prolongation short: overshoot
    CHECK(delta_at("par6", 1, 2) == 4);
    CHECK(delta_at("par6", 2, 2) == 12);
    CHECK(delta_at("par6", 2, 3) == 11);

    for (const std::string name : {"heis3", "par6"}) {
        for (int d = 1; d <= 3; ++d) {
            long long prev = -1;
            for (int k = d; k <= d + 2; ++k) {
                long long cur = delta_at(name, d, k);
                if (prev >= 0) CHECK(cur <= prev);
                prev = cur;
            }
            CHECK(delta_at(name, d, d + 1) == delta_at(name, d, d + 2));
        }
    }
}

TEST_CASE("desk-scale verdicts: the parabolic 6D system has only trivial integrals") {
    auto par6 = carnot::catalog_lookup("par6");
    for (int d = 1; d <= 4; ++d) {
        auto rep = decide(par6, d, {Mode::exact, 0, std::nullopt, 8});
        CHECK(rep.no_final_integral);
        CHECK(rep.delta == trivial_count(6, d));
        CHECK(rep.delta >= rep.lambda0);
    }
}

TEST_CASE("par6 degree 5: the same verdict one step below the headline degree") {
    auto rep = decide(carnot::catalog_lookup("par6"), 5, {Mode::exact, 0, std::nullopt, 8});
    CHECK(rep.no_final_integral);
    CHECK(rep.delta == 80);
    CHECK(rep.lambda0 == 80);
}

TEST_CASE("positive controls stay inconclusive (their final integrals exist)") {
    auto ell6 = carnot::catalog_lookup("ell6");
    auto r1 = decide(ell6, 2, {Mode::exact, 0, std::nullopt, 8});
    CHECK_FALSE(r1.no_final_integral);
    CHECK(r1.delta == 12); // lambda0 + 1: the genuine quadratic integral
    CHECK(r1.lambda0 == 11);

    auto c5 = carnot::catalog_lookup("cartan5");
    auto r2 = decide(c5, 2, {Mode::exact, 0, std::nullopt, 8});
    CHECK_FALSE(r2.no_final_integral);
    CHECK(r2.delta == 8);
    CHECK(r2.lambda0 == 7);

    // the claimed integral itself certifies the kernel dimension surplus
    auto I2 = integrals::integral_sets_for("ell6").front().members[1].second;
    CHECK(integrals::check_commute(ell6.hamiltonian2, I2));
}

TEST_CASE("kernel witness: the 2-jet of the elliptic integral solves the linear system") {
    auto ell6 = carnot::catalog_lookup("ell6");
    const int d = 2, k = 3;
    auto M = prolong_evaluate(build_pde_system(ell6, d), k);

    auto I2 = integrals::integral_sets_for("ell6").front().members[1].second;
    // jets a_{tau;sigma} = d^sigma a_tau(0) via symbolic differentiation
    const auto taus = momentum_multi_indices(6, d);
    const auto jets = jet_multi_indices(k + 1);
    std::vector<Rational> jet_vec(taus.size() * jets.size(), Rational(0));

    // split I2 into coefficient polynomials a_tau(x)
    std::map<std::vector<std::uint8_t>, PhasePolynomial> coeffs;
    for (const auto& [e, c] : I2.terms()) {
        std::vector<std::uint8_t> tau(e.begin() + 6, e.end());
        poly::Expo xpart(e.begin(), e.begin() + 6);
        xpart.resize(12, 0);
        auto [it, fresh] = coeffs.try_emplace(tau, PhasePolynomial(6, 6));
        it->second.add_term(xpart, c);
    }
    std::map<Var, Rational> origin;
    for (int i = 1; i <= 6; ++i) origin.emplace(Var::x(i), Rational(0));
    for (std::size_t ti = 0; ti < taus.size(); ++ti) {
        auto it = coeffs.find(taus[ti]);
        if (it == coeffs.end()) continue;
        for (std::size_t ji = 0; ji < jets.size(); ++ji) {
            auto [s1, s2] = jets[ji];
            PhasePolynomial der = it->second;
            for (int s = 0; s < s1; ++s) der = der.derivative(Var::x(1));
            for (int s = 0; s < s2; ++s) der = der.derivative(Var::x(2));
            auto at0 = der.substitute(origin);
            jet_vec[ti * jets.size() + ji] = at0.coefficient(poly::Expo(12, 0));
        }
    }
    // clear denominators and check M v = 0 exactly
    BigInt lcm = 1;
    for (const auto& r : jet_vec)
        mpz_lcm(lcm.get_mpz_t(), lcm.get_mpz_t(), r.denominator().get_mpz_t());
    std::vector<BigInt> v;
    bool nonzero = false;
    for (const auto& r : jet_vec) {
        Rational scaled = r * Rational(lcm);
        v.push_back(scaled.numerator());
        if (!scaled.is_zero()) nonzero = true;
    }
    REQUIRE(nonzero);
    for (const auto& entry : M.apply(v)) CHECK(entry == 0);
}

TEST_CASE("pipeline independence: reduced delta equals the direct nullity") {
    for (const auto& name : carnot::catalog_names()) {
        auto sys = (name == "gen6") ? carnot::catalog_lookup("gen6", Rational(1), Rational(2))
                                    : carnot::catalog_lookup(name);
        if (!sys.obstruct_ready) continue;
        for (int d = 1; d <= 2; ++d) {
            auto M = prolong_evaluate(build_pde_system(sys, d), d + 1);
            const long long direct =
                static_cast<long long>(M.num_cols()) -
                static_cast<long long>(linalg::rank_exact(M));
            auto rep = decide(sys, d, {Mode::exact, 0, std::nullopt, 8});
            INFO(name, " d=", d);
            CHECK(rep.delta == direct);
            // and the modular route at a large prime agrees here
            auto repp = decide(sys, d, {Mode::mod_p, 1000003, std::nullopt, 8});
            CHECK(repp.delta == direct);
        }
    }
}

TEST_CASE("reduce_system unit behaviour") {
    // zero rows vanish; proportional rows collapse
    SparseIntMatrix m(4, 3);
    m.set_row(0, {{0, BigInt(2)}, {1, BigInt(4)}});
    m.set_row(1, {{0, BigInt(3)}, {1, BigInt(6)}});
    // row 2 empty
    m.set_row(3, {{2, BigInt(5)}});
    auto red = reduce_system(m, false, 0, 0);
    CHECK(red.rows_after_dedupe == 2);
    // (1,2)-row is bimonomial, (5)-row is monomial: everything dissolves
    CHECK(red.v_mon == 1);
    CHECK(red.v_bimon == 1);
    CHECK(red.v_red == 0);
    CHECK(red.rows_reduced == 0);
    auto [rank, delta] = rank_and_delta(red);
    CHECK(rank == 0);
    CHECK(delta == 1); // 3 columns, solution space is 1-dimensional
}

TEST_CASE("reduction preserves the nullity on random sparse systems") {
    testsup::Rng rng(4242);
    for (int trial = 0; trial < 40; ++trial) {
        SparseIntMatrix m(20, 30);
        for (int i = 0; i < 20; ++i) {
            SparseIntMatrix::Row r;
            for (int c = 0; c < 30; ++c)
                if (rng.range(0, 99) < 12) {
                    long v = rng.range(-5, 5);
                    if (v) r.emplace_back(static_cast<std::uint32_t>(c), BigInt(v));
                }
            m.set_row(i, std::move(r));
        }
        const long long nullity =
            30 - static_cast<long long>(dense_rank_oracle(m));
        auto red = reduce_system(m, false, 0, 0);
        auto [rank, delta] = rank_and_delta(red);
        CHECK(delta == nullity);
        // accounting identity
        CHECK(delta == red.v_red + red.v_spfl - rank);

        auto redp = reduce_system(m, true, 65537, 0);
        auto [rankp, deltap] = rank_and_delta(redp);
        CHECK(deltap == 30 - static_cast<long long>(linalg::rank_mod_p(m, 65537)));
        CHECK(deltap >= nullity); // modular nullity can only grow
    }
}

TEST_CASE("modular classification happens in GF(p) end-to-end") {
    // over Z the first row is bimonomial; mod 5 it is monomial
    SparseIntMatrix m(1, 2);
    m.set_row(0, {{0, BigInt(5)}, {1, BigInt(1)}});
    auto exact = reduce_system(m, false, 0, 0);
    CHECK(exact.v_bimon == 1);
    CHECK(exact.v_mon == 0);
    auto modular = reduce_system(m, true, 5, 0);
    CHECK(modular.v_mon == 1);
    CHECK(modular.v_bimon == 0);
    // and a row that vanishes mod p is dropped before classification
    SparseIntMatrix z(1, 2);
    z.set_row(0, {{0, BigInt(10)}, {1, BigInt(5)}});
    auto zr = reduce_system(z, true, 5, 0);
    CHECK(zr.rows_after_dedupe == 0);
    CHECK(zr.v_spfl == 2);
}

TEST_CASE("the general 6D family: nonexistence except the distinguished elliptic point") {
    // hyperbolic structure and a generic (a, b) both reach the trivial bound
    auto hyp6 = carnot::catalog_lookup("hyp6");
    for (int d = 1; d <= 4; ++d) {
        auto rep = decide(hyp6, d, {Mode::exact, 0, std::nullopt, 8});
        INFO("hyp6 d=", d);
        CHECK(rep.no_final_integral);
    }
    auto gen = carnot::catalog_lookup("gen6", Rational(1), Rational(2));
    for (int d = 1; d <= 4; ++d) {
        auto rep = decide(gen, d, {Mode::exact, 0, std::nullopt, 8});
        INFO("gen6(1,2) d=", d);
        CHECK(rep.no_final_integral);
    }
    // at (a, b) = (0, 1) the system is the integrable elliptic one
    auto ell = carnot::catalog_lookup("gen6", Rational(0), Rational(1));
    auto rep = decide(ell, 2, {Mode::exact, 0, std::nullopt, 8});
    CHECK_FALSE(rep.no_final_integral);
    CHECK(rep.delta == 12);
}

TEST_CASE("decide in modular and auto-primes modes") {
    auto par6 = carnot::catalog_lookup("par6");
    auto rep = decide(par6, 2, {Mode::mod_p, 1000003, std::nullopt, 8});
    CHECK(rep.no_final_integral);
    CHECK(rep.modulus == 1000003);

    auto rep2 = decide(par6, 2, {Mode::auto_primes, 0, std::nullopt, 8});
    CHECK(rep2.no_final_integral);
    REQUIRE(rep2.modulus.has_value());
    CHECK(*rep2.modulus >= 31);

    CHECK_THROWS_AS(decide(par6, 2, {Mode::mod_p, 391, std::nullopt, 8}), input_error);
}

TEST_CASE("auto prime sequence is deterministic, increasing, prime") {
    auto a = auto_prime_sequence(8);
    auto b = auto_prime_sequence(8);
    CHECK(a == b);
    REQUIRE(a.size() == 8);
    std::uint64_t prev = 30;
    for (auto p : a) {
        CHECK(p > prev);
        CHECK(p < (1ull << 31));
        CHECK(linalg::is_prime(p));
        prev = p;
    }
}

TEST_CASE("degree reduction notes") {
    auto par6 = carnot::catalog_lookup("par6");
    auto note = degree_reduction_note(3, 6, par6);
    CHECK(note.no_final_integral);
    CHECK(note.note.find("p_6") != std::string::npos);
    auto same = degree_reduction_note(4, 4, par6);
    CHECK(same.no_final_integral);
    CHECK_THROWS_AS(degree_reduction_note(5, 4, par6), input_error);
}

TEST_CASE("identical runs produce identical reports modulo timing") {
    auto a = decide(carnot::catalog_lookup("par6"), 2, {Mode::exact, 0, std::nullopt, 8});
    auto b = decide(carnot::catalog_lookup("par6"), 2, {Mode::exact, 0, std::nullopt, 8});
    a.elapsed_s = b.elapsed_s = 0.0;
    CHECK(report_to_json(a) == report_to_json(b));
    auto ma = decide(carnot::catalog_lookup("dim7"), 2, {Mode::auto_primes, 0, std::nullopt, 8});
    auto mb = decide(carnot::catalog_lookup("dim7"), 2, {Mode::auto_primes, 0, std::nullopt, 8});
    ma.elapsed_s = mb.elapsed_s = 0.0;
    CHECK(report_to_json(ma) == report_to_json(mb));
}

TEST_CASE("report serializes to the fixed JSON schema") {
    auto rep = decide(carnot::catalog_lookup("par6"), 1, {Mode::exact, 0, std::nullopt, 8});
    auto json = report_to_json(rep);
    for (const char* key :
         {"\"system\"", "\"D\"", "\"degree\"", "\"prolongations\"", "\"num_equations\"",
          "\"num_unknowns\"", "\"v_spfl\"", "\"v_mon\"", "\"v_bimon\"", "\"v_red\"",
          "\"rank_red\"", "\"delta\"", "\"lambda0\"", "\"modulus\"", "\"verdict\"",
          "\"elapsed_s\"", "\"tool_version\""}) {
        INFO(key);
        CHECK(json.find(key) != std::string::npos);
    }
    CHECK(json.find("\"verdict\": \"NoFinalIntegral\"") != std::string::npos);
}
