#ifndef SRFLOW_OBSTRUCT_HPP
#define SRFLOW_OBSTRUCT_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srflow/carnot.hpp"
#include "srflow/rank.hpp"
#include "srflow/sparse_matrix.hpp"

namespace srflow::obstruct {

long long binomial(long long n, long long k);

/// Number of trivial degree-d integrals H^i * (monomial in p_3..p_D):
/// sum_{i=0}^{floor(d/2)} C(d-2i+D-3, D-3).
long long trivial_count(int D, int d);

/// Matrix dimensions of the k-fold prolonged system at the origin.
long long prolonged_rows(int D, int d, int k);    // C(d+D, D-1) * C(k+2, 2)
long long prolonged_cols(int D, int d, int k);    // C(d+D-1, D-1) * C(k+3, 2)

/// Momentum multi-indices of total degree deg over D slots, lexicographically
/// descending; the enumeration order is part of the matrix layout contract.
std::vector<std::vector<std::uint8_t>> momentum_multi_indices(int D, int deg);

/// 2-variable jet multi-indices |sigma| <= order, graded lexicographic.
std::vector<std::pair<int, int>> jet_multi_indices(int order);

/// The first-order linear PDE system S_d: coefficients of the momentum
/// monomials p^mu in {P, F}, where P is the integer-scaled 2H and
/// F = sum_{|tau|=d} a_tau(x1,x2) p^tau. Each equation is
///   sum_tau c_tau(x) a_tau + sum_{i=1,2} c^i_tau(x) da_tau/dx_i = 0
/// with integer x-polynomial coefficients.
struct PdeSystem {
    struct XTerm {
        std::uint8_t bx, by; // x1^bx x2^by
        long long coeff;
    };
    struct Term {
        std::uint32_t tau; // unknown-function index
        std::vector<XTerm> poly;
    };

    int D = 0;
    int d = 0;
    std::vector<std::vector<Term>> zero_order;                  // per equation
    std::array<std::vector<std::vector<Term>>, 2> first_order;  // per d/dx_i, per equation

    long long num_equations() const { return binomial(d + D, D - 1); }
    long long num_unknowns() const { return binomial(d + D - 1, D - 1); }
};

/// Derives S_d from the system's Hamiltonian. Requires obstruct_ready.
PdeSystem build_pde_system(const carnot::SRSystem& sys, int d);

/// k-fold prolongation of S_d evaluated at the origin: the unknowns are the
/// jets a_{tau;sigma} with |sigma| <= k+1, columns ordered tau-major with
/// jets graded-lex inside; rows are (mu, sigma), |sigma| <= k, mu-major.
linalg::SparseIntMatrix prolong_evaluate(const PdeSystem& sys, int k);

enum class Mode { exact, mod_p, auto_primes };

/// Output of the matrix reduction pipeline: dedupe, superfluous-column
/// removal, then iterated monomial/bimonomial elimination. Carries the
/// surviving rows for the rank computation.
struct Reduction {
    bool modular = false;
    std::uint64_t p = 0;
    std::vector<linalg::IntRow> rows;         // exact mode
    std::vector<linalg::ResidueRow> rrows;    // modular mode
    std::size_t num_cols = 0;
    long long rows_after_dedupe = 0;
    long long rows_reduced = 0;
    long long v_spfl = 0;   // free columns: zero columns plus ones that empty out
    long long v_mon = 0;
    long long v_bimon = 0;
    long long v_red = 0;    // columns still present in the reduced system
    bool spfl_bound_ok = false; // v_spfl >= Lambda_d^0 (diagnostic)
};

/// Runs the reduction pipeline. In modular mode every classification
/// decision (zero row, proportional row, monomial, bimonomial) is made on
/// the GF(p) residues. lambda0 feeds the spfl diagnostic only.
Reduction reduce_system(const linalg::SparseIntMatrix& m, bool modular,
                        std::uint64_t p, long long lambda0);

/// Rank of the reduced system (consumes the stored rows) and
/// delta = v_red + v_spfl - rank_red.
std::pair<long long, long long> rank_and_delta(Reduction& red);

struct ObstructionReport {
    std::string system;
    int D = 0;
    int degree = 0;
    int prolongations = 0;
    long long num_equations = 0; // m_{d,k}
    long long num_unknowns = 0;  // n_{d,k}
    long long v_spfl = 0, v_mon = 0, v_bimon = 0, v_red = 0;
    long long rows_after_dedupe = 0, rows_reduced = 0;
    long long rank_red = 0;
    long long delta = 0;
    long long lambda0 = 0;
    std::optional<std::uint64_t> modulus;
    bool spfl_bound_ok = false;
    bool no_final_integral = false; // verdict; true iff delta == lambda0
    double elapsed_s = 0.0;

    std::string verdict_name() const {
        return no_final_integral ? "NoFinalIntegral" : "Inconclusive";
    }
};

/// Serializes a report to the fixed JSON schema (see the CLI docs).
std::string report_to_json(const ObstructionReport& rep);

struct DecideOptions {
    Mode mode = Mode::exact;
    std::uint64_t p = 0;            // for Mode::mod_p
    std::optional<int> k_override;  // default k = d+1
    int max_prime_attempts = 8;     // for Mode::auto_primes
};

/// The full pipeline: build S_d, prolong k=d+1 times, evaluate at the
/// origin, reduce, rank, and compare delta against Lambda_d^0. The verdict
/// NoFinalIntegral is sound: delta[p] >= delta >= Lambda_d >= Lambda_d^0,
/// so equality of the ends pins Lambda_d = Lambda_d^0. delta < Lambda_d^0
/// is impossible and raises internal_error.
ObstructionReport decide(const carnot::SRSystem& sys, int d, const DecideOptions& opts);

/// Deterministic increasing pseudo-random primes in [31, 2^31), fixed seed.
std::vector<std::uint64_t> auto_prime_sequence(int count);

struct DerivedVerdict {
    std::string system;
    int d_low = 0;
    int d_high = 0;
    bool no_final_integral = false;
    std::string note;
};

/// Nonexistence at d_high propagates to d_low < d_high: a nontrivial
/// integral I of degree d_low would make I * p_D^(d_high-d_low) a
/// nontrivial integral of degree d_high. Requires a Noether momentum.
DerivedVerdict degree_reduction_note(int d_low, int d_high, const carnot::SRSystem& sys);

} // namespace srflow::obstruct

#endif
