#ifndef SRFLOW_CARNOT_HPP
#define SRFLOW_CARNOT_HPP

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "srflow/phase_poly.hpp"

namespace srflow::carnot {

using poly::PhasePolynomial;
using poly::Var;

/// One structure relation [e_i, e_j] = sum_k c * e_k, stored with i < j.
struct BracketTerm {
    int i, j, k;
    Rational c;
};

/// Graded nilpotent Lie algebra given by structure constants.
struct CarnotAlgebra {
    std::string name;
    int dim = 0;
    std::vector<int> grading; // layer dimensions, summing to dim
    std::vector<BracketTerm> brackets;

    /// 1-based layer of basis vector e_i under the grading.
    int layer_of(int i) const;
    /// [e_i, e_j] as a map k -> c, for i < j. Empty map if the bracket vanishes.
    std::map<int, Rational> bracket(int i, int j) const;
};

struct ValidationCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct ValidationReport {
    bool passed = false;
    std::vector<ValidationCheck> checks;
};

/// Checks index sanity, grading compatibility, the Jacobi identity and
/// bracket generation by the first layer. Throws input_error on malformed
/// indices; failed mathematical checks are reported, not thrown.
ValidationReport validate_algebra(const CarnotAlgebra& alg);

/// Partial sums of the derived flag generated by g_1; for a valid Carnot
/// algebra this is strictly increasing and ends at dim.
std::vector<int> growth_vector(const CarnotAlgebra& alg);

/// Fiber-linear coordinate realization of (part of) the frame.
/// omegas[i-1] is omega_i where transcribed; entries beyond what the source
/// provides stay empty. thetas maps j -> theta_j where given.
struct CoordinateRealization {
    std::vector<std::optional<PhasePolynomial>> omegas;
    std::map<int, PhasePolynomial> thetas;
    int sign_flag = +1; // epsilon in {omega_i, omega_j} = eps * c_ij^k omega_k
};

/// A left-invariant sub-Riemannian system on a Carnot group: the algebra,
/// the two fiber-linear forms u1, u2 with 2H = u1^2 + u2^2 (or, for the
/// two-parameter family, 2H = u1^2 + (a u1 + b u2)^2 already folded into
/// hamiltonian2), and bookkeeping for the obstruction pipeline.
struct SRSystem {
    std::string name;
    CarnotAlgebra algebra;
    PhasePolynomial hamiltonian2; // the 2H polynomial
    PhasePolynomial u1, u2;       // 2H = u1^2 + u2^2
    bool obstruct_ready = false;  // H depends on x1, x2 only
    std::vector<int> noether_momenta; // indices 3..D
    std::optional<CoordinateRealization> realization;
};

/// Names of the built-in systems.
std::vector<std::string> catalog_names();

/// Looks up a built-in system. gen6 takes parameters (a, b) with b != 0;
/// all other entries reject parameters. Throws input_error for unknown
/// names or bad parameters.
SRSystem catalog_lookup(const std::string& name,
                        std::optional<Rational> a = std::nullopt,
                        std::optional<Rational> b = std::nullopt);

struct RealizationReport {
    bool passed = false;
    int eps = 0;               // discovered sign, +1 or -1
    bool closure_used = false; // frame completed from omega_1, omega_2
    std::string detail;        // failing pair or check, when !passed
    /// The full frame used for the checks (provided or closure-derived).
    std::vector<PhasePolynomial> frame;
};

/// Verifies {omega_i, omega_j} = eps * sum_k c_ij^k omega_k for one global
/// eps, and {omega_i, theta_j} = 0 for every provided theta. When only part
/// of the frame is transcribed, the missing omegas are completed by bracket
/// closure from omega_1, omega_2; the closure absorbs eps pairwise, and eps
/// is then read off the origin values of the derived frame.
RealizationReport verify_realization(const SRSystem& sys);

/// Parsed contents of an algebra text file.
struct AlgebraFile {
    CarnotAlgebra algebra;
    std::vector<std::optional<PhasePolynomial>> omegas;
    std::map<int, PhasePolynomial> thetas;
    std::optional<PhasePolynomial> hamiltonian2;
};

/// Text format: `dim D`, `grading n1 n2 ...`, `bracket i j k c`,
/// optional `omega i = <expr>`, `theta i = <expr>`, `hamiltonian2 = <expr>`,
/// comments starting with '#'.
AlgebraFile load_algebra_file(const std::string& path);

/// Builds an SRSystem from a loaded file (requires hamiltonian2 or a full
/// pair omega_1, omega_2).
SRSystem system_from_file(const AlgebraFile& file, const std::string& name);

} // namespace srflow::carnot

#endif
