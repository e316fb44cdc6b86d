#ifndef SRFLOW_PHASE_POLY_HPP
#define SRFLOW_PHASE_POLY_HPP

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "srflow/rational.hpp"

namespace srflow::poly {

/// Reference to one phase-space variable: x_index or p_index, 1-based.
struct Var {
    enum class Kind { base, momentum };
    Kind kind;
    int index;

    static Var x(int i) { return {Kind::base, i}; }
    static Var p(int i) { return {Kind::momentum, i}; }
    friend bool operator<(const Var& a, const Var& b) {
        if (a.kind != b.kind) return a.kind < b.kind;
        return a.index < b.index;
    }
    friend bool operator==(const Var& a, const Var& b) {
        return a.kind == b.kind && a.index == b.index;
    }
};

/// Exponent vector over (x_1..x_nx, p_1..p_np), in that order.
using Expo = std::vector<std::uint16_t>;

/// Sparse multivariate polynomial on phase space with exact rational
/// coefficients. Terms are kept in graded-lexicographic order and no zero
/// coefficient is ever stored, so equal polynomials have equal term maps.
/// Immutable value type: all operations return fresh polynomials.
class PhasePolynomial {
  public:
    struct GradedLex {
        bool operator()(const Expo& a, const Expo& b) const {
            std::size_t da = 0, db = 0;
            for (auto e : a) da += e;
            for (auto e : b) db += e;
            if (da != db) return da < db;
            return a < b;
        }
    };
    using TermMap = std::map<Expo, Rational, GradedLex>;

    PhasePolynomial(int num_base_vars, int num_momenta);

    static PhasePolynomial constant(int nx, int np, const Rational& c);
    static PhasePolynomial variable(int nx, int np, Var v);
    /// Parses the plain-text grammar:
    ///   expr := term (('+'|'-') term)* ; term := rational? factor* ;
    ///   factor := ('x'|'p') INDEX ('^' UINT)? ; rational := INT ('/' UINT)?
    static PhasePolynomial parse(const std::string& text, int nx, int np);

    int num_base_vars() const { return m_nx; }
    int num_momenta() const { return m_np; }
    bool is_zero() const { return m_terms.empty(); }
    std::size_t num_terms() const { return m_terms.size(); }
    const TermMap& terms() const { return m_terms; }

    PhasePolynomial operator-() const;
    PhasePolynomial operator+(const PhasePolynomial& o) const;
    PhasePolynomial operator-(const PhasePolynomial& o) const;
    PhasePolynomial operator*(const PhasePolynomial& o) const;
    PhasePolynomial scale(const Rational& c) const;
    friend PhasePolynomial operator*(const Rational& c, const PhasePolynomial& f) {
        return f.scale(c);
    }
    bool operator==(const PhasePolynomial& o) const {
        return m_nx == o.m_nx && m_np == o.m_np && m_terms == o.m_terms;
    }
    bool operator!=(const PhasePolynomial& o) const { return !(*this == o); }

    /// Formal partial derivative with respect to one declared variable.
    PhasePolynomial derivative(Var v) const;

    /// Substitutes exact values for a subset of the variables; the others
    /// stay symbolic. Variable counts are unchanged.
    PhasePolynomial substitute(const std::map<Var, Rational>& assignments) const;

    /// Full evaluation at a rational phase-space point (x values then p values).
    Rational evaluate(const std::vector<Rational>& x_vals,
                      const std::vector<Rational>& p_vals) const;

    /// Returns (g, s) with g = s*this, s the positive lcm of coefficient
    /// denominators; every coefficient of g is an integer.
    std::pair<PhasePolynomial, BigInt> clear_denominators() const;

    int degree() const;
    int degree_in_momenta() const;
    int degree_in_base() const;
    bool depends_on(Var v) const;
    /// True iff every term has momentum-degree exactly d (zero poly passes).
    bool homogeneous_in_momenta(int d) const;
    /// Degree 1 in p in every term and independent of nothing else required.
    bool is_fiber_linear() const { return homogeneous_in_momenta(1); }

    Rational coefficient(const Expo& e) const;

    std::string str() const;

    /// Internal: adds c * monomial(e); used by builders. Keeps canonical form.
    void add_term(const Expo& e, const Rational& c);

  private:
    void check_same_shape(const PhasePolynomial& o) const;
    int var_slot(Var v) const; // 0-based position in the exponent vector

    int m_nx;
    int m_np;
    TermMap m_terms;
};

/// Canonical Poisson bracket {f,g} = sum_i df/dx_i dg/dp_i - df/dp_i dg/dx_i,
/// the sum running over the canonical pairs (x_i, p_i), i <= min(nx, np).
/// This sign convention makes dF/dt = {F,H} along the flow of
/// xdot = dH/dp, pdot = -dH/dx.
PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g);

} // namespace srflow::poly

#endif
