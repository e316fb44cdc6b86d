#ifndef SRFLOW_REDUCE_HPP
#define SRFLOW_REDUCE_HPP

#include <map>
#include <string>

#include "srflow/carnot.hpp"
#include "srflow/phase_poly.hpp"

namespace srflow::reduce {

using poly::PhasePolynomial;

/// Fixing the Noether momenta p_i = c_i and the energy shell 2H = 1 turns
/// the flow into xdot = cos z, ydot = sin z, zdot = Q(x,y) with
/// Q = -{u1, u2} evaluated at p_i = c_i. Requires 2H = u1^2 + u2^2 with
/// du1/dp1 = du2/dp2 = 1 and du1/dp2 = du2/dp1 = 0. Missing constants
/// default to zero. The result depends on x1, x2 only (returned with two
/// base variables and no momenta).
PhasePolynomial symplectic_reduce(const carnot::SRSystem& sys,
                                  const std::map<int, Rational>& constants);

/// Q(x,y) = q20 x^2 + q11 xy + q02 y^2 + q10 x + q01 y + q00.
struct QPoly {
    Rational q20, q11, q02, q10, q01, q00;

    /// Reads the coefficients off a polynomial in x1, x2. deg > 2 is an error.
    static QPoly from_poly(const PhasePolynomial& f);
    PhasePolynomial to_poly() const;
    double eval(double x, double y) const;
};

enum class QKind { Q1, Q2, Constant, Degenerate };

std::string kind_name(QKind k);

/// Forward affine change of plane coordinates:
/// x' = cos_r x + sin_r y + shift_x, y' = -sin_r x + cos_r y + shift_y.
/// Orthogonal rotations only; when no exact rational rotation exists the
/// angle is stored numerically and flagged.
struct AffineMap2 {
    bool rotated = false;
    bool exact = true;
    Rational cos_r{1}, sin_r{0}, shift_x{0}, shift_y{0};
    double cos_d = 1.0, sin_d = 0.0, shift_xd = 0.0, shift_yd = 0.0;

    std::string describe() const;
};

/// Q brought to normal form: Q1 = a x^2 + b y (a, b != 0),
/// Q2 = a x^2 + b y^2 + c (a, b != 0), a constant, or degenerate
/// (some required coefficient vanishes and the flow fibers over a 2D flow).
struct ReducedSystem {
    QKind kind = QKind::Degenerate;
    bool exact = true;     // a, b, c are exact
    Rational a, b, c;      // per kind; see above
    double a_d = 0, b_d = 0, c_d = 0;
    AffineMap2 map;
    std::string degenerate_reason;
    std::map<int, Rational> source_constants;

    std::string to_text() const;
    /// Normal-form coefficients for the integrator (Q1/Q2/Constant only).
    QPoly normal_q() const;
};

ReducedSystem normalize_Q(const QPoly& q);

/// symplectic_reduce followed by normalize_Q, keeping the source constants.
ReducedSystem reduce_system(const carnot::SRSystem& sys,
                            const std::map<int, Rational>& constants);

/// Conserved quantity of the a = b reduced flow:
/// F = a r^4/4 + c r^2/2 - r sin(z - atan2(y, x)), r^2 = x^2 + y^2.
struct EllipticInvariant {
    double a = 0, c = 0;
    double operator()(double x, double y, double z) const; // r = 0 is singular
};

EllipticInvariant elliptic_invariant(const Rational& a, const Rational& c);

/// Symbolic check that X = (cos z, sin z, a x^2 + b y^2 + c) is Reeb-like
/// for alpha_eps = eps*(a x^3 dy - b y^3 dx)/3 + eps*c(x dy - y dx)/2
///                 + cos z dx + sin z dy:
/// i_X d(alpha_eps) must vanish identically modulo sin^2 z + cos^2 z = 1
/// for one of the signs. Also reports alpha_eps(X) and that X is
/// divergence-free.
struct ReebReport {
    bool closed = false;
    int eps = 0;
    bool divergence_zero = false;
    std::string alpha_of_field; // alpha_eps(X) in reduced normal form
};

ReebReport reeb_check(const Rational& a, const Rational& b, const Rational& c);

} // namespace srflow::reduce

#endif
