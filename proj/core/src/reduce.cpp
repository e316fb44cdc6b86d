#include "srflow/reduce.hpp"

#include <cmath>
#include <sstream>

#include "srflow/errors.hpp"

namespace srflow::reduce {

using poly::Expo;
using poly::Var;

PhasePolynomial symplectic_reduce(const carnot::SRSystem& sys,
                                  const std::map<int, Rational>& constants) {
    if (!sys.obstruct_ready)
        throw precondition_error("system '" + sys.name + "' does not reduce: H involves x_j, j >= 3");
    const int D = sys.algebra.dim;
    const PhasePolynomial one = PhasePolynomial::constant(D, D, Rational(1));
    const PhasePolynomial zero(D, D);
    if (sys.u1.derivative(Var::p(1)) != one || sys.u2.derivative(Var::p(2)) != one ||
        sys.u1.derivative(Var::p(2)) != zero || sys.u2.derivative(Var::p(1)) != zero)
        throw precondition_error(
            "the two squares of 2H are not normalized in p_1, p_2; cannot reduce");
    for (const auto& [i, c] : constants)
        if (i < 3 || i > D)
            throw input_error("constant index c" + std::to_string(i) + " out of range");

    PhasePolynomial q = -poisson_bracket(sys.u1, sys.u2);
    std::map<Var, Rational> sub;
    for (int i = 3; i <= D; ++i) {
        auto it = constants.find(i);
        sub.emplace(Var::p(i), it == constants.end() ? Rational(0) : it->second);
    }
    q = q.substitute(sub);
    if (q.depends_on(Var::p(1)) || q.depends_on(Var::p(2)))
        throw internal_error("reduced polynomial retains p_1/p_2 dependence");
    for (int i = 3; i <= D; ++i)
        if (q.depends_on(Var::x(i)))
            throw internal_error("reduced polynomial involves x_" + std::to_string(i));

    PhasePolynomial out(2, 0);
    for (const auto& [e, c] : q.terms()) {
        Expo e2 = {e[0], e[1]};
        out.add_term(e2, c);
    }
    return out;
}

QPoly QPoly::from_poly(const PhasePolynomial& f) {
    if (f.degree() > 2) throw input_error("normalize_Q needs deg Q <= 2");
    QPoly q;
    for (const auto& [e, c] : f.terms()) {
        int ex = e.size() > 0 ? e[0] : 0;
        int ey = e.size() > 1 ? e[1] : 0;
        for (std::size_t i = 2; i < e.size(); ++i)
            if (e[i]) throw input_error("Q involves a variable beyond x, y");
        if (ex == 2) q.q20 += c;
        else if (ex == 1 && ey == 1) q.q11 += c;
        else if (ey == 2) q.q02 += c;
        else if (ex == 1) q.q10 += c;
        else if (ey == 1) q.q01 += c;
        else q.q00 += c;
    }
    return q;
}

PhasePolynomial QPoly::to_poly() const {
    PhasePolynomial f(2, 0);
    f.add_term({2, 0}, q20);
    f.add_term({1, 1}, q11);
    f.add_term({0, 2}, q02);
    f.add_term({1, 0}, q10);
    f.add_term({0, 1}, q01);
    f.add_term({0, 0}, q00);
    return f;
}

double QPoly::eval(double x, double y) const {
    return q20.to_double() * x * x + q11.to_double() * x * y + q02.to_double() * y * y +
           q10.to_double() * x + q01.to_double() * y + q00.to_double();
}

std::string kind_name(QKind k) {
    switch (k) {
        case QKind::Q1: return "Q1";
        case QKind::Q2: return "Q2";
        case QKind::Constant: return "constant";
        case QKind::Degenerate: return "degenerate";
    }
    return "?";
}

namespace {

/// sqrt of a non-negative rational if it is a perfect square.
std::optional<Rational> rational_sqrt(const Rational& r) {
    if (r.sign() < 0) return std::nullopt;
    BigInt num = r.numerator(), den = r.denominator();
    if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
        return std::nullopt;
    BigInt sn, sd;
    mpz_sqrt(sn.get_mpz_t(), num.get_mpz_t());
    mpz_sqrt(sd.get_mpz_t(), den.get_mpz_t());
    return Rational(sn, sd);
}

std::string num_str(bool exact, const Rational& r, double d) {
    if (exact) return r.str();
    std::ostringstream os;
    os.precision(17);
    os << d;
    return os.str();
}

} // namespace

std::string AffineMap2::describe() const {
    std::ostringstream os;
    os.precision(17);
    auto coef = [&](const Rational& r, double d) { return num_str(exact, r, d); };
    if (!rotated && shift_x.is_zero() && shift_y.is_zero() && exact)
        return "x->x, y->y";
    os << "x->" << coef(cos_r, cos_d) << " x + " << coef(sin_r, sin_d) << " y + "
       << coef(shift_x, shift_xd) << ", ";
    os << "y->-" << coef(sin_r, sin_d) << " x + " << coef(cos_r, cos_d) << " y + "
       << coef(shift_y, shift_yd);
    return os.str();
}

std::string ReducedSystem::to_text() const {
    std::ostringstream os;
    os << "kind " << kind_name(kind);
    switch (kind) {
        case QKind::Q1:
            os << "; a=" << num_str(exact, a, a_d) << "; b=" << num_str(exact, b, b_d);
            break;
        case QKind::Q2:
            os << "; a=" << num_str(exact, a, a_d) << "; b=" << num_str(exact, b, b_d)
               << "; c=" << num_str(exact, c, c_d);
            break;
        case QKind::Constant:
            os << "; c=" << num_str(exact, c, c_d);
            break;
        case QKind::Degenerate:
            os << "; " << degenerate_reason;
            break;
    }
    os << "; map: " << map.describe();
    return os.str();
}

QPoly ReducedSystem::normal_q() const {
    QPoly q;
    switch (kind) {
        case QKind::Q1:
            if (exact) {
                q.q20 = a;
                q.q01 = b;
            } else {
                throw precondition_error("Q1 with inexact parameters");
            }
            return q;
        case QKind::Q2:
            if (exact) {
                q.q20 = a;
                q.q02 = b;
                q.q00 = c;
                return q;
            }
            throw precondition_error("Q2 with inexact parameters; pass numeric values directly");
        case QKind::Constant:
            q.q00 = c;
            return q;
        case QKind::Degenerate:
            throw precondition_error("degenerate reduced system has no normal form");
    }
    throw internal_error("unreachable");
}

ReducedSystem normalize_Q(const QPoly& q) {
    ReducedSystem out;
    const Rational half(1, 2);
    const Rational Bh = q.q11 * half;
    const Rational det = q.q20 * q.q02 - Bh * Bh;
    const Rational tr = q.q20 + q.q02;
    const bool quad_zero = q.q20.is_zero() && q.q11.is_zero() && q.q02.is_zero();

    if (quad_zero) {
        if (q.q10.is_zero() && q.q01.is_zero()) {
            out.kind = QKind::Constant;
            out.c = q.q00;
            out.c_d = q.q00.to_double();
            return out;
        }
        out.kind = QKind::Degenerate;
        out.degenerate_reason = "quadratic part vanishes (a = 0); the flow fibers over a 2D flow";
        return out;
    }

    if (!det.is_zero()) {
        // Q2: both eigenvalues nonzero. The critical point and the value
        // there are rotation-invariant and always exact.
        const Rational dd = det * Rational(4);
        const Rational xs = (q.q11 * q.q01 - Rational(2) * q.q02 * q.q10) / dd;
        const Rational ys = (q.q11 * q.q10 - Rational(2) * q.q20 * q.q01) / dd;
        const Rational cval = q.q20 * xs * xs + q.q11 * xs * ys + q.q02 * ys * ys +
                              q.q10 * xs + q.q01 * ys + q.q00;
        out.kind = QKind::Q2;
        out.c = cval;
        out.c_d = cval.to_double();
        if (q.q11.is_zero()) {
            out.a = q.q20;
            out.b = q.q02;
            out.a_d = out.a.to_double();
            out.b_d = out.b.to_double();
            out.map.shift_x = -xs;
            out.map.shift_y = -ys;
            out.map.shift_xd = out.map.shift_x.to_double();
            out.map.shift_yd = out.map.shift_y.to_double();
            return out;
        }
        const Rational u = q.q20 - q.q02;
        const Rational disc = u * u + q.q11 * q.q11;
        auto s = rational_sqrt(disc);
        out.map.rotated = true;
        if (s) {
            out.a = (tr + *s) * half;
            out.b = (tr - *s) * half;
            out.a_d = out.a.to_double();
            out.b_d = out.b.to_double();
            const Rational w = *s - u;
            auto n = rational_sqrt(q.q11 * q.q11 + w * w);
            if (n && !n->is_zero()) {
                out.map.cos_r = q.q11 / *n;
                out.map.sin_r = w / *n;
                out.map.cos_d = out.map.cos_r.to_double();
                out.map.sin_d = out.map.sin_r.to_double();
                // translate in rotated coordinates: x' center = R^T (xs, ys)
                out.map.shift_x = -(out.map.cos_r * xs + out.map.sin_r * ys);
                out.map.shift_y = -(-out.map.sin_r * xs + out.map.cos_r * ys);
                out.map.shift_xd = out.map.shift_x.to_double();
                out.map.shift_yd = out.map.shift_y.to_double();
                return out;
            }
            out.exact = true; // a, b, c exact; only the rotation is numeric
        } else {
            out.exact = false;
            const double sd = std::sqrt(disc.to_double());
            out.a_d = (tr.to_double() + sd) / 2;
            out.b_d = (tr.to_double() - sd) / 2;
        }
        out.map.exact = false;
        const double theta = 0.5 * std::atan2(q.q11.to_double(), u.to_double());
        out.map.cos_d = std::cos(theta);
        out.map.sin_d = std::sin(theta);
        const double xsd = xs.to_double(), ysd = ys.to_double();
        out.map.shift_xd = -(out.map.cos_d * xsd + out.map.sin_d * ysd);
        out.map.shift_yd = -(-out.map.sin_d * xsd + out.map.cos_d * ysd);
        return out;
    }

    // det = 0, quadratic part nonzero: rank one. The nonzero eigenvalue is
    // the trace; the eigendirection is rational.
    out.a = tr;
    out.a_d = tr.to_double();
    Rational v1 = q.q20, v2 = Bh;
    if (v1.is_zero() && v2.is_zero()) {
        v1 = Bh;
        v2 = q.q02;
    }
    // canonical sign: first nonzero component positive
    if (v1.sign() < 0 || (v1.is_zero() && v2.sign() < 0)) {
        v1 = -v1;
        v2 = -v2;
    }
    const Rational lperp = -q.q10 * v2 + q.q01 * v1; // L . v_perp (unnormalized)
    if (lperp.is_zero()) {
        out.kind = QKind::Degenerate;
        out.degenerate_reason =
            "no drift along the null direction (b = 0); the flow fibers over a 2D flow";
        return out;
    }
    out.kind = QKind::Q1;
    const Rational norm2 = v1 * v1 + v2 * v2;
    auto n = rational_sqrt(norm2);
    const Rational lpar = q.q10 * v1 + q.q01 * v2;
    if (n) {
        const Rational c = v1 / *n, sr = v2 / *n;
        out.b = lperp / *n;
        out.b_d = out.b.to_double();
        out.map.rotated = !(c == Rational(1) && sr.is_zero());
        out.map.cos_r = c;
        out.map.sin_r = sr;
        out.map.cos_d = c.to_double();
        out.map.sin_d = sr.to_double();
        // Q = a x'^2 + alpha x' + b y' + q00 with alpha = L . vhat
        const Rational alpha = lpar / *n;
        const Rational dx = alpha / (Rational(2) * out.a);
        const Rational rest = q.q00 - alpha * alpha / (Rational(4) * out.a);
        out.map.shift_x = dx;
        out.map.shift_y = rest / out.b;
        out.map.shift_xd = out.map.shift_x.to_double();
        out.map.shift_yd = out.map.shift_y.to_double();
    } else {
        out.exact = false;
        out.map.exact = false;
        out.map.rotated = true;
        const double nd = std::sqrt(norm2.to_double());
        out.map.cos_d = v1.to_double() / nd;
        out.map.sin_d = v2.to_double() / nd;
        out.b_d = lperp.to_double() / nd;
        const double alpha = lpar.to_double() / nd;
        out.map.shift_xd = alpha / (2 * out.a_d);
        out.map.shift_yd = (q.q00.to_double() - alpha * alpha / (4 * out.a_d)) / out.b_d;
    }
    return out;
}

ReducedSystem reduce_system(const carnot::SRSystem& sys,
                            const std::map<int, Rational>& constants) {
    ReducedSystem out = normalize_Q(QPoly::from_poly(symplectic_reduce(sys, constants)));
    out.source_constants = constants;
    return out;
}

double EllipticInvariant::operator()(double x, double y, double z) const {
    const double r2 = x * x + y * y;
    const double r = std::sqrt(r2);
    if (r == 0.0) throw numeric_error("elliptic invariant is singular at r = 0");
    const double s = z - std::atan2(y, x);
    return 0.25 * a * r2 * r2 + 0.5 * c * r2 - r * std::sin(s);
}

EllipticInvariant elliptic_invariant(const Rational& a, const Rational& c) {
    return EllipticInvariant{a.to_double(), c.to_double()};
}

namespace {

// Formal ring Q[x, y, S, C] with S = sin z, C = cos z.
using FPoly = PhasePolynomial;

constexpr int VX = 1, VY = 2, VS = 3, VC = 4;

FPoly fvar(int i) { return FPoly::variable(4, 0, Var::x(i)); }

FPoly fconst(const Rational& r) { return FPoly::constant(4, 0, r); }

/// Formal d/dz via the chain rule: dS/dz = C, dC/dz = -S.
FPoly dz(const FPoly& f) {
    return f.derivative(Var::x(VS)) * fvar(VC) - f.derivative(Var::x(VC)) * fvar(VS);
}

/// Normal form modulo S^2 + C^2 - 1: rewrites S^k, k >= 2, via S^2 = 1 - C^2.
FPoly mod_circle(FPoly f) {
    while (true) {
        bool changed = false;
        for (const auto& [e, c] : f.terms()) {
            if (e[VS - 1] >= 2) {
                Expo base = e;
                base[VS - 1] -= 2;
                FPoly mono(4, 0);
                mono.add_term(base, c);
                FPoly replacement = mono * (fconst(Rational(1)) - fvar(VC) * fvar(VC));
                FPoly original(4, 0);
                original.add_term(e, c);
                f = f - original + replacement;
                changed = true;
                break;
            }
        }
        if (!changed) return f;
    }
}

} // namespace

ReebReport reeb_check(const Rational& a, const Rational& b, const Rational& c) {
    ReebReport rep;
    const FPoly X = fvar(VX), Y = fvar(VY), S = fvar(VS), C = fvar(VC);
    const Rational third(1, 3), half(1, 2);
    const FPoly Q = fconst(a) * X * X + fconst(b) * Y * Y + fconst(c);

    // X = (C, S, Q) is divergence-free: each component is free of its own slot.
    rep.divergence_zero = !C.depends_on(Var::x(VX)) && !S.depends_on(Var::x(VY)) &&
                          dz(Q).is_zero();

    for (int eps : {+1, -1}) {
        const Rational e(eps);
        // alpha = A dx + B dy
        const FPoly A = fconst(-e * third * b) * Y * Y * Y + fconst(-e * half * c) * Y + C;
        const FPoly B = fconst(e * third * a) * X * X * X + fconst(e * half * c) * X + S;
        const FPoly Ay = A.derivative(Var::x(VY));
        const FPoly Bx = B.derivative(Var::x(VX));
        const FPoly Az = dz(A);
        const FPoly Bz = dz(B);
        // d(alpha) = (Bx - Ay) dx^dy - Az dx^dz - Bz dy^dz
        // i_X d(alpha) components:
        const FPoly comp_dx = mod_circle(-S * (Bx - Ay) + Q * Az);
        const FPoly comp_dy = mod_circle(C * (Bx - Ay) + Q * Bz);
        const FPoly comp_dz = mod_circle(-C * Az - S * Bz);
        if (comp_dx.is_zero() && comp_dy.is_zero() && comp_dz.is_zero()) {
            rep.closed = true;
            rep.eps = eps;
            rep.alpha_of_field = mod_circle(A * C + B * S).str();
            break;
        }
    }
    return rep;
}

} // namespace srflow::reduce
