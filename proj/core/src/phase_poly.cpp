#include "srflow/phase_poly.hpp"

#include <cctype>
#include <sstream>

#include "srflow/errors.hpp"

namespace srflow::poly {

PhasePolynomial::PhasePolynomial(int num_base_vars, int num_momenta)
    : m_nx(num_base_vars), m_np(num_momenta) {
    if (num_base_vars < 0 || num_momenta < 0)
        throw dimension_error("negative variable count");
}

PhasePolynomial PhasePolynomial::constant(int nx, int np, const Rational& c) {
    PhasePolynomial f(nx, np);
    f.add_term(Expo(nx + np, 0), c);
    return f;
}

PhasePolynomial PhasePolynomial::variable(int nx, int np, Var v) {
    PhasePolynomial f(nx, np);
    Expo e(nx + np, 0);
    e[f.var_slot(v)] = 1;
    f.add_term(e, Rational(1));
    return f;
}

int PhasePolynomial::var_slot(Var v) const {
    int limit = (v.kind == Var::Kind::base) ? m_nx : m_np;
    if (v.index < 1 || v.index > limit) {
        std::ostringstream os;
        os << "variable " << (v.kind == Var::Kind::base ? 'x' : 'p') << v.index
           << " out of range for (" << m_nx << " base, " << m_np << " momentum) polynomial";
        throw dimension_error(os.str());
    }
    return (v.kind == Var::Kind::base) ? v.index - 1 : m_nx + v.index - 1;
}

void PhasePolynomial::check_same_shape(const PhasePolynomial& o) const {
    if (m_nx != o.m_nx || m_np != o.m_np) {
        std::ostringstream os;
        os << "variable-count mismatch: (" << m_nx << "," << m_np << ") vs ("
           << o.m_nx << "," << o.m_np << ")";
        throw dimension_error(os.str());
    }
}

void PhasePolynomial::add_term(const Expo& e, const Rational& c) {
    if (c.is_zero()) return;
    auto [it, inserted] = m_terms.emplace(e, c);
    if (!inserted) {
        it->second += c;
        if (it->second.is_zero()) m_terms.erase(it);
    }
}

PhasePolynomial PhasePolynomial::operator-() const {
    PhasePolynomial r(m_nx, m_np);
    for (const auto& [e, c] : m_terms) r.m_terms.emplace(e, -c);
    return r;
}

PhasePolynomial PhasePolynomial::operator+(const PhasePolynomial& o) const {
    check_same_shape(o);
    PhasePolynomial r = *this;
    for (const auto& [e, c] : o.m_terms) r.add_term(e, c);
    return r;
}

PhasePolynomial PhasePolynomial::operator-(const PhasePolynomial& o) const {
    check_same_shape(o);
    PhasePolynomial r = *this;
    for (const auto& [e, c] : o.m_terms) r.add_term(e, -c);
    return r;
}

PhasePolynomial PhasePolynomial::operator*(const PhasePolynomial& o) const {
    check_same_shape(o);
    PhasePolynomial r(m_nx, m_np);
    const int n = m_nx + m_np;
    Expo e(n, 0);
    for (const auto& [ea, ca] : m_terms) {
        for (const auto& [eb, cb] : o.m_terms) {
            for (int i = 0; i < n; ++i) e[i] = static_cast<std::uint16_t>(ea[i] + eb[i]);
            r.add_term(e, ca * cb);
        }
    }
    return r;
}

PhasePolynomial PhasePolynomial::scale(const Rational& c) const {
    PhasePolynomial r(m_nx, m_np);
    if (c.is_zero()) return r;
    for (const auto& [e, v] : m_terms) r.m_terms.emplace(e, c * v);
    return r;
}

PhasePolynomial PhasePolynomial::derivative(Var v) const {
    int slot = var_slot(v);
    PhasePolynomial r(m_nx, m_np);
    for (const auto& [e, c] : m_terms) {
        if (e[slot] == 0) continue;
        Expo d = e;
        d[slot] -= 1;
        r.add_term(d, c * Rational(static_cast<long>(e[slot])));
    }
    return r;
}

PhasePolynomial PhasePolynomial::substitute(const std::map<Var, Rational>& assignments) const {
    std::map<int, Rational> slots;
    for (const auto& [v, val] : assignments) slots.emplace(var_slot(v), val);
    PhasePolynomial r(m_nx, m_np);
    for (const auto& [e, c] : m_terms) {
        Rational coeff = c;
        Expo d = e;
        for (const auto& [slot, val] : slots) {
            for (int k = 0; k < e[slot]; ++k) coeff *= val;
            d[slot] = 0;
        }
        r.add_term(d, coeff);
    }
    return r;
}

Rational PhasePolynomial::evaluate(const std::vector<Rational>& x_vals,
                                   const std::vector<Rational>& p_vals) const {
    if (static_cast<int>(x_vals.size()) != m_nx || static_cast<int>(p_vals.size()) != m_np)
        throw dimension_error("evaluation point has wrong variable counts");
    Rational total(0);
    for (const auto& [e, c] : m_terms) {
        Rational t = c;
        for (int i = 0; i < m_nx; ++i)
            for (int k = 0; k < e[i]; ++k) t *= x_vals[i];
        for (int i = 0; i < m_np; ++i)
            for (int k = 0; k < e[m_nx + i]; ++k) t *= p_vals[i];
        total += t;
    }
    return total;
}

std::pair<PhasePolynomial, BigInt> PhasePolynomial::clear_denominators() const {
    BigInt s = 1;
    for (const auto& [e, c] : m_terms) {
        BigInt den = c.denominator();
        mpz_lcm(s.get_mpz_t(), s.get_mpz_t(), den.get_mpz_t());
    }
    return {scale(Rational(s)), s};
}

int PhasePolynomial::degree() const {
    int d = 0;
    for (const auto& [e, c] : m_terms) {
        int t = 0;
        for (auto v : e) t += v;
        if (t > d) d = t;
    }
    return d;
}

int PhasePolynomial::degree_in_momenta() const {
    int d = 0;
    for (const auto& [e, c] : m_terms) {
        int t = 0;
        for (int i = m_nx; i < m_nx + m_np; ++i) t += e[i];
        if (t > d) d = t;
    }
    return d;
}

int PhasePolynomial::degree_in_base() const {
    int d = 0;
    for (const auto& [e, c] : m_terms) {
        int t = 0;
        for (int i = 0; i < m_nx; ++i) t += e[i];
        if (t > d) d = t;
    }
    return d;
}

bool PhasePolynomial::depends_on(Var v) const {
    int slot = var_slot(v);
    for (const auto& [e, c] : m_terms)
        if (e[slot] != 0) return true;
    return false;
}

bool PhasePolynomial::homogeneous_in_momenta(int d) const {
    for (const auto& [e, c] : m_terms) {
        int t = 0;
        for (int i = m_nx; i < m_nx + m_np; ++i) t += e[i];
        if (t != d) return false;
    }
    return true;
}

Rational PhasePolynomial::coefficient(const Expo& e) const {
    auto it = m_terms.find(e);
    return it == m_terms.end() ? Rational(0) : it->second;
}

PhasePolynomial poisson_bracket(const PhasePolynomial& f, const PhasePolynomial& g) {
    if (f.num_base_vars() != g.num_base_vars() || f.num_momenta() != g.num_momenta())
        throw dimension_error("poisson bracket of polynomials with different variable counts");
    int n = std::min(f.num_base_vars(), f.num_momenta());
    PhasePolynomial r(f.num_base_vars(), f.num_momenta());
    for (int i = 1; i <= n; ++i) {
        r = r + f.derivative(Var::x(i)) * g.derivative(Var::p(i))
              - f.derivative(Var::p(i)) * g.derivative(Var::x(i));
    }
    return r;
}

// ---- text form ----------------------------------------------------------

namespace {

struct Cursor {
    const std::string& s;
    std::size_t i = 0;

    void skip_ws() {
        while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
    }
    bool done() {
        skip_ws();
        return i >= s.size();
    }
    char peek() {
        skip_ws();
        return i < s.size() ? s[i] : '\0';
    }
    char take() {
        skip_ws();
        return s[i++];
    }
    [[noreturn]] void fail(const std::string& what) {
        throw input_error("parse error at offset " + std::to_string(i) + ": " + what +
                          " in '" + s + "'");
    }
    std::string digits() {
        skip_ws();
        std::size_t start = i;
        while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
        if (i == start) fail("expected digits");
        return s.substr(start, i - start);
    }
};

} // namespace

PhasePolynomial PhasePolynomial::parse(const std::string& text, int nx, int np) {
    PhasePolynomial out(nx, np);
    Cursor c{text};
    if (c.done()) c.fail("empty expression");
    bool first = true;
    while (!c.done()) {
        int sign = 1;
        if (!first || c.peek() == '+' || c.peek() == '-') {
            char op = c.take();
            if (op == '-') sign = -1;
            else if (op != '+') c.fail("expected '+' or '-'");
        }
        first = false;
        // term := rational? factor*
        Rational coeff(sign);
        bool saw_anything = false;
        if (std::isdigit(static_cast<unsigned char>(c.peek()))) {
            std::string num = c.digits();
            std::string den = "1";
            if (c.peek() == '/') {
                c.take();
                den = c.digits();
            }
            coeff = coeff * Rational(BigInt(num), BigInt(den));
            saw_anything = true;
        }
        Expo e(nx + np, 0);
        while (c.peek() == 'x' || c.peek() == 'p') {
            char kind = c.take();
            std::string idx = c.digits();
            int index = std::stoi(idx);
            if (index < 1) c.fail("variable index must be >= 1");
            unsigned long exp = 1;
            if (c.peek() == '^') {
                c.take();
                exp = std::stoul(c.digits());
            }
            Var v = (kind == 'x') ? Var::x(index) : Var::p(index);
            e[out.var_slot(v)] += static_cast<std::uint16_t>(exp);
            saw_anything = true;
        }
        if (!saw_anything) c.fail("expected a rational or a factor");
        out.add_term(e, coeff);
    }
    return out;
}

std::string PhasePolynomial::str() const {
    if (m_terms.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : m_terms) {
        Rational a = c;
        if (first) {
            if (a.sign() < 0) {
                os << "-";
                a = -a;
            }
        } else {
            os << (a.sign() < 0 ? " - " : " + ");
            if (a.sign() < 0) a = -a;
        }
        first = false;
        bool has_vars = false;
        for (auto v : e)
            if (v) has_vars = true;
        if (!has_vars || a != Rational(1)) os << a.str();
        bool sep = (!has_vars || a != Rational(1));
        for (int i = 0; i < m_nx + m_np; ++i) {
            if (!e[i]) continue;
            if (sep) os << " ";
            sep = true;
            if (i < m_nx) os << "x" << (i + 1);
            else os << "p" << (i - m_nx + 1);
            if (e[i] > 1) os << "^" << e[i];
        }
    }
    return os.str();
}

} // namespace srflow::poly
