#pragma once

// Quadratic fields Q(sqrt d): elements, splitting of primes, fundamental
// units, class numbers and generators of principal powers of primes above
// ell. Binary quadratic forms do most of the work.

#include "lognorm/errors.hpp"
#include "lognorm/padic.hpp"

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lognorm::quad {

using padic::Integer;
using padic::LocalSplitting;
using padic::Rational;

inline constexpr long kRadicandCap = 200;

inline bool is_squarefree(const Integer& n)
{
    if (n == 0)
        return false;
    Integer m = abs(n);
    for (Integer p = 2; p * p <= m; ++p) {
        if (m % (p * p) == 0)
            return false;
        if (m % p == 0)
            m /= p;
    }
    return true;
}

inline Integer isqrt(const Integer& n)
{
    Integer r;
    mpz_sqrt(r.get_mpz_t(), n.get_mpz_t());
    return r;
}

inline Integer floor_div(const Integer& a, const Integer& b)
{
    Integer q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

inline Rational half(const Integer& x)
{
    Rational r(x, 2);
    r.canonicalize();
    return r;
}

/// Discriminant of Q(sqrt d).
inline Integer discriminant(const Integer& d) { return padic::mod(d, 4) == 1 ? d : 4 * d; }

/// a + b sqrt(d) with rational coordinates.
struct QuadElement {
    Integer d;
    Rational a;
    Rational b;

    static QuadElement rational(const Integer& d, const Rational& a) { return {d, a, 0}; }

    /// x + y w in the integral basis {1, w}, w = sqrt d or (1 + sqrt d) / 2.
    static QuadElement from_basis(const Integer& d, const Integer& x, const Integer& y)
    {
        if (padic::mod(d, 4) == 1)
            return {d, Rational(x) + half(y), half(y)};
        return {d, Rational(x), Rational(y)};
    }

    /// Coordinates (x, y) in the integral basis; throws if not integral.
    std::pair<Integer, Integer> basis_coordinates() const
    {
        Rational y = padic::mod(d, 4) == 1 ? Rational(2 * b) : b;
        Rational x = padic::mod(d, 4) == 1 ? Rational(a - b) : a;
        x.canonicalize();
        y.canonicalize();
        if (x.get_den() != 1 || y.get_den() != 1)
            throw std::domain_error("QuadElement: not an algebraic integer");
        return {x.get_num(), y.get_num()};
    }

    bool is_integral() const
    {
        try {
            basis_coordinates();
            return true;
        } catch (const std::domain_error&) {
            return false;
        }
    }

    bool is_zero() const { return a == 0 && b == 0; }
    Rational norm() const { return a * a - Rational(d) * b * b; }
    Rational trace() const { return 2 * a; }
    QuadElement conjugate() const { return {d, a, -b}; }

    friend QuadElement operator*(const QuadElement& x, const QuadElement& y)
    {
        if (x.d != y.d)
            throw std::invalid_argument("QuadElement: different fields");
        return {x.d, x.a * y.a + Rational(x.d) * x.b * y.b, x.a * y.b + x.b * y.a};
    }

    friend bool operator==(const QuadElement& x, const QuadElement& y)
    {
        return x.d == y.d && x.a == y.a && x.b == y.b;
    }

    QuadElement pow(unsigned long e) const
    {
        QuadElement r = rational(d, 1);
        for (unsigned long i = 0; i < e; ++i)
            r = r * *this;
        return r;
    }

    std::string to_string() const
    {
        std::string s = a.get_str();
        if (b != 0)
            s += (b > 0 ? " + " : " - ") + Rational(abs(b)).get_str() + "*sqrt(" + d.get_str() + ")";
        return s;
    }
};

/// How ell decomposes in Q(sqrt d).
inline LocalSplitting splitting(const Integer& d, const Integer& ell)
{
    if (ell == 2) {
        Integer r = padic::mod(d, 8);
        if (r == 1)
            return LocalSplitting::split;
        if (r == 5)
            return LocalSplitting::inert;
        return LocalSplitting::ramified;
    }
    if (padic::mod(d, ell) == 0)
        return LocalSplitting::ramified;
    int legendre = mpz_legendre(padic::mod(d, ell).get_mpz_t(), ell.get_mpz_t());
    return legendre == 1 ? LocalSplitting::split : LocalSplitting::inert;
}

inline int torsion_order(const Integer& d)
{
    if (d == -1)
        return 4;
    if (d == -3)
        return 6;
    return 2;
}

/// Fundamental unit > 1 of Q(sqrt d), d > 1 squarefree, as the first
/// convergent of the continued fraction of w (the integral basis generator)
/// that yields a unit.
inline QuadElement fundamental_unit(const Integer& d)
{
    if (d <= 1)
        throw std::invalid_argument("fundamental_unit: d must be a squarefree integer > 1");
    if (!is_squarefree(d))
        throw std::invalid_argument("fundamental_unit: d must be squarefree");
    const bool one_mod_four = padic::mod(d, 4) == 1;
    // w = (P + sqrt D) / Q throughout, with Q | D - P^2.
    Integer big_p = one_mod_four ? 1 : 0;
    Integer big_q = one_mod_four ? 2 : 1;
    const Integer s = isqrt(d);
    Integer p_prev = 1, p_cur = 0;
    Integer q_prev = 0, q_cur = 1;
    for (int step = 0; step < 100000; ++step) {
        // Q stays positive for these reduced starting values.
        Integer a = floor_div(big_p + s, big_q);
        Integer p_next = a * p_prev + p_cur;
        Integer q_next = a * q_prev + q_cur;
        p_cur = p_prev;
        q_cur = q_prev;
        p_prev = p_next;
        q_prev = q_next;
        QuadElement candidate = one_mod_four
                                    ? QuadElement{d, Rational(p_prev) - half(q_prev), half(q_prev)}
                                    : QuadElement{d, Rational(p_prev), Rational(q_prev)};
        Rational n = candidate.norm();
        if (n == 1 || n == -1)
            return candidate;
        big_p = a * big_q - big_p;
        big_q = (d - big_p * big_p) / big_q;
    }
    throw std::logic_error("fundamental_unit: continued fraction did not produce a unit");
}

// ---- binary quadratic forms ---------------------------------------------

struct Form {
    Integer a, b, c;

    Integer discriminant() const { return b * b - 4 * a * c; }
    friend bool operator<(const Form& x, const Form& y)
    {
        return std::tie(x.a, x.b, x.c) < std::tie(y.a, y.b, y.c);
    }
    friend bool operator==(const Form& x, const Form& y) { return x.a == y.a && x.b == y.b && x.c == y.c; }
};

/// A form together with the substitution that produced it: form(v) =
/// original(m v) for column vectors v.
struct TrackedForm {
    Form f;
    Integer m00 = 1, m01 = 0, m10 = 0, m11 = 1;

    /// (u, v) -> (u + t v, v)
    void translate(const Integer& t)
    {
        f = {f.a, f.b + 2 * f.a * t, f.c + f.b * t + f.a * t * t};
        m01 += m00 * t;
        m11 += m10 * t;
    }

    /// (u, v) -> (-v, u)
    void swap()
    {
        f = {f.c, -f.b, f.a};
        Integer n00 = m01, n01 = -m00, n10 = m11, n11 = -m10;
        m00 = n00;
        m01 = n01;
        m10 = n10;
        m11 = n11;
    }

    std::pair<Integer, Integer> first_column() const { return {m00, m10}; }
};

inline Integer gcd3(const Integer& a, const Integer& b, const Integer& c)
{
    Integer g;
    mpz_gcd(g.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_mpz_t());
    return g;
}

/// Gauss reduction of a positive definite form: |b| <= a <= c, with b >= 0
/// when |b| = a or a = c.
inline TrackedForm reduce_definite(TrackedForm t)
{
    if (t.f.discriminant() >= 0 || t.f.a <= 0)
        throw std::invalid_argument("reduce_definite: form is not positive definite");
    for (;;) {
        // Bring b into (-a, a].
        Integer t0 = floor_div(t.f.a - t.f.b, 2 * t.f.a);
        if (t0 != 0)
            t.translate(t0);
        if (t.f.a > t.f.c) {
            t.swap();
            continue;
        }
        if (t.f.a == t.f.c && t.f.b < 0)
            t.swap();
        return t;
    }
}

inline std::vector<Form> reduced_definite_forms(const Integer& disc)
{
    std::vector<Form> out;
    if (disc >= 0)
        throw std::invalid_argument("reduced_definite_forms: discriminant must be negative");
    for (Integer a = 1; 3 * a * a <= -disc; ++a)
        for (Integer b = -a + 1; b <= a; ++b) {
            Integer num = b * b - disc;
            if (num % (4 * a) != 0)
                continue;
            Integer c = num / (4 * a);
            if (c < a || (c == a && b < 0))
                continue;
            if (gcd3(a, b, c) != 1)
                continue;
            out.push_back({a, b, c});
        }
    return out;
}

namespace detail {

/// Indefinite reduction step: (a, b, c) -> (c, r, (r^2 - D) / 4c) with
/// r = -b mod 2c, normalized as in Buchmann and Vollmer.
inline void rho(TrackedForm& t, const Integer& s)
{
    const Integer c = t.f.c;
    const Integer ac = abs(c);
    Integer lo = ac > s ? Integer(1 - ac) : Integer(s - 2 * ac + 1);
    // smallest r >= lo with r = -b mod 2c
    Integer m = 2 * ac;
    Integer r = lo + padic::mod(-t.f.b - lo, m);
    t.swap();  // (c, -b, a)
    Integer shift = (r - t.f.b) / (2 * t.f.a);
    t.translate(shift);
}

inline bool is_reduced_indefinite(const Form& f, const Integer& s)
{
    Integer two_a = 2 * abs(f.a);
    return f.b >= 1 && f.b <= s && two_a >= s - f.b + 1 && two_a <= s + f.b;
}

}  // namespace detail

inline TrackedForm reduce_indefinite(TrackedForm t)
{
    const Integer disc = t.f.discriminant();
    const Integer s = isqrt(disc);
    if (disc <= 0 || s * s == disc)
        throw std::invalid_argument("reduce_indefinite: discriminant must be a positive non-square");
    for (int i = 0; i < 100000 && !detail::is_reduced_indefinite(t.f, s); ++i)
        detail::rho(t, s);
    if (!detail::is_reduced_indefinite(t.f, s))
        throw std::logic_error("reduce_indefinite: reduction did not terminate");
    return t;
}

inline std::vector<Form> reduced_indefinite_forms(const Integer& disc)
{
    const Integer s = isqrt(disc);
    std::vector<Form> out;
    for (Integer b = 1; b <= s; ++b) {
        if (padic::mod(b - disc, 2) != 0)
            continue;
        Integer ac = (b * b - disc) / 4;  // negative
        Integer n = abs(ac);
        for (Integer a = 1; a <= n; ++a) {
            if (n % a != 0)
                continue;
            for (int sign : {1, -1}) {
                Form f{sign * a, b, ac / (sign * a)};
                if (detail::is_reduced_indefinite(f, s) && gcd3(f.a, f.b, f.c) == 1)
                    out.push_back(f);
            }
        }
    }
    return out;
}

/// The cycle of reduced forms through a reduced form f.
inline std::vector<Form> rho_cycle(const Form& f)
{
    const Integer disc = f.discriminant();
    const Integer s = isqrt(disc);
    std::vector<Form> cycle{f};
    TrackedForm t{f};
    for (int i = 0; i < 100000; ++i) {
        detail::rho(t, s);
        if (t.f == f)
            return cycle;
        cycle.push_back(t.f);
    }
    throw std::logic_error("rho_cycle: cycle did not close");
}

/// Number of proper equivalence classes of primitive forms of a positive
/// non-square discriminant: the number of rho-cycles of reduced forms.
inline long narrow_class_number(const Integer& disc)
{
    auto forms = reduced_indefinite_forms(disc);
    std::set<Form> seen;
    long cycles = 0;
    for (const auto& f : forms) {
        if (seen.count(f))
            continue;
        ++cycles;
        for (const auto& g : rho_cycle(f))
            seen.insert(g);
    }
    return cycles;
}

/// Class number of Q(sqrt d) for squarefree d with |d| <= kRadicandCap.
inline long class_number(const Integer& d)
{
    if (!is_squarefree(d) || d == 1)
        throw std::invalid_argument("class_number: d must be squarefree and not 1");
    if (abs(d) > kRadicandCap)
        throw UnsupportedInput("class_number: |d| exceeds the cap of " + std::to_string(kRadicandCap));
    const Integer disc = discriminant(d);
    if (d < 0)
        return static_cast<long>(reduced_definite_forms(disc).size());
    long narrow = narrow_class_number(disc);
    return fundamental_unit(d).norm() == -1 ? narrow : narrow / 2;
}

// ---- primes above ell and their principal powers --------------------------

/// The prime of Q(sqrt d) above ell singled out for generator searches: for
/// split ell, the one containing sqrt(d) - r with r the canonical Hensel
/// root (the branch 0 place).
struct PrincipalPower {
    long exponent = 1;  // h', the order of the prime in the class group
    QuadElement generator;
};

namespace detail {

/// Norm form of the integral basis: N(x + y w).
inline Integer basis_norm(const Integer& d, const Integer& x, const Integer& y)
{
    if (padic::mod(d, 4) == 1)
        return x * x + x * y + y * y * ((1 - d) / 4);
    return x * x - d * y * y;
}

/// A root s of the minimal polynomial of w modulo ell^k, in the branch 0
/// place when ell splits.
inline Integer basis_root(const Integer& d, const Integer& ell, long k, LocalSplitting kind)
{
    const Integer m = padic::ipow(ell, static_cast<unsigned long>(k));
    const bool one_mod_four = padic::mod(d, 4) == 1;
    if (kind == LocalSplitting::split) {
        auto r = padic::hensel_sqrt(d, ell, k + 2);
        if (!r)
            throw std::logic_error("basis_root: split prime without a square root");
        Integer root = r->residue(k + 2);
        if (!one_mod_four)
            return padic::mod(root, m);
        if (ell == 2)
            return padic::mod((root + 1) / 2, m);
        return padic::mod((root + 1) * padic::inverse_mod(2, m), m);
    }
    if (kind != LocalSplitting::ramified || k != 1)
        throw std::invalid_argument("basis_root: only split primes or the ramified prime itself");
    for (Integer s = 0; s < ell; ++s)
        if (padic::mod(basis_norm(d, -s, 1), ell) == 0)
            return s;
    throw std::logic_error("basis_root: no root modulo the ramified prime");
}

/// Generator of the ideal [ell^k, w - s] if it is principal.
inline std::optional<QuadElement> principal_generator(const Integer& d, const Integer& ell, long k, const Integer& s)
{
    const Integer big_l = padic::ipow(ell, static_cast<unsigned long>(k));
    // N(u L + v (w - s)) = L * Q(u, v)
    Integer f_l = basis_norm(d, big_l, 0);
    Integer f_s = basis_norm(d, -s, 1);
    Integer f_ls = basis_norm(d, big_l - s, 1);
    if (f_s % big_l != 0)
        throw std::logic_error("principal_generator: lattice is not an ideal");
    Form q{f_l / big_l, (f_ls - f_l - f_s) / big_l, f_s / big_l};
    TrackedForm t{q};
    std::optional<std::pair<Integer, Integer>> uv;
    if (d < 0) {
        t = reduce_definite(t);
        if (t.f.a == 1)
            uv = t.first_column();
    } else {
        t = reduce_indefinite(t);
        const Integer disc = q.discriminant();
        const Integer s_disc = isqrt(disc);
        const Form start = t.f;
        for (int i = 0; i < 100000; ++i) {
            if (t.f.a == 1 || t.f.a == -1) {
                uv = t.first_column();
                break;
            }
            detail::rho(t, s_disc);
            if (t.f == start)
                break;
        }
    }
    if (!uv)
        return std::nullopt;
    Integer x = uv->first * big_l - uv->second * s;
    Integer y = uv->second;
    return QuadElement::from_basis(d, x, y);
}

/// True when x lies in the branch 0 prime above a split ell.
inline bool in_branch_zero(const QuadElement& x, const Integer& ell)
{
    auto v = padic::local_norm_quad(x.a, x.b, x.d, {LocalSplitting::split, 0}, ell, 1);
    return !v.is_zero() && v.valuation() > 0;
}

}  // namespace detail

/// (h', alpha) with (alpha) = p^h' for the chosen prime p above ell and h'
/// minimal. Inert ell gives (1, ell).
inline PrincipalPower principal_power_generator(const Integer& d, const Integer& ell)
{
    padic::detail::require_prime(ell);
    if (!is_squarefree(d) || d == 1)
        throw std::invalid_argument("principal_power_generator: d must be squarefree and not 1");
    if (abs(d) > kRadicandCap)
        throw UnsupportedInput("principal_power_generator: |d| exceeds the cap of " + std::to_string(kRadicandCap));
    const LocalSplitting kind = splitting(d, ell);
    if (kind == LocalSplitting::inert)
        return {1, QuadElement::rational(d, Rational(ell))};
    if (kind == LocalSplitting::ramified) {
        auto g = detail::principal_generator(d, ell, 1, detail::basis_root(d, ell, 1, kind));
        if (g)
            return {1, *g};
        return {2, QuadElement::rational(d, Rational(ell))};
    }
    const long h = class_number(d);
    for (long k = 1; k <= h; ++k) {
        if (h % k != 0)
            continue;
        auto g = detail::principal_generator(d, ell, k, detail::basis_root(d, ell, k, kind));
        if (!g)
            continue;
        QuadElement alpha = *g;
        if (!detail::in_branch_zero(alpha, ell))
            alpha = alpha.conjugate();
        return {k, alpha};
    }
    throw SearchExhausted("principal_power_generator: no principal power up to the class number");
}

}  // namespace lognorm::quad
