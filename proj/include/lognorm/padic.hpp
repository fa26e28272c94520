#pragma once

// l-adic numbers at tracked finite precision, the Iwasawa logarithm and
// Hensel square roots. Everything here is a pure function of its inputs.

#include <gmpxx.h>

#include <algorithm>
#include <limits>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lognorm::padic {

using Integer = mpz_class;
using Rational = mpq_class;

/// Absolute precision carried by exact zeros.
inline constexpr long kExactPrecision = std::numeric_limits<long>::max() / 4;

/// Extra digits carried past the requested precision when truncating series.
inline constexpr long kSeriesGuardDigits = 2;

class InfiniteValuation : public std::domain_error {
public:
    InfiniteValuation() : std::domain_error("valuation of zero is infinite") {}
};

inline Integer ipow(const Integer& base, unsigned long exponent)
{
    Integer r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), exponent);
    return r;
}

inline bool is_prime(const Integer& n)
{
    return n >= 2 && mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

/// Non-negative residue of x modulo m.
inline Integer mod(const Integer& x, const Integer& m)
{
    Integer r;
    mpz_mod(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t());
    return r;
}

inline Integer inverse_mod(const Integer& x, const Integer& m)
{
    Integer r;
    if (mpz_invert(r.get_mpz_t(), x.get_mpz_t(), m.get_mpz_t()) == 0)
        throw std::domain_error("inverse_mod: element is not invertible");
    return r;
}

inline Integer pow_mod(const Integer& base, const Integer& exponent, const Integer& m)
{
    Integer r;
    mpz_powm(r.get_mpz_t(), base.get_mpz_t(), exponent.get_mpz_t(), m.get_mpz_t());
    return r;
}

/// Divides every factor ell out of x in place and returns how many there were.
inline long remove_factor(Integer& x, const Integer& ell)
{
    if (x == 0)
        throw InfiniteValuation();
    return static_cast<long>(mpz_remove(x.get_mpz_t(), x.get_mpz_t(), ell.get_mpz_t()));
}

inline long val_ell(const Integer& x, const Integer& ell)
{
    Integer y = x;
    return remove_factor(y, ell);
}

/// Ordinary ell-adic valuation of a nonzero rational.
inline long val_ell(const Rational& x, const Integer& ell)
{
    if (x == 0)
        throw InfiniteValuation();
    return val_ell(Integer(x.get_num()), ell) - val_ell(Integer(x.get_den()), ell);
}

/// floor(log_ell(k)) for k >= 1.
inline long floor_log(unsigned long k, unsigned long ell)
{
    long r = 0;
    while (k >= ell) {
        k /= ell;
        ++r;
    }
    return r;
}

namespace detail {

inline long add_precision(long a, long b)
{
    if (a >= kExactPrecision || b >= kExactPrecision)
        return kExactPrecision;
    return std::min(a + b, kExactPrecision);
}

inline void require_prime(const Integer& ell)
{
    if (!is_prime(ell))
        throw std::invalid_argument("ell-adic arithmetic needs a prime, got " + ell.get_str());
}

}  // namespace detail

/// An element of Q_ell written ell^valuation * unit with the unit known modulo
/// ell^precision, so the number itself is known modulo
/// ell^(valuation + precision). Zero is canonical: unit 0, precision 0, and
/// the valuation slot holds the absolute precision to which it is known
/// (kExactPrecision for an exact zero).
class PadicNumber {
public:
    static PadicNumber zero(const Integer& prime, long absolute_precision = kExactPrecision)
    {
        detail::require_prime(prime);
        return PadicNumber(prime, std::min(absolute_precision, kExactPrecision), Integer(0), 0);
    }

    static PadicNumber from_integer(const Integer& x, const Integer& prime, long relative_precision)
    {
        return from_rational(Rational(x), prime, relative_precision);
    }

    static PadicNumber from_rational(const Rational& x, const Integer& prime, long relative_precision)
    {
        detail::require_prime(prime);
        if (relative_precision < 1)
            throw std::invalid_argument("PadicNumber: relative precision must be positive");
        if (x == 0)
            return zero(prime);
        Integer num = x.get_num();
        Integer den = x.get_den();
        long v = remove_factor(num, prime) - remove_factor(den, prime);
        Integer m = ipow(prime, static_cast<unsigned long>(relative_precision));
        Integer u = mod(num * inverse_mod(den, m), m);
        return PadicNumber(prime, v, u, relative_precision);
    }

    /// The number congruent to `residue` modulo ell^absolute_precision.
    static PadicNumber from_residue(const Integer& residue, const Integer& prime, long absolute_precision)
    {
        detail::require_prime(prime);
        if (absolute_precision < 0)
            throw std::invalid_argument("PadicNumber: negative absolute precision");
        Integer r = mod(residue, ipow(prime, static_cast<unsigned long>(absolute_precision)));
        if (r == 0)
            return zero(prime, absolute_precision);
        long v = remove_factor(r, prime);
        return PadicNumber(prime, v, r, absolute_precision - v);
    }

    /// ell^valuation * unit + O(ell^(valuation + relative_precision)).
    static PadicNumber from_parts(const Integer& prime, long valuation, const Integer& unit,
                                  long relative_precision)
    {
        detail::require_prime(prime);
        if (relative_precision < 1)
            throw std::invalid_argument("PadicNumber: relative precision must be positive");
        Integer u = mod(unit, ipow(prime, static_cast<unsigned long>(relative_precision)));
        if (mpz_divisible_p(u.get_mpz_t(), prime.get_mpz_t()))
            throw std::invalid_argument("PadicNumber: unit part divisible by the prime");
        return PadicNumber(prime, valuation, u, relative_precision);
    }

    const Integer& prime() const { return prime_; }
    bool is_zero() const { return unit_ == 0; }
    bool is_exact_zero() const { return is_zero() && valuation_ >= kExactPrecision; }
    bool is_unit() const { return !is_zero() && valuation_ == 0; }

    /// Valuation of a nonzero number; for zero, the absolute precision.
    long valuation() const { return valuation_; }
    const Integer& unit() const { return unit_; }
    long relative_precision() const { return precision_; }
    long absolute_precision() const
    {
        return is_zero() ? valuation_ : detail::add_precision(valuation_, precision_);
    }

    /// Forgets digits so that the result is known modulo ell^a. Never raises
    /// the precision.
    PadicNumber with_absolute_precision(long a) const
    {
        if (a >= absolute_precision())
            return *this;
        if (is_zero() || a <= valuation_)
            return zero(prime_, a);
        long n = a - valuation_;
        return PadicNumber(prime_, valuation_, mod(unit_, modulus(n)), n);
    }

    PadicNumber with_relative_precision(long n) const
    {
        if (is_zero() || n >= precision_)
            return *this;
        if (n < 1)
            throw std::invalid_argument("PadicNumber: relative precision must be positive");
        return PadicNumber(prime_, valuation_, mod(unit_, modulus(n)), n);
    }

    /// The representative in [0, ell^a) of this number modulo ell^a.
    Integer residue(long a) const
    {
        if (a < 0 || a > absolute_precision())
            throw std::domain_error("PadicNumber::residue: not known to that precision");
        if (is_zero() || valuation_ >= a)
            return 0;
        if (valuation_ < 0)
            throw std::domain_error("PadicNumber::residue: number is not integral");
        return mod(unit_ * ipow(prime_, static_cast<unsigned long>(valuation_)), modulus(a));
    }

    PadicNumber operator-() const
    {
        if (is_zero())
            return *this;
        return PadicNumber(prime_, valuation_, mod(-unit_, modulus(precision_)), precision_);
    }

    friend PadicNumber operator+(const PadicNumber& x, const PadicNumber& y)
    {
        x.require_same_prime(y);
        long a = std::min(x.absolute_precision(), y.absolute_precision());
        if (x.is_zero() && y.is_zero())
            return zero(x.prime_, a);
        if (x.is_zero())
            return y.with_absolute_precision(a);
        if (y.is_zero())
            return x.with_absolute_precision(a);
        long vm = std::min(x.valuation_, y.valuation_);
        if (a <= vm)
            return zero(x.prime_, a);
        const Integer& ell = x.prime_;
        Integer s = x.unit_ * ipow(ell, static_cast<unsigned long>(x.valuation_ - vm)) +
                    y.unit_ * ipow(ell, static_cast<unsigned long>(y.valuation_ - vm));
        s = mod(s, ipow(ell, static_cast<unsigned long>(a - vm)));
        if (s == 0)
            return zero(ell, a);
        long k = remove_factor(s, ell);
        return PadicNumber(ell, vm + k, s, a - vm - k);
    }

    friend PadicNumber operator-(const PadicNumber& x, const PadicNumber& y) { return x + (-y); }

    friend PadicNumber operator*(const PadicNumber& x, const PadicNumber& y)
    {
        x.require_same_prime(y);
        if (x.is_zero() && y.is_zero())
            return zero(x.prime_, detail::add_precision(x.valuation_, y.valuation_));
        if (x.is_zero())
            return zero(x.prime_, detail::add_precision(x.valuation_, y.valuation_));
        if (y.is_zero())
            return zero(x.prime_, detail::add_precision(y.valuation_, x.valuation_));
        long n = std::min(x.precision_, y.precision_);
        return PadicNumber(x.prime_, x.valuation_ + y.valuation_, mod(x.unit_ * y.unit_, x.modulus(n)), n);
    }

    /// Product with an exact nonzero integer.
    PadicNumber times(const Integer& k) const
    {
        if (k == 0)
            throw std::invalid_argument("PadicNumber::times: zero factor");
        Integer u = k;
        long v = remove_factor(u, prime_);
        if (is_zero())
            return zero(prime_, detail::add_precision(valuation_, v));
        return PadicNumber(prime_, valuation_ + v, mod(unit_ * u, modulus(precision_)), precision_);
    }

    PadicNumber inverse() const
    {
        if (is_zero())
            throw std::domain_error("PadicNumber: division by zero");
        return PadicNumber(prime_, -valuation_, inverse_mod(unit_, modulus(precision_)), precision_);
    }

    friend PadicNumber operator/(const PadicNumber& x, const PadicNumber& y) { return x * y.inverse(); }

    PadicNumber pow(unsigned long e) const
    {
        if (e == 0)
            return from_integer(1, prime_, is_zero() ? 1 : precision_);
        PadicNumber base = *this;
        std::optional<PadicNumber> result;
        while (e > 0) {
            if (e & 1UL)
                result = result ? *result * base : base;
            e >>= 1;
            if (e > 0)
                base = base * base;
        }
        return *result;
    }

    /// True when x - y vanishes modulo ell^a. Both must be known that far.
    bool congruent(const PadicNumber& other, long a) const
    {
        require_same_prime(other);
        if (a > absolute_precision() || a > other.absolute_precision())
            throw std::domain_error("PadicNumber::congruent: precision exceeds what is known");
        PadicNumber d = *this - other;
        return d.is_zero() || d.valuation() >= a;
    }

    std::string to_string() const
    {
        std::ostringstream os;
        if (is_zero()) {
            if (is_exact_zero())
                os << "0";
            else
                os << "O(" << prime_.get_str() << "^" << valuation_ << ")";
            return os.str();
        }
        os << unit_.get_str();
        if (valuation_ != 0)
            os << "*" << prime_.get_str() << "^" << valuation_;
        os << " + O(" << prime_.get_str() << "^" << absolute_precision() << ")";
        return os.str();
    }

private:
    PadicNumber(Integer prime, long valuation, Integer unit, long precision)
        : prime_(std::move(prime)), valuation_(valuation), unit_(std::move(unit)), precision_(precision)
    {
    }

    Integer modulus(long n) const { return ipow(prime_, static_cast<unsigned long>(n)); }

    void require_same_prime(const PadicNumber& other) const
    {
        if (prime_ != other.prime_)
            throw std::invalid_argument("PadicNumber: mixed primes");
    }

    Integer prime_;
    long valuation_ = 0;
    Integer unit_;
    long precision_ = 0;
};

/// Teichmuller representative of a unit: the root of unity of order dividing
/// ell - 1 congruent to u mod ell (for ell = 2, the sign congruent to u mod 4).
inline PadicNumber teichmuller(const PadicNumber& u, long precision)
{
    if (!u.is_unit())
        throw std::domain_error("teichmuller: argument is not an ell-adic unit");
    if (precision < 1)
        throw std::invalid_argument("teichmuller: precision must be positive");
    const Integer& ell = u.prime();
    long n = std::min(precision, u.relative_precision());
    if (ell == 2) {
        if (u.relative_precision() < 2)
            throw std::domain_error("teichmuller: a 2-adic unit must be known mod 4");
        Integer sign = (mod(u.unit(), 4) == 1) ? 1 : -1;
        return PadicNumber::from_integer(sign, ell, n);
    }
    Integer m = ipow(ell, static_cast<unsigned long>(n));
    Integer x = mod(u.unit(), m);
    // x^(ell^k) is correct modulo ell^(k+1).
    for (long k = 0; k < n; ++k)
        x = pow_mod(x, ell, m);
    return PadicNumber::from_parts(ell, 0, x, n);
}

namespace detail {

/// log(1 + t) modulo ell^precision for an integer t divisible by ell
/// (by 4 when ell = 2). Terms are dropped once their valuation provably
/// exceeds precision + kSeriesGuardDigits.
inline Integer log1p_series(const Integer& t, const Integer& ell, long precision)
{
    if (t == 0)
        return 0;
    long vt = val_ell(t, ell);
    if (vt < 1 || (ell == 2 && vt < 2))
        throw std::domain_error("log1p_series: argument outside the disc of convergence");
    unsigned long ell_ui = ell.fits_ulong_p() ? ell.get_ui() : std::numeric_limits<unsigned long>::max();
    const long target = precision + kSeriesGuardDigits;
    // k * vt - floor(log_ell k) is non-decreasing in k, so the first k past
    // the target bounds every later term as well.
    unsigned long last = 1;
    while (static_cast<long>(last) * vt - floor_log(last, ell_ui) < target)
        ++last;
    long extra = floor_log(last, ell_ui);
    Integer work_mod = ipow(ell, static_cast<unsigned long>(precision + extra));
    Integer out_mod = ipow(ell, static_cast<unsigned long>(precision));
    Integer power = 1;
    Integer sum = 0;
    for (unsigned long k = 1; k < last; ++k) {
        power = mod(power * t, work_mod);
        Integer kk = k;
        long vk = remove_factor(kk, ell);
        Integer term = power;
        if (vk > 0)
            mpz_divexact(term.get_mpz_t(), term.get_mpz_t(), ipow(ell, static_cast<unsigned long>(vk)).get_mpz_t());
        term = mod(term * inverse_mod(kk, out_mod), out_mod);
        if (k % 2 == 1)
            sum += term;
        else
            sum -= term;
    }
    return mod(sum, out_mod);
}

}  // namespace detail

/// Iwasawa logarithm Log_ell: the branch of the ell-adic logarithm with
/// Log(ell) = 0, killing roots of unity. The result is known to absolute
/// precision min(precision, relative precision of x).
inline PadicNumber iwasawa_log(const PadicNumber& x, long precision)
{
    if (precision < 1)
        throw std::invalid_argument("iwasawa_log: precision must be at least 1");
    if (x.is_zero())
        throw std::domain_error("iwasawa_log: logarithm of zero");
    const Integer& ell = x.prime();
    long a = std::min(precision, x.relative_precision());
    PadicNumber u = PadicNumber::from_parts(ell, 0, x.unit(), x.relative_precision());
    if (ell == 2) {
        if (x.relative_precision() < 2)
            throw std::domain_error("iwasawa_log: 2-adic input must be known mod 4");
        // <u> = u / omega with omega = +-1; log <u> = log(<u>^2) / 2.
        Integer m = ipow(ell, static_cast<unsigned long>(a + 1));
        Integer w = mod(u.unit() * teichmuller(u, a).unit(), m);
        Integer s = mod(w * w, m);
        Integer doubled = detail::log1p_series(s - 1, ell, a + 1);
        Integer half = doubled / 2;
        return PadicNumber::from_residue(half, ell, a);
    }
    Integer m = ipow(ell, static_cast<unsigned long>(a));
    PadicNumber omega = teichmuller(u, a);
    Integer w = mod(u.unit() * inverse_mod(omega.unit(), m), m);
    return PadicNumber::from_residue(detail::log1p_series(w - 1, ell, a), ell, a);
}

inline PadicNumber iwasawa_log(const Rational& x, const Integer& ell, long precision)
{
    if (precision < 1)
        throw std::invalid_argument("iwasawa_log: precision must be at least 1");
    if (x == 0)
        throw std::domain_error("iwasawa_log: logarithm of zero");
    return iwasawa_log(PadicNumber::from_rational(x, ell, precision + kSeriesGuardDigits), precision);
}

namespace detail {

/// Square root of a modulo the odd prime p, or nullopt for non-residues.
inline std::optional<Integer> sqrt_mod_prime(const Integer& a, const Integer& p)
{
    Integer x = mod(a, p);
    if (x == 0)
        return Integer(0);
    if (mpz_legendre(x.get_mpz_t(), p.get_mpz_t()) != 1)
        return std::nullopt;
    // Tonelli-Shanks.
    Integer q = p - 1;
    long s = remove_factor(q, Integer(2));
    Integer z = 2;
    while (mpz_legendre(z.get_mpz_t(), p.get_mpz_t()) != -1)
        ++z;
    Integer c = pow_mod(z, q, p);
    Integer r = pow_mod(x, (q + 1) / 2, p);
    Integer t = pow_mod(x, q, p);
    long m = s;
    while (t != 1) {
        long i = 0;
        Integer tt = t;
        while (tt != 1) {
            tt = mod(tt * tt, p);
            ++i;
        }
        Integer b = c;
        for (long j = 0; j < m - i - 1; ++j)
            b = mod(b * b, p);
        r = mod(r * b, p);
        c = mod(b * b, p);
        t = mod(t * c, p);
        m = i;
    }
    return r;
}

}  // namespace detail

/// Square root of an ell-adic unit a to relative precision `precision`.
/// The root returned is the one whose residue mod ell lies in
/// [1, (ell-1)/2]; for ell = 2 it is the root congruent to 1 mod 4.
inline std::optional<PadicNumber> hensel_sqrt(const Integer& a, const Integer& ell, long precision)
{
    detail::require_prime(ell);
    if (precision < 1)
        throw std::invalid_argument("hensel_sqrt: precision must be positive");
    if (mpz_divisible_p(a.get_mpz_t(), ell.get_mpz_t()))
        throw std::invalid_argument("hensel_sqrt: radicand must be prime to ell");
    if (ell == 2) {
        if (mod(a, 8) != 1)
            return std::nullopt;
        // Invariant: x^2 = a mod 2^k; either x or x + 2^(k-1) works mod 2^(k+1).
        Integer x = 1;
        for (long k = 3; k < precision + 2; ++k) {
            Integer next_mod = ipow(ell, static_cast<unsigned long>(k + 1));
            if (mod(x * x - a, next_mod) != 0)
                x += ipow(ell, static_cast<unsigned long>(k - 1));
        }
        return PadicNumber::from_parts(ell, 0, x, precision);
    }
    auto root = detail::sqrt_mod_prime(a, ell);
    if (!root)
        return std::nullopt;
    Integer x = *root;
    if (2 * x > ell)
        x = ell - x;
    long k = 1;
    while (k < precision) {
        k = std::min(2 * k, precision);
        Integer m = ipow(ell, static_cast<unsigned long>(k));
        x = mod(x - (x * x - a) * inverse_mod(2 * x, m), m);
    }
    return PadicNumber::from_parts(ell, 0, x, precision);
}

enum class LocalSplitting { split, inert, ramified };

inline const char* to_string(LocalSplitting s)
{
    switch (s) {
    case LocalSplitting::split:
        return "split";
    case LocalSplitting::inert:
        return "inert";
    case LocalSplitting::ramified:
        return "ramified";
    }
    return "?";
}

/// A place of Q(sqrt d) above ell. For split ell, branch 0 sends sqrt d to
/// the canonical Hensel root r of hensel_sqrt and branch 1 sends it to -r.
struct LocalPlace {
    LocalSplitting kind = LocalSplitting::inert;
    int branch = 0;
};

/// a + b sqrt(d) viewed in Q_ell(sqrt d). When sqrt d lies in Q_ell it is
/// stored, lifted to the working precision, so the element can be pushed
/// through either embedding.
class PadicQuadElement {
public:
    static PadicQuadElement make(const Rational& a, const Rational& b, const Integer& d, const Integer& ell,
                                 long precision)
    {
        PadicQuadElement e(PadicNumber::from_rational(a, ell, precision),
                           PadicNumber::from_rational(b, ell, precision), d);
        if (!mpz_divisible_p(d.get_mpz_t(), ell.get_mpz_t()))
            e.sqrt_d_ = hensel_sqrt(d, ell, precision);
        return e;
    }

    const PadicNumber& a() const { return a_; }
    const PadicNumber& b() const { return b_; }
    const Integer& radicand() const { return d_; }
    bool split() const { return sqrt_d_.has_value(); }
    const std::optional<PadicNumber>& sqrt_radicand() const { return sqrt_d_; }

    PadicNumber embed(int branch) const
    {
        if (!sqrt_d_)
            throw std::domain_error("PadicQuadElement: sqrt(d) is not in Q_ell");
        PadicNumber root = branch == 0 ? *sqrt_d_ : -*sqrt_d_;
        return a_ + b_ * root;
    }

    PadicNumber norm() const
    {
        long n = std::max({a_.relative_precision(), b_.relative_precision(), 1L}) + 1;
        PadicNumber d = PadicNumber::from_integer(d_, a_.prime(), n);
        return a_ * a_ - d * b_ * b_;
    }

private:
    PadicQuadElement(PadicNumber a, PadicNumber b, Integer d) : a_(std::move(a)), b_(std::move(b)), d_(std::move(d)) {}

    PadicNumber a_;
    PadicNumber b_;
    Integer d_;
    std::optional<PadicNumber> sqrt_d_;
};

inline PadicNumber iwasawa_log(const PadicQuadElement& x, int branch, long precision)
{
    return iwasawa_log(x.embed(branch), precision);
}

/// Local norm N_{K_p/Q_ell}(a + b sqrt d) at a place p above ell, to relative
/// precision `precision`. Inert and ramified places give the global norm;
/// split places give the image under the embedding selected by the branch.
inline PadicNumber local_norm_quad(const Rational& a, const Rational& b, const Integer& d, LocalPlace place,
                                   const Integer& ell, long precision)
{
    detail::require_prime(ell);
    if (precision < 1)
        throw std::invalid_argument("local_norm_quad: precision must be positive");
    if (a == 0 && b == 0)
        throw std::domain_error("local_norm_quad: norm of zero");
    if (place.kind != LocalSplitting::split)
        return PadicNumber::from_rational(a * a - Rational(d) * b * b, ell, precision);
    if (b == 0)
        return PadicNumber::from_rational(a, ell, precision);
    if (mpz_divisible_p(d.get_mpz_t(), ell.get_mpz_t()))
        throw std::domain_error("local_norm_quad: ell divides the radicand, no split place");
    long working = precision + kSeriesGuardDigits + std::max(0L, -val_ell(b, ell));
    for (int attempt = 0; attempt < 64; ++attempt) {
        auto root = hensel_sqrt(d, ell, working);
        if (!root)
            throw std::domain_error("local_norm_quad: radicand is not a square in Q_ell");
        PadicNumber r = place.branch == 0 ? *root : -*root;
        PadicNumber x = PadicNumber::from_rational(a, ell, working + 4) +
                        PadicNumber::from_rational(b, ell, working + 4) * r;
        if (!x.is_zero() && x.relative_precision() >= precision)
            return x.with_relative_precision(precision);
        long have = x.is_zero() ? 0 : x.relative_precision();
        working += (precision - have) + 1;
    }
    throw std::runtime_error("local_norm_quad: precision loss did not settle");
}

}  // namespace lognorm::padic
