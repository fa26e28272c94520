#pragma once

// Complex characters of finite groups, held as residues in F_p for a prime
// p = 1 mod exp(G) with p > 2|G|^2, so that every cyclotomic value has an
// exact image and every integer we need (degrees, multiplicities) is
// recovered from its residue. On top of the table: permutation characters,
// the regular character, meets, and the naive norm character formulas.

#include "lognorm/errors.hpp"
#include "lognorm/groups.hpp"

#include <algorithm>
#include <cstdint>
#include <memory>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace lognorm::chars {

using groups::ConjugacyClasses;
using groups::FiniteGroup;
using groups::Subgroup;

namespace detail {

using i64 = std::int64_t;

inline i64 mulmod(i64 a, i64 b, i64 p) { return static_cast<i64>((__int128)a * b % p); }

inline i64 powmod(i64 a, i64 e, i64 p)
{
    i64 r = 1;
    a %= p;
    if (a < 0)
        a += p;
    while (e > 0) {
        if (e & 1)
            r = mulmod(r, a, p);
        a = mulmod(a, a, p);
        e >>= 1;
    }
    return r;
}

inline i64 invmod(i64 a, i64 p)
{
    a %= p;
    if (a < 0)
        a += p;
    if (a == 0)
        throw std::domain_error("invmod: zero has no inverse");
    return powmod(a, p - 2, p);
}

inline bool is_small_prime(i64 n)
{
    if (n < 2)
        return false;
    for (i64 d = 2; d * d <= n; ++d)
        if (n % d == 0)
            return false;
    return true;
}

/// Smallest prime p = 1 mod e with p > bound.
inline i64 dixon_prime(i64 e, i64 bound)
{
    i64 p = (bound / e + 1) * e + 1;
    while (!is_small_prime(p))
        p += e;
    return p;
}

/// An element of order exactly e in F_p^x.
inline i64 root_of_unity(i64 e, i64 p)
{
    std::vector<i64> primes;
    i64 m = e;
    for (i64 d = 2; d * d <= m; ++d)
        if (m % d == 0) {
            primes.push_back(d);
            while (m % d == 0)
                m /= d;
        }
    if (m > 1)
        primes.push_back(m);
    for (i64 g = 2; g < p; ++g) {
        i64 z = powmod(g, (p - 1) / e, p);
        bool ok = true;
        for (i64 q : primes)
            ok = ok && powmod(z, e / q, p) != 1;
        if (ok)
            return z;
    }
    throw std::logic_error("root_of_unity: none found");
}

inline i64 symmetric(i64 r, i64 p)
{
    r %= p;
    if (r < 0)
        r += p;
    return r > p / 2 ? r - p : r;
}

using Matrix = std::vector<std::vector<i64>>;

/// Characteristic polynomial det(xI - A) mod p, coefficients from degree 0
/// upward, via reduction to Hessenberg form.
inline std::vector<i64> charpoly(Matrix a, i64 p)
{
    const std::size_t n = a.size();
    for (std::size_t j = 0; j + 2 < n + 1 && j + 1 < n; ++j) {
        std::size_t r = j + 1;
        while (r < n && a[r][j] == 0)
            ++r;
        if (r == n)
            continue;
        if (r != j + 1) {
            std::swap(a[r], a[j + 1]);
            for (auto& row : a)
                std::swap(row[r], row[j + 1]);
        }
        const i64 inv = invmod(a[j + 1][j], p);
        for (std::size_t i = j + 2; i < n; ++i) {
            if (a[i][j] == 0)
                continue;
            i64 f = mulmod(a[i][j], inv, p);
            for (std::size_t c = 0; c < n; ++c)
                a[i][c] = (a[i][c] - mulmod(f, a[j + 1][c], p) + p) % p;
            for (std::size_t rr = 0; rr < n; ++rr)
                a[rr][j + 1] = (a[rr][j + 1] + mulmod(f, a[rr][i], p)) % p;
        }
    }
    // polys[m] = charpoly of the leading m x m block.
    std::vector<std::vector<i64>> polys{{1}};
    for (std::size_t m = 1; m <= n; ++m) {
        const auto& prev = polys[m - 1];
        std::vector<i64> cur(m + 1, 0);
        for (std::size_t t = 0; t < prev.size(); ++t) {
            cur[t + 1] = (cur[t + 1] + prev[t]) % p;
            cur[t] = (cur[t] - mulmod(a[m - 1][m - 1], prev[t], p) + p) % p;
        }
        i64 sub = 1;
        for (std::size_t i = m - 1; i-- > 0;) {
            sub = mulmod(sub, a[i + 1][i], p);
            if (sub == 0)
                break;
            i64 coef = mulmod(a[i][m - 1], sub, p);
            for (std::size_t t = 0; t < polys[i].size(); ++t)
                cur[t] = (cur[t] - mulmod(coef, polys[i][t], p) + p) % p;
        }
        polys.push_back(std::move(cur));
    }
    return polys[n];
}

/// Basis of the kernel of a mod p.
inline std::vector<std::vector<i64>> kernel(Matrix a, i64 p)
{
    const std::size_t rows = a.size();
    const std::size_t cols = rows ? a[0].size() : 0;
    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t piv = r;
        while (piv < rows && a[piv][c] == 0)
            ++piv;
        if (piv == rows)
            continue;
        std::swap(a[piv], a[r]);
        i64 inv = invmod(a[r][c], p);
        for (auto& x : a[r])
            x = mulmod(x, inv, p);
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || a[i][c] == 0)
                continue;
            i64 f = a[i][c];
            for (std::size_t t = 0; t < cols; ++t)
                a[i][t] = (a[i][t] - mulmod(f, a[r][t], p) + p) % p;
        }
        pivot_col.push_back(static_cast<int>(c));
        ++r;
    }
    std::vector<bool> is_pivot(cols, false);
    for (int c : pivot_col)
        is_pivot[c] = true;
    std::vector<std::vector<i64>> basis;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f])
            continue;
        std::vector<i64> v(cols, 0);
        v[f] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i)
            v[pivot_col[i]] = (p - a[i][f]) % p;
        basis.push_back(std::move(v));
    }
    return basis;
}

}  // namespace detail

/// Group data shared by a table and all class functions built from it.
struct CharacterSpace {
    FiniteGroup group;
    ConjugacyClasses classes;
    std::int64_t prime = 0;
    int exponent = 1;
    /// The fixed primitive exponent-th root of unity standing in for
    /// exp(2 pi i / exponent).
    std::int64_t zeta = 1;
    /// class_inverse[i] is the class of g^-1 for g in class i.
    std::vector<int> class_inverse;

    int class_count() const { return classes.count(); }

    int power_class(int c, long k) const
    {
        return classes.class_of[group.power(classes.representatives[c], k)];
    }

    static std::shared_ptr<const CharacterSpace> make(const FiniteGroup& g)
    {
        auto s = std::make_shared<CharacterSpace>(CharacterSpace{g, groups::conjugacy_classes(g), 0, 1, 1, {}});
        const std::int64_t n = g.order();
        s->exponent = g.exponent();
        s->prime = detail::dixon_prime(s->exponent, 2 * n * n);
        s->zeta = detail::root_of_unity(s->exponent, s->prime);
        for (int c = 0; c < s->class_count(); ++c)
            s->class_inverse.push_back(s->classes.class_of[g.inv(s->classes.representatives[c])]);
        return s;
    }
};

class ClassFunction {
public:
    ClassFunction(std::shared_ptr<const CharacterSpace> space, std::vector<std::int64_t> values)
        : space_(std::move(space)), values_(std::move(values))
    {
        if (static_cast<int>(values_.size()) != space_->class_count())
            throw std::invalid_argument("ClassFunction: one value per class is required");
        for (auto& v : values_) {
            v %= space_->prime;
            if (v < 0)
                v += space_->prime;
        }
    }

    static ClassFunction from_integers(std::shared_ptr<const CharacterSpace> space, const std::vector<long>& values)
    {
        return ClassFunction(std::move(space), std::vector<std::int64_t>(values.begin(), values.end()));
    }

    static ClassFunction zero(std::shared_ptr<const CharacterSpace> space)
    {
        const int k = space->class_count();
        return ClassFunction(std::move(space), std::vector<std::int64_t>(k, 0));
    }

    const std::shared_ptr<const CharacterSpace>& space() const { return space_; }
    /// Residue of the value on class c.
    std::int64_t residue(int c) const { return values_[c]; }
    const std::vector<std::int64_t>& residues() const { return values_; }

    /// The value on class c as an integer; meaningful for integer-valued
    /// functions such as permutation characters.
    long integer_value(int c) const { return static_cast<long>(detail::symmetric(values_[c], space_->prime)); }

    std::vector<long> integer_values() const
    {
        std::vector<long> out;
        for (int c = 0; c < static_cast<int>(values_.size()); ++c)
            out.push_back(integer_value(c));
        return out;
    }

    long degree() const { return integer_value(0); }

    /// Value at an element rather than a class.
    std::int64_t at_element(int g) const { return values_[space_->classes.class_of[g]]; }

    friend bool operator==(const ClassFunction& a, const ClassFunction& b)
    {
        return a.space_ == b.space_ && a.values_ == b.values_;
    }
    friend bool operator!=(const ClassFunction& a, const ClassFunction& b) { return !(a == b); }

    friend ClassFunction operator+(const ClassFunction& a, const ClassFunction& b)
    {
        a.require_same(b);
        std::vector<std::int64_t> v(a.values_.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = a.values_[i] + b.values_[i];
        return ClassFunction(a.space_, std::move(v));
    }

    friend ClassFunction operator-(const ClassFunction& a, const ClassFunction& b)
    {
        a.require_same(b);
        std::vector<std::int64_t> v(a.values_.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = a.values_[i] - b.values_[i];
        return ClassFunction(a.space_, std::move(v));
    }

    friend ClassFunction operator*(long k, const ClassFunction& a)
    {
        std::vector<std::int64_t> v(a.values_.size());
        for (std::size_t i = 0; i < v.size(); ++i)
            v[i] = detail::mulmod(detail::symmetric(k, a.space_->prime) + a.space_->prime, a.values_[i],
                                  a.space_->prime);
        return ClassFunction(a.space_, std::move(v));
    }

    void require_same(const ClassFunction& other) const
    {
        if (space_ != other.space_)
            throw std::invalid_argument("ClassFunction: functions on different groups");
    }

private:
    std::shared_ptr<const CharacterSpace> space_;
    std::vector<std::int64_t> values_;
};

/// <a, b> = (1/|G|) sum_g a(g) b(g^-1), read back as an integer. Throws when
/// the residue is too large to be the inner product of the given degrees.
inline long inner_product(const ClassFunction& a, const ClassFunction& b)
{
    a.require_same(b);
    const auto& s = *a.space();
    const std::int64_t p = s.prime;
    std::int64_t sum = 0;
    for (int c = 0; c < s.class_count(); ++c)
        sum = (sum + detail::mulmod(s.classes.sizes[c],
                                    detail::mulmod(a.residue(c), b.residue(s.class_inverse[c]), p), p)) %
              p;
    sum = detail::mulmod(sum, detail::invmod(s.group.order(), p), p);
    long r = static_cast<long>(detail::symmetric(sum, p));
    long bound = std::max(1L, std::abs(a.degree())) * std::max(1L, std::abs(b.degree()));
    if (std::abs(r) > bound)
        throw std::logic_error("inner_product: result is not an integer of the expected size");
    return r;
}

/// The value field automorphism zeta -> zeta^k applied to a class function:
/// the result takes the value a(g^k) at g.
inline ClassFunction galois_conjugate(const ClassFunction& a, long k)
{
    const auto& s = *a.space();
    if (std::gcd(k, static_cast<long>(s.exponent)) != 1)
        throw std::invalid_argument("galois_conjugate: k must be prime to the exponent");
    std::vector<std::int64_t> v(s.class_count());
    for (int c = 0; c < s.class_count(); ++c)
        v[c] = a.residue(s.power_class(c, k));
    return ClassFunction(a.space(), std::move(v));
}

class CharacterTable;

struct Multiplicities {
    std::vector<long> counts;

    long operator[](std::size_t i) const { return counts[i]; }
    std::size_t size() const { return counts.size(); }
    friend bool operator==(const Multiplicities& a, const Multiplicities& b) { return a.counts == b.counts; }
};

class CharacterTable {
public:
    /// Irreducibles are ordered trivial first, then by degree, then by their
    /// residue vectors.
    static CharacterTable compute(const FiniteGroup& g)
    {
        if (g.order() > groups::kMaxOrder)
            throw UnsupportedInput("character_table: group order exceeds the cap");
        auto space = CharacterSpace::make(g);
        std::vector<std::vector<std::int64_t>> rows = g.is_abelian() ? abelian_rows(*space) : dixon_rows(*space);
        std::vector<ClassFunction> irr;
        for (auto& r : rows)
            irr.emplace_back(space, std::move(r));
        std::sort(irr.begin(), irr.end(), [](const ClassFunction& a, const ClassFunction& b) {
            bool at = is_trivial(a), bt = is_trivial(b);
            if (at != bt)
                return at;
            if (a.degree() != b.degree())
                return a.degree() < b.degree();
            return a.residues() < b.residues();
        });
        CharacterTable t(space, std::move(irr));
        t.verify();
        return t;
    }

    const std::shared_ptr<const CharacterSpace>& space() const { return space_; }
    const FiniteGroup& group() const { return space_->group; }
    const std::vector<ClassFunction>& irreducibles() const { return irr_; }
    const ClassFunction& operator[](std::size_t i) const { return irr_[i]; }
    std::size_t size() const { return irr_.size(); }

    std::vector<long> degrees() const
    {
        std::vector<long> d;
        for (const auto& x : irr_)
            d.push_back(x.degree());
        return d;
    }

    std::string label(std::size_t i) const
    {
        if (i == 0)
            return "1";
        return "X" + std::to_string(i) + "(" + std::to_string(irr_[i].degree()) + ")";
    }

    ClassFunction trivial() const { return irr_[0]; }

    /// Coefficients of a in the basis of irreducibles (possibly negative for
    /// virtual characters).
    std::vector<long> decompose(const ClassFunction& a) const
    {
        require_space(a);
        std::vector<long> m;
        for (const auto& x : irr_)
            m.push_back(inner_product(a, x));
        return m;
    }

    /// Multiplicities of a genuine character; throws on a virtual one.
    Multiplicities multiplicities(const ClassFunction& a) const
    {
        auto m = decompose(a);
        for (long x : m)
            if (x < 0)
                throw std::invalid_argument("multiplicities: not a character");
        if (combine(m) != a)
            throw std::logic_error("multiplicities: decomposition does not reconstruct the function");
        return Multiplicities{std::move(m)};
    }

    ClassFunction combine(const std::vector<long>& m) const
    {
        if (m.size() != irr_.size())
            throw std::invalid_argument("combine: wrong number of coefficients");
        ClassFunction s = ClassFunction::zero(space_);
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0)
                s = s + m[i] * irr_[i];
        return s;
    }

    void require_space(const ClassFunction& a) const
    {
        if (a.space() != space_)
            throw std::invalid_argument("CharacterTable: class function from another table");
    }

private:
    CharacterTable(std::shared_ptr<const CharacterSpace> s, std::vector<ClassFunction> irr)
        : space_(std::move(s)), irr_(std::move(irr))
    {
    }

    static bool is_trivial(const ClassFunction& a)
    {
        for (auto v : a.residues())
            if (v != 1)
                return false;
        return true;
    }

    // Characters of an abelian group are homomorphisms to the exponent-th
    // roots of unity. Extend the dual of H = <g_1, ..., g_j> one generator at
    // a time: if g^m is the first power of g inside H, each character of H
    // extends in m ways, by the m-th roots of its value at g^m.
    static std::vector<std::vector<std::int64_t>> abelian_rows(const CharacterSpace& s)
    {
        using detail::i64;
        const auto& g = s.group;
        const i64 p = s.prime;
        const int n = g.order();
        std::vector<i64> roots(s.exponent);
        for (int k = 0; k < s.exponent; ++k)
            roots[k] = detail::powmod(s.zeta, k, p);

        std::vector<int> h{g.identity()};
        std::vector<int> in_h(n, 0);
        in_h[g.identity()] = 1;
        // chars[c][x] for x in G, valid on elements of h.
        std::vector<std::vector<i64>> chars{std::vector<i64>(n, 0)};
        chars[0][g.identity()] = 1;
        for (int x = 0; x < n; ++x) {
            if (in_h[x])
                continue;
            int m = 1;
            int y = x;
            while (!in_h[y]) {
                y = g.mul(y, x);
                ++m;
            }
            // Elements of the new group: x^k h for k < m.
            std::vector<int> new_h;
            std::vector<std::pair<int, int>> decomposition;  // (k, h)
            int xk = g.identity();
            for (int k = 0; k < m; ++k) {
                for (int e : h) {
                    int z = g.mul(xk, e);
                    new_h.push_back(z);
                    decomposition.emplace_back(k, e);
                }
                xk = g.mul(xk, x);
            }
            std::vector<std::vector<i64>> next;
            for (const auto& chi : chars) {
                const i64 target = chi[y];
                for (i64 t : roots) {
                    if (detail::powmod(t, m, p) != target)
                        continue;
                    std::vector<i64> ext(n, 0);
                    for (std::size_t i = 0; i < new_h.size(); ++i) {
                        auto [k, e] = decomposition[i];
                        ext[new_h[i]] = detail::mulmod(detail::powmod(t, k, p), chi[e], p);
                    }
                    next.push_back(std::move(ext));
                }
            }
            chars = std::move(next);
            h = std::move(new_h);
            for (int z : h)
                in_h[z] = 1;
        }
        std::vector<std::vector<i64>> rows;
        for (const auto& chi : chars) {
            std::vector<i64> r(s.class_count());
            for (int c = 0; c < s.class_count(); ++c)
                r[c] = chi[s.classes.representatives[c]];
            rows.push_back(std::move(r));
        }
        return rows;
    }

    // Dixon: the vectors w_chi(i) = |C_i| chi(g_i) / chi(1) are the common
    // eigenvectors of the class multiplication matrices M_j[i][k] = c_jik.
    // A random combination of the M_j has distinct eigenvalues with high
    // probability, so its eigenvectors give the characters directly.
    static std::vector<std::vector<std::int64_t>> dixon_rows(const CharacterSpace& s)
    {
        using detail::i64;
        const auto& g = s.group;
        const auto& cl = s.classes;
        const i64 p = s.prime;
        const int k = s.class_count();
        const int n = g.order();

        // coeff[j][i][t] = #{(x, y) in C_j x C_i : x y = rep_t}
        std::vector<detail::Matrix> coeff(k, detail::Matrix(k, std::vector<i64>(k, 0)));
        for (int j = 0; j < k; ++j)
            for (int x : cl.members[j])
                for (int i = 0; i < k; ++i)
                    for (int y : cl.members[i]) {
                        int z = g.mul(x, y);
                        int t = cl.class_of[z];
                        if (z == cl.representatives[t])
                            ++coeff[j][i][t];
                    }

        std::mt19937_64 rng(0x5eed + static_cast<unsigned>(n));
        std::uniform_int_distribution<i64> dist(1, p - 1);
        for (int attempt = 0; attempt < 64; ++attempt) {
            detail::Matrix m(k, std::vector<i64>(k, 0));
            for (int j = 0; j < k; ++j) {
                i64 r = dist(rng);
                for (int i = 0; i < k; ++i)
                    for (int t = 0; t < k; ++t)
                        m[i][t] = (m[i][t] + detail::mulmod(r, coeff[j][i][t], p)) % p;
            }
            auto poly = detail::charpoly(m, p);
            std::vector<i64> eigen;
            for (i64 lambda = 0; lambda < p && static_cast<int>(eigen.size()) <= k; ++lambda) {
                i64 v = 0;
                for (std::size_t d = poly.size(); d-- > 0;)
                    v = (detail::mulmod(v, lambda, p) + poly[d]) % p;
                if (v == 0)
                    eigen.push_back(lambda);
            }
            if (static_cast<int>(eigen.size()) != k)
                continue;
            std::vector<std::vector<i64>> rows;
            bool ok = true;
            for (i64 lambda : eigen) {
                detail::Matrix a = m;
                for (int i = 0; i < k; ++i)
                    a[i][i] = (a[i][i] - lambda + p) % p;
                auto ker = detail::kernel(a, p);
                if (ker.size() != 1 || ker[0][0] == 0) {
                    ok = false;
                    break;
                }
                auto w = ker[0];
                i64 inv0 = detail::invmod(w[0], p);
                for (auto& x : w)
                    x = detail::mulmod(x, inv0, p);
                // chi(1)^2 = |G| / sum_i w_i w_i* / |C_i|
                i64 sum = 0;
                for (int i = 0; i < k; ++i)
                    sum = (sum + detail::mulmod(detail::mulmod(w[i], w[s.class_inverse[i]], p),
                                                detail::invmod(cl.sizes[i], p), p)) %
                          p;
                i64 d2 = detail::mulmod(n, detail::invmod(sum, p), p);
                i64 d = 0;
                for (i64 c = 1; c * c <= n; ++c)
                    if (c * c == d2)
                        d = c;
                if (d == 0) {
                    ok = false;
                    break;
                }
                std::vector<i64> row(k);
                for (int i = 0; i < k; ++i)
                    row[i] = detail::mulmod(detail::mulmod(d, w[i], p), detail::invmod(cl.sizes[i], p), p);
                rows.push_back(std::move(row));
            }
            if (ok)
                return rows;
        }
        throw std::logic_error("character_table: eigenvalues never separated");
    }

    void verify() const
    {
        const long n = group().order();
        long sum = 0;
        for (const auto& x : irr_)
            sum += x.degree() * x.degree();
        if (sum != n || static_cast<int>(irr_.size()) != space_->class_count())
            throw std::logic_error("character_table: degree check failed");
        for (std::size_t i = 0; i < irr_.size(); ++i)
            for (std::size_t j = 0; j <= i; ++j)
                if (inner_product(irr_[i], irr_[j]) != (i == j ? 1 : 0))
                    throw std::logic_error("character_table: rows are not orthonormal");
    }

    std::shared_ptr<const CharacterSpace> space_;
    std::vector<ClassFunction> irr_;
};

inline CharacterTable character_table(const FiniteGroup& g) { return CharacterTable::compute(g); }

/// Permutation character of G on the left cosets of h: the value at g is the
/// number of cosets x h fixed by g, i.e. of x with x^-1 g x in h, over |h|.
inline ClassFunction induced_trivial(const CharacterTable& t, const Subgroup& h)
{
    const auto& g = t.group();
    if (h.parent_order() != g.order())
        throw std::invalid_argument("induced_trivial: subgroup of another group");
    const auto& s = *t.space();
    std::vector<long> v(s.class_count());
    for (int c = 0; c < s.class_count(); ++c) {
        int rep = s.classes.representatives[c];
        long count = 0;
        for (int x = 0; x < g.order(); ++x)
            count += h.contains(g.mul(g.mul(g.inv(x), rep), x));
        v[c] = count / h.order();
    }
    return ClassFunction::from_integers(t.space(), v);
}

inline ClassFunction regular_character(const CharacterTable& t)
{
    return induced_trivial(t, groups::trivial_subgroup(t.group()));
}

/// Sum of deg(chi_i) chi_i over the irreducibles absent from chi_ell: the
/// part of the regular character prime to chi_ell.
inline ClassFunction prime_part_of_regular(const CharacterTable& t, const ClassFunction& chi_ell)
{
    auto m = t.multiplicities(chi_ell);
    std::vector<long> out(t.size(), 0);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (m[i] == 0)
            out[i] = t[i].degree();
    return t.combine(out);
}

/// Largest common sub-character: multiplicity-wise minimum over the complex
/// irreducibles.
inline ClassFunction meet(const CharacterTable& t, const ClassFunction& a, const ClassFunction& b)
{
    auto ma = t.multiplicities(a);
    auto mb = t.multiplicities(b);
    std::vector<long> out(t.size());
    for (std::size_t i = 0; i < t.size(); ++i)
        out[i] = std::min(ma[i], mb[i]);
    return t.combine(out);
}

/// All characters attached to one decomposition configuration.
struct NaiveNormData {
    ClassFunction chi_inf;
    ClassFunction chi_ell;
    ClassFunction chi_ell_bar;
    /// chi_inf meet chi_ell_bar
    ClassFunction meet_inf_ell_bar;
    ClassFunction chi_tilde_e;
    /// The same character obtained by deleting the constituents of chi_ell
    /// from chi_inf and adding back the trivial character.
    ClassFunction chi_tilde_e_by_deletion;
};

inline void require_decomposition_groups(const CharacterTable& t, const Subgroup& d_inf, const Subgroup& d_ell)
{
    const int n = t.group().order();
    if (d_inf.parent_order() != n || d_ell.parent_order() != n)
        throw std::invalid_argument("decomposition groups must be subgroups of G");
    if (d_inf.order() > 2)
        throw std::invalid_argument("the decomposition group at infinity has order 1 or 2");
}

inline NaiveNormData naive_norm_data(const CharacterTable& t, const Subgroup& d_inf, const Subgroup& d_ell)
{
    require_decomposition_groups(t, d_inf, d_ell);
    ClassFunction chi_inf = induced_trivial(t, d_inf);
    ClassFunction chi_ell = induced_trivial(t, d_ell);
    ClassFunction bar = prime_part_of_regular(t, chi_ell);
    ClassFunction m = meet(t, chi_inf, bar);
    ClassFunction formula = t.trivial() + m;

    auto mi = t.multiplicities(chi_inf);
    auto ml = t.multiplicities(chi_ell);
    std::vector<long> kept(t.size(), 0);
    for (std::size_t i = 0; i < t.size(); ++i)
        if (ml[i] == 0)
            kept[i] = mi[i];
    ClassFunction deletion = t.trivial() + t.combine(kept);
    if (formula != deletion)
        throw std::logic_error("naive norm character: the two computations disagree");
    return NaiveNormData{chi_inf, chi_ell, bar, m, formula, deletion};
}

inline ClassFunction naive_norm_character(const CharacterTable& t, const Subgroup& d_inf, const Subgroup& d_ell)
{
    return naive_norm_data(t, d_inf, d_ell).chi_tilde_e;
}

inline long naive_rank_galois(const CharacterTable& t, const Subgroup& d_inf, const Subgroup& d_ell)
{
    return naive_norm_character(t, d_inf, d_ell).degree();
}

/// Rank of the naive norms when K is a non-decomposed extension of a totally
/// ell-adic subfield k: (r_K + c_K) - (r_k + c_k - 1).
inline long cla_rank(long r_big, long c_big, long r_small, long c_small)
{
    if (r_big < 0 || c_big < 0 || r_small < 0 || c_small < 0 || r_small + c_small < 1)
        throw std::invalid_argument("cla_rank: signatures must be non-negative with r_k + c_k >= 1");
    return (r_big + c_big) - (r_small + c_small - 1);
}

/// Character of the ell-units: chi_inf + chi_ell - 1.
inline ClassFunction herbrand_character(const CharacterTable& t, const Subgroup& d_inf, const Subgroup& d_ell)
{
    require_decomposition_groups(t, d_inf, d_ell);
    return induced_trivial(t, d_inf) + induced_trivial(t, d_ell) - t.trivial();
}

/// True when chi_inf meet chi_ell is the trivial character.
inline bool gross_equality_criterion(const CharacterTable& t, const Subgroup& d_inf, const Subgroup& d_ell)
{
    require_decomposition_groups(t, d_inf, d_ell);
    return meet(t, induced_trivial(t, d_inf), induced_trivial(t, d_ell)) == t.trivial();
}

/// The equality criterion for the subfield fixed by the normal subgroup h,
/// whose decomposition data are the images in G/h.
inline bool subfield_heredity_check(const CharacterTable& t, const Subgroup& d_inf, const Subgroup& d_ell,
                                    const Subgroup& h)
{
    require_decomposition_groups(t, d_inf, d_ell);
    if (!groups::is_normal(t.group(), h))
        throw UnsupportedInput("subfield_heredity_check: only normal subgroups are supported");
    auto q = groups::quotient_map(t.group(), h);
    auto tq = character_table(q.group);
    return gross_equality_criterion(tq, q.image_of(d_inf), q.image_of(d_ell));
}

/// "1 + X2(1) + 2*X5(2)" style rendering, "0" for the zero character.
inline std::string render(const CharacterTable& t, const ClassFunction& a)
{
    auto m = t.decompose(a);
    std::ostringstream os;
    bool first = true;
    for (std::size_t i = 0; i < m.size(); ++i) {
        if (m[i] == 0)
            continue;
        long c = m[i];
        if (!first)
            os << (c < 0 ? " - " : " + ");
        else if (c < 0)
            os << "-";
        long ac = std::abs(c);
        if (ac != 1)
            os << ac << "*";
        os << t.label(i);
        first = false;
    }
    return first ? "0" : os.str();
}

}  // namespace lognorm::chars
