#pragma once

// Finite groups given by Cayley tables, with the subgroup, coset, conjugacy
// and quotient machinery needed for decomposition groups.

#include "lognorm/errors.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace lognorm::groups {

inline constexpr int kMaxOrder = 64;

using Mask = std::uint64_t;

class FiniteGroup {
public:
    /// Validates closure, identity, inverses and associativity.
    static FiniteGroup from_table(std::vector<std::vector<int>> table, std::vector<std::string> labels = {},
                                  std::string name = {})
    {
        const int n = static_cast<int>(table.size());
        if (n < 1)
            throw std::invalid_argument("FiniteGroup: empty table");
        if (n > kMaxOrder)
            throw UnsupportedInput("FiniteGroup: order " + std::to_string(n) + " exceeds the cap of " +
                                   std::to_string(kMaxOrder));
        for (const auto& row : table) {
            if (static_cast<int>(row.size()) != n)
                throw std::invalid_argument("FiniteGroup: table is not square");
            for (int x : row)
                if (x < 0 || x >= n)
                    throw std::invalid_argument("FiniteGroup: entry out of range");
        }
        FiniteGroup g;
        g.n_ = n;
        g.table_.resize(static_cast<std::size_t>(n) * n);
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
                g.table_[static_cast<std::size_t>(a) * n + b] = table[a][b];

        int e = -1;
        for (int a = 0; a < n && e < 0; ++a) {
            bool ok = true;
            for (int b = 0; b < n && ok; ++b)
                ok = g.mul(a, b) == b && g.mul(b, a) == b;
            if (ok)
                e = a;
        }
        if (e < 0)
            throw std::invalid_argument("FiniteGroup: no identity element");
        g.identity_ = e;
        g.inverse_.assign(n, -1);
        for (int a = 0; a < n; ++a) {
            for (int b = 0; b < n; ++b)
                if (g.mul(a, b) == e && g.mul(b, a) == e) {
                    g.inverse_[a] = b;
                    break;
                }
            if (g.inverse_[a] < 0)
                throw std::invalid_argument("FiniteGroup: element without inverse");
        }
        for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b) {
                int ab = g.mul(a, b);
                for (int c = 0; c < n; ++c)
                    if (g.mul(ab, c) != g.mul(a, g.mul(b, c)))
                        throw std::invalid_argument("FiniteGroup: table is not associative");
            }
        if (!labels.empty() && static_cast<int>(labels.size()) != n)
            throw std::invalid_argument("FiniteGroup: label count does not match order");
        g.labels_ = std::move(labels);
        g.name_ = std::move(name);
        return g;
    }

    int order() const { return n_; }
    int identity() const { return identity_; }
    int mul(int a, int b) const { return table_[static_cast<std::size_t>(a) * n_ + b]; }
    int inv(int a) const { return inverse_[a]; }
    int conj(int g, int x) const { return mul(mul(g, x), inverse_[g]); }

    int power(int g, long k) const
    {
        if (k < 0)
            return power(inv(g), -k);
        int r = identity_;
        for (long i = 0; i < k; ++i)
            r = mul(r, g);
        return r;
    }

    int element_order(int g) const
    {
        int k = 1;
        for (int x = g; x != identity_; x = mul(x, g))
            ++k;
        return k;
    }

    int exponent() const
    {
        long e = 1;
        for (int g = 0; g < n_; ++g)
            e = std::lcm(e, static_cast<long>(element_order(g)));
        return static_cast<int>(e);
    }

    bool is_abelian() const
    {
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < a; ++b)
                if (mul(a, b) != mul(b, a))
                    return false;
        return true;
    }

    const std::vector<std::string>& labels() const { return labels_; }
    std::string label(int g) const { return labels_.empty() ? std::to_string(g) : labels_[g]; }
    const std::string& name() const { return name_; }
    void set_name(std::string name) { name_ = std::move(name); }

    std::optional<int> find_label(const std::string& label) const
    {
        for (int g = 0; g < n_; ++g)
            if (this->label(g) == label)
                return g;
        return std::nullopt;
    }

    std::vector<std::vector<int>> table() const
    {
        std::vector<std::vector<int>> t(n_, std::vector<int>(n_));
        for (int a = 0; a < n_; ++a)
            for (int b = 0; b < n_; ++b)
                t[a][b] = mul(a, b);
        return t;
    }

    friend bool operator==(const FiniteGroup& x, const FiniteGroup& y)
    {
        return x.n_ == y.n_ && x.table_ == y.table_;
    }

private:
    FiniteGroup() = default;

    int n_ = 0;
    int identity_ = 0;
    std::vector<int> table_;
    std::vector<int> inverse_;
    std::vector<std::string> labels_;
    std::string name_;
};

/// Subgroup as a sorted element list; membership is also kept as a bitmask.
class Subgroup {
public:
    static Subgroup make(const FiniteGroup& g, std::vector<int> elements)
    {
        std::sort(elements.begin(), elements.end());
        elements.erase(std::unique(elements.begin(), elements.end()), elements.end());
        Mask m = 0;
        for (int x : elements) {
            if (x < 0 || x >= g.order())
                throw std::invalid_argument("Subgroup: element out of range");
            m |= Mask{1} << x;
        }
        if (!(m >> g.identity() & 1))
            throw std::invalid_argument("Subgroup: missing the identity");
        for (int a : elements) {
            if (!(m >> g.inv(a) & 1))
                throw std::invalid_argument("Subgroup: not closed under inverses");
            for (int b : elements)
                if (!(m >> g.mul(a, b) & 1))
                    throw std::invalid_argument("Subgroup: not closed under the product");
        }
        return Subgroup(std::move(elements), m, g.order());
    }

    static Subgroup from_mask(const FiniteGroup& g, Mask m)
    {
        std::vector<int> e;
        for (int x = 0; x < g.order(); ++x)
            if (m >> x & 1)
                e.push_back(x);
        return make(g, std::move(e));
    }

    int order() const { return static_cast<int>(elements_.size()); }
    int parent_order() const { return parent_order_; }
    int index() const { return parent_order_ / order(); }
    const std::vector<int>& elements() const { return elements_; }
    Mask mask() const { return mask_; }
    bool contains(int g) const { return mask_ >> g & 1; }
    bool is_subset_of(const Subgroup& h) const { return (mask_ & ~h.mask_) == 0; }

    friend bool operator==(const Subgroup& a, const Subgroup& b) { return a.mask_ == b.mask_; }
    friend bool operator<(const Subgroup& a, const Subgroup& b)
    {
        if (a.order() != b.order())
            return a.order() < b.order();
        return a.elements_ < b.elements_;
    }

private:
    Subgroup(std::vector<int> e, Mask m, int parent) : elements_(std::move(e)), mask_(m), parent_order_(parent) {}

    std::vector<int> elements_;
    Mask mask_ = 0;
    int parent_order_ = 0;
};

inline Mask closure_mask(const FiniteGroup& g, Mask generators)
{
    Mask m = Mask{1} << g.identity();
    std::vector<int> frontier{g.identity()};
    std::vector<int> gens;
    for (int x = 0; x < g.order(); ++x)
        if (generators >> x & 1)
            gens.push_back(x);
    while (!frontier.empty()) {
        int x = frontier.back();
        frontier.pop_back();
        for (int s : gens) {
            int y = g.mul(x, s);
            if (!(m >> y & 1)) {
                m |= Mask{1} << y;
                frontier.push_back(y);
            }
        }
    }
    return m;
}

inline Subgroup generated_subgroup(const FiniteGroup& g, const std::vector<int>& generators)
{
    Mask m = 0;
    for (int x : generators)
        m |= Mask{1} << x;
    return Subgroup::from_mask(g, closure_mask(g, m));
}

inline Subgroup trivial_subgroup(const FiniteGroup& g) { return generated_subgroup(g, {}); }

inline Subgroup whole_group(const FiniteGroup& g)
{
    std::vector<int> all(g.order());
    std::iota(all.begin(), all.end(), 0);
    return Subgroup::make(g, std::move(all));
}

struct ConjugacyClasses {
    std::vector<int> class_of;
    std::vector<int> sizes;
    std::vector<int> representatives;
    std::vector<std::vector<int>> members;

    int count() const { return static_cast<int>(sizes.size()); }
};

/// Classes are numbered by their smallest element, so the identity class is
/// first whenever the identity has index 0.
inline ConjugacyClasses conjugacy_classes(const FiniteGroup& g)
{
    ConjugacyClasses c;
    c.class_of.assign(g.order(), -1);
    auto add_class = [&](int x) {
        const int id = c.count();
        std::set<int> orbit;
        for (int y = 0; y < g.order(); ++y)
            orbit.insert(g.conj(y, x));
        for (int z : orbit)
            c.class_of[z] = id;
        c.sizes.push_back(static_cast<int>(orbit.size()));
        c.representatives.push_back(*orbit.begin());
        c.members.emplace_back(orbit.begin(), orbit.end());
    };
    add_class(g.identity());
    for (int x = 0; x < g.order(); ++x)
        if (c.class_of[x] < 0)
            add_class(x);
    return c;
}

inline Subgroup conjugate_subgroup(const FiniteGroup& g, const Subgroup& h, int gamma)
{
    std::vector<int> e;
    e.reserve(h.elements().size());
    for (int x : h.elements())
        e.push_back(g.conj(gamma, x));
    return Subgroup::make(g, std::move(e));
}

/// The conjugation orbit of h, sorted.
inline std::vector<Subgroup> conjugates_of_subgroup(const FiniteGroup& g, const Subgroup& h)
{
    std::set<Subgroup> orbit;
    for (int gamma = 0; gamma < g.order(); ++gamma)
        orbit.insert(conjugate_subgroup(g, h, gamma));
    return {orbit.begin(), orbit.end()};
}

inline bool is_normal(const FiniteGroup& g, const Subgroup& h)
{
    for (int gamma = 0; gamma < g.order(); ++gamma)
        for (int x : h.elements())
            if (!h.contains(g.conj(gamma, x)))
                return false;
    return true;
}

/// Left cosets gH, each as a sorted element list, ordered by first element.
inline std::vector<std::vector<int>> left_cosets(const FiniteGroup& g, const Subgroup& h)
{
    std::vector<int> coset_of(g.order(), -1);
    std::vector<std::vector<int>> cosets;
    for (int x = 0; x < g.order(); ++x) {
        if (coset_of[x] >= 0)
            continue;
        std::vector<int> c;
        for (int y : h.elements())
            c.push_back(g.mul(x, y));
        std::sort(c.begin(), c.end());
        for (int y : c)
            coset_of[y] = static_cast<int>(cosets.size());
        cosets.push_back(std::move(c));
    }
    return cosets;
}

struct Quotient {
    FiniteGroup group;
    /// image[g] is the coset of g, an element index of `group`.
    std::vector<int> image;

    Subgroup image_of(const Subgroup& h) const
    {
        std::vector<int> e;
        for (int x : h.elements())
            e.push_back(image[x]);
        return Subgroup::make(group, std::move(e));
    }
};

inline Quotient quotient_map(const FiniteGroup& g, const Subgroup& h)
{
    if (!is_normal(g, h))
        throw std::invalid_argument("quotient_map: subgroup is not normal");
    auto cosets = left_cosets(g, h);
    std::vector<int> image(g.order());
    for (std::size_t i = 0; i < cosets.size(); ++i)
        for (int x : cosets[i])
            image[x] = static_cast<int>(i);
    const int m = static_cast<int>(cosets.size());
    std::vector<std::vector<int>> table(m, std::vector<int>(m));
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
            table[i][j] = image[g.mul(cosets[i][0], cosets[j][0])];
    return Quotient{FiniteGroup::from_table(std::move(table)), std::move(image)};
}

/// Every subgroup, ordered by order and then by element list. Built by
/// joining cyclic subgroups until no new subgroup appears.
inline std::vector<Subgroup> all_subgroups(const FiniteGroup& g)
{
    std::set<Mask> found;
    std::vector<Mask> cyclic;
    for (int x = 0; x < g.order(); ++x) {
        Mask m = closure_mask(g, Mask{1} << x);
        if (found.insert(m).second)
            cyclic.push_back(m);
    }
    std::vector<Mask> frontier(found.begin(), found.end());
    while (!frontier.empty()) {
        std::vector<Mask> next;
        for (Mask a : frontier)
            for (Mask c : cyclic) {
                if ((c & ~a) == 0)
                    continue;
                Mask j = closure_mask(g, a | c);
                if (found.insert(j).second)
                    next.push_back(j);
            }
        frontier = std::move(next);
    }
    std::vector<Subgroup> out;
    for (Mask m : found)
        out.push_back(Subgroup::from_mask(g, m));
    std::sort(out.begin(), out.end());
    return out;
}

inline Subgroup center(const FiniteGroup& g)
{
    std::vector<int> z;
    for (int x = 0; x < g.order(); ++x) {
        bool central = true;
        for (int y = 0; y < g.order() && central; ++y)
            central = g.mul(x, y) == g.mul(y, x);
        if (central)
            z.push_back(x);
    }
    return Subgroup::make(g, std::move(z));
}

inline Subgroup derived_subgroup(const FiniteGroup& g)
{
    std::vector<int> comms;
    for (int x = 0; x < g.order(); ++x)
        for (int y = 0; y < g.order(); ++y)
            comms.push_back(g.mul(g.mul(x, y), g.mul(g.inv(x), g.inv(y))));
    return generated_subgroup(g, comms);
}

// ---- constructions -------------------------------------------------------

inline FiniteGroup cyclic_group(int n)
{
    if (n < 1)
        throw std::invalid_argument("cyclic_group: n must be positive");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            t[a][b] = (a + b) % n;
    return FiniteGroup::from_table(std::move(t), {}, "C" + std::to_string(n));
}

/// Elements (a, b) are numbered a * |H| + b.
inline FiniteGroup direct_product(const FiniteGroup& g, const FiniteGroup& h)
{
    const int m = h.order();
    const int n = g.order() * m;
    if (n > kMaxOrder)
        throw UnsupportedInput("direct_product: order exceeds the cap");
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            t[x][y] = g.mul(x / m, y / m) * m + h.mul(x % m, y % m);
    std::string name;
    if (!g.name().empty() && !h.name().empty())
        name = g.name() + "x" + h.name();
    return FiniteGroup::from_table(std::move(t), {}, name);
}

/// (Z/nZ)^x with elements labelled by their residues, in increasing order.
inline FiniteGroup unit_group_mod(int n)
{
    if (n < 1)
        throw std::invalid_argument("unit_group_mod: n must be positive");
    if (n <= 2)
        return FiniteGroup::from_table({{0}}, {"1"}, "(Z/" + std::to_string(n) + ")^x");
    std::vector<int> units;
    for (int a = 1; a < n; ++a)
        if (std::gcd(a, n) == 1)
            units.push_back(a);
    if (static_cast<int>(units.size()) > kMaxOrder)
        throw UnsupportedInput("unit_group_mod: order exceeds the cap");
    std::map<int, int> index;
    for (std::size_t i = 0; i < units.size(); ++i)
        index[units[i]] = static_cast<int>(i);
    const int k = static_cast<int>(units.size());
    std::vector<std::vector<int>> t(k, std::vector<int>(k));
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b)
            t[a][b] = index.at(static_cast<int>(static_cast<long>(units[a]) * units[b] % n));
    std::vector<std::string> labels;
    for (int u : units)
        labels.push_back(std::to_string(u));
    return FiniteGroup::from_table(std::move(t), std::move(labels), "(Z/" + std::to_string(n) + ")^x");
}

/// N semidirect C_m, where the generator of C_m acts by the automorphism
/// `phi` of N (a permutation of N's element indices). Elements (x, k) are
/// numbered k * |N| + x and multiply as (x, k)(y, l) = (x phi^k(y), k + l).
inline FiniteGroup semidirect_product(const FiniteGroup& n, int m, const std::vector<int>& phi, std::string name = {})
{
    const int a = n.order();
    if (static_cast<int>(phi.size()) != a)
        throw std::invalid_argument("semidirect_product: automorphism has the wrong size");
    for (int x = 0; x < a; ++x)
        for (int y = 0; y < a; ++y)
            if (phi[n.mul(x, y)] != n.mul(phi[x], phi[y]))
                throw std::invalid_argument("semidirect_product: map is not a homomorphism");
    std::vector<std::vector<int>> powers{std::vector<int>(a)};
    std::iota(powers[0].begin(), powers[0].end(), 0);
    for (int k = 1; k <= m; ++k) {
        std::vector<int> p(a);
        for (int x = 0; x < a; ++x)
            p[x] = phi[powers[k - 1][x]];
        powers.push_back(std::move(p));
    }
    if (powers[m] != powers[0])
        throw std::invalid_argument("semidirect_product: automorphism order does not divide m");
    const int total = a * m;
    if (total > kMaxOrder)
        throw UnsupportedInput("semidirect_product: order exceeds the cap");
    std::vector<std::vector<int>> t(total, std::vector<int>(total));
    for (int u = 0; u < total; ++u)
        for (int v = 0; v < total; ++v) {
            int x = u % a, k = u / a, y = v % a, l = v / a;
            t[u][v] = ((k + l) % m) * a + n.mul(x, powers[k][y]);
        }
    return FiniteGroup::from_table(std::move(t), {}, std::move(name));
}

/// Automorphism of a group given by images of the listed generators,
/// extended along words; throws when the images do not define one.
inline std::vector<int> automorphism_from_images(const FiniteGroup& g, const std::vector<int>& generators,
                                                 const std::vector<int>& images)
{
    std::vector<int> phi(g.order(), -1);
    phi[g.identity()] = g.identity();
    std::vector<int> frontier{g.identity()};
    while (!frontier.empty()) {
        int x = frontier.back();
        frontier.pop_back();
        for (std::size_t i = 0; i < generators.size(); ++i) {
            int y = g.mul(x, generators[i]);
            int fy = g.mul(phi[x], images[i]);
            if (phi[y] < 0) {
                phi[y] = fy;
                frontier.push_back(y);
            } else if (phi[y] != fy) {
                throw std::invalid_argument("automorphism_from_images: relations are not respected");
            }
        }
    }
    std::vector<int> sorted = phi;
    std::sort(sorted.begin(), sorted.end());
    for (int x = 0; x < g.order(); ++x)
        if (sorted[x] != x)
            throw std::invalid_argument("automorphism_from_images: not a bijection of the group");
    return phi;
}

/// Group generated by permutations of {0, ..., degree-1}; composition is
/// (p q)(i) = p(q(i)). The identity permutation gets index 0.
inline FiniteGroup permutation_group(int degree, const std::vector<std::vector<int>>& generators, std::string name = {})
{
    using Perm = std::vector<int>;
    Perm id(degree);
    std::iota(id.begin(), id.end(), 0);
    std::vector<Perm> elems{id};
    std::map<Perm, int> index{{id, 0}};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (const auto& s : generators) {
            Perm p(degree);
            for (int k = 0; k < degree; ++k)
                p[k] = elems[i][s[k]];
            if (!index.count(p)) {
                if (static_cast<int>(elems.size()) >= kMaxOrder)
                    throw UnsupportedInput("permutation_group: order exceeds the cap");
                index[p] = static_cast<int>(elems.size());
                elems.push_back(p);
            }
        }
    const int n = static_cast<int>(elems.size());
    std::vector<std::vector<int>> t(n, std::vector<int>(n));
    std::vector<std::string> labels;
    for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
            Perm p(degree);
            for (int k = 0; k < degree; ++k)
                p[k] = elems[a][elems[b][k]];
            t[a][b] = index.at(p);
        }
        std::string s = "[";
        for (int k = 0; k < degree; ++k)
            s += (k ? "," : "") + std::to_string(elems[a][k] + 1);
        labels.push_back(s + "]");
    }
    return FiniteGroup::from_table(std::move(t), std::move(labels), std::move(name));
}

inline FiniteGroup symmetric_group(int n)
{
    if (n < 1)
        throw std::invalid_argument("symmetric_group: n must be positive");
    if (n == 1)
        return FiniteGroup::from_table({{0}}, {"[1]"}, "S1");
    std::vector<int> swap(n), cycle(n);
    std::iota(swap.begin(), swap.end(), 0);
    std::swap(swap[0], swap[1]);
    for (int k = 0; k < n; ++k)
        cycle[k] = (k + 1) % n;
    return permutation_group(n, {swap, cycle}, "S" + std::to_string(n));
}

inline FiniteGroup alternating_group(int n)
{
    if (n < 3)
        return permutation_group(std::max(n, 1), {}, "A" + std::to_string(n));
    std::vector<std::vector<int>> gens;
    for (int k = 2; k < n; ++k) {
        std::vector<int> p(n);
        std::iota(p.begin(), p.end(), 0);
        p[0] = 1;
        p[1] = k;
        p[k] = 0;
        gens.push_back(p);
    }
    return permutation_group(n, gens, "A" + std::to_string(n));
}

/// Dihedral group of order 2n: elements r^k s^j numbered j * n + k.
inline FiniteGroup dihedral_group(int n)
{
    if (n < 1)
        throw std::invalid_argument("dihedral_group: n must be positive");
    const int total = 2 * n;
    std::vector<std::vector<int>> t(total, std::vector<int>(total));
    for (int u = 0; u < total; ++u)
        for (int v = 0; v < total; ++v) {
            int i = u % n, j = u / n, k = v % n, l = v / n;
            int rot = j ? (i - k + n) % n : (i + k) % n;
            t[u][v] = ((j + l) % 2) * n + rot;
        }
    return FiniteGroup::from_table(std::move(t), {}, "D" + std::to_string(n));
}

/// Dicyclic group of order 4n: <a, x | a^2n = 1, x^2 = a^n, x a x^-1 = a^-1>,
/// elements a^i x^j numbered j * 2n + i.
inline FiniteGroup dicyclic_group(int n)
{
    if (n < 1)
        throw std::invalid_argument("dicyclic_group: n must be positive");
    const int m = 2 * n;
    const int total = 2 * m;
    std::vector<std::vector<int>> t(total, std::vector<int>(total));
    for (int u = 0; u < total; ++u)
        for (int v = 0; v < total; ++v) {
            int i = u % m, j = u / m, k = v % m, l = v / m;
            if (j == 0) {
                t[u][v] = l * m + (i + k) % m;
            } else {
                int e = ((i - k) % m + m) % m;
                if (l == 1)
                    t[u][v] = (e + n) % m;
                else
                    t[u][v] = m + e;
            }
        }
    return FiniteGroup::from_table(std::move(t), {}, n == 2 ? "Q8" : "Dic" + std::to_string(n));
}

}  // namespace lognorm::groups
