#pragma once

// Concrete fields (Q, quadratic, biquadratic, cyclotomic) and abstract
// decomposition data; logarithmic valuations and the brute-force kernel
// oracle for the rank of the naive norm group.

#include "lognorm/errors.hpp"
#include "lognorm/groups.hpp"
#include "lognorm/groups_json.hpp"
#include "lognorm/padic.hpp"
#include "lognorm/padic_matrix.hpp"
#include "lognorm/quadratic.hpp"

#include <charconv>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace lognorm::numfield {

using groups::FiniteGroup;
using groups::Subgroup;
using padic::Integer;
using padic::LocalPlace;
using padic::LocalSplitting;
using padic::PadicNumber;
using padic::Rational;
using quad::QuadElement;

inline constexpr long kDefaultPrecision = 12;

// ---- field specs ---------------------------------------------------------

struct RationalSpec {};
struct QuadraticSpec {
    long d;
};
struct BiquadraticSpec {
    long d1, d2;
};
struct CyclotomicSpec {
    long n;
};
struct AbstractSpec {
    std::string path;
    groups::AbstractGroupData data;
};

using FieldSpec = std::variant<RationalSpec, QuadraticSpec, BiquadraticSpec, CyclotomicSpec, AbstractSpec>;

namespace detail {

inline long parse_long(const std::string& s, const std::string& whole)
{
    long v = 0;
    const char* first = s.data();
    const char* last = s.data() + s.size();
    if (!s.empty() && *first == '+')
        ++first;
    auto [p, ec] = std::from_chars(first, last, v);
    if (ec != std::errc{} || p != last || first == last)
        throw ParseError("bad integer '" + s + "' in field spec '" + whole + "'");
    return v;
}

inline void require_radicand(long d, const std::string& whole)
{
    if (d == 0 || d == 1 || !quad::is_squarefree(Integer(d)))
        throw ParseError("radicand " + std::to_string(d) + " in '" + whole + "' must be squarefree and not 0 or 1");
}

inline Integer squarefree_part(const Integer& n)
{
    Integer m = abs(n);
    Integer out = 1;
    for (Integer p = 2; p * p <= m; ++p) {
        int e = 0;
        while (m % p == 0) {
            m /= p;
            ++e;
        }
        if (e % 2 == 1)
            out *= p;
    }
    out *= m;
    return n < 0 ? Integer(-out) : out;
}

}  // namespace detail

/// Parses q:<int> (q:1 is Q), bq:<int>,<int>, cyc:<int> and abs:<path>.
inline FieldSpec parse_field_spec(const std::string& text)
{
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw ParseError("field spec '" + text + "' has no ':'");
    const std::string tag = text.substr(0, colon);
    const std::string rest = text.substr(colon + 1);
    if (tag == "q") {
        long d = detail::parse_long(rest, text);
        if (d == 1)
            return RationalSpec{};
        detail::require_radicand(d, text);
        return QuadraticSpec{d};
    }
    if (tag == "bq") {
        auto comma = rest.find(',');
        if (comma == std::string::npos)
            throw ParseError("biquadratic spec '" + text + "' needs two radicands");
        long d1 = detail::parse_long(rest.substr(0, comma), text);
        long d2 = detail::parse_long(rest.substr(comma + 1), text);
        detail::require_radicand(d1, text);
        detail::require_radicand(d2, text);
        if (d1 == d2)
            throw ParseError("biquadratic spec '" + text + "' repeats a radicand");
        return BiquadraticSpec{d1, d2};
    }
    if (tag == "cyc") {
        long n = detail::parse_long(rest, text);
        if (n < 3)
            throw ParseError("cyclotomic spec '" + text + "' needs n >= 3");
        if (n > 1000)
            throw UnsupportedInput("cyclotomic conductor " + std::to_string(n) + " is too large");
        return CyclotomicSpec{n};
    }
    if (tag == "abs") {
        if (rest.empty())
            throw ParseError("abstract spec needs a path");
        std::ifstream in(rest);
        if (!in)
            throw ParseError("cannot open group file '" + rest + "'");
        nlohmann::json j;
        try {
            in >> j;
        } catch (const nlohmann::json::parse_error& e) {
            throw ParseError("group file '" + rest + "': " + e.what());
        }
        if (j.is_object() && j.contains("galois") && j.at("galois") == false)
            throw UnsupportedInput("abstract data for a non-Galois field is not supported");
        return AbstractSpec{rest, groups::abstract_group_from_json(j)};
    }
    throw ParseError("unknown field spec kind '" + tag + "' in '" + text + "'");
}

inline std::string to_string(const FieldSpec& spec)
{
    struct Visitor {
        std::string operator()(const RationalSpec&) const { return "q:1"; }
        std::string operator()(const QuadraticSpec& s) const { return "q:" + std::to_string(s.d); }
        std::string operator()(const BiquadraticSpec& s) const
        {
            return "bq:" + std::to_string(s.d1) + "," + std::to_string(s.d2);
        }
        std::string operator()(const CyclotomicSpec& s) const { return "cyc:" + std::to_string(s.n); }
        std::string operator()(const AbstractSpec& s) const { return "abs:" + s.path; }
    };
    return std::visit(Visitor{}, spec);
}

/// Rational, quadratic and biquadratic specs: those the oracle can handle.
inline bool is_concrete(const FieldSpec& spec)
{
    return std::holds_alternative<RationalSpec>(spec) || std::holds_alternative<QuadraticSpec>(spec) ||
           std::holds_alternative<BiquadraticSpec>(spec);
}

// ---- decomposition data ----------------------------------------------------

struct DecompositionData {
    FiniteGroup group;
    Subgroup d_inf;
    Subgroup d_ell;
    std::optional<Subgroup> inertia;  // unknown for abstract data
    int r = 0;
    int c = 0;
    int l = 0;
    std::optional<int> e;
    std::optional<int> f;

    int degree() const { return group.order(); }
    bool is_real() const { return d_inf.order() == 1; }
    bool totally_split() const { return d_ell.order() == 1; }
};

/// A quadratic subfield Q(sqrt d) of a concrete field, with the subgroup of
/// G fixing it and the branch of the place below the base place above ell.
struct QuadraticLayer {
    Integer d;
    Subgroup fixer;
    LocalSplitting kind;
    int base_branch = 0;
};

namespace detail {

inline DecompositionData finish(FiniteGroup g, Subgroup d_inf, Subgroup d_ell, std::optional<Subgroup> inertia)
{
    DecompositionData out{std::move(g), std::move(d_inf), std::move(d_ell), std::move(inertia), 0, 0, 0, {}, {}};
    const int n = out.group.order();
    if (out.d_inf.order() == 1) {
        out.r = n;
        out.c = 0;
    } else {
        out.r = 0;
        out.c = n / 2;
    }
    out.l = n / out.d_ell.order();
    if (out.inertia) {
        out.e = out.inertia->order();
        out.f = out.d_ell.order() / out.inertia->order();
    }
    return out;
}

inline int v4_element(bool flip1, bool flip2) { return (flip1 ? 1 : 0) + (flip2 ? 2 : 0); }

inline FiniteGroup klein_four()
{
    auto g = groups::direct_product(groups::cyclic_group(2), groups::cyclic_group(2));
    g.set_name("V4");
    return g;
}

inline Integer third_radicand(long d1, long d2) { return squarefree_part(Integer(d1) * Integer(d2)); }

inline void require_prime_ell(const Integer& ell)
{
    if (!padic::is_prime(ell))
        throw ParseError("ell = " + ell.get_str() + " is not prime");
}

}  // namespace detail

/// Quadratic layers of a concrete field (empty for Q).
inline std::vector<QuadraticLayer> quadratic_layers(const FieldSpec& spec, const Integer& ell)
{
    detail::require_prime_ell(ell);
    if (std::holds_alternative<RationalSpec>(spec))
        return {};
    if (auto q = std::get_if<QuadraticSpec>(&spec)) {
        auto c2 = groups::cyclic_group(2);
        return {{Integer(q->d), groups::trivial_subgroup(c2), quad::splitting(Integer(q->d), ell), 0}};
    }
    if (auto b = std::get_if<BiquadraticSpec>(&spec)) {
        auto v4 = detail::klein_four();
        std::vector<QuadraticLayer> layers{
            {Integer(b->d1), groups::generated_subgroup(v4, {detail::v4_element(false, true)}), {}, 0},
            {Integer(b->d2), groups::generated_subgroup(v4, {detail::v4_element(true, false)}), {}, 0},
            {detail::third_radicand(b->d1, b->d2), groups::generated_subgroup(v4, {detail::v4_element(true, true)}),
             {}, 0},
        };
        for (auto& layer : layers)
            layer.kind = quad::splitting(layer.d, ell);
        bool all_split = true;
        for (const auto& layer : layers)
            all_split = all_split && layer.kind == LocalSplitting::split;
        if (all_split) {
            // Coherent base place: sqrt(d3) = sqrt(d1) sqrt(d2) / s.
            Integer s2 = Integer(b->d1) * Integer(b->d2) / layers[2].d;
            Integer s = quad::isqrt(s2);
            auto r1 = *padic::hensel_sqrt(layers[0].d, ell, 4);
            auto r2 = *padic::hensel_sqrt(layers[1].d, ell, 4);
            auto r3 = *padic::hensel_sqrt(layers[2].d, ell, 4);
            auto image = r1 * r2 * PadicNumber::from_integer(s, ell, 4).inverse();
            layers[2].base_branch = image.congruent(r3, 2) ? 0 : 1;
        }
        return layers;
    }
    throw UnsupportedInput("quadratic layers exist only for Q, quadratic and biquadratic fields");
}

inline DecompositionData decomposition_data(const FieldSpec& spec, const Integer& ell)
{
    detail::require_prime_ell(ell);
    if (std::holds_alternative<RationalSpec>(spec)) {
        auto g = groups::cyclic_group(1);
        auto t = groups::trivial_subgroup(g);
        return detail::finish(g, t, t, t);
    }
    if (auto q = std::get_if<QuadraticSpec>(&spec)) {
        auto g = groups::cyclic_group(2);
        g.set_name("C2");
        auto kind = quad::splitting(Integer(q->d), ell);
        auto whole = groups::whole_group(g);
        auto triv = groups::trivial_subgroup(g);
        return detail::finish(g, q->d < 0 ? whole : triv, kind == LocalSplitting::split ? triv : whole,
                              kind == LocalSplitting::ramified ? whole : triv);
    }
    if (auto b = std::get_if<BiquadraticSpec>(&spec)) {
        auto g = detail::klein_four();
        auto layers = quadratic_layers(spec, ell);
        groups::Mask d_ell = groups::whole_group(g).mask();
        groups::Mask inertia = d_ell;
        for (const auto& layer : layers) {
            if (layer.kind == LocalSplitting::split)
                d_ell &= layer.fixer.mask();
            if (layer.kind != LocalSplitting::ramified)
                inertia &= layer.fixer.mask();
        }
        Subgroup d_inf = groups::generated_subgroup(g, {detail::v4_element(b->d1 < 0, b->d2 < 0)});
        return detail::finish(g, d_inf, Subgroup::from_mask(g, d_ell), Subgroup::from_mask(g, inertia));
    }
    if (auto c = std::get_if<CyclotomicSpec>(&spec)) {
        Integer gcd;
        Integer n(c->n);
        mpz_gcd(gcd.get_mpz_t(), n.get_mpz_t(), ell.get_mpz_t());
        if (gcd != 1)
            throw UnsupportedInput("cyc:" + std::to_string(c->n) + " is ramified at ell = " + ell.get_str());
        auto g = groups::unit_group_mod(static_cast<int>(c->n));
        g.set_name("(Z/" + std::to_string(c->n) + ")^x");
        Integer ell_mod = padic::mod(ell, n);
        auto frob = g.find_label(ell_mod.get_str());
        auto minus_one = g.find_label(std::to_string(c->n - 1));
        if (!frob || !minus_one)
            throw std::logic_error("decomposition_data: residue labels missing");
        return detail::finish(g, groups::generated_subgroup(g, {*minus_one}), groups::generated_subgroup(g, {*frob}),
                              groups::trivial_subgroup(g));
    }
    const auto& a = std::get<AbstractSpec>(spec);
    if (a.data.d_inf.order() > 2)
        throw ParseError("abstract data: D_inf must have order 1 or 2");
    return detail::finish(a.data.group, a.data.d_inf, a.data.d_ell, std::nullopt);
}

// ---- units and ell-units ---------------------------------------------------

struct QuadUnitData {
    Integer d;
    int w = 2;
    std::optional<QuadElement> epsilon;
    long h = 1;
    LocalSplitting kind = LocalSplitting::inert;
    long h_prime = 1;
    std::vector<QuadElement> ell_generators;

    /// Generators of E'_K modulo torsion, up to finite index.
    std::vector<QuadElement> generators() const
    {
        std::vector<QuadElement> out;
        if (epsilon)
            out.push_back(*epsilon);
        out.insert(out.end(), ell_generators.begin(), ell_generators.end());
        return out;
    }
};

inline QuadUnitData quad_unit_data(const Integer& d, const Integer& ell)
{
    QuadUnitData out;
    out.d = d;
    out.w = quad::torsion_order(d);
    if (d > 0)
        out.epsilon = quad::fundamental_unit(d);
    out.h = quad::class_number(d);
    out.kind = quad::splitting(d, ell);
    auto pp = quad::principal_power_generator(d, ell);
    out.h_prime = pp.exponent;
    out.ell_generators.push_back(pp.generator);
    if (out.kind == LocalSplitting::split)
        out.ell_generators.push_back(pp.generator.conjugate());
    return out;
}

/// A generator of E'_K together with the quadratic layer it lives in
/// (nullopt for rational numbers).
struct LayeredElement {
    std::optional<int> layer;
    QuadElement x;
};

/// Generators of E'_K modulo torsion up to finite index, for Q, quadratic
/// and biquadratic fields. Biquadratic fields take the units of their real
/// quadratic subfields, ell itself and one principal-power generator per
/// split subfield.
inline std::vector<LayeredElement> ell_unit_generators(const FieldSpec& spec, const Integer& ell)
{
    auto layers = quadratic_layers(spec, ell);
    std::vector<LayeredElement> out;
    if (layers.empty())
        return {{std::nullopt, QuadElement::rational(1, Rational(ell))}};
    if (layers.size() == 1) {
        for (const auto& x : quad_unit_data(layers[0].d, ell).generators())
            out.push_back({x.b == 0 ? std::nullopt : std::optional<int>(0), x});
        return out;
    }
    for (int i = 0; i < static_cast<int>(layers.size()); ++i)
        if (layers[i].d > 0)
            out.push_back({i, quad::fundamental_unit(layers[i].d)});
    out.push_back({std::nullopt, QuadElement::rational(1, Rational(ell))});
    for (int i = 0; i < static_cast<int>(layers.size()); ++i)
        if (layers[i].kind == LocalSplitting::split)
            out.push_back({i, quad::principal_power_generator(layers[i].d, ell).generator});
    return out;
}

// ---- logarithmic valuations -----------------------------------------------

/// Representatives of the places above ell: one element of G per left coset
/// of D_ell.
inline std::vector<int> ell_place_representatives(const DecompositionData& dec)
{
    std::vector<int> reps;
    for (const auto& coset : groups::left_cosets(dec.group, dec.d_ell))
        reps.push_back(coset.front());
    return reps;
}

/// -Log_ell of the local norm, from the quadratic layer containing x down to
/// Q_ell, at the place above ell indexed by the coset representative g. The
/// place above ell in K multiplies this by [K_P : k_p], a factor common to a
/// whole column of the oracle matrix, so it is left out.
inline PadicNumber layer_log_valuation(const std::vector<QuadraticLayer>& layers, const LayeredElement& x, int g,
                                       const Integer& ell, long precision)
{
    if (x.x.is_zero())
        throw std::domain_error("log_valuation: zero element");
    if (!x.layer || x.x.b == 0)
        return -padic::iwasawa_log(x.x.a, ell, precision);
    const auto& layer = layers.at(static_cast<std::size_t>(*x.layer));
    LocalPlace place{layer.kind, layer.base_branch ^ (layer.fixer.contains(g) ? 0 : 1)};
    auto norm = padic::local_norm_quad(x.x.a, x.x.b, layer.d, place, ell, precision + padic::kSeriesGuardDigits);
    return -padic::iwasawa_log(norm, precision);
}

/// A place of Q or of a quadratic field above the prime p.
struct Place {
    Integer p;
    LocalSplitting kind = LocalSplitting::inert;
    int branch = 0;

    int residue_degree() const { return kind == LocalSplitting::inert ? 2 : 1; }
    int local_degree(const Integer& d) const { return d == 1 || kind == LocalSplitting::split ? 1 : 2; }
};

/// Places of Q(sqrt d) above p; d = 1 stands for Q itself.
inline std::vector<Place> places_above(const Integer& d, const Integer& p)
{
    if (d == 1)
        return {{p, LocalSplitting::split, 0}};
    auto kind = quad::splitting(d, p);
    if (kind == LocalSplitting::split)
        return {{p, kind, 0}, {p, kind, 1}};
    return {{p, kind, 0}};
}

/// Ordinary valuation at a place of Q(sqrt d) not above ell.
inline long valuation(const QuadElement& x, const Place& place)
{
    if (x.is_zero())
        throw std::domain_error("valuation: zero element");
    if (x.b == 0 || x.d == 1)
        return padic::val_ell(x.a, place.p) * (place.kind == LocalSplitting::ramified ? 2 : 1);
    long vn = padic::val_ell(x.norm(), place.p);
    switch (place.kind) {
    case LocalSplitting::inert:
        return vn / 2;
    case LocalSplitting::ramified:
        return vn;
    case LocalSplitting::split:
        break;
    }
    return padic::local_norm_quad(x.a, x.b, x.d, {LocalSplitting::split, place.branch}, place.p, 1).valuation();
}

/// The logarithmic valuation of x in Q(sqrt d) (d = 1 for Q): the ordinary
/// valuation away from ell, -Log_ell of the local norm above ell.
inline std::variant<long, PadicNumber> log_valuation(const QuadElement& x, const Place& place, const Integer& ell,
                                                     long precision)
{
    if (x.is_zero())
        throw std::domain_error("log_valuation: zero element");
    if (place.p != ell)
        return valuation(x, place);
    if (x.d == 1 || x.b == 0)
        return PadicNumber(-padic::iwasawa_log(x.a, ell, precision).times(place.local_degree(x.d)));
    auto norm = padic::local_norm_quad(x.a, x.b, x.d, {place.kind, place.branch}, ell,
                                       precision + padic::kSeriesGuardDigits);
    return PadicNumber(-padic::iwasawa_log(norm, precision));
}

namespace detail {

inline std::vector<Integer> prime_factors(Integer n)
{
    std::vector<Integer> out;
    n = abs(n);
    for (Integer p = 2; p * p <= n; ++p) {
        if (n % p != 0)
            continue;
        out.push_back(p);
        while (n % p == 0)
            n /= p;
    }
    if (n > 1)
        out.push_back(n);
    return out;
}

}  // namespace detail

/// Sum over places p not above ell of v_p(x) f_p Log(p), minus the sum over
/// places above ell of Log of the local norm. Vanishes for every x != 0.
/// Q and quadratic fields only (d = 1 stands for Q).
inline PadicNumber product_formula_residual(const QuadElement& x, const Integer& ell, long precision)
{
    if (x.is_zero())
        throw std::domain_error("product_formula_residual: zero element");
    padic::detail::require_prime(ell);
    std::vector<Integer> primes;
    auto add = [&](const Integer& n) {
        for (const auto& p : detail::prime_factors(n))
            if (p != ell && std::find(primes.begin(), primes.end(), p) == primes.end())
                primes.push_back(p);
    };
    Rational n = x.d == 1 ? x.a : x.norm();
    add(n.get_num());
    add(n.get_den());
    add(x.a.get_den());
    add(x.b.get_den());
    PadicNumber total = PadicNumber::zero(ell);
    for (const auto& p : primes) {
        long weighted = 0;
        for (const auto& place : places_above(x.d, p))
            weighted += valuation(x, place) * place.residue_degree();
        if (weighted != 0)
            total = total + padic::iwasawa_log(Rational(p), ell, precision).times(weighted);
    }
    for (const auto& place : places_above(x.d, ell)) {
        PadicNumber local =
            x.d == 1 || x.b == 0
                ? padic::iwasawa_log(x.a, ell, precision).times(place.local_degree(x.d))
                : padic::iwasawa_log(padic::local_norm_quad(x.a, x.b, x.d, {place.kind, place.branch}, ell,
                                                            precision + padic::kSeriesGuardDigits),
                                     precision);
        total = total - local;
    }
    return total.with_absolute_precision(std::min(total.absolute_precision(), precision));
}

// ---- the oracle -------------------------------------------------------------

struct OracleResult {
    long rank = 0;
    bool ambiguous = false;
    long precision = 0;
    long generators = 0;
    long qell_rank = 0;  // rank over Q_ell of the valuation matrix, for comparison
};

/// Matrix of -Log local norms: one row per place above ell, one column per
/// generator of E'_K, entries to absolute precision `precision`.
inline padic::PadicMatrix oracle_matrix(const FieldSpec& spec, const Integer& ell, long precision)
{
    auto dec = decomposition_data(spec, ell);
    auto layers = quadratic_layers(spec, ell);
    auto gens = ell_unit_generators(spec, ell);
    auto reps = ell_place_representatives(dec);
    std::vector<PadicNumber> entries;
    for (int g : reps)
        for (const auto& x : gens)
            entries.push_back(layer_log_valuation(layers, x, g, ell, precision));
    return padic::PadicMatrix(ell, reps.size(), gens.size(), std::move(entries));
}

/// Rank of the integer kernel of the valuation matrix: the rank of the
/// naive norm group. Logs are taken at 2N and the lattice is cut at N; the
/// same computation at 2N must give the same rank, otherwise the result is
/// flagged ambiguous.
inline OracleResult naive_rank_oracle(const FieldSpec& spec, const Integer& ell, long precision = kDefaultPrecision)
{
    if (!is_concrete(spec))
        throw UnsupportedInput("the oracle handles only Q, quadratic and biquadratic fields, not " + to_string(spec));
    if (precision < 4)
        throw std::invalid_argument("naive_rank_oracle: precision must be at least 4");
    auto fine = oracle_matrix(spec, ell, 4 * precision);
    auto m = padic::PadicMatrix(ell, fine.rows(), fine.cols(), [&] {
        std::vector<PadicNumber> e;
        for (std::size_t i = 0; i < fine.rows(); ++i)
            for (std::size_t j = 0; j < fine.cols(); ++j)
                e.push_back(fine.at(i, j).with_absolute_precision(
                    std::min(fine.at(i, j).absolute_precision(), 2 * precision)));
        return e;
    }());
    auto kernel = padic::integer_kernel_rank(m, precision);
    auto check = padic::integer_kernel_rank(fine, 2 * precision);
    auto qell = padic::padic_matrix_rank(m);
    OracleResult out;
    out.rank = kernel.rank;
    out.ambiguous = kernel.ambiguous || check.ambiguous || check.rank != kernel.rank;
    out.precision = precision;
    out.generators = static_cast<long>(m.cols());
    out.qell_rank = qell.rank;
    return out;
}

/// The oracle at N, then once more at 2N if the first run was ambiguous.
inline OracleResult naive_rank_oracle_with_retry(const FieldSpec& spec, const Integer& ell,
                                                 long precision = kDefaultPrecision)
{
    auto first = naive_rank_oracle(spec, ell, precision);
    if (!first.ambiguous)
        return first;
    return naive_rank_oracle(spec, ell, 2 * precision);
}

}  // namespace lognorm::numfield
