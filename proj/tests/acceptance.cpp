// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all
// criteria pass.

#include "lognorm/group_catalog.hpp"
#include "lognorm/report.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

using namespace lognorm;
using numfield::FieldSpec;
using padic::Integer;
using padic::PadicNumber;
using padic::Rational;

namespace {

const std::vector<long> kEll = {2, 3, 5, 7, 11, 13};
constexpr long kDmax = 50;
constexpr long kCycMax = 25;
constexpr long kPrecision = 12;

struct Outcome {
    bool pass = true;
    std::ostringstream detail;
    std::vector<std::string> failures;

    void fail(const std::string& what)
    {
        pass = false;
        if (failures.size() < 5)
            failures.push_back(what);
    }
};

/// Q and quadratic fields up to kDmax against every ell, then cyclotomic
/// fields cyc:3 .. cyc:kCycMax prime to ell.
const std::vector<report::CorpusEntry>& corpus()
{
    static const auto entries = report::corpus_entries(kDmax, kEll, kCycMax);
    return entries;
}

/// Biquadratic fields checked alongside the corpus.
std::vector<report::CorpusEntry> biquadratic_entries()
{
    const std::vector<long> radicands = {-1, 2, -2, 3, -3, 5, -7, 13};
    std::vector<report::CorpusEntry> out;
    for (std::size_t i = 0; i < radicands.size(); ++i)
        for (std::size_t j = i + 1; j < radicands.size(); ++j)
            for (long ell : kEll)
                out.push_back({numfield::BiquadraticSpec{radicands[i], radicands[j]}, ell});
    return out;
}

std::string describe(const report::CorpusEntry& e)
{
    return numfield::to_string(e.spec) + " at " + e.ell.get_str();
}

/// Oracle reports are computed once per corpus entry and shared.
const report::RankReport& report_for(const report::CorpusEntry& e)
{
    static std::map<std::string, report::RankReport> cache;
    auto key = describe(e);
    auto it = cache.find(key);
    if (it == cache.end())
        it = cache.emplace(key, report::rank_report(e.spec, e.ell, {numfield::is_concrete(e.spec), kPrecision})).first;
    return it->second;
}

bool oracle_ok(const report::RankReport& r, long expected)
{
    return r.tilde_e_oracle && r.tilde_e_oracle->rank && !r.tilde_e_oracle->ambiguous &&
           *r.tilde_e_oracle->rank == expected;
}

void criterion_single_place(Outcome& o)
{
    long fields = 0, oracle_checked = 0;
    for (const auto& e : corpus()) {
        auto dec = numfield::decomposition_data(e.spec, e.ell);
        if (dec.l != 1)
            continue;
        ++fields;
        const auto& r = report_for(e);
        if (r.tilde_e_formula != dec.r + dec.c)
            o.fail(describe(e) + ": formula " + std::to_string(r.tilde_e_formula));
        if (numfield::is_concrete(e.spec)) {
            ++oracle_checked;
            if (!oracle_ok(r, dec.r + dec.c))
                o.fail(describe(e) + ": oracle disagrees or is ambiguous");
        }
    }
    o.detail << fields << " fields with one place above ell, " << oracle_checked << " oracle checks";
}

void criterion_totally_split(Outcome& o)
{
    long fields = 0, oracle_checked = 0;
    auto check = [&](const report::CorpusEntry& e) {
        auto dec = numfield::decomposition_data(e.spec, e.ell);
        if (!dec.totally_split())
            return;
        ++fields;
        const auto& r = report_for(e);
        if (r.tilde_e_formula != 1)
            o.fail(describe(e) + ": formula " + std::to_string(r.tilde_e_formula));
        if (numfield::is_concrete(e.spec)) {
            ++oracle_checked;
            if (!oracle_ok(r, 1))
                o.fail(describe(e) + ": oracle disagrees or is ambiguous");
        }
    };
    for (const auto& e : corpus())
        check(e);
    for (const auto& e : biquadratic_entries())
        check(e);
    o.detail << fields << " totally split fields, " << oracle_checked << " oracle checks";
}

bool two_paths_agree(const chars::CharacterTable& t, const groups::Subgroup& d_inf, const groups::Subgroup& d_ell)
{
    try {
        auto data = chars::naive_norm_data(t, d_inf, d_ell);
        return data.chi_tilde_e == data.chi_tilde_e_by_deletion;
    } catch (const std::logic_error&) {
        return false;
    }
}

void criterion_two_paths(Outcome& o)
{
    long triples = 0;
    for (const auto& e : corpus()) {
        auto dec = numfield::decomposition_data(e.spec, e.ell);
        auto t = chars::character_table(dec.group);
        ++triples;
        if (!two_paths_agree(t, dec.d_inf, dec.d_ell))
            o.fail(describe(e));
    }
    long configurations = 0;
    for (const auto& g : groups::groups_up_to_order(16)) {
        auto t = chars::character_table(g);
        auto subs = groups::all_subgroups(g);
        for (const auto& d_inf : subs) {
            if (d_inf.order() > 2)
                continue;
            for (const auto& d_ell : subs) {
                ++configurations;
                if (!two_paths_agree(t, d_inf, d_ell))
                    o.fail(g.name());
            }
        }
    }
    o.detail << triples << " corpus triples, " << configurations << " abstract configurations";
}

void criterion_cla(Outcome& o)
{
    auto v4 = groups::unit_group_mod(8);
    auto sigma = groups::generated_subgroup(v4, {*v4.find_label("3")});
    auto tau = groups::generated_subgroup(v4, {*v4.find_label("5")});
    auto tv4 = chars::character_table(v4);
    long cm = chars::naive_rank_galois(tv4, sigma, tau);
    long cla = chars::cla_rank(0, 2, 0, 1);
    if (cm != 2 || cla != 2)
        o.fail("quartic CM case: formula " + std::to_string(cm) + ", closed form " + std::to_string(cla));

    long configurations = 0;
    for (const auto& g : {groups::direct_product(groups::cyclic_group(2), groups::cyclic_group(2)),
                          groups::cyclic_group(4)}) {
        auto t = chars::character_table(g);
        auto subs = groups::all_subgroups(g);
        for (const auto& d_inf : subs) {
            if (d_inf.order() > 2)
                continue;
            for (const auto& d_ell : subs) {
                // The hypotheses hold with k the fixed field of D_ell, which
                // is Galois here; k is real iff D_inf lies in D_ell.
                if (!groups::is_normal(g, d_ell))
                    continue;
                ++configurations;
                const long n = g.order();
                const long r_big = d_inf.order() == 1 ? n : 0;
                const long c_big = d_inf.order() == 1 ? 0 : n / 2;
                const long k_degree = n / d_ell.order();
                const bool k_real = d_inf.is_subset_of(d_ell);
                const long r_small = k_real ? k_degree : 0;
                const long c_small = k_real ? 0 : k_degree / 2;
                long formula = chars::naive_rank_galois(t, d_inf, d_ell);
                if (formula != chars::cla_rank(r_big, c_big, r_small, c_small))
                    o.fail(g.name() + " |D_inf| = " + std::to_string(d_inf.order()) +
                           ", |D_ell| = " + std::to_string(d_ell.order()));
            }
        }
    }
    o.detail << "quartic CM rank " << cm << ", " << configurations << " V4/C4 configurations";
}

void criterion_real_equality(Outcome& o)
{
    long fields = 0, single = 0;
    for (const auto& e : corpus()) {
        auto dec = numfield::decomposition_data(e.spec, e.ell);
        if (!dec.is_real())
            continue;
        ++fields;
        auto t = chars::character_table(dec.group);
        bool criterion = chars::gross_equality_criterion(t, dec.d_inf, dec.d_ell);
        single += dec.l == 1;
        if (criterion != (dec.l == 1))
            o.fail(describe(e));
    }
    for (const auto& e : biquadratic_entries()) {
        auto dec = numfield::decomposition_data(e.spec, e.ell);
        if (!dec.is_real())
            continue;
        ++fields;
        auto t = chars::character_table(dec.group);
        single += dec.l == 1;
        if (chars::gross_equality_criterion(t, dec.d_inf, dec.d_ell) != (dec.l == 1))
            o.fail(describe(e));
    }
    o.detail << fields << " real fields, " << single << " with one place above ell";
}

void criterion_oracle(Outcome& o)
{
    long checked = 0, retried = 0;
    auto check = [&](const report::CorpusEntry& e) {
        if (!numfield::is_concrete(e.spec))
            return;
        const auto& r = report_for(e);
        ++checked;
        if (r.tilde_e_oracle && r.tilde_e_oracle->precision > kPrecision)
            ++retried;
        if (!oracle_ok(r, r.tilde_e_formula))
            o.fail(describe(e) + ": formula " + std::to_string(r.tilde_e_formula) + ", oracle " +
                   (r.tilde_e_oracle && r.tilde_e_oracle->rank ? std::to_string(*r.tilde_e_oracle->rank) : "none") +
                   (r.oracle_unresolved() ? " (ambiguous)" : ""));
    };
    for (const auto& e : corpus())
        check(e);
    for (const auto& e : biquadratic_entries())
        check(e);
    o.detail << checked << " fields at N = " << kPrecision << ", " << retried << " needed the doubled precision";
}

void criterion_product_formula(Outcome& o)
{
    std::mt19937_64 rng(0x5eed);
    std::uniform_int_distribution<long> coef(-99, 99);
    std::uniform_int_distribution<long> den(1, 30);
    long elements = 0;
    for (const auto& e : corpus()) {
        Integer d;
        if (std::holds_alternative<numfield::RationalSpec>(e.spec))
            d = 1;
        else if (auto q = std::get_if<numfield::QuadraticSpec>(&e.spec))
            d = q->d;
        else
            continue;
        int done = 0;
        while (done < 200) {
            Rational a(coef(rng), den(rng)), b(d == 1 ? 0 : coef(rng), den(rng));
            a.canonicalize();
            b.canonicalize();
            quad::QuadElement x{d, a, b};
            if (x.is_zero())
                continue;
            auto res = numfield::product_formula_residual(x, e.ell, 10);
            if (!res.is_zero() || res.absolute_precision() < 8)
                o.fail(describe(e) + ": " + x.to_string());
            ++done;
            ++elements;
        }
    }
    o.detail << elements << " elements, residual 0 mod ell^8";
}

void criterion_padic(Outcome& o)
{
    std::mt19937_64 rng(0xada);
    std::uniform_int_distribution<long> num(-100000, 100000);
    std::uniform_int_distribution<long> den(1, 100000);
    constexpr long n = 20;
    long pairs = 0;
    for (long ell_value : kEll) {
        Integer ell(ell_value);
        int done = 0;
        while (done < 1000) {
            Rational x(num(rng), den(rng)), y(num(rng), den(rng));
            x.canonicalize();
            y.canonicalize();
            if (x == 0 || y == 0)
                continue;
            auto lhs = padic::iwasawa_log(Rational(x * y), ell, n);
            auto rhs = padic::iwasawa_log(x, ell, n) + padic::iwasawa_log(y, ell, n);
            if (!lhs.congruent(rhs, n))
                o.fail("homomorphism at " + ell.get_str());
            auto finer = padic::iwasawa_log(x, ell, n + 7);
            if (!finer.congruent(padic::iwasawa_log(x, ell, n), n))
                o.fail("precision monotonicity at " + ell.get_str());
            ++done;
            ++pairs;
        }
        if (!padic::iwasawa_log(Rational(ell), ell, n).is_zero())
            o.fail("Log(ell) at " + ell.get_str());
        if (!padic::iwasawa_log(Rational(-1), ell, n).is_zero())
            o.fail("Log(-1) at " + ell.get_str());
        for (long a = 1; a < ell_value; ++a) {
            auto zeta = padic::teichmuller(PadicNumber::from_integer(a, ell, n + 2), n + 2);
            auto log = padic::iwasawa_log(zeta, n);
            if (!log.is_zero() || log.absolute_precision() < n)
                o.fail("Log of a root of unity at " + ell.get_str());
        }
    }
    o.detail << pairs << " random pairs, exact congruence mod ell^" << n;
}

void criterion_character_tables(Outcome& o)
{
    auto list = groups::groups_up_to_order(16);
    long groups_checked = 0;
    for (const auto& g : list) {
        ++groups_checked;
        auto t = chars::character_table(g);
        long sum = 0;
        for (long d : t.degrees())
            sum += d * d;
        if (sum != g.order())
            o.fail(g.name() + ": sum of squared degrees");
        for (std::size_t i = 0; i < t.size(); ++i)
            for (std::size_t j = 0; j < t.size(); ++j)
                if (chars::inner_product(t[i], t[j]) != (i == j ? 1 : 0))
                    o.fail(g.name() + ": orthogonality");
    }
    std::mt19937_64 rng(0xc0de);
    int triples = 0;
    while (triples < 100) {
        const auto& g = list[rng() % list.size()];
        auto subs = groups::all_subgroups(g);
        const auto& h = subs[rng() % subs.size()];
        int gamma = static_cast<int>(rng() % static_cast<unsigned long>(g.order()));
        auto t = chars::character_table(g);
        if (chars::induced_trivial(t, h) != chars::induced_trivial(t, groups::conjugate_subgroup(g, h, gamma)))
            o.fail(g.name() + ": induced character moved under conjugation");
        ++triples;
    }
    o.detail << groups_checked << " groups of order <= 16 (S3, D4, Q8, A4 among them), " << triples
             << " conjugation triples";
}

}  // namespace

int main()
{
    const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria = {
        {"single place above ell gives rank r + c", criterion_single_place},
        {"totally split fields have rank 1", criterion_totally_split},
        {"meet and deletion computations agree", criterion_two_paths},
        {"closed form for non-decomposed extensions of a totally ell-adic field", criterion_cla},
        {"real fields: equality criterion iff l = 1", criterion_real_equality},
        {"kernel oracle matches the character formula", criterion_oracle},
        {"product formula residual vanishes", criterion_product_formula},
        {"Iwasawa logarithm suite", criterion_padic},
        {"character table suite", criterion_character_tables},
    };
    bool all = true;
    int index = 1;
    for (const auto& [name, run] : criteria) {
        Outcome o;
        auto start = std::chrono::steady_clock::now();
        try {
            run(o);
        } catch (const std::exception& e) {
            o.fail(std::string("exception: ") + e.what());
        }
        double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        all = all && o.pass;
        std::printf("%s %d %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", index, name.c_str(), o.detail.str().c_str(),
                    seconds);
        for (const auto& f : o.failures)
            std::printf("    %s\n", f.c_str());
        ++index;
    }
    std::fflush(stdout);
    return all ? 0 : 1;
}
