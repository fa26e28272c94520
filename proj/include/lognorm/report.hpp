#pragma once

// Reports combining the character formula, the kernel oracle and the
// equality verdict, plus the corpus of quadratic fields.

#include "lognorm/chars.hpp"
#include "lognorm/errors.hpp"
#include "lognorm/numfield.hpp"

#include <json.hpp>

#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

namespace lognorm::report {

using numfield::FieldSpec;
using padic::Integer;

enum class GrossKuzmin { proved_abelian, proved_single_ell_place, assumed };
enum class Verdict { holds, fails, conditional };
enum class ExtremeCase { none, totally_split, single_ell_place };

NLOHMANN_JSON_SERIALIZE_ENUM(GrossKuzmin, {{GrossKuzmin::proved_abelian, "proved_abelian"},
                                           {GrossKuzmin::proved_single_ell_place, "proved_single_ell_place"},
                                           {GrossKuzmin::assumed, "assumed"}})
NLOHMANN_JSON_SERIALIZE_ENUM(Verdict, {{Verdict::holds, "holds"},
                                       {Verdict::fails, "fails"},
                                       {Verdict::conditional, "conditional"}})
NLOHMANN_JSON_SERIALIZE_ENUM(ExtremeCase, {{ExtremeCase::none, "none"},
                                           {ExtremeCase::totally_split, "totally_split"},
                                           {ExtremeCase::single_ell_place, "single_ell_place"}})

struct OracleReport {
    std::optional<long> rank;
    bool ambiguous = false;
    long precision = 0;
    long generators = 0;
    std::optional<long> qell_rank;
    std::optional<std::string> reason;  // set when no rank was computed

    friend bool operator==(const OracleReport&, const OracleReport&) = default;
};

struct RankReport {
    std::string spec;
    long ell = 0;
    std::string group;
    int degree = 0;
    int r = 0;
    int c = 0;
    int l = 0;
    std::string chi_inf;
    std::string chi_ell;
    std::string chi_ell_bar;
    std::string chi_tilde_e;
    long tilde_e_formula = 0;
    std::optional<OracleReport> tilde_e_oracle;
    long herbrand_degree = 0;
    bool thm4_condition_ii = false;
    GrossKuzmin gross_kuzmin_assumed = GrossKuzmin::assumed;
    Verdict equality_verdict = Verdict::conditional;
    ExtremeCase extreme_case = ExtremeCase::none;

    friend bool operator==(const RankReport&, const RankReport&) = default;

    bool oracle_disagrees() const
    {
        return tilde_e_oracle && tilde_e_oracle->rank && !tilde_e_oracle->ambiguous &&
               *tilde_e_oracle->rank != tilde_e_formula;
    }
    bool oracle_unresolved() const { return tilde_e_oracle && tilde_e_oracle->rank && tilde_e_oracle->ambiguous; }
};

inline void to_json(nlohmann::json& j, const OracleReport& o)
{
    j = nlohmann::json{{"rank", nullptr}, {"ambiguous", o.ambiguous}, {"precision", o.precision},
                       {"generators", o.generators}};
    if (o.rank)
        j["rank"] = *o.rank;
    if (o.qell_rank)
        j["qell_rank"] = *o.qell_rank;
    if (o.reason)
        j["reason"] = *o.reason;
}

inline void from_json(const nlohmann::json& j, OracleReport& o)
{
    o.rank = j.at("rank").is_null() ? std::nullopt : std::optional<long>(j.at("rank").get<long>());
    o.ambiguous = j.at("ambiguous").get<bool>();
    o.precision = j.at("precision").get<long>();
    o.generators = j.at("generators").get<long>();
    o.qell_rank = j.contains("qell_rank") ? std::optional<long>(j.at("qell_rank").get<long>()) : std::nullopt;
    o.reason = j.contains("reason") ? std::optional<std::string>(j.at("reason").get<std::string>()) : std::nullopt;
}

inline void to_json(nlohmann::json& j, const RankReport& r)
{
    j = nlohmann::json{{"spec", r.spec},
                       {"ell", r.ell},
                       {"group", r.group},
                       {"degree", r.degree},
                       {"r", r.r},
                       {"c", r.c},
                       {"l", r.l},
                       {"chi_inf", r.chi_inf},
                       {"chi_ell", r.chi_ell},
                       {"chi_ell_bar", r.chi_ell_bar},
                       {"chi_tilde_E", r.chi_tilde_e},
                       {"tilde_e_formula", r.tilde_e_formula},
                       {"tilde_e_oracle", nullptr},
                       {"herbrand_degree", r.herbrand_degree},
                       {"thm4_condition_ii", r.thm4_condition_ii},
                       {"gross_kuzmin_assumed", r.gross_kuzmin_assumed},
                       {"equality_verdict", r.equality_verdict},
                       {"extreme_case", r.extreme_case}};
    if (r.tilde_e_oracle)
        j["tilde_e_oracle"] = *r.tilde_e_oracle;
}

inline void from_json(const nlohmann::json& j, RankReport& r)
{
    j.at("spec").get_to(r.spec);
    j.at("ell").get_to(r.ell);
    j.at("group").get_to(r.group);
    j.at("degree").get_to(r.degree);
    j.at("r").get_to(r.r);
    j.at("c").get_to(r.c);
    j.at("l").get_to(r.l);
    j.at("chi_inf").get_to(r.chi_inf);
    j.at("chi_ell").get_to(r.chi_ell);
    j.at("chi_ell_bar").get_to(r.chi_ell_bar);
    j.at("chi_tilde_E").get_to(r.chi_tilde_e);
    j.at("tilde_e_formula").get_to(r.tilde_e_formula);
    if (j.at("tilde_e_oracle").is_null())
        r.tilde_e_oracle.reset();
    else
        r.tilde_e_oracle = j.at("tilde_e_oracle").get<OracleReport>();
    j.at("herbrand_degree").get_to(r.herbrand_degree);
    j.at("thm4_condition_ii").get_to(r.thm4_condition_ii);
    j.at("gross_kuzmin_assumed").get_to(r.gross_kuzmin_assumed);
    j.at("equality_verdict").get_to(r.equality_verdict);
    j.at("extreme_case").get_to(r.extreme_case);
}

inline Verdict verdict_for(bool condition_ii, GrossKuzmin gk)
{
    if (!condition_ii)
        return Verdict::fails;
    return gk == GrossKuzmin::assumed ? Verdict::conditional : Verdict::holds;
}

inline ExtremeCase extreme_case_for(int degree, int l)
{
    if (l == degree)
        return ExtremeCase::totally_split;
    if (l == 1)
        return ExtremeCase::single_ell_place;
    return ExtremeCase::none;
}

/// Fields of a report that follow from the others, recomputed.
struct DerivedFields {
    long herbrand_degree;
    Verdict equality_verdict;
    ExtremeCase extreme_case;

    friend bool operator==(const DerivedFields&, const DerivedFields&) = default;
};

inline DerivedFields rederive(const RankReport& r)
{
    return {r.r + r.c + r.l - 1, verdict_for(r.thm4_condition_ii, r.gross_kuzmin_assumed),
            extreme_case_for(r.degree, r.l)};
}

/// Violated report invariants, empty when the report is consistent.
inline std::vector<std::string> validate(const RankReport& r)
{
    std::vector<std::string> bad;
    if (r.r + 2 * r.c != r.degree)
        bad.push_back("r + 2c differs from the degree");
    if (r.l < 1 || r.degree % r.l != 0)
        bad.push_back("l does not divide the degree");
    if (r.tilde_e_formula < 1 || r.tilde_e_formula > r.herbrand_degree)
        bad.push_back("tilde_e_formula outside [1, herbrand_degree]");
    if (r.equality_verdict == Verdict::holds &&
        (!r.thm4_condition_ii || r.gross_kuzmin_assumed == GrossKuzmin::assumed))
        bad.push_back("equality holds without condition (ii) and a proved Gross-Kuz'min");
    DerivedFields d = rederive(r);
    if (d.herbrand_degree != r.herbrand_degree)
        bad.push_back("herbrand_degree differs from r + c + l - 1");
    if (d.equality_verdict != r.equality_verdict)
        bad.push_back("equality_verdict does not follow from its inputs");
    if (d.extreme_case != r.extreme_case)
        bad.push_back("extreme_case does not match (degree, l)");
    if (r.extreme_case == ExtremeCase::totally_split && r.tilde_e_formula != 1)
        bad.push_back("totally split field with rank other than 1");
    if (r.extreme_case == ExtremeCase::single_ell_place && r.tilde_e_formula != r.r + r.c)
        bad.push_back("single ell-place field with rank other than r + c");
    return bad;
}

struct ReportOptions {
    bool oracle = false;
    long precision = numfield::kDefaultPrecision;
};

/// Oracle precision: LOGNORM_PRECISION if set, else the default.
inline long default_precision()
{
    if (const char* env = std::getenv("LOGNORM_PRECISION")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || v < 4 || v > 4096)
            throw ParseError(std::string("LOGNORM_PRECISION must be an integer in [4, 4096], got '") + env + "'");
        return v;
    }
    return numfield::kDefaultPrecision;
}

inline GrossKuzmin gross_kuzmin_status(const numfield::DecompositionData& dec)
{
    if (dec.group.is_abelian())
        return GrossKuzmin::proved_abelian;
    if (dec.l == 1)
        return GrossKuzmin::proved_single_ell_place;
    return GrossKuzmin::assumed;
}

inline RankReport rank_report(const FieldSpec& spec, const Integer& ell, const ReportOptions& options = {})
{
    auto dec = numfield::decomposition_data(spec, ell);
    auto table = chars::character_table(dec.group);
    auto data = chars::naive_norm_data(table, dec.d_inf, dec.d_ell);
    RankReport r;
    r.spec = numfield::to_string(spec);
    r.ell = ell.get_si();
    r.group = dec.group.name();
    r.degree = dec.degree();
    r.r = dec.r;
    r.c = dec.c;
    r.l = dec.l;
    r.chi_inf = chars::render(table, data.chi_inf);
    r.chi_ell = chars::render(table, data.chi_ell);
    r.chi_ell_bar = chars::render(table, data.chi_ell_bar);
    r.chi_tilde_e = chars::render(table, data.chi_tilde_e);
    r.tilde_e_formula = data.chi_tilde_e.degree();
    r.herbrand_degree = chars::herbrand_character(table, dec.d_inf, dec.d_ell).degree();
    r.thm4_condition_ii = chars::gross_equality_criterion(table, dec.d_inf, dec.d_ell);
    r.gross_kuzmin_assumed = gross_kuzmin_status(dec);
    r.equality_verdict = verdict_for(r.thm4_condition_ii, r.gross_kuzmin_assumed);
    r.extreme_case = extreme_case_for(r.degree, r.l);
    if (options.oracle) {
        OracleReport o;
        o.precision = options.precision;
        if (numfield::is_concrete(spec)) {
            auto res = numfield::naive_rank_oracle_with_retry(spec, ell, options.precision);
            o.rank = res.rank;
            o.ambiguous = res.ambiguous;
            o.precision = res.precision;
            o.generators = res.generators;
            o.qell_rank = res.qell_rank;
        } else {
            o.reason = "oracle needs explicit ell-units; available for Q, quadratic and biquadratic fields only";
        }
        r.tilde_e_oracle = o;
    }
    return r;
}

// ---- character-only report ---------------------------------------------------

inline nlohmann::json character_json(const chars::CharacterTable& t, const chars::ClassFunction& a)
{
    return {{"render", chars::render(t, a)}, {"multiplicities", t.multiplicities(a).counts}};
}

/// Irreducible labels, degrees and kernels, then the characters attached to
/// (G, D_inf, D_ell).
inline nlohmann::json character_report(const groups::FiniteGroup& g, const groups::Subgroup& d_inf,
                                       const groups::Subgroup& d_ell)
{
    auto t = chars::character_table(g);
    auto data = chars::naive_norm_data(t, d_inf, d_ell);
    nlohmann::json irr = nlohmann::json::array();
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::vector<std::string> kernel;
        for (int x = 0; x < g.order(); ++x)
            if (t[i].at_element(x) == t[i].residue(0))
                kernel.push_back(g.label(x));
        irr.push_back({{"label", t.label(i)}, {"degree", t[i].degree()}, {"kernel", kernel}});
    }
    auto labels = [&](const groups::Subgroup& h) {
        std::vector<std::string> out;
        for (int x : h.elements())
            out.push_back(g.label(x));
        return out;
    };
    return {{"group", g.name()},
            {"order", g.order()},
            {"D_inf", labels(d_inf)},
            {"D_ell", labels(d_ell)},
            {"irreducibles", irr},
            {"chi_inf", character_json(t, data.chi_inf)},
            {"chi_ell", character_json(t, data.chi_ell)},
            {"chi_ell_bar", character_json(t, data.chi_ell_bar)},
            {"meet", character_json(t, data.meet_inf_ell_bar)},
            {"chi_tilde_E", character_json(t, data.chi_tilde_e)},
            {"rank", data.chi_tilde_e.degree()}};
}

// ---- corpus -----------------------------------------------------------------

inline constexpr long kCorpusCap = quad::kRadicandCap;

struct CorpusEntry {
    FieldSpec spec;
    Integer ell;
};

/// Q, then squarefree d with 1 < |d| <= dmax ordered by |d| with the positive
/// radicand first, each against every listed ell; cyclotomic fields
/// cyc:3..cyc:cyc_max follow, skipping those ramified at ell.
inline std::vector<CorpusEntry> corpus_entries(long dmax, const std::vector<long>& ells, long cyc_max = 0)
{
    if (dmax < 0 || dmax > kCorpusCap)
        throw ParseError("--dmax must lie in [0, " + std::to_string(kCorpusCap) + "]");
    for (long ell : ells)
        if (!padic::is_prime(Integer(ell)))
            throw ParseError("ell = " + std::to_string(ell) + " is not prime");
    std::vector<CorpusEntry> out;
    for (long ell : ells)
        out.push_back({numfield::RationalSpec{}, ell});
    for (long a = 1; a <= dmax; ++a)
        for (long d : {a, -a}) {
            if (d == 1 || !quad::is_squarefree(Integer(d)))
                continue;
            for (long ell : ells)
                out.push_back({numfield::QuadraticSpec{d}, ell});
        }
    for (long n = 3; n <= cyc_max; ++n)
        for (long ell : ells)
            if (n % ell != 0)
                out.push_back({numfield::CyclotomicSpec{n}, ell});
    return out;
}

struct CorpusSummary {
    long fields = 0;
    long errors = 0;
    long oracle_checked = 0;
    long agreements = 0;
    long disagreements = 0;
    long unresolved = 0;
    long holds = 0;
    long fails = 0;
    long conditional = 0;
    long totally_split = 0;
    long single_ell_place = 0;

    void add(const RankReport& r)
    {
        ++fields;
        if (r.tilde_e_oracle && r.tilde_e_oracle->rank) {
            ++oracle_checked;
            if (r.oracle_unresolved())
                ++unresolved;
            else if (r.oracle_disagrees())
                ++disagreements;
            else
                ++agreements;
        }
        switch (r.equality_verdict) {
        case Verdict::holds:
            ++holds;
            break;
        case Verdict::fails:
            ++fails;
            break;
        case Verdict::conditional:
            ++conditional;
            break;
        }
        if (r.extreme_case == ExtremeCase::totally_split)
            ++totally_split;
        if (r.extreme_case == ExtremeCase::single_ell_place)
            ++single_ell_place;
    }

    bool clean() const { return errors == 0 && disagreements == 0 && unresolved == 0; }

    std::string table() const
    {
        std::string s;
        auto row = [&](const char* name, long v) { s += std::string(name) + "\t" + std::to_string(v) + "\n"; };
        row("fields", fields);
        row("errors", errors);
        row("oracle_checked", oracle_checked);
        row("agreements", agreements);
        row("disagreements", disagreements);
        row("unresolved_ambiguities", unresolved);
        row("equality_holds", holds);
        row("equality_fails", fails);
        row("equality_conditional", conditional);
        row("totally_split", totally_split);
        row("single_ell_place", single_ell_place);
        return s;
    }
};

}  // namespace lognorm::report
