#include "lognorm/report.hpp"

#include <gtest/gtest.h>

using namespace lognorm;
using namespace lognorm::report;

namespace {

const std::string kData = LOGNORM_DATA_DIR;

}  // namespace

TEST(RankReport, CliExamples)
{
    auto a = rank_report(numfield::QuadraticSpec{2}, 7);
    EXPECT_EQ(a.tilde_e_formula, 1);
    EXPECT_EQ(a.extreme_case, ExtremeCase::totally_split);
    EXPECT_FALSE(a.tilde_e_oracle);

    auto b = rank_report(numfield::QuadraticSpec{2}, 5, {true, 12});
    EXPECT_EQ(b.tilde_e_formula, 2);
    ASSERT_TRUE(b.tilde_e_oracle && b.tilde_e_oracle->rank);
    EXPECT_EQ(*b.tilde_e_oracle->rank, 2);
    EXPECT_EQ(b.equality_verdict, Verdict::holds);

    auto c = rank_report(numfield::CyclotomicSpec{5}, 2);
    EXPECT_EQ(c.l, 1);
    EXPECT_EQ(c.tilde_e_formula, c.r + c.c);
    EXPECT_EQ(c.tilde_e_formula, 2);
    EXPECT_EQ(c.gross_kuzmin_assumed, GrossKuzmin::proved_abelian);

    auto d = rank_report(numfield::CyclotomicSpec{5}, 2, {true, 12});
    ASSERT_TRUE(d.tilde_e_oracle);
    EXPECT_FALSE(d.tilde_e_oracle->rank);
    EXPECT_TRUE(d.tilde_e_oracle->reason);
}

TEST(RankReport, VerdictRules)
{
    EXPECT_EQ(verdict_for(false, GrossKuzmin::proved_abelian), Verdict::fails);
    EXPECT_EQ(verdict_for(false, GrossKuzmin::assumed), Verdict::fails);
    EXPECT_EQ(verdict_for(true, GrossKuzmin::assumed), Verdict::conditional);
    EXPECT_EQ(verdict_for(true, GrossKuzmin::proved_single_ell_place), Verdict::holds);
    EXPECT_EQ(extreme_case_for(1, 1), ExtremeCase::totally_split);
    EXPECT_EQ(extreme_case_for(4, 1), ExtremeCase::single_ell_place);
    EXPECT_EQ(extreme_case_for(4, 2), ExtremeCase::none);
}

TEST(RankReport, NonAbelianAssumption)
{
    auto s3 = numfield::parse_field_spec("abs:" + kData + "/s3_real.json");
    auto r = rank_report(s3, 3);
    EXPECT_EQ(r.gross_kuzmin_assumed, GrossKuzmin::assumed);
    EXPECT_EQ(r.l, 3);
    EXPECT_TRUE(validate(r).empty());
    EXPECT_THROW(numfield::parse_field_spec("abs:" + kData + "/non_galois.json"), UnsupportedInput);
}

TEST(RankReport, JsonRoundTripAndInvariants)
{
    for (const auto& e : corpus_entries(20, {2, 3, 5, 7, 11, 13}, 12)) {
        auto r = rank_report(e.spec, e.ell, {numfield::is_concrete(e.spec), 12});
        auto problems = validate(r);
        EXPECT_TRUE(problems.empty()) << r.spec << ": " << (problems.empty() ? "" : problems.front());
        nlohmann::json j = r;
        auto back = nlohmann::json::parse(j.dump()).get<RankReport>();
        EXPECT_EQ(back, r);
        DerivedFields d = rederive(back);
        EXPECT_EQ(d, (DerivedFields{r.herbrand_degree, r.equality_verdict, r.extreme_case}));
    }
}

TEST(RankReport, ValidatorCatchesTampering)
{
    auto r = rank_report(numfield::QuadraticSpec{-3}, 7);
    ASSERT_TRUE(validate(r).empty());
    auto bad = r;
    bad.equality_verdict = Verdict::holds;
    bad.thm4_condition_ii = false;
    EXPECT_FALSE(validate(bad).empty());
    bad = r;
    bad.tilde_e_formula = r.herbrand_degree + 1;
    EXPECT_FALSE(validate(bad).empty());
    bad = r;
    bad.herbrand_degree += 1;
    EXPECT_FALSE(validate(bad).empty());
    bad = r;
    bad.gross_kuzmin_assumed = GrossKuzmin::assumed;
    EXPECT_FALSE(validate(bad).empty());
}

TEST(Corpus, OrderingAndSize)
{
    auto e = corpus_entries(0, {2, 3});
    ASSERT_EQ(e.size(), 2u);
    EXPECT_TRUE(std::holds_alternative<numfield::RationalSpec>(e[0].spec));
    auto f = corpus_entries(10, {3});
    std::vector<std::string> specs;
    for (const auto& x : f)
        specs.push_back(numfield::to_string(x.spec));
    EXPECT_EQ(specs, (std::vector<std::string>{"q:1", "q:-1", "q:2", "q:-2", "q:3", "q:-3", "q:5", "q:-5", "q:6",
                                               "q:-6", "q:7", "q:-7", "q:10", "q:-10"}));
    EXPECT_THROW(corpus_entries(201, {3}), ParseError);
    EXPECT_THROW(corpus_entries(5, {4}), ParseError);
    auto g = corpus_entries(0, {5}, 10);
    for (const auto& x : g) {
        if (auto c = std::get_if<numfield::CyclotomicSpec>(&x.spec)) {
            EXPECT_NE(c->n % 5, 0);
        }
    }
}

TEST(Corpus, SummaryCounts)
{
    CorpusSummary s;
    for (const auto& e : corpus_entries(10, {3}))
        s.add(rank_report(e.spec, e.ell, {true, 12}));
    EXPECT_EQ(s.fields, 14);
    EXPECT_EQ(s.agreements, 14);
    EXPECT_TRUE(s.clean());
    EXPECT_EQ(s.holds + s.fails + s.conditional, s.fields);
}

TEST(CharacterReport, AbstractExamples)
{
    auto v4 = groups::load_abstract_group(kData + "/v4_cm.json");
    auto j = character_report(v4.group, v4.d_inf, v4.d_ell);
    EXPECT_EQ(j["chi_tilde_E"]["render"], "1 + X1(1)");
    // X1 is the character with kernel <sigma> = <3>.
    EXPECT_EQ(j["irreducibles"][1]["kernel"], (std::vector<std::string>{"1", "3"}));
    EXPECT_EQ(j["rank"], 2);

    auto whole = groups::load_abstract_group(kData + "/v4_dell_whole.json");
    auto k = character_report(whole.group, whole.d_inf, whole.d_ell);
    EXPECT_EQ(k["chi_tilde_E"]["multiplicities"], k["chi_inf"]["multiplicities"]);

    auto triv = groups::load_abstract_group(kData + "/trivial.json");
    auto t = character_report(triv.group, triv.d_inf, triv.d_ell);
    EXPECT_EQ(t["chi_tilde_E"]["render"], "1");
}
