#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pstt/equality.hpp"
#include "pstt/surface.hpp"

using namespace pstt;

namespace {

const ChipSpec& chip() { return test::chip0_from_file(); }

NormalForm nf(std::string_view ctx, std::string_view term, std::string_view type) {
    return normalize(test::judgement(ctx, term, type), chip());
}

::testing::AssertionResult normalizes_to(std::string_view ctx, std::string_view term, std::string_view type,
                                         std::string_view expected) {
    auto r = nf(ctx, term, type);
    if (r.exhausted) return ::testing::AssertionFailure() << "budget exhausted";
    if (!alpha_eq(r.term, parse_term(expected)))
        return ::testing::AssertionFailure() << print(r.term) << " is not " << expected;
    return ::testing::AssertionSuccess();
}

bool same_nf(std::string_view ctx, std::string_view s, std::string_view t, std::string_view type) {
    return alpha_eq(nf(ctx, s, type).term, nf(ctx, t, type).term);
}

RuleInstance at(RuleKind k, Direction d, Path p = {}) {
    RuleInstance r;
    r.kind = k;
    r.direction = d;
    r.path = std::move(p);
    return r;
}

RuleInstance cc(LetKind outer, Conversion c, Direction d, Path p = {}, int index = 0) {
    RuleInstance r = at(RuleKind::Commute, d, std::move(p));
    r.outer = outer;
    r.conversion = c;
    r.index = index;
    return r;
}

}  // namespace

TEST(RuleNames, ThirtyCommutingConversions) {
    std::vector<std::string> names;
    for (LetKind k : {LetKind::Star, LetKind::Pair, LetKind::Box})
        for (Conversion c : all_conversions()) names.push_back(cc(k, c, Direction::Forward).name());
    EXPECT_EQ(names.size(), 30u);
    EXPECT_EQ(names.front(), "cc-star-scrut-star");
    EXPECT_EQ(names.back(), "cc-box-swap-box");
    EXPECT_EQ(at(RuleKind::BetaPair, Direction::Forward).name(), "beta-pair");
}

TEST(ApplyRule, BetaUnit) {
    auto r = apply_rule(parse_term("let * = * in x"), at(RuleKind::BetaUnit, Direction::Forward));
    ASSERT_TRUE(r);
    EXPECT_TRUE(alpha_eq(*r, var("x")));
}

TEST(ApplyRule, BetaPairIsSimultaneous) {
    auto r = apply_rule(parse_term("let (x, y) = (y, x) in (x, y)"), at(RuleKind::BetaPair, Direction::Forward));
    ASSERT_TRUE(r);
    EXPECT_TRUE(alpha_eq(*r, parse_term("(y, x)")));
}

TEST(ApplyRule, BetaBoxNeedsMatchingGrade) {
    auto t = parse_term("let box[30] x = box[30] a in H1(x)");
    auto r = apply_rule(t, at(RuleKind::BetaBox, Direction::Forward));
    ASSERT_TRUE(r);
    EXPECT_TRUE(alpha_eq(*r, parse_term("H1(a)")));
    EXPECT_FALSE(apply_rule(parse_term("let box[30] x = box[20] a in H1(x)"), at(RuleKind::BetaBox, Direction::Forward)));
}

TEST(ApplyRule, EtaPairBothWays) {
    auto r = apply_rule(parse_term("let (x, y) = t in (x, y)"), at(RuleKind::EtaPair, Direction::Forward));
    ASSERT_TRUE(r);
    EXPECT_TRUE(alpha_eq(*r, var("t")));
    EXPECT_FALSE(apply_rule(parse_term("let (x, y) = t in (y, x)"), at(RuleKind::EtaPair, Direction::Forward)));
    auto back = apply_rule(var("t"), at(RuleKind::EtaPair, Direction::Backward));
    ASSERT_TRUE(back);
    EXPECT_TRUE(alpha_eq(*back, parse_term("let (x, y) = t in (x, y)")));
}

TEST(ApplyRule, EtaBoxExpansionAvoidsNames) {
    RuleInstance r = at(RuleKind::EtaBox, Direction::Backward);
    r.grade = Grade{5};
    auto out = apply_rule(var("z"), r, {"z"});
    ASSERT_TRUE(out);
    EXPECT_NE((*out)->x, "z");
    EXPECT_TRUE(alpha_eq(*out, parse_term("let box[5] w = z in box[5] w")));
}

TEST(ApplyRule, CommuteGateAndBack) {
    auto t = parse_term("let (x, y) = p in CX(x, H2(y))");
    EXPECT_FALSE(apply_rule(t, cc(LetKind::Pair, Conversion::Gate, Direction::Forward, {}, 0)));
    auto u = parse_term("let * = u in H1(x)");
    auto fwd = apply_rule(u, cc(LetKind::Star, Conversion::Gate, Direction::Forward, {}, 0));
    ASSERT_TRUE(fwd);
    EXPECT_TRUE(alpha_eq(*fwd, parse_term("H1(let * = u in x)")));
    auto back = apply_rule(*fwd, cc(LetKind::Star, Conversion::Gate, Direction::Backward, {}, 0));
    ASSERT_TRUE(back);
    EXPECT_TRUE(alpha_eq(*back, u));
}

TEST(ApplyRule, SwapRespectsDependencies) {
    auto dep = parse_term("let (x, y) = p in let * = x in y");
    EXPECT_FALSE(apply_rule(dep, cc(LetKind::Pair, Conversion::SwapStar, Direction::Forward)));
    auto indep = parse_term("let * = u in let (x, y) = p in (x, y)");
    auto r = apply_rule(indep, cc(LetKind::Star, Conversion::SwapPair, Direction::Forward));
    ASSERT_TRUE(r);
    EXPECT_TRUE(alpha_eq(*r, parse_term("let (x, y) = p in let * = u in (x, y)")));
}

TEST(ApplyRule, ScrutineeConversion) {
    auto t = parse_term("let * = u in let (x, y) = p in (x, y)");
    auto r = apply_rule(t, cc(LetKind::Star, Conversion::ScrutPair, Direction::Forward));
    ASSERT_TRUE(r);
    EXPECT_TRUE(alpha_eq(*r, parse_term("let (x, y) = (let * = u in p) in (x, y)")));
    auto back = apply_rule(*r, cc(LetKind::Star, Conversion::ScrutPair, Direction::Backward));
    ASSERT_TRUE(back);
    EXPECT_TRUE(alpha_eq(*back, t));
}

TEST(ApplyRule, BadPathIsRejected) {
    EXPECT_FALSE(apply_rule(var("x"), at(RuleKind::BetaUnit, Direction::Forward, {3})));
}

TEST(Normalize, BetaUnit) { EXPECT_TRUE(normalizes_to("x:^0 q1", "let * = * in x", "q1", "x")); }

TEST(Normalize, BetaPair) {
    EXPECT_TRUE(normalizes_to("a:^0 q1, b:^0 q2", "let (x, y) = (a, b) in (y, x)", "q2 * q1", "(b, a)"));
}

TEST(Normalize, EtaPair) {
    EXPECT_TRUE(normalizes_to("t:^0 q1 * q2", "let (x, y) = t in (x, y)", "q1 * q2", "t"));
}

TEST(Normalize, BetaBox) {
    EXPECT_TRUE(normalizes_to("a:^-20 q1", "let box[30] x = box[30] a in H1(x)", "q1", "H1(a)"));
}

TEST(Normalize, EtaUnit) { EXPECT_TRUE(normalizes_to("x:^0 1", "let * = x in *", "1", "x")); }

TEST(Normalize, UnitThroughPair) {
    EXPECT_TRUE(normalizes_to("p:^0 1 * q1", "let (x, y) = p in let * = x in (*, y)", "1 * q1", "p"));
}

TEST(Normalize, AlreadyNormalIsUntouched) {
    auto r = nf("a:^-120 q1, b:^-120 q2", "CX(a, b)", "q1 * q2");
    EXPECT_TRUE(alpha_eq(r.term, parse_term("CX(a, b)")));
}

TEST(Normalize, LetOrderDoesNotMatter) {
    EXPECT_TRUE(same_nf("p:^-20 q1 * q2, u:^0 1", "let (x, y) = p in let * = u in (H1(x), delay[q2,20](y))",
                        "let * = u in let (x, y) = p in (H1(x), delay[q2,20](y))", "q1 * q2"));
}

TEST(Normalize, GateArgumentLetsAreHoisted) {
    EXPECT_TRUE(same_nf("u:^0 1, a:^-120 q1, b:^-120 q2", "CX(let * = u in a, b)", "let * = u in CX(a, b)", "q1 * q2"));
    EXPECT_TRUE(same_nf("p:^-120 q1 * q2", "let (x, y) = p in CX(x, y)", "let (x, y) = p in CX(x, y)", "q1 * q2"));
}

TEST(Normalize, DistinctTermsStayDistinct) {
    EXPECT_FALSE(same_nf("x:^-40 q1", "H1(H1(x))", "H1(K1(x))", "q1"));
    EXPECT_FALSE(same_nf("x:^-40 q1", "K1(H1(x))", "H1(K1(x))", "q1"));
}

TEST(Normalize, BoxVariableRoundTrips) {
    EXPECT_TRUE(normalizes_to("z:^0 [3] q1", "let box[3] x = z in box[3] x", "[3] q1", "z"));
}

TEST(Normalize, IdempotentAndTypePreserving) {
    const char* cases[][3] = {
        {"p:^0 1 * q1", "let (x, y) = p in let * = x in (*, y)", "1 * q1"},
        {"a:^-144 q1, b:^-144 q2", "let (x, y) = CX(a, b) in (delay[q1,4](H1(x)), H2(y))", "q1 * q2"},
        {"p:^-20 q1 * q2, u:^0 1", "let * = u in let (x, y) = p in (H1(x), delay[q2,20](y))", "q1 * q2"},
        {"z:^-23 [3] q1", "let box[3] x = z in H1(x)", "q1"},
    };
    for (const auto& c : cases) {
        Judgement j = test::judgement(c[0], c[1], c[2]);
        std::size_t steps = 0;
        NormalizeOptions opts;
        opts.observer = [&](const RuleInstance& r, const TermPtr&, const TermPtr& after) {
            ++steps;
            EXPECT_TRUE(accepts(Judgement{j.context, after, j.type}, chip())) << r.describe() << " gave " << print(after);
        };
        auto first = normalize(j, chip(), opts);
        auto second = normalize(Judgement{j.context, first.term, j.type}, chip());
        EXPECT_TRUE(alpha_eq(first.term, second.term)) << print(first.term) << " vs " << print(second.term);
        EXPECT_EQ(first.trace.size(), steps);
    }
}

TEST(Normalize, BudgetExhaustion) {
    NormalizeOptions opts;
    opts.budget = 1;
    auto r = normalize(test::judgement("p:^0 1 * q1", "let (x, y) = p in let * = x in (*, y)", "1 * q1"), chip(), opts);
    EXPECT_TRUE(r.exhausted);
    EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Normalize, RejectsIllTyped) {
    EXPECT_THROW(nf("x:^0 q1", "H1(x)", "q1"), TypeError);
}
