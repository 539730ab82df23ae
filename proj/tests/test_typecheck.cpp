#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pstt/typecheck.hpp"

using namespace pstt;

namespace {

const ChipSpec& chip() { return test::chip0_from_file(); }

TypeError::Kind rejection(std::string_view ctx, std::string_view term, std::string_view type) {
    auto r = check(test::judgement(ctx, term, type), chip());
    if (r.ok()) {
        ADD_FAILURE() << "accepted: " << term;
        return TypeError::Kind::TypeMismatch;
    }
    return r.error->kind();
}

bool accepted(std::string_view ctx, std::string_view term, std::string_view type) {
    auto r = check(test::judgement(ctx, term, type), chip());
    if (!r.ok()) ADD_FAILURE() << term << ": " << r.error->what();
    return r.ok();
}

}  // namespace

TEST(Synthesize, VariableHasOffsetZero) {
    auto r = synthesize(var("x"), {{"x", qubit_type("q1")}}, chip());
    EXPECT_TRUE(type_equal(r.type, qubit_type("q1")));
    EXPECT_EQ(r.rigid("x"), 0);
    EXPECT_TRUE(r.slacks.empty());
}

TEST(Synthesize, GateShiftsByDuration) {
    auto r = synthesize(parse_term("H1(x)"), {{"x", qubit_type("q1")}}, chip());
    EXPECT_TRUE(type_equal(r.type, qubit_type("q1")));
    EXPECT_EQ(r.rigid("x"), -20);
}

TEST(Synthesize, DuplicateUse) {
    try {
        synthesize(pair(var("x"), var("x")), {{"x", qubit_type("q1")}}, chip());
        FAIL();
    } catch (const TypeError& e) {
        EXPECT_EQ(e.kind(), TypeError::Kind::DuplicateUse);
        EXPECT_EQ(e.path(), (Path{1}));
    }
}

TEST(Synthesize, SlackVariables) {
    auto r = synthesize(parse_term("let * = u in (v, w)"),
                        {{"u", unit_type()}, {"v", qubit_type("q2")}, {"w", unit_type()}}, chip());
    ASSERT_EQ(r.slacks.size(), 1u);
    EXPECT_EQ(r.slacks[0].vars, std::vector<std::string>{"u"});
    EXPECT_EQ(r.offsets.at("u").slacks, std::vector<int>{0});
    EXPECT_TRUE(r.offsets.at("v").slacks.empty());
    auto g = infer_context(r);
    ASSERT_EQ(g.size(), 3u);
    EXPECT_EQ(g[0].grade, Grade{0});
}

TEST(Check, TwoGatesInSequence) { EXPECT_TRUE(accepted("x:^-40 q1", "H1(H1(x))", "q1")); }

TEST(Check, BoxIntroduction) { EXPECT_TRUE(accepted("x:^30 q1", "box[30] x", "[30] q1")); }

TEST(Check, BoxGradeMismatch) {
    auto r = check(test::judgement("x:^0 q1", "box[30] x", "[30] q1"), chip());
    ASSERT_FALSE(r.ok());
    EXPECT_EQ(r.error->kind(), TypeError::Kind::GradeMismatch);
    EXPECT_EQ(r.error->expected(), "x:^30");
}

TEST(Check, UnitAxiom) { EXPECT_TRUE(accepted("", "*", "1")); }

TEST(Check, LetStarSlackIsFree) {
    for (int d : {-7, 0, 13}) {
        std::string ctx = "u:^" + std::to_string(d) + " 1, x:^0 q1";
        EXPECT_TRUE(accepted(ctx, "let * = u in x", "q1"));
    }
}

TEST(Check, LetStarSlackRecordedInDerivation) {
    auto r = check(test::judgement("u:^-9 1, x:^0 q1", "let * = u in x", "q1"), chip());
    ASSERT_TRUE(r.ok());
    EXPECT_EQ(r.derivation->param, Grade{-9});
    EXPECT_EQ(r.derivation->premises[0]->context[0].grade, Grade{0});
}

TEST(Check, LetPairAfterEntanglingGate) {
    EXPECT_TRUE(accepted("a:^-144 q1, b:^-144 q2", "let (x, y) = CX(a, b) in (delay[q1,4](H1(x)), H2(y))", "q1 * q2"));
}

TEST(Check, LetPairComponentsAtUnequalGrades) {
    EXPECT_EQ(rejection("a:^-140 q1, b:^-140 q2", "let (x, y) = CX(a, b) in (H1(x), H2(y))", "q1 * q2"),
              TypeError::Kind::GradeMismatch);
}

TEST(Check, LetPairConstraintFixesSlack) {
    EXPECT_TRUE(accepted("p:^0 1 * q1", "let (x, y) = p in let * = x in y", "q1"));
    EXPECT_EQ(rejection("p:^5 1 * q1", "let (x, y) = p in let * = x in y", "q1"), TypeError::Kind::GradeMismatch);
}

TEST(Check, LetBoxShiftsScrutinee) {
    EXPECT_TRUE(accepted("z:^-23 [3] q1", "let box[3] x = z in H1(x)", "q1"));
    EXPECT_TRUE(accepted("z:^0 [3] q1", "let box[3] x = z in box[3] x", "[3] q1"));
    EXPECT_EQ(rejection("z:^0 [4] q1", "let box[3] x = z in x", "q1"), TypeError::Kind::TypeMismatch);
}

TEST(Check, ErrorKinds) {
    using K = TypeError::Kind;
    EXPECT_EQ(rejection("", "x", "q1"), K::UnboundVariable);
    EXPECT_EQ(rejection("x:^0 q1, y:^0 q2", "x", "q1"), K::UnusedEntry);
    EXPECT_EQ(rejection("p:^0 q1 * q2", "let (x, y) = p in x", "q1"), K::UnusedEntry);
    EXPECT_EQ(rejection("x:^0 q1", "X9(x)", "q1"), K::UnknownGate);
    EXPECT_EQ(rejection("x:^0 q1", "CX(x)", "q1 * q2"), K::GateMismatch);
    EXPECT_EQ(rejection("x:^-24 q1", "H2(x)", "q2"), K::GateMismatch);
    EXPECT_EQ(rejection("x:^0 q1", "x", "q2"), K::TypeMismatch);
    EXPECT_EQ(rejection("x:^0 q1", "let * = x in *", "1"), K::TypeMismatch);
    EXPECT_EQ(rejection("x:^0 q9", "x", "q9"), K::TypeMismatch);
}

TEST(Check, ExchangeIsAdmissible) {
    EXPECT_TRUE(accepted("y:^-24 q2, x:^-20 q1", "(H1(x), H2(y))", "q1 * q2"));
}

TEST(Check, DerivationContextsAreLocal) {
    auto r = check(test::judgement("x:^-40 q1", "H1(H1(x))", "q1"), chip());
    ASSERT_TRUE(r.ok());
    const auto& inner = r.derivation->premises[0];
    EXPECT_EQ(inner->context[0].grade, Grade{-20});
    EXPECT_EQ(inner->premises[0]->context[0].grade, Grade{0});
    EXPECT_EQ(r.derivation->param, Grade{20});
}
