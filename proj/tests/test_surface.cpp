#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "pstt/surface.hpp"

using namespace pstt;

TEST(Parse, VariableAxiomDeclaration) {
    auto f = parse("schedule s (x:^0 q1) : q1 = x");
    ASSERT_EQ(f.declarations.size(), 1u);
    const auto& j = f.declarations[0].judgement;
    ASSERT_EQ(j.context.size(), 1u);
    EXPECT_EQ(j.context[0].name, "x");
    EXPECT_EQ(j.context[0].grade, Grade{0});
    EXPECT_TRUE(type_equal(j.type, qubit_type("q1")));
    EXPECT_EQ(j.term->kind, TermKind::Var);
}

TEST(Parse, UnitDeclaration) {
    auto f = parse("schedule s () : 1 = *");
    const auto& j = f.declarations[0].judgement;
    EXPECT_TRUE(j.context.empty());
    EXPECT_EQ(j.term->kind, TermKind::Star);
    EXPECT_EQ(j.type->kind, TypeKind::Unit);
}

TEST(Parse, UnboundVariableIsNotAParseError) {
    auto f = parse("schedule s () : [30] q1 = box[30] x");
    EXPECT_EQ(f.declarations[0].judgement.term->kind, TermKind::Box);
}

TEST(Parse, SeveralDeclarationsAndComments) {
    auto f = parse("# header\nschedule a () : 1 = *\n# between\nschedule b (x:^-20 q1) : q1 = H1(x)\n");
    ASSERT_EQ(f.declarations.size(), 2u);
    ASSERT_NE(f.find("b"), nullptr);
    EXPECT_EQ(f.find("b")->judgement.context[0].grade, Grade{-20});
}

TEST(Parse, DanglingLetExtendsRight) {
    auto t = parse_term("let * = u in (v, w)");
    EXPECT_EQ(t->kind, TermKind::LetStar);
    EXPECT_EQ(t->body()->kind, TermKind::Pair);
}

TEST(Parse, TypePrecedence) {
    auto a = parse_type("[5] q1 * q2 * 1");
    ASSERT_EQ(a->kind, TypeKind::Tensor);
    EXPECT_EQ(a->left->kind, TypeKind::Box);
    EXPECT_EQ(a->right->kind, TypeKind::Tensor);
}

TEST(Parse, DelayGateName) {
    auto t = parse_term("delay[q1, 30](x)");
    EXPECT_EQ(t->kind, TermKind::Gate);
    EXPECT_EQ(t->name, "delay[q1,30]");
}

TEST(Parse, ErrorsCarryPosition) {
    try {
        parse("schedule s () : 1 =\n  let * = in *");
        FAIL();
    } catch (const ParseError& e) {
        EXPECT_EQ(e.diagnostic().line, 2);
        EXPECT_EQ(e.diagnostic().column, 11);
    }
    EXPECT_THROW(parse("schedule a () : 1 = * schedule a () : 1 = *"), ParseError);
    EXPECT_THROW(parse_term("let (x, x) = y in x"), ParseError);
    EXPECT_THROW(parse_type("q1 *"), ParseError);
}

TEST(Print, BoxIntro) { EXPECT_EQ(print(box(Grade{30}, var("x"))), "box[30] x"); }

TEST(Print, TensorOfBox) {
    EXPECT_EQ(print(tensor_type(qubit_type("q1"), box_type(Grade{5}, unit_type()))), "q1 * [5] 1");
}

TEST(Print, ParenthesisesWhereNeeded) {
    auto a = tensor_type(tensor_type(qubit_type("q1"), qubit_type("q2")), unit_type());
    EXPECT_EQ(print(a), "(q1 * q2) * 1");
    EXPECT_EQ(print(box_type(Grade{-3}, tensor_type(qubit_type("q1"), unit_type()))), "[-3] (q1 * 1)");
    auto t = let_star(let_star(var("a"), var("b")), box(Grade{2}, let_star(var("c"), star())));
    EXPECT_EQ(print(t), "let * = (let * = a in b) in box[2] (let * = c in *)");
}

TEST(Print, RoundTripsHandWrittenTerms) {
    const char* terms[] = {
        "let (x, y) = CX(a, b) in (H1(x), H2(y))",
        "let box[-4] z = w in box[4] (z, *)",
        "let * = let * = u in v in (let (p, q) = r in (q, p), *)",
        "delay[q2,3](H2(y))",
    };
    for (const char* src : terms) {
        auto t = parse_term(src);
        EXPECT_TRUE(alpha_eq(parse_term(print(t)), t)) << src;
        EXPECT_EQ(print(parse_term(print(t))), print(t));
    }
}

TEST(CanonicalKey, AlphaInvariant) {
    auto a = parse_term("let (x, y) = z in (y, x)");
    auto b = parse_term("let (p, q) = z in (q, p)");
    auto c = parse_term("let (p, q) = z in (p, q)");
    EXPECT_EQ(canonical_key(a), canonical_key(b));
    EXPECT_NE(canonical_key(a), canonical_key(c));
}

TEST(Print, JudgementAndContext) {
    auto j = test::judgement("x:^-20 q1, u:^3 [2] 1", "let * = u in H1(x)", "q1");
    EXPECT_EQ(print(j), "x:^-20 q1, u:^3 [2] 1 |- let * = u in H1(x) : q1");
}
