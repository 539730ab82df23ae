#include <gtest/gtest.h>

#include <algorithm>
#include <functional>

#include "fixtures.hpp"
#include "pstt/syntax.hpp"

using namespace pstt;

namespace {

std::vector<std::string> names(std::initializer_list<const char*> xs) { return {xs.begin(), xs.end()}; }

}  // namespace

TEST(FreeVars, PairListsBothComponents) {
    EXPECT_EQ(free_vars(pair(var("x"), var("y"))), names({"x", "y"}));
}

TEST(FreeVars, LetPairRemovesBinders) {
    auto t = let_pair("x", "y", var("z"), pair(var("x"), var("y")));
    EXPECT_EQ(free_vars(t), names({"z"}));
}

TEST(FreeVars, StarHasNone) { EXPECT_TRUE(free_vars(star()).empty()); }

TEST(FreeVars, FirstOccurrenceOrder) {
    auto t = parse_term("let (a, b) = w in CX(let * = u in a, b)");
    EXPECT_EQ(free_vars(t), names({"w", "u"}));
}

TEST(Substitute, VariableBecomesReplacement) {
    EXPECT_TRUE(alpha_eq(substitute(var("x"), "x", star()), star()));
}

TEST(Substitute, InsideLetStar) {
    auto t = let_star(var("x"), star());
    EXPECT_TRUE(alpha_eq(substitute(t, "x", star()), let_star(star(), star())));
}

TEST(Substitute, AvoidsCapture) {
    // let (a,b) = z in (a, x)  with x := b must not capture b.
    auto t = let_pair("a", "b", var("z"), pair(var("a"), var("x")));
    auto r = substitute(t, "x", var("b"));
    ASSERT_EQ(r->kind, TermKind::LetPair);
    EXPECT_NE(r->y, "b");
    EXPECT_EQ(r->body()->children[1]->name, "b");
    EXPECT_EQ(free_vars(r), names({"z", "b"}));
    auto expected = let_pair("a", "c", var("z"), pair(var("a"), var("b")));
    EXPECT_TRUE(alpha_eq(r, expected));
}

TEST(Substitute, ShadowedOccurrenceUntouched) {
    auto t = let_box(Grade{3}, "x", var("x"), var("x"));
    auto r = substitute(t, "x", var("s"));
    EXPECT_TRUE(alpha_eq(r, let_box(Grade{3}, "x", var("s"), var("x"))));
}

TEST(AlphaEq, ConsistentRenaming) {
    auto a = let_pair("x", "y", var("z"), pair(var("x"), var("y")));
    auto b = let_pair("a", "b", var("z"), pair(var("a"), var("b")));
    EXPECT_TRUE(alpha_eq(a, b));
}

TEST(AlphaEq, SwappedBindersDiffer) {
    auto a = let_pair("x", "y", var("z"), pair(var("x"), var("y")));
    auto b = let_pair("y", "x", var("z"), pair(var("x"), var("y")));
    EXPECT_FALSE(alpha_eq(a, b));
}

TEST(AlphaEq, FreeNamesMatter) { EXPECT_FALSE(alpha_eq(var("x"), var("y"))); }

TEST(AlphaEq, GradesMatter) { EXPECT_FALSE(alpha_eq(box(Grade{3}, star()), box(Grade{4}, star()))); }

TEST(ShiftContext, PaperExample) {
    Context g = test::judgement("x:^50 q1, y:^75 q2", "*", "1").context;
    Context s = shift_context(Grade{100}, g);
    ASSERT_EQ(s.size(), 2u);
    EXPECT_EQ(s[0].name, "x");
    EXPECT_EQ(s[0].grade, Grade{150});
    EXPECT_EQ(s[1].name, "y");
    EXPECT_EQ(s[1].grade, Grade{175});
    EXPECT_TRUE(type_equal(s[0].type, qubit_type("q1")));
}

TEST(ShiftContext, ZeroIsIdentity) {
    Context g = test::judgement("x:^-3 q1", "*", "1").context;
    EXPECT_EQ(shift_context(Grade{0}, g)[0].grade, Grade{-3});
}

TEST(ShiftContext, NegativeShift) {
    Context g = test::judgement("x:^0 q1", "*", "1").context;
    EXPECT_EQ(shift_context(Grade{-20}, g)[0].grade, Grade{-20});
}

TEST(ShiftContext, ComposesAdditively) {
    Context g = test::judgement("a:^1 q1, b:^-7 [3] q2, c:^0 1", "*", "1").context;
    for (int d = -9; d <= 9; d += 3)
        for (int e = -8; e <= 8; e += 4) {
            Context lhs = shift_context(Grade{d}, shift_context(Grade{e}, g));
            Context rhs = shift_context(Grade{d + e}, g);
            for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(lhs[i].grade, rhs[i].grade);
        }
}

TEST(Uniquify, RenamesCollidingBinders) {
    auto t = parse_term("let (x, y) = let (x, y) = z in (y, x) in (x, y)");
    auto u = uniquify_binders(t);
    EXPECT_TRUE(alpha_eq(t, u));
    std::vector<std::string> all = free_vars(u);
    std::function<void(const TermPtr&)> collect = [&](const TermPtr& n) {
        for (const auto& b : node_binders(*n)) all.push_back(b);
        for (const auto& c : n->children) collect(c);
    };
    collect(u);
    std::sort(all.begin(), all.end());
    EXPECT_EQ(std::adjacent_find(all.begin(), all.end()), all.end());
}

TEST(Paths, ReplaceAndFetch) {
    auto t = parse_term("(H1(x), let * = u in y)");
    EXPECT_EQ(subterm_at(t, {1, 0})->name, "u");
    auto r = replace_at(t, {0, 0}, var("w"));
    EXPECT_TRUE(alpha_eq(r, parse_term("(H1(w), let * = u in y)")));
}
