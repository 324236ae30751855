#include "doctest.h"

#include "dfan/standard_basis.hpp"
#include "test_util.hpp"

#include <algorithm>
#include <vector>

using namespace dfan;
using namespace dfan::testutil;

namespace {

const RingSignature sig10{1, 0};
const RingSignature sig11{1, 1};
const RingSignature sig22{2, 2};

OrderSpec zero_ord(RingSignature sig) {
    return OrderSpec::hom_form(VForm(sig, std::vector<Rational>(sig.p, Rational(0))));
}

// element multiset comparison, ignoring storage order
bool same_elements(const MarkedBasis& b, std::vector<DiffOp> want) {
    if (b.size() != want.size()) return false;
    std::vector<DiffOp> got = b.elements;
    auto lt = [](const DiffOp& a, const DiffOp& c) {
        return grlex0_cmp(a.terms().rbegin()->first, c.terms().rbegin()->first) < 0;
    };
    std::sort(got.begin(), got.end(), lt);
    std::sort(want.begin(), want.end(), lt);
    return got == want;
}

MarkedBasis mark_all(RingSignature sig, std::vector<DiffOp> els, const OrderSpec& ord) {
    MarkedBasis b{sig, ord, std::move(els), {}};
    for (const auto& e : b.elements) b.marks.push_back(leading_exponent(e, ord));
    return b;
}

} // namespace

TEST_CASE("critical pair construction") {
    SUBCASE("coordinate against derivation yields the central element") {
        DiffOp A = op("x1", sig10), B = op("dx1", sig10);
        DiffOp s = s_pair(A, exp_of("x1", sig10), B, exp_of("dx1", sig10));
        CHECK(s == op("z", sig10));
    }

    SUBCASE("self pair cancels") {
        DiffOp A = op("x1*dx1 + z", sig10);
        CHECK(s_pair(A, exp_of("x1*dx1", sig10), A, exp_of("x1*dx1", sig10)).is_zero());
    }

    SUBCASE("disjoint marks reduce to zero against the pair") {
        OrderSpec ord = OrderSpec::hom_form(VForm(sig22, {Rational(1), Rational(1)}));
        DiffOp A = op("t1 - x1", sig22), B = op("t2 - x2", sig22);
        ExponentVector ea = leading_exponent(A, ord), eb = leading_exponent(B, ord);
        CHECK(ea == exp_of("x1", sig22));
        CHECK(eb == exp_of("x2", sig22));
        DiffOp s = s_pair(A, ea, B, eb);
        CHECK_FALSE(s.is_zero());
        auto res = divide(s, {A, B}, ord, 1000);
        CHECK(res.remainder.is_zero());
    }
}

TEST_CASE("completion fills in the central element") {
    OrderSpec ord = zero_ord(sig10);
    Budgets budgets;
    MarkedBasis b = minimal_reduce(
        buchberger(sig10, {op("x1", sig10), op("dx1", sig10)}, ord, budgets), budgets);
    CHECK(same_elements(b, {op("x1", sig10), op("dx1", sig10), op("z", sig10)}));
    for (size_t i = 0; i < b.size(); ++i) {
        CHECK(b.marks[i] == leading_exponent(b.elements[i], ord));
        CHECK(b.elements[i].coeff(b.marks[i]) == 1);
    }
}

TEST_CASE("single generator normalizes to unit leading coefficient") {
    OrderSpec ord = zero_ord(sig10);
    Budgets budgets;
    MarkedBasis b = minimal_reduce(
        buchberger(sig10, {op("2 x1*dx1 + 2 z", sig10)}, ord, budgets), budgets);
    REQUIRE(b.size() == 1);
    CHECK(b.elements[0] == op("x1*dx1 + z", sig10));
}

TEST_CASE("two-variable pair is already complete") {
    OrderSpec ord = OrderSpec::hom_form(VForm::axis(sig11, 1));
    Budgets budgets;
    MarkedBasis b = saturated_basis(
        sig11, {plain_op("t1 - x1", sig11), plain_op("dx1 + dt1", sig11)}, ord, budgets);
    REQUIRE(b.size() == 2);
    CHECK(same_elements(b, {op("x1 - t1", sig11), op("dx1 + dt1", sig11)}));
    std::vector<ExponentVector> marks = b.marks;
    std::sort(marks.begin(), marks.end(), Grlex0Less{});
    CHECK(marks[0] == exp_of("x1", sig11));
    CHECK(marks[1] == exp_of("dt1", sig11));
}

TEST_CASE("redundant marks are dropped and tails pushed off the staircase") {
    OrderSpec ord = zero_ord(sig10);
    Budgets budgets;

    SUBCASE("non-corner element removed") {
        MarkedBasis b = mark_all(
            sig10, {op("x1", sig10), op("dx1", sig10), op("z", sig10), op("x1*z", sig10)}, ord);
        MarkedBasis m = minimal_reduce(b, budgets);
        CHECK(same_elements(m, {op("x1", sig10), op("dx1", sig10), op("z", sig10)}));
    }

    SUBCASE("idempotent") {
        MarkedBasis b = mark_all(sig10, {op("x1", sig10), op("dx1", sig10), op("z", sig10)}, ord);
        MarkedBasis once = minimal_reduce(b, budgets);
        MarkedBasis twice = minimal_reduce(once, budgets);
        CHECK(once.elements == twice.elements);
        CHECK(once.marks == twice.marks);
    }

    SUBCASE("leading coefficients normalized") {
        MarkedBasis b = mark_all(
            sig10, {op("2 x1", sig10), op("3 dx1", sig10), op("5 z", sig10)}, ord);
        MarkedBasis m = minimal_reduce(b, budgets);
        CHECK(same_elements(m, {op("x1", sig10), op("dx1", sig10), op("z", sig10)}));
    }

    SUBCASE("tail reduction off the staircase") {
        // second element carries a tail divisible by the first mark
        MarkedBasis b = mark_all(sig10, {op("x1", sig10), op("dx1 + x1*z", sig10)}, ord);
        MarkedBasis m = minimal_reduce(b, budgets);
        REQUIRE(m.size() == 2);
        Staircase st = m.staircase();
        for (size_t i = 0; i < m.size(); ++i)
            for (const auto& [e, c] : m.elements[i].terms())
                if (!(e == m.marks[i])) CHECK_FALSE(st.contains(e));
    }
}

TEST_CASE("minimal reduced basis ignores generator presentation") {
    OrderSpec ord = zero_ord(sig10);
    Budgets budgets;
    std::vector<std::vector<DiffOp>> presentations = {
        {op("x1", sig10), op("dx1", sig10)},
        {op("dx1", sig10), op("x1", sig10)},
        {op("x1", sig10), op("dx1", sig10), op("x1^2", sig10), op("x1*dx1 + z", sig10)},
        {op("3 dx1", sig10), op("x1*dx1 + z", sig10), op("2 x1", sig10)},
    };
    MarkedBasis ref = minimal_reduce(buchberger(sig10, presentations[0], ord, budgets), budgets);
    for (size_t i = 1; i < presentations.size(); ++i) {
        MarkedBasis b = minimal_reduce(buchberger(sig10, presentations[i], ord, budgets), budgets);
        CHECK(b.elements == ref.elements);
        CHECK(b.marks == ref.marks);
    }
}

TEST_CASE("membership by reduction") {
    OrderSpec ord = zero_ord(sig10);
    Budgets budgets;
    MarkedBasis b = minimal_reduce(
        buchberger(sig10, {op("x1", sig10), op("dx1", sig10)}, ord, budgets), budgets);

    CHECK(normal_form(op("z", sig10), b, 1000).is_zero());
    CHECK(normal_form(op("1", sig10), b, 1000) == op("1", sig10));
    CHECK(ideal_member(plain_op("x1^3*dx1", sig10), b, 1000));
    CHECK_FALSE(ideal_member(plain_op("1", sig10), b, 1000));

    // random left combinations of the generators stay members
    Rng rng(4001);
    std::vector<DiffOp> gens = {plain_op("x1", sig10), plain_op("dx1", sig10)};
    for (int it = 0; it < 50; ++it) {
        DiffOp P(sig10);
        for (const auto& g : gens)
            P += multiply_plain(rng.operator_with(sig10, 2, 2, false), g);
        if (P.is_zero()) continue;
        CHECK(ideal_member(P, b, 200000));
    }
}

TEST_CASE("saturation strips central factors") {
    OrderSpec ord = zero_ord(sig10);
    Budgets budgets;

    SUBCASE("wrapped element is unwrapped") {
        MarkedBasis b = mark_all(sig10, {op("x1*dx1*z + z^2", sig10)}, ord);
        int rounds = 0;
        MarkedBasis s = z_saturate(b, budgets, &rounds);
        CHECK(same_elements(s, {op("x1*dx1 + z", sig10)}));
        CHECK(rounds <= 2 * sig10.m() + 1);
    }

    SUBCASE("stable basis unchanged") {
        // every element has a z-free term, so nothing strips
        MarkedBasis b = mark_all(sig10, {op("x1*dx1 + z", sig10)}, ord);
        MarkedBasis m = minimal_reduce(b, budgets);
        int rounds = -1;
        MarkedBasis s = z_saturate(m, budgets, &rounds);
        CHECK(s.elements == m.elements);
        CHECK(rounds == 0);
    }

    SUBCASE("central element saturates to the whole ring") {
        MarkedBasis b = mark_all(sig10, {op("x1", sig10), op("dx1", sig10), op("z", sig10)}, ord);
        MarkedBasis s = z_saturate(minimal_reduce(b, budgets), budgets);
        CHECK(same_elements(s, {op("1", sig10)}));
    }
}

TEST_CASE("normal crossing pair completes without new elements") {
    OrderSpec ord = OrderSpec::hom_form(VForm(sig22, {Rational(1), Rational(1)}));
    Budgets budgets;
    std::vector<DiffOp> gens = {
        plain_op("t1 - x1", sig22), plain_op("t2 - x2", sig22),
        plain_op("dx1 + dt1", sig22), plain_op("dx2 + dt2", sig22)};
    MarkedBasis b = saturated_basis(sig22, gens, ord, budgets);
    CHECK(same_elements(b, {op("x1 - t1", sig22), op("x2 - t2", sig22),
                            op("dx1 + dt1", sig22), op("dx2 + dt2", sig22)}));
    CHECK(b.all_homogeneous());
}

TEST_CASE("homogeneous inputs stay homogeneous") {
    Rng rng(4002);
    Budgets budgets;
    budgets.pair_budget = 60;
    budgets.division_steps = 3000; // keeps runaway reductions cheap to abandon
    for (int it = 0; it < 10; ++it) {
        std::vector<DiffOp> gens;
        for (int g = 0; g < 2; ++g)
            gens.push_back(homogenize(rng.nonzero_operator(sig11, 2, 1, false)));
        OrderSpec ord = OrderSpec::hom_form(rng.vform(sig11, 2));
        try {
            MarkedBasis b = buchberger(sig11, gens, ord, budgets);
            CHECK(b.all_homogeneous());
            MarkedBasis m = minimal_reduce(b, budgets);
            CHECK(m.all_homogeneous());
        } catch (const BudgetExhausted&) {
            // runaway completions are reported, never silently wrong
        }
    }
}

TEST_CASE("exhausted completion carries the partial basis") {
    OrderSpec ord = zero_ord(sig10);
    Budgets budgets;
    budgets.pair_budget = 0;
    try {
        buchberger(sig10, {op("x1", sig10), op("dx1", sig10)}, ord, budgets);
        FAIL("expected budget exhaustion");
    } catch (const CompletionBudgetExhausted& e) {
        CHECK(e.partial.size() == 2);
    }
}

TEST_CASE("marks decide whether an order transports") {
    Budgets budgets;

    SUBCASE("same marks transport") {
        OrderSpec ord = OrderSpec::hom_form(VForm::axis(sig11, 1));
        MarkedBasis b = saturated_basis(
            sig11, {plain_op("t1 - x1", sig11), plain_op("dx1 + dt1", sig11)}, ord, budgets);
        OrderSpec other = OrderSpec::hom_form(VForm(sig11, {frac(1, 2)}));
        CHECK(order_transport_check(b, other, budgets));
    }

    SUBCASE("changed mark refuses") {
        OrderSpec ord = OrderSpec::hom_form(VForm::axis(sig11, 1));
        MarkedBasis b = mark_all(sig11, {op("x1 - t1", sig11)}, ord);
        CHECK(b.marks[0] == exp_of("x1", sig11));
        // penalizing x1 swings the leading exponent to t1
        OrderSpec other = OrderSpec::hom_form(
            LinearForm(sig11, {Rational(-1), Rational(0)}, {Rational(1), Rational(0)}));
        CHECK(leading_exponent(b.elements[0], other) == exp_of("t1", sig11));
        CHECK_FALSE(order_transport_check(b, other, budgets));
    }

    SUBCASE("monomial basis transports everywhere") {
        OrderSpec ord = OrderSpec::hom_form(VForm::axis(sig11, 1));
        MarkedBasis b = mark_all(sig11, {op("x1*dt1", sig11), op("z^2", sig11)}, ord);
        CHECK(order_transport_check(b, zero_ord(sig11), budgets));
    }
}

TEST_CASE("staircase membership") {
    OrderSpec ord = OrderSpec::hom_form(VForm::axis(sig11, 1));
    Budgets budgets;
    MarkedBasis b = saturated_basis(
        sig11, {plain_op("t1 - x1", sig11), plain_op("dx1 + dt1", sig11)}, ord, budgets);
    Staircase st = b.staircase();
    CHECK(st.contains(exp_of("x1", sig11)));
    CHECK(st.contains(exp_of("x1^2*dt1*z", sig11)));
    CHECK(st.contains(exp_of("dt1", sig11)));
    CHECK_FALSE(st.contains(exp_of("t1", sig11)));
    CHECK_FALSE(st.contains(exp_of("1", sig11)));
    CHECK_FALSE(st.contains(exp_of("dx1*z^3", sig11)));
}
