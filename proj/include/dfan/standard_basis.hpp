#pragma once

#include "dfan/division.hpp"

namespace dfan {

struct Staircase {
    std::vector<ExponentVector> corners; // divisibility-minimal marks
    bool contains(const ExponentVector& e) const {
        for (const auto& c : corners)
            if (c.divides(e)) return true;
        return false;
    }
};

// Basis elements paired with their leading exponents under `order`; elements
// are unitary (coefficient 1 at the mark).
struct MarkedBasis {
    RingSignature sig;
    OrderSpec order;
    std::vector<DiffOp> elements;
    std::vector<ExponentVector> marks;

    size_t size() const { return elements.size(); }
    Staircase staircase() const;
    bool all_homogeneous() const;
};

struct CompletionStats {
    long pairs_processed = 0;
    long zero_reductions = 0;
    long elements_added = 0;
};

// Carries the partial basis out of an exhausted completion.
struct CompletionBudgetExhausted : BudgetExhausted {
    MarkedBasis partial;
    CompletionBudgetExhausted(std::string msg, MarkedBasis b)
        : BudgetExhausted(std::move(msg)), partial(std::move(b)) {}
};

// Join the two leading exponents and cancel the leading coefficients.
DiffOp s_pair(const DiffOp& A, const ExponentVector& ea, const DiffOp& B,
              const ExponentVector& eb);

// Completion in the homogenized ring; pairs processed smallest join first.
MarkedBasis buchberger(RingSignature sig, const std::vector<DiffOp>& gens, const OrderSpec& ord,
                       const Budgets& budgets, CompletionStats* stats = nullptr);

// Keep only divisibility-minimal marks, then push every tail off the
// staircase. Result is the unique minimal reduced basis for the order.
MarkedBasis minimal_reduce(const MarkedBasis& b, const Budgets& budgets);

// Strip exact z factors and recomplete until stable. The loop is bounded by
// 2m+1 rounds; running past the bound is an invariant violation.
MarkedBasis z_saturate(const MarkedBasis& b, const Budgets& budgets, int* rounds_out = nullptr);

// Remainder of division by the basis.
DiffOp normal_form(const DiffOp& P, const MarkedBasis& b, long budget);

// Homogenize-and-reduce membership test against a saturated basis.
bool ideal_member(const DiffOp& P, const MarkedBasis& saturated, long budget);

// Two orders marking every element identically must reproduce the same
// minimal reduced basis; returns true when recompletion under `other`
// confirms it.
bool order_transport_check(const MarkedBasis& b, const OrderSpec& other, const Budgets& budgets);

// Full pipeline: homogenize plain generators, complete, minimize, saturate.
MarkedBasis saturated_basis(RingSignature sig, const std::vector<DiffOp>& plain_gens,
                            const OrderSpec& ord, const Budgets& budgets);

} // namespace dfan
