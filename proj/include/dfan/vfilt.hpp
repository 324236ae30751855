#pragma once

#include "dfan/malgrange.hpp"
#include "dfan/vfan.hpp"

#include <optional>

namespace dfan {

// One rational weight per auxiliary pair; a form L prices it as sum l_j w_j.
using WeightVector = std::vector<Rational>;

// Everything the reduction machinery needs to know about one ideal: the
// plain generators it came from, a fixed saturated basis used for all
// membership audits, and the fan with a minimal reduced basis per cell.
struct IdealPresentation {
    RingSignature sig;
    std::vector<DiffOp> generators; // plain ring
    MarkedBasis saturated;          // homogeneous, under the reference order
    VGroebnerFan fan;
};

IdealPresentation build_presentation(RingSignature sig, const std::vector<DiffOp>& plain_gens,
                                     const Budgets& budgets);
IdealPresentation build_presentation(const PolynomialMap& f, const Budgets& budgets);

// Does the plain representative sit inside the weight-w level set: every
// axis order ord^{V_j}(P) at most w_j. Zero always belongs.
bool vw_membership(const DiffOp& P, const WeightVector& w);

// Same question for one cell's closed slab: ord^L(P) <= L(w) for every
// closure form L of the cell.
bool sigma_vw_membership(const DiffOp& P, const FanCell& cell, const WeightVector& w);

// One recorded subtraction. `before` / `after` are order profiles over
// `forms`; nullopt encodes the order of the zero operator.
struct ReductionStep {
    DiffOp subtracted; // plain ideal element taken off the representative
    std::vector<VForm> forms;
    std::vector<std::optional<Rational>> before, after;
};

struct ReductionTrace {
    DiffOp initial, result;
    std::vector<ReductionStep> steps;
    bool started = false;
};

// Re-derive every consequence the trace claims: each subtracted element is
// in the ideal, the profile bookkeeping is self-consistent, and the steps
// telescope exactly from initial to result.
void audit_trace(const ReductionTrace& trace, const IdealPresentation& pres,
                 const Budgets& budgets);

// One exchange step: replace P by a representative whose order at
// forms[i0] strictly drops while no other form on the list sees its order
// grow. `improving` must be a certified rewrite of P (same class) with
// strictly smaller order at forms[i0]; every form must lie on the closure
// of the cell. The homogenized difference is divided by the cell basis
// under the limit order at forms[i0], and the top layer at forms[i0] is
// recombined from the leading quotient symbols and subtracted.
DiffOp reduce_step(const DiffOp& P, const DiffOp& improving, const std::vector<VForm>& forms,
                   size_t i0, const FanCell& cell, const IdealPresentation& pres,
                   const Budgets& budgets, ReductionTrace* trace = nullptr);

// From one certificate per closure form of the cell, each below its own
// target L_i(w), manufacture a single representative below all the targets
// at once. certs[i] answers forms[i] of cell_closure_forms(cell).
DiffOp intersection_witness(const std::vector<DiffOp>& certs, const FanCell& cell,
                            const WeightVector& w, const IdealPresentation& pres,
                            const Budgets& budgets, ReductionTrace* trace = nullptr);

// Comparison constant of a 2-dimensional cell: the largest gap
// ord^{V_side}(Q) - ord^{V_side}(sigma(Q)) over the cell basis, where sigma
// takes the symbol at the far closure endpoint (side 1 prices V_1 against
// the high endpoint, side 2 prices V_2 against the low one). Always a
// nonnegative integer.
long kappa_sigma(const FanCell& cell, int side = 1);

// Maximum of kappa_sigma over the 2-dimensional cells; 0 when p = 1.
long kappa_global(const VGroebnerFan& fan, int side = 1);

// Drive the order at the cell's high closure form down to its target
// while keeping the low form below target and provably bounding the V_1
// order by max(ord^{V_1}(P), w_1 + kappa_sigma(cell)). The per-step claims
// behind that bound are asserted on every pass.
DiffOp controlled_reduce(const DiffOp& P, const DiffOp& cert_high, const FanCell& cell,
                         const WeightVector& w, const IdealPresentation& pres,
                         const Budgets& budgets, ReductionTrace* trace = nullptr);

// From one certificate per skeleton form (certs[i] below target at
// fan.skeleton[i]), sweep the 2-dimensional cells by ascending slope and
// return a representative with ord^{V_1} <= w_1 + kappa_global and
// ord^{V_2} <= w_2. Needs p = 2.
DiffOp normalize_across_fan(const std::vector<DiffOp>& certs, const WeightVector& w,
                            const IdealPresentation& pres, const Budgets& budgets,
                            ReductionTrace* trace = nullptr);

} // namespace dfan
