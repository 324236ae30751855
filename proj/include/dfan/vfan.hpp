#pragma once

#include "dfan/standard_basis.hpp"

namespace dfan {

// Point of the extended ray space [0, inf]: the ratio l2/l1 of a weight
// form (l1, l2) on the two auxiliary pairs.
struct Slope {
    Rational v;
    bool inf = false;

    static Slope infinity() { return {Rational(0), true}; }
    static Slope of(const Rational& r) { return {r, false}; }

    bool operator==(const Slope& o) const { return inf == o.inf && (inf || v == o.v); }
    bool operator!=(const Slope& o) const { return !(*this == o); }
    bool operator<(const Slope& o) const {
        if (inf) return false;
        if (o.inf) return true;
        return v < o.v;
    }
    bool operator<=(const Slope& o) const { return *this < o || *this == o; }
    std::string to_string() const;
};

struct SlopeInterval {
    Slope lo, hi;
    bool lo_closed = true, hi_closed = true;

    bool is_point() const { return lo == hi; }
    bool contains(const Slope& s) const;
    bool closure_contains(const Slope& s) const { return lo <= s && s <= hi; }
    std::string to_string() const;
};

// primitive integral form on the ray of the slope, and back
VForm form_of_slope(RingSignature sig, const Slope& s);
Slope slope_of_form(const VForm& L);

struct FanCell {
    SlopeInterval interval;
    int dim = 2; // 2 sector, 1 ray
    VForm witness;
    MarkedBasis basis;
};

struct VGroebnerFan {
    RingSignature sig;
    std::vector<FanCell> cells;  // ordered, tiling [0, inf]
    std::vector<VForm> skeleton; // primitive forms of every cell closure, by slope
};

// Maximal closed slope interval on which every stored mark stays the
// leading exponent of its element: intersection of the half-plane
// constraints from the marks against their tails, tier by equal degree.
SlopeInterval cone_of_basis(const MarkedBasis& b);

// Sweep the ray space from slope 0 upward. The seed must generate the
// saturated homogeneous ideal: each sector is completed at an exact
// rational witness, each wall is completed at its own form, and the next
// sector is predicted by the limit order from beyond the wall and then
// verified at a fresh witness. A wall merges into a neighboring sector
// exactly when its marked basis matches that neighbor's; the boundary
// rays 0 and inf carry the class of their inward limit order, so the
// outermost sectors are always closed on the outside.
VGroebnerFan traverse_fan(RingSignature sig, const std::vector<DiffOp>& seed,
                          const Budgets& budgets);

// Deduplicated primitive integral endpoint forms of all cell closures.
std::vector<VForm> fan_skeleton(RingSignature sig, const std::vector<FanCell>& cells);

// Index of the unique cell whose interval contains the slope.
int cell_index_at(const VGroebnerFan& fan, const Slope& s);

// Primitive forms of the cell's closure endpoints, low slope first; a ray
// contributes a single form, and p = 1 always yields {V_1}.
std::vector<VForm> cell_closure_forms(const FanCell& cell);

// On a closure form L of the cell: leading exponents under the approach
// order from the witness side must match the stored marks, and match the
// plain weight orders of sampled forms strictly between L and the witness;
// the L-order of every element must be attained at its mark.
bool closure_agreement_check(const FanCell& cell, const VForm& L);

} // namespace dfan
