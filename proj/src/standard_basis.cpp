#include "dfan/standard_basis.hpp"

#include <algorithm>
#include <map>

namespace dfan {

Staircase MarkedBasis::staircase() const {
    Staircase s;
    for (size_t i = 0; i < marks.size(); ++i) {
        bool minimal = true;
        for (size_t j = 0; j < marks.size() && minimal; ++j) {
            if (i == j) continue;
            if (marks[j].divides(marks[i]) && marks[i] != marks[j]) minimal = false;
            if (marks[i] == marks[j] && j < i) minimal = false; // dedupe
        }
        if (minimal) s.corners.push_back(marks[i]);
    }
    return s;
}

bool MarkedBasis::all_homogeneous() const {
    return std::all_of(elements.begin(), elements.end(),
                       [](const DiffOp& q) { return q.is_homogeneous(); });
}

DiffOp s_pair(const DiffOp& A, const ExponentVector& ea, const DiffOp& B,
              const ExponentVector& eb) {
    ExponentVector j = ea.join(eb);
    const RingSignature sig = A.sig();
    Rational ca = A.coeff(ea), cb = B.coeff(eb);
    DiffOp left = multiply(DiffOp::monomial(sig, j - ea, 1), A);
    DiffOp right = multiply(DiffOp::monomial(sig, j - eb, ca / cb), B);
    return left - right;
}

namespace {

DiffOp unitary(const DiffOp& P, const ExponentVector& mark) {
    return P * (Rational(1) / P.coeff(mark));
}

} // namespace

MarkedBasis buchberger(RingSignature sig, const std::vector<DiffOp>& gens, const OrderSpec& ord,
                       const Budgets& budgets, CompletionStats* stats) {
    MarkedBasis b{sig, ord, {}, {}};
    for (const auto& g : gens) {
        if (g.is_zero()) continue;
        ExponentVector m = leading_exponent(g, ord);
        b.elements.push_back(unitary(g, m));
        b.marks.push_back(m);
    }
    if (b.elements.empty()) throw InvariantViolation("completion of the zero ideal");

    struct PendingLess {
        const OrderSpec* ord;
        bool operator()(const std::pair<ExponentVector, std::pair<int, int>>& a,
                        const std::pair<ExponentVector, std::pair<int, int>>& b) const {
            auto c = ord->compare(a.first, b.first);
            if (c != std::strong_ordering::equal) return c == std::strong_ordering::less;
            return a.second < b.second;
        }
    };
    // normal strategy: smallest join first, index pair breaks ties
    std::vector<std::pair<ExponentVector, std::pair<int, int>>> pending;
    auto push_pairs = [&](int upto) {
        for (int i = 0; i < upto; ++i)
            pending.push_back({b.marks[i].join(b.marks[upto]), {i, upto}});
    };
    for (size_t i = 1; i < b.elements.size(); ++i) push_pairs((int)i);

    CompletionStats local;
    CompletionStats& st = stats ? *stats : local;
    while (!pending.empty()) {
        auto it = std::min_element(pending.begin(), pending.end(), PendingLess{&ord});
        auto [i, j] = it->second;
        pending.erase(it);
        if (st.pairs_processed >= budgets.pair_budget)
            throw CompletionBudgetExhausted("pair budget exhausted", std::move(b));
        ++st.pairs_processed;
        DiffOp s = s_pair(b.elements[i], b.marks[i], b.elements[j], b.marks[j]);
        DivisionResult d = divide(s, b.elements, b.marks, ord, budgets.division_steps);
        if (d.truncated)
            throw CompletionBudgetExhausted("division budget exhausted inside completion",
                                            std::move(b));
        if (d.remainder.is_zero()) {
            ++st.zero_reductions;
            continue;
        }
        ExponentVector m = leading_exponent(d.remainder, ord);
        b.elements.push_back(unitary(d.remainder, m));
        b.marks.push_back(m);
        ++st.elements_added;
        push_pairs((int)b.elements.size() - 1);
    }
    return b;
}

MarkedBasis minimal_reduce(const MarkedBasis& b, const Budgets& budgets) {
    // keep one element per divisibility-minimal mark
    std::vector<int> keep;
    for (size_t i = 0; i < b.size(); ++i) {
        bool drop = false;
        for (size_t j = 0; j < b.size() && !drop; ++j) {
            if (i == j) continue;
            if (b.marks[j] == b.marks[i]) {
                if (j < i) drop = true;
            } else if (b.marks[j].divides(b.marks[i]))
                drop = true;
        }
        if (!drop) keep.push_back((int)i);
    }
    MarkedBasis r{b.sig, b.order, {}, {}};
    for (int i : keep) {
        r.elements.push_back(b.elements[i]);
        r.marks.push_back(b.marks[i]);
    }
    // tail reduction: everything below the mark gets replaced by its normal
    // form against the whole (mark-fixed) basis
    for (size_t i = 0; i < r.size(); ++i) {
        DiffOp head = DiffOp::monomial(r.sig, r.marks[i], 1);
        DiffOp tail = r.elements[i] - head;
        DivisionResult d = divide(tail, r.elements, r.marks, r.order, budgets.division_steps);
        if (d.truncated)
            throw BudgetExhausted("division budget exhausted during tail reduction");
        r.elements[i] = head + d.remainder;
    }
    // canonical element order: by mark, ascending
    std::vector<int> idx(r.size());
    for (size_t i = 0; i < idx.size(); ++i) idx[i] = (int)i;
    std::sort(idx.begin(), idx.end(), [&](int a, int c) {
        return r.order.compare(r.marks[a], r.marks[c]) == std::strong_ordering::less;
    });
    MarkedBasis out{r.sig, r.order, {}, {}};
    for (int i : idx) {
        out.elements.push_back(r.elements[i]);
        out.marks.push_back(r.marks[i]);
    }
    return out;
}

MarkedBasis z_saturate(const MarkedBasis& b, const Budgets& budgets, int* rounds_out) {
    MarkedBasis cur = b;
    int bound = 2 * b.sig.m() + 1;
    int round = 0;
    for (;;) {
        bool stripped = false;
        std::vector<DiffOp> gens;
        for (const auto& q : cur.elements) {
            int c = q.min_z();
            if (c > 0) stripped = true;
            gens.push_back(q.z_shift(-c));
        }
        if (!stripped) break;
        if (++round > bound)
            throw InvariantViolation("z saturation failed to stabilize within 2m+1 rounds");
        cur = minimal_reduce(buchberger(cur.sig, gens, cur.order, budgets), budgets);
    }
    if (rounds_out) *rounds_out = round;
    return cur;
}

DiffOp normal_form(const DiffOp& P, const MarkedBasis& b, long budget) {
    DivisionResult d = divide(P, b.elements, b.marks, b.order, budget);
    if (d.truncated) throw BudgetExhausted("division budget exhausted in normal form");
    return d.remainder;
}

bool ideal_member(const DiffOp& P, const MarkedBasis& saturated, long budget) {
    if (P.is_zero()) return true;
    DiffOp h = P.is_plain() ? homogenize(P) : P;
    return normal_form(h, saturated, budget).is_zero();
}

bool order_transport_check(const MarkedBasis& b, const OrderSpec& other, const Budgets& budgets) {
    for (size_t i = 0; i < b.size(); ++i)
        if (leading_exponent(b.elements[i], other) != b.marks[i]) return false;
    MarkedBasis rebuilt = minimal_reduce(buchberger(b.sig, b.elements, other, budgets), budgets);
    if (rebuilt.size() != b.size()) return false;
    // compare as mark->element maps; the two orders may sort differently
    std::map<ExponentVector, const DiffOp*, Grlex0Less> lhs, rhs;
    for (size_t i = 0; i < b.size(); ++i) lhs[b.marks[i]] = &b.elements[i];
    for (size_t i = 0; i < rebuilt.size(); ++i) rhs[rebuilt.marks[i]] = &rebuilt.elements[i];
    if (lhs.size() != rhs.size()) return false;
    for (auto it1 = lhs.begin(), it2 = rhs.begin(); it1 != lhs.end(); ++it1, ++it2) {
        if (!(it1->first == it2->first)) return false;
        if (!(*it1->second == *it2->second)) return false;
    }
    return true;
}

MarkedBasis saturated_basis(RingSignature sig, const std::vector<DiffOp>& plain_gens,
                            const OrderSpec& ord, const Budgets& budgets) {
    std::vector<DiffOp> hom;
    hom.reserve(plain_gens.size());
    for (const auto& g : plain_gens) hom.push_back(homogenize(g));
    MarkedBasis b = minimal_reduce(buchberger(sig, hom, ord, budgets), budgets);
    return z_saturate(b, budgets);
}

} // namespace dfan
