#include "dfan/vfilt.hpp"

#include "dfan/division.hpp"
#include "dfan/errors.hpp"
#include "dfan/oracle.hpp"
#include "dfan/orders.hpp"
#include "dfan/standard_basis.hpp"

#include <algorithm>

namespace dfan {

namespace {

using Ord = std::optional<Rational>; // nullopt is the order of zero

bool ord_le(const Ord& a, const Ord& b) {
    if (!a) return true;
    if (!b) return false;
    return *a <= *b;
}

bool ord_lt(const Ord& a, const Ord& b) { return !ord_le(b, a); }

bool at_most(const Ord& a, const Rational& t) { return !a || *a <= t; }

std::vector<Ord> profile(const DiffOp& P, const std::vector<VForm>& forms) {
    std::vector<Ord> out;
    out.reserve(forms.size());
    for (const VForm& L : forms) out.push_back(l_order(P, L));
    return out;
}

void require_plain(const DiffOp& P, const RingSignature& sig, const char* who) {
    if (P.sig() != sig) throw SignatureMismatch(std::string(who) + ": signature mismatch");
    if (!P.is_plain())
        throw InvariantViolation(std::string(who) + ": representatives live in the plain ring");
}

void require_weights(const WeightVector& w, const RingSignature& sig) {
    if ((int)w.size() != sig.p)
        throw InvariantViolation("weight vector length must match the auxiliary block");
}

// Both operators must present the same class modulo the ideal.
void require_same_class(const DiffOp& a, const DiffOp& b, const IdealPresentation& pres,
                        const Budgets& budgets, const char* who) {
    DiffOp diff = a - b;
    if (diff.is_zero()) return;
    if (!ideal_member(diff, pres.saturated, budgets.division_steps))
        throw InvariantViolation(std::string(who) + ": certificate differs by a non-member");
}

void require_on_closure(const FanCell& cell, const VForm& L) {
    if (cell.basis.sig.p == 1) {
        if (!L.linear().same_ray(VForm::axis(cell.basis.sig, 1).linear()))
            throw InvariantViolation("form is not on the cell closure");
        return;
    }
    if (!cell.interval.closure_contains(slope_of_form(L)))
        throw InvariantViolation("form is not on the cell closure");
}

// One exchange at `target`: divide the homogenized certified difference by
// the cell basis under the approach order at `target` and peel off the
// recombined top layer. Everything downstream checks hang off the pieces,
// so they are all returned.
struct ExchangePass {
    DiffOp next;    // plain, what is left of P
    DiffOp top_hom; // the homogeneous layer that came off
    DiffOp top_plain;
    DiffOp diff_hom; // certified difference, homogeneous and padded
    std::vector<size_t> carriers; // divisor indices feeding the layer
    std::vector<DiffOp> quotients;
    OrderSpec div_ord;
};

ExchangePass exchange_pass(const DiffOp& P, const DiffOp& improving, const VForm& target,
                           const FanCell& cell, const Budgets& budgets) {
    const RingSignature sig = cell.basis.sig;
    ExchangePass out;

    // pad both lifts to a common degree so the difference stays homogeneous
    DiffOp H = homogenize(P);
    DiffOp H1 = homogenize(improving);
    int d = std::max(H.degree(), H1.degree());
    if (!H.is_zero()) H = H.z_shift(d - H.degree());
    if (!H1.is_zero()) H1 = H1.z_shift(d - H1.degree());
    DiffOp H0 = H - H1;
    if (H0.is_zero()) throw InvariantViolation("exchange needs two distinct representatives");

    // the padded difference lies in the saturated ideal, so it must reduce
    // to zero against the cell basis under the approach order at the target
    out.div_ord = target.linear().same_ray(cell.witness.linear())
                      ? OrderSpec::hom_form(target)
                      : OrderSpec::cone_limit(target, cell.witness);
    DivisionResult div =
        divide(H0, cell.basis.elements, cell.basis.marks, out.div_ord, budgets.division_steps);
    if (div.truncated) throw BudgetExhausted("exchange ran out of division budget");
    if (!div.remainder.is_zero() || !div.tail.is_zero())
        throw InvariantViolation("certified difference does not reduce to zero on the cell");

    Ord top = l_order(H0, target);
    Ord whole = l_order(P, target);
    if (!top || !whole || *top != *whole)
        throw InvariantViolation("certificate fails to expose the top layer");

    // the layer: every quotient term pair attaining the top order
    DiffOp W(sig);
    for (size_t j = 0; j < div.quotients.size(); ++j) {
        const DiffOp& qj = div.quotients[j];
        if (qj.is_zero()) continue;
        Rational oj = *l_order(qj, target) + *l_order(cell.basis.elements[j], target);
        if (oj > *top)
            throw InvariantViolation("division overshot the order it was bounded by");
        if (oj == *top) {
            out.carriers.push_back(j);
            W += multiply(l_symbol(qj, target), cell.basis.elements[j]);
        }
    }
    if (out.carriers.empty() || W.is_zero())
        throw InvariantViolation("top layer of the certified difference vanished");
    if (l_symbol(W, target) != l_symbol(H0, target))
        throw InvariantViolation("recombined layer disagrees with the difference symbol");

    out.top_hom = W;
    out.top_plain = dehomogenize(W);
    out.diff_hom = H0;
    out.quotients = std::move(div.quotients);
    out.next = P - out.top_plain;
    return out;
}

void record(ReductionTrace* trace, const DiffOp& initial, const DiffOp& subtracted,
            const std::vector<VForm>& forms, std::vector<Ord> before, std::vector<Ord> after,
            const DiffOp& next) {
    if (!trace) return;
    if (!trace->started) {
        trace->initial = initial;
        trace->started = true;
    }
    trace->steps.push_back({subtracted, forms, std::move(before), std::move(after)});
    trace->result = next;
}

} // namespace

IdealPresentation build_presentation(RingSignature sig, const std::vector<DiffOp>& plain_gens,
                                     const Budgets& budgets) {
    if (plain_gens.empty()) throw InvariantViolation("a presentation needs generators");
    for (const DiffOp& g : plain_gens) {
        require_plain(g, sig, "build_presentation");
        if (g.is_zero()) throw InvariantViolation("zero generator");
    }
    IdealPresentation pres;
    pres.sig = sig;
    pres.generators = plain_gens;
    pres.saturated =
        saturated_basis(sig, plain_gens, OrderSpec::hom_form(VForm::axis(sig, 1)), budgets);
    pres.fan = traverse_fan(sig, pres.saturated.elements, budgets);
    return pres;
}

IdealPresentation build_presentation(const PolynomialMap& f, const Budgets& budgets) {
    return build_presentation(f.sig, annihilator_generators(f), budgets);
}

bool vw_membership(const DiffOp& P, const WeightVector& w) {
    const RingSignature sig = P.sig();
    require_weights(w, sig);
    if (!P.is_plain())
        throw InvariantViolation("level membership is asked of plain representatives");
    if (P.is_zero()) return true;
    for (int j = 1; j <= sig.p; ++j)
        if (!at_most(l_order(P, VForm::axis(sig, j)), w[j - 1])) return false;
    return true;
}

bool sigma_vw_membership(const DiffOp& P, const FanCell& cell, const WeightVector& w) {
    const RingSignature sig = cell.basis.sig;
    require_plain(P, sig, "sigma_vw_membership");
    require_weights(w, sig);
    if (P.is_zero()) return true;
    for (const VForm& L : cell_closure_forms(cell))
        if (!at_most(l_order(P, L), weight_value(L, w))) return false;
    return true;
}

void audit_trace(const ReductionTrace& trace, const IdealPresentation& pres,
                 const Budgets& budgets) {
    if (!trace.started) {
        if (!trace.steps.empty()) throw InvariantViolation("trace has steps but never started");
        return;
    }
    DiffOp acc = trace.initial;
    for (const ReductionStep& st : trace.steps) {
        if (st.forms.size() != st.before.size() || st.forms.size() != st.after.size())
            throw InvariantViolation("trace profile sizes disagree");
        if (st.subtracted.is_zero()) throw InvariantViolation("trace records an empty step");
        if (!ideal_member(st.subtracted, pres.saturated, budgets.division_steps))
            throw InvariantViolation("trace subtraction is not in the ideal");
        acc -= st.subtracted;
    }
    if (acc != trace.result) throw InvariantViolation("trace does not telescope to its result");
}

DiffOp reduce_step(const DiffOp& P, const DiffOp& improving, const std::vector<VForm>& forms,
                   size_t i0, const FanCell& cell, const IdealPresentation& pres,
                   const Budgets& budgets, ReductionTrace* trace) {
    const RingSignature sig = cell.basis.sig;
    require_plain(P, sig, "reduce_step");
    require_plain(improving, sig, "reduce_step");
    if (forms.empty() || i0 >= forms.size())
        throw InvariantViolation("reduce_step: target index out of range");
    for (const VForm& L : forms) require_on_closure(cell, L);

    Ord op = l_order(P, forms[i0]);
    if (!op) throw InvariantViolation("reduce_step: nothing to reduce at the target form");
    if (!ord_lt(l_order(improving, forms[i0]), op))
        throw InvariantViolation("reduce_step: certificate does not improve the target order");
    require_same_class(P, improving, pres, budgets, "reduce_step");

    ExchangePass pass = exchange_pass(P, improving, forms[i0], cell, budgets);

    std::vector<Ord> before = profile(P, forms);
    std::vector<Ord> after = profile(pass.next, forms);
    if (!ord_lt(after[i0], before[i0]))
        throw InvariantViolation("exchange failed to lower the target order");
    for (size_t i = 0; i < forms.size(); ++i)
        if (i != i0 && !ord_le(after[i], before[i]))
            throw InvariantViolation("exchange raised a protected order");

    record(trace, P, pass.top_plain, forms, std::move(before), std::move(after), pass.next);
    return pass.next;
}

DiffOp intersection_witness(const std::vector<DiffOp>& certs, const FanCell& cell,
                            const WeightVector& w, const IdealPresentation& pres,
                            const Budgets& budgets, ReductionTrace* trace) {
    const RingSignature sig = cell.basis.sig;
    std::vector<VForm> forms = cell_closure_forms(cell);
    if (certs.size() != forms.size())
        throw InvariantViolation("one certificate per closure form is required");
    require_weights(w, sig);

    std::vector<Rational> targets;
    for (size_t i = 0; i < forms.size(); ++i) {
        require_plain(certs[i], sig, "intersection_witness");
        targets.push_back(weight_value(forms[i], w));
        if (!at_most(l_order(certs[i], forms[i]), targets[i]))
            throw InvariantViolation("certificate misses its own target");
    }
    for (size_t i = 1; i < certs.size(); ++i)
        require_same_class(certs[i], certs[0], pres, budgets, "intersection_witness");

    DiffOp T = certs[0];
    if (trace && !trace->started) {
        trace->initial = T;
        trace->result = T;
        trace->started = true;
    }
    for (size_t i = 0; i < forms.size(); ++i) {
        long guard = 0;
        while (!at_most(l_order(T, forms[i]), targets[i])) {
            if (++guard > budgets.pair_budget)
                throw BudgetExhausted("intersection loop exceeded its budget");
            T = reduce_step(T, certs[i], forms, i, cell, pres, budgets, trace);
        }
    }
    if (!sigma_vw_membership(T, cell, w))
        throw InvariantViolation("intersection result escaped the slab");
    return T;
}

long kappa_sigma(const FanCell& cell, int side) {
    if (cell.dim != 2)
        throw InvariantViolation("comparison constants price 2-dimensional cells");
    if (side != 1 && side != 2) throw InvariantViolation("side selects an axis form");
    const RingSignature sig = cell.basis.sig;
    std::vector<VForm> forms = cell_closure_forms(cell);
    const VForm& far = (side == 1) ? forms[1] : forms[0];
    VForm ax = VForm::axis(sig, side);
    long best = 0;
    for (const DiffOp& Q : cell.basis.elements) {
        Rational gap = *l_order(Q, ax) - *l_order(l_symbol(Q, far), ax);
        if (gap.get_den() != 1 || sign(gap) < 0)
            throw InvariantViolation("comparison gap must be a nonnegative integer");
        best = std::max(best, gap.get_num().get_si());
    }
    return best;
}

long kappa_global(const VGroebnerFan& fan, int side) {
    if (fan.sig.p == 1) return 0;
    long best = 0;
    for (const FanCell& c : fan.cells)
        if (c.dim == 2) best = std::max(best, kappa_sigma(c, side));
    return best;
}

DiffOp controlled_reduce(const DiffOp& P, const DiffOp& cert_high, const FanCell& cell,
                         const WeightVector& w, const IdealPresentation& pres,
                         const Budgets& budgets, ReductionTrace* trace) {
    if (cell.dim != 2)
        throw InvariantViolation("controlled reduction runs on 2-dimensional cells");
    const RingSignature sig = cell.basis.sig;
    require_plain(P, sig, "controlled_reduce");
    require_plain(cert_high, sig, "controlled_reduce");
    require_weights(w, sig);

    std::vector<VForm> forms = cell_closure_forms(cell);
    const VForm &lo = forms[0], &hi = forms[1];
    Rational t_lo = weight_value(lo, w), t_hi = weight_value(hi, w);
    if (!at_most(l_order(P, lo), t_lo))
        throw InvariantViolation("representative enters above the low target");
    if (!at_most(l_order(cert_high, hi), t_hi))
        throw InvariantViolation("high certificate misses its target");
    require_same_class(P, cert_high, pres, budgets, "controlled_reduce");

    const long kappa = kappa_sigma(cell, 1);
    VForm ax1 = VForm::axis(sig, 1);
    Rational cap = w[0] + Rational(kappa);
    {
        Ord o1 = l_order(P, ax1);
        if (o1 && *o1 > cap) cap = *o1;
    }

    DiffOp T = P;
    if (trace && !trace->started) {
        trace->initial = T;
        trace->result = T;
        trace->started = true;
    }
    long guard = 0;
    while (!at_most(l_order(T, hi), t_hi)) {
        if (++guard > budgets.pair_budget)
            throw BudgetExhausted("controlled reduction exceeded its budget");

        ExchangePass pass = exchange_pass(T, cert_high, hi, cell, budgets);

        // the comparison constant must bound the layer on the first axis,
        // both absolutely and against its own far symbol
        Ord layer1 = l_order(pass.top_hom, ax1);
        if (!at_most(layer1, w[0] + Rational(kappa)))
            throw InvariantViolation("subtracted layer exceeds the comparison bound");
        Ord sym1 = l_order(l_symbol(pass.top_hom, hi), ax1);
        if (!layer1 || !sym1 || *layer1 - *sym1 > Rational(kappa))
            throw InvariantViolation("subtracted layer drifts past the comparison constant");

        // cross ranking: the carrier that owns the leading exponent of the
        // layer must dominate the carrier with the largest first-axis order
        ExponentVector lead = leading_exponent(pass.top_hom, pass.div_ord);
        long j1 = -1, j2 = -1;
        Ord best2;
        for (size_t j : pass.carriers) {
            const DiffOp& qj = pass.quotients[j];
            if (j1 < 0 && leading_exponent(qj, pass.div_ord) + cell.basis.marks[j] == lead)
                j1 = (long)j;
            Ord o = l_order(multiply(l_symbol(qj, hi), cell.basis.elements[j]), ax1);
            if (j2 < 0 || ord_lt(best2, o)) {
                j2 = (long)j;
                best2 = o;
            }
        }
        if (j1 >= 0) {
            auto priced = [&](long j) -> Rational {
                ExponentVector m = leading_exponent(pass.quotients[j], pass.div_ord);
                return ax1.value(m) + *l_order(l_symbol(cell.basis.elements[j], hi), ax1);
            };
            if (priced(j2) > priced(j1))
                throw InvariantViolation("cross ranking violates the comparison inequality");
        }

        std::vector<Ord> before = profile(T, forms);
        std::vector<Ord> after = profile(pass.next, forms);
        if (!ord_lt(after[1], before[1]))
            throw InvariantViolation("exchange failed to lower the high order");
        if (!ord_le(after[0], before[0]))
            throw InvariantViolation("exchange raised the low order");

        record(trace, T, pass.top_plain, forms, std::move(before), std::move(after), pass.next);
        T = pass.next;
    }

    if (!sigma_vw_membership(T, cell, w))
        throw InvariantViolation("controlled reduction escaped the slab");
    if (!at_most(l_order(T, ax1), cap))
        throw InvariantViolation("controlled reduction overshot the comparison bound");
    require_same_class(T, P, pres, budgets, "controlled_reduce");
    return T;
}

DiffOp normalize_across_fan(const std::vector<DiffOp>& certs, const WeightVector& w,
                            const IdealPresentation& pres, const Budgets& budgets,
                            ReductionTrace* trace) {
    const RingSignature sig = pres.sig;
    if (sig.p != 2) throw InvariantViolation("the fan sweep needs two auxiliary pairs");
    require_weights(w, sig);
    const std::vector<VForm>& skel = pres.fan.skeleton;
    if (certs.size() != skel.size())
        throw InvariantViolation("one certificate per skeleton form is required");
    for (size_t i = 0; i < skel.size(); ++i) {
        require_plain(certs[i], sig, "normalize_across_fan");
        if (!at_most(l_order(certs[i], skel[i]), weight_value(skel[i], w)))
            throw InvariantViolation("certificate misses its skeleton target");
    }
    for (size_t i = 1; i < certs.size(); ++i)
        require_same_class(certs[i], certs[0], pres, budgets, "normalize_across_fan");

    auto cert_at = [&](const Slope& s) -> const DiffOp& {
        for (size_t i = 0; i < skel.size(); ++i)
            if (slope_of_form(skel[i]) == s) return certs[i];
        throw InvariantViolation("no certificate covers a closure slope");
    };

    DiffOp T = cert_at(Slope::of(0));
    if (trace && !trace->started) {
        trace->initial = T;
        trace->result = T;
        trace->started = true;
    }
    for (const FanCell& c : pres.fan.cells) {
        if (c.dim != 2) continue;
        T = controlled_reduce(T, cert_at(c.interval.hi), c, w, pres, budgets, trace);
    }

    if (!at_most(l_order(T, VForm::axis(sig, 1)), w[0] + Rational(kappa_global(pres.fan, 1))))
        throw InvariantViolation("normalized representative exceeds the comparison bound");
    if (!at_most(l_order(T, VForm::axis(sig, 2)), w[1]))
        throw InvariantViolation("normalized representative misses the second axis target");
    return T;
}

} // namespace dfan
