#include "dfan/vfan.hpp"

#include "dfan/errors.hpp"

#include <algorithm>
#include <map>

namespace dfan {

std::string Slope::to_string() const { return inf ? "inf" : dfan::to_string(v); }

bool SlopeInterval::contains(const Slope& s) const {
    if (s < lo || hi < s) return false;
    if (s == lo && !lo_closed) return false;
    if (s == hi && !hi_closed) return false;
    return true;
}

std::string SlopeInterval::to_string() const {
    std::string out = lo_closed ? "[" : "(";
    out += lo.to_string() + ", " + hi.to_string();
    out += hi_closed ? "]" : ")";
    return out;
}

VForm form_of_slope(RingSignature sig, const Slope& s) {
    if (sig.p != 2) throw InvariantViolation("slopes parameterize two-form families");
    if (s.inf) return VForm(sig, {Rational(0), Rational(1)});
    if (sign(s.v) < 0) throw InvariantViolation("negative slope");
    Rational r = s.v;
    r.canonicalize();
    return VForm(sig, {Rational(r.get_den()), Rational(r.get_num())});
}

Slope slope_of_form(const VForm& L) {
    if (L.sig.p != 2) throw InvariantViolation("slopes parameterize two-form families");
    const Rational &l1 = L.l[0], &l2 = L.l[1];
    if (sign(l1) == 0 && sign(l2) == 0) throw InvariantViolation("the zero form has no slope");
    if (sign(l1) == 0) return Slope::infinity();
    return Slope::of(l2 / l1);
}

SlopeInterval cone_of_basis(const MarkedBasis& b) {
    if (b.sig.p == 1) return {Slope::of(0), Slope::of(0), true, true};
    if (b.sig.p != 2) throw InvariantViolation("cones are computed for two auxiliary pairs");
    SlopeInterval I{Slope::of(0), Slope::infinity(), true, true};
    auto cap_hi = [&I](const Slope& s) {
        if (s < I.hi) I.hi = s;
    };
    auto cap_lo = [&I](const Slope& s) {
        if (I.lo < s) I.lo = s;
    };
    for (size_t j = 0; j < b.size(); ++j) {
        const ExponentVector& e = b.marks[j];
        for (const auto& [m, c] : b.elements[j].terms()) {
            if (m == e) continue;
            if (m.h_degree() > e.h_degree())
                throw InvariantViolation("mark is not maximal in its degree");
            if (m.h_degree() < e.h_degree()) continue;
            // weight difference of mark against tail, per pair
            int d1 = (e.nu(0) - e.mu(0)) - (m.nu(0) - m.mu(0));
            int d2 = (e.nu(1) - e.mu(1)) - (m.nu(1) - m.mu(1));
            if (d1 >= 0 && d2 >= 0) continue; // never competes
            if (d1 > 0 && d2 < 0)
                cap_hi(Slope::of(frac(d1, -d2)));
            else if (d1 < 0 && d2 > 0)
                cap_lo(Slope::of(frac(-d1, d2)));
            else if (d1 == 0)
                cap_hi(Slope::of(0)); // tail wins for any positive l2
            else if (d2 == 0)
                cap_lo(Slope::infinity()); // tail wins for any positive l1
            else
                throw InvariantViolation("tail dominates its mark on the whole quadrant");
        }
    }
    if (I.hi < I.lo) throw InvariantViolation("empty mark-stability cone");
    return I;
}

namespace {

std::map<ExponentVector, const DiffOp*, Grlex0Less> by_mark(const MarkedBasis& b) {
    std::map<ExponentVector, const DiffOp*, Grlex0Less> out;
    for (size_t j = 0; j < b.size(); ++j) out.emplace(b.marks[j], &b.elements[j]);
    return out;
}

bool bases_match(const MarkedBasis& a, const MarkedBasis& b) {
    if (a.size() != b.size()) return false;
    auto ma = by_mark(a), mb = by_mark(b);
    auto ita = ma.begin();
    auto itb = mb.begin();
    for (; ita != ma.end(); ++ita, ++itb) {
        if (!(ita->first == itb->first)) return false;
        if (!(*ita->second == *itb->second)) return false;
    }
    return true;
}

struct Sector {
    SlopeInterval cone;
    VForm witness;
    MarkedBasis basis;
    bool lo_closed = false;
};

} // namespace

VGroebnerFan traverse_fan(RingSignature sig, const std::vector<DiffOp>& seed,
                          const Budgets& budgets) {
    sig.validate();
    if (seed.empty()) throw InvariantViolation("fan sweep needs generators");
    for (const auto& g : seed) {
        require_same(sig, g.sig());
        if (g.is_zero()) throw InvariantViolation("zero generator");
        if (!g.is_homogeneous()) throw InvariantViolation("fan seed must be homogeneous");
    }

    auto reduced = [&](const OrderSpec& ord, const std::string& where) -> MarkedBasis {
        try {
            return minimal_reduce(buchberger(sig, seed, ord, budgets), budgets);
        } catch (const BudgetExhausted& e) {
            throw BudgetExhausted(std::string("fan sweep ran out of budget at ") + where + ": " +
                                  e.what());
        }
    };

    if (sig.p == 1) {
        VForm V1(sig, {Rational(1)});
        MarkedBasis b = reduced(OrderSpec::hom_form(V1), "the single ray");
        VGroebnerFan fan{sig, {}, {V1}};
        fan.cells.push_back({{Slope::of(0), Slope::of(0), true, true}, 1, V1, std::move(b)});
        return fan;
    }
    if (sig.p != 2) throw InvariantViolation("fan sweep is implemented for two auxiliary pairs");

    const VForm V1 = VForm::axis(sig, 1), V2 = VForm::axis(sig, 2);
    VGroebnerFan fan{sig, {}, {}};

    // verified sector from a basis predicted to hold just past `from`
    auto make_sector = [&](MarkedBasis pred, const Slope& from) -> Sector {
        SlopeInterval cone = cone_of_basis(pred);
        if (cone.lo != from || cone.is_point())
            throw InvariantViolation("predicted cone does not open past slope " +
                                     from.to_string());
        Slope w = cone.hi.inf ? Slope::of(cone.lo.v + 1) : Slope::of((cone.lo.v + cone.hi.v) / 2);
        VForm W = form_of_slope(sig, w);
        MarkedBasis verified = reduced(OrderSpec::hom_form(W), "slope " + w.to_string());
        if (!bases_match(pred, verified))
            throw InvariantViolation("limit-order prediction failed past slope " +
                                     from.to_string());
        return {cone, W, std::move(verified), false};
    };

    // Boundary rays carry the class of their inward limit order, so the first
    // sector is closed at 0 and the last one at infinity; interior walls get
    // their own ray cell exactly when their basis matches neither neighbor.
    Sector cur = make_sector(reduced(OrderSpec::cone_limit(V1, V2), "the limit into slope 0"),
                             Slope::of(0));
    cur.lo_closed = true;

    for (int guard = 0;; ++guard) {
        if (guard > 4096) throw InvariantViolation("fan sweep failed to terminate");
        if (cur.cone.hi.inf) {
            MarkedBasis rayq =
                reduced(OrderSpec::cone_limit(V2, V1), "the limit into the infinite ray");
            if (!bases_match(rayq, cur.basis))
                throw InvariantViolation("limit-order prediction failed at the infinite ray");
            fan.cells.push_back({{cur.cone.lo, Slope::infinity(), cur.lo_closed, true}, 2,
                                 cur.witness, std::move(cur.basis)});
            break;
        }
        Slope wall = cur.cone.hi;
        VForm Lw = form_of_slope(sig, wall);
        MarkedBasis wall_basis = reduced(OrderSpec::hom_form(Lw), "slope " + wall.to_string());
        Sector next = make_sector(
            reduced(OrderSpec::cone_limit(Lw, V2), "the limit past slope " + wall.to_string()),
            wall);
        bool down = bases_match(wall_basis, cur.basis);
        bool up = bases_match(wall_basis, next.basis);
        if (down && up)
            throw InvariantViolation("slope " + wall.to_string() + " fails to separate its sides");
        fan.cells.push_back(
            {{cur.cone.lo, wall, cur.lo_closed, down}, 2, cur.witness, std::move(cur.basis)});
        if (!down && !up)
            fan.cells.push_back({{wall, wall, true, true}, 1, Lw, std::move(wall_basis)});
        next.lo_closed = up;
        cur = std::move(next);
    }

    fan.skeleton = fan_skeleton(sig, fan.cells);
    return fan;
}

std::vector<VForm> fan_skeleton(RingSignature sig, const std::vector<FanCell>& cells) {
    std::vector<Slope> ss;
    for (const auto& c : cells) {
        ss.push_back(c.interval.lo);
        ss.push_back(c.interval.hi);
    }
    std::sort(ss.begin(), ss.end(), [](const Slope& a, const Slope& b) { return a < b; });
    ss.erase(std::unique(ss.begin(), ss.end()), ss.end());
    std::vector<VForm> out;
    for (const auto& s : ss) out.push_back(form_of_slope(sig, s));
    return out;
}

int cell_index_at(const VGroebnerFan& fan, const Slope& s) {
    for (size_t i = 0; i < fan.cells.size(); ++i)
        if (fan.cells[i].interval.contains(s)) return (int)i;
    return -1;
}

std::vector<VForm> cell_closure_forms(const FanCell& cell) {
    const RingSignature sig = cell.basis.sig;
    if (sig.p == 1) return {VForm::axis(sig, 1)};
    std::vector<VForm> out;
    out.push_back(form_of_slope(sig, cell.interval.lo));
    if (!cell.interval.is_point()) out.push_back(form_of_slope(sig, cell.interval.hi));
    return out;
}

bool closure_agreement_check(const FanCell& cell, const VForm& L) {
    const RingSignature sig = cell.basis.sig;
    Slope ls = slope_of_form(L);
    if (!cell.interval.closure_contains(ls))
        throw InvariantViolation("form is not on the cell closure");
    const VForm& W = cell.witness;
    bool same_ray = slope_of_form(W) == ls;
    OrderSpec approach = same_ray ? OrderSpec::hom_form(L) : OrderSpec::cone_limit(L, W);
    std::vector<OrderSpec> samples;
    for (const Rational& c : {Rational(1), frac(1, 2), frac(1, 4)}) {
        std::vector<Rational> l(2);
        for (int j = 0; j < 2; ++j) l[j] = L.l[j] * (Rational(1) - c) + W.l[j] * c;
        samples.push_back(OrderSpec::hom_form(VForm(sig, std::move(l))));
    }
    for (size_t j = 0; j < cell.basis.size(); ++j) {
        const DiffOp& Q = cell.basis.elements[j];
        const ExponentVector& mark = cell.basis.marks[j];
        if (!(leading_exponent(Q, approach) == mark)) return false;
        for (const auto& so : samples)
            if (!(leading_exponent(Q, so) == mark)) return false;
        // the weight order of the element is attained at its mark
        if (*l_order(Q, L) != L.value(mark)) return false;
    }
    return true;
}

} // namespace dfan
