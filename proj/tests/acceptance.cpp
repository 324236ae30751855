// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit on any
// failure. Every check is exact; runtimes are wall clock against the
// per-criterion limit.

#include "dfan/malgrange.hpp"
#include "dfan/oracle.hpp"
#include "dfan/standard_basis.hpp"
#include "dfan/vfilt.hpp"
#include "test_util.hpp"

#include <chrono>
#include <cstdio>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

using namespace dfan;
using testutil::Rng;

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::runtime_error(msg);
}

DiffOp pop(const std::string& text, RingSignature sig) {
    return parse_operator(text, sig, RingMode::Plain);
}

// ---- shared fixtures ------------------------------------------------------

struct TestIdeal {
    RingSignature sig;
    std::vector<std::string> f;
    std::vector<std::string> probes; // plain representatives to price
};

const std::map<std::string, TestIdeal>& ideals() {
    static const std::map<std::string, TestIdeal> m = {
        {"line", {{1, 1}, {"x1"}, {"1", "x1*dt1", "t1", "x1*dx1", "dx1"}}},
        {"square", {{1, 1}, {"x1^2"}, {"1", "x1*dt1", "t1"}}},
        {"crossing", {{2, 2}, {"x1", "x2"}, {"1", "t1*dt2", "x2*dt2", "t1*dt1", "x1*x2"}}},
        {"repeated", {{1, 2}, {"x1", "x1"}, {"1", "x1*dt2", "t1*dt1", "t2*dt2", "x1"}}},
    };
    return m;
}

const IdealPresentation& presentation(const std::string& name) {
    static std::map<std::string, IdealPresentation> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    const TestIdeal& t = ideals().at(name);
    std::vector<DiffOp> polys;
    for (const std::string& s : t.f) polys.push_back(pop(s, t.sig));
    return cache.emplace(name, build_presentation(PolynomialMap(t.sig, polys), Budgets{}))
        .first->second;
}

Oracle& oracle(const std::string& name) {
    static std::map<std::string, Oracle> cache;
    auto it = cache.find(name);
    if (it != cache.end()) return it->second;
    const IdealPresentation& pres = presentation(name);
    return cache.emplace(name, Oracle(pres.sig, pres.generators, SpanRing::plain, 6, true))
        .first->second;
}

bool same_class(const DiffOp& a, const DiffOp& b, const IdealPresentation& pres) {
    if (a == b) return true;
    return ideal_member(a - b, pres.saturated, Budgets{}.division_steps);
}

bool equal_basis(const MarkedBasis& a, const MarkedBasis& b) {
    if (a.size() != b.size()) return false;
    std::map<ExponentVector, const DiffOp*, Grlex0Less> ma, mb;
    for (size_t i = 0; i < a.size(); ++i) ma.emplace(a.marks[i], &a.elements[i]);
    for (size_t i = 0; i < b.size(); ++i) mb.emplace(b.marks[i], &b.elements[i]);
    auto ia = ma.begin();
    for (auto ib = mb.begin(); ib != mb.end(); ++ia, ++ib)
        if (!(ia->first == ib->first) || !(*ia->second == *ib->second)) return false;
    return true;
}

using Ord = std::optional<Rational>;

bool ord_le(const Ord& a, const Ord& b) { // nullopt is the order of zero
    if (!a) return true;
    if (!b) return false;
    return *a <= *b;
}

bool ord_lt(const Ord& a, const Ord& b) { return !ord_le(b, a); }

std::vector<WeightVector> weight_grid(int p) {
    std::vector<WeightVector> out;
    if (p == 1) {
        for (int a = -2; a <= 2; ++a) out.push_back({Rational(a)});
        return out;
    }
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) out.push_back({Rational(a), Rational(b)});
    return out;
}

// ---- criterion 1: ring axioms ---------------------------------------------

void ring_axioms() {
    Rng rng(11);
    RingSignature sig{2, 2};
    for (int i = 0; i < 200; ++i) {
        DiffOp a = rng.operator_with(sig, 3, 2, true);
        DiffOp b = rng.operator_with(sig, 3, 2, true);
        DiffOp c = rng.operator_with(sig, 3, 2, true);
        require(multiply(multiply(a, b), c) == multiply(a, multiply(b, c)), "associativity");
        require(multiply(a, b + c) == multiply(a, b) + multiply(a, c), "left distributivity");
        require(multiply(a + b, c) == multiply(a, c) + multiply(b, c), "right distributivity");
    }
    std::vector<VForm> forms = {VForm(sig, {Rational(1), Rational(0)}),
                                VForm(sig, {Rational(0), Rational(1)}),
                                VForm(sig, {Rational(1), Rational(1)}),
                                VForm(sig, {Rational(2), Rational(1)}),
                                VForm(sig, {frac(1, 2), Rational(3)})};
    for (int i = 0; i < 200; ++i) {
        DiffOp a = rng.nonzero_operator(sig, 3, 2, true);
        DiffOp b = rng.nonzero_operator(sig, 3, 2, true);
        const VForm& L = forms[i % forms.size()];
        DiffOp ab = multiply(a, b);
        require(*l_order(ab, L) == *l_order(a, L) + *l_order(b, L), "order multiplicativity");
        require(l_symbol(ab, L) == l_symbol(multiply(l_symbol(a, L), l_symbol(b, L)), L),
                "symbol multiplicativity");
    }
}

// ---- criterion 2: division contract ---------------------------------------

void division_contract() {
    Rng rng(22);
    RingSignature sig{1, 2};
    // Small per-instance budget: a random divisor tail below its own mark can
    // demand a power-series quotient, and those instances must surface as a
    // truncation report, not as runaway work.
    const long budget = 5000;
    int completed = 0;
    for (int i = 0; i < 100; ++i) {
        OrderSpec ord = OrderSpec::hom_form(rng.vform(sig, 2));
        int nd = rng.uniform(1, 3);
        std::vector<DiffOp> divisors;
        std::vector<ExponentVector> marks;
        // Degree-homogeneous instances: every part of the division then sits
        // in the dividend's degree layer, where the order is weight-led and
        // the weight maximum formula below is exact.
        for (int j = 0; j < nd; ++j) {
            divisors.push_back(homogenize(rng.nonzero_operator(sig, 2, 2, false)));
            marks.push_back(leading_exponent(divisors.back(), ord));
        }
        DiffOp P = homogenize(rng.operator_with(sig, 3, 2, false));
        DivisionResult d = divide(P, divisors, marks, ord, budget);

        DiffOp acc = d.remainder + d.tail;
        for (int j = 0; j < nd; ++j) acc += multiply(d.quotients[j], divisors[j]);
        require(acc == P, "reconstruction");

        PartitionSpec part{marks};
        for (const auto& [e, cf] : d.remainder.terms())
            require(part.route(e) == -1, "remainder stays off the marked region");
        for (int j = 0; j < nd; ++j)
            for (const auto& [e, cf] : d.quotients[j].terms())
                require(part.route(e + marks[j]) == j, "quotient term routed to its region");

        DivisionResult again = divide(P, divisors, marks, ord, budget);
        require(again.quotients == d.quotients && again.remainder == d.remainder &&
                    again.tail == d.tail && again.truncated == d.truncated,
                "re-division reproduces the result");

        if (d.truncated) continue;
        ++completed;
        require(d.tail.is_zero(), "completed division leaves no tail");

        DivisionResult rem = divide(d.remainder, divisors, marks, ord, budget);
        require(rem.remainder == d.remainder, "remainder is division-stable");
        for (const DiffOp& q : rem.quotients) require(q.is_zero(), "remainder needs no quotient");

        if (P.is_zero()) continue;
        std::vector<DiffOp> pieces;
        for (int j = 0; j < nd; ++j)
            if (!d.quotients[j].is_zero()) pieces.push_back(multiply(d.quotients[j], divisors[j]));
        if (!d.remainder.is_zero()) pieces.push_back(d.remainder);

        // Parts carry distinct leading exponents, so the dividend's leading
        // exponent and its weight order are both attained at a part and
        // never exceeded.
        ExponentVector lead = leading_exponent(P, ord);
        bool exp_attained = false;
        for (const DiffOp& piece : pieces) {
            ExponentVector e = leading_exponent(piece, ord);
            require(!ord.less(lead, e), "no part overshoots the leading exponent");
            if (e == lead) exp_attained = true;
        }
        require(exp_attained, "leading exponent attained at a part");

        const LinearForm& L = ord.L();
        Rational w = *l_order(P, L);
        bool w_attained = false;
        for (const DiffOp& piece : pieces) {
            Rational v = *l_order(piece, L);
            require(v <= w, "no part overshoots the weight order");
            if (v == w) w_attained = true;
        }
        require(w_attained, "weight order attained at a part");
    }
    require(completed >= 60, "most random divisions complete inside the budget");
}

// ---- criterion 3: standard bases ------------------------------------------

// Windowed span of the basis elements, echelonized under the basis order:
// every pivot must sit on the staircase, and every staircase exponent whose
// witnessing multiple fits in the window must be a pivot.
void staircase_agreement(const MarkedBasis& b, int bound) {
    struct OrdLess {
        const OrderSpec* ord;
        bool operator()(const ExponentVector& x, const ExponentVector& y) const {
            return ord->less(x, y);
        }
    };
    const OrderSpec& ord = b.order;
    std::map<ExponentVector, DiffOp, OrdLess> rows(OrdLess{&ord});
    auto insert = [&](DiffOp v) {
        while (!v.is_zero()) {
            ExponentVector le = leading_exponent(v, ord);
            auto it = rows.find(le);
            if (it == rows.end()) {
                Rational inv = Rational(1) / v.terms().find(le)->second;
                rows.emplace(le, v * inv);
                return;
            }
            v -= it->second * v.terms().find(le)->second;
        }
    };

    DegreeWindow window{b.sig, bound, SpanRing::homogenized};
    std::vector<int> maxdeg(b.size(), 0);
    for (size_t i = 0; i < b.size(); ++i)
        for (const auto& [e, c] : b.elements[i].terms())
            maxdeg[i] = std::max(maxdeg[i], e.total_degree());
    std::vector<ExponentVector> monos = window.monomials();
    for (size_t i = 0; i < b.size(); ++i)
        for (const ExponentVector& m : monos) {
            if (m.total_degree() + maxdeg[i] > bound) continue;
            insert(multiply(DiffOp::monomial(b.sig, m, 1), b.elements[i]));
        }

    Staircase st = b.staircase();
    for (const auto& [piv, row] : rows)
        require(st.contains(piv), "span pivot escapes the staircase");
    for (const ExponentVector& e : monos) {
        bool reachable = false;
        for (size_t i = 0; i < b.size() && !reachable; ++i)
            reachable = b.marks[i].divides(e) &&
                        (e - b.marks[i]).total_degree() + maxdeg[i] <= bound;
        if (reachable) require(rows.count(e) > 0, "staircase exponent missing from the span");
    }
}

void standard_bases() {
    Budgets budgets;
    for (const char* name : {"crossing", "repeated", "square"}) {
        const IdealPresentation& pres = presentation(name);
        const MarkedBasis& b = pres.saturated;

        for (size_t i = 0; i < b.size(); ++i)
            for (size_t j = i + 1; j < b.size(); ++j)
                require(normal_form(s_pair(b.elements[i], b.marks[i], b.elements[j], b.marks[j]),
                                    b, budgets.division_steps)
                            .is_zero(),
                        "s-pair reduces to zero");

        std::vector<DiffOp> shuffled(pres.generators.rbegin(), pres.generators.rend());
        require(equal_basis(saturated_basis(pres.sig, shuffled, b.order, budgets), b),
                "basis invariant under generator permutation");

        std::vector<DiffOp> padded = pres.generators;
        padded.push_back(multiply_plain(pop("t1", pres.sig), pres.generators[0]));
        if (pres.generators.size() > 1)
            padded.push_back(pres.generators[0] + pres.generators[1]);
        require(equal_basis(saturated_basis(pres.sig, padded, b.order, budgets), b),
                "basis invariant under redundancy injection");

        staircase_agreement(b, 6);
    }
}

// ---- criterion 4: fan structure -------------------------------------------

// Strictly interior witnesses for a sector.  A sector's closed boundary
// rays carry the inward limit class, and completing exactly at an axis
// form can degenerate ties and move a mark; the closure checks below
// cover the rays with the approach order instead.
std::vector<Slope> cell_witness_slopes(const SlopeInterval& iv) {
    if (iv.is_point()) return {iv.lo};
    std::vector<Slope> out;
    if (iv.hi.inf) {
        out.push_back(Slope::of(iv.lo.v + frac(1, 2)));
        out.push_back(Slope::of(iv.lo.v + 1));
        out.push_back(Slope::of(iv.lo.v + 2));
    } else {
        Rational span = iv.hi.v - iv.lo.v;
        out.push_back(Slope::of(iv.lo.v + span / 4));
        out.push_back(Slope::of(iv.lo.v + span / 2));
        out.push_back(Slope::of(iv.lo.v + 3 * span / 4));
    }
    return out;
}

void fan_structure() {
    Budgets budgets;
    const IdealPresentation& nc = presentation("crossing");
    require(nc.fan.cells.size() == 1, "crossing fan has one cell");
    const FanCell& whole = nc.fan.cells[0];
    require(whole.dim == 2 && whole.interval.lo == Slope::of(0) && whole.interval.hi.inf &&
                whole.interval.lo_closed && whole.interval.hi_closed,
            "crossing cell is the closed whole ray space");
    require(nc.fan.skeleton.size() == 2 && nc.fan.skeleton[0] == VForm::axis(nc.sig, 1) &&
                nc.fan.skeleton[1] == VForm::axis(nc.sig, 2),
            "crossing skeleton is the two axes");

    const IdealPresentation& xx = presentation("repeated");
    require(xx.fan.cells.size() == 3, "repeated fan has three cells");
    require(xx.fan.cells[1].dim == 1 && xx.fan.cells[1].interval.is_point() &&
                xx.fan.cells[1].interval.lo == Slope::of(1),
            "repeated fan walls at slope one");
    require(!equal_basis(xx.fan.cells[0].basis, xx.fan.cells[2].basis),
            "wall separates distinct bases");
    struct Probe {
        Rational slope;
        int cell;
    };
    for (const Probe& pr : {Probe{frac(1, 2), 0}, Probe{Rational(1), 1}, Probe{Rational(2), 2}}) {
        VForm W = form_of_slope(xx.sig, Slope::of(pr.slope));
        MarkedBasis fresh =
            saturated_basis(xx.sig, xx.generators, OrderSpec::hom_form(W), budgets);
        require(equal_basis(fresh, xx.fan.cells[pr.cell].basis),
                "independent completion confirms the cell basis");
    }

    for (const char* name : {"crossing", "repeated"}) {
        const IdealPresentation& pres = presentation(name);
        for (const FanCell& cell : pres.fan.cells) {
            for (const Slope& s : cell_witness_slopes(cell.interval)) {
                VForm W = form_of_slope(pres.sig, s);
                MarkedBasis fresh =
                    saturated_basis(pres.sig, pres.generators, OrderSpec::hom_form(W), budgets);
                require(equal_basis(fresh, cell.basis), "basis stable across the cell");
            }
            for (const VForm& L : cell_closure_forms(cell))
                require(closure_agreement_check(cell, L),
                        "closure form agrees with the approach order");
        }
    }

    for (const char* name : {"line", "square"}) {
        const VGroebnerFan& fan = presentation(name).fan;
        require(fan.cells.size() == 1 && fan.cells[0].dim == 1, "one ray cell when p = 1");
    }
}

// ---- criterion 5: exchange step contract ----------------------------------

void exchange_contract() {
    struct Instance {
        const char* ideal;
        int cell;
        const char* rep;
        const char* cert;
        const char* expect; // nullptr: no frozen result
    };
    const Instance instances[] = {
        {"line", 0, "x1*dt1", "t1*dt1 + 1", "t1*dt1 + 1"},
        {"line", 0, "t1*dt1 + x1*dx1 + 1 + t1", "t1", "t1"},
        {"crossing", 0, "x2*dt2", "t2*dt2 + 1", "t2*dt2 + 1"},
        {"repeated", 0, "x1*dt2", "t1*dt2", "t1*dt2"},
        {"repeated", 2, "t1*dt2", "t2*dt2 + 1", "t2*dt2 + 1"},
    };
    Budgets budgets;
    for (const Instance& ins : instances) {
        const IdealPresentation& pres = presentation(ins.ideal);
        const FanCell& cell = pres.fan.cells[ins.cell];
        std::vector<VForm> forms = cell_closure_forms(cell);
        DiffOp P = pop(ins.rep, pres.sig);
        DiffOp cert = pop(ins.cert, pres.sig);
        size_t i0 = forms.size();
        for (size_t i = 0; i < forms.size(); ++i)
            if (ord_lt(l_order(cert, forms[i]), l_order(P, forms[i]))) {
                i0 = i;
                break;
            }
        require(i0 < forms.size(), "certificate improves some closure form");

        ReductionTrace trace;
        DiffOp next = reduce_step(P, cert, forms, i0, cell, pres, budgets, &trace);
        require(trace.steps.size() == 1, "one recorded exchange");
        const ReductionStep& st = trace.steps[0];
        require(ord_lt(st.after[i0], st.before[i0]), "target order strictly drops");
        for (size_t j = 0; j < forms.size(); ++j)
            require(ord_le(st.after[j], st.before[j]), "no protected order rises");
        require(P - st.subtracted == next, "subtraction telescopes");
        require(oracle(ins.ideal).member(st.subtracted).yes,
                "subtracted element is certified in the ideal");
        require(ord_lt(l_order(next, forms[i0]), l_order(P, forms[i0])),
                "result drops the target order");
        if (ins.expect) require(next == pop(ins.expect, pres.sig), "frozen exchange result");
    }
}

// ---- criterion 6: slab intersection witness --------------------------------

void intersection_criterion() {
    Budgets budgets;
    for (const char* name : {"line", "crossing", "repeated"}) {
        const IdealPresentation& pres = presentation(name);
        Oracle& orc = oracle(name);
        for (const WeightVector& w : weight_grid(pres.sig.p)) {
            for (const std::string& rep : ideals().at(name).probes) {
                DiffOp P = pop(rep, pres.sig);
                for (const FanCell& cell : pres.fan.cells) {
                    std::vector<VForm> forms = cell_closure_forms(cell);
                    std::vector<OracleAnswer> answers;
                    bool all = true;
                    for (const VForm& L : forms) {
                        answers.push_back(orc.vfilt_member(P, L, weight_value(L, w)));
                        all = all && answers.back().yes;
                    }
                    if (sigma_vw_membership(P, cell, w))
                        require(all, "certified slab member passes every level query");
                    if (!all) continue;
                    std::vector<DiffOp> certs;
                    for (const OracleAnswer& a : answers) certs.push_back(a.witness);
                    DiffOp T = intersection_witness(certs, cell, w, pres, budgets);
                    require(sigma_vw_membership(T, cell, w), "witness lands in the slab");
                    require(same_class(T, P, pres), "witness stays in the class");
                }
            }
        }
    }
}

// ---- criterion 7: comparison constants and fan sweep -----------------------

void comparison_criterion() {
    Budgets budgets;
    require(kappa_global(presentation("crossing").fan, 1) == 0, "crossing constant is zero");
    require(kappa_global(presentation("repeated").fan, 1) == 1, "repeated constant is one");
    // claims (a), (b), (c) behind the bound are asserted inside every
    // controlled pass; driving the sweep here exercises them on each step
    for (const char* name : {"crossing", "repeated"}) {
        const IdealPresentation& pres = presentation(name);
        Oracle& orc = oracle(name);
        long k1 = kappa_global(pres.fan, 1);
        for (const WeightVector& w : weight_grid(2)) {
            for (const std::string& rep : ideals().at(name).probes) {
                DiffOp P = pop(rep, pres.sig);
                VbarAnswer va = orc.vbar_member(P, pres.fan.skeleton, w);
                if (!va.yes) continue;
                std::vector<DiffOp> certs;
                for (const OracleAnswer& a : va.per_form) certs.push_back(a.witness);
                DiffOp T = normalize_across_fan(certs, w, pres, budgets);
                require(ord_le(l_order(T, VForm::axis(pres.sig, 1)), w[0] + Rational(k1)),
                        "first axis meets the shifted target");
                require(ord_le(l_order(T, VForm::axis(pres.sig, 2)), w[1]),
                        "second axis meets its target");
                require(same_class(T, P, pres), "normalized representative stays in the class");
            }
        }
    }
}

// ---- criterion 8: cli determinism and round-trip ---------------------------

std::string run_cli(const std::string& args, int& rc) {
    std::string cmd = std::string(DFAN_BIN) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    require(pipe != nullptr, "popen");
    std::string out;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, got);
    int status = pclose(pipe);
    rc = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return out;
}

void cli_determinism() {
    const std::string data = DFAN_DATA;
    const std::vector<std::string> cmds = {
        "fan " + data + "/normal_crossing.dfan --json",
        "fan " + data + "/xx.dfan --json",
        "fan " + data + "/x.dfan",
        "fan " + data + "/raw_commutator.dfan --json",
        "kappa " + data + "/xx.dfan --json",
        "kappa " + data + "/normal_crossing.dfan",
        "gb --order V:1,1 " + data + "/xx.dfan",
        "gb " + data + "/xsquare.dfan --json",
        "divide " + data + "/x.dfan x1*dx1*dt1 --json",
        "reduce --w=0 " + data + "/x.dfan x1*dt1 --certs " + data + "/x_reduce_certs.ops --json",
        "normalize --w=0,0 " + data + "/xx.dfan x1*dt2 --certs " + data + "/xx_certs.ops --json",
        "oracle member " + data + "/x.dfan t1-x1 --json",
        "oracle vbar " + data + "/xx.dfan x1*dt2 --w=0,0 --json",
    };
    for (const std::string& c : cmds) {
        int rc1 = 0, rc2 = 0;
        std::string first = run_cli(c, rc1);
        std::string second = run_cli(c, rc2);
        require(rc1 == 0 && rc2 == 0, "pipeline run succeeds: " + c);
        require(!first.empty() && first == second, "byte-identical reruns: " + c);
    }

    Rng rng(88);
    for (int i = 0; i < 100; ++i) {
        RingSignature sig = (i % 2 == 0) ? RingSignature{2, 2} : RingSignature{1, 1};
        DiffOp P = rng.operator_with(sig, 4, 2, true);
        require(parse_operator(print_operator(P), sig, RingMode::Homogenized) == P,
                "print then parse reproduces the operator");
    }
}

// ---- driver ----------------------------------------------------------------

struct Criterion {
    const char* name;
    double limit_s;
    std::function<void()> run;
};

} // namespace

int main() {
    const Criterion criteria[] = {
        {"ring axioms", 30, ring_axioms},
        {"division contract", 60, division_contract},
        {"standard bases", 120, standard_bases},
        {"fan structure", 120, fan_structure},
        {"exchange step contract", 60, exchange_contract},
        {"slab intersection witness", 300, intersection_criterion},
        {"comparison constants and fan sweep", 300, comparison_criterion},
        {"cli determinism and round-trip", 30, cli_determinism},
    };
    int failures = 0;
    int idx = 0;
    for (const Criterion& c : criteria) {
        ++idx;
        auto t0 = std::chrono::steady_clock::now();
        std::string error;
        try {
            c.run();
        } catch (const std::exception& e) {
            error = e.what();
        }
        double dt = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (error.empty() && dt > c.limit_s) error = "over the time limit";
        if (error.empty()) {
            std::printf("PASS %d %s (%.2fs, limit %.0fs)\n", idx, c.name, dt, c.limit_s);
        } else {
            std::printf("FAIL %d %s: %s (%.2fs, limit %.0fs)\n", idx, c.name, error.c_str(), dt,
                        c.limit_s);
            ++failures;
        }
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
