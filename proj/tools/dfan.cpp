#include "dfan/io.hpp"
#include "dfan/json_report.hpp"
#include "dfan/malgrange.hpp"
#include "dfan/oracle.hpp"
#include "dfan/standard_basis.hpp"
#include "dfan/vfilt.hpp"

#include "CLI11.hpp"

#include <cctype>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

using namespace dfan;

namespace {

struct CliState {
    SessionConfig session;
    bool json = false;
    bool serial_oracle = false;

    std::string input;
    std::string order_text;  // gb, divide
    std::string form_text;   // oracle vfilt
    std::string k_text;      // oracle vfilt threshold
    std::string w_text;      // reduce, normalize, oracle vbar
    std::string certs_path;  // reduce, normalize
    std::string op_text;
    int cell_index = 0;
};

Rational rational_token(std::string tok, const char* what) {
    auto digits = [](const std::string& s) {
        if (s.empty()) return false;
        size_t i = (s[0] == '+' || s[0] == '-') ? 1 : 0;
        if (i == s.size()) return false;
        for (; i < s.size(); ++i)
            if (!std::isdigit((unsigned char)s[i])) return false;
        return true;
    };
    size_t slash = tok.find('/');
    std::string num = slash == std::string::npos ? tok : tok.substr(0, slash);
    std::string den = slash == std::string::npos ? "1" : tok.substr(slash + 1);
    if (!digits(num) || !digits(den))
        throw ParseError(std::string(what) + ": bad rational '" + tok + "'", 1, 1);
    mpz_class d(den);
    if (d == 0) throw ParseError(std::string(what) + ": zero denominator", 1, 1);
    Rational q(mpz_class(num), d);
    q.canonicalize();
    return q;
}

std::vector<Rational> csv_rationals(const std::string& text, const char* what) {
    std::vector<Rational> out;
    size_t start = 0;
    while (true) {
        size_t comma = text.find(',', start);
        std::string tok = text.substr(start, comma == std::string::npos ? comma : comma - start);
        while (!tok.empty() && tok.front() == ' ') tok.erase(tok.begin());
        while (!tok.empty() && tok.back() == ' ') tok.pop_back();
        out.push_back(rational_token(tok, what));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return out;
}

// "V:1,0" with one nonnegative multiplier per auxiliary pair; empty text
// falls back to the all-ones form.
VForm vform_from_text(const std::string& text, RingSignature sig, const char* what) {
    if (text.empty()) return VForm(sig, std::vector<Rational>(sig.p, Rational(1)));
    if (text.rfind("V:", 0) != 0)
        throw ParseError(std::string(what) + ": weight form must look like V:1,0", 1, 1);
    std::vector<Rational> l = csv_rationals(text.substr(2), what);
    if ((int)l.size() != sig.p)
        throw ParseError(std::string(what) + ": expected " + std::to_string(sig.p) +
                             " multipliers, got " + std::to_string(l.size()),
                         1, 1);
    for (const Rational& c : l)
        if (sign(c) < 0)
            throw ParseError(std::string(what) + ": multipliers must be nonnegative", 1, 1);
    return VForm(sig, l);
}

WeightVector weights_from_text(const std::string& text, RingSignature sig) {
    WeightVector w = csv_rationals(text, "--w");
    if ((int)w.size() != sig.p)
        throw ParseError("--w: expected " + std::to_string(sig.p) + " weights, got " +
                             std::to_string(w.size()),
                         1, 1);
    return w;
}

// One plain operator per nonblank line; # starts a comment line.
std::vector<DiffOp> read_certificates(const std::string& path, RingSignature sig) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open certificate file " + path, 1, 1);
    std::vector<DiffOp> certs;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        size_t at = line.find_first_not_of(" \t\r");
        if (at == std::string::npos || line[at] == '#') continue;
        certs.push_back(parse_operator(line, sig, RingMode::Plain, lineno));
    }
    if (certs.empty()) throw ParseError("certificate file " + path + " holds no operators", 1, 1);
    return certs;
}

std::vector<DiffOp> problem_generators(const InputProblem& prob) {
    if (prob.raw) return prob.raw_gens;
    PolynomialMap f(prob.sig, prob.f);
    return annihilator_generators(f);
}

Json json_header(const CliState& c, const std::string& cmd, RingSignature sig) {
    Json j;
    j["schema"] = 1;
    j["command"] = cmd;
    j["seed"] = c.session.seed;
    j["n"] = sig.n;
    j["p"] = sig.p;
    return j;
}

void text_header(const CliState& c) { std::cout << "# seed " << c.session.seed << "\n"; }

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

void print_basis_lines(const MarkedBasis& b, const char* indent) {
    for (size_t i = 0; i < b.size(); ++i)
        std::cout << indent << "G" << i + 1 << " = " << print_operator(b.elements[i]) << "  mark "
                  << print_exponent(b.marks[i]) << "\n";
}

std::string ord_text(const std::optional<Rational>& o) { return o ? to_string(*o) : "-inf"; }

void print_trace_lines(const ReductionTrace& t) {
    std::cout << "initial = " << print_operator(t.initial) << "\n";
    for (size_t s = 0; s < t.steps.size(); ++s) {
        const ReductionStep& st = t.steps[s];
        std::cout << "step " << s + 1 << " subtract " << print_operator(st.subtracted) << "\n";
        for (size_t i = 0; i < st.forms.size(); ++i)
            std::cout << "  " << st.forms[i].to_string() << " " << ord_text(st.before[i]) << " -> "
                      << ord_text(st.after[i]) << "\n";
    }
    std::cout << "result = " << print_operator(t.result) << "\n";
}

int run_gb(const CliState& c) {
    InputProblem prob = parse_input_file(c.input);
    OrderSpec ord = OrderSpec::hom_form(vform_from_text(c.order_text, prob.sig, "--order"));
    MarkedBasis b = saturated_basis(prob.sig, problem_generators(prob), ord, c.session.budgets);
    if (c.json) {
        Json j = json_header(c, "gb", prob.sig);
        j["basis"] = json_of(b);
        emit(j);
    } else {
        text_header(c);
        std::cout << "order " << ord.to_string() << "\n";
        std::cout << "elements " << b.size() << "\n";
        print_basis_lines(b, "");
    }
    return 0;
}

int run_fan(const CliState& c) {
    InputProblem prob = parse_input_file(c.input);
    IdealPresentation pres =
        build_presentation(prob.sig, problem_generators(prob), c.session.budgets);
    if (c.json) {
        Json j = json_header(c, "fan", prob.sig);
        j.update(json_of(pres.fan));
        emit(j);
    } else {
        text_header(c);
        std::cout << "cells " << pres.fan.cells.size() << "\n";
        for (size_t i = 0; i < pres.fan.cells.size(); ++i) {
            const FanCell& cell = pres.fan.cells[i];
            std::cout << "cell " << i + 1 << " " << cell.interval.to_string() << " dim "
                      << cell.dim << " witness " << cell.witness.to_string() << "\n";
            print_basis_lines(cell.basis, "  ");
        }
        std::cout << "skeleton";
        for (const VForm& L : pres.fan.skeleton) std::cout << " " << L.to_string();
        std::cout << "\n";
    }
    return 0;
}

int run_kappa(const CliState& c) {
    InputProblem prob = parse_input_file(c.input);
    IdealPresentation pres =
        build_presentation(prob.sig, problem_generators(prob), c.session.budgets);
    long k1 = kappa_global(pres.fan, 1);
    long k2 = kappa_global(pres.fan, 2);
    if (c.json) {
        Json j = json_header(c, "kappa", prob.sig);
        j["kappa1"] = k1;
        j["kappa2"] = k2;
        Json per = Json::array();
        for (const FanCell& cell : pres.fan.cells) {
            if (cell.dim != 2) continue;
            Json one;
            one["interval"] = json_of(cell.interval);
            one["kappa1"] = kappa_sigma(cell, 1);
            one["kappa2"] = kappa_sigma(cell, 2);
            per.push_back(std::move(one));
        }
        j["per_cell"] = std::move(per);
        emit(j);
    } else {
        text_header(c);
        std::cout << "kappa1 = " << k1 << "\n";
        std::cout << "kappa2 = " << k2 << "\n";
        for (const FanCell& cell : pres.fan.cells) {
            if (cell.dim != 2) continue;
            std::cout << "cell " << cell.interval.to_string() << " kappa1 = "
                      << kappa_sigma(cell, 1) << " kappa2 = " << kappa_sigma(cell, 2) << "\n";
        }
    }
    return 0;
}

int run_divide(const CliState& c) {
    InputProblem prob = parse_input_file(c.input);
    OrderSpec ord = OrderSpec::hom_form(vform_from_text(c.order_text, prob.sig, "--order"));
    MarkedBasis b = saturated_basis(prob.sig, problem_generators(prob), ord, c.session.budgets);
    DiffOp P = parse_operator(c.op_text, prob.sig, RingMode::Homogenized);
    DivisionResult d = divide(P, b.elements, b.marks, ord, c.session.budgets.division_steps);
    if (c.json) {
        Json j = json_header(c, "divide", prob.sig);
        j["order"] = ord.to_string();
        j["dividend"] = print_operator(P);
        j["basis"] = json_of(b);
        j.update(json_of(d));
        emit(j);
    } else {
        text_header(c);
        std::cout << "order " << ord.to_string() << "\n";
        std::cout << "dividend = " << print_operator(P) << "\n";
        std::cout << "steps " << d.steps << "\n";
        std::cout << "truncated " << (d.truncated ? "yes" : "no") << "\n";
        for (size_t i = 0; i < d.quotients.size(); ++i)
            std::cout << "q" << i + 1 << " = " << print_operator(d.quotients[i]) << "  by G"
                      << i + 1 << " = " << print_operator(b.elements[i]) << "\n";
        std::cout << "remainder = " << print_operator(d.remainder) << "\n";
        std::cout << "tail = " << print_operator(d.tail) << "\n";
    }
    return d.truncated ? 3 : 0;
}

void require_rewrites(const DiffOp& P, const std::vector<DiffOp>& certs,
                      const IdealPresentation& pres, const Budgets& budgets) {
    for (size_t i = 0; i < certs.size(); ++i)
        if (certs[i] != P && !ideal_member(P - certs[i], pres.saturated, budgets.division_steps))
            throw InvariantViolation("certificate " + std::to_string(i + 1) +
                                     " is not a rewrite of the representative");
}

// Drive the representative below every closure target of one cell, one
// exchange at a time; certs[i] supplies the rewrite for closure form i.
int run_reduce(const CliState& c) {
    InputProblem prob = parse_input_file(c.input);
    IdealPresentation pres =
        build_presentation(prob.sig, problem_generators(prob), c.session.budgets);
    if (c.cell_index < 0 || c.cell_index >= (int)pres.fan.cells.size())
        throw ParseError("--cell: fan has " + std::to_string(pres.fan.cells.size()) + " cells", 1,
                         1);
    const FanCell& cell = pres.fan.cells[c.cell_index];
    WeightVector w = weights_from_text(c.w_text, prob.sig);
    DiffOp P = parse_operator(c.op_text, prob.sig, RingMode::Plain);
    std::vector<DiffOp> certs = read_certificates(c.certs_path, prob.sig);
    std::vector<VForm> forms = cell_closure_forms(cell);
    if (certs.size() != forms.size())
        throw InvariantViolation("cell has " + std::to_string(forms.size()) +
                                 " closure forms, certificate file holds " +
                                 std::to_string(certs.size()));
    require_rewrites(P, certs, pres, c.session.budgets);
    std::vector<Rational> targets;
    for (const VForm& L : forms) targets.push_back(weight_value(L, w));
    for (size_t i = 0; i < forms.size(); ++i) {
        auto o = l_order(certs[i], forms[i]);
        if (o && *o > targets[i])
            throw InvariantViolation("certificate " + std::to_string(i + 1) +
                                     " misses its closure target");
    }

    ReductionTrace trace;
    DiffOp T = P;
    long passes = 0;
    for (size_t i = 0; i < forms.size(); ++i) {
        while (true) {
            auto o = l_order(T, forms[i]);
            if (!o || *o <= targets[i]) break;
            if (++passes > c.session.budgets.pair_budget)
                throw BudgetExhausted("reduction pass budget exhausted");
            T = reduce_step(T, certs[i], forms, i, cell, pres, c.session.budgets, &trace);
        }
    }
    if (!trace.started) {
        trace.initial = P;
        trace.result = T;
        trace.started = true;
    }
    if (!sigma_vw_membership(T, cell, w))
        throw InvariantViolation("reduced representative misses a closure target");
    audit_trace(trace, pres, c.session.budgets);

    if (c.json) {
        Json j = json_header(c, "reduce", prob.sig);
        j["cell"] = json_of(cell.interval);
        Json fj = Json::array();
        for (const VForm& L : forms) fj.push_back(L.to_string());
        j["forms"] = std::move(fj);
        Json tj = Json::array();
        for (const Rational& t : targets) tj.push_back(json_of(t));
        j["targets"] = std::move(tj);
        j.update(json_of(trace));
        emit(j);
    } else {
        text_header(c);
        std::cout << "cell " << cell.interval.to_string() << "\n";
        for (size_t i = 0; i < forms.size(); ++i)
            std::cout << "target " << forms[i].to_string() << " <= " << to_string(targets[i])
                      << "\n";
        print_trace_lines(trace);
    }
    return 0;
}

int run_normalize(const CliState& c) {
    InputProblem prob = parse_input_file(c.input);
    if (prob.sig.p != 2) throw ParseError("normalize needs p = 2", 1, 1);
    IdealPresentation pres =
        build_presentation(prob.sig, problem_generators(prob), c.session.budgets);
    WeightVector w = weights_from_text(c.w_text, prob.sig);
    DiffOp P = parse_operator(c.op_text, prob.sig, RingMode::Plain);
    std::vector<DiffOp> certs = read_certificates(c.certs_path, prob.sig);
    require_rewrites(P, certs, pres, c.session.budgets);

    ReductionTrace trace;
    DiffOp T = normalize_across_fan(certs, w, pres, c.session.budgets, &trace);
    if (!trace.started) {
        trace.initial = T;
        trace.result = T;
        trace.started = true;
    }
    audit_trace(trace, pres, c.session.budgets);
    long k1 = kappa_global(pres.fan, 1);

    if (c.json) {
        Json j = json_header(c, "normalize", prob.sig);
        j["kappa1"] = k1;
        j["bound1"] = json_of(w[0] + Rational(k1));
        j["bound2"] = json_of(w[1]);
        j.update(json_of(trace));
        emit(j);
    } else {
        text_header(c);
        std::cout << "kappa1 = " << k1 << "\n";
        print_trace_lines(trace);
        std::cout << "ordV1 = " << ord_text(l_order(T, VForm::axis(prob.sig, 1))) << " (bound "
                  << to_string(w[0] + Rational(k1)) << ")\n";
        std::cout << "ordV2 = " << ord_text(l_order(T, VForm::axis(prob.sig, 2))) << " (bound "
                  << to_string(w[1]) << ")\n";
    }
    return 0;
}

void print_oracle_answer(const char* what, const OracleAnswer& a) {
    std::cout << what << " " << (a.yes ? "yes" : "no") << " (degree bound " << a.bound << ")\n";
    if (a.yes) {
        std::cout << "witness = " << print_operator(a.witness) << "\n";
        for (size_t i = 0; i < a.multipliers.size(); ++i)
            if (!a.multipliers[i].is_zero())
                std::cout << "m" << i + 1 << " = " << print_operator(a.multipliers[i]) << "\n";
    }
}

int run_oracle_member(const CliState& c) {
    InputProblem prob = parse_input_file(c.input);
    std::vector<DiffOp> gens = problem_generators(prob);
    for (DiffOp& g : gens) g = homogenize(g);
    DiffOp P = parse_operator(c.op_text, prob.sig, RingMode::Homogenized);
    Oracle oracle(prob.sig, gens, SpanRing::homogenized, c.session.oracle_degree,
                  !c.serial_oracle);
    OracleAnswer a = oracle.member(P);
    if (c.json) {
        Json j = json_header(c, "oracle member", prob.sig);
        j["operator"] = print_operator(P);
        j.update(json_of(a));
        emit(j);
    } else {
        text_header(c);
        print_oracle_answer("member", a);
    }
    return 0;
}

int run_oracle_vfilt(const CliState& c) {
    InputProblem prob = parse_input_file(c.input);
    VForm L = vform_from_text(c.form_text, prob.sig, "--form");
    Rational k = rational_token(c.k_text, "--k");
    DiffOp P = parse_operator(c.op_text, prob.sig, RingMode::Plain);
    Oracle oracle(prob.sig, problem_generators(prob), SpanRing::plain, c.session.oracle_degree,
                  !c.serial_oracle);
    OracleAnswer a = oracle.vfilt_member(P, L, k);
    if (c.json) {
        Json j = json_header(c, "oracle vfilt", prob.sig);
        j["operator"] = print_operator(P);
        j["form"] = L.to_string();
        j["k"] = json_of(k);
        j.update(json_of(a));
        emit(j);
    } else {
        text_header(c);
        std::cout << "form " << L.to_string() << " threshold " << to_string(k) << "\n";
        print_oracle_answer("vfilt", a);
    }
    return 0;
}

int run_oracle_vbar(const CliState& c) {
    InputProblem prob = parse_input_file(c.input);
    IdealPresentation pres =
        build_presentation(prob.sig, problem_generators(prob), c.session.budgets);
    WeightVector w = weights_from_text(c.w_text, prob.sig);
    DiffOp P = parse_operator(c.op_text, prob.sig, RingMode::Plain);
    Oracle oracle(prob.sig, pres.generators, SpanRing::plain, c.session.oracle_degree,
                  !c.serial_oracle);
    VbarAnswer a = oracle.vbar_member(P, pres.fan.skeleton, w);
    if (c.json) {
        Json j = json_header(c, "oracle vbar", prob.sig);
        j["operator"] = print_operator(P);
        j.update(json_of(a, pres.fan.skeleton));
        emit(j);
    } else {
        text_header(c);
        std::cout << "vbar " << (a.yes ? "yes" : "no") << "\n";
        for (size_t i = 0; i < a.per_form.size(); ++i) {
            std::cout << pres.fan.skeleton[i].to_string() << " ";
            print_oracle_answer("vfilt", a.per_form[i]);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CliState c;
    CLI::App app{"exact standard bases, V-restricted fans, and certified reductions for "
                 "differential operators"};
    app.require_subcommand(1);
    app.add_flag("--json", c.json, "machine output (schema 1)");
    app.add_option("--division-steps", c.session.budgets.division_steps, "division step budget")
        ->check(CLI::PositiveNumber);
    app.add_option("--pair-budget", c.session.budgets.pair_budget, "completion pair budget")
        ->check(CLI::PositiveNumber);
    app.add_option("--oracle-degree", c.session.oracle_degree, "oracle monomial degree bound")
        ->check(CLI::PositiveNumber);
    app.add_option("--seed", c.session.seed, "seed recorded in every output");
    app.add_flag("--serial-oracle", c.serial_oracle, "build oracle spans on one thread");

    auto add_input = [&](CLI::App* sub) {
        sub->add_option("file", c.input, "problem file")->required();
        sub->fallthrough();
    };

    CLI::App* gb = app.add_subcommand("gb", "minimal reduced standard basis of the saturation");
    add_input(gb);
    gb->add_option("--order", c.order_text, "weight form V:l1,..,lp (default all ones)");

    CLI::App* fan = app.add_subcommand("fan", "restricted Groebner fan of the saturation");
    add_input(fan);

    CLI::App* kappa = app.add_subcommand("kappa", "comparison constants per sector");
    add_input(kappa);

    CLI::App* divide = app.add_subcommand("divide", "divide an operator by the standard basis");
    add_input(divide);
    divide->add_option("operator", c.op_text, "homogenized-ring operator")->required();
    divide->add_option("--order", c.order_text, "weight form V:l1,..,lp (default all ones)");

    CLI::App* reduce =
        app.add_subcommand("reduce", "push a representative below one cell's closure targets");
    add_input(reduce);
    reduce->add_option("operator", c.op_text, "plain-ring representative")->required();
    reduce->add_option("--w", c.w_text, "weights w1,..,wp")->required();
    reduce->add_option("--certs", c.certs_path, "file with one rewrite per closure form")
        ->required();
    reduce->add_option("--cell", c.cell_index, "fan cell index, 0-based (default 0)");

    CLI::App* normalize =
        app.add_subcommand("normalize", "sweep the fan to meet both axis targets");
    add_input(normalize);
    normalize->add_option("operator", c.op_text, "plain-ring representative")->required();
    normalize->add_option("--w", c.w_text, "weights w1,w2")->required();
    normalize->add_option("--certs", c.certs_path, "file with one rewrite per skeleton form")
        ->required();

    CLI::App* oracle = app.add_subcommand("oracle", "degree-bounded brute-force answers");
    oracle->require_subcommand(1);
    oracle->fallthrough();
    CLI::App* om = oracle->add_subcommand("member", "left-ideal membership, homogenized ring");
    add_input(om);
    om->add_option("operator", c.op_text, "homogenized-ring operator")->required();
    CLI::App* ov = oracle->add_subcommand("vfilt", "filtration level membership");
    add_input(ov);
    ov->add_option("operator", c.op_text, "plain-ring representative")->required();
    ov->add_option("--form", c.form_text, "weight form V:l1,..,lp")->required();
    ov->add_option("--k", c.k_text, "rational threshold")->required();
    CLI::App* ob = oracle->add_subcommand("vbar", "membership across the whole skeleton");
    add_input(ob);
    ob->add_option("operator", c.op_text, "plain-ring representative")->required();
    ob->add_option("--w", c.w_text, "weights w1,..,wp")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    try {
        if (gb->parsed()) return run_gb(c);
        if (fan->parsed()) return run_fan(c);
        if (kappa->parsed()) return run_kappa(c);
        if (divide->parsed()) return run_divide(c);
        if (reduce->parsed()) return run_reduce(c);
        if (normalize->parsed()) return run_normalize(c);
        if (oracle->parsed()) {
            if (om->parsed()) return run_oracle_member(c);
            if (ov->parsed()) return run_oracle_vfilt(c);
            if (ob->parsed()) return run_oracle_vbar(c);
        }
    } catch (const ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const BudgetExhausted& e) {
        std::cerr << "budget exhausted: " << e.what() << "\n";
        return 3;
    } catch (const std::logic_error& e) {
        std::cerr << "invariant violation: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
