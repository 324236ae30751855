#include "dfan/json_report.hpp"

#include "dfan/io.hpp"

namespace dfan {

Json json_of(const Rational& r) {
    if (r.get_den() == 1 && r.get_num().fits_slong_p()) return (long)r.get_num().get_si();
    return r.get_str();
}

Json json_of(const Slope& s) {
    if (s.inf) return "inf";
    return json_of(s.v);
}

Json json_of(const SlopeInterval& iv) {
    Json j;
    j["lo"] = json_of(iv.lo);
    j["lo_closed"] = iv.lo_closed;
    j["hi"] = json_of(iv.hi);
    j["hi_closed"] = iv.hi_closed;
    return j;
}

Json json_of(const VForm& L) {
    Json j = Json::array();
    for (const Rational& c : L.l) j.push_back(json_of(c));
    return j;
}

Json json_of(const ExponentVector& e) {
    Json j = Json::array();
    for (int c : e.raw()) j.push_back(c);
    return j;
}

Json json_of(const MarkedBasis& b) {
    Json j;
    j["order"] = b.order.to_string();
    Json elems = Json::array(), marks = Json::array();
    for (size_t i = 0; i < b.size(); ++i) {
        elems.push_back(print_operator(b.elements[i]));
        marks.push_back(json_of(b.marks[i]));
    }
    j["elements"] = std::move(elems);
    j["marks"] = std::move(marks);
    return j;
}

Json json_of(const FanCell& cell) {
    Json j;
    j["interval"] = json_of(cell.interval);
    j["dim"] = cell.dim;
    j["witness"] = json_of(cell.witness);
    j["basis"] = json_of(cell.basis);
    return j;
}

Json json_of(const VGroebnerFan& fan) {
    Json j;
    Json cells = Json::array();
    for (const FanCell& c : fan.cells) cells.push_back(json_of(c));
    j["cells"] = std::move(cells);
    Json skel = Json::array();
    for (const VForm& L : fan.skeleton) skel.push_back(json_of(L));
    j["skeleton"] = std::move(skel);
    return j;
}

Json json_of(const DivisionResult& d) {
    Json j;
    Json qs = Json::array();
    for (const DiffOp& q : d.quotients) qs.push_back(print_operator(q));
    j["quotients"] = std::move(qs);
    j["remainder"] = print_operator(d.remainder);
    j["tail"] = print_operator(d.tail);
    j["truncated"] = d.truncated;
    j["steps"] = d.steps;
    return j;
}

namespace {

Json json_profile(const std::vector<std::optional<Rational>>& prof) {
    Json j = Json::array();
    for (const auto& o : prof) {
        if (o) j.push_back(json_of(*o));
        else j.push_back(nullptr); // order of the zero operator
    }
    return j;
}

} // namespace

Json json_of(const ReductionTrace& t) {
    Json j;
    j["initial"] = print_operator(t.initial);
    j["result"] = print_operator(t.result);
    Json steps = Json::array();
    for (const ReductionStep& s : t.steps) {
        Json step;
        step["subtracted"] = print_operator(s.subtracted);
        Json forms = Json::array();
        for (const VForm& L : s.forms) forms.push_back(L.to_string());
        step["forms"] = std::move(forms);
        step["before"] = json_profile(s.before);
        step["after"] = json_profile(s.after);
        steps.push_back(std::move(step));
    }
    j["steps"] = std::move(steps);
    return j;
}

Json json_of(const OracleAnswer& a) {
    Json j;
    j["yes"] = a.yes;
    j["bound"] = a.bound;
    if (a.yes) {
        j["witness"] = print_operator(a.witness);
        Json mults = Json::array();
        for (const DiffOp& m : a.multipliers) mults.push_back(print_operator(m));
        j["multipliers"] = std::move(mults);
    }
    return j;
}

Json json_of(const VbarAnswer& a, const std::vector<VForm>& skeleton) {
    Json j;
    j["yes"] = a.yes;
    Json per = Json::array();
    for (size_t i = 0; i < a.per_form.size(); ++i) {
        Json one = json_of(a.per_form[i]);
        if (i < skeleton.size()) one["form"] = skeleton[i].to_string();
        per.push_back(std::move(one));
    }
    j["per_form"] = std::move(per);
    return j;
}

} // namespace dfan
