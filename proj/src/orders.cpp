#include "dfan/orders.hpp"

#include <sstream>

namespace dfan {

LinearForm::LinearForm(RingSignature s, std::vector<Rational> ew, std::vector<Rational> fw)
    : sig(s), e(std::move(ew)), f(std::move(fw)) {
    if ((int)e.size() != sig.m() || (int)f.size() != sig.m())
        throw InvariantViolation("linear form needs m weights per block");
}

Rational LinearForm::value(const ExponentVector& x) const {
    require_same(sig, x.sig());
    Rational v = 0;
    for (int i = 0; i < sig.n; ++i) {
        v += e[i] * x.alpha(i);
        v += f[i] * x.beta(i);
    }
    for (int j = 0; j < sig.p; ++j) {
        v += e[sig.n + j] * x.mu(j);
        v += f[sig.n + j] * x.nu(j);
    }
    return v;
}

bool LinearForm::in_U() const {
    for (int i = 0; i < sig.m(); ++i) {
        if (sign(e[i]) > 0) return false;
        if (sign(e[i] + f[i]) < 0) return false;
    }
    return true;
}

bool LinearForm::is_zero() const {
    for (const auto& q : e)
        if (sign(q) != 0) return false;
    for (const auto& q : f)
        if (sign(q) != 0) return false;
    return true;
}

bool LinearForm::same_ray(const LinearForm& o) const {
    if (!(sig == o.sig) || is_zero() || o.is_zero()) return false;
    // find a pivot weight and compare cross products
    Rational r; // scale such that *this == r * o
    bool have = false;
    auto both = [&](const std::vector<Rational>& a, const std::vector<Rational>& b) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (sign(b[i]) == 0) {
                if (sign(a[i]) != 0) return false;
                continue;
            }
            Rational q = a[i] / b[i];
            if (!have) {
                r = q;
                have = true;
            } else if (q != r)
                return false;
        }
        return true;
    };
    if (!both(e, o.e) || !both(f, o.f)) return false;
    return have && sign(r) > 0;
}

VForm::VForm(RingSignature s, std::vector<Rational> mult) : sig(s), l(std::move(mult)) {
    if ((int)l.size() != sig.p) throw InvariantViolation("V form needs p multipliers");
    for (const auto& q : l)
        if (sign(q) < 0) throw InvariantViolation("V form multipliers must be >= 0");
}

VForm VForm::axis(RingSignature s, int j) {
    if (j < 1 || j > s.p) throw InvariantViolation("axis index out of range");
    std::vector<Rational> l(s.p, Rational(0));
    l[j - 1] = 1;
    return VForm(s, std::move(l));
}

LinearForm VForm::linear() const {
    std::vector<Rational> e(sig.m(), Rational(0)), f(sig.m(), Rational(0));
    for (int j = 0; j < sig.p; ++j) {
        e[sig.n + j] = -l[j];
        f[sig.n + j] = l[j];
    }
    return LinearForm(sig, std::move(e), std::move(f));
}

Rational VForm::value(const ExponentVector& x) const {
    require_same(sig, x.sig());
    Rational v = 0;
    for (int j = 0; j < sig.p; ++j) v += l[j] * (x.nu(j) - x.mu(j));
    return v;
}

std::string VForm::to_string() const {
    std::string s = "V:";
    for (int j = 0; j < sig.p; ++j) {
        if (j) s += ",";
        s += dfan::to_string(l[j]);
    }
    return s;
}

OrderSpec OrderSpec::form(LinearForm L) {
    if (!L.in_U()) throw InvariantViolation("order form outside the admissible region");
    OrderSpec o;
    o.kind_ = Kind::Form;
    o.L_ = std::move(L);
    return o;
}

OrderSpec OrderSpec::hom_form(LinearForm L) {
    OrderSpec o = form(std::move(L));
    o.kind_ = Kind::HomForm;
    return o;
}

OrderSpec OrderSpec::cone_limit(LinearForm L, LinearForm direction) {
    if (!L.in_U() || !direction.in_U())
        throw InvariantViolation("order form outside the admissible region");
    if (L.same_ray(direction))
        throw InvariantViolation("limit order needs a direction off the base ray");
    OrderSpec o;
    o.kind_ = Kind::ConeLimit;
    o.L_ = std::move(L);
    o.dir_ = std::move(direction);
    return o;
}

OrderSpec OrderSpec::lower_limit(const VForm& L) {
    OrderSpec o;
    o.kind_ = Kind::LowerLimit;
    o.L_ = L.linear();
    if (!o.L_.in_U()) throw InvariantViolation("order form outside the admissible region");
    o.dir_ = VForm::axis(L.sig, 1).linear();
    return o;
}

namespace {

inline std::strong_ordering cmp_int(int a, int b) { return a <=> b; }

inline std::strong_ordering cmp_rat(const Rational& a, const Rational& b) {
    int c = cmp(a, b);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
}

// The Form cascade: L value, derivation degree, then the canonical order
// reversed (canonically larger counts as smaller).
std::strong_ordering form_cascade(const LinearForm& L, const ExponentVector& a,
                                  const ExponentVector& b) {
    if (auto c = cmp_rat(L.value(a), L.value(b)); c != 0) return c;
    if (auto c = cmp_int(a.derivation_degree(), b.derivation_degree()); c != 0) return c;
    int g = grlex0_cmp(a, b);
    return g < 0 ? std::strong_ordering::greater
                 : (g > 0 ? std::strong_ordering::less : std::strong_ordering::equal);
}

} // namespace

std::strong_ordering OrderSpec::compare(const ExponentVector& a, const ExponentVector& b) const {
    switch (kind_) {
    case Kind::Form:
        return form_cascade(L_, a, b);
    case Kind::HomForm:
        if (auto c = cmp_int(a.h_degree(), b.h_degree()); c != 0) return c;
        return form_cascade(L_, a, b);
    case Kind::ConeLimit:
    case Kind::LowerLimit:
        if (auto c = cmp_int(a.h_degree(), b.h_degree()); c != 0) return c;
        if (auto c = cmp_rat(L_.value(a), L_.value(b)); c != 0) return c;
        return form_cascade(dir_, a, b);
    }
    throw InvariantViolation("unreachable order kind");
}

std::string OrderSpec::to_string() const {
    auto form_str = [](const LinearForm& L) {
        // V-type forms print compactly, anything else as raw weight lists
        bool vtype = true;
        for (int i = 0; i < L.sig.n && vtype; ++i)
            if (sign(L.e[i]) != 0 || sign(L.f[i]) != 0) vtype = false;
        for (int j = 0; j < L.sig.p && vtype; ++j)
            if (L.e[L.sig.n + j] != -L.f[L.sig.n + j]) vtype = false;
        if (vtype) {
            std::string s = "V:";
            for (int j = 0; j < L.sig.p; ++j) {
                if (j) s += ",";
                s += dfan::to_string(L.f[L.sig.n + j]);
            }
            return s;
        }
        std::string s = "L:e=";
        for (size_t i = 0; i < L.e.size(); ++i) {
            if (i) s += ",";
            s += dfan::to_string(L.e[i]);
        }
        s += ";f=";
        for (size_t i = 0; i < L.f.size(); ++i) {
            if (i) s += ",";
            s += dfan::to_string(L.f[i]);
        }
        return s;
    };
    switch (kind_) {
    case Kind::Form:
        return "form(" + form_str(L_) + ")";
    case Kind::HomForm:
        return "homform(" + form_str(L_) + ")";
    case Kind::ConeLimit:
        return "limit(" + form_str(L_) + ";dir=" + form_str(dir_) + ")";
    case Kind::LowerLimit:
        return "limit-(" + form_str(L_) + ")";
    }
    return "?";
}

ExponentVector leading_exponent(const DiffOp& P, const OrderSpec& ord) {
    if (P.is_zero()) throw InvariantViolation("leading exponent of zero");
    const ExponentVector* best = nullptr;
    for (const auto& [e, c] : P.terms())
        if (!best || ord.compare(*best, e) == std::strong_ordering::less) best = &e;
    return *best;
}

std::optional<Rational> l_order(const DiffOp& P, const LinearForm& L) {
    std::optional<Rational> m;
    for (const auto& [e, c] : P.terms()) {
        Rational v = L.value(e);
        if (!m || v > *m) m = v;
    }
    return m;
}

DiffOp l_symbol(const DiffOp& P, const LinearForm& L) {
    auto m = l_order(P, L);
    if (!m) return P;
    DiffOp r(P.sig());
    for (const auto& [e, c] : P.terms())
        if (L.value(e) == *m) r.add_term(e, c);
    return r;
}

} // namespace dfan
