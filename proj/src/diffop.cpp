#include "dfan/diffop.hpp"

namespace dfan {

DiffOp DiffOp::constant(RingSignature sig, const Rational& c) {
    DiffOp r(sig);
    r.add_term(ExponentVector(sig), c);
    return r;
}

DiffOp DiffOp::monomial(RingSignature sig, const ExponentVector& e, const Rational& c) {
    DiffOp r(sig);
    r.add_term(e, c);
    return r;
}

DiffOp DiffOp::variable(RingSignature sig, int flat_index) {
    ExponentVector e(sig);
    e.raw()[flat_index] = 1;
    return monomial(sig, e, 1);
}

void DiffOp::add_term(const ExponentVector& e, const Rational& c) {
    if (sgn(c) == 0) return;
    if (!(e.sig() == sig_)) throw SignatureMismatch("term signature differs from operator");
    auto [it, fresh] = terms_.emplace(e, c);
    if (!fresh) {
        it->second += c;
        if (sgn(it->second) == 0) terms_.erase(it);
    }
}

Rational DiffOp::coeff(const ExponentVector& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
}

DiffOp DiffOp::operator+(const DiffOp& o) const {
    DiffOp r = *this;
    r += o;
    return r;
}

DiffOp DiffOp::operator-(const DiffOp& o) const {
    DiffOp r = *this;
    r -= o;
    return r;
}

DiffOp DiffOp::operator-() const {
    DiffOp r(sig_);
    for (const auto& [e, c] : terms_) r.terms_.emplace(e, -c);
    return r;
}

DiffOp DiffOp::operator*(const Rational& c) const {
    DiffOp r(sig_);
    if (sgn(c) == 0) return r;
    for (const auto& [e, q] : terms_) r.terms_.emplace(e, q * c);
    return r;
}

DiffOp& DiffOp::operator+=(const DiffOp& o) {
    require_same(sig_, o.sig_);
    for (const auto& [e, c] : o.terms_) add_term(e, c);
    return *this;
}

DiffOp& DiffOp::operator-=(const DiffOp& o) {
    require_same(sig_, o.sig_);
    for (const auto& [e, c] : o.terms_) add_term(e, -c);
    return *this;
}

std::vector<ExponentVector> DiffOp::newton_diagram() const {
    std::vector<ExponentVector> r;
    r.reserve(terms_.size());
    for (const auto& [e, c] : terms_) r.push_back(e);
    return r;
}

int DiffOp::degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, e.h_degree());
    return d;
}

bool DiffOp::is_homogeneous() const {
    int d = -1;
    for (const auto& [e, c] : terms_) {
        if (d < 0) d = e.h_degree();
        else if (e.h_degree() != d) return false;
    }
    return true;
}

bool DiffOp::is_plain() const {
    for (const auto& [e, c] : terms_)
        if (e.k() != 0) return false;
    return true;
}

int DiffOp::min_z() const {
    int c = -1;
    for (const auto& [e, q] : terms_) c = (c < 0) ? e.k() : std::min(c, e.k());
    return c < 0 ? 0 : c;
}

DiffOp DiffOp::z_shift(int c) const {
    if (c == 0) return *this;
    DiffOp r(sig_);
    for (const auto& [e, q] : terms_) {
        ExponentVector f = e;
        f.k() += c;
        if (f.k() < 0) throw InvariantViolation("z shift below zero");
        r.terms_.emplace(f, q);
    }
    return r;
}

namespace {

struct RewriteTerm {
    int coord, deriv, zpow;
    long coeff;
};

// d^b crossing v^a for one variable, by iterating the single rewrite
// d*(v^c d^e z^g) = v^c d^(e+1) z^g + c v^(c-1) d^e z^(g+1).
std::vector<RewriteTerm> cross_one_variable(int b, int a) {
    std::vector<RewriteTerm> cur{{a, 0, 0, 1}};
    for (int step = 0; step < b; ++step) {
        std::vector<RewriteTerm> next;
        next.reserve(cur.size() * 2);
        for (const auto& t : cur) {
            next.push_back({t.coord, t.deriv + 1, t.zpow, t.coeff});
            if (t.coord > 0) next.push_back({t.coord - 1, t.deriv, t.zpow + 1, t.coeff * t.coord});
        }
        // merge duplicates (same coord determines the rest)
        std::sort(next.begin(), next.end(),
                  [](const RewriteTerm& u, const RewriteTerm& v) { return u.coord > v.coord; });
        std::vector<RewriteTerm> merged;
        for (const auto& t : next) {
            if (!merged.empty() && merged.back().coord == t.coord)
                merged.back().coeff += t.coeff;
            else
                merged.push_back(t);
        }
        cur = std::move(merged);
    }
    return cur;
}

DiffOp multiply_impl(const DiffOp& A, const DiffOp& B, bool hom) {
    require_same(A.sig(), B.sig());
    const RingSignature sig = A.sig();
    if (!hom && (!A.is_plain() || !B.is_plain()))
        throw InvariantViolation("plain product requires z-free operands");
    DiffOp out(sig);
    const int m = sig.m();
    for (const auto& [ea, ca] : A.terms()) {
        for (const auto& [eb, cb] : B.terms()) {
            // partials of ea cross the coordinate block of eb, one variable at a time
            std::vector<std::vector<RewriteTerm>> per_var(m);
            for (int v = 0; v < m; ++v) {
                int b = (v < sig.n) ? ea.beta(v) : ea.nu(v - sig.n);
                int a = (v < sig.n) ? eb.alpha(v) : eb.mu(v - sig.n);
                per_var[v] = cross_one_variable(b, a);
            }
            std::vector<size_t> pick(m, 0);
            for (;;) {
                ExponentVector e(sig);
                Rational c = ca * cb;
                int zacc = 0;
                for (int v = 0; v < m; ++v) {
                    const RewriteTerm& t = per_var[v][pick[v]];
                    int coord = t.coord, deriv = t.deriv;
                    if (v < sig.n) {
                        e.alpha(v) = ea.alpha(v) + coord;
                        e.beta(v) = deriv + eb.beta(v);
                    } else {
                        e.mu(v - sig.n) = ea.mu(v - sig.n) + coord;
                        e.nu(v - sig.n) = deriv + eb.nu(v - sig.n);
                    }
                    zacc += t.zpow;
                    c *= t.coeff;
                }
                e.k() = hom ? ea.k() + eb.k() + zacc : 0;
                out.add_term(e, c);
                // odometer over the per-variable expansions
                int v = 0;
                while (v < m && ++pick[v] == per_var[v].size()) pick[v++] = 0;
                if (v == m) break;
            }
        }
    }
    return out;
}

} // namespace

DiffOp multiply(const DiffOp& a, const DiffOp& b) { return multiply_impl(a, b, true); }

DiffOp multiply_plain(const DiffOp& a, const DiffOp& b) { return multiply_impl(a, b, false); }

DiffOp homogenize(const DiffOp& a) {
    if (!a.is_plain()) throw InvariantViolation("homogenize expects a z-free operator");
    if (a.is_zero()) return a;
    int d = 0;
    for (const auto& [e, c] : a.terms()) d = std::max(d, e.derivation_degree());
    DiffOp r(a.sig());
    for (const auto& [e, c] : a.terms()) {
        ExponentVector f = e;
        f.k() = d - e.derivation_degree();
        r.add_term(f, c);
    }
    return r;
}

DiffOp dehomogenize(const DiffOp& a) {
    DiffOp r(a.sig());
    for (const auto& [e, c] : a.terms()) {
        ExponentVector f = e;
        f.k() = 0;
        r.add_term(f, c);
    }
    return r;
}

} // namespace dfan
