#include "dfan/malgrange.hpp"

#include "dfan/errors.hpp"

#include <algorithm>

namespace dfan {

SPoly SPoly::constant(int nx, int ns, const Rational& c) {
    SPoly r(nx, ns);
    r.add_term(Key(nx + ns, 0), c);
    return r;
}

void SPoly::add_term(const Key& k, const Rational& c) {
    if ((int)k.size() != nx_ + ns_) throw InvariantViolation("polynomial key has wrong arity");
    auto it = terms_.find(k);
    if (it == terms_.end()) {
        if (sign(c) != 0) terms_.emplace(k, c);
        return;
    }
    it->second += c;
    if (sign(it->second) == 0) terms_.erase(it);
}

SPoly SPoly::operator+(const SPoly& o) const {
    SPoly r = *this;
    r += o;
    return r;
}

SPoly& SPoly::operator+=(const SPoly& o) {
    for (const auto& [k, c] : o.terms_) add_term(k, c);
    return *this;
}

SPoly SPoly::operator-(const SPoly& o) const {
    SPoly r = *this;
    for (const auto& [k, c] : o.terms_) r.add_term(k, -c);
    return r;
}

SPoly SPoly::operator*(const SPoly& o) const {
    SPoly r(nx_, ns_);
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_) {
            Key k(ka.size());
            for (size_t i = 0; i < k.size(); ++i) k[i] = ka[i] + kb[i];
            r.add_term(k, ca * cb);
        }
    return r;
}

SPoly SPoly::operator*(const Rational& c) const {
    SPoly r(nx_, ns_);
    if (sign(c) == 0) return r;
    for (const auto& [k, tc] : terms_) r.add_term(k, tc * c);
    return r;
}

SPoly SPoly::dx(int i) const {
    SPoly r(nx_, ns_);
    for (const auto& [k, c] : terms_) {
        if (k[i] == 0) continue;
        Key d = k;
        d[i] -= 1;
        r.add_term(d, c * k[i]);
    }
    return r;
}

SPoly SPoly::times_s(int j) const {
    SPoly r(nx_, ns_);
    for (const auto& [k, c] : terms_) {
        Key d = k;
        d[nx_ + j] += 1;
        r.add_term(d, c);
    }
    return r;
}

SPoly SPoly::shift_s(int j, int delta) const {
    SPoly r(nx_, ns_);
    for (const auto& [k, c] : terms_) {
        int e = k[nx_ + j];
        // (s_j + delta)^e expanded binomially
        Rational binc = 1;
        Rational dpow = 1;
        for (int i = e; i >= 0; --i) {
            Key d = k;
            d[nx_ + j] = i;
            r.add_term(d, c * binc * dpow);
            binc = binc * i / (e - i + 1);
            dpow *= delta;
        }
    }
    return r;
}

SPoly SPoly::from_coordinates(const DiffOp& P) {
    RingSignature sig = P.sig();
    SPoly r(sig.n, sig.p);
    for (const auto& [e, c] : P.terms()) {
        for (int j = 0; j < sig.p; ++j)
            if (e.mu(j) || e.nu(j))
                throw InvariantViolation("polynomial data must not involve the auxiliary pairs");
        for (int i = 0; i < sig.n; ++i)
            if (e.beta(i)) throw InvariantViolation("polynomial data must not involve derivations");
        if (e.k()) throw InvariantViolation("polynomial data must be plain");
        Key k(sig.n + sig.p, 0);
        for (int i = 0; i < sig.n; ++i) k[i] = e.alpha(i);
        r.add_term(k, c);
    }
    return r;
}

DiffOp SPoly::to_coordinates(RingSignature sig) const {
    if (sig.n != nx_ || sig.p != ns_) throw InvariantViolation("signature mismatch");
    DiffOp r(sig);
    for (const auto& [k, c] : terms_) {
        for (int j = 0; j < ns_; ++j)
            if (k[nx_ + j]) throw InvariantViolation("parameters cannot enter the operator ring");
        ExponentVector e(sig);
        for (int i = 0; i < nx_; ++i) e.alpha(i) = k[i];
        r.add_term(e, c);
    }
    return r;
}

PolynomialMap::PolynomialMap(RingSignature s, const std::vector<DiffOp>& polys) : sig(s) {
    sig.validate();
    if ((int)polys.size() != sig.p)
        throw InvariantViolation("need exactly one polynomial per auxiliary pair");
    for (const auto& P : polys) {
        require_same(sig, P.sig());
        if (P.is_zero()) throw InvariantViolation("zero polynomial rejected");
        f.push_back(SPoly::from_coordinates(P));
    }
}

SModElem unit_element(const PolynomialMap& f) {
    return {SPoly::constant(f.sig.n, f.sig.p, 1), std::vector<int>(f.sig.p, 0)};
}

namespace {

SPoly f_power(const PolynomialMap& f, const std::vector<int>& e) {
    SPoly r = SPoly::constant(f.sig.n, f.sig.p, 1);
    for (int j = 0; j < f.sig.p; ++j)
        for (int c = 0; c < e[j]; ++c) r = r * f.f[j];
    return r;
}

SModElem act_x(int i, SModElem F) {
    SPoly xi(F.num.nx(), F.num.ns());
    SPoly::Key k(F.num.nx() + F.num.ns(), 0);
    k[i] = 1;
    xi.add_term(k, 1);
    F.num = F.num * xi;
    return F;
}

SModElem act_t(int j, SModElem F, const PolynomialMap& f) {
    F.num = f.f[j] * F.num.shift_s(j, 1);
    return F;
}

SModElem act_dt(int j, SModElem F) {
    F.num = F.num.shift_s(j, -1).times_s(j) * Rational(-1);
    F.den[j] += 1;
    return F;
}

SModElem act_dx(int i, SModElem F, const PolynomialMap& f) {
    int p = f.sig.p;
    // common denominator picks up one extra f_j per pair
    std::vector<int> ones(p, 1);
    SPoly acc = F.num.dx(i) * f_power(f, ones);
    for (int j = 0; j < p; ++j) {
        std::vector<int> others = ones;
        others[j] = 0;
        SPoly part = F.num * f.f[j].dx(i) * f_power(f, others);
        acc += part.times_s(j) - part * Rational(F.den[j]);
    }
    F.num = acc;
    for (int j = 0; j < p; ++j) F.den[j] += 1;
    return F;
}

} // namespace

SModElem act(const DiffOp& P, const SModElem& F, const PolynomialMap& f) {
    require_same(f.sig, P.sig());
    if (!P.is_plain()) throw InvariantViolation("the formal action is for plain operators");
    SModElem out{SPoly(f.sig.n, f.sig.p), std::vector<int>(f.sig.p, 0)};
    for (const auto& [e, c] : P.terms()) {
        // normally ordered monomial: rightmost factors act first
        SModElem cur = F;
        for (int j = 0; j < f.sig.p; ++j)
            for (int r = 0; r < e.nu(j); ++r) cur = act_dt(j, std::move(cur));
        for (int i = 0; i < f.sig.n; ++i)
            for (int r = 0; r < e.beta(i); ++r) cur = act_dx(i, std::move(cur), f);
        for (int j = 0; j < f.sig.p; ++j)
            for (int r = 0; r < e.mu(j); ++r) cur = act_t(j, std::move(cur), f);
        for (int i = 0; i < f.sig.n; ++i)
            for (int r = 0; r < e.alpha(i); ++r) cur = act_x(i, std::move(cur));
        // fold onto the running sum over a shared denominator
        std::vector<int> den(f.sig.p);
        std::vector<int> lift_out(f.sig.p), lift_cur(f.sig.p);
        for (int j = 0; j < f.sig.p; ++j) {
            den[j] = std::max(out.den[j], cur.den[j]);
            lift_out[j] = den[j] - out.den[j];
            lift_cur[j] = den[j] - cur.den[j];
        }
        out.num = out.num * f_power(f, lift_out) + (cur.num * c) * f_power(f, lift_cur);
        out.den = den;
    }
    return out;
}

bool mod_equal(const SModElem& a, const SModElem& b, const PolynomialMap& f) {
    std::vector<int> lift_a(f.sig.p), lift_b(f.sig.p);
    for (int j = 0; j < f.sig.p; ++j) {
        int d = std::max(a.den[j], b.den[j]);
        lift_a[j] = d - a.den[j];
        lift_b[j] = d - b.den[j];
    }
    return a.num * f_power(f, lift_a) == b.num * f_power(f, lift_b);
}

bool annihilates(const DiffOp& P, const PolynomialMap& f) {
    return act(P, unit_element(f), f).num.is_zero();
}

std::vector<DiffOp> annihilator_generators(const PolynomialMap& f) {
    RingSignature sig = f.sig;
    std::vector<DiffOp> gens;
    for (int j = 0; j < sig.p; ++j) {
        DiffOp g(sig);
        ExponentVector tj(sig);
        tj.mu(j) = 1;
        g.add_term(tj, 1);
        g -= f.f[j].to_coordinates(sig);
        gens.push_back(std::move(g));
    }
    for (int i = 0; i < sig.n; ++i) {
        DiffOp g(sig);
        ExponentVector dxi(sig);
        dxi.beta(i) = 1;
        g.add_term(dxi, 1);
        for (int j = 0; j < sig.p; ++j) {
            DiffOp fij = f.f[j].dx(i).to_coordinates(sig);
            ExponentVector dtj(sig);
            dtj.nu(j) = 1;
            g += multiply_plain(fij, DiffOp::monomial(sig, dtj, 1));
        }
        gens.push_back(std::move(g));
    }
    for (const auto& g : gens)
        if (!annihilates(g, f)) throw InvariantViolation("generator fails the formal action check");
    return gens;
}

} // namespace dfan
