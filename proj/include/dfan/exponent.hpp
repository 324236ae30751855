#pragma once

#include "dfan/signature.hpp"

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <vector>

namespace dfan {

// Exponent of a normally ordered monomial x^alpha t^mu dx^beta dt^nu z^k,
// stored flat as [alpha(n) | mu(p) | beta(n) | nu(p) | k].
class ExponentVector {
  public:
    ExponentVector() = default;
    explicit ExponentVector(RingSignature sig) : sig_(sig), e_(sig.coords(), 0) {}

    const RingSignature& sig() const { return sig_; }

    int alpha(int i) const { return e_[i]; }
    int mu(int j) const { return e_[sig_.n + j]; }
    int beta(int i) const { return e_[sig_.m() + i]; }
    int nu(int j) const { return e_[sig_.m() + sig_.n + j]; }
    int k() const { return e_.back(); }

    int& alpha(int i) { return e_[i]; }
    int& mu(int j) { return e_[sig_.n + j]; }
    int& beta(int i) { return e_[sig_.m() + i]; }
    int& nu(int j) { return e_[sig_.m() + sig_.n + j]; }
    int& k() { return e_.back(); }

    const std::vector<int>& raw() const { return e_; }
    std::vector<int>& raw() { return e_; }

    int total_degree() const { return std::accumulate(e_.begin(), e_.end(), 0); }

    int derivation_degree() const {
        int s = 0;
        for (int i = sig_.m(); i < 2 * sig_.m(); ++i) s += e_[i];
        return s;
    }

    // Degree in the homogenized grading: k + |beta| + |nu|.
    int h_degree() const { return k() + derivation_degree(); }

    bool is_plain() const { return k() == 0; }

    bool divides(const ExponentVector& o) const {
        for (size_t i = 0; i < e_.size(); ++i)
            if (e_[i] > o.e_[i]) return false;
        return true;
    }

    ExponentVector operator+(const ExponentVector& o) const {
        ExponentVector r(sig_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = e_[i] + o.e_[i];
        return r;
    }

    // Checked: requires o.divides(*this).
    ExponentVector operator-(const ExponentVector& o) const {
        ExponentVector r(sig_);
        for (size_t i = 0; i < e_.size(); ++i) {
            r.e_[i] = e_[i] - o.e_[i];
            if (r.e_[i] < 0) throw InvariantViolation("exponent subtraction went negative");
        }
        return r;
    }

    ExponentVector join(const ExponentVector& o) const {
        ExponentVector r(sig_);
        for (size_t i = 0; i < e_.size(); ++i) r.e_[i] = std::max(e_[i], o.e_[i]);
        return r;
    }

    bool operator==(const ExponentVector& o) const { return sig_ == o.sig_ && e_ == o.e_; }
    bool operator!=(const ExponentVector& o) const { return !(*this == o); }

  private:
    RingSignature sig_;
    std::vector<int> e_;
};

// Canonical well order: total degree first, then lexicographic on the flat
// layout with precedence x1<..<xn<t1<..<tp<dx1<..<dxn<dt1<..<dtp<z. The
// highest-precedence variable is z, so ties scan the layout from the back;
// more of a later variable wins. Returns -1/0/+1.
inline int grlex0_cmp(const ExponentVector& a, const ExponentVector& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db ? -1 : 1;
    const auto& x = a.raw();
    const auto& y = b.raw();
    for (size_t i = x.size(); i-- > 0;)
        if (x[i] != y[i]) return x[i] < y[i] ? -1 : 1;
    return 0;
}

struct Grlex0Less {
    bool operator()(const ExponentVector& a, const ExponentVector& b) const {
        return grlex0_cmp(a, b) < 0;
    }
};

} // namespace dfan
