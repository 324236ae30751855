#pragma once

#include "dfan/diffop.hpp"

namespace dfan {

// Exact polynomial in the coordinates x_1..x_n and the parameters s_1..s_p.
// Key layout: [x exponents | s exponents].
class SPoly {
  public:
    using Key = std::vector<int>;
    using TermMap = std::map<Key, Rational>;

    SPoly() = default;
    SPoly(int nx, int ns) : nx_(nx), ns_(ns) {}
    static SPoly constant(int nx, int ns, const Rational& c);

    int nx() const { return nx_; }
    int ns() const { return ns_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Key& k, const Rational& c);

    SPoly operator+(const SPoly& o) const;
    SPoly operator-(const SPoly& o) const;
    SPoly operator*(const SPoly& o) const;
    SPoly operator*(const Rational& c) const;
    SPoly& operator+=(const SPoly& o);
    bool operator==(const SPoly& o) const { return terms_ == o.terms_; }

    SPoly dx(int i) const;                 // d/dx_i
    SPoly times_s(int j) const;            // multiply by s_j
    SPoly shift_s(int j, int delta) const; // substitute s_j -> s_j + delta

    // x-only polynomial from an operator supported on the coordinate block
    static SPoly from_coordinates(const DiffOp& P);
    // back to an operator; requires no s variables in the support
    DiffOp to_coordinates(RingSignature sig) const;

  private:
    int nx_ = 0, ns_ = 0;
    TermMap terms_;
};

// p nonzero polynomials in x; the raw data the whole pipeline starts from.
struct PolynomialMap {
    RingSignature sig;
    std::vector<SPoly> f;

    // polys must be plain operators supported on the coordinate block
    PolynomialMap(RingSignature s, const std::vector<DiffOp>& polys);
};

// num * f^s / prod f_j^{den_j}: the formal carrier the operators act on.
struct SModElem {
    SPoly num;
    std::vector<int> den;
};

SModElem unit_element(const PolynomialMap& f); // 1 * f^s

// Formal action of a plain operator: t_j shifts s_j up and multiplies by
// f_j, dt_j multiplies by -s_j/f_j and shifts down, dx_i is the product
// rule picking up sum_j s_j (df_j/dx_i)/f_j.
SModElem act(const DiffOp& P, const SModElem& F, const PolynomialMap& f);

// equality after clearing the f denominators
bool mod_equal(const SModElem& a, const SModElem& b, const PolynomialMap& f);

bool annihilates(const DiffOp& P, const PolynomialMap& f);

// t_j - f_j and dx_i + sum_j (df_j/dx_i) dt_j; every generator is checked
// against the formal action before being returned.
std::vector<DiffOp> annihilator_generators(const PolynomialMap& f);

} // namespace dfan
