#pragma once

#include "dfan/exponent.hpp"
#include "dfan/rational.hpp"

#include <map>
#include <vector>

namespace dfan {

// Element of the homogenized operator ring, kept in normally ordered form
// (coordinates before partials, z central). Term map iterates in the
// canonical exponent order so printing and hashing are deterministic.
class DiffOp {
  public:
    using TermMap = std::map<ExponentVector, Rational, Grlex0Less>;

    DiffOp() = default;
    explicit DiffOp(RingSignature sig) : sig_(sig) {}

    static DiffOp constant(RingSignature sig, const Rational& c);
    static DiffOp monomial(RingSignature sig, const ExponentVector& e, const Rational& c);
    // Single variable to the first power; idx indexes the flat layout.
    static DiffOp variable(RingSignature sig, int flat_index);

    const RingSignature& sig() const { return sig_; }
    const TermMap& terms() const { return terms_; }

    bool is_zero() const { return terms_.empty(); }
    size_t term_count() const { return terms_.size(); }

    void add_term(const ExponentVector& e, const Rational& c);
    Rational coeff(const ExponentVector& e) const;

    DiffOp operator+(const DiffOp& o) const;
    DiffOp operator-(const DiffOp& o) const;
    DiffOp operator-() const;
    DiffOp operator*(const Rational& c) const;
    DiffOp& operator+=(const DiffOp& o);
    DiffOp& operator-=(const DiffOp& o);

    bool operator==(const DiffOp& o) const { return sig_ == o.sig_ && terms_ == o.terms_; }
    bool operator!=(const DiffOp& o) const { return !(*this == o); }

    // Support, ascending in the canonical order.
    std::vector<ExponentVector> newton_diagram() const;

    // Max k+|beta|+|nu| over the support; zero operator answers -1.
    int degree() const;
    bool is_homogeneous() const;
    bool is_plain() const; // no z anywhere
    int min_z() const;     // largest c with z^c dividing every term (0 for zero op)
    DiffOp z_shift(int c) const; // multiply by z^c; c may be negative down to -min_z()

  private:
    RingSignature sig_;
    TermMap terms_;
};

// Product in the homogenized ring: the commutation of a partial past its own
// coordinate produces z. Implemented by the per-variable normal-ordering
// rewrite d*v^a -> v^a*d + a*v^(a-1)*z applied iteratively.
DiffOp multiply(const DiffOp& a, const DiffOp& b);

// Product in the plain operator ring ([d,v] = 1); both inputs must be plain.
DiffOp multiply_plain(const DiffOp& a, const DiffOp& b);

// Pad each term with the z power that lifts it to the operator's top degree.
// Input must be plain.
DiffOp homogenize(const DiffOp& a);

// Ring morphism z -> 1.
DiffOp dehomogenize(const DiffOp& a);

} // namespace dfan
