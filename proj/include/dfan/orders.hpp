#pragma once

#include "dfan/diffop.hpp"

#include <compare>
#include <optional>
#include <string>
#include <vector>

namespace dfan {

// Weight form on exponents: e-weights on the coordinate block, f-weights on
// the derivation block, nothing on z.
struct LinearForm {
    RingSignature sig;
    std::vector<Rational> e; // size m, weights for (alpha, mu)
    std::vector<Rational> f; // size m, weights for (beta, nu)

    LinearForm() = default;
    LinearForm(RingSignature s, std::vector<Rational> ew, std::vector<Rational> fw);

    Rational value(const ExponentVector& x) const;

    // Admissible region: e_i <= 0 and e_i + f_i >= 0 for every variable.
    bool in_U() const;

    bool is_zero() const;
    bool operator==(const LinearForm&) const = default;

    // Do the two forms span the same ray? (both nonzero, positive multiple)
    bool same_ray(const LinearForm& o) const;
};

// The weight family actually swept by the fan: value nu_j - mu_j per
// auxiliary pair, nonnegative multipliers l.
struct VForm {
    RingSignature sig;
    std::vector<Rational> l; // size p, each >= 0

    VForm() = default;
    VForm(RingSignature s, std::vector<Rational> mult);

    static VForm axis(RingSignature s, int j); // V_j
    LinearForm linear() const;
    Rational value(const ExponentVector& x) const;
    bool operator==(const VForm&) const = default;
    std::string to_string() const; // "V:1,2"
};

// Total orders on exponents. All four share the small-tier vocabulary:
//   form value, then |beta|+|nu|, then the REVERSED canonical order
// (larger canonically means smaller here, the local convention).
class OrderSpec {
  public:
    enum class Kind {
        Form,      // L value, deriv degree, reversed canonical
        HomForm,   // h-degree first, then as Form
        ConeLimit, // h-degree, L value, then Form(direction) tiers
        LowerLimit // h-degree, L value, then Form(V_1) tiers
    };

    static OrderSpec form(LinearForm L);
    static OrderSpec hom_form(LinearForm L);
    static OrderSpec hom_form(const VForm& L) { return hom_form(L.linear()); }
    // Limit of hom_form taken from the `direction` side of L; requires the
    // two forms to span different rays.
    static OrderSpec cone_limit(LinearForm L, LinearForm direction);
    static OrderSpec cone_limit(const VForm& L, const VForm& d) {
        return cone_limit(L.linear(), d.linear());
    }
    // Limit of hom_form approaching L from the V_1 side.
    static OrderSpec lower_limit(const VForm& L);

    Kind kind() const { return kind_; }
    const LinearForm& L() const { return L_; }
    const LinearForm& direction() const { return dir_; }

    std::strong_ordering compare(const ExponentVector& a, const ExponentVector& b) const;
    bool less(const ExponentVector& a, const ExponentVector& b) const {
        return compare(a, b) == std::strong_ordering::less;
    }

    std::string to_string() const;

  private:
    Kind kind_;
    LinearForm L_;
    LinearForm dir_; // ConeLimit / LowerLimit tie-break form
};

// Largest exponent of the support; operator must be nonzero.
ExponentVector leading_exponent(const DiffOp& P, const OrderSpec& ord);

// max of L over the support; nullopt encodes -infinity (zero operator).
std::optional<Rational> l_order(const DiffOp& P, const LinearForm& L);
inline std::optional<Rational> l_order(const DiffOp& P, const VForm& L) {
    return l_order(P, L.linear());
}

// Subsum of the terms attaining l_order; zero operator maps to itself.
DiffOp l_symbol(const DiffOp& P, const LinearForm& L);
inline DiffOp l_symbol(const DiffOp& P, const VForm& L) { return l_symbol(P, L.linear()); }

} // namespace dfan
