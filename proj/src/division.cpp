#include "dfan/division.hpp"

namespace dfan {

DivisionResult divide(const DiffOp& P, const std::vector<DiffOp>& divisors,
                      const std::vector<ExponentVector>& marks, const OrderSpec& ord,
                      long budget) {
    if (divisors.empty()) throw InvariantViolation("division needs at least one divisor");
    if (divisors.size() != marks.size())
        throw InvariantViolation("divisor/mark count mismatch");
    const RingSignature sig = P.sig();
    std::vector<Rational> lc(divisors.size());
    for (size_t j = 0; j < divisors.size(); ++j) {
        require_same(sig, divisors[j].sig());
        if (divisors[j].is_zero()) throw InvariantViolation("zero divisor");
        if (leading_exponent(divisors[j], ord) != marks[j])
            throw InvariantViolation("mark is not the leading exponent of its divisor");
        lc[j] = divisors[j].coeff(marks[j]);
    }
    PartitionSpec part{marks};

    DivisionResult res;
    res.quotients.assign(divisors.size(), DiffOp(sig));
    res.remainder = DiffOp(sig);
    res.tail = DiffOp(sig);

    DiffOp S = P;
    while (!S.is_zero()) {
        if (res.steps >= budget) {
            res.truncated = true;
            res.tail = S;
            break;
        }
        ++res.steps;
        ExponentVector m = leading_exponent(S, ord);
        Rational c = S.coeff(m);
        int j = part.route(m);
        if (j < 0) {
            res.remainder.add_term(m, c);
            S.add_term(m, -c);
        } else {
            Rational q = c / lc[j];
            ExponentVector shift = m - marks[j];
            res.quotients[j].add_term(shift, q);
            S -= multiply(DiffOp::monomial(sig, shift, q), divisors[j]);
        }
    }
    return res;
}

DivisionResult divide(const DiffOp& P, const std::vector<DiffOp>& divisors, const OrderSpec& ord,
                      long budget) {
    std::vector<ExponentVector> marks;
    marks.reserve(divisors.size());
    for (const auto& Q : divisors) marks.push_back(leading_exponent(Q, ord));
    return divide(P, divisors, marks, ord, budget);
}

} // namespace dfan
