#pragma once

#include "dfan/orders.hpp"

#include <map>
#include <optional>
#include <vector>

namespace dfan {

// The brute-force side of the house: degree-bounded exact linear algebra
// over monomial windows. Answers are yes-with-certificate or
// unknown-at-bound; a grown window can only turn unknown into yes.

enum class SpanRing { plain, homogenized };

// All exponents of total degree <= bound (k forced to 0 in the plain ring).
struct DegreeWindow {
    RingSignature sig;
    int bound = 6;
    SpanRing ring = SpanRing::homogenized;

    bool admits(const ExponentVector& e) const {
        if (ring == SpanRing::plain && !e.is_plain()) return false;
        return e.total_degree() <= bound;
    }
    bool admits(const DiffOp& P) const;
    std::vector<ExponentVector> monomials() const; // canonically ascending
};

// Row space with distinct pivot exponents under a priority order theta:
// primary key an optional weight form (larger value wins), tie-break the
// canonical order. Fully reducing against the rows yields the unique
// pivot-free representative of a coset; with a weight key that residue
// also minimizes the weight order over the coset.
class EchelonSpan {
  public:
    EchelonSpan(RingSignature sig, std::optional<LinearForm> weight);

    // span generators must be recorded before rows can cite them
    int add_source(DiffOp v); // returns the source index
    const DiffOp& source(int i) const { return sources_[i]; }
    size_t source_count() const { return sources_.size(); }

    // insert the source with the given index into the echelon
    void insert(int source_index);
    // build from every recorded source; the parallel flavor batches the
    // read-only reductions but lands on the same pivot set
    void build_serial();
    void build_parallel();

    struct Reduction {
        DiffOp residue;
        std::map<int, Rational> combination; // source index -> coefficient
    };
    // v == residue + sum combination[i] * source(i); residue is pivot-free
    Reduction reduce(const DiffOp& v) const;

    size_t rank() const { return rows_.size(); }
    std::vector<ExponentVector> pivots() const; // canonically sorted copy
    bool is_pivot(const ExponentVector& e) const { return by_pivot_.count(e) > 0; }

    // largest exponent under theta (weight value, then canonical order)
    bool theta_less(const ExponentVector& a, const ExponentVector& b) const;

  private:
    struct Row {
        DiffOp vec;
        ExponentVector pivot;
        std::map<int, Rational> comb;
    };
    void insert_reduction(int source_index, Reduction r);
    ExponentVector theta_max(const DiffOp& v) const;

    RingSignature sig_;
    std::optional<LinearForm> weight_;
    std::vector<DiffOp> sources_;
    std::vector<Row> rows_;
    std::map<ExponentVector, int, Grlex0Less> by_pivot_;
};

struct OracleAnswer {
    bool yes = false;
    int bound = 0;
    // yes answers carry the exact combination: P - witness == sum
    // multipliers[i] * generator[i], re-verified by multiplication before
    // being returned. witness is zero for plain ideal membership.
    std::vector<DiffOp> multipliers;
    DiffOp witness;
};

struct VbarAnswer {
    bool yes = false;
    std::vector<OracleAnswer> per_form; // aligned with the skeleton
};

// One ideal, one window; spans are built lazily per weight form and cached.
class Oracle {
  public:
    Oracle(RingSignature sig, std::vector<DiffOp> generators, SpanRing ring, int degree_bound,
           bool parallel = false);

    const DegreeWindow& window() const { return window_; }

    // is P in the left ideal spanned by the generators, within the window?
    OracleAnswer member(const DiffOp& P);

    // is there a representative P' of P modulo the ideal with weight order
    // at most k? plain-ring question; witness is the representative found
    OracleAnswer vfilt_member(const DiffOp& P, const VForm& L, const Rational& k);

    // conjunction of vfilt_member over the skeleton at thresholds L(w)
    VbarAnswer vbar_member(const DiffOp& P, const std::vector<VForm>& skeleton,
                           const std::vector<Rational>& w);

  private:
    struct BuiltSpan {
        EchelonSpan span;
        std::vector<std::pair<size_t, ExponentVector>> tags; // source -> (gen, monomial)
    };
    BuiltSpan& span_for(const std::optional<VForm>& L);
    OracleAnswer verified_yes(const DiffOp& P, const DiffOp& witness,
                              const std::map<int, Rational>& comb, const BuiltSpan& built) const;

    RingSignature sig_;
    std::vector<DiffOp> gens_;
    DegreeWindow window_;
    bool parallel_;
    std::map<std::string, BuiltSpan> cache_; // keyed by the weight form text
};

// weight vector pairing: value of l1 V1 + .. + lp Vp on w in Q^p
Rational weight_value(const VForm& L, const std::vector<Rational>& w);

} // namespace dfan
