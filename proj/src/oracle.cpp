#include "dfan/oracle.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

#include <algorithm>

namespace dfan {

bool DegreeWindow::admits(const DiffOp& P) const {
    for (const auto& [e, c] : P.terms())
        if (!admits(e)) return false;
    return true;
}

std::vector<ExponentVector> DegreeWindow::monomials() const {
    std::vector<ExponentVector> out;
    ExponentVector cur(sig);
    int coords = sig.coords();
    int last = ring == SpanRing::plain ? coords - 1 : coords; // skip k when plain
    // odometer over entries with total degree capped
    auto rec = [&](auto&& self, int idx, int left) -> void {
        if (idx == last) {
            out.push_back(cur);
            return;
        }
        for (int v = 0; v <= left; ++v) {
            cur.raw()[idx] = v;
            self(self, idx + 1, left - v);
        }
        cur.raw()[idx] = 0;
    };
    rec(rec, 0, bound);
    std::sort(out.begin(), out.end(), Grlex0Less{});
    return out;
}

EchelonSpan::EchelonSpan(RingSignature sig, std::optional<LinearForm> weight)
    : sig_(sig), weight_(std::move(weight)) {}

int EchelonSpan::add_source(DiffOp v) {
    require_same(sig_, v.sig());
    sources_.push_back(std::move(v));
    return (int)sources_.size() - 1;
}

bool EchelonSpan::theta_less(const ExponentVector& a, const ExponentVector& b) const {
    if (weight_) {
        Rational va = weight_->value(a), vb = weight_->value(b);
        if (va != vb) return va < vb;
    }
    return grlex0_cmp(a, b) < 0;
}

ExponentVector EchelonSpan::theta_max(const DiffOp& v) const {
    const ExponentVector* best = nullptr;
    for (const auto& [e, c] : v.terms())
        if (!best || theta_less(*best, e)) best = &e;
    return *best;
}

EchelonSpan::Reduction EchelonSpan::reduce(const DiffOp& v) const {
    Reduction r{v, {}};
    for (;;) {
        // highest pivot occurrence in the residue
        const ExponentVector* hit = nullptr;
        for (const auto& [e, c] : r.residue.terms()) {
            if (!by_pivot_.count(e)) continue;
            if (!hit || theta_less(*hit, e)) hit = &e;
        }
        if (!hit) return r;
        const Row& row = rows_[by_pivot_.at(*hit)];
        Rational c = r.residue.coeff(*hit); // row is unitary at its pivot
        r.residue -= row.vec * c;
        for (const auto& [i, rc] : row.comb) {
            Rational& slot = r.combination[i];
            slot += c * rc;
            if (sign(slot) == 0) r.combination.erase(i);
        }
    }
}

void EchelonSpan::insert_reduction(int source_index, Reduction r) {
    // catch rows added after r was computed, then fold the passes together
    Reduction r2 = reduce(r.residue);
    for (const auto& [i, c] : r2.combination) {
        Rational& slot = r.combination[i];
        slot += c;
        if (sign(slot) == 0) r.combination.erase(i);
    }
    if (r2.residue.is_zero()) return;
    Row row;
    row.pivot = theta_max(r2.residue);
    Rational lc = r2.residue.coeff(row.pivot);
    row.vec = r2.residue * (Rational(1) / lc);
    // residue == source - sum comb_i src_i, so the row cites the source
    row.comb[source_index] = Rational(1) / lc;
    for (const auto& [i, rc] : r.combination) {
        Rational& slot = row.comb[i];
        slot -= rc / lc;
        if (sign(slot) == 0) row.comb.erase(i);
    }
    by_pivot_[row.pivot] = (int)rows_.size();
    rows_.push_back(std::move(row));
}

void EchelonSpan::insert(int source_index) {
    insert_reduction(source_index, Reduction{sources_[source_index], {}});
}

void EchelonSpan::build_serial() {
    for (size_t i = 0; i < sources_.size(); ++i) insert((int)i);
}

void EchelonSpan::build_parallel() {
    // chunks reduce read-only against the frozen echelon in parallel; the
    // serial tail resolves dependencies inside each chunk
    const size_t chunk = 64;
    for (size_t start = 0; start < sources_.size(); start += chunk) {
        size_t stop = std::min(sources_.size(), start + chunk);
        std::vector<Reduction> reds(stop - start);
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (size_t i = start; i < stop; ++i) reds[i - start] = reduce(sources_[i]);
        for (size_t i = start; i < stop; ++i)
            insert_reduction((int)i, std::move(reds[i - start]));
    }
}

std::vector<ExponentVector> EchelonSpan::pivots() const {
    std::vector<ExponentVector> out;
    out.reserve(rows_.size());
    for (const auto& [e, i] : by_pivot_) out.push_back(e);
    return out;
}

Rational weight_value(const VForm& L, const std::vector<Rational>& w) {
    if ((int)w.size() != L.sig.p) throw InvariantViolation("weight vector needs p entries");
    Rational v = 0;
    for (int j = 0; j < L.sig.p; ++j) v += L.l[j] * w[j];
    return v;
}

Oracle::Oracle(RingSignature sig, std::vector<DiffOp> generators, SpanRing ring, int degree_bound,
               bool parallel)
    : sig_(sig), gens_(std::move(generators)), window_{sig, degree_bound, ring},
      parallel_(parallel) {
    for (const auto& g : gens_) {
        require_same(sig_, g.sig());
        if (g.is_zero()) throw InvariantViolation("oracle generator is zero");
        if (ring == SpanRing::plain && !g.is_plain())
            throw InvariantViolation("plain-ring oracle needs plain generators");
    }
}

Oracle::BuiltSpan& Oracle::span_for(const std::optional<VForm>& L) {
    std::string key = L ? L->to_string() : "<canonical>";
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;

    BuiltSpan built{EchelonSpan(sig_, L ? std::optional<LinearForm>(L->linear()) : std::nullopt),
                    {}};
    // span of m*g over window monomials m with deg(m) + deg(g) <= bound;
    // products never exceed the sum of the factors' degrees
    std::vector<ExponentVector> monos = window_.monomials();
    for (size_t gi = 0; gi < gens_.size(); ++gi) {
        const DiffOp& g = gens_[gi];
        int gd = 0;
        for (const auto& [e, c] : g.terms()) gd = std::max(gd, e.total_degree());
        for (const auto& m : monos) {
            if (m.total_degree() + gd > window_.bound) continue;
            DiffOp mg = window_.ring == SpanRing::plain
                            ? multiply_plain(DiffOp::monomial(sig_, m, 1), g)
                            : multiply(DiffOp::monomial(sig_, m, 1), g);
            if (!window_.admits(mg))
                throw InvariantViolation("window product escaped the degree bound");
            built.span.add_source(std::move(mg));
            built.tags.push_back({gi, m});
        }
    }
    if (parallel_)
        built.span.build_parallel();
    else
        built.span.build_serial();
    return cache_.emplace(std::move(key), std::move(built)).first->second;
}

OracleAnswer Oracle::verified_yes(const DiffOp& P, const DiffOp& witness,
                                  const std::map<int, Rational>& comb,
                                  const BuiltSpan& built) const {
    OracleAnswer a;
    a.yes = true;
    a.bound = window_.bound;
    a.witness = witness;
    a.multipliers.assign(gens_.size(), DiffOp(sig_));
    for (const auto& [i, c] : comb) {
        const auto& [gi, m] = built.tags.at(i);
        a.multipliers[gi].add_term(m, c);
    }
    // certificates are checked, not trusted
    DiffOp recon(sig_);
    for (size_t gi = 0; gi < gens_.size(); ++gi) {
        if (a.multipliers[gi].is_zero()) continue;
        recon += window_.ring == SpanRing::plain ? multiply_plain(a.multipliers[gi], gens_[gi])
                                                 : multiply(a.multipliers[gi], gens_[gi]);
    }
    if (!(recon + witness == P)) throw InvariantViolation("oracle certificate failed to verify");
    return a;
}

OracleAnswer Oracle::member(const DiffOp& P) {
    OracleAnswer unknown;
    unknown.bound = window_.bound;
    if (P.is_zero()) {
        OracleAnswer a;
        a.yes = true;
        a.bound = window_.bound;
        a.multipliers.assign(gens_.size(), DiffOp(sig_));
        return a;
    }
    if (!window_.admits(P)) return unknown;
    BuiltSpan& built = span_for(std::nullopt);
    auto red = built.span.reduce(P);
    if (!red.residue.is_zero()) return unknown;
    return verified_yes(P, DiffOp(sig_), red.combination, built);
}

OracleAnswer Oracle::vfilt_member(const DiffOp& P, const VForm& L, const Rational& k) {
    if (window_.ring != SpanRing::plain)
        throw InvariantViolation("filtration membership is a plain-ring question");
    if (!P.is_plain()) throw InvariantViolation("filtration membership needs a plain operator");
    OracleAnswer unknown;
    unknown.bound = window_.bound;

    auto ord = l_order(P, L);
    if (!ord || *ord <= k) { // already low enough, P witnesses itself
        OracleAnswer a;
        a.yes = true;
        a.bound = window_.bound;
        a.witness = P;
        a.multipliers.assign(gens_.size(), DiffOp(sig_));
        return a;
    }
    if (!window_.admits(P)) return unknown;
    BuiltSpan& built = span_for(L);
    auto red = built.span.reduce(P);
    // the pivot-free residue minimizes the weight order over the coset
    auto rord = l_order(red.residue, L);
    if (rord && *rord > k) return unknown;
    return verified_yes(P, red.residue, red.combination, built);
}

VbarAnswer Oracle::vbar_member(const DiffOp& P, const std::vector<VForm>& skeleton,
                               const std::vector<Rational>& w) {
    if (skeleton.empty()) throw InvariantViolation("empty skeleton");
    VbarAnswer out;
    out.yes = true;
    for (const auto& L : skeleton) {
        OracleAnswer a = vfilt_member(P, L, weight_value(L, w));
        out.yes = out.yes && a.yes;
        out.per_form.push_back(std::move(a));
    }
    return out;
}

} // namespace dfan
