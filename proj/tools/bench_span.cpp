// Times the exact echelon elimination that backs the oracle: serial build
// against the OpenMP batched build, on the same source list. The two must
// land on identical pivot sets; timings are wall clock.

#include "dfan/malgrange.hpp"
#include "dfan/oracle.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>

using namespace dfan;

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    auto dt = std::chrono::steady_clock::now() - t0;
    return std::chrono::duration<double>(dt).count();
}

// window span of the repeated-line annihilator, same construction the
// oracle uses: left monomial multiples that stay under the degree bound
void fill_sources(EchelonSpan& span, const std::vector<DiffOp>& gens, const DegreeWindow& window) {
    std::vector<ExponentVector> monos = window.monomials();
    for (const DiffOp& g : gens) {
        int gd = 0;
        for (const auto& [e, c] : g.terms()) gd = std::max(gd, e.total_degree());
        for (const auto& m : monos) {
            if (m.total_degree() + gd > window.bound) continue;
            span.add_source(multiply_plain(DiffOp::monomial(window.sig, m, 1), g));
        }
    }
}

} // namespace

int main(int argc, char** argv) {
    int bound = argc > 1 ? std::atoi(argv[1]) : 7;
    if (bound < 2) {
        std::fprintf(stderr, "usage: bench_span [degree_bound >= 2]\n");
        return 2;
    }

    RingSignature sig{1, 2};
    DiffOp x1 = DiffOp::monomial(sig, [&] {
        ExponentVector e(sig);
        e.alpha(0) = 1;
        return e;
    }(), 1);
    PolynomialMap f(sig, {x1, x1});
    std::vector<DiffOp> gens = annihilator_generators(f);
    DegreeWindow window{sig, bound, SpanRing::plain};

    VForm v1 = VForm::axis(sig, 1);
    EchelonSpan serial(sig, v1.linear());
    EchelonSpan parallel(sig, v1.linear());
    fill_sources(serial, gens, window);
    fill_sources(parallel, gens, window);
    std::printf("degree bound %d, %zu sources, %zu window monomials\n", bound,
                serial.source_count(), window.monomials().size());

    auto t0 = std::chrono::steady_clock::now();
    serial.build_serial();
    double ts = seconds_since(t0);
    std::printf("serial    %8.3f s   rank %zu\n", ts, serial.rank());

    t0 = std::chrono::steady_clock::now();
    parallel.build_parallel();
    double tp = seconds_since(t0);
    std::printf("parallel  %8.3f s   rank %zu\n", tp, parallel.rank());

    if (serial.rank() != parallel.rank() || serial.pivots() != parallel.pivots()) {
        std::printf("FAIL: pivot sets differ\n");
        return 1;
    }
    std::printf("pivot sets identical, speedup %.2fx\n", tp > 0 ? ts / tp : 0.0);
    return 0;
}
