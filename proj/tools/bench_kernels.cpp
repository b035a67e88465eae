#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>

#include "ctrg/tensor4.hpp"

using namespace ctrg;

namespace {

using Clock = std::chrono::steady_clock;

template <class F>
double best_of(int reps, F&& f) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = Clock::now();
        f();
        best = std::min(best, std::chrono::duration<double>(Clock::now() - t0).count());
    }
    return best;
}

} // namespace

// Serial reference vs parallel kernels on the cubic-tensor shapes of the order-1 flow.
// Usage: bench_kernels [max_dim]
int main(int argc, char** argv) {
    const std::size_t max_dim = argc > 1 ? static_cast<std::size_t>(std::atoi(argv[1])) : 48;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> g;
    std::printf("threads %d\n", kernel_threads());
    std::printf("%-14s %5s %5s %12s %12s %8s %10s\n", "kernel", "n", "p", "serial_s", "parallel_s", "speedup",
                "max_diff");
    for (std::size_t n = 12; n <= max_dim; n += 12) {
        const std::size_t p = n / 2 + n / 4;
        Tensor4 t(n);
        for (double& x : t.v) x = g(rng);
        t = symmetrize(t);
        Mat m(n, p), s(n, n);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = 0; j < p; ++j) m(i, j) = g(rng);
            for (std::size_t j = 0; j < n; ++j) s(i, j) = g(rng);
        }
        const int reps = n <= 24 ? 5 : 2;
        Tensor4 a(p), b(p);
        const double ts = best_of(reps, [&] {
            a = Tensor4(p);
            transform4(t, m, 1.0, a, Backend::Serial);
        });
        const double tp = best_of(reps, [&] {
            b = Tensor4(p);
            transform4(t, m, 1.0, b, Backend::Parallel);
        });
        double diff = 0.0;
        for (std::size_t i = 0; i < a.size(); ++i) diff = std::max(diff, std::abs(a.v[i] - b.v[i]));
        std::printf("%-14s %5zu %5zu %12.4e %12.4e %8.2f %10.2e\n", "transform4", n, p, ts, tp, ts / tp, diff);

        Mat ca, cb;
        const double cs = best_of(reps, [&] { ca = contract_pair(t, s, Backend::Serial); });
        const double cp = best_of(reps, [&] { cb = contract_pair(t, s, Backend::Parallel); });
        std::printf("%-14s %5zu %5zu %12.4e %12.4e %8.2f %10.2e\n", "contract_pair", n, n, cs, cp, cs / cp,
                    max_abs(ca - cb));
    }
    return 0;
}
