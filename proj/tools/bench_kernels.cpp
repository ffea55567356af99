// Timing comparison of the OpenMP quadrature/simulation kernels against their
// serial reference implementations.

#include <chrono>
#include <cstdio>

#include "ofbm/process.hpp"

using namespace ofbm;
using Clock = std::chrono::steady_clock;

namespace {

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

}  // namespace

int main() {
    params::SpectralParams p =
        params::validate(RealMatrix::diag({0.15, 0.25, 0.35}),
                         ComplexMatrix(RealMatrix::identity(3)));
    process::QuadratureConfig q;

    std::printf("%-34s %12s %12s %8s\n", "kernel", "serial [ms]", "parallel [ms]", "speedup");

    {
        auto t0 = Clock::now();
        RealMatrix ref = process::covariance_serial(p, 2.0, 1.5, q);
        const double serial = ms_since(t0);
        t0 = Clock::now();
        RealMatrix fast = process::covariance(p, 2.0, 1.5, q);
        const double parallel = ms_since(t0);
        std::printf("%-34s %12.2f %12.2f %8.2f   (diff %.2e)\n", "covariance quadrature",
                    serial, parallel, serial / parallel, frobenius_norm(fast - ref));
    }

    {
        const std::vector<double> times{0.25, 0.5, 0.75, 1.0};
        const int n_paths = 2000;
        auto t0 = Clock::now();
        process::SamplePaths ref = process::simulate_serial(p, times, n_paths, 42, q);
        const double serial = ms_since(t0);
        t0 = Clock::now();
        process::SamplePaths fast = process::simulate(p, times, n_paths, 42, q);
        const double parallel = ms_since(t0);
        const bool identical = process::paths_to_csv(ref) == process::paths_to_csv(fast);
        std::printf("%-34s %12.2f %12.2f %8.2f   (%s)\n", "spectral path synthesis", serial,
                    parallel, serial / parallel,
                    identical ? "bit-identical" : "MISMATCH");
    }
    return 0;
}
