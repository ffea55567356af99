#pragma once

#include <cmath>
#include <cstdint>

#include "ofbm/matrix.hpp"

namespace ofbm {

/// Deterministic splitmix64 stream with Box-Muller normals. Streams derived
/// from a master seed and a counter are independent for practical purposes,
/// which keeps parallel path generation reproducible regardless of thread
/// count or execution order.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed ^ 0x9e3779b97f4a7c15ull) {}

    static Rng for_substream(uint64_t master_seed, uint64_t index) {
        // hash the (seed, index) pair so adjacent indices decorrelate
        uint64_t z = master_seed + 0x9e3779b97f4a7c15ull * (index + 1);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return Rng(z ^ (z >> 31));
    }

    uint64_t next_u64() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Standard normal via Box-Muller; consumes uniforms in pairs.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    /// Haar-ish random orthogonal matrix: Gram-Schmidt of a Gaussian matrix
    /// with the R-diagonal sign fix.
    RealMatrix random_orthogonal(int n) {
        RealMatrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = normal();
        for (int j = 0; j < n; ++j) {
            for (int k = 0; k < j; ++k) {
                double dot = 0.0;
                for (int i = 0; i < n; ++i) dot += g(i, j) * g(i, k);
                for (int i = 0; i < n; ++i) g(i, j) -= dot * g(i, k);
            }
            double nrm = 0.0;
            for (int i = 0; i < n; ++i) nrm += g(i, j) * g(i, j);
            nrm = std::sqrt(nrm);
            if (nrm < 1e-12) {  // essentially impossible; restart the column
                for (int i = 0; i < n; ++i) g(i, j) = normal();
                --j;
                continue;
            }
            for (int i = 0; i < n; ++i) g(i, j) /= nrm;
        }
        return g;
    }

private:
    uint64_t state_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace ofbm
