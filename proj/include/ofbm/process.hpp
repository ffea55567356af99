#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ofbm/params.hpp"

namespace ofbm::process {

/// Quadrature layout: log-spaced panels split at |x| = singularity_split,
/// running from x_min up to x_max, nodes_per_panel Gauss-Legendre nodes per
/// (sub)panel. Panels are auto-subdivided so that no subpanel spans more than
/// osc_periods_per_panel oscillation periods of the kernel frequency.
struct QuadratureConfig {
    double x_max = 1e4;
    int panels = 40;  // per region (inner and outer), per side of the origin
    int nodes_per_panel = 32;
    double singularity_split = 1.0;
    double x_min = 1e-30;
    double osc_periods_per_panel = 8.0;
};

struct CovarianceGrid {
    std::vector<double> times;
    std::vector<std::vector<RealMatrix>> values;  // values[i][j] = Gamma(t_i, t_j)
};

struct SamplePaths {
    std::vector<double> times;
    int n = 0;
    int n_paths = 0;
    uint64_t seed = 0;
    std::vector<double> data;  // [path][time][component]

    double at(int path, int time_idx, int comp) const {
        return data[(static_cast<size_t>(path) * times.size() + time_idx) * n + comp];
    }
};

/// Spectral density F(x) F(x)* with F(x) = x_+^{-D} A + x_-^{-D} conj(A).
ComplexMatrix spectral_density(const params::SpectralParams& p, double x);

/// Gamma(t,s) = int (e^{itx}-1)(e^{-isx}-1)/x^2 density(x) dx by composite
/// Gauss-Legendre over the node layout above. The +-x contributions are
/// conjugate, so they are folded into 2 Re(...) over positive frequencies and
/// the imaginary residue vanishes identically. OpenMP-parallel over nodes
/// with an index-fixed pairwise reduction, so results do not depend on
/// thread count.
RealMatrix covariance(const params::SpectralParams& p, double t, double s,
                      const QuadratureConfig& q = {});

/// Plain serial reference implementation kept for testing the parallel kernel.
RealMatrix covariance_serial(const params::SpectralParams& p, double t, double s,
                             const QuadratureConfig& q = {});

CovarianceGrid covariance_grid(const params::SpectralParams& p,
                               const std::vector<double>& times,
                               const QuadratureConfig& q = {});

/// trace(Gamma(1,1))/n, the scale for the "unit trace" normalization option.
double covariance_normalization(const params::SpectralParams& p,
                                const QuadratureConfig& q = {});

/// Max relative error of Gamma(ct, cs) versus c^H Gamma(t,s) (c^H)^T over the
/// time grid.
double oss_check(const params::SpectralParams& p, double c_scale,
                 const std::vector<double>& t_grid, const QuadratureConfig& q = {});

/// Discretized spectral synthesis on the covariance quadrature nodes; one
/// deterministic substream per path, OpenMP-parallel over paths.
SamplePaths simulate(const params::SpectralParams& p, const std::vector<double>& times,
                     int n_paths, uint64_t seed, const QuadratureConfig& q = {});

/// Serial reference for the parallel path kernel (bit-identical output).
SamplePaths simulate_serial(const params::SpectralParams& p,
                            const std::vector<double>& times, int n_paths, uint64_t seed,
                            const QuadratureConfig& q = {});

std::string paths_to_csv(const SamplePaths& paths);

bool is_time_reversible(const params::SpectralParams& p, double tol);

/// Lanczos-approximation Gamma function with reflection for Re(z) < 1/2.
std::complex<double> complex_gamma(std::complex<double> z);

/// |Gamma(d+ic+1)|^2 (2cos(beta - pi d) + 2cosh(pi c)); the time-domain
/// spectral factor whose dependence on c shows the time-domain parameters
/// cannot be chosen uniformly across exponents.
double time_domain_f(double d_val, double c_val, double beta);

}  // namespace ofbm::process
