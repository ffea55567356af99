#include "ofbm/process.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ofbm/rng.hpp"

namespace ofbm::process {

using matfun::mat_power;
using matfun::spectral_norm;
using std::complex;

namespace {

struct QuadNodes {
    std::vector<double> x;
    std::vector<double> w;
};

// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
    nodes.resize(order);
    weights.resize(order);
    for (int i = 0; i < (order + 1) / 2; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= order; ++k) {
                const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = order * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[order - 1 - i] = w;
    }
}

void append_panel(QuadNodes& out, double a, double b, double omega,
                  const QuadratureConfig& q, const std::vector<double>& gl_x,
                  const std::vector<double>& gl_w) {
    // subdivide so each subpanel holds a bounded number of oscillations
    const double periods = (b - a) * omega / (2.0 * M_PI);
    int nsub = std::max(1, static_cast<int>(std::ceil(periods / q.osc_periods_per_panel)));
    nsub = std::min(nsub, 100000);
    const double h = (b - a) / nsub;
    for (int s = 0; s < nsub; ++s) {
        const double lo = a + s * h, hi = lo + h;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (size_t i = 0; i < gl_x.size(); ++i) {
            out.x.push_back(mid + half * gl_x[i]);
            out.w.push_back(half * gl_w[i]);
        }
    }
}

QuadNodes build_nodes(const QuadratureConfig& q, double omega) {
    if (!(q.x_max > q.singularity_split && q.singularity_split > q.x_min && q.x_min > 0.0))
        throw domain_error("quadrature: require x_max > singularity_split > x_min > 0");
    if (q.panels < 1 || q.nodes_per_panel < 1)
        throw domain_error("quadrature: panels and nodes must be >= 1");

    std::vector<double> gl_x, gl_w;
    gauss_legendre(q.nodes_per_panel, gl_x, gl_w);

    QuadNodes out;
    // inner region [x_min, split]: log-spaced, captures the |x|^{-2D} singularity
    const double rin = std::pow(q.singularity_split / q.x_min, 1.0 / q.panels);
    double a = q.x_min;
    for (int k = 0; k < q.panels; ++k) {
        const double b = (k + 1 == q.panels) ? q.singularity_split : a * rin;
        append_panel(out, a, b, omega, q, gl_x, gl_w);
        a = b;
    }
    // outer region [split, x_max]
    const double rout = std::pow(q.x_max / q.singularity_split, 1.0 / q.panels);
    a = q.singularity_split;
    for (int k = 0; k < q.panels; ++k) {
        const double b = (k + 1 == q.panels) ? q.x_max : a * rout;
        append_panel(out, a, b, omega, q, gl_x, gl_w);
        a = b;
    }
    return out;
}

// (e^{iux} - 1) / (ix), stable near x = 0.
complex<double> kernel_factor(double u, double x) {
    const double ux = u * x;
    const double re = std::sin(ux) / x;
    const double im = 2.0 * std::sin(0.5 * ux) * std::sin(0.5 * ux) / x;
    return {re, im};  // (e^{iux}-1)/(ix) = sin(ux)/x + i(1-cos(ux))/x
}

struct DensityCache {
    std::vector<RealMatrix> re;
    std::vector<RealMatrix> im;
};

// densities F(x_k) F(x_k)^* for the positive-frequency nodes
DensityCache cache_density(const params::SpectralParams& p, const QuadNodes& nodes) {
    const int n = p.n;
    DensityCache cache;
    cache.re.assign(nodes.x.size(), RealMatrix(n, n));
    cache.im.assign(nodes.x.size(), RealMatrix(n, n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long k = 0; k < static_cast<long long>(nodes.x.size()); ++k) {
        RealMatrix b = mat_power(-1.0 * p.d_exponent, nodes.x[k]);
        ComplexMatrix f = b * p.a;
        ComplexMatrix dens = f * f.adjoint();
        cache.re[k] = dens.real();
        cache.im[k] = dens.imag();
    }
    return cache;
}

// index-fixed pairwise reduction, deterministic under any thread count
void pairwise_reduce(std::vector<RealMatrix>& terms) {
    size_t len = terms.size();
    while (len > 1) {
        const size_t half = len / 2;
        for (size_t i = 0; i < half; ++i) terms[i] = terms[2 * i] + terms[2 * i + 1];
        if (len % 2 == 1) {
            terms[half] = terms[len - 1];
            len = half + 1;
        } else {
            len = half;
        }
    }
    terms.resize(1);
}

RealMatrix integrate_pair(const QuadNodes& nodes, const DensityCache& cache, double t,
                          double s, int n, bool parallel) {
    (void)parallel;
    // Gamma(t,s) = 2 Re sum_k w_k kappa_t(x_k) conj(kappa_s(x_k)) density(x_k)
    std::vector<RealMatrix> terms(nodes.x.size(), RealMatrix(n, n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (long long k = 0; k < static_cast<long long>(nodes.x.size()); ++k) {
        const complex<double> kt = kernel_factor(t, nodes.x[k]);
        const complex<double> ks = kernel_factor(s, nodes.x[k]);
        const complex<double> c = kt * std::conj(ks) * nodes.w[k];
        // 2 Re[c * (Re + i Im)] = 2 (Re(c) Re - Im(c) Im)
        terms[k] = (2.0 * c.real()) * cache.re[k] - (2.0 * c.imag()) * cache.im[k];
    }
    pairwise_reduce(terms);
    return terms[0];
}

void require_domain(const params::SpectralParams& p) {
    if (!p.domain_ok)
        throw domain_error(
            "covariance: eigenvalues of D must have real parts in (-1/2, 1/2)");
}

RealMatrix covariance_impl(const params::SpectralParams& p, double t, double s,
                           const QuadratureConfig& q, bool parallel) {
    require_domain(p);
    QuadNodes nodes = build_nodes(q, std::max(std::abs(t), std::abs(s)));
    DensityCache cache = cache_density(p, nodes);
    return integrate_pair(nodes, cache, t, s, p.n, parallel);
}

SamplePaths simulate_impl(const params::SpectralParams& p, const std::vector<double>& times,
                          int n_paths, uint64_t seed, const QuadratureConfig& q,
                          bool parallel) {
    (void)parallel;
    require_domain(p);
    if (!std::is_sorted(times.begin(), times.end()) || (!times.empty() && times.front() < 0.0))
        throw domain_error("simulate: times must be sorted and start at >= 0");
    const int n = p.n;
    const int nt = static_cast<int>(times.size());
    double omega = 0.0;
    for (double t : times) omega = std::max(omega, std::abs(t));

    QuadNodes nodes = build_nodes(q, omega);
    const int nk = static_cast<int>(nodes.x.size());

    // cache F(x_k) and per-(time, node) kernel factors
    std::vector<RealMatrix> f_re(nk, RealMatrix(n, n)), f_im(nk, RealMatrix(n, n));
#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int k = 0; k < nk; ++k) {
        RealMatrix b = mat_power(-1.0 * p.d_exponent, nodes.x[k]);
        ComplexMatrix f = b * p.a;
        f_re[k] = f.real();
        f_im[k] = f.imag();
    }
    std::vector<complex<double>> kappa(static_cast<size_t>(nt) * nk);
    for (int i = 0; i < nt; ++i)
        for (int k = 0; k < nk; ++k)
            kappa[static_cast<size_t>(i) * nk + k] =
                kernel_factor(times[i], nodes.x[k]) * std::sqrt(nodes.w[k]);

    SamplePaths out;
    out.times = times;
    out.n = n;
    out.n_paths = n_paths;
    out.seed = seed;
    out.data.assign(static_cast<size_t>(n_paths) * nt * n, 0.0);

#ifdef _OPENMP
#pragma omp parallel for schedule(static) if (parallel)
#endif
    for (int path = 0; path < n_paths; ++path) {
        Rng rng = Rng::for_substream(seed, static_cast<uint64_t>(path));
        std::vector<double> zr(n), zi(n), vr(n), vi(n);
        double* base = out.data.data() + static_cast<size_t>(path) * nt * n;
        for (int k = 0; k < nk; ++k) {
            const double inv_r2 = 1.0 / std::sqrt(2.0);
            for (int j = 0; j < n; ++j) {
                zr[j] = rng.normal() * inv_r2;
                zi[j] = rng.normal() * inv_r2;
            }
            // v = F(x_k) Z
            for (int i = 0; i < n; ++i) {
                double ar = 0.0, ai = 0.0;
                for (int j = 0; j < n; ++j) {
                    ar += f_re[k](i, j) * zr[j] - f_im[k](i, j) * zi[j];
                    ai += f_re[k](i, j) * zi[j] + f_im[k](i, j) * zr[j];
                }
                vr[i] = ar;
                vi[i] = ai;
            }
            for (int i = 0; i < nt; ++i) {
                const complex<double> c = kappa[static_cast<size_t>(i) * nk + k];
                for (int j = 0; j < n; ++j)
                    base[static_cast<size_t>(i) * n + j] +=
                        2.0 * (c.real() * vr[j] - c.imag() * vi[j]);
            }
        }
    }
    return out;
}

}  // namespace

ComplexMatrix spectral_density(const params::SpectralParams& p, double x) {
    if (x == 0.0) throw domain_error("spectral_density: x must be nonzero");
    RealMatrix b = mat_power(-1.0 * p.d_exponent, std::abs(x));
    ComplexMatrix f = x > 0.0 ? b * p.a : b * p.a.conj();
    return f * f.adjoint();
}

RealMatrix covariance(const params::SpectralParams& p, double t, double s,
                      const QuadratureConfig& q) {
    return covariance_impl(p, t, s, q, true);
}

RealMatrix covariance_serial(const params::SpectralParams& p, double t, double s,
                             const QuadratureConfig& q) {
    // straightforward reference: sequential accumulation in node order
    require_domain(p);
    QuadNodes nodes = build_nodes(q, std::max(std::abs(t), std::abs(s)));
    const int n = p.n;
    RealMatrix acc(n, n);
    for (size_t k = 0; k < nodes.x.size(); ++k) {
        RealMatrix b = mat_power(-1.0 * p.d_exponent, nodes.x[k]);
        ComplexMatrix f = b * p.a;
        ComplexMatrix dens = f * f.adjoint();
        const complex<double> kt = kernel_factor(t, nodes.x[k]);
        const complex<double> ks = kernel_factor(s, nodes.x[k]);
        const complex<double> c = kt * std::conj(ks) * nodes.w[k];
        acc += (2.0 * c.real()) * dens.real() - (2.0 * c.imag()) * dens.imag();
    }
    return acc;
}

CovarianceGrid covariance_grid(const params::SpectralParams& p,
                               const std::vector<double>& times, const QuadratureConfig& q) {
    require_domain(p);
    double omega = 0.0;
    for (double t : times) omega = std::max(omega, std::abs(t));
    QuadNodes nodes = build_nodes(q, omega);
    DensityCache cache = cache_density(p, nodes);

    CovarianceGrid grid;
    grid.times = times;
    const int nt = static_cast<int>(times.size());
    grid.values.assign(nt, std::vector<RealMatrix>(nt));
    for (int i = 0; i < nt; ++i)
        for (int j = i; j < nt; ++j) {
            grid.values[i][j] = integrate_pair(nodes, cache, times[i], times[j], p.n, true);
            if (j != i) grid.values[j][i] = grid.values[i][j].transpose();
        }
    return grid;
}

double covariance_normalization(const params::SpectralParams& p, const QuadratureConfig& q) {
    RealMatrix g = covariance(p, 1.0, 1.0, q);
    return g.trace() / p.n;
}

double oss_check(const params::SpectralParams& p, double c_scale,
                 const std::vector<double>& t_grid, const QuadratureConfig& q) {
    if (!(c_scale > 0.0)) throw domain_error("oss_check: scale must be positive");
    RealMatrix h = p.d_exponent + 0.5 * RealMatrix::identity(p.n);
    RealMatrix ch = mat_power(h, c_scale);

    std::vector<double> scaled;
    for (double t : t_grid) scaled.push_back(c_scale * t);
    CovarianceGrid base = covariance_grid(p, t_grid, q);
    CovarianceGrid big = covariance_grid(p, scaled, q);

    double worst = 0.0;
    for (size_t i = 0; i < t_grid.size(); ++i)
        for (size_t j = 0; j < t_grid.size(); ++j) {
            RealMatrix expect = ch * base.values[i][j] * ch.transpose();
            const double err = frobenius_norm(big.values[i][j] - expect) /
                               std::max(frobenius_norm(big.values[i][j]), 1e-300);
            worst = std::max(worst, err);
        }
    return worst;
}

SamplePaths simulate(const params::SpectralParams& p, const std::vector<double>& times,
                     int n_paths, uint64_t seed, const QuadratureConfig& q) {
    return simulate_impl(p, times, n_paths, seed, q, true);
}

SamplePaths simulate_serial(const params::SpectralParams& p, const std::vector<double>& times,
                            int n_paths, uint64_t seed, const QuadratureConfig& q) {
    return simulate_impl(p, times, n_paths, seed, q, false);
}

std::string paths_to_csv(const SamplePaths& paths) {
    std::string out = "path,t";
    for (int j = 0; j < paths.n; ++j) out += ",component_" + std::to_string(j + 1);
    out += "\n";
    char buf[64];
    for (int p = 0; p < paths.n_paths; ++p) {
        for (size_t i = 0; i < paths.times.size(); ++i) {
            out += std::to_string(p);
            std::snprintf(buf, sizeof(buf), ",%.17g", paths.times[i]);
            out += buf;
            for (int j = 0; j < paths.n; ++j) {
                std::snprintf(buf, sizeof(buf), ",%.17g", paths.at(p, static_cast<int>(i), j));
                out += buf;
            }
            out += "\n";
        }
    }
    return out;
}

bool is_time_reversible(const params::SpectralParams& p, double tol) {
    const RealMatrix& a1 = p.a.real();
    const RealMatrix& a2 = p.a.imag();
    RealMatrix re = a1 * a1.transpose() + a2 * a2.transpose();
    RealMatrix im = a2 * a1.transpose() - a1 * a2.transpose();
    return spectral_norm(im) <= tol * (1.0 + spectral_norm(re));
}

std::complex<double> complex_gamma(std::complex<double> z) {
    static const double coeff[] = {0.99999999999980993,   676.5203681218851,
                                   -1259.1392167224028,   771.32342877765313,
                                   -176.61502916214059,   12.507343278686905,
                                   -0.13857109526572012,  9.9843695780195716e-6,
                                   1.5056327351493116e-7};
    if (std::abs(z.imag()) < 1e-14) {
        const double r = z.real();
        if (r <= 0.0 && std::abs(r - std::round(r)) < 1e-12)
            throw domain_error("complex_gamma: pole at a nonpositive integer");
    }
    if (z.real() < 0.5) {
        // reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        return M_PI / (std::sin(M_PI * z) * complex_gamma(1.0 - z));
    }
    z -= 1.0;
    std::complex<double> x = coeff[0];
    for (int i = 1; i < 9; ++i) x += coeff[i] / (z + static_cast<double>(i));
    const std::complex<double> t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * x;
}

double time_domain_f(double d_val, double c_val, double beta) {
    if (!(d_val > -0.5 && d_val < 0.5) || d_val == 0.0)
        throw domain_error("time_domain_f: require d in (-1/2, 1/2) excluding 0");
    if (!(beta > 0.0 && beta < 2.0 * M_PI) || beta == M_PI)
        throw domain_error("time_domain_f: require beta in (0, 2pi) excluding pi");
    const std::complex<double> g = complex_gamma({d_val + 1.0, c_val});
    const double mag2 = std::norm(g);
    return mag2 * (2.0 * std::cos(beta - M_PI * d_val) + 2.0 * std::cosh(M_PI * c_val));
}

}  // namespace ofbm::process
