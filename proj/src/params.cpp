#include "ofbm/params.hpp"

#include <algorithm>
#include <cmath>

namespace ofbm::params {

using matfun::mat_power;
using matfun::sym_eig;

SpectralParams validate(const RealMatrix& d, const ComplexMatrix& a,
                        const ValidationFlags& flags, const ToleranceConfig& tol) {
    if (!d.is_square()) throw validation_error("validate: D must be square");
    const int n = d.rows();
    if (a.rows() != n || a.cols() != n)
        throw validation_error("validate: A must match the shape of D");
    d.check_finite();
    a.real().check_finite();
    a.imag().check_finite();

    SpectralParams p;
    p.n = n;
    p.d_exponent = d;
    p.a = a;
    p.tolerances = tol;

    const RealMatrix& a1 = a.real();
    const RealMatrix& a2 = a.imag();
    RealMatrix re = a1 * a1.transpose() + a2 * a2.transpose();
    matfun::SymEig e = sym_eig(re, tol);
    const double lmax = e.eigenvalues.front();
    const double lmin = e.eigenvalues.back();
    p.full_rank_ok = lmin > tol.eps_rank * std::max(lmax, 1e-300);
    if (flags.require_full_rank && !p.full_rank_ok)
        throw validation_error("validate: Re(AA*) is rank deficient, smallest eigenvalue " +
                               std::to_string(lmin));

    p.domain_ok = true;
    for (const auto& z : matfun::eigenvalues_general(d)) {
        if (!(z.real() > -0.5 && z.real() < 0.5)) p.domain_ok = false;
    }
    if (flags.require_domain && !p.domain_ok)
        throw validation_error(
            "validate: an eigenvalue of D has real part outside (-1/2, 1/2)");
    return p;
}

DerivedParams derive(const SpectralParams& p) {
    const int n = p.n;
    const RealMatrix& a1 = p.a.real();
    const RealMatrix& a2 = p.a.imag();

    DerivedParams out;
    out.re_aa = a1 * a1.transpose() + a2 * a2.transpose();
    out.im_aa = a2 * a1.transpose() - a1 * a2.transpose();

    matfun::SymEig e = sym_eig(out.re_aa, p.tolerances);
    const double lmax = e.eigenvalues.front();
    RealMatrix sq = RealMatrix::zero(n, n), isq = RealMatrix::zero(n, n);
    for (int i = 0; i < n; ++i) {
        const double l = e.eigenvalues[i];
        if (l <= p.tolerances.eps_rank * std::max(lmax, 1e-300))
            throw domain_error("derive: Re(AA*) not positive definite");
        sq(i, i) = std::sqrt(l);
        isq(i, i) = 1.0 / std::sqrt(l);
    }
    out.w = symmetric_part(e.eigenvectors * sq * e.eigenvectors.transpose());
    out.w_inv = symmetric_part(e.eigenvectors * isq * e.eigenvectors.transpose());
    out.m = out.w_inv * p.d_exponent * out.w;
    return out;
}

RealMatrix pi_x(const DerivedParams& d, double x) {
    if (!(x > 0.0)) throw domain_error("pi_x: x must be positive");
    RealMatrix g = mat_power(-1.0 * d.m, x);
    return g * g.transpose();
}

RealMatrix pi_m(const DerivedParams& d, int m) {
    if (m < 1) throw domain_error("pi_m: m must be >= 1");
    const int n = d.m.rows();
    std::vector<RealMatrix> pow_m{RealMatrix::identity(n)};
    std::vector<RealMatrix> pow_mt{RealMatrix::identity(n)};
    const RealMatrix mt = d.m.transpose();
    for (int k = 1; k <= m; ++k) {
        pow_m.push_back(pow_m.back() * d.m);
        pow_mt.push_back(pow_mt.back() * mt);
    }
    RealMatrix out = RealMatrix::zero(n, n);
    double binom = 1.0;
    for (int k = 0; k <= m; ++k) {
        out += binom * (pow_m[k] * pow_mt[m - k]);
        binom *= static_cast<double>(m - k) / (k + 1);
    }
    return out;
}

RealMatrix pi_I(const DerivedParams& d, const SpectralParams& p) {
    (void)p;
    return d.w_inv * d.im_aa * d.w_inv;
}

namespace {

// Log-symmetric sample points around x=1, always including e^{-1} and e.
std::vector<double> sample_log_points(int count) {
    std::vector<double> logs{-1.0, 1.0};
    double v = 0.1;
    while (static_cast<int>(logs.size()) < count) {
        logs.push_back(-v);
        logs.push_back(v);
        v *= 1.3;
    }
    logs.resize(count);
    std::vector<double> xs;
    xs.reserve(logs.size());
    for (double l : logs) xs.push_back(std::exp(l));
    return xs;
}

// Isometric coordinates on symmetric matrices: diagonal entries as-is,
// off-diagonal pairs scaled by sqrt(2).
std::vector<double> sym_coords(const RealMatrix& s) {
    const int n = s.rows();
    std::vector<double> c;
    c.reserve(n * (n + 1) / 2);
    const double r2 = std::sqrt(2.0);
    for (int i = 0; i < n; ++i) {
        c.push_back(s(i, i));
        for (int j = i + 1; j < n; ++j) c.push_back(r2 * 0.5 * (s(i, j) + s(j, i)));
    }
    return c;
}

RealMatrix sym_from_coords(const std::vector<double>& c, int n) {
    RealMatrix s(n, n);
    const double ir2 = 1.0 / std::sqrt(2.0);
    size_t idx = 0;
    for (int i = 0; i < n; ++i) {
        s(i, i) = c[idx++];
        for (int j = i + 1; j < n; ++j) {
            s(i, j) = ir2 * c[idx];
            s(j, i) = ir2 * c[idx];
            ++idx;
        }
    }
    return s;
}

// Rank-revealed orthonormal span of the given symmetric matrices.
std::vector<RealMatrix> span_of(const std::vector<RealMatrix>& mats, int n, double sigma_null) {
    std::vector<RealMatrix> basis;
    if (mats.empty()) return basis;
    const int k = n * (n + 1) / 2;
    RealMatrix stack(static_cast<int>(mats.size()), k);
    for (size_t r = 0; r < mats.size(); ++r) {
        auto c = sym_coords(mats[r]);
        for (int j = 0; j < k; ++j) stack(static_cast<int>(r), j) = c[j];
    }
    matfun::SvdResult s = matfun::svd(stack);
    const double cut = sigma_null * std::max(s.singular_values.front(), 1e-300);
    for (int j = 0; j < k; ++j) {
        if (s.singular_values[j] < cut) break;
        std::vector<double> col(k);
        for (int i = 0; i < k; ++i) col[i] = s.v(i, j);
        basis.push_back(sym_from_coords(col, n));
    }
    return basis;
}

}  // namespace

PiFamily build_pi_family(const DerivedParams& d, const SpectralParams& p,
                         const PiFamilyConfig& config) {
    const int n = p.n;
    PiFamily fam;
    fam.pi_I = pi_I(d, p);

    const double m_scale = 2.0 * frobenius_norm(d.m) + 1e-30;
    int q = std::max(4, config.sample_count);
    int m_max = config.m_max > 0 ? config.m_max : n * (n + 1);

    int prev_dim = -1;
    for (int round = 0; round < std::max(1, config.max_rounds); ++round) {
        fam.sample_points = sample_log_points(q);
        fam.pi_x_values.clear();
        fam.pi_m_values.clear();

        std::vector<RealMatrix> raw;
        for (double x : fam.sample_points) {
            RealMatrix px = pi_x(d, x);
            fam.pi_x_values.push_back(px);
            RealMatrix delta = px - RealMatrix::identity(n);
            const double nrm = frobenius_norm(delta);
            if (nrm > 1e-12 * std::max(1.0, frobenius_norm(px)))
                raw.push_back((1.0 / nrm) * delta);
        }
        for (int m = 1; m <= m_max; ++m) {
            RealMatrix pm = pi_m(d, m);
            fam.pi_m_values.push_back(pm);
            const double nrm = frobenius_norm(pm);
            if (nrm > 1e-12 * std::pow(m_scale, m)) raw.push_back((1.0 / nrm) * pm);
        }

        fam.span_basis = span_of(raw, n, p.tolerances.sigma_null);
        const int dim = static_cast<int>(fam.span_basis.size());
        if (dim == prev_dim) return fam;  // stable across two rounds
        prev_dim = dim;
        q *= 2;
        m_max = std::min(2 * m_max, 4 * n * (n + 1));
    }
    fam.warnings.push_back("span dimension did not stabilize within the round budget");
    return fam;
}

}  // namespace ofbm::params
