#include "ofbm/exponents.hpp"

#include <cmath>

namespace ofbm::exponents {

using matfun::mat_power;

std::vector<RealMatrix> tangent_space(const symmetry::SymmetryClassification& c) {
    std::vector<RealMatrix> out;
    const RealMatrix& w = c.conjugacy_w;
    RealMatrix w_inv = matfun::spd_inverse(w);
    for (const auto& l : c.tangent_generators) out.push_back(w * l * w_inv);
    return out;
}

ExponentSet exponent_set(const params::SpectralParams& p,
                         const symmetry::SymmetryClassification& c) {
    ExponentSet out;
    out.base_exponent = p.d_exponent + 0.5 * RealMatrix::identity(p.n);
    out.tangent_basis = tangent_space(c);
    out.unique = out.tangent_basis.empty();
    return out;
}

CommutingExponent commuting_exponent(const params::SpectralParams& p,
                                     const symmetry::SymmetryClassification& c) {
    const int n = p.n;
    RealMatrix h = p.d_exponent + 0.5 * RealMatrix::identity(n);
    RealMatrix w_inv = matfun::spd_inverse(c.conjugacy_w);

    // commutation constraints: every finite element and tangent generator,
    // conjugated to the process side
    std::vector<RealMatrix> constraints;
    for (const auto& o : c.finite_elements) constraints.push_back(c.conjugacy_w * o * w_inv);
    std::vector<RealMatrix> tangent = tangent_space(c);
    for (const auto& t : tangent) constraints.push_back(t);

    CommutingExponent out;
    const int dim = static_cast<int>(tangent.size());
    if (dim > 0) {
        // minimize sum_C |(H + sum_j t_j T_j) C - C (...)|_F^2 over t
        const int rows = static_cast<int>(constraints.size()) * n * n;
        RealMatrix a(rows, dim);
        RealMatrix b(rows, 1);
        int r0 = 0;
        for (const auto& cc : constraints) {
            RealMatrix rhs = -1.0 * (h * cc - cc * h);
            for (int j = 0; j < dim; ++j) {
                RealMatrix col = tangent[j] * cc - cc * tangent[j];
                for (int i = 0; i < n; ++i)
                    for (int k = 0; k < n; ++k) a(r0 + i * n + k, j) = col(i, k);
            }
            for (int i = 0; i < n; ++i)
                for (int k = 0; k < n; ++k) b(r0 + i * n + k, 0) = rhs(i, k);
            r0 += n * n;
        }
        // normal equations via eigendecomposition pseudo-inverse (dim <= 3)
        RealMatrix g = a.transpose() * a;
        RealMatrix rhs = a.transpose() * b;
        matfun::SymEig e = matfun::sym_eig(symmetric_part(g));
        RealMatrix t(dim, 1);
        for (int j = 0; j < dim; ++j) {
            double coef = 0.0;
            for (int i = 0; i < dim; ++i) coef += e.eigenvectors(i, j) * rhs(i, 0);
            const double lam = e.eigenvalues[j];
            if (lam > 1e-12 * std::max(1.0, e.eigenvalues.front())) {
                for (int i = 0; i < dim; ++i) t(i, 0) += e.eigenvectors(i, j) * coef / lam;
            }
        }
        out.h0 = h;
        for (int j = 0; j < dim; ++j) out.h0 += t(j, 0) * tangent[j];
    } else {
        out.h0 = h;
    }

    double res2 = 0.0;
    for (const auto& cc : constraints) {
        const double r = frobenius_norm(out.h0 * cc - cc * out.h0);
        res2 += r * r;
    }
    out.residual = std::sqrt(res2) / (1.0 + frobenius_norm(out.h0));
    return out;
}

double density_invariance_check(const params::SpectralParams& p,
                                const params::DerivedParams& d,
                                const symmetry::SymmetryClassification& c,
                                const std::vector<double>& t_grid) {
    std::vector<RealMatrix> tangent = tangent_space(c);
    if (tangent.empty()) return 0.0;

    std::vector<double> xs;
    for (double l : {-1.0, -0.5, -0.2, 0.2, 0.5, 1.0}) xs.push_back(std::exp(l));

    double worst = 0.0;
    for (const auto& delta : tangent) {
        for (double t : t_grid) {
            RealMatrix dt = p.d_exponent + t * delta;
            for (double x : xs) {
                RealMatrix b0 = mat_power(-1.0 * p.d_exponent, x);
                RealMatrix b1 = mat_power(-1.0 * dt, x);
                RealMatrix r0 = b0 * d.re_aa * b0.transpose();
                RealMatrix i0 = b0 * d.im_aa * b0.transpose();
                RealMatrix r1 = b1 * d.re_aa * b1.transpose();
                RealMatrix i1 = b1 * d.im_aa * b1.transpose();
                const double num = std::hypot(frobenius_norm(r1 - r0), frobenius_norm(i1 - i0));
                const double den = std::hypot(frobenius_norm(r0), frobenius_norm(i0));
                worst = std::max(worst, num / den);
            }
        }
    }
    return worst;
}

}  // namespace ofbm::exponents
