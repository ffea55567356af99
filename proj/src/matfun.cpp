#include "ofbm/matfun.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ofbm::matfun {

namespace {

// 1-norm (max column sum), the scale used by the expm scaling schedule.
double one_norm(const RealMatrix& m) {
    double best = 0.0;
    for (int j = 0; j < m.cols(); ++j) {
        double s = 0.0;
        for (int i = 0; i < m.rows(); ++i) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

// Solve A X = B for square A by Gaussian elimination with partial pivoting.
RealMatrix solve(RealMatrix a, RealMatrix b) {
    const int n = a.rows();
    for (int k = 0; k < n; ++k) {
        int piv = k;
        for (int i = k + 1; i < n; ++i)
            if (std::abs(a(i, k)) > std::abs(a(piv, k))) piv = i;
        if (a(piv, k) == 0.0) throw numeric_error("solve: singular matrix");
        if (piv != k)
            for (int j = 0; j < n; ++j) {
                std::swap(a(k, j), a(piv, j));
                std::swap(b(k, j), b(piv, j));
            }
        for (int i = k + 1; i < n; ++i) {
            const double f = a(i, k) / a(k, k);
            if (f == 0.0) continue;
            for (int j = k; j < n; ++j) a(i, j) -= f * a(k, j);
            for (int j = 0; j < n; ++j) b(i, j) -= f * b(k, j);
        }
    }
    for (int k = n - 1; k >= 0; --k)
        for (int j = 0; j < n; ++j) {
            double s = b(k, j);
            for (int i = k + 1; i < n; ++i) s -= a(k, i) * b(i, j);
            b(k, j) = s / a(k, k);
        }
    return b;
}

}  // namespace

RealMatrix expm(const RealMatrix& m) {
    if (!m.is_square()) throw shape_error("expm: matrix must be square");
    m.check_finite();
    const int n = m.rows();

    // Degree-13 Pade coefficients (Higham 2005).
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};
    constexpr double theta13 = 5.371920351148152;

    const double nrm = one_norm(m);
    int s = 0;
    if (nrm > theta13) {
        s = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
        if (s > 60) throw numeric_error("expm: norm too large for the scaling schedule");
    }
    RealMatrix a = m * std::ldexp(1.0, -s);

    const RealMatrix a2 = a * a;
    const RealMatrix a4 = a2 * a2;
    const RealMatrix a6 = a4 * a2;
    const RealMatrix id = RealMatrix::identity(n);

    RealMatrix u = a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
                        b[3] * a2 + b[1] * id);
    RealMatrix v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 + b[4] * a4 +
                   b[2] * a2 + b[0] * id;

    RealMatrix r = solve(v - u, v + u);
    for (int i = 0; i < s; ++i) r = r * r;
    return r;
}

RealMatrix mat_power(const RealMatrix& m, double x) {
    if (!(x > 0.0)) throw domain_error("mat_power: exponent base must be positive");
    if (x == 1.0) return RealMatrix::identity(m.rows());
    return expm(m * std::log(x));
}

RealMatrix commutator(const RealMatrix& a, const RealMatrix& b) {
    if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols())
        throw shape_error("commutator: equal square shapes required");
    return a * b - b * a;
}

SymEig sym_eig(const RealMatrix& pi, const ToleranceConfig& tol) {
    if (!pi.is_square()) throw shape_error("sym_eig: matrix must be square");
    const int n = pi.rows();
    const double scale = frobenius_norm(pi);
    if (frobenius_norm(pi - pi.transpose()) > tol.eps_sym * std::max(1.0, scale))
        throw domain_error("sym_eig: input asymmetric beyond tolerance");

    RealMatrix a = symmetric_part(pi);
    RealMatrix q = RealMatrix::identity(n);

    // Cyclic Jacobi sweeps.
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int p = 0; p < n; ++p)
            for (int r = p + 1; r < n; ++r) off += a(p, r) * a(p, r);
        if (std::sqrt(2.0 * off) <= 1e-15 * std::max(1.0, scale)) break;
        for (int p = 0; p < n - 1; ++p) {
            for (int r = p + 1; r < n; ++r) {
                const double apr = a(p, r);
                if (std::abs(apr) <= 1e-300) continue;
                const double theta = (a(r, r) - a(p, p)) / (2.0 * apr);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int k = 0; k < n; ++k) {
                    const double akp = a(k, p), akr = a(k, r);
                    a(k, p) = c * akp - s * akr;
                    a(k, r) = s * akp + c * akr;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = a(p, k), ark = a(r, k);
                    a(p, k) = c * apk - s * ark;
                    a(r, k) = s * apk + c * ark;
                }
                for (int k = 0; k < n; ++k) {
                    const double qkp = q(k, p), qkr = q(k, r);
                    q(k, p) = c * qkp - s * qkr;
                    q(k, r) = s * qkp + c * qkr;
                }
            }
        }
    }

    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::vector<double> diag(n);
    for (int i = 0; i < n; ++i) diag[i] = a(i, i);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return diag[i] > diag[j]; });

    SymEig out;
    out.eigenvalues.resize(n);
    out.eigenvectors = RealMatrix(n, n);
    for (int j = 0; j < n; ++j) {
        const int src = order[j];
        out.eigenvalues[j] = diag[src];
        // Stabilize sign: first component of noticeable magnitude positive.
        double sign = 1.0;
        for (int i = 0; i < n; ++i) {
            if (std::abs(q(i, src)) > 1e-12) {
                sign = q(i, src) > 0.0 ? 1.0 : -1.0;
                break;
            }
        }
        for (int i = 0; i < n; ++i) out.eigenvectors(i, j) = sign * q(i, src);
    }
    return out;
}

RealMatrix logm_principal(const RealMatrix& p, const ToleranceConfig& tol) {
    if (!p.is_square()) throw shape_error("logm_principal: matrix must be square");
    SymEig e = sym_eig(p, tol);
    const double lmax = std::abs(e.eigenvalues.front());
    for (double l : e.eigenvalues)
        if (l <= tol.eps_eig * std::max(1.0, lmax))
            throw domain_error("logm_principal: eigenvalue at or below zero");
    RealMatrix d = RealMatrix::zero(p.rows(), p.rows());
    for (int i = 0; i < p.rows(); ++i) d(i, i) = std::log(e.eigenvalues[i]);
    RealMatrix r = e.eigenvectors * d * e.eigenvectors.transpose();
    return symmetric_part(r);
}

RealMatrix psd_sqrt(const RealMatrix& p, const ToleranceConfig& tol) {
    if (!p.is_square()) throw shape_error("psd_sqrt: matrix must be square");
    SymEig e = sym_eig(p, tol);
    const double scale = std::abs(e.eigenvalues.empty() ? 0.0 : e.eigenvalues.front());
    RealMatrix d = RealMatrix::zero(p.rows(), p.rows());
    for (int i = 0; i < p.rows(); ++i) {
        double l = e.eigenvalues[i];
        if (l < -tol.eps_eig * std::max(1.0, scale))
            throw domain_error("psd_sqrt: significantly negative eigenvalue");
        d(i, i) = std::sqrt(std::max(l, 0.0));
    }
    return symmetric_part(e.eigenvectors * d * e.eigenvectors.transpose());
}

RealMatrix spd_inverse(const RealMatrix& p, const ToleranceConfig& tol) {
    SymEig e = sym_eig(p, tol);
    const double lmax = std::abs(e.eigenvalues.front());
    RealMatrix d = RealMatrix::zero(p.rows(), p.rows());
    for (int i = 0; i < p.rows(); ++i) {
        if (e.eigenvalues[i] <= tol.eps_eig * std::max(1.0, lmax))
            throw domain_error("spd_inverse: matrix not positive definite");
        d(i, i) = 1.0 / e.eigenvalues[i];
    }
    return symmetric_part(e.eigenvectors * d * e.eigenvectors.transpose());
}

SvdResult svd(const RealMatrix& a_in) {
    // One-sided Jacobi on columns; works on A directly so small singular
    // values keep full relative accuracy.
    RealMatrix a = a_in;
    const int k = a.cols();
    RealMatrix v = RealMatrix::identity(k);

    for (int sweep = 0; sweep < 64; ++sweep) {
        bool rotated = false;
        for (int p = 0; p < k - 1; ++p) {
            for (int q = p + 1; q < k; ++q) {
                double app = 0.0, aqq = 0.0, apq = 0.0;
                for (int i = 0; i < a.rows(); ++i) {
                    app += a(i, p) * a(i, p);
                    aqq += a(i, q) * a(i, q);
                    apq += a(i, p) * a(i, q);
                }
                if (std::abs(apq) <= 1e-30 ||
                    std::abs(apq) <= 1e-17 * std::sqrt(app * aqq)) continue;
                rotated = true;
                const double theta = (aqq - app) / (2.0 * apq);
                const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (int i = 0; i < a.rows(); ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (int i = 0; i < k; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
        if (!rotated) break;
    }

    std::vector<double> sigma(k);
    for (int j = 0; j < k; ++j) {
        double s = 0.0;
        for (int i = 0; i < a.rows(); ++i) s += a(i, j) * a(i, j);
        sigma[j] = std::sqrt(s);
    }
    std::vector<int> order(k);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(),
                     [&](int i, int j) { return sigma[i] > sigma[j]; });

    SvdResult out;
    out.singular_values.resize(k);
    out.v = RealMatrix(k, k);
    for (int j = 0; j < k; ++j) {
        out.singular_values[j] = sigma[order[j]];
        for (int i = 0; i < k; ++i) out.v(i, j) = v(i, order[j]);
    }
    return out;
}

RealMatrix nullspace(const RealMatrix& a, double sigma_null, double scale_floor) {
    SvdResult s = svd(a);
    const int k = a.cols();
    const double smax = s.singular_values.empty() ? 0.0 : s.singular_values.front();
    const double scale = std::max(smax, scale_floor);
    const double cut = sigma_null * std::max(scale, 1e-300);
    int first = k;
    for (int j = 0; j < k; ++j) {
        if (s.singular_values[j] < cut || smax == 0.0) {
            first = j;
            break;
        }
    }
    if (smax == 0.0) first = 0;
    RealMatrix basis(k, k - first);
    for (int j = first; j < k; ++j)
        for (int i = 0; i < k; ++i) basis(i, j - first) = s.v(i, j);
    return basis;
}

double spectral_norm(const RealMatrix& a) {
    a.check_finite();
    if (a.rows() == 0 || a.cols() == 0) return 0.0;
    // sqrt of the largest eigenvalue of the smaller Gram matrix.
    RealMatrix g = a.rows() >= a.cols() ? a.transpose() * a : a * a.transpose();
    SymEig e = sym_eig(symmetric_part(g));
    return std::sqrt(std::max(0.0, e.eigenvalues.front()));
}

std::vector<std::complex<double>> eigenvalues_general(const RealMatrix& m) {
    if (!m.is_square()) throw shape_error("eigenvalues_general: matrix must be square");
    const int n = m.rows();
    using C = std::complex<double>;

    // Characteristic polynomial lambda^n + c1 lambda^{n-1} + ... + cn via
    // Newton identities with power sums p_j = tr(M^j).
    std::vector<double> c(n + 1, 0.0);
    c[0] = 1.0;
    std::vector<double> p(n + 1, 0.0);
    RealMatrix power = RealMatrix::identity(n);
    for (int j = 1; j <= n; ++j) {
        power = power * m;
        p[j] = power.trace();
    }
    for (int k = 1; k <= n; ++k) {
        double s = p[k];
        for (int j = 1; j < k; ++j) s += c[j] * p[k - j];
        c[k] = -s / k;
    }

    // Durand-Kerner on the monic polynomial.
    std::vector<C> roots(n);
    double radius = 0.0;
    for (int k = 1; k <= n; ++k) radius = std::max(radius, std::pow(std::abs(c[k]), 1.0 / k));
    radius = std::max(radius, 0.5);
    for (int i = 0; i < n; ++i) {
        const double ang = 2.0 * M_PI * i / n + 0.4;
        roots[i] = radius * C(std::cos(ang), std::sin(ang));
    }
    auto eval = [&](C z) {
        C r(1.0, 0.0);
        for (int k = 1; k <= n; ++k) r = r * z + c[k];
        return r;
    };
    for (int iter = 0; iter < 300; ++iter) {
        double delta = 0.0;
        for (int i = 0; i < n; ++i) {
            C denom(1.0, 0.0);
            for (int j = 0; j < n; ++j)
                if (j != i) denom *= roots[i] - roots[j];
            if (std::abs(denom) < 1e-300) denom = C(1e-300, 0.0);
            const C step = eval(roots[i]) / denom;
            roots[i] -= step;
            delta = std::max(delta, std::abs(step));
        }
        if (delta < 1e-14 * std::max(1.0, radius)) break;
    }
    // Snap conjugate-pair noise so real spectra come out real.
    for (auto& z : roots)
        if (std::abs(z.imag()) < 1e-8 * std::max(1.0, std::abs(z))) z = C(z.real(), 0.0);
    return roots;
}

}  // namespace ofbm::matfun
