#include "ofbm/commutant.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "ofbm/rng.hpp"

namespace ofbm::commutant {

using matfun::spectral_norm;
using matfun::sym_eig;

bool commutes(const RealMatrix& a, const RealMatrix& b, double tol) {
    if (!a.is_square() || a.rows() != b.rows() || a.cols() != b.cols())
        throw shape_error("commutes: equal square shapes required");
    const double lhs = spectral_norm(a * b - b * a);
    return lhs <= tol * (1.0 + spectral_norm(a) * spectral_norm(b));
}

OrthogonalCentralizer centralizer_structure(const RealMatrix& pi, const ToleranceConfig& tol) {
    matfun::SymEig e = sym_eig(pi, tol);
    const int n = pi.rows();
    const double scale = e.eigenvalues.empty()
                             ? 0.0
                             : std::max(std::abs(e.eigenvalues.front()),
                                        std::abs(e.eigenvalues.back()));
    const double delta = tol.cluster_gap * std::max(1.0, scale);

    OrthogonalCentralizer out;
    out.eigenbasis = e.eigenvectors;
    int start = 0;
    for (int i = 1; i <= n; ++i) {
        const double gap = (i == n) ? 2.0 * delta : e.eigenvalues[i - 1] - e.eigenvalues[i];
        if (i < n && gap > delta / 2.0 && gap < 2.0 * delta) {
            out.ambiguous_clustering = true;
            char msg[96];
            std::snprintf(msg, sizeof(msg),
                          "eigenvalue gap %.3e within a factor 2 of the clustering gap %.3e",
                          gap, delta);
            out.warnings.push_back(msg);
        }
        if (i == n || gap > delta) {
            out.partition.push_back(i - start);
            double mean = 0.0;
            for (int k = start; k < i; ++k) mean += e.eigenvalues[k];
            out.cluster_values.push_back(mean / (i - start));
            start = i;
        }
    }
    return out;
}

std::vector<RealMatrix> sign_elements(const OrthogonalCentralizer& c) {
    const int n = c.eigenbasis.rows();
    for (int k : c.partition)
        if (k != 1)
            throw domain_error("sign_elements: repeated eigenvalues (partition entry > 1)");
    if (n > 12) throw domain_error("sign_elements: n too large for 2^n enumeration");

    std::vector<RealMatrix> out;
    out.reserve(size_t{1} << n);
    const RealMatrix& q = c.eigenbasis;
    for (uint32_t bits = 0; bits < (uint32_t{1} << n); ++bits) {
        RealMatrix d = RealMatrix::zero(n, n);
        for (int i = 0; i < n; ++i) d(i, i) = (bits >> i) & 1u ? -1.0 : 1.0;
        out.push_back(q * d * q.transpose());
    }
    return out;
}

SkewCentralizer skew_centralizer_structure(const RealMatrix& pi, const ToleranceConfig& tol) {
    if (!pi.is_square()) throw shape_error("skew_centralizer_structure: square input required");
    const int n = pi.rows();
    const double scale = frobenius_norm(pi);
    if (frobenius_norm(pi + pi.transpose()) > tol.eps_sym * std::max(1.0, scale))
        throw domain_error("skew_centralizer_structure: input not skew-symmetric");

    RealMatrix l = skew_part(pi);
    // -L^2 is symmetric PSD with eigenvalues theta^2 (twice per rotation
    // block) and 0 on the kernel.
    matfun::SymEig e = sym_eig(-1.0 * (l * l), tol);
    const double theta_cut = 1e-9 * std::max(1.0, scale);
    const double cut2 = theta_cut * theta_cut;

    SkewCentralizer out;
    out.basis_change = RealMatrix(n, n);
    int col = 0;

    // Group rotation eigenvectors by theta^2 cluster, then pair each v with
    // u = Lv/theta so the block comes out as theta * [[0,1],[-1,0]].
    int i = 0;
    while (i < n && e.eigenvalues[i] > cut2) {
        int j = i;
        const double lead = e.eigenvalues[i];
        while (j < n && e.eigenvalues[j] > cut2 &&
               std::abs(e.eigenvalues[j] - lead) <= 1e-8 * std::max(1.0, lead))
            ++j;
        std::vector<RealMatrix> cluster;
        for (int k = i; k < j; ++k) cluster.push_back(e.eigenvectors.col(k));
        while (!cluster.empty()) {
            RealMatrix v = cluster.front();
            v *= 1.0 / frobenius_norm(v);
            const double theta = std::sqrt(std::max(0.0, lead));
            RealMatrix u = l * v;
            u *= 1.0 / theta;
            out.basis_change.set_col(col++, u);
            out.basis_change.set_col(col++, v);
            out.thetas.push_back(theta);
            ++out.rotation_block_count;
            // deflate the remaining cluster vectors against span{u, v}
            std::vector<RealMatrix> rest;
            for (size_t k = 1; k < cluster.size(); ++k) {
                RealMatrix w = cluster[k];
                w -= frobenius_inner(w, u) * u;
                w -= frobenius_inner(w, v) * v;
                for (const auto& r : rest) w -= frobenius_inner(w, r) * r;
                const double wn = frobenius_norm(w);
                if (wn > 0.5) rest.push_back((1.0 / wn) * w);
            }
            cluster = std::move(rest);
        }
        i = j;
    }
    for (; i < n; ++i) {
        RealMatrix v = e.eigenvectors.col(i);
        // orthogonalize against everything already placed
        for (int k = 0; k < col; ++k) {
            RealMatrix c = out.basis_change.col(k);
            v -= frobenius_inner(v, c) * c;
        }
        v *= 1.0 / frobenius_norm(v);
        out.basis_change.set_col(col++, v);
        ++out.zero_block_size;
    }
    return out;
}

namespace {

// Frobenius-orthonormal basis of so(n): (E_pq - E_qp)/sqrt(2), p < q.
std::vector<RealMatrix> skew_coordinate_basis(int n) {
    std::vector<RealMatrix> basis;
    const double inv = 1.0 / std::sqrt(2.0);
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) {
            RealMatrix e = RealMatrix::zero(n, n);
            e(p, q) = inv;
            e(q, p) = -inv;
            basis.push_back(e);
        }
    return basis;
}

// Stacked linear map  X -> (X Pi_i - Pi_i X)_i  restricted to the given
// coordinate basis; family members are normalized to unit scale so the
// nullspace cut is meaningful across mixed magnitudes.
RealMatrix stacked_commutation_map(const std::vector<RealMatrix>& family,
                                   const std::vector<RealMatrix>& basis) {
    const int n = family.front().rows();
    const int d = static_cast<int>(basis.size());
    const int rows = static_cast<int>(family.size()) * n * n;
    RealMatrix k(rows, d);
    int row0 = 0;
    for (const auto& pi_raw : family) {
        if (pi_raw.rows() != n || pi_raw.cols() != n)
            throw shape_error("commutant basis: family shapes differ");
        RealMatrix pi = pi_raw;
        const double s = max_abs(pi);
        if (s > 0.0) pi *= 1.0 / s;
        for (int j = 0; j < d; ++j) {
            RealMatrix c = basis[j] * pi - pi * basis[j];
            for (int r = 0; r < n; ++r)
                for (int s2 = 0; s2 < n; ++s2) k(row0 + r * n + s2, j) = c(r, s2);
        }
        row0 += n * n;
    }
    return k;
}

}  // namespace

SkewBasis commutant_skew_basis(const std::vector<RealMatrix>& family,
                               const ToleranceConfig& tol) {
    if (family.empty()) throw domain_error("commutant_skew_basis: empty family");
    const int n = family.front().rows();
    const auto basis = skew_coordinate_basis(n);
    SkewBasis out;
    if (basis.empty()) return out;

    RealMatrix k = stacked_commutation_map(family, basis);
    RealMatrix null = matfun::nullspace(k, tol.sigma_null, 1.0);
    for (int j = 0; j < null.cols(); ++j) {
        RealMatrix x = RealMatrix::zero(n, n);
        for (int i = 0; i < static_cast<int>(basis.size()); ++i) x += null(i, j) * basis[i];
        out.elements.push_back(x);
    }
    return out;
}

int commutant_full_dimension(const std::vector<RealMatrix>& family,
                             const ToleranceConfig& tol) {
    if (family.empty()) throw domain_error("commutant_full_dimension: empty family");
    const int n = family.front().rows();
    std::vector<RealMatrix> basis;
    for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
            RealMatrix e = RealMatrix::zero(n, n);
            e(p, q) = 1.0;
            basis.push_back(e);
        }
    RealMatrix k = stacked_commutation_map(family, basis);
    return matfun::nullspace(k, tol.sigma_null, 1.0).cols();
}

bool is_invariant_subspace(const RealMatrix& l, const RealMatrix& v, double tol,
                           const ToleranceConfig& cfg) {
    if (v.rows() != l.rows()) throw shape_error("is_invariant_subspace: vector length mismatch");
    const int k = v.cols();
    RealMatrix gram = v.transpose() * v;
    if (frobenius_norm(gram - RealMatrix::identity(k)) > std::max(cfg.eps_eig, 1e-10) * k)
        throw domain_error("is_invariant_subspace: columns not orthonormal");
    RealMatrix p = v * v.transpose();
    RealMatrix rest = (RealMatrix::identity(l.rows()) - p) * l * p;
    return spectral_norm(rest) <= tol * (1.0 + spectral_norm(l));
}

bool in_L_invar(const RealMatrix& l, const RealMatrix& basis, const ToleranceConfig& tol) {
    const int n = l.rows();
    RealMatrix t = basis.transpose() * l * basis;
    const double cut = tol.delta_graph * spectral_norm(l);

    // connectivity of the graph with edges on entries above the cut
    std::vector<int> comp(n, -1);
    int ncomp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        std::vector<int> stack{s};
        comp[s] = ncomp;
        while (!stack.empty()) {
            const int u = stack.back();
            stack.pop_back();
            for (int w = 0; w < n; ++w) {
                if (comp[w] < 0 && std::abs(t(u, w)) > cut) {
                    comp[w] = ncomp;
                    stack.push_back(w);
                }
            }
        }
        ++ncomp;
    }
    return ncomp > 1;
}

bool centralizes_rotation_group(const RealMatrix& gamma, int trials, double tol,
                                uint64_t seed) {
    if (!gamma.is_square() || gamma.rows() < 2)
        throw shape_error("centralizes_rotation_group: square input with n >= 2 required");
    const int n = gamma.rows();

    std::vector<RealMatrix> generators;
    if (n == 2) {
        // need all of O(2): a generic rotation plus a reflection
        const double th = 1.0;
        generators.push_back(RealMatrix{{std::cos(th), -std::sin(th)},
                                        {std::sin(th), std::cos(th)}});
        generators.push_back(RealMatrix::diag({1.0, -1.0}));
    } else if (n % 2 == 1) {
        for (int i = 0; i < n; ++i) {
            std::vector<double> d(n, -1.0);
            d[i] = 1.0;
            generators.push_back(RealMatrix::diag(d));
        }
    } else {
        for (int i = 0; i + 1 < n; ++i) {
            std::vector<double> d(n, -1.0);
            d[i] = d[i + 1] = 1.0;
            generators.push_back(RealMatrix::diag(d));
        }
    }

    Rng rng(seed);
    for (int t = 0; t <= trials; ++t) {
        const RealMatrix p = (t == 0) ? RealMatrix::identity(n) : rng.random_orthogonal(n);
        for (const auto& g : generators)
            if (!commutes(gamma, p * g * p.transpose(), tol)) return false;
    }
    return true;
}

bool matches_jordan_commutant_pattern(const std::vector<JordanBlockSpec>& blocks,
                                      const RealMatrix& x, double tol) {
    int n = 0;
    for (const auto& b : blocks) n += b.size;
    if (x.rows() != n || x.cols() != n)
        throw shape_error("matches_jordan_commutant_pattern: size mismatch");
    const double scale = std::max(1.0, max_abs(x));
    const double cut = tol * scale;

    std::vector<int> offset(blocks.size(), 0);
    for (size_t b = 1; b < blocks.size(); ++b) offset[b] = offset[b - 1] + blocks[b - 1].size;

    for (size_t a = 0; a < blocks.size(); ++a) {
        for (size_t b = 0; b < blocks.size(); ++b) {
            const int pa = blocks[a].size, pb = blocks[b].size;
            const int ra = offset[a], cb = offset[b];
            if (blocks[a].eigenvalue_id != blocks[b].eigenvalue_id) {
                for (int i = 0; i < pa; ++i)
                    for (int j = 0; j < pb; ++j)
                        if (std::abs(x(ra + i, cb + j)) > cut) return false;
                continue;
            }
            // regular lower triangular form: a p x p Toeplitz lower triangle
            // anchored left (pa <= pb) or bottom (pa > pb), zeros elsewhere
            const int p = std::min(pa, pb);
            const int row_shift = pa > pb ? pa - pb : 0;
            for (int i = 0; i < pa; ++i) {
                for (int j = 0; j < pb; ++j) {
                    const int ti = i - row_shift;
                    const bool inside = ti >= 0 && ti < p && j < p && ti >= j;
                    if (!inside && std::abs(x(ra + i, cb + j)) > cut) return false;
                }
            }
            // Toeplitz consistency along subdiagonals
            for (int d = 0; d < p; ++d) {
                const double ref = x(ra + row_shift + d, cb);
                for (int i = d; i < p; ++i)
                    if (std::abs(x(ra + row_shift + i, cb + i - d) - ref) > cut) return false;
            }
        }
    }
    return true;
}

}  // namespace ofbm::commutant
