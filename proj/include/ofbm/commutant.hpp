#pragma once

#include <string>
#include <vector>

#include "ofbm/matfun.hpp"
#include "ofbm/matrix.hpp"

namespace ofbm::commutant {

/// Centralizer of a symmetric matrix inside O(n), described by a clustered
/// eigenbasis: G(Pi) = Q diag(O(k_1), ..., O(k_u)) Q^T.
struct OrthogonalCentralizer {
    RealMatrix eigenbasis;              // columns, clustered eigenvectors
    std::vector<int> partition;         // multiplicities k_1..k_u, sum n
    std::vector<double> cluster_values; // one representative eigenvalue per block
    bool ambiguous_clustering = false;
    std::vector<std::string> warnings;

    int dimension() const {
        int d = 0;
        for (int k : partition) d += k * (k - 1) / 2;
        return d;
    }
};

/// Canonical-form description of the centralizer of a skew matrix:
/// basis_change^T Pi basis_change = diag(theta_1 J, ..., theta_r J, 0_z).
struct SkewCentralizer {
    RealMatrix basis_change;  // orthogonal
    int rotation_block_count = 0;
    int zero_block_size = 0;
    std::vector<double> thetas;  // one per rotation block, positive

    /// Columns of basis_change spanning the zero block.
    RealMatrix zero_block_axes() const {
        const int n = basis_change.rows();
        RealMatrix z(n, zero_block_size);
        for (int j = 0; j < zero_block_size; ++j)
            for (int i = 0; i < n; ++i)
                z(i, j) = basis_change(i, 2 * rotation_block_count + j);
        return z;
    }
};

/// Orthonormal (Frobenius) basis of a space of skew matrices.
struct SkewBasis {
    std::vector<RealMatrix> elements;
    int dimension() const { return static_cast<int>(elements.size()); }
};

/// One Jordan block: which eigenvalue it belongs to (by id) and its size.
struct JordanBlockSpec {
    int eigenvalue_id = 0;
    int size = 1;
};

bool commutes(const RealMatrix& a, const RealMatrix& b, double tol);

OrthogonalCentralizer centralizer_structure(const RealMatrix& pi,
                                            const ToleranceConfig& tol = {});

/// The 2^n sign matrices Q diag(+-1,...,+-1) Q^T of a simple-spectrum
/// centralizer; requires every partition entry to be 1 and n <= 12.
std::vector<RealMatrix> sign_elements(const OrthogonalCentralizer& c);

SkewCentralizer skew_centralizer_structure(const RealMatrix& pi_skew,
                                           const ToleranceConfig& tol = {});

/// Orthonormal basis of {X in so(n) : X Pi = Pi X for every Pi in family},
/// computed as the nullspace of the stacked commutation maps restricted to
/// skew coordinates.
SkewBasis commutant_skew_basis(const std::vector<RealMatrix>& family,
                               const ToleranceConfig& tol = {});

/// Dimension of the commutant of the family within all of M(n,R).
int commutant_full_dimension(const std::vector<RealMatrix>& family,
                             const ToleranceConfig& tol = {});

/// True iff span of the orthonormal columns of v is an invariant subspace
/// of l within tol.
bool is_invariant_subspace(const RealMatrix& l, const RealMatrix& v, double tol,
                           const ToleranceConfig& cfg = {});

/// True iff some proper nonempty subset of the orthonormal basis columns
/// spans a real invariant subspace of the skew matrix l (graph method).
bool in_L_invar(const RealMatrix& l, const RealMatrix& basis,
                const ToleranceConfig& tol = {});

/// True iff gamma commutes with a generating family of the rotation group,
/// conjugated by `trials` seeded random orthogonal matrices.
bool centralizes_rotation_group(const RealMatrix& gamma, int trials, double tol,
                                uint64_t seed = 12345);

/// Validates that x has the block pattern of a matrix commuting with a Jordan
/// form described by `blocks` (zero off-blocks for distinct eigenvalues,
/// regular lower-triangular Toeplitz blocks for equal ones). Structure check
/// on user-supplied Jordan data only.
bool matches_jordan_commutant_pattern(const std::vector<JordanBlockSpec>& blocks,
                                      const RealMatrix& x, double tol);

}  // namespace ofbm::commutant
