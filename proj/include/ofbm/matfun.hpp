#pragma once

#include <complex>
#include <vector>

#include "ofbm/matrix.hpp"

namespace ofbm::matfun {

/// Symmetric eigendecomposition, eigenvalues in nonincreasing order,
/// eigenvector columns orthonormal with deterministic signs (first entry of
/// each eigenvector with magnitude above the stabilization cutoff is positive).
struct SymEig {
    std::vector<double> eigenvalues;
    RealMatrix eigenvectors;  // columns
};

/// Thin SVD of an m x k matrix with m >= k: singular values in nonincreasing
/// order plus the k x k right singular vector matrix V.
struct SvdResult {
    std::vector<double> singular_values;
    RealMatrix v;  // columns are right singular vectors
};

/// exp(M) by scaling and squaring with the degree-13 Pade approximant.
RealMatrix expm(const RealMatrix& m);

/// Principal logarithm, restricted to symmetric positive definite input
/// (eigendecomposition route; throws domain_error on eigenvalue <= 0).
RealMatrix logm_principal(const RealMatrix& p, const ToleranceConfig& tol = {});

/// M^x-style real matrix power exp(M log x); requires x > 0.
RealMatrix mat_power(const RealMatrix& m, double x);

/// AB - BA.
RealMatrix commutator(const RealMatrix& a, const RealMatrix& b);

/// Largest singular value.
double spectral_norm(const RealMatrix& a);

/// Symmetric eigendecomposition by cyclic Jacobi; symmetrizes internally and
/// rejects inputs asymmetric beyond eps_sym.
SymEig sym_eig(const RealMatrix& pi, const ToleranceConfig& tol = {});

/// Symmetric PSD square root; negative eigenvalues beyond -eps_eig*|P| are a
/// domain error, slightly negative ones are clamped to zero.
RealMatrix psd_sqrt(const RealMatrix& p, const ToleranceConfig& tol = {});

/// Inverse of a symmetric positive definite matrix via its eigendecomposition.
RealMatrix spd_inverse(const RealMatrix& p, const ToleranceConfig& tol = {});

/// One-sided Jacobi SVD of an m x k matrix (m >= k after implicit padding).
SvdResult svd(const RealMatrix& a);

/// Orthonormal basis (columns) of the right nullspace of `a`: right singular
/// vectors whose singular value falls below sigma_null * max(sigma_max,
/// scale_floor). The floor guards maps whose entries are all roundoff noise
/// (e.g. a commutation map of a family that commutes with everything).
RealMatrix nullspace(const RealMatrix& a, double sigma_null, double scale_floor = 0.0);

/// Eigenvalues of a general real matrix via the characteristic polynomial and
/// Durand-Kerner iteration. Used for validation-range checks only (n <= 16).
std::vector<std::complex<double>> eigenvalues_general(const RealMatrix& m);

}  // namespace ofbm::matfun
