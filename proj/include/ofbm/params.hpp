#pragma once

#include <string>
#include <vector>

#include "ofbm/matfun.hpp"
#include "ofbm/matrix.hpp"

namespace ofbm::params {

struct ValidationFlags {
    bool require_full_rank = true;
    bool require_domain = false;  // eigenvalues of D in (-1/2, 1/2)
};

/// The spectral-domain parametrization (D, A) of an OFBM, D = H - I/2.
struct SpectralParams {
    int n = 0;
    RealMatrix d_exponent;  // D
    ComplexMatrix a;        // A = A1 + i A2
    ToleranceConfig tolerances;
    bool full_rank_ok = false;
    bool domain_ok = false;
};

/// Quantities derived from (D, A): Re/Im of AA*, the positive definite
/// conjugacy W with W^2 = Re(AA*), and M = W^{-1} D W.
struct DerivedParams {
    RealMatrix re_aa;
    RealMatrix im_aa;
    RealMatrix w;
    RealMatrix w_inv;
    RealMatrix m;
};

struct PiFamilyConfig {
    int sample_count = 10;   // log-symmetric around x=1 plus x = e^{+-1}
    int m_max = 0;           // 0 = automatic (n(n+1))
    int max_rounds = 4;      // doubling rounds for span stabilization
};

/// The symmetric family driving the symmetry classification: sampled Pi_x
/// values, the derivative family Pi^(m), the skew part Pi_I, and a
/// rank-revealed orthonormal span basis of {Pi_x - I} union {Pi^(m)}.
struct PiFamily {
    std::vector<double> sample_points;
    std::vector<RealMatrix> pi_x_values;
    std::vector<RealMatrix> pi_m_values;
    RealMatrix pi_I;
    std::vector<RealMatrix> span_basis;  // Frobenius-orthonormal symmetric matrices
    std::vector<std::string> warnings;
};

/// Checks (D, A) and records the full-rank / eigenvalue-domain status.
/// Throws validation_error when a required condition fails.
SpectralParams validate(const RealMatrix& d, const ComplexMatrix& a,
                        const ValidationFlags& flags = {},
                        const ToleranceConfig& tol = {});

DerivedParams derive(const SpectralParams& p);

/// Pi_x = W^{-1} x^{-D} Re(AA*) x^{-D^T} W^{-1} = x^{-M} x^{-M^T}, computed
/// as G G^T with G = x^{-M} so the result is symmetric PSD by construction.
RealMatrix pi_x(const DerivedParams& d, double x);

/// Pi^(m) = sum_k binom(m,k) M^k (M^T)^{m-k}.
RealMatrix pi_m(const DerivedParams& d, int m);

/// Pi_I = W^{-1} Im(AA*) W^{-1}.
RealMatrix pi_I(const DerivedParams& d, const SpectralParams& p);

PiFamily build_pi_family(const DerivedParams& d, const SpectralParams& p,
                         const PiFamilyConfig& config = {});

}  // namespace ofbm::params
