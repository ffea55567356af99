#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ofbm/commutant.hpp"
#include "ofbm/params.hpp"

namespace ofbm::symmetry {

enum class GroupType {
    // n = 2
    Minimal,
    Trivial,
    Rotational,
    Maximal,
    // n = 3
    T3a,
    T3b,
    T3c,
    T3d,
    T3e,
    T3f,
    // any n: Lie dimension plus verified elements
    General,
};

std::string to_string(GroupType t);

/// Result of the symmetry-group computation. Finite elements and tangent
/// generators are reported pre-conjugation (on the orthogonal side); the
/// actual group is W {...} W^{-1}.
struct SymmetryClassification {
    GroupType group_type = GroupType::General;
    int n = 0;
    RealMatrix conjugacy_w;
    int lie_dimension = 0;
    std::vector<RealMatrix> finite_elements;      // orthogonal, includes I and -I
    std::vector<RealMatrix> tangent_generators;   // skew, Frobenius-normalized
    std::vector<RealMatrix> axes;                 // defining axes as n x 1 columns
    std::vector<std::string> diagnostics;
};

struct MaximalTestResult {
    bool is_maximal = false;
    std::optional<double> d_value;
    double equation_residual = 0.0;
    double im_norm = 0.0;
};

struct MinimalTestResult {
    bool in_M = false;
    double s_gap = 0.0;
    bool l_block_connected = false;
};

/// Defining-relation check: C preserves the spectral density
/// x^{-D} AA* x^{-D^T} (real and imaginary parts) at x = 1 and every sample.
bool is_symmetry_element(const RealMatrix& c, const params::SpectralParams& p,
                         const params::DerivedParams& d, double tol,
                         const std::vector<double>& samples = {});

/// Maximal-symmetry test: Im(AA*) = 0 and -(D - dI) Re(AA*) = Re(AA*)(D^T - dI)
/// for the least-squares scalar d.
MaximalTestResult maximal_test(const params::SpectralParams& p,
                               const params::DerivedParams& d, double tol = 1e-9);

/// Sufficient minimality certificate: M = S + L with S of pairwise distinct
/// eigenvalues and L sharing no invariant subspace with S's eigenbasis.
MinimalTestResult minimal_test(const params::DerivedParams& d,
                               const ToleranceConfig& tol = {});

SymmetryClassification classify2(const params::SpectralParams& p,
                                 const params::DerivedParams& d,
                                 const params::PiFamily& fam);

SymmetryClassification classify3(const params::SpectralParams& p,
                                 const params::DerivedParams& d,
                                 const params::PiFamily& fam);

/// Delegates to classify2/classify3 for n in {2,3}; otherwise reports the
/// tangent dimension plus all sign-matrix candidates that verify.
SymmetryClassification classify_general(const params::SpectralParams& p,
                                        const params::DerivedParams& d,
                                        const params::PiFamily& fam);

}  // namespace ofbm::symmetry
