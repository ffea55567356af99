#pragma once

#include <vector>

#include "ofbm/symmetry.hpp"

namespace ofbm::exponents {

/// The affine exponent set E(B_H) = H + span(tangent_basis); tangent elements
/// have the form W L W^{-1} with L skew.
struct ExponentSet {
    RealMatrix base_exponent;  // H = D + I/2
    std::vector<RealMatrix> tangent_basis;
    bool unique = true;
};

struct CommutingExponent {
    RealMatrix h0;
    double residual = 0.0;
};

/// Tangent space T(G_H) from a classification: empty for finite types, one
/// plane-rotation generator for the axial types, all of W so(n) W^{-1} for
/// the maximal ones.
std::vector<RealMatrix> tangent_space(const symmetry::SymmetryClassification& c);

ExponentSet exponent_set(const params::SpectralParams& p,
                         const symmetry::SymmetryClassification& c);

/// Least-squares solve for an exponent commuting with every reported group
/// generator, searched over the tangent affine space H + span(T(G_H)).
CommutingExponent commuting_exponent(const params::SpectralParams& p,
                                     const symmetry::SymmetryClassification& c);

/// Max over tangent directions, grid steps and sampled frequencies of the
/// relative spectral-density change when the exponent moves along the
/// tangent space with A held fixed. Near zero confirms the same A serves
/// every exponent.
double density_invariance_check(const params::SpectralParams& p,
                                const params::DerivedParams& d,
                                const symmetry::SymmetryClassification& c,
                                const std::vector<double>& t_grid = {-1.0, -0.5, 0.5, 1.0});

}  // namespace ofbm::exponents
