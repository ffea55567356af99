#pragma once

#include <string>

#include "ofbm/exponents.hpp"
#include "ofbm/process.hpp"
#include "ofbm/symmetry.hpp"

namespace ofbm::io {

/// Parses the JSON parameter document: {"n": int, "D": [[...]], "A_re":
/// [[...]], "A_im": [[...]] (optional, zero when omitted), "tolerances": {...}
/// (optional)} and validates it.
params::SpectralParams params_from_json(const std::string& text,
                                        const params::ValidationFlags& flags = {});

params::SpectralParams load_params_file(const std::string& path,
                                        const params::ValidationFlags& flags = {});

std::string classification_report_json(const symmetry::SymmetryClassification& c);

std::string exponent_report_json(const exponents::ExponentSet& es,
                                 const exponents::CommutingExponent& ce);

std::string covariance_report_json(const process::CovarianceGrid& grid);

}  // namespace ofbm::io
