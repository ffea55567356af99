#include "ofbm/report_io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace ofbm::io {

using nlohmann::json;

namespace {

RealMatrix matrix_from_json(const json& j, const std::string& what) {
    if (!j.is_array() || j.empty() || !j.front().is_array())
        throw validation_error("params: " + what + " must be a 2-D array");
    const int rows = static_cast<int>(j.size());
    const int cols = static_cast<int>(j.front().size());
    RealMatrix m(rows, cols);
    for (int i = 0; i < rows; ++i) {
        if (static_cast<int>(j[i].size()) != cols)
            throw validation_error("params: ragged rows in " + what);
        for (int k = 0; k < cols; ++k) {
            if (!j[i][k].is_number())
                throw validation_error("params: non-numeric entry in " + what);
            m(i, k) = j[i][k].get<double>();
        }
    }
    return m;
}

json matrix_to_json(const RealMatrix& m) {
    json rows = json::array();
    for (int i = 0; i < m.rows(); ++i) {
        json row = json::array();
        for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
        rows.push_back(row);
    }
    return rows;
}

void apply_tolerances(const json& j, ToleranceConfig& tol) {
    auto get = [&](const char* key, double& field) {
        if (j.contains(key)) field = j.at(key).get<double>();
    };
    get("eps_eig", tol.eps_eig);
    get("eps_fun", tol.eps_fun);
    get("eps_sym", tol.eps_sym);
    get("eps_rank", tol.eps_rank);
    get("cluster_gap", tol.cluster_gap);
    get("sigma_null", tol.sigma_null);
    get("delta_graph", tol.delta_graph);
    get("eps_element", tol.eps_element);
}

}  // namespace

params::SpectralParams params_from_json(const std::string& text,
                                        const params::ValidationFlags& flags) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::runtime_error(std::string("params: JSON parse failure: ") + e.what());
    }
    if (!doc.contains("n") || !doc["n"].is_number_integer())
        throw validation_error("params: missing integer field \"n\"");
    const int n = doc["n"].get<int>();
    if (n < 1 || n > 16) throw validation_error("params: n out of supported range [1, 16]");
    if (!doc.contains("D")) throw validation_error("params: missing field \"D\"");

    RealMatrix d = matrix_from_json(doc["D"], "D");
    RealMatrix a_re = doc.contains("A_re") ? matrix_from_json(doc["A_re"], "A_re")
                                           : RealMatrix::identity(n);
    RealMatrix a_im = doc.contains("A_im") ? matrix_from_json(doc["A_im"], "A_im")
                                           : RealMatrix::zero(n, n);
    if (d.rows() != n || d.cols() != n) throw validation_error("params: D must be n x n");
    if (a_re.rows() != n || a_re.cols() != n || a_im.rows() != n || a_im.cols() != n)
        throw validation_error("params: A parts must be n x n");

    ToleranceConfig tol;
    if (doc.contains("tolerances")) apply_tolerances(doc["tolerances"], tol);
    return params::validate(d, ComplexMatrix(a_re, a_im), flags, tol);
}

params::SpectralParams load_params_file(const std::string& path,
                                        const params::ValidationFlags& flags) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open params file: " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return params_from_json(ss.str(), flags);
}

std::string classification_report_json(const symmetry::SymmetryClassification& c) {
    json doc;
    doc["group_type"] = symmetry::to_string(c.group_type);
    doc["lie_dimension"] = c.lie_dimension;
    json axes = json::array();
    for (const auto& a : c.axes) {
        json v = json::array();
        for (int i = 0; i < a.rows(); ++i) v.push_back(a(i, 0));
        axes.push_back(v);
    }
    doc["axes"] = axes;
    json els = json::array();
    for (const auto& e : c.finite_elements) els.push_back(matrix_to_json(e));
    doc["finite_elements"] = els;
    doc["conjugacy_W"] = matrix_to_json(c.conjugacy_w);
    doc["diagnostics"] = c.diagnostics;
    return doc.dump(2) + "\n";
}

std::string exponent_report_json(const exponents::ExponentSet& es,
                                 const exponents::CommutingExponent& ce) {
    json doc;
    doc["H"] = matrix_to_json(es.base_exponent);
    json basis = json::array();
    for (const auto& t : es.tangent_basis) basis.push_back(matrix_to_json(t));
    doc["tangent_basis"] = basis;
    doc["unique"] = es.unique;
    doc["H0"] = matrix_to_json(ce.h0);
    doc["H0_residual"] = ce.residual;
    return doc.dump(2) + "\n";
}

std::string covariance_report_json(const process::CovarianceGrid& grid) {
    json doc;
    doc["times"] = grid.times;
    json gamma = json::object();
    for (size_t i = 0; i < grid.times.size(); ++i)
        for (size_t j = 0; j < grid.times.size(); ++j)
            gamma[std::to_string(i) + "," + std::to_string(j)] =
                matrix_to_json(grid.values[i][j]);
    doc["gamma"] = gamma;
    return doc.dump(2) + "\n";
}

}  // namespace ofbm::io
