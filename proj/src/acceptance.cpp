#include "ofbm/acceptance.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

#include "ofbm/exponents.hpp"
#include "ofbm/process.hpp"
#include "ofbm/report_io.hpp"
#include "ofbm/rng.hpp"

#ifndef OFBM_FIXTURES_DIR
#define OFBM_FIXTURES_DIR "fixtures"
#endif

namespace ofbm::acceptance {

using namespace ofbm::params;
using namespace ofbm::symmetry;
using ofbm::process::QuadratureConfig;

namespace {

struct Check {
    std::ostringstream detail;
    bool pass = true;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            if (!detail.str().empty()) detail << "; ";
            detail << what;
        }
    }
};

struct Setup {
    SpectralParams p;
    DerivedParams d;
    PiFamily fam;
};

Setup load(const std::string& dir, const std::string& name) {
    Setup s{io::load_params_file(dir + "/" + name), {}, {}};
    s.d = derive(s.p);
    s.fam = build_pi_family(s.d, s.p);
    return s;
}

Setup from(const RealMatrix& d, const ComplexMatrix& a) {
    Setup s{validate(d, a), {}, {}};
    s.d = derive(s.p);
    s.fam = build_pi_family(s.d, s.p);
    return s;
}

bool contains_element(const std::vector<RealMatrix>& els, const RealMatrix& m, double tol) {
    for (const auto& e : els)
        if (frobenius_norm(e - m) <= tol) return true;
    return false;
}

std::string fmt(double v) {
    std::ostringstream ss;
    ss << v;
    return ss.str();
}

const std::vector<std::string> kFixtureSet = {
    "example_2_1.json", "example_5_1.json", "example_5_2.json", "example_5_3.json",
    "example_5_4.json", "example_5_5.json", "example_5_6.json"};

// ---------------------------------------------------------------- criteria

CriterionResult c01_trivial_group(const std::string& dir) {
    Check c;
    Setup s = load(dir, "example_5_2.json");
    SymmetryClassification cl = classify2(s.p, s.d, s.fam);
    c.require(cl.group_type == GroupType::Trivial,
              "expected Trivial, got " + to_string(cl.group_type));
    c.require(cl.finite_elements.size() == 4, "expected exactly 4 elements");
    const RealMatrix id = RealMatrix::identity(2);
    for (const auto& m : {id, -1.0 * id, RealMatrix::diag({1.0, -1.0}),
                          RealMatrix::diag({-1.0, 1.0})})
        c.require(contains_element(cl.finite_elements, m, 1e-8), "missing a sign element");
    return {"example_5_2 trivial group {I,-I,Ref(e1),Ref(e2)}", c.pass, c.detail.str()};
}

CriterionResult c02_rotational(const std::string& dir) {
    Check c;
    Setup s = load(dir, "example_5_1.json");
    SymmetryClassification cl = classify2(s.p, s.d, s.fam);
    c.require(cl.group_type == GroupType::Rotational,
              "expected Rotational, got " + to_string(cl.group_type));
    c.require(cl.lie_dimension == 1, "expected tangent dimension 1");
    exponents::ExponentSet es = exponents::exponent_set(s.p, cl);
    c.require(!es.unique, "exponent set must be non-unique");
    c.require(es.tangent_basis.size() == 1, "expected a single tangent generator");
    if (!es.tangent_basis.empty()) {
        // W = I here, so the exponent set is H + span(J)
        RealMatrix j{{0.0, 1.0 / std::sqrt(2.0)}, {-1.0 / std::sqrt(2.0), 0.0}};
        const double align = std::abs(frobenius_inner(
            (1.0 / frobenius_norm(es.tangent_basis[0])) * es.tangent_basis[0], j));
        c.require(std::abs(align - 1.0) <= 1e-8,
                  "tangent generator not proportional to the plane rotation");
        RealMatrix h = es.base_exponent;
        c.require(approx_equal(h, 0.8 * RealMatrix::identity(2), 1e-10), "H must be D + I/2");
    }
    return {"example_5_1 rotational type with exponent set H + W so(2) W^-1", c.pass,
            c.detail.str()};
}

CriterionResult c03_single_parameter(const std::string&) {
    Check c;
    Setup s2 = from(0.3 * RealMatrix::identity(2), ComplexMatrix(RealMatrix::identity(2)));
    SymmetryClassification c2 = classify2(s2.p, s2.d, s2.fam);
    c.require(c2.group_type == GroupType::Maximal,
              "n=2 expected Maximal, got " + to_string(c2.group_type));

    Setup s3 = from(0.3 * RealMatrix::identity(3), ComplexMatrix(RealMatrix::identity(3)));
    SymmetryClassification c3 = classify3(s3.p, s3.d, s3.fam);
    c.require(c3.group_type == GroupType::T3e,
              "n=3 expected T3e, got " + to_string(c3.group_type));

    MaximalTestResult mt = maximal_test(s2.p, s2.d);
    c.require(mt.is_maximal, "maximal_test must certify");
    c.require(mt.d_value && std::abs(*mt.d_value - 0.3) < 1e-10,
              "fitted d must equal 0.3");
    c.require(mt.equation_residual < 1e-10,
              "equation residual " + fmt(mt.equation_residual));
    return {"single-parameter process is Maximal (n=2) / T3e (n=3), d = 0.3", c.pass,
            c.detail.str()};
}

CriterionResult c04_jordan_axial(const std::string& dir) {
    Check c;
    Setup s = load(dir, "example_5_3.json");
    SymmetryClassification cl = classify3(s.p, s.d, s.fam);
    c.require(cl.group_type == GroupType::T3b,
              "expected T3b, got " + to_string(cl.group_type));
    if (!cl.axes.empty()) {
        RealMatrix e3{{0.0}, {0.0}, {1.0}};
        c.require(frobenius_norm(cl.axes[0] - e3) <= 1e-8, "axis must be (0,0,1)");
    } else {
        c.require(false, "no axis reported");
    }
    // closed form of Pi_x at x = 1/e and e
    for (double x : {std::exp(-1.0), std::exp(1.0)}) {
        const double l = std::log(x), sc = std::pow(x, -0.4);
        RealMatrix expected{{sc, -sc * l, 0.0}, {-sc * l, sc * (l * l + 1.0), 0.0},
                            {0.0, 0.0, sc}};
        const double err = frobenius_norm(pi_x(s.d, x) - expected);
        c.require(err <= 1e-10 * frobenius_norm(expected), "Pi_x closed form, err " + fmt(err));
    }
    return {"example_5_3 classifies T3b with axis e3; Pi_x matches the closed form", c.pass,
            c.detail.str()};
}

CriterionResult c05_remaining_types(const std::string& dir) {
    Check c;
    Setup s54 = load(dir, "example_5_4.json");
    SymmetryClassification c54 = classify3(s54.p, s54.d, s54.fam);
    c.require(c54.group_type == GroupType::T3c,
              "5_4 expected T3c, got " + to_string(c54.group_type));
    c.require(c54.finite_elements.size() == 8, "5_4 expected 8 elements");
    // frame must be Euclidean: every element diagonal +-1
    for (const auto& e : c54.finite_elements) {
        RealMatrix offdiag = e;
        for (int i = 0; i < 3; ++i) offdiag(i, i) = 0.0;
        c.require(frobenius_norm(offdiag) <= 1e-8, "5_4 element not on the Euclidean frame");
    }

    Setup s55 = load(dir, "example_5_5.json");
    SymmetryClassification c55 = classify3(s55.p, s55.d, s55.fam);
    c.require(c55.group_type == GroupType::T3d,
              "5_5 expected T3d, got " + to_string(c55.group_type));
    if (!c55.axes.empty()) {
        RealMatrix e3{{0.0}, {0.0}, {1.0}};
        c.require(frobenius_norm(c55.axes[0] - e3) <= 1e-8, "5_5 axis must be e3");
    }

    Setup s56 = load(dir, "example_5_6.json");
    SymmetryClassification c56 = classify3(s56.p, s56.d, s56.fam);
    c.require(c56.group_type == GroupType::T3f,
              "5_6 expected T3f, got " + to_string(c56.group_type));
    return {"examples 5_4/5_5/5_6 classify as T3c / T3d / T3f", c.pass, c.detail.str()};
}

CriterionResult c06_minimal_certificate(const std::string&) {
    Check c;
    RealMatrix s = RealMatrix::diag({0.1, 0.2, 0.3});
    RealMatrix dense{{0, 0.05, 0.05}, {-0.05, 0, 0.05}, {-0.05, -0.05, 0}};
    Setup st = from(s + dense, ComplexMatrix(RealMatrix::identity(3)));
    MinimalTestResult mt = minimal_test(st.d);
    c.require(mt.in_M, "dense skew part must certify minimality");
    SymmetryClassification cl = classify3(st.p, st.d, st.fam);
    c.require(cl.group_type == GroupType::T3a,
              "expected T3a, got " + to_string(cl.group_type));

    int idx = 0;
    for (auto l : {RealMatrix{{0, 0.05, 0}, {-0.05, 0, 0}, {0, 0, 0}},
                   RealMatrix{{0, 0, 0.05}, {0, 0, 0}, {-0.05, 0, 0}},
                   RealMatrix{{0, 0, 0}, {0, 0, 0.05}, {0, -0.05, 0}}}) {
        Setup sf = from(s + l, ComplexMatrix(RealMatrix::identity(3)));
        c.require(!minimal_test(sf.d).in_M,
                  "forbidden block form " + std::to_string(idx) + " must not certify");
        ++idx;
    }
    return {"minimal-type certificate and the three forbidden block forms", c.pass,
            c.detail.str()};
}

CriterionResult c07_commutant_dimensions(const std::string&) {
    Check c;
    for (int n = 2; n <= 5; ++n) {
        const int dim = commutant::commutant_skew_basis({RealMatrix::identity(n)}).dimension();
        c.require(dim == n * (n - 1) / 2,
                  "so(" + std::to_string(n) + ") dimension, got " + std::to_string(dim));
    }
    c.require(commutant::commutant_skew_basis({RealMatrix::diag({1.0, 2.0, 3.0})})
                      .dimension() == 0,
              "simple spectrum must have dimension 0");
    c.require(commutant::commutant_skew_basis({RealMatrix::diag({1.5, 1.5, 4.0})})
                      .dimension() == 1,
              "double eigenvalue must have dimension 1");
    return {"commutant dimensions: so(n), simple spectrum, one repeated pair", c.pass,
            c.detail.str()};
}

CriterionResult c08_bch_order(const std::string&) {
    Check c;
    Rng rng(20240);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3;
        RealMatrix m(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) m(i, j) = rng.normal();
        m *= 0.9 / matfun::spectral_norm(m);
        RealMatrix sum = m + m.transpose();
        RealMatrix comm = matfun::commutator(m, m.transpose());

        double lo = 1e300, hi = 0.0;
        for (int k = 1; k <= 4; ++k) {
            for (double sgn : {1.0, -1.0}) {
                const double x = 1.0 + sgn * std::pow(10.0, -k);
                const double l = std::log(x);
                RealMatrix g = matfun::mat_power(-1.0 * m, x);
                RealMatrix r = matfun::logm_principal(g * g.transpose()) + l * sum -
                               (l * l / 2.0) * comm;
                const double ratio = frobenius_norm(r) / std::abs(l * l * l);
                lo = std::min(lo, ratio);
                hi = std::max(hi, ratio);
            }
        }
        c.require(hi < 10.0 * lo, "trial " + std::to_string(trial) + " ratio spread " +
                                      fmt(hi / lo));
    }
    return {"commutator-order remainder r(x)/|log x|^3 stays within a factor 10", c.pass,
            c.detail.str()};
}

CriterionResult c09_oss_identity(const std::string& dir) {
    Check c;
    const std::vector<double> grid{0.4, 0.8, 1.2, 1.6, 2.0};
    QuadratureConfig q;
    // the defective-exponent fixture has a log-corrected x^{-2.4} log^2 x tail;
    // meeting 1e-4 at c = 1/2 needs the truncation pushed past the default
    q.x_max = 1e5;
    for (const auto& name : kFixtureSet) {
        Setup s = load(dir, name);
        for (double scale : {0.5, 2.0}) {
            const double err = process::oss_check(s.p, scale, grid, q);
            c.require(err < 1e-4, name + " c=" + fmt(scale) + " err " + fmt(err));
        }
    }
    return {"operator self-similarity of the covariance at c in {1/2, 2}", c.pass,
            c.detail.str()};
}

CriterionResult c10_fbm_oracle(const std::string& dir) {
    Check c;
    Setup s = load(dir, "example_2_1.json");
    QuadratureConfig q;
    const double h = 0.7;
    const std::vector<double> grid{0.4, 0.8, 1.2, 1.6, 2.0};
    const double norm = process::covariance_normalization(s.p, q);
    process::CovarianceGrid g = process::covariance_grid(s.p, grid, q);
    for (size_t i = 0; i < grid.size(); ++i)
        for (size_t j = 0; j < grid.size(); ++j) {
            const double expected =
                0.5 * (std::pow(grid[i], 2 * h) + std::pow(grid[j], 2 * h) -
                       std::pow(std::abs(grid[i] - grid[j]), 2 * h));
            RealMatrix want = expected * RealMatrix::identity(2);
            const double err = frobenius_norm((1.0 / norm) * g.values[i][j] - want) /
                               std::max(frobenius_norm(want), 1e-12);
            c.require(err < 1e-4, "(" + fmt(grid[i]) + "," + fmt(grid[j]) + ") err " + fmt(err));
        }
    return {"normalized quadrature covariance matches the closed-form scalar oracle", c.pass,
            c.detail.str()};
}

CriterionResult c11_density_invariance(const std::string& dir) {
    Check c;
    const std::vector<double> tgrid{-1.0, -0.5, 0.5, 1.0};
    {
        Setup s = load(dir, "example_5_1.json");
        SymmetryClassification cl = classify2(s.p, s.d, s.fam);
        const double err = exponents::density_invariance_check(s.p, s.d, cl, tgrid);
        c.require(cl.group_type == GroupType::Rotational, "5_1 must be rotational");
        c.require(err < 1e-9, "rotational fixture err " + fmt(err));
    }
    {
        Setup s = load(dir, "example_2_1.json");
        SymmetryClassification cl = classify2(s.p, s.d, s.fam);
        const double err = exponents::density_invariance_check(s.p, s.d, cl, tgrid);
        c.require(cl.group_type == GroupType::Maximal, "2_1 must be maximal");
        c.require(err < 1e-9, "maximal fixture err " + fmt(err));
    }
    return {"spectral density is invariant along the tangent directions (same A)", c.pass,
            c.detail.str()};
}

CriterionResult c12_time_domain_factor(const std::string& dir) {
    Check c;
    double dv = 0.2, c1 = 0.5, c2 = 1.0, beta = M_PI / 3.0;
    {
        std::ifstream in(dir + "/example_6_1.json");
        nlohmann::json doc = nlohmann::json::parse(in);
        dv = doc["d"].get<double>();
        c1 = doc["c_values"][0].get<double>();
        c2 = doc["c_values"][1].get<double>();
        beta = doc["beta"].get<double>();
    }
    const double f1 = process::time_domain_f(dv, c1, beta);
    const double f2 = process::time_domain_f(dv, c2, beta);
    c.require(std::abs(f1 - f2) > 0.1,
              "difference " + fmt(std::abs(f1 - f2)) + " not above 0.1");
    for (double cv : {0.25, 1.0, 2.0}) {
        const double mag2 = std::norm(process::complex_gamma({1.0, cv}));
        const double ident = mag2 * std::sinh(M_PI * cv) / (M_PI * cv);
        c.require(std::abs(ident - 1.0) <= 1e-10, "reflection identity at c=" + fmt(cv));
    }
    return {"time-domain factor depends on c; gamma reflection identity", c.pass,
            c.detail.str()};
}

CriterionResult c13_conjugation_covariance(const std::string& dir) {
    Check c;
    Rng rng(13131);
    for (const auto& name : kFixtureSet) {
        Setup base = load(dir, name);
        SymmetryClassification c0 = classify_general(base.p, base.d, base.fam);
        for (int trial = 0; trial < 20; ++trial) {
            RealMatrix q = rng.random_orthogonal(base.p.n);
            RealMatrix dq = q * base.p.d_exponent * q.transpose();
            ComplexMatrix aq = q * base.p.a;
            Setup s = from(dq, aq);
            SymmetryClassification cl = classify_general(s.p, s.d, s.fam);
            if (cl.group_type != c0.group_type) {
                c.require(false, name + " trial " + std::to_string(trial) + ": " +
                                     to_string(c0.group_type) + " became " +
                                     to_string(cl.group_type));
                break;
            }
        }
    }
    return {"20 random orthogonal conjugations preserve every fixture's group type", c.pass,
            c.detail.str()};
}

CriterionResult c14_monte_carlo(const std::string& dir) {
    Check c;
    Setup s = load(dir, "example_2_1.json");
    QuadratureConfig q;
    q.x_max = 1e3;
    q.panels = 24;
    q.nodes_per_panel = 24;

    const int n_paths = 20000;
    process::SamplePaths paths = process::simulate(s.p, {1.0}, n_paths, 42, q);
    RealMatrix quad = process::covariance(s.p, 1.0, 1.0, q);
    for (int j = 0; j < s.p.n; ++j) {
        double var = 0.0;
        for (int path = 0; path < n_paths; ++path) {
            const double v = paths.at(path, 0, j);
            var += v * v;
        }
        var /= n_paths;
        const double rel = std::abs(var - quad(j, j)) / quad(j, j);
        c.require(rel < 0.05, "component " + std::to_string(j) + " rel err " + fmt(rel));
    }
    process::SamplePaths again = process::simulate(s.p, {1.0}, n_paths, 42, q);
    c.require(process::paths_to_csv(paths) == process::paths_to_csv(again),
              "identical seed must reproduce byte-identical CSV");
    return {"2e4 simulated paths match the quadrature variance within 5%", c.pass,
            c.detail.str()};
}

CriterionResult c15_invariant_subspace_oracle(const std::string&) {
    Check c;
    Rng rng(5150);
    int disagreements = 0;
    for (int n = 3; n <= 6; ++n) {
        RealMatrix basis = RealMatrix::identity(n);
        for (int trial = 0; trial < 200; ++trial) {
            RealMatrix l(n, n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) {
                    const double v = rng.normal();
                    l(i, j) = v;
                    l(j, i) = -v;
                }
            if (trial % 2 == 0) {
                uint32_t mask = 1 + rng.next_u64() % ((uint32_t{1} << n) - 2);
                for (int i = 0; i < n; ++i)
                    for (int j = 0; j < n; ++j)
                        if (((mask >> i) & 1u) != ((mask >> j) & 1u)) l(i, j) = 0.0;
            }
            const bool fast = commutant::in_L_invar(l, basis);
            bool slow = false;
            for (uint32_t mask = 1; mask + 1 < (uint32_t{1} << n) && !slow; ++mask) {
                int k = 0;
                for (int i = 0; i < n; ++i) k += (mask >> i) & 1u;
                RealMatrix v(n, k);
                int col = 0;
                for (int i = 0; i < n; ++i)
                    if ((mask >> i) & 1u) v.set_col(col++, basis.col(i));
                if (commutant::is_invariant_subspace(l, v, 1e-9)) slow = true;
            }
            if (fast != slow) ++disagreements;
        }
    }
    c.require(disagreements == 0, std::to_string(disagreements) + " disagreements");
    return {"graph method agrees with subset enumeration on 200 skew matrices per n", c.pass,
            c.detail.str()};
}

using CriterionFn = std::function<CriterionResult(const std::string&)>;

const std::vector<std::pair<std::string, CriterionFn>>& registry() {
    static const std::vector<std::pair<std::string, CriterionFn>> table = {
        {"example_5_2 trivial group", c01_trivial_group},
        {"example_5_1 rotational type", c02_rotational},
        {"single-parameter maximal", c03_single_parameter},
        {"example_5_3 axial T3b", c04_jordan_axial},
        {"examples 5_4/5_5/5_6", c05_remaining_types},
        {"minimal certificate", c06_minimal_certificate},
        {"commutant dimensions", c07_commutant_dimensions},
        {"commutator-order remainder", c08_bch_order},
        {"o.s.s. covariance identity", c09_oss_identity},
        {"scalar covariance oracle", c10_fbm_oracle},
        {"density invariance in the exponent", c11_density_invariance},
        {"time-domain factor and gamma identity", c12_time_domain_factor},
        {"conjugation covariance", c13_conjugation_covariance},
        {"Monte Carlo variance and determinism", c14_monte_carlo},
        {"invariant-subspace oracle equivalence", c15_invariant_subspace_oracle},
    };
    return table;
}

}  // namespace

std::vector<std::string> criterion_names() {
    std::vector<std::string> names;
    for (const auto& [name, fn] : registry()) names.push_back(name);
    return names;
}

std::string default_fixtures_dir() { return OFBM_FIXTURES_DIR; }

std::vector<CriterionResult> run_all(const std::string& fixtures_dir) {
    std::vector<CriterionResult> results;
    for (const auto& [name, fn] : registry()) {
        try {
            results.push_back(fn(fixtures_dir));
        } catch (const std::exception& e) {
            results.push_back({name, false, std::string("exception: ") + e.what()});
        }
    }
    return results;
}

}  // namespace ofbm::acceptance
