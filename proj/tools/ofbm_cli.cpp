#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "ofbm/acceptance.hpp"
#include "ofbm/exponents.hpp"
#include "ofbm/process.hpp"
#include "ofbm/report_io.hpp"

namespace {

using namespace ofbm;

constexpr int kExitOk = 0;
constexpr int kExitIo = 1;
constexpr int kExitValidation = 2;
constexpr int kExitAmbiguous = 3;

struct CommonOpts {
    std::string params_path;
    std::string out_path;
    double tol = 0.0;  // 0 = keep the params-file / default verification tolerance
    uint64_t seed = 42;
    double c_scale = 2.0;
    double t_max = 2.0;
    int steps = 5;
    int paths = 1000;
    double x_max = 0.0;
    int panels = 0;
};

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open output file: " + path);
    out << text;
}

params::SpectralParams load(const CommonOpts& opt, bool require_domain) {
    params::ValidationFlags flags;
    flags.require_domain = require_domain;
    params::SpectralParams p = io::load_params_file(opt.params_path, flags);
    if (opt.tol > 0.0) p.tolerances.eps_element = opt.tol;
    return p;
}

process::QuadratureConfig quad(const CommonOpts& opt) {
    process::QuadratureConfig q;
    if (opt.x_max > 0.0) q.x_max = opt.x_max;
    if (opt.panels > 0) q.panels = opt.panels;
    return q;
}

std::vector<double> time_grid(const CommonOpts& opt, bool include_zero) {
    std::vector<double> times;
    if (include_zero) times.push_back(0.0);
    for (int i = 1; i <= opt.steps; ++i) times.push_back(opt.t_max * i / opt.steps);
    return times;
}

int cmd_classify(const CommonOpts& opt, bool with_exponents) {
    params::SpectralParams p = load(opt, false);
    params::DerivedParams d = params::derive(p);
    params::PiFamily fam = params::build_pi_family(d, p);
    symmetry::SymmetryClassification c = symmetry::classify_general(p, d, fam);

    std::string report;
    if (with_exponents) {
        exponents::ExponentSet es = exponents::exponent_set(p, c);
        exponents::CommutingExponent ce = exponents::commuting_exponent(p, c);
        report = io::exponent_report_json(es, ce);
    } else {
        report = io::classification_report_json(c);
    }
    write_output(opt.out_path, report);
    return c.diagnostics.empty() ? kExitOk : kExitAmbiguous;
}

int cmd_covariance(const CommonOpts& opt) {
    params::SpectralParams p = load(opt, true);
    process::CovarianceGrid grid = process::covariance_grid(p, time_grid(opt, false), quad(opt));
    write_output(opt.out_path, io::covariance_report_json(grid));
    return kExitOk;
}

int cmd_simulate(const CommonOpts& opt) {
    params::SpectralParams p = load(opt, true);
    process::SamplePaths paths =
        process::simulate(p, time_grid(opt, true), opt.paths, opt.seed, quad(opt));
    write_output(opt.out_path, process::paths_to_csv(paths));
    return kExitOk;
}

int cmd_oss_check(const CommonOpts& opt) {
    params::SpectralParams p = load(opt, true);
    const double err = process::oss_check(p, opt.c_scale, time_grid(opt, false), quad(opt));
    std::printf("oss relative error at c=%g: %.6e\n", opt.c_scale, err);
    return kExitOk;
}

int cmd_verify_paper(const std::string& fixtures, bool list_only) {
    if (list_only) {
        for (const auto& name : acceptance::criterion_names()) std::printf("%s\n", name.c_str());
        return kExitOk;
    }
    auto results = acceptance::run_all(fixtures);
    bool all = true;
    for (const auto& r : results) {
        std::printf("[%s] %s%s%s\n", r.pass ? "PASS" : "FAIL", r.name.c_str(),
                    r.detail.empty() ? "" : " -- ", r.detail.c_str());
        all = all && r.pass;
    }
    std::printf("%zu criteria, %s\n", results.size(), all ? "all passed" : "FAILURES present");
    return all ? kExitOk : kExitAmbiguous;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Symmetry groups, exponent sets and process checks for operator "
                 "fractional Brownian motion given its spectral parameters (D, A)"};
    app.require_subcommand(1);

    CommonOpts opt;
    std::string fixtures = acceptance::default_fixtures_dir();
    bool list_only = false;

    auto add_common = [&](CLI::App* cmd, bool needs_params) {
        auto* po = cmd->add_option("--params", opt.params_path, "parameter JSON document");
        if (needs_params) po->required();
        cmd->add_option("--out", opt.out_path, "output file (stdout when omitted)");
        cmd->add_option("--tol", opt.tol, "verification tolerance override");
    };

    auto* classify = app.add_subcommand("classify", "compute the symmetry group");
    add_common(classify, true);

    auto* exps = app.add_subcommand("exponents", "compute the exponent set and H0");
    add_common(exps, true);

    auto* cov = app.add_subcommand("covariance", "covariance grid by quadrature");
    add_common(cov, true);
    cov->add_option("--t-max", opt.t_max, "largest grid time");
    cov->add_option("--steps", opt.steps, "number of grid times");
    cov->add_option("--x-max", opt.x_max, "quadrature truncation");
    cov->add_option("--panels", opt.panels, "quadrature panels per region");

    auto* sim = app.add_subcommand("simulate", "sample paths from the spectral representation");
    add_common(sim, true);
    sim->add_option("--t-max", opt.t_max, "largest time");
    sim->add_option("--steps", opt.steps, "time steps");
    sim->add_option("--paths", opt.paths, "number of paths");
    sim->add_option("--seed", opt.seed, "master seed");
    sim->add_option("--x-max", opt.x_max, "quadrature truncation");
    sim->add_option("--panels", opt.panels, "quadrature panels per region");

    auto* oss = app.add_subcommand("oss-check", "verify the operator scaling law");
    add_common(oss, true);
    oss->add_option("--c", opt.c_scale, "scaling factor");
    oss->add_option("--t-max", opt.t_max, "largest grid time");
    oss->add_option("--steps", opt.steps, "number of grid times");
    oss->add_option("--x-max", opt.x_max, "quadrature truncation");
    oss->add_option("--panels", opt.panels, "quadrature panels per region");

    auto* verify = app.add_subcommand("verify-paper", "run the built-in acceptance suite");
    verify->add_option("--fixtures", fixtures, "fixtures directory");
    verify->add_flag("--list", list_only, "list criteria without running");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(classify)) return cmd_classify(opt, false);
        if (app.got_subcommand(exps)) return cmd_classify(opt, true);
        if (app.got_subcommand(cov)) return cmd_covariance(opt);
        if (app.got_subcommand(sim)) return cmd_simulate(opt);
        if (app.got_subcommand(oss)) return cmd_oss_check(opt);
        if (app.got_subcommand(verify)) return cmd_verify_paper(fixtures, list_only);
    } catch (const ofbm::validation_error& e) {
        std::fprintf(stderr, "validation error: %s\n", e.what());
        return kExitValidation;
    } catch (const ofbm::domain_error& e) {
        std::fprintf(stderr, "domain error: %s\n", e.what());
        return kExitValidation;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    }
    return kExitOk;
}
