#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include <json.hpp>

#include "ofbm/params.hpp"
#include "ofbm/report_io.hpp"
#include "ofbm/rng.hpp"

using namespace ofbm;
using namespace ofbm::params;

namespace {

SpectralParams make(const RealMatrix& d, const RealMatrix& a_re) {
    return validate(d, ComplexMatrix(a_re));
}

SpectralParams make(const RealMatrix& d, const RealMatrix& a_re, const RealMatrix& a_im) {
    return validate(d, ComplexMatrix(a_re, a_im));
}

// Jordan-type exponent: one 2x2 block plus a scalar, all eigenvalues d.
RealMatrix jordan_d(double dv) {
    return RealMatrix{{dv, 0.0, 0.0}, {1.0, dv, 0.0}, {0.0, 0.0, dv}};
}

}  // namespace

TEST_CASE("validate") {
    SpectralParams p = make(0.2 * RealMatrix::identity(2), RealMatrix::identity(2));
    CHECK(p.full_rank_ok);
    CHECK(p.domain_ok);

    // rank-1 Re(AA*) fails the full-rank gate
    RealMatrix a1{{1.0, 0.0}, {0.0, 0.0}};
    CHECK_THROWS_AS(make(0.2 * RealMatrix::identity(2), a1), validation_error);

    // eigenvalue-domain flag
    ValidationFlags flags;
    flags.require_domain = true;
    CHECK_THROWS_AS(
        validate(RealMatrix::diag({0.2, 0.7}), ComplexMatrix(RealMatrix::identity(2)), flags),
        validation_error);
    SpectralParams ok =
        validate(RealMatrix::diag({0.2, 0.4}), ComplexMatrix(RealMatrix::identity(2)), flags);
    CHECK(ok.domain_ok);

    // Jordan block inside the domain
    SpectralParams pj = make(jordan_d(0.2), RealMatrix::identity(3));
    CHECK(pj.domain_ok);
}

TEST_CASE("derive") {
    SpectralParams p1 = make(RealMatrix::diag({0.1, 0.3}), RealMatrix::identity(2));
    DerivedParams d1 = derive(p1);
    CHECK(approx_equal(d1.w, RealMatrix::identity(2), 1e-13));
    CHECK(approx_equal(d1.m, p1.d_exponent, 1e-13));

    // diagonal conjugation commutes with a diagonal exponent
    SpectralParams p2 = make(RealMatrix::diag({0.1, 0.3}), RealMatrix::diag({2.0, 3.0}));
    DerivedParams d2 = derive(p2);
    CHECK(approx_equal(d2.w, RealMatrix::diag({2.0, 3.0}), 1e-12));
    CHECK(approx_equal(d2.m, p2.d_exponent, 1e-12));

    Rng rng(101);
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 3;
        RealMatrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
        g += (n + 1.0) * RealMatrix::identity(n) * 0.0;  // keep generic
        RealMatrix dd(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) dd(i, j) = 0.1 * rng.normal();
        SpectralParams p = make(dd, g);
        DerivedParams d = derive(p);
        CHECK(frobenius_norm(d.w * d.w - d.re_aa) <= 1e-10 * std::max(1.0, frobenius_norm(d.re_aa)));
        CHECK(frobenius_norm(d.w * d.w_inv - RealMatrix::identity(n)) <= 1e-10);
        CHECK(frobenius_norm(d.w * d.m - p.d_exponent * d.w) <=
              1e-10 * std::max(1.0, frobenius_norm(p.d_exponent)));
    }
}

TEST_CASE("pi_x") {
    SpectralParams p = make(RealMatrix::diag({0.2, 0.4}), RealMatrix::identity(2));
    DerivedParams d = derive(p);
    CHECK(approx_equal(pi_x(d, 1.0), RealMatrix::identity(2), 1e-14));
    for (double x : {0.5, 2.0, 7.3}) {
        RealMatrix expected =
            RealMatrix::diag({std::pow(x, -0.4), std::pow(x, -0.8)});
        CHECK(approx_equal(pi_x(d, x), expected, 1e-12 * frobenius_norm(expected)));
    }
    CHECK_THROWS_AS(pi_x(d, 0.0), domain_error);

    // Jordan-type closed form: x^{-2d} [[1, -log x, 0], [-log x, log^2 x + 1, 0], [0,0,1]]
    SpectralParams pj = make(jordan_d(0.2), RealMatrix::identity(3));
    DerivedParams dj = derive(pj);
    for (double x : {std::exp(-1.0), std::exp(1.0), 0.7}) {
        const double l = std::log(x);
        const double s = std::pow(x, -0.4);
        RealMatrix expected{{s, -s * l, 0.0}, {-s * l, s * (l * l + 1.0), 0.0}, {0.0, 0.0, s}};
        CHECK(frobenius_norm(pi_x(dj, x) - expected) <= 1e-10 * frobenius_norm(expected));
    }
}

TEST_CASE("pi_m") {
    SpectralParams p = make(RealMatrix{{0.2, 0.1}, {-0.3, 0.4}}, RealMatrix::identity(2));
    DerivedParams d = derive(p);
    CHECK(approx_equal(pi_m(d, 1), d.m + d.m.transpose(), 1e-13));
    CHECK_THROWS_AS(pi_m(d, 0), domain_error);

    // normal D with Re(AA*) = I: Pi^(m) = (D + D^T)^m
    RealMatrix dn{{0.1, 0.2}, {-0.2, 0.1}};
    SpectralParams pn = make(dn, RealMatrix::identity(2));
    DerivedParams dd = derive(pn);
    RealMatrix s = dn + dn.transpose();
    RealMatrix sm = RealMatrix::identity(2);
    for (int m = 1; m <= 4; ++m) {
        sm = sm * s;
        CHECK(approx_equal(pi_m(dd, m), sm, 1e-12 * std::max(1.0, frobenius_norm(sm))));
    }

    // skew M has vanishing first derivative family
    RealMatrix skew{{0.0, 0.4}, {-0.4, 0.0}};
    DerivedParams ds = derive(make(skew, RealMatrix::identity(2)));
    CHECK(frobenius_norm(pi_m(ds, 1)) <= 1e-14);
}

TEST_CASE("pi_I") {
    SpectralParams preal = make(RealMatrix::diag({0.1, 0.2}), RealMatrix{{1.0, 0.3}, {0.0, 0.8}});
    DerivedParams dreal = derive(preal);
    CHECK(frobenius_norm(pi_I(dreal, preal)) <= 1e-12);

    // two distinct rotations scaled by 1/sqrt(2): Re = I, Im nonzero skew
    const double r2 = std::sqrt(2.0);
    const double a = M_PI / 3.0, b = -M_PI / 6.0;
    RealMatrix a1{{std::cos(a) / r2, -std::sin(a) / r2}, {std::sin(a) / r2, std::cos(a) / r2}};
    RealMatrix a2{{std::cos(b) / r2, -std::sin(b) / r2}, {std::sin(b) / r2, std::cos(b) / r2}};
    SpectralParams prot = make(0.3 * RealMatrix::identity(2), a1, a2);
    DerivedParams drot = derive(prot);
    CHECK(approx_equal(drot.re_aa, RealMatrix::identity(2), 1e-12));
    RealMatrix pii = pi_I(drot, prot);
    CHECK(frobenius_norm(pii + pii.transpose()) <= 1e-12);
    CHECK(frobenius_norm(pii) > 0.5);

    // 3-d embedding with a rotation block in Im(AA*) and zero third row
    const double lam = 0.6;
    const double al = (std::sqrt(1.0 + lam) + std::sqrt(1.0 - lam)) / 2.0;
    const double be = (std::sqrt(1.0 + lam) - std::sqrt(1.0 - lam)) / 2.0;
    RealMatrix b1 = RealMatrix::diag({al, al, 1.0});
    RealMatrix b2{{0.0, -be, 0.0}, {be, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    SpectralParams p56 = make(0.3 * RealMatrix::identity(3), b1, b2);
    DerivedParams d56 = derive(p56);
    CHECK(approx_equal(d56.re_aa, RealMatrix::identity(3), 1e-12));
    RealMatrix expected{{0.0, -lam, 0.0}, {lam, 0.0, 0.0}, {0.0, 0.0, 0.0}};
    CHECK(approx_equal(pi_I(d56, p56), expected, 1e-12));
}

TEST_CASE("build_pi_family span dimensions") {
    // single-parameter: the whole family is scalar
    SpectralParams p1 = make(0.3 * RealMatrix::identity(2), RealMatrix::identity(2));
    DerivedParams d1 = derive(p1);
    PiFamily f1 = build_pi_family(d1, p1);
    REQUIRE(f1.span_basis.size() == 1);
    CHECK(frobenius_norm(f1.span_basis[0] -
                         (f1.span_basis[0].trace() / 2.0) * RealMatrix::identity(2)) <= 1e-9);
    CHECK(f1.warnings.empty());
    for (double x : f1.sample_points) CHECK(x != 1.0);

    // two distinct diagonal rates: two diagonal directions
    SpectralParams p2 = make(RealMatrix::diag({0.2, 0.4}), RealMatrix::identity(2));
    PiFamily f2 = build_pi_family(derive(p2), p2);
    CHECK(f2.span_basis.size() == 2);

    // Jordan-type: the 2x2 block contributes three symmetric directions
    SpectralParams p3 = make(jordan_d(0.2), RealMatrix::identity(3));
    PiFamily f3 = build_pi_family(derive(p3), p3);
    CHECK(f3.span_basis.size() == 3);
}

TEST_CASE("parameter document parsing") {
    SpectralParams p = io::params_from_json(R"({
        "n": 2,
        "D": [[0.2, 0.0], [0.0, 0.4]],
        "A_re": [[1.0, 0.0], [0.0, 2.0]],
        "A_im": [[0.0, 0.1], [-0.1, 0.0]],
        "tolerances": {"eps_element": 1e-6, "cluster_gap": 1e-5}
    })");
    CHECK(p.n == 2);
    CHECK(p.d_exponent(1, 1) == 0.4);
    CHECK(p.a.imag()(0, 1) == 0.1);
    CHECK(p.tolerances.eps_element == 1e-6);
    CHECK(p.tolerances.cluster_gap == 1e-5);
    CHECK(p.tolerances.eps_eig == ToleranceConfig{}.eps_eig);

    // omitted A_im means zero, omitted A_re means identity
    SpectralParams pz = io::params_from_json(R"({"n": 2, "D": [[0.1, 0.0], [0.0, 0.3]]})");
    CHECK(frobenius_norm(pz.a.imag()) == 0.0);
    CHECK(approx_equal(pz.a.real(), RealMatrix::identity(2), 0.0));

    CHECK_THROWS_AS(io::params_from_json("{\"n\": 2}"), validation_error);
    CHECK_THROWS_AS(io::params_from_json("{\"n\": 2, \"D\": [[0.1]]}"), validation_error);
    CHECK_THROWS_AS(io::params_from_json("not json"), std::runtime_error);
    CHECK_THROWS_AS(io::params_from_json(R"({"n": 0, "D": []})"), validation_error);
}

TEST_CASE("report emission") {
    SpectralParams p = io::params_from_json(R"({"n": 2, "D": [[0.2, 0.0], [0.0, 0.4]]})");
    DerivedParams d = derive(p);
    PiFamily fam = build_pi_family(d, p);
    auto c = symmetry::classify_general(p, d, fam);
    auto doc = nlohmann::json::parse(io::classification_report_json(c));
    CHECK(doc["group_type"] == "Trivial");
    CHECK(doc["lie_dimension"] == 0);
    CHECK(doc["finite_elements"].size() == 4);
    CHECK(doc["conjugacy_W"][0][0] == 1.0);
    CHECK(doc["axes"].size() == 2);

    auto es = exponents::exponent_set(p, c);
    auto ce = exponents::commuting_exponent(p, c);
    auto edoc = nlohmann::json::parse(io::exponent_report_json(es, ce));
    CHECK(edoc["unique"] == true);
    CHECK(edoc["H"][0][0].get<double>() == doctest::Approx(0.7));
    CHECK(edoc["H0_residual"].get<double>() < 1e-10);
}

TEST_CASE("pi_x values are symmetric positive definite") {
    Rng rng(211);
    for (int trial = 0; trial < 8; ++trial) {
        const int n = 2 + trial % 2;
        RealMatrix dd(n, n), g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                dd(i, j) = 0.15 * rng.normal();
                g(i, j) = rng.normal();
            }
        SpectralParams p = make(dd, g);
        DerivedParams d = derive(p);
        PiFamily fam = build_pi_family(d, p);
        for (const auto& px : fam.pi_x_values) {
            CHECK(frobenius_norm(px - px.transpose()) <= 1e-10 * frobenius_norm(px));
            auto e = matfun::sym_eig(px);
            CHECK(e.eigenvalues.back() > 0.0);
        }
    }
}

TEST_CASE("pi family scaling consistency") {
    Rng rng(223);
    for (int trial = 0; trial < 6; ++trial) {
        RealMatrix dd(2, 2);
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) dd(i, j) = 0.2 * rng.normal();
        SpectralParams p = make(dd, RealMatrix::identity(2));
        DerivedParams d = derive(p);
        const double x = std::exp(rng.uniform() - 0.5);
        const double y = std::exp(rng.uniform() - 0.5);
        RealMatrix g = matfun::mat_power(-1.0 * d.m, x);
        RealMatrix lhs = pi_x(d, x * y);
        RealMatrix rhs = g * pi_x(d, y) * g.transpose();
        CHECK(frobenius_norm(lhs - rhs) <= 1e-9 * std::max(1.0, frobenius_norm(lhs)));
    }
}

TEST_CASE("taylor and commutator-order consistency near x = 1") {
    Rng rng(227);
    for (int trial = 0; trial < 5; ++trial) {
        RealMatrix m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = rng.normal();
        m *= 0.8 / matfun::spectral_norm(m);
        SpectralParams p = make(m, RealMatrix::identity(3));
        DerivedParams d = derive(p);

        RealMatrix p1 = pi_m(d, 1), p2 = pi_m(d, 2);
        std::vector<double> taylor_ratios;
        for (double l : {0.1, 0.05, 0.025, -0.1, -0.05, -0.025}) {
            const double x = std::exp(l);
            RealMatrix r = pi_x(d, x) - RealMatrix::identity(3) + l * p1 - (l * l / 2.0) * p2;
            taylor_ratios.push_back(frobenius_norm(r) / std::abs(l * l * l));
        }
        const auto [tmin, tmax] =
            std::minmax_element(taylor_ratios.begin(), taylor_ratios.end());
        CHECK(*tmax < 10.0 * std::max(*tmin, 1e-6));

        // log(Pi_x) = -log(x)(M + M^T) + (log^2 x / 2)[M, M^T] + O(log^3 x)
        RealMatrix sum = d.m + d.m.transpose();
        RealMatrix comm = matfun::commutator(d.m, d.m.transpose());
        std::vector<double> ratios;
        for (int k = 1; k <= 4; ++k) {
            for (double sgn : {1.0, -1.0}) {
                const double x = 1.0 + sgn * std::pow(10.0, -k);
                const double l = std::log(x);
                RealMatrix r =
                    matfun::logm_principal(pi_x(d, x)) + l * sum - (l * l / 2.0) * comm;
                ratios.push_back(frobenius_norm(r) / std::abs(l * l * l));
            }
        }
        const auto [rmin, rmax] = std::minmax_element(ratios.begin(), ratios.end());
        CHECK(*rmax < 10.0 * *rmin);
    }
}
