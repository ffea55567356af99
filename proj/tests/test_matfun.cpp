#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ofbm/matfun.hpp"
#include "ofbm/rng.hpp"

using namespace ofbm;
using namespace ofbm::matfun;

namespace {

double residual(const RealMatrix& a, const RealMatrix& b) { return frobenius_norm(a - b); }

RealMatrix random_symmetric(Rng& rng, int n, double scale = 1.0) {
    RealMatrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = rng.normal() * scale;
    return symmetric_part(m);
}

}  // namespace

TEST_CASE("expm identities") {
    CHECK(residual(expm(RealMatrix::zero(2, 2)), RealMatrix::identity(2)) < 1e-15);

    // exp of the skew generator scaled to a full turn is the identity.
    const double s = 2.0 * M_PI;
    RealMatrix l{{0.0, s}, {-s, 0.0}};
    CHECK(residual(expm(l), RealMatrix::identity(2)) < 1e-13);

    RealMatrix d = RealMatrix::diag({std::log(2.0), std::log(3.0)});
    CHECK(residual(expm(d), RealMatrix::diag({2.0, 3.0})) < 1e-13);

    CHECK_THROWS_AS(expm(RealMatrix(2, 3)), shape_error);
    CHECK_THROWS_AS(expm(1e20 * RealMatrix::identity(2)), numeric_error);
}

TEST_CASE("expm of skew matrices is special orthogonal") {
    Rng rng(7);
    for (int trial = 0; trial < 25; ++trial) {
        const int n = 2 + trial % 5;
        RealMatrix l(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double v = rng.normal();
                l(i, j) = v;
                l(j, i) = -v;
            }
        RealMatrix o = expm(l);
        CHECK(residual(o * o.transpose(), RealMatrix::identity(n)) < 1e-10);
        // det(exp(L)) = e^{tr L} = 1; product of eigenvalues stays real
        std::complex<double> det{1.0, 0.0};
        for (auto z : eigenvalues_general(o)) det *= z;
        CHECK(std::abs(det - std::complex<double>(1.0, 0.0)) < 1e-8);
    }
}

TEST_CASE("mat_power basics and semigroup property") {
    RealMatrix m{{0.3, 0.1}, {0.0, -0.2}};
    CHECK(residual(mat_power(m, 1.0), RealMatrix::identity(2)) < 1e-15);

    RealMatrix di = 0.7 * RealMatrix::identity(3);
    RealMatrix p = mat_power(di, 2.5);
    CHECK(residual(p, std::pow(2.5, 0.7) * RealMatrix::identity(3)) < 1e-12);

    RealMatrix d2 = RealMatrix::diag({0.4, -0.3});
    RealMatrix q = mat_power(d2, 5.0);
    CHECK(q(0, 0) == doctest::Approx(std::pow(5.0, 0.4)).epsilon(1e-12));
    CHECK(q(1, 1) == doctest::Approx(std::pow(5.0, -0.3)).epsilon(1e-12));

    CHECK_THROWS_AS(mat_power(m, 0.0), domain_error);
    CHECK_THROWS_AS(mat_power(m, -2.0), domain_error);

    Rng rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 3;
        RealMatrix a(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) a(i, j) = 0.5 * rng.normal();
        const double x = std::exp(rng.uniform() * 2.0 - 1.0);
        const double y = std::exp(rng.uniform() * 2.0 - 1.0);
        RealMatrix lhs = mat_power(a, x * y);
        RealMatrix rhs = mat_power(a, x) * mat_power(a, y);
        CHECK(residual(lhs, rhs) <= 1e-9 * (1.0 + frobenius_norm(lhs)));
        CHECK(residual(mat_power(a, x) * mat_power(a, 1.0 / x), RealMatrix::identity(n)) < 1e-9);
    }
}

TEST_CASE("sym_eig examples") {
    SymEig e = sym_eig(RealMatrix::identity(3));
    for (double l : e.eigenvalues) CHECK(l == doctest::Approx(1.0));

    SymEig e2 = sym_eig(RealMatrix::diag({5.0, 2.0}));
    CHECK(e2.eigenvalues[0] == doctest::Approx(5.0));
    CHECK(e2.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(std::abs(e2.eigenvectors(0, 0)) == doctest::Approx(1.0));

    // Characteristic polynomial of [[1,1],[1,2]] is l^2 - 3l + 1.
    SymEig e3 = sym_eig(RealMatrix{{1.0, 1.0}, {1.0, 2.0}});
    CHECK(e3.eigenvalues[0] == doctest::Approx((3.0 + std::sqrt(5.0)) / 2.0).epsilon(1e-13));
    CHECK(e3.eigenvalues[1] == doctest::Approx((3.0 - std::sqrt(5.0)) / 2.0).epsilon(1e-13));

    CHECK_THROWS_AS(sym_eig(RealMatrix{{0.0, 1.0}, {-1.0, 0.0}}), domain_error);
}

TEST_CASE("sym_eig reconstruction on random symmetric matrices") {
    Rng rng(23);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 7;  // up to 8
        RealMatrix s = random_symmetric(rng, n, 2.0);
        SymEig e = sym_eig(s);
        RealMatrix lam = RealMatrix::diag(e.eigenvalues);
        const double scale = std::max(1.0, frobenius_norm(s));
        CHECK(residual(e.eigenvectors * lam * e.eigenvectors.transpose(), s) <= 1e-11 * scale);
        CHECK(residual(e.eigenvectors.transpose() * e.eigenvectors, RealMatrix::identity(n)) <
              1e-12);
        for (size_t i = 1; i < e.eigenvalues.size(); ++i)
            CHECK(e.eigenvalues[i - 1] >= e.eigenvalues[i]);
    }
}

TEST_CASE("logm_principal") {
    CHECK(frobenius_norm(logm_principal(RealMatrix::identity(3))) < 1e-14);

    RealMatrix d = RealMatrix::diag({std::exp(1.0), std::exp(2.0)});
    CHECK(residual(logm_principal(d), RealMatrix::diag({1.0, 2.0})) < 1e-13);

    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 2 + trial % 4;
        RealMatrix s = random_symmetric(rng, n, 0.4);
        // round trip oracle: log(exp(S)) recovers S for symmetric S
        CHECK(residual(logm_principal(expm(s)), s) < 1e-10);
    }
    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 3;
        RealMatrix s = random_symmetric(rng, n, 1.0);
        const double nrm = spectral_norm(s);
        if (nrm > 2.0) s *= 2.0 / nrm;
        CHECK(residual(logm_principal(expm(s)), s) <= 1e-9);
    }

    CHECK_THROWS_AS(logm_principal(RealMatrix::diag({1.0, -0.5})), domain_error);
    CHECK_THROWS_AS(logm_principal(RealMatrix::diag({1.0, 0.0})), domain_error);
}

TEST_CASE("commutator") {
    RealMatrix a{{1.0, 2.0}, {3.0, 4.0}};
    CHECK(frobenius_norm(commutator(a, a)) == 0.0);
    CHECK(frobenius_norm(commutator(RealMatrix::identity(2), a)) == 0.0);

    // Hand multiplication: [E12, E21] = diag(1, -1).
    RealMatrix e12{{0.0, 1.0}, {0.0, 0.0}};
    RealMatrix e21{{0.0, 0.0}, {1.0, 0.0}};
    CHECK(residual(commutator(e12, e21), RealMatrix::diag({1.0, -1.0})) == 0.0);

    CHECK_THROWS_AS(commutator(a, RealMatrix::identity(3)), shape_error);

    // [M, M^T] = 2 [L, S] for the symmetric/skew split M = S + L.
    Rng rng(31);
    for (int trial = 0; trial < 10; ++trial) {
        RealMatrix m(3, 3);
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) m(i, j) = rng.normal();
        RealMatrix s = symmetric_part(m), l = skew_part(m);
        CHECK(residual(commutator(m, m.transpose()), 2.0 * commutator(l, s)) < 1e-13);
    }
}

TEST_CASE("spectral_norm") {
    CHECK(spectral_norm(RealMatrix::identity(4)) == doctest::Approx(1.0));
    CHECK(spectral_norm(RealMatrix::diag({3.0, -4.0})) == doctest::Approx(4.0));
    const double th = 0.77;
    RealMatrix rot{{std::cos(th), -std::sin(th)}, {std::sin(th), std::cos(th)}};
    CHECK(spectral_norm(rot) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("psd_sqrt") {
    CHECK(residual(psd_sqrt(RealMatrix::identity(3)), RealMatrix::identity(3)) < 1e-14);
    CHECK(residual(psd_sqrt(RealMatrix::diag({4.0, 9.0})), RealMatrix::diag({2.0, 3.0})) < 1e-13);

    // conjugation oracle: sqrt(Q diag(4,1) Q^T) = Q diag(2,1) Q^T
    Rng rng(13);
    for (int trial = 0; trial < 10; ++trial) {
        RealMatrix q = rng.random_orthogonal(2);
        RealMatrix p = q * RealMatrix::diag({4.0, 1.0}) * q.transpose();
        CHECK(residual(psd_sqrt(p), q * RealMatrix::diag({2.0, 1.0}) * q.transpose()) < 1e-12);
    }

    for (int trial = 0; trial < 10; ++trial) {
        const int n = 2 + trial % 5;
        RealMatrix g(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) g(i, j) = rng.normal();
        RealMatrix p = g * g.transpose();
        RealMatrix r = psd_sqrt(p);
        CHECK(residual(r * r, p) <= 1e-10 * std::max(1.0, frobenius_norm(p)));
    }

    CHECK_THROWS_AS(psd_sqrt(RealMatrix::diag({1.0, -0.2})), domain_error);
}

TEST_CASE("svd and nullspace") {
    // rank-1 3x2 matrix: one singular value zero
    RealMatrix a{{1.0, 2.0}, {2.0, 4.0}, {-1.0, -2.0}};
    SvdResult s = svd(a);
    CHECK(s.singular_values[0] > 1.0);
    CHECK(s.singular_values[1] < 1e-14 * s.singular_values[0]);
    RealMatrix ns = nullspace(a, 1e-9);
    CHECK(ns.cols() == 1);
    CHECK(frobenius_norm(a * ns) < 1e-12);

    Rng rng(41);
    for (int trial = 0; trial < 10; ++trial) {
        RealMatrix g(6, 4);
        for (int i = 0; i < 6; ++i)
            for (int j = 0; j < 4; ++j) g(i, j) = rng.normal();
        SvdResult sv = svd(g);
        RealMatrix gram = sv.v.transpose() * (g.transpose() * g) * sv.v;
        for (int j = 0; j < 4; ++j)
            CHECK(gram(j, j) == doctest::Approx(sv.singular_values[j] * sv.singular_values[j])
                                    .epsilon(1e-10));
        CHECK(nullspace(g, 1e-9).cols() == 0);
    }
}

TEST_CASE("eigenvalues_general") {
    auto ev = eigenvalues_general(RealMatrix::diag({0.1, -0.3, 0.2}));
    std::vector<double> re;
    for (auto z : ev) {
        CHECK(std::abs(z.imag()) < 1e-10);
        re.push_back(z.real());
    }
    std::sort(re.begin(), re.end());
    CHECK(re[0] == doctest::Approx(-0.3).epsilon(1e-9));
    CHECK(re[2] == doctest::Approx(0.2).epsilon(1e-9));

    // rotation block: complex pair a +- bi
    RealMatrix m{{0.3, 0.5}, {-0.5, 0.3}};
    auto ev2 = eigenvalues_general(m);
    CHECK(std::abs(ev2[0].real() - 0.3) < 1e-9);
    CHECK(std::abs(std::abs(ev2[0].imag()) - 0.5) < 1e-9);

    // defective Jordan-type matrix: double eigenvalue d
    RealMatrix j{{0.2, 0.0, 0.0}, {1.0, 0.2, 0.0}, {0.0, 0.0, 0.2}};
    for (auto z : eigenvalues_general(j)) {
        CHECK(std::abs(z.real() - 0.2) < 1e-5);
        CHECK(std::abs(z.imag()) < 1e-5);
    }
}
