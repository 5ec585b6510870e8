#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>

#include "doctest.h"
#include "oracle_values.hpp"
#include "vplk/errors.hpp"
#include "vplk/landau_kernel.hpp"

using namespace vplk;

namespace {

Mat3 random_rotation(std::mt19937_64& rng) {
    std::normal_distribution<double> nd;
    Eigen::Quaterniond q(nd(rng), nd(rng), nd(rng), nd(rng));
    return q.normalized().toRotationMatrix();
}

double rel_diff(const Mat3& a, const Mat3& b) { return (a - b).norm() / b.norm(); }

}  // namespace

TEST_CASE("phi_matrix") {
    Mat3 a = phi_matrix(Vec3(1, 0, 0));
    CHECK((a - Vec3(0, 1, 1).asDiagonal().toDenseMatrix()).norm() < 1e-15);
    Mat3 b = phi_matrix(Vec3(0, 0, 2));
    CHECK((b - Vec3(0.5, 0.5, 0).asDiagonal().toDenseMatrix()).norm() < 1e-15);
    CHECK_THROWS_AS(phi_matrix(Vec3::Zero()), PreconditionError);

    std::mt19937_64 rng(5);
    std::normal_distribution<double> nd;
    for (int k = 0; k < 200; ++k) {
        Vec3 z(nd(rng), nd(rng), nd(rng));
        Mat3 p = phi_matrix(z);
        CHECK((p * z).norm() < 1e-14 * z.norm());
        CHECK((p - p.transpose()).norm() == 0.0);
        CHECK(p.trace() == doctest::Approx(2.0 / z.norm()).epsilon(1e-14));
    }
}

TEST_CASE("sigma at the origin is isotropic") {
    Mat3 s = sigma_matrix(Vec3::Zero());
    CHECK(s(0, 0) == doctest::Approx(oracle::sigma_origin).epsilon(1e-14));
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) CHECK(std::abs(s(i, j)) < 1e-10);
    CHECK(s(1, 1) == doctest::Approx(s(0, 0)));
    CHECK(s(2, 2) == doctest::Approx(s(0, 0)));
}

TEST_CASE("sigma matches adaptive quadrature") {
    for (const auto& p : oracle::sigma_points) {
        Mat3 s = sigma_matrix(Vec3(p.v[0], p.v[1], p.v[2]));
        for (int i = 0; i < 3; ++i)
            for (int j = i; j < 3; ++j) CHECK(std::abs(s(i, j) - p.s[sym_index(i, j)]) < 1e-12);
    }
}

TEST_CASE("sigma eigenvalues") {
    for (std::size_t k = 0; k < std::size(oracle::aniso_r); ++k) {
        const double r = oracle::aniso_r[k];
        auto e = sigma_eigenvalues(r);
        CHECK(e.parallel / e.perpendicular * (1 + r * r) == doctest::Approx(oracle::aniso_scaled[k]).epsilon(1e-10));
    }
    // the series and closed-form branches meet smoothly
    auto lo = sigma_eigenvalues(1.0 - 1e-9), hi = sigma_eigenvalues(1.0 + 1e-9);
    CHECK(lo.parallel == doctest::Approx(hi.parallel).epsilon(1e-8));
    CHECK(lo.perpendicular == doctest::Approx(hi.perpendicular).epsilon(1e-8));
    // large |v|: parallel ~ 2/r^3, perpendicular ~ 1/r
    auto far = sigma_eigenvalues(40.0);
    CHECK(far.parallel * 40 * 40 * 40 == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(far.perpendicular * 40 == doctest::Approx(1.0).epsilon(1e-3));
}

TEST_CASE("sigma is rotation equivariant") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(-4, 4);
    for (int k = 0; k < 50; ++k) {
        Vec3 v(u(rng), u(rng), u(rng));
        Mat3 r = random_rotation(rng);
        CHECK(rel_diff(sigma_matrix(r * v), r * sigma_matrix(v) * r.transpose()) < 1e-8);
    }
}

TEST_CASE("convolve_phi of mu reproduces sigma") {
    auto g = make_grid(1, 8, 32, 6.0);
    auto c = convolve_phi(maxwellian(g, 1.0, Vec3::Zero(), 1.0));
    double worst = 0;
    for (std::size_t iv = 0; iv < g.nv_total(); ++iv) worst = std::max(worst, rel_diff(c.matrix(3, iv), sigma_matrix(g.v3(iv))));
    CHECK(worst < 1e-5);
}

TEST_CASE("convolve_phi linearity, symmetry and positivity") {
    auto g = make_grid(1, 8, 16, 6.0);
    auto g1 = maxwellian(g, 1.0, Vec3(0.5, 0, 0), 0.7);
    auto g2 = maxwellian(g, 0.5, Vec3(-1, 0.5, 0), 1.3);
    auto c1 = convolve_phi(g1), c2 = convolve_phi(g2), c12 = convolve_phi(g1 + g2);
    double lin = 0, scale = 0;
    for (int k = 0; k < 6; ++k)
        for (std::size_t i = 0; i < c1.mat[k].size(); ++i) {
            lin = std::max(lin, std::abs(c12.mat[k][i] - c1.mat[k][i] - c2.mat[k][i]));
            scale = std::max(scale, std::abs(c12.mat[k][i]));
        }
    CHECK(lin < 1e-12 * scale);

    double min_eig = 1.0;
    for (std::size_t iv = 0; iv < g.nv_total(); ++iv) {
        Mat3 a = c12.matrix(0, iv);
        CHECK((a - a.transpose()).norm() < 1e-12);
        Eigen::SelfAdjointEigenSolver<Mat3> es(a);
        min_eig = std::min(min_eig, es.eigenvalues()[0]);
    }
    CHECK(min_eig > 0.0);

    auto zero = convolve_phi(DistField(g));
    for (int k = 0; k < 6; ++k)
        for (double x : zero.mat[k]) CHECK(x == 0.0);
    for (int k = 0; k < 3; ++k)
        for (double x : zero.vec[k]) CHECK(x == 0.0);
}

TEST_CASE("x_independent") {
    auto g = make_grid(1, 8, 8, 3.0);
    auto f = maxwellian(g, 1.0, Vec3::Zero(), 1.0);
    CHECK(x_independent(f));
    f(3, 10) += 1e-300;
    f(3, 11) *= 1.0 + 1e-15;
    CHECK_FALSE(x_independent(f));
}

TEST_CASE("bound directions") {
    auto d = bound_directions(10, 1);
    REQUIRE(d.size() == 17);
    for (const auto& n : d) CHECK(n.norm() == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(d[0] == Vec3(1, 0, 0));
    auto again = bound_directions(10, 1);
    for (std::size_t k = 0; k < d.size(); ++k) CHECK(d[k] == again[k]);
}

TEST_CASE("verify_bounds") {
    auto g = make_grid(1, 8, 16, 6.0);
    auto mu = maxwellian(g, 1.0, Vec3::Zero(), 1.0);
    auto r1 = verify_bounds(mu, 16);
    CHECK(r1.c_lower > 0.0);
    CHECK(r1.c_upper >= r1.c_lower);
    CHECK(std::isfinite(r1.c_upper));
    CHECK(r1.lower_checked);
    CHECK(r1.upper_constant > 0.0);
    CHECK(r1.lower_constant > 0.0);

    auto r2 = verify_bounds(2.0 * mu, 16);
    CHECK(r2.c_upper == doctest::Approx(2 * r1.c_upper).epsilon(1e-12));
    CHECK(r2.c_lower == doctest::Approx(2 * r1.c_lower).epsilon(1e-12));

    CHECK_THROWS_AS(verify_bounds(DistField(g), 16), PreconditionError);
    auto neg = mu;
    neg(0, 100) = -1.0;
    CHECK_THROWS_AS(verify_bounds(neg, 16), PreconditionError);
    CHECK_NOTHROW(verify_bounds(neg, 16, false));
}

TEST_CASE("lower bound expression") {
    // <a> = sqrt(1 + a^2)
    CHECK(lower_bound_expression(2.0, 0.0) == doctest::Approx(2.0));
    CHECK(lower_bound_expression(1.0, 1.0) == doctest::Approx(std::pow(2.0, -8.5)));
}
