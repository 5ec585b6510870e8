#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "vplk/errors.hpp"
#include "vplk/fft.hpp"
#include "vplk/phase_space.hpp"

using namespace vplk;

namespace {

// Integral of a 1D Gaussian of standard deviation sd over [-a, a).
double gauss_box(double mean, double sd, double a) {
    const double s = sd * std::numbers::sqrt2;
    return 0.5 * (std::erf((a - mean) / s) - std::erf((-a - mean) / s));
}

DistField random_field(const PhaseGrid& g, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    DistField f(g);
    for (auto& x : f.values()) x = u(rng);
    return f;
}

}  // namespace

TEST_CASE("make_grid spacings") {
    auto g = make_grid(1, 32, 16, 6.0);
    CHECK(g.dx == doctest::Approx(1.0 / 32));
    CHECK(g.dv == doctest::Approx(0.75));
    CHECK(g.nx_total() == 32);
    CHECK(g.size() == 32u * 16 * 16 * 16);

    auto g3 = make_grid(3, 8, 8, 5.0);
    CHECK(g3.dv == doctest::Approx(1.25));
    CHECK(g3.nx_total() == 512);
    CHECK(g3.wx() == doctest::Approx(1.0 / 512));

    CHECK_THROWS_AS(make_grid(1, 33, 16, 6.0), PreconditionError);
    CHECK_THROWS_AS(make_grid(1, 32, 12, 6.0), PreconditionError);
    CHECK_THROWS_AS(make_grid(1, 4, 16, 6.0), PreconditionError);
    CHECK_THROWS_AS(make_grid(1, 32, 16, 0.0), PreconditionError);
    CHECK_THROWS_AS(make_grid(4, 8, 8, 1.0), PreconditionError);
}

TEST_CASE("cell-centred velocity points") {
    auto g = make_grid(1, 8, 16, 6.0);
    CHECK(g.v(0) == doctest::Approx(-6.0 + 0.375));
    CHECK(g.v(15) == doctest::Approx(6.0 - 0.375));
    auto v = g.v3((1 * 16 + 2) * 16 + 3);
    CHECK(v[0] == doctest::Approx(g.v(1)));
    CHECK(v[1] == doctest::Approx(g.v(2)));
    CHECK(v[2] == doctest::Approx(g.v(3)));
}

TEST_CASE("maxwellian quadrature") {
    auto g = make_grid(1, 8, 32, 6.0);
    auto mu = maxwellian(g, 1.0, Vec3::Zero(), 1.0);
    auto m = moments(mu);
    const double exact = std::pow(gauss_box(0.0, 1.0, 6.0), 3);
    for (std::size_t i = 0; i < m.mass.size(); ++i) {
        CHECK(std::abs(m.mass[i] - 1.0) < 1e-8);
        CHECK(std::abs(m.mass[i] - exact) < 2e-9);
    }
    CHECK(mu.nonnegative());

    auto mu2 = maxwellian(g, 2.0, Vec3::Zero(), 1.0);
    for (std::size_t k = 0; k < mu.values().size(); ++k) CHECK(mu2.values()[k] == 2.0 * mu.values()[k]);

    CHECK_THROWS_AS(maxwellian(g, 0.0, Vec3::Zero(), 1.0), PreconditionError);
    CHECK_THROWS_AS(maxwellian(g, 1.0, Vec3::Zero(), -1.0), PreconditionError);
}

TEST_CASE("maxwellian peak") {
    auto g = make_grid(1, 8, 16, 6.0);
    const double h = g.dv / 2;
    const Vec3 mean(h, -h, h);
    auto f = maxwellian(g, 1.7, mean, 0.8);
    const double peak = 1.7 * std::pow(2 * std::numbers::pi * 0.8, -1.5);
    CHECK(f.max() == doctest::Approx(peak).epsilon(1e-14));
}

TEST_CASE("gaussian quadrature is spectrally accurate") {
    // the cut at the box face limits the midpoint rule: sd = 1.5 (v_max / 4) is only good to 1e-5
    auto g = make_grid(1, 8, 32, 6.0);
    for (double sd : {0.5, 1.0, 1.25}) {
        const Vec3 mean(0.3, -0.2, 0.1);
        auto f = maxwellian(g, 1.0, mean, sd * sd);
        double exact = 1.0;
        for (int a = 0; a < 3; ++a) exact *= gauss_box(mean[a], sd, 6.0);
        const double q = v_integral(g, f.slice(0));
        CHECK(std::abs(q - exact) / exact < 1e-6);
    }
}

TEST_CASE("moments of maxwellians") {
    auto g = make_grid(1, 8, 32, 6.0);
    auto m = moments(maxwellian(g, 1.0, Vec3::Zero(), 1.0));
    CHECK(m.kinetic_energy == doctest::Approx(1.5).epsilon(1e-7));
    for (int a = 0; a < 3; ++a)
        for (std::size_t i = 0; i < 8; ++i) CHECK(std::abs(m.momentum[a][i]) < 1e-14);

    const Vec3 u(0.4, -0.25, 0.1);
    auto ms = moments(maxwellian(g, 1.0, u, 1.0));
    for (int a = 0; a < 3; ++a) CHECK(ms.momentum[a][3] == doctest::Approx(u[a]).epsilon(1e-7));
    CHECK(ms.kinetic_energy == doctest::Approx(1.5 + u.squaredNorm() / 2).epsilon(1e-6));

    auto mz = moments(DistField(g));
    CHECK(mz.kinetic_energy == 0.0);
    CHECK(mz.mass.max() == 0.0);
    CHECK(mz.mass.min() == 0.0);
}

TEST_CASE("moments are linear") {
    auto g = make_grid(1, 8, 8, 3.0);
    auto a = random_field(g, 1), b = random_field(g, 2);
    auto ma = moments(a), mb = moments(b), mc = moments(2.0 * a + b);
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(mc.mass[i] == doctest::Approx(2 * ma.mass[i] + mb.mass[i]).epsilon(1e-12));
        CHECK(mc.momentum[1][i] == doctest::Approx(2 * ma.momentum[1][i] + mb.momentum[1][i]).epsilon(1e-12));
    }
    CHECK(mc.kinetic_energy == doctest::Approx(2 * ma.kinetic_energy + mb.kinetic_energy).epsilon(1e-12));
}

TEST_CASE("fft round trip and Parseval") {
    auto g = make_grid(2, 8, 8, 3.0);
    auto f = random_field(g, 7);
    auto fx = ifft_x_dist(g, fft_x(f));
    auto fv = ifft_v(g, fft_v(f));
    double err_x = 0, err_v = 0, norm = 0;
    for (std::size_t k = 0; k < f.values().size(); ++k) {
        err_x = std::max(err_x, std::abs(fx.values()[k] - f.values()[k]));
        err_v = std::max(err_v, std::abs(fv.values()[k] - f.values()[k]));
        norm = std::max(norm, std::abs(f.values()[k]));
    }
    CHECK(err_x < 1e-12 * norm);
    CHECK(err_v < 1e-12 * norm);

    auto h = fft_v(f);
    double e_real = 0, e_hat = 0;
    for (double x : f.values()) e_real += x * x;
    for (auto c : h) e_hat += std::norm(c);
    CHECK(e_hat / static_cast<double>(g.nv_total()) == doctest::Approx(e_real).epsilon(1e-12));

    SpatialField u(g);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (auto& x : u.values()) x = nd(rng);
    auto uh = fft_x(u);
    auto back = ifft_x(g, uh);
    double e_u = 0, e_uh = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        CHECK(back[i] == doctest::Approx(u[i]).epsilon(1e-12));
        e_u += u[i] * u[i];
    }
    for (auto c : uh) e_uh += std::norm(c);
    CHECK(e_uh / static_cast<double>(u.size()) == doctest::Approx(e_u).epsilon(1e-12));
}

TEST_CASE("single x mode") {
    auto g = make_grid(1, 16, 8, 3.0);
    SpatialField u(g);
    for (std::size_t i = 0; i < 16; ++i) u[i] = std::cos(2 * std::numbers::pi * g.x3(i)[0]);
    auto uh = fft_x(u);
    for (std::size_t k = 0; k < 16; ++k) {
        if (k == 1 || k == 15)
            CHECK(std::abs(uh[k] - std::complex<double>(8.0, 0.0)) < 1e-12);
        else
            CHECK(std::abs(uh[k]) < 1e-12);
    }
    CHECK(x_wavenumber(g, 1) == doctest::Approx(2 * std::numbers::pi));
    CHECK(x_wavenumber(g, 15) == doctest::Approx(-2 * std::numbers::pi));
}

TEST_CASE("boundary fraction") {
    auto g = make_grid(1, 8, 32, 6.0);
    CHECK(boundary_fraction(maxwellian(g, 1.0, Vec3::Zero(), 1.0)) < 1e-7);
    CHECK(boundary_fraction(maxwellian(g, 1.0, Vec3::Zero(), 4.0)) > 1e-3);
}

TEST_CASE("field arithmetic and grid checks") {
    auto g = make_grid(1, 8, 8, 3.0);
    auto a = random_field(g, 11);
    auto d = a - a;
    CHECK(d.max() == 0.0);
    CHECK(d.min() == 0.0);
    CHECK(a.all_finite());
    auto other = make_grid(1, 16, 8, 3.0);
    CHECK_THROWS_AS(a += DistField(other), PreconditionError);
    CHECK_THROWS_AS(require_same_grid(g, other, "test"), PreconditionError);
    SpatialField s(g, 2.0);
    CHECK(s.integral() == doctest::Approx(2.0));
}
