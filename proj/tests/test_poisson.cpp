#include <cmath>
#include <numbers>

#include "doctest.h"
#include "oracle_values.hpp"
#include "vplk/errors.hpp"
#include "vplk/poisson.hpp"

using namespace vplk;

namespace {

constexpr double pi = std::numbers::pi;

SpatialField cos_field(const PhaseGrid& g, double mean, double amp, int mode = 1) {
    SpatialField u(g);
    for (std::size_t i = 0; i < u.size(); ++i) u[i] = mean + amp * std::cos(2 * pi * mode * g.x3(i)[0]);
    return u;
}

double sup(const SpatialField& u) { return std::max(u.max(), -u.min()); }

}  // namespace

TEST_CASE("linear poisson") {
    auto g = make_grid(1, 32, 8, 3.0);
    auto phi = solve_poisson(cos_field(g, 0.0, 1.0));
    auto expect = cos_field(g, 0.0, 1.0 / pi);
    CHECK(sup(phi - expect) < 1e-14);

    CHECK(sup(solve_poisson(SpatialField(g))) == 0.0);
    CHECK_THROWS_AS(solve_poisson(SpatialField(g, 0.1)), PreconditionError);

    auto lap = laplacian(cos_field(g, 0.0, 1.0));
    CHECK(sup(lap + 4 * pi * pi * cos_field(g, 0.0, 1.0)) < 1e-11);
    auto grad = gradient(cos_field(g, 0.0, 1.0));
    CHECK(sup(grad[1]) == 0.0);
    CHECK(dirichlet_energy(cos_field(g, 0.0, 1.0)) == doctest::Approx(2 * pi * pi).epsilon(1e-13));
}

TEST_CASE("poisson-boltzmann: constant density") {
    auto g = make_grid(1, 32, 8, 3.0);
    for (double beta : {0.3, 1.0, 4.0}) {
        auto phi = solve_pb(SpatialField(g, 1.0), beta);
        CHECK(sup(phi) < 1e-14);
    }
}

TEST_CASE("poisson-boltzmann: perturbed density") {
    auto g = make_grid(1, 32, 8, 3.0);
    auto n = cos_field(g, 1.0, 0.1);
    auto r = solve_pb_detailed(n, 1.0);
    CHECK(r.phi[0] == doctest::Approx(oracle::pb_phi0_beta1).epsilon(1e-10));
    CHECK(r.phi[16] == doctest::Approx(oracle::pb_phi_half_beta1).epsilon(1e-10));
    CHECK(pb_residual(n, 1.0, r.phi) < 1e-10);

    // quadratic convergence: successive residual ratios shrink
    const auto& res = r.residuals;
    REQUIRE(res.size() >= 4);
    std::vector<double> ratio;
    for (std::size_t k = 1; k < res.size(); ++k)
        if (res[k - 1] > 1e-13) ratio.push_back(res[k] / res[k - 1]);
    REQUIRE(ratio.size() >= 2);
    CHECK(ratio.back() < ratio[ratio.size() - 2]);
    CHECK(ratio.back() < 1e-2);

    // maximum principle
    for (double beta : {0.5, 1.0, 3.0}) {
        auto m = cos_field(g, 1.0, 0.6, 2);
        auto phi = solve_pb(m, beta);
        double ln_n = 0;
        for (std::size_t i = 0; i < m.size(); ++i) ln_n = std::max(ln_n, std::abs(std::log(m[i])));
        CHECK(beta * sup(phi) <= ln_n);
        CHECK(std::exp(beta * phi.min()) <= m.max());
        CHECK(std::exp(beta * phi.max()) >= m.min());
    }

    CHECK_THROWS_AS(solve_pb(cos_field(g, 1.0, 1.2), 1.0), PreconditionError);
    CHECK_THROWS_AS(solve_pb(n, 0.0), PreconditionError);
}

TEST_CASE("coupled solve") {
    auto g = make_grid(1, 32, 8, 3.0);
    auto s = solve_coupled(SpatialField(g, 1.0), 1.0);
    CHECK(std::abs(s.beta - 1.5) < 1e-12);
    CHECK(sup(s.phi) == 0.0);

    CHECK_THROWS_AS(solve_coupled(SpatialField(g, 1.0), -0.1), EnergyPositivityError);
    CHECK_THROWS_AS(solve_coupled(SpatialField(g, 1.0), 0.0), EnergyPositivityError);

    auto n = cos_field(g, 1.0, 0.1);
    auto p = solve_coupled(n, 1.0);
    CHECK(p.beta == doctest::Approx(oracle::coupled_beta_E1).epsilon(1e-9));
    CHECK(std::abs(constraint_residual(p)) < 1e-11);
    PbOptions tight;
    tight.tol = 1e-13;
    auto again = solve_pb(n, p.beta, tight);
    CHECK(sup(again - p.phi) < 1e-9);

    // stability: nearby data give nearby solutions
    auto n2 = cos_field(g, 1.0, 0.1 + 1e-4);
    auto p2 = solve_coupled(n2, 1.0 + 1e-4);
    const double dn = sup(n2 - n) + 1e-4;
    CHECK((std::abs(p2.beta - p.beta) + sup(p2.phi - p.phi)) / dn < 10.0);
}

TEST_CASE("gateaux derivative") {
    auto g = make_grid(1, 32, 8, 3.0);
    auto n = cos_field(g, 1.0, 0.2);
    auto st = solve_coupled(n, 1.2);

    GateauxIn zero{0.0, SpatialField(g)};
    auto z = gateaux_apply(st, zero);
    CHECK(z.e_dot == 0.0);
    CHECK(sup(z.f_dot) == 0.0);

    GateauxIn din{0.7, cos_field(g, 0.05, 0.3, 2)};
    GateauxIn din2{1.4, 2.0 * din.psi_dot};
    auto a = gateaux_apply(st, din), b = gateaux_apply(st, din2);
    CHECK(b.e_dot == doctest::Approx(2 * a.e_dot).epsilon(1e-14));
    CHECK(sup(b.f_dot - 2.0 * a.f_dot) < 1e-12 * sup(a.f_dot));

    auto base = pp_map(st.beta, st.phi);
    std::vector<double> err;
    for (double h : {1e-3, 1e-4, 1e-5}) {
        auto moved = pp_map(st.beta + h * din.gamma_dot, st.phi + h * din.psi_dot);
        const double ee = std::abs((moved.e_dot - base.e_dot) / h - a.e_dot);
        const double ef = sup((1.0 / h) * (moved.f_dot - base.f_dot) - a.f_dot);
        err.push_back(ee + ef);
    }
    CHECK(std::log10(err[0] / err[1]) >= 0.9);
    CHECK(std::log10(err[1] / err[2]) >= 0.9);
}

TEST_CASE("beta_dot") {
    auto g = make_grid(1, 32, 8, 3.0);
    auto flat = solve_coupled(SpatialField(g, 1.0), 1.0);
    CHECK(beta_dot(flat, 0.0, SpatialField(g)) == 0.0);
    CHECK(beta_dot(flat, 0.3, SpatialField(g)) == doctest::Approx(-(2 * 1.5 * 1.5 / 3) * 0.3).epsilon(1e-12));

    // along n(tau) = 1 + (0.1 + tau) cos, E(tau) = 1 + 0.5 tau
    auto dn = cos_field(g, 0.0, 1.0);
    auto s0 = solve_coupled(cos_field(g, 1.0, 0.1), 1.0);
    const double bd = beta_dot(s0, 0.5, dn);
    std::vector<double> err;
    for (double tau : {1e-2, 5e-3}) {
        auto s1 = solve_coupled(cos_field(g, 1.0, 0.1 + tau), 1.0 + 0.5 * tau);
        err.push_back(std::abs((s1.beta - s0.beta) / tau - bd));
    }
    CHECK(err[0] < 0.05 * std::abs(bd));
    CHECK(err[1] / err[0] < 0.6);
}

TEST_CASE("energy functional") {
    auto g = make_grid(1, 8, 32, 6.0);
    auto mu = maxwellian(g, 1.0, Vec3::Zero(), 1.0);
    SpatialField zero(g);
    CHECK(energy_functional(mu, 1.5, zero) == doctest::Approx(2.5).epsilon(1e-7));
    CHECK(energy_functional(DistField(g), 2.0, zero) == doctest::Approx(0.75).epsilon(1e-15));

    auto phi = cos_field(g, 0.0, 0.1);
    const double field = energy_functional(DistField(g), 2.0, phi) - 0.75;
    const double field2 = energy_functional(DistField(g), 2.0, 2.0 * phi) - 0.75;
    CHECK(field == doctest::Approx(dirichlet_energy(phi) / (8 * pi)).epsilon(1e-13));
    CHECK(field2 == doctest::Approx(4 * field).epsilon(1e-12));
}
