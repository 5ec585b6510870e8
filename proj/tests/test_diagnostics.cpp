#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "doctest.h"
#include "vplk/diagnostics.hpp"
#include "vplk/errors.hpp"

using namespace vplk;

namespace {

constexpr double pi = std::numbers::pi;

PlasmaState neutral(const PhaseGrid& g) {
    InitialSpec spec;
    spec.plus = {MaxwellianComponent{}};
    spec.minus = {MaxwellianComponent{}};
    return make_initial(g, Variant::two_species, spec);
}

DistField streamed(const PhaseGrid& g, double t) {
    DistField f(g);
    for (std::size_t ix = 0; ix < g.nx_total(); ++ix)
        for (std::size_t iv = 0; iv < g.nv_total(); ++iv) {
            Vec3 v = g.v3(iv);
            f(ix, iv) = (1 + 0.3 * std::cos(2 * pi * (g.x3(ix)[0] - v[0] * t))) * std::exp(-v.squaredNorm() / 2);
        }
    return f;
}

}  // namespace

TEST_CASE("blow-up monitor") {
    auto g = make_grid(1, 16, 16, 6.0);
    auto s = neutral(g);
    auto r0 = blowup_monitor(s, Ceilings{});
    CHECK_FALSE(r0.triggered);
    REQUIRE(r0.inv_density_sup.size() == 2);
    CHECK(r0.inv_density_sup[0] == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(r0.e_norm == doctest::Approx(std::hypot(e_norm(s.plus), e_norm(s.minus))).epsilon(1e-12));

    auto ceil = default_ceilings(r0);
    CHECK(ceil.e_norm == doctest::Approx(1e3 * r0.e_norm));
    CHECK(ceil.inv_density == doctest::Approx(1e3 * r0.inv_density_sup[0]));
    CHECK_FALSE(blowup_monitor(s, ceil).triggered);

    auto hole = s;
    for (std::size_t iv = 0; iv < g.nv_total(); ++iv) hole.plus(5, iv) = 0.0;
    CHECK(inv_density_sup(hole.plus) == std::numeric_limits<double>::infinity());
    auto r1 = blowup_monitor(hole, ceil);
    CHECK(r1.triggered);
    CHECK(r1.inv_density_sup[0] == std::numeric_limits<double>::infinity());
    REQUIRE(r1.reasons.size() == 1);

    InitialSpec spec;
    spec.plus = {MaxwellianComponent{}};
    spec.beta_in = 50.0;
    auto m = make_initial(g, Variant::massless, spec);
    Ceilings lb;
    lb.ln_beta = 3.0;
    auto r2 = blowup_monitor(m, lb);
    CHECK(r2.triggered);
    CHECK(r2.ln_beta == doctest::Approx(std::log(50.0)).epsilon(1e-10));
    REQUIRE(r2.reasons.size() == 1);
    CHECK(r2.reasons[0].find("ln_beta") != std::string::npos);
}

TEST_CASE("entropy of the standard maxwellian") {
    auto g = make_grid(1, 8, 32, 6.0);
    const double exact = -1.5 * (1 + std::log(2 * pi));
    CHECK(entropy(maxwellian(g, 1.0, Vec3::Zero(), 1.0)) == doctest::Approx(exact).epsilon(1e-7));
    CHECK(entropy(DistField(g)) == 0.0);
}

TEST_CASE("conservation ledger") {
    auto g = make_grid(1, 16, 16, 6.0);
    auto s = neutral(g);
    ConservationLedger led;
    led.record(s);
    StepConfig c;
    c.dt = 0.005;
    s = step(s, c);
    led.record(s);
    REQUIRE(led.rows().size() == 2);
    CHECK(led.rows()[1].t > led.rows()[0].t);
    CHECK(led.rows()[0].mass_plus == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(led.rows()[1].energy == doctest::Approx(led.rows()[0].energy).epsilon(1e-10));

    std::ostringstream out;
    led.write_csv(out);
    std::istringstream in(out.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == "t,mass_plus,mass_minus,p1,p2,p3,energy,entropy,min_f,max_f");
    CHECK(led.columns().size() == 10);
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 2);
}

TEST_CASE("continuity residual") {
    auto g = make_grid(1, 16, 16, 6.0);
    auto s = neutral(g);
    CHECK(continuity_residual(s, s, 0.01) < 1e-10);
    StepConfig c;
    c.dt = 0.005;
    auto next = step(s, c);
    CHECK(continuity_residual(s, next, c.dt) < 1e-10);

    // free streaming: the midpoint flux is second order in dt
    auto f0 = streamed(g, 0.0);
    double prev = 0;
    for (double dt : {0.02, 0.01}) {
        const double r = continuity_residual(f0, streamed(g, dt), dt);
        if (prev > 0) CHECK(prev / r > 3.0);
        prev = r;
    }
    CHECK_THROWS_AS(continuity_residual(f0, DistField(make_grid(1, 8, 16, 6.0)), 0.1), PreconditionError);
}

TEST_CASE("corpus and campaign") {
    CorpusSpec spec;
    spec.n_v = 16;
    spec.members = 4;
    spec.sample_dirs = 8;
    auto a = make_corpus(spec), b = make_corpus(spec);
    REQUIRE(a.size() == 4);
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].label == b[k].label);
        CHECK(a[k].slice == b[k].slice);
    }
    auto rep = campaign_verify(spec, a);
    CHECK(rep.sandwich_ok);
    CHECK(rep.min_ratio > 0.0);
    CHECK(rep.rows.size() == 4);

    auto mu = mu_corpus(spec);
    REQUIRE(mu.size() == 1);
    auto rmu = campaign_verify(spec, mu);
    auto g = make_grid(1, 8, 16, spec.v_max);
    auto direct = verify_bounds(maxwellian(g, 1.0, Vec3::Zero(), 1.0), spec.sample_dirs, true, spec.seed);
    CHECK(rmu.rows[0].bounds.c_upper == doctest::Approx(direct.c_upper).epsilon(1e-12));
    CHECK(rmu.rows[0].bounds.c_lower == doctest::Approx(direct.c_lower).epsilon(1e-12));

    CHECK_THROWS_AS(campaign_verify(spec, {}), PreconditionError);

    std::ostringstream out;
    write_campaign_csv(out, rep);
    CHECK(out.str().rfind("label,c_lower,c_upper", 0) == 0);
}
