#include "vplk/poisson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cg.hpp"
#include "spectral_x.hpp"
#include "vplk/errors.hpp"

namespace vplk {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

// (-Delta + c)^{-1} u, spectral. For c = 0 the mean is dropped.
std::vector<double> shifted_inverse(const PhaseGrid& g, const std::vector<double>& u, double c) {
    auto hat = detail::rfft_x(g, u.data());
    for (std::size_t q = 0; q < hat.size(); ++q) {
        const double d = detail::x_k2(g, q) + c;
        hat[q] = d > 0.0 ? hat[q] / d : 0.0;
    }
    return detail::irfft_x(g, std::move(hat));
}

std::vector<double> neg_laplacian(const PhaseGrid& g, const std::vector<double>& u) {
    auto hat = detail::rfft_x(g, u.data());
    for (std::size_t q = 0; q < hat.size(); ++q) hat[q] *= detail::x_k2(g, q);
    return detail::irfft_x(g, std::move(hat));
}

double wsum_sq(const PhaseGrid& g, const std::vector<double>& r) {
    double s = 0.0;
    for (double x : r) s += x * x;
    return std::sqrt(s * g.wx());
}

void require_positive(const SpatialField& n, const char* who) {
    for (double x : n.values())
        if (!(x > 0.0)) throw PreconditionError(std::string(who) + ": density must be positive");
}

std::vector<double> pb_residual_vec(const SpatialField& n, double beta, const std::vector<double>& phi) {
    const auto& g = n.grid();
    auto r = neg_laplacian(g, phi);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= kFourPi * (n[i] - std::exp(beta * phi[i]));
    return r;
}

}  // namespace

SpatialField laplacian(const SpatialField& u) {
    auto r = neg_laplacian(u.grid(), u.values());
    for (auto& x : r) x = -x;
    return SpatialField(u.grid(), std::move(r));
}

std::array<SpatialField, 3> gradient(const SpatialField& u) {
    const auto& g = u.grid();
    std::array<SpatialField, 3> out{SpatialField(g), SpatialField(g), SpatialField(g)};
    const auto hat = detail::rfft_x(g, u.values().data());
    for (int d = 0; d < g.dim_x; ++d) {
        auto h = hat;
        for (std::size_t q = 0; q < h.size(); ++q) {
            bool nyq = false;
            const auto k = detail::x_kvec(g, q, &nyq);
            h[q] = nyq ? cplx(0.0) : h[q] * cplx(0.0, k[static_cast<std::size_t>(d)]);
        }
        out[static_cast<std::size_t>(d)] = SpatialField(g, detail::irfft_x(g, std::move(h)));
    }
    return out;
}

double dirichlet_energy(const SpatialField& u) {
    const auto gr = gradient(u);
    double s = 0.0;
    for (const auto& c : gr)
        for (double x : c.values()) s += x * x;
    return s * u.grid().wx();
}

double l2_norm(const SpatialField& u) { return wsum_sq(u.grid(), u.values()); }

double l2_inner(const SpatialField& a, const SpatialField& b) {
    require_same_grid(a.grid(), b.grid(), "l2_inner");
    return detail::dot(a.values(), b.values()) * a.grid().wx();
}

SpatialField solve_poisson(const SpatialField& rho) {
    const auto& g = rho.grid();
    const double mean = rho.integral();
    double scale = 0.0;
    for (double x : rho.values()) scale = std::max(scale, std::abs(x));
    if (std::abs(mean) > 1e-10 * std::max(1.0, scale)) {
        std::ostringstream os;
        os << "solve_poisson: source has nonzero mean " << mean;
        throw PreconditionError(os.str());
    }
    std::vector<double> r(rho.values());
    for (auto& x : r) x *= kFourPi;
    return SpatialField(g, shifted_inverse(g, r, 0.0));
}

double pb_residual(const SpatialField& n, double beta, const SpatialField& phi) {
    return wsum_sq(n.grid(), pb_residual_vec(n, beta, phi.values()));
}

PbResult solve_pb_detailed(const SpatialField& n, double beta, const PbOptions& opt, const SpatialField* initial) {
    require_positive(n, "solve_pb");
    if (!(beta > 0.0)) throw PreconditionError("solve_pb: beta must be positive");
    const auto& g = n.grid();
    const double lo = std::log(n.min()) / beta;
    const double hi = std::log(n.max()) / beta;
    auto clamp = [&](std::vector<double>& p) {
        for (auto& x : p) x = std::clamp(x, lo, hi);
    };

    std::vector<double> phi(g.nx_total(), 0.0);
    if (initial) phi = initial->values();
    clamp(phi);
    auto r = pb_residual_vec(n, beta, phi);
    double rn = wsum_sq(g, r);
    PbResult res{SpatialField(g), {rn}};

    const double c0 = kFourPi * beta;
    for (int it = 0; it < opt.max_iter && rn > opt.tol; ++it) {
        std::vector<double> w(phi.size());
        for (std::size_t i = 0; i < w.size(); ++i) w[i] = c0 * std::exp(beta * phi[i]);
        auto apply_j = [&](const std::vector<double>& v, std::vector<double>& out) {
            out = neg_laplacian(g, v);
            for (std::size_t i = 0; i < v.size(); ++i) out[i] += w[i] * v[i];
        };
        auto precond = [&](const std::vector<double>& v, std::vector<double>& out) { out = shifted_inverse(g, v, c0); };
        std::vector<double> rhs(r.size()), delta(r.size(), 0.0);
        for (std::size_t i = 0; i < r.size(); ++i) rhs[i] = -r[i];
        detail::pcg(apply_j, precond, rhs, delta, opt.cg_rel_tol, opt.cg_max_iter);

        double t = 1.0;
        std::vector<double> trial(phi.size()), rt;
        double rtn = 0.0;
        for (int h = 0; h <= opt.max_halvings; ++h) {
            for (std::size_t i = 0; i < phi.size(); ++i) trial[i] = phi[i] + t * delta[i];
            clamp(trial);
            rt = pb_residual_vec(n, beta, trial);
            rtn = wsum_sq(g, rt);
            if (rtn < rn) break;
            t *= 0.5;
        }
        if (!(rtn < rn)) break;  // stagnation
        phi.swap(trial);
        r.swap(rt);
        rn = rtn;
        res.residuals.push_back(rn);
    }
    if (!(rn <= opt.tol)) {
        std::ostringstream os;
        os << "solve_pb: Newton stalled at residual " << rn << " after " << res.residuals.size() - 1 << " iterations";
        throw ConvergenceError(os.str());
    }
    res.phi = SpatialField(g, std::move(phi));
    return res;
}

SpatialField solve_pb(const SpatialField& n, double beta, const PbOptions& opt) {
    return solve_pb_detailed(n, beta, opt).phi;
}

double constraint_residual(const PPState& s) {
    return 1.5 / s.beta + dirichlet_energy(s.phi) / (8.0 * M_PI) - s.energy;
}

namespace {

// d phi / d beta at a PB solution: (-Delta + 4 pi beta e^{beta phi}) phi_b = -4 pi e^{beta phi} phi.
std::vector<double> dphi_dbeta(const PhaseGrid& g, double beta, const std::vector<double>& phi, const PbOptions& opt) {
    std::vector<double> w(phi.size()), rhs(phi.size()), x(phi.size(), 0.0);
    for (std::size_t i = 0; i < phi.size(); ++i) {
        const double e = std::exp(beta * phi[i]);
        w[i] = kFourPi * beta * e;
        rhs[i] = -kFourPi * e * phi[i];
    }
    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        out = neg_laplacian(g, v);
        for (std::size_t i = 0; i < v.size(); ++i) out[i] += w[i] * v[i];
    };
    auto precond = [&](const std::vector<double>& v, std::vector<double>& out) { out = shifted_inverse(g, v, kFourPi * beta); };
    detail::pcg(apply, precond, rhs, x, opt.cg_rel_tol, opt.cg_max_iter);
    return x;
}

}  // namespace

PPState solve_coupled(const SpatialField& n, double E, const CoupledOptions& opt) {
    if (!(E > 0.0)) {
        std::ostringstream os;
        os << "solve_coupled: energy must be positive (E = " << E << ")";
        throw EnergyPositivityError(os.str());
    }
    require_positive(n, "solve_coupled");
    const auto& g = n.grid();
    const double tol = opt.tol * std::max(1.0, E);

    SpatialField warm(g);
    auto eval = [&](double beta, SpatialField& phi) {
        phi = solve_pb_detailed(n, beta, opt.pb, &warm).phi;
        warm = phi;
        return 1.5 / beta + dirichlet_energy(phi) / (8.0 * M_PI) - E;
    };

    // g(beta) >= 0 at 3/(2E) since the field term is nonnegative; g -> -E as beta grows.
    double lo = 1.5 / E;
    SpatialField phi(g);
    double glo = eval(lo, phi);
    if (std::abs(glo) <= tol) return {lo, phi, E};

    double hi = 2.0 * lo;
    SpatialField phi_hi(g);
    double ghi = eval(hi, phi_hi);
    for (int k = 0; ghi > 0.0; ++k) {
        if (k > 60) throw ConvergenceError("solve_coupled: failed to bracket beta");
        lo = hi, glo = ghi;
        hi *= 2.0;
        ghi = eval(hi, phi_hi);
    }
    if (std::abs(ghi) <= tol) return {hi, phi_hi, E};

    // Safeguarded Newton on [lo, hi].
    double beta = lo - glo * (hi - lo) / (ghi - glo);
    for (int it = 0; it < opt.max_iter; ++it) {
        const double gb = eval(beta, phi);
        if (std::abs(gb) <= tol) return {beta, phi, E};
        if (gb > 0.0)
            lo = beta;
        else
            hi = beta;
        if (hi - lo <= 4e-16 * hi) return {beta, phi, E};
        const auto pb = dphi_dbeta(g, beta, phi.values(), opt.pb);
        const auto lap = laplacian(phi);
        const double dg = -1.5 / (beta * beta) - detail::dot(lap.values(), pb) * g.wx() / kFourPi;
        double next = dg != 0.0 ? beta - gb / dg : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        beta = next;
    }
    throw ConvergenceError("solve_coupled: beta iteration did not converge");
}

GateauxOut pp_map(double gamma, const SpatialField& psi) {
    const auto& g = psi.grid();
    GateauxOut out{1.5 / gamma + dirichlet_energy(psi) / (8.0 * M_PI), SpatialField(g)};
    const auto nl = neg_laplacian(g, psi.values());
    for (std::size_t i = 0; i < nl.size(); ++i) out.f_dot[i] = nl[i] + kFourPi * std::exp(gamma * psi[i]);
    return out;
}

GateauxOut gateaux_apply(const PPState& s, const GateauxIn& din) {
    const auto& g = s.phi.grid();
    const double gam = s.beta;
    SpatialField pd = din.psi_dot.size() ? din.psi_dot : SpatialField(g);
    const auto gp = gradient(s.phi);
    const auto gpd = gradient(pd);
    double cross = 0.0;
    for (int d = 0; d < 3; ++d) cross += l2_inner(gp[static_cast<std::size_t>(d)], gpd[static_cast<std::size_t>(d)]);
    GateauxOut out{-1.5 * din.gamma_dot / (gam * gam) + cross / kFourPi, SpatialField(g)};
    const auto nl = neg_laplacian(g, pd.values());
    for (std::size_t i = 0; i < nl.size(); ++i)
        out.f_dot[i] = nl[i] + kFourPi * std::exp(gam * s.phi[i]) * (din.gamma_dot * s.phi[i] + gam * pd[i]);
    return out;
}

double beta_dot(const PPState& s, double dE_dt, const SpatialField& dn_dt, const PbOptions& opt) {
    const auto& g = s.phi.grid();
    const double gam = s.beta;
    std::vector<double> w(g.nx_total()), ep(g.nx_total());
    for (std::size_t i = 0; i < w.size(); ++i) {
        const double e = std::exp(gam * s.phi[i]);
        w[i] = gam * e;
        ep[i] = e * s.phi[i];
    }
    // A = gamma e^{gamma psi} - Delta/(4 pi)
    auto apply = [&](const std::vector<double>& v, std::vector<double>& out) {
        out = neg_laplacian(g, v);
        for (std::size_t i = 0; i < v.size(); ++i) out[i] = out[i] / kFourPi + w[i] * v[i];
    };
    auto precond = [&](const std::vector<double>& v, std::vector<double>& out) {
        std::vector<double> t(v);
        for (auto& x : t) x *= kFourPi;
        out = shifted_inverse(g, t, kFourPi * gam);
    };
    std::vector<double> u1(w.size(), 0.0), u2(w.size(), 0.0);
    detail::pcg(apply, precond, dn_dt.values(), u1, opt.cg_rel_tol, opt.cg_max_iter);
    detail::pcg(apply, precond, ep, u2, opt.cg_rel_tol, opt.cg_max_iter);
    const auto lap = laplacian(s.phi);
    const double num = dE_dt + detail::dot(lap.values(), u1) * g.wx() / kFourPi;
    const double den = 1.5 / (gam * gam) - detail::dot(lap.values(), u2) * g.wx() / kFourPi;
    if (!(den >= 1.5 / (gam * gam) - 1e-12)) {
        std::ostringstream os;
        os << "beta_dot: denominator " << den << " below 3/(2 beta^2) = " << 1.5 / (gam * gam);
        throw ConsistencyError(os.str());
    }
    return -num / den;
}

double energy_functional(const DistField& F, double beta, const SpatialField& phi) {
    if (!(beta > 0.0)) throw PreconditionError("energy_functional: beta must be positive");
    return 1.5 / beta + moments(F).kinetic_energy + dirichlet_energy(phi) / (8.0 * M_PI);
}

}  // namespace vplk
