#include "vplk/integrator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "cg.hpp"
#include "spectral_x.hpp"
#include "vplk/collision.hpp"
#include "vplk/errors.hpp"
#include "vplk/parallel.hpp"
#include "vplk/stencil.hpp"

namespace vplk {

std::string to_string(TransportScheme) { return "spectral_x_upwind_v"; }

std::string to_string(CollisionMode m) { return m == CollisionMode::explicit_euler ? "explicit" : "implicit_v"; }

TransportScheme parse_transport_scheme(const std::string& s) {
    if (s == "spectral_x_upwind_v") return TransportScheme::spectral_x_upwind_v;
    throw PreconditionError("unknown transport scheme '" + s + "'");
}

CollisionMode parse_collision_mode(const std::string& s) {
    if (s == "explicit") return CollisionMode::explicit_euler;
    if (s == "implicit_v") return CollisionMode::implicit_v;
    throw PreconditionError("unknown collision mode '" + s + "' (expected explicit or implicit_v)");
}

void StepConfig::validate() const {
    if (!(dt > 0.0) || !std::isfinite(dt)) throw PreconditionError("step: dt must be positive");
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw PreconditionError("step: lambda must be >= 0");
    if (!(cfl_safety > 0.0 && cfl_safety < 1.0)) throw PreconditionError("step: cfl_safety must lie in (0, 1)");
    if (!(cg_tol > 0.0)) throw PreconditionError("step: cg_tol must be positive");
    if (cg_max_iter <= 0) throw PreconditionError("step: cg_max_iter must be positive");
}

namespace {

double max_force(const SpatialField& psi) {
    if (psi.size() == 0) return 0.0;
    const auto gr = gradient(psi);
    double m = 0.0;
    for (std::size_t i = 0; i < psi.size(); ++i)
        m = std::max(m, std::sqrt(gr[0][i] * gr[0][i] + gr[1][i] * gr[1][i] + gr[2][i] * gr[2][i]));
    return m;
}

}  // namespace

double cfl_limit(const SpatialField& psi, double cfl_safety) {
    const auto& g = psi.grid();
    const double a = max_force(psi);
    double lim = g.dx / g.v_max;
    if (a > 0.0) lim = std::min(lim, g.dv / a);
    return cfl_safety * lim;
}

void check_cfl(const SpatialField& psi, const StepConfig& cfg, bool x_transport) {
    const auto& g = psi.grid();
    const double a = max_force(psi);
    double lim = std::numeric_limits<double>::infinity();
    if (x_transport && cfg.collision_mode == CollisionMode::explicit_euler) lim = g.dx / g.v_max;
    if (a > 0.0) lim = std::min(lim, g.dv / a);
    lim *= cfg.cfl_safety;
    if (cfg.dt > lim) {
        std::ostringstream os;
        os << "step: dt = " << cfg.dt << " violates the CFL bound " << lim;
        throw PreconditionError(os.str());
    }
}

// ---------------------------------------------------------------------------
// Transport

void transport_x(DistField& F, double tau) {
    if (x_independent(F)) return;
    const auto& g = F.grid();
    const std::size_t nv = g.nv_total();
    auto hat = detail::rfft_x_dist(g, F.values().data());
    const std::size_t nq = detail::x_half_size(g);
    parallel_for(nq, [&](std::size_t b, std::size_t e, int) {
        for (std::size_t q = b; q < e; ++q) {
            const auto idx = detail::x_half_index(g, q);
            for (std::size_t iv = 0; iv < nv; ++iv) {
                const Vec3 v = g.v3(iv);
                cplx m(1.0, 0.0);
                for (int d = 0; d < g.dim_x; ++d) {
                    const int i = idx[static_cast<std::size_t>(d)];
                    if (i == 0) continue;
                    const double th = x_wavenumber(g, i) * v[d] * tau;
                    // The Nyquist mode of a real field has no phase; keep only its real part.
                    m *= i == g.n_x / 2 ? cplx(std::cos(th), 0.0) : std::polar(1.0, -th);
                }
                hat[q * nv + iv] *= m;
            }
        }
    });
    detail::irfft_x_dist(g, hat, F.values().data());
}

namespace {

double minmod(double a, double b) {
    if (a * b <= 0.0) return 0.0;
    return std::abs(a) < std::abs(b) ? a : b;
}

// out = -div_v(a f) by MUSCL/minmod upwind fluxes, zero flux through the box faces.
void advection_rhs(const double* f, double* out, const std::array<double, 3>& a, int n, double dv,
                   std::vector<double>& line, std::vector<double>& slope, std::vector<double>& flux) {
    const std::size_t nv = static_cast<std::size_t>(n) * n * n;
    std::fill(out, out + nv, 0.0);
    for (int axis = 0; axis < 3; ++axis) {
        const double ad = a[static_cast<std::size_t>(axis)];
        if (ad == 0.0) continue;
        const std::size_t stride = axis == 0 ? static_cast<std::size_t>(n) * n : (axis == 1 ? n : 1);
        for (std::size_t l = 0; l < nv / n; ++l) {
            // base index of line l with the axis index zeroed
            std::size_t base;
            if (axis == 0)
                base = l;
            else if (axis == 1)
                base = (l / n) * n * n + l % n;
            else
                base = l * n;
            for (int j = 0; j < n; ++j) line[j] = f[base + j * stride];
            slope[0] = slope[n - 1] = 0.0;
            for (int j = 1; j < n - 1; ++j) slope[j] = minmod(line[j] - line[j - 1], line[j + 1] - line[j]);
            flux[0] = flux[n] = 0.0;
            for (int j = 0; j < n - 1; ++j) {
                const double face = ad > 0.0 ? line[j] + 0.5 * slope[j] : line[j + 1] - 0.5 * slope[j + 1];
                flux[j + 1] = ad * face;
            }
            for (int j = 0; j < n; ++j) out[base + j * stride] -= (flux[j + 1] - flux[j]) / dv;
        }
    }
}

}  // namespace

void transport_v(DistField& F, const SpatialField& psi, double tau) {
    const auto& g = F.grid();
    require_same_grid(g, psi.grid(), "transport_v");
    const auto gr = gradient(psi);
    const std::size_t nv = g.nv_total();
    const int n = g.n_v;
    parallel_for(g.nx_total(), [&](std::size_t b, std::size_t e, int) {
        std::vector<double> k1(nv), f1(nv), line(n), slope(n), flux(n + 1);
        for (std::size_t ix = b; ix < e; ++ix) {
            const std::array<double, 3> a{-gr[0][ix], -gr[1][ix], -gr[2][ix]};
            if (a[0] == 0.0 && a[1] == 0.0 && a[2] == 0.0) continue;
            double* f = F.slice(ix).data();
            // SSP-RK2
            advection_rhs(f, k1.data(), a, n, g.dv, line, slope, flux);
            for (std::size_t i = 0; i < nv; ++i) f1[i] = f[i] + tau * k1[i];
            advection_rhs(f1.data(), k1.data(), a, n, g.dv, line, slope, flux);
            for (std::size_t i = 0; i < nv; ++i) f[i] = 0.5 * f[i] + 0.5 * (f1[i] + tau * k1[i]);
        }
    });
}

// ---------------------------------------------------------------------------
// Collision

namespace {

void copy_slice_coeff(const CoeffField& c, std::size_t ix, SliceCoeff& sc) {
    const std::size_t nv = c.grid.nv_total();
    const auto off = static_cast<std::ptrdiff_t>(ix * nv);
    for (std::size_t k = 0; k < 6; ++k) std::copy_n(c.mat[k].begin() + off, nv, sc.a[k].begin());
    for (std::size_t k = 0; k < 3; ++k) std::copy_n(c.vec[k].begin() + off, nv, sc.b[k].begin());
}

bool coeff_x_independent(const CoeffField& c) {
    const std::size_t nv = c.grid.nv_total();
    auto same = [&](const std::vector<double>& a) {
        for (std::size_t ix = 1; ix < c.grid.nx_total(); ++ix)
            if (!std::equal(a.begin(), a.begin() + static_cast<std::ptrdiff_t>(nv),
                            a.begin() + static_cast<std::ptrdiff_t>(ix * nv)))
                return false;
        return true;
    };
    return std::all_of(c.mat.begin(), c.mat.end(), same) && std::all_of(c.vec.begin(), c.vec.end(), same);
}

// Diagonal of D^T A D.
void diffusion_diagonal(const VelocityDerivative& D, const SliceCoeff& c, std::vector<double>& diag) {
    const int n = D.n();
    const std::size_t nn = static_cast<std::size_t>(n);
    std::fill(diag.begin(), diag.end(), 0.0);
    auto entry = [&](int row, int col) {
        const int k = col - D.start(row);
        return k >= 0 && k < VelocityDerivative::width ? D.coeff(row, k) : 0.0;
    };
    for (std::size_t p = 0; p < diag.size(); ++p) {
        const std::array<int, 3> cidx{static_cast<int>(p / (nn * nn)), static_cast<int>((p / nn) % nn),
                                      static_cast<int>(p % nn)};
        const std::array<std::ptrdiff_t, 3> stride{static_cast<std::ptrdiff_t>(nn * nn), static_cast<std::ptrdiff_t>(nn),
                                                   1};
        double s = 0.0;
        for (int i = 0; i < 3; ++i) {
            const int ci = cidx[static_cast<std::size_t>(i)];
            const auto& aii = c.a[static_cast<std::size_t>(sym_index(i, i))];
            for (int r = std::max(0, ci - 4); r <= std::min(n - 1, ci + 4); ++r) {
                const double w = entry(r, ci);
                if (w == 0.0) continue;
                s += aii[static_cast<std::size_t>(static_cast<std::ptrdiff_t>(p) +
                                                  (r - ci) * stride[static_cast<std::size_t>(i)])] *
                     w * w;
            }
            for (int j = 0; j < 3; ++j) {
                if (j == i) continue;
                const int cj = cidx[static_cast<std::size_t>(j)];
                s += c.a[static_cast<std::size_t>(sym_index(i, j))][p] * entry(ci, ci) * entry(cj, cj);
            }
        }
        diag[p] = s;
    }
}

void rescale_mass(double* x, std::size_t n, double target) {
    double m = 0.0;
    for (std::size_t i = 0; i < n; ++i) m += x[i];
    if (m != 0.0 && target != 0.0 && std::isfinite(target / m))
        for (std::size_t i = 0; i < n; ++i) x[i] *= target / m;
}

void collide_slice(CollisionWorkspace& ws, const SliceCoeff& sc, double* f, const StepConfig& cfg,
                   std::vector<double>& tmp) {
    const std::size_t nv = ws.grid().nv_total();
    if (cfg.collision_mode == CollisionMode::explicit_euler) {
        ws.apply(sc, f, tmp.data());
        for (std::size_t i = 0; i < nv; ++i) f[i] += cfg.dt * tmp[i];
        return;
    }
    // (I + dt D^T A D) f1 = f0 + dt Q_T(f0)
    ws.apply(sc, f, tmp.data(), false, true);
    std::vector<double> rhs(nv), x(f, f + nv), diag(nv);
    for (std::size_t i = 0; i < nv; ++i) rhs[i] = f[i] + cfg.dt * tmp[i];
    diffusion_diagonal(ws.derivative(), sc, diag);
    for (auto& d : diag) d = 1.0 + cfg.dt * d;
    auto apply = [&](const std::vector<double>& u, std::vector<double>& out) {
        out.resize(nv);
        ws.apply_diffusion_operator(sc, u.data(), out.data());
        for (std::size_t i = 0; i < nv; ++i) out[i] = u[i] + cfg.dt * out[i];
    };
    auto precond = [&](const std::vector<double>& r, std::vector<double>& z) {
        z.resize(nv);
        for (std::size_t i = 0; i < nv; ++i) z[i] = r[i] / diag[i];
    };
    const auto res = detail::pcg(apply, precond, rhs, x, cfg.cg_tol, cfg.cg_max_iter);
    if (!res.converged) {
        std::ostringstream os;
        os << "implicit collision: CG stopped at relative residual " << res.residual << " after " << res.iterations
           << " iterations";
        throw ConvergenceError(os.str());
    }
    // The exact solve conserves mass; remove the defect left by the CG tolerance.
    double target = 0.0;
    for (double r : rhs) target += r;
    rescale_mass(x.data(), nv, target);
    std::copy(x.begin(), x.end(), f);
}

}  // namespace

void collide(DistField& F, const CoeffField& coeff, const StepConfig& cfg) {
    const auto& g = F.grid();
    require_same_grid(g, coeff.grid, "collide");
    const std::size_t nv = g.nv_total();
    const bool uniform = x_independent(F) && coeff_x_independent(coeff);
    const std::size_t nslices = uniform ? 1 : g.nx_total();
    parallel_for(nslices, [&](std::size_t b, std::size_t e, int) {
        CollisionWorkspace ws(g);
        SliceCoeff sc(nv);
        std::vector<double> tmp(nv);
        for (std::size_t ix = b; ix < e; ++ix) {
            copy_slice_coeff(coeff, ix, sc);
            collide_slice(ws, sc, F.slice(ix).data(), cfg, tmp);
        }
    });
    if (uniform)
        for (std::size_t ix = 1; ix < g.nx_total(); ++ix) std::copy_n(F.slice(0).begin(), nv, F.slice(ix).begin());
}

// ---------------------------------------------------------------------------
// Regularisation: backward Euler for dF/dt = lambda (Delta_x - D^T D) F.

void regularize(DistField& F, double lambda, double tau, const StepConfig& cfg) {
    if (lambda == 0.0) return;
    if (!(lambda > 0.0) || !(tau > 0.0)) throw PreconditionError("regularize: lambda and tau must be positive");
    const auto& g = F.grid();
    const std::size_t nv = g.nv_total();
    const double c = lambda * tau;
    auto hat = detail::rfft_x_dist(g, F.values().data());
    const std::size_t nq = detail::x_half_size(g);
    const VelocityDerivative D(g);
    parallel_for(nq, [&](std::size_t b, std::size_t e, int) {
        std::vector<double> u(nv), w(nv), t1(nv);
        for (std::size_t q = b; q < e; ++q) {
            const double shift = 1.0 + c * detail::x_k2(g, q);
            auto apply = [&](const std::vector<double>& x, std::vector<double>& out) {
                out.assign(nv, 0.0);
                for (int a = 0; a < 3; ++a) {
                    D.apply(a, x.data(), t1.data());
                    D.apply_transpose_add(a, t1.data(), out.data());
                }
                for (std::size_t i = 0; i < nv; ++i) out[i] = shift * x[i] + c * out[i];
            };
            auto ident = [&](const std::vector<double>& r, std::vector<double>& z) {
                z = r;
                for (auto& x : z) x /= shift;
            };
            for (int part = 0; part < 2; ++part) {
                double norm = 0.0, mass = 0.0;
                for (std::size_t i = 0; i < nv; ++i) {
                    const cplx h = hat[q * nv + i];
                    u[i] = part == 0 ? h.real() : h.imag();
                    norm += u[i] * u[i];
                    mass += u[i];
                }
                if (norm == 0.0) continue;
                w = u;
                for (auto& x : w) x /= shift;
                const auto res = detail::pcg(apply, ident, u, w, cfg.cg_tol, cfg.cg_max_iter);
                if (!res.converged) {
                    std::ostringstream os;
                    os << "regularize: CG stopped at relative residual " << res.residual;
                    throw ConvergenceError(os.str());
                }
                if (q == 0 && part == 0) rescale_mass(w.data(), nv, mass);
                for (std::size_t i = 0; i < nv; ++i) {
                    cplx& h = hat[q * nv + i];
                    h = part == 0 ? cplx(w[i], h.imag()) : cplx(h.real(), w[i]);
                }
            }
        }
    });
    detail::irfft_x_dist(g, hat, F.values().data());
}

// ---------------------------------------------------------------------------

namespace {

DistField linear_step_impl(const DistField& F, const CoeffField* coeff, const SpatialField& psi,
                           const StepConfig& cfg) {
    cfg.validate();
    require_same_grid(F.grid(), psi.grid(), "linear_step");
    check_cfl(psi, cfg, !x_independent(F));
    DistField out = F;
    const double h = 0.5 * cfg.dt;
    transport_x(out, h);
    transport_v(out, psi, h);
    if (coeff) collide(out, *coeff, cfg);
    transport_v(out, psi, h);
    transport_x(out, h);
    if (cfg.lambda > 0.0) regularize(out, cfg.lambda, cfg.dt, cfg);
    out.set_nonnegative(F.nonnegative());
    if (!out.all_finite()) throw ConvergenceError("linear_step: non-finite values produced");
    return out;
}

bool all_zero(const DistField& f) {
    return std::all_of(f.values().begin(), f.values().end(), [](double x) { return x == 0.0; });
}

}  // namespace

DistField linear_step(const DistField& F, const DistField& G, const SpatialField& psi, const StepConfig& cfg) {
    require_same_grid(F.grid(), G.grid(), "linear_step");
    if (all_zero(G)) return linear_step_impl(F, nullptr, psi, cfg);
    const auto coeff = convolve_phi(G);
    return linear_step_impl(F, &coeff, psi, cfg);
}

DistField linear_step(const DistField& F, const CoeffField& coeff, const SpatialField& psi, const StepConfig& cfg) {
    require_same_grid(F.grid(), coeff.grid, "linear_step");
    return linear_step_impl(F, &coeff, psi, cfg);
}

// ---------------------------------------------------------------------------
// Picard

void PicardConfig::validate() const {
    if (max_iter <= 0) throw PreconditionError("picard: max_iter must be positive");
    if (!(tol_e_prime > 0.0)) throw PreconditionError("picard: tol must be positive");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) throw PreconditionError("picard: horizon must be positive");
    if (checkpoints <= 0) throw PreconditionError("picard: checkpoints must be positive");
    norm.validate();
}

namespace {

double inv_density_sup(const DistField& F) {
    const auto n = moments(F).mass;
    double m = 0.0;
    for (double x : n.values()) m = x > 0.0 ? std::max(m, 1.0 / x) : std::numeric_limits<double>::infinity();
    return m;
}

SpatialField density(const DistField& F) { return moments(F).mass; }

SpatialField charge_potential(const std::vector<SpatialField>& n, const std::vector<double>& charges) {
    SpatialField rho(n[0].grid());
    for (std::size_t s = 0; s < n.size(); ++s)
        for (std::size_t i = 0; i < rho.size(); ++i) rho[i] += charges[s] * n[s][i];
    const double mean = rho.integral();
    for (auto& x : rho.values()) x -= mean;
    return solve_poisson(rho);
}

}  // namespace

PicardResult picard_solve(const std::vector<DistField>& F_in, const std::vector<double>& charges, FieldRule rule,
                          const PicardConfig& cfg, const StepConfig& step) {
    cfg.validate();
    step.validate();
    if (F_in.empty()) throw PreconditionError("picard: no species");
    if (charges.size() != F_in.size()) throw PreconditionError("picard: one charge per species required");
    const auto& g = F_in[0].grid();
    const std::size_t S = F_in.size();
    double inv0 = 0.0;
    for (const auto& f : F_in) {
        require_same_grid(g, f.grid(), "picard");
        const double inv = inv_density_sup(f);
        if (!std::isfinite(inv)) throw PreconditionError("picard: initial density must be positive");
        inv0 = std::max(inv0, inv);
    }

    const int K = cfg.checkpoints;
    const int per = std::max(1, static_cast<int>(std::ceil(cfg.horizon / step.dt / K - 1e-12)));
    const int nsteps = per * K;
    StepConfig sc = step;
    sc.dt = cfg.horizon / nsteps;

    using Traj = std::vector<std::vector<DistField>>;  // [checkpoint][species]
    Traj traj(static_cast<std::size_t>(K + 1), F_in);
    PicardResult res;
    res.log.steps = nsteps;
    res.log.dt = sc.dt;

    for (int it = 0; it < cfg.max_iter; ++it) {
        Traj next(static_cast<std::size_t>(K + 1));
        next[0] = F_in;
        std::vector<DistField> F = F_in;
        for (int n = 0; n < nsteps; ++n) {
            const std::size_t c = static_cast<std::size_t>(n / per);
            const double w = static_cast<double>(n % per) / per;
            std::vector<DistField> Gs(S);
            for (std::size_t s = 0; s < S; ++s) {
                Gs[s] = traj[c][s];
                if (w > 0.0) {
                    Gs[s] *= 1.0 - w;
                    Gs[s] += w * traj[c + 1][s];
                }
            }
            DistField G = Gs[0];
            for (std::size_t s = 1; s < S; ++s) G += Gs[s];
            SpatialField phi(g);
            if (rule == FieldRule::poisson) {
                std::vector<SpatialField> dens;
                for (const auto& x : Gs) dens.push_back(density(x));
                phi = charge_potential(dens, charges);
            }
            const auto coeff = convolve_phi(G);
            for (std::size_t s = 0; s < S; ++s) {
                F[s] = linear_step(F[s], coeff, species_potential(phi, charges[s]), sc);
                const double inv = inv_density_sup(F[s]);
                if (!(inv <= 2.0 * inv0)) {
                    std::ostringstream os;
                    os << "picard: density lower bound lost at t = " << (n + 1) * sc.dt << " (||1/n|| = " << inv << ")";
                    throw BlowupError(os.str());
                }
            }
            if ((n + 1) % per == 0) next[static_cast<std::size_t>((n + 1) / per)] = F;
        }
        double diff = 0.0;
        for (std::size_t c = 1; c <= static_cast<std::size_t>(K); ++c) {
            double s2 = 0.0;
            for (std::size_t s = 0; s < S; ++s) {
                const double e = e_prime_norm(next[c][s] - traj[c][s], cfg.norm);
                s2 += e * e;
            }
            diff = std::max(diff, std::sqrt(s2));
        }
        if (!res.log.differences.empty()) res.log.ratios.push_back(diff / res.log.differences.back());
        res.log.differences.push_back(diff);
        res.log.iterations = it + 1;
        traj.swap(next);
        if (diff < cfg.tol_e_prime) {
            res.log.converged = true;
            break;
        }
    }
    res.F = traj[static_cast<std::size_t>(K)];
    if (!res.log.converged && cfg.require_convergence) {
        std::ostringstream os;
        os << "picard: no convergence after " << cfg.max_iter << " iterations (last difference "
           << res.log.differences.back() << ")";
        throw ConvergenceError(os.str());
    }
    return res;
}

PicardResult picard_solve(const DistField& F_in, FieldRule rule, const PicardConfig& cfg, const StepConfig& step) {
    return picard_solve(std::vector<DistField>{F_in}, {1.0}, rule, cfg, step);
}

// ---------------------------------------------------------------------------
// Drivers

std::string to_string(Variant v) {
    switch (v) {
        case Variant::two_species: return "two_species";
        case Variant::massless: return "massless";
        case Variant::landau_homogeneous: return "landau_homogeneous";
    }
    return "?";
}

Variant parse_variant(const std::string& s) {
    if (s == "two_species") return Variant::two_species;
    if (s == "massless") return Variant::massless;
    if (s == "landau_homogeneous") return Variant::landau_homogeneous;
    throw PreconditionError("unknown variant '" + s + "' (expected two_species, massless or landau_homogeneous)");
}

SpatialField species_potential(const SpatialField& phi, double charge) { return charge * phi; }

PlasmaState step_two_species(const PlasmaState& s, const StepConfig& cfg) {
    if (s.variant != Variant::two_species) throw PreconditionError("step_two_species: wrong variant");
    const auto coeff = convolve_phi(s.plus + s.minus);
    PlasmaState out = s;
    out.plus = linear_step(s.plus, coeff, species_potential(s.phi, 1.0), cfg);
    out.minus = linear_step(s.minus, coeff, species_potential(s.phi, -1.0), cfg);
    out.phi = charge_potential({density(out.plus), density(out.minus)}, {1.0, -1.0});
    out.t = s.t + cfg.dt;
    return out;
}

PlasmaState step_massless(const PlasmaState& s, const StepConfig& cfg, const CoupledOptions& opt) {
    if (s.variant != Variant::massless) throw PreconditionError("step_massless: wrong variant");
    PlasmaState out = s;
    out.plus = linear_step(s.plus, s.plus, species_potential(s.phi, 1.0), cfg);
    const double ec = s.energy0 - moments(out.plus).kinetic_energy;
    const auto pp = solve_coupled(density(out.plus), ec, opt);
    out.beta = pp.beta;
    out.phi = pp.phi;
    out.t = s.t + cfg.dt;
    return out;
}

PlasmaState step_homogeneous(const PlasmaState& s, const StepConfig& cfg) {
    if (s.variant != Variant::landau_homogeneous) throw PreconditionError("step_homogeneous: wrong variant");
    PlasmaState out = s;
    out.plus = linear_step(s.plus, s.plus, SpatialField(s.plus.grid()), cfg);
    out.t = s.t + cfg.dt;
    return out;
}

PlasmaState step(const PlasmaState& s, const StepConfig& cfg) {
    switch (s.variant) {
        case Variant::two_species: return step_two_species(s, cfg);
        case Variant::massless: return step_massless(s, cfg);
        case Variant::landau_homogeneous: return step_homogeneous(s, cfg);
    }
    throw PreconditionError("step: unknown variant");
}

double total_energy(const PlasmaState& s) {
    switch (s.variant) {
        case Variant::two_species:
            return moments(s.plus).kinetic_energy + moments(s.minus).kinetic_energy +
                   dirichlet_energy(s.phi) / (8.0 * M_PI);
        case Variant::massless: return energy_functional(s.plus, s.beta, s.phi);
        case Variant::landau_homogeneous: return moments(s.plus).kinetic_energy;
    }
    return 0.0;
}

DistField sample_species(const PhaseGrid& grid, const std::vector<MaxwellianComponent>& comps) {
    if (comps.empty()) throw PreconditionError("initial data: species has no components");
    DistField F(grid);
    const std::size_t nv = grid.nv_total();
    for (const auto& c : comps) {
        if (!(c.temperature > 0.0)) throw PreconditionError("initial data: temperature must be positive");
        if (!(c.density > 0.0)) throw PreconditionError("initial data: density must be positive");
        const double norm = std::pow(2.0 * M_PI * c.temperature, -1.5);
        for (std::size_t ix = 0; ix < grid.nx_total(); ++ix) {
            const double arg = 2.0 * M_PI * c.mode * grid.x3(ix)[0];
            const double rho = c.density * (1.0 + c.amplitude * std::cos(arg));
            Vec3 u = c.mean;
            u[0] += c.drift_amplitude * std::sin(arg);
            for (std::size_t iv = 0; iv < nv; ++iv)
                F(ix, iv) += rho * norm * std::exp(-(grid.v3(iv) - u).squaredNorm() / (2.0 * c.temperature));
        }
    }
    const auto n = density(F);
    if (!(n.min() > 0.0)) {
        std::ostringstream os;
        os << "initial data: density is not strictly positive (min n = " << n.min() << ")";
        throw PreconditionError(os.str());
    }
    if (F.min() < 0.0) throw PreconditionError("initial data: distribution takes negative values");
    F *= 1.0 / n.integral();
    F.set_nonnegative(true);
    const double bf = boundary_fraction(F);
    if (bf > 1e-10) {
        std::ostringstream os;
        os << "initial data: boundary values reach " << bf << " of the maximum";
        warn(os.str());
    }
    return F;
}

PlasmaState make_initial(const PhaseGrid& grid, Variant variant, const InitialSpec& spec, const CoupledOptions& opt) {
    PlasmaState s;
    s.variant = variant;
    s.plus = sample_species(grid, spec.plus);
    s.phi = SpatialField(grid);
    switch (variant) {
        case Variant::two_species:
            s.minus = sample_species(grid, spec.minus);
            s.phi = charge_potential({density(s.plus), density(s.minus)}, {1.0, -1.0});
            break;
        case Variant::massless: {
            if (!(spec.beta_in > 0.0)) throw PreconditionError("initial data: beta_in must be positive");
            const auto n = density(s.plus);
            const auto phi_in = solve_pb(n, spec.beta_in, opt.pb);
            const double kin = moments(s.plus).kinetic_energy;
            s.energy0 = 1.5 / spec.beta_in + kin + dirichlet_energy(phi_in) / (8.0 * M_PI);
            const auto pp = solve_coupled(n, s.energy0 - kin, opt);
            s.beta = pp.beta;
            s.phi = pp.phi;
            break;
        }
        case Variant::landau_homogeneous:
            if (!x_independent(s.plus))
                throw PreconditionError("initial data: landau_homogeneous requires x-independent data");
            break;
    }
    return s;
}

}  // namespace vplk
