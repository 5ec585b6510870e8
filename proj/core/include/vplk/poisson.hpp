#pragma once

#include <array>
#include <vector>

#include "vplk/phase_space.hpp"

namespace vplk {

// Spectral x-operators on SpatialFields (Nyquist mode dropped in first derivatives).
SpatialField laplacian(const SpatialField& u);
std::array<SpatialField, 3> gradient(const SpatialField& u);  // components beyond dim_x are zero
double dirichlet_energy(const SpatialField& u);               // integral |grad u|^2 dx
double l2_norm(const SpatialField& u);
double l2_inner(const SpatialField& a, const SpatialField& b);

// -Delta phi = 4 pi rho with zero-mean phi; rho must have zero mean.
SpatialField solve_poisson(const SpatialField& rho);

struct PbOptions {
    double tol = 1e-10;     // L^2 residual
    int max_iter = 50;
    int max_halvings = 6;
    double cg_rel_tol = 1e-13;
    int cg_max_iter = 500;
};

struct PbResult {
    SpatialField phi;
    std::vector<double> residuals;  // residual before iteration k, last entry is final
};

// || -Delta phi - 4 pi (n - e^{beta phi}) ||_{L^2}
double pb_residual(const SpatialField& n, double beta, const SpatialField& phi);

// Damped Newton for -Delta phi = 4 pi (n - e^{beta phi}), iterates kept in the
// maximum-principle bracket [ln(min n)/beta, ln(max n)/beta].
PbResult solve_pb_detailed(const SpatialField& n, double beta, const PbOptions& opt = {},
                           const SpatialField* initial = nullptr);
SpatialField solve_pb(const SpatialField& n, double beta, const PbOptions& opt = {});

struct PPState {
    double beta = 1.0;
    SpatialField phi;
    double energy = 0.0;
};

struct CoupledOptions {
    double tol = 1e-12;  // on |g(beta)| relative to max(1, E)
    int max_iter = 100;
    PbOptions pb{1e-12, 50, 6, 1e-14, 500};
};

// 3/(2 beta) + (1/8 pi) int |grad phi|^2 - E
double constraint_residual(const PPState& s);

// Finds beta with 3/(2 beta) + (1/8 pi) int |grad phi(beta)|^2 = E, phi(beta) = solve_pb(n, beta).
PPState solve_coupled(const SpatialField& n, double E, const CoupledOptions& opt = {});

struct GateauxIn {
    double gamma_dot = 0.0;
    SpatialField psi_dot;
};
struct GateauxOut {
    double e_dot = 0.0;
    SpatialField f_dot;
};

// F(gamma, psi) = (3/(2 gamma) + (1/8 pi) int |grad psi|^2, -Delta psi + 4 pi e^{gamma psi})
GateauxOut pp_map(double gamma, const SpatialField& psi);
GateauxOut gateaux_apply(const PPState& state, const GateauxIn& din);

// d beta/dt along (dE/dt, dn/dt) via the linearised constraint.
double beta_dot(const PPState& state, double dE_dt, const SpatialField& dn_dt, const PbOptions& opt = {});

// 3/(2 beta) + kinetic energy of F + (1/8 pi) int |grad phi|^2
double energy_functional(const DistField& F, double beta, const SpatialField& phi);

}  // namespace vplk
