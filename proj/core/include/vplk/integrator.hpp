#pragma once

#include <string>
#include <vector>

#include "vplk/landau_kernel.hpp"
#include "vplk/norms.hpp"
#include "vplk/phase_space.hpp"
#include "vplk/poisson.hpp"

namespace vplk {

enum class TransportScheme { spectral_x_upwind_v };
enum class CollisionMode { explicit_euler, implicit_v };

std::string to_string(TransportScheme s);
std::string to_string(CollisionMode m);
TransportScheme parse_transport_scheme(const std::string& s);
CollisionMode parse_collision_mode(const std::string& s);

struct StepConfig {
    double dt = 1e-3;
    double lambda = 0.0;  // coefficient of the backward-Euler Laplacian substep
    TransportScheme transport_scheme = TransportScheme::spectral_x_upwind_v;
    CollisionMode collision_mode = CollisionMode::explicit_euler;
    double cfl_safety = 0.5;
    double cg_tol = 1e-12;  // relative residual for the implicit solves
    int cg_max_iter = 2000;

    void validate() const;
    bool operator==(const StepConfig&) const = default;
};

// cfl_safety * min(dx / v_max, dv / max|grad psi|)
double cfl_limit(const SpatialField& psi, double cfl_safety);
// Throws PreconditionError if cfg.dt exceeds the advection bound. In implicit_v
// mode, or when there is no x-transport (x-independent data), only the
// v-advection part is enforced.
void check_cfl(const SpatialField& psi, const StepConfig& cfg, bool x_transport = true);

// Substeps; each conserves the total mass of F.
void transport_x(DistField& F, double tau);
void transport_v(DistField& F, const SpatialField& psi, double tau);
void collide(DistField& F, const CoeffField& coeff, const StepConfig& cfg);
void regularize(DistField& F, double lambda, double tau, const StepConfig& cfg);

// One Strang step of  dF/dt + v.grad_x F - grad_x psi . grad_v F = Q(G, F).
DistField linear_step(const DistField& F, const DistField& G, const SpatialField& psi, const StepConfig& cfg);
// Same with the coefficients of G precomputed (shared between species).
DistField linear_step(const DistField& F, const CoeffField& coeff, const SpatialField& psi, const StepConfig& cfg);

// ---------------------------------------------------------------------------
// Picard iteration over a fixed horizon.

enum class FieldRule { none, poisson };

struct PicardConfig {
    int max_iter = 20;
    double tol_e_prime = 1e-8;  // on the sup over checkpoints of ||F^{N+1} - F^N||_{E'}
    double horizon = 0.05;
    int checkpoints = 8;
    NormParams norm{};
    bool require_convergence = true;  // throw ConvergenceError when max_iter is reached

    void validate() const;
    bool operator==(const PicardConfig&) const = default;
};

struct PicardLog {
    std::vector<double> differences;  // entry k: ||F^{k+1} - F^k||
    std::vector<double> ratios;       // differences[k] / differences[k-1]
    int iterations = 0;
    bool converged = false;
    int steps = 0;   // time steps per sweep
    double dt = 0.0; // time step actually used
};

struct PicardResult {
    std::vector<DistField> F;  // final iterate at the horizon, one per species
    PicardLog log;
};

// Species s feels psi_s = charges[s] * phi with -Delta phi = 4 pi sum_s charges[s] n_s
// (mean removed); every species collides against the sum of all species.
PicardResult picard_solve(const std::vector<DistField>& F_in, const std::vector<double>& charges, FieldRule rule,
                          const PicardConfig& cfg, const StepConfig& step);
PicardResult picard_solve(const DistField& F_in, FieldRule rule, const PicardConfig& cfg, const StepConfig& step);

// ---------------------------------------------------------------------------
// Drivers.

enum class Variant { two_species, massless, landau_homogeneous };

std::string to_string(Variant v);
Variant parse_variant(const std::string& s);

struct PlasmaState {
    Variant variant = Variant::two_species;
    double t = 0.0;
    DistField plus;
    DistField minus;   // two_species only
    SpatialField phi;  // zero for landau_homogeneous
    double beta = 0.0;     // massless only
    double energy0 = 0.0;  // massless: conserved total energy
};

// Force potential seen by each species: +phi for ions, -phi for electrons.
SpatialField species_potential(const SpatialField& phi, double charge);

PlasmaState step_two_species(const PlasmaState& s, const StepConfig& cfg);
PlasmaState step_massless(const PlasmaState& s, const StepConfig& cfg, const CoupledOptions& opt = {});
PlasmaState step_homogeneous(const PlasmaState& s, const StepConfig& cfg);
PlasmaState step(const PlasmaState& s, const StepConfig& cfg);

// 3/(2 beta) + kinetic + field energy (massless), kinetic of both species + field
// energy (two species), kinetic energy (homogeneous).
double total_energy(const PlasmaState& s);

// One Maxwellian component: density (1 + amplitude cos(2 pi mode x_1)) with
// bulk velocity mean + drift_amplitude sin(2 pi mode x_1) e_1.
struct MaxwellianComponent {
    double density = 1.0;
    double amplitude = 0.0;
    int mode = 1;
    Vec3 mean = Vec3::Zero();
    double temperature = 1.0;
    double drift_amplitude = 0.0;

    bool operator==(const MaxwellianComponent& o) const {
        return density == o.density && amplitude == o.amplitude && mode == o.mode && mean == o.mean &&
               temperature == o.temperature && drift_amplitude == o.drift_amplitude;
    }
};

struct InitialSpec {
    std::vector<MaxwellianComponent> plus;
    std::vector<MaxwellianComponent> minus;  // two_species only
    double beta_in = 1.0;                    // massless only

    bool operator==(const InitialSpec&) const = default;
};

DistField sample_species(const PhaseGrid& grid, const std::vector<MaxwellianComponent>& comps);

// Builds a state with unit mass per species; throws PreconditionError if a
// density is not strictly positive.
PlasmaState make_initial(const PhaseGrid& grid, Variant variant, const InitialSpec& spec,
                         const CoupledOptions& opt = {});

}  // namespace vplk
