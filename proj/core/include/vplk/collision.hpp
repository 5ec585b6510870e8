#pragma once

#include <span>
#include <vector>

#include "vplk/landau_kernel.hpp"
#include "vplk/phase_space.hpp"

namespace vplk {

// Discrete Landau operator on one velocity slice:
//   Q(G,F) = -sum_j D_j^T J_j,  J_j = sum_i A_ij D_i F - b_j F,
// with A = Phi * G, b_j = sum_i Phi_ij * D_i G. Q_D is the A part, Q_T the b part.
class CollisionWorkspace {
public:
    explicit CollisionWorkspace(const PhaseGrid& grid);

    const PhaseGrid& grid() const { return grid_; }
    CoeffBuilder& builder() { return builder_; }
    const VelocityDerivative& derivative() const { return builder_.derivative(); }

    // out = Q_D (diffusion) and/or Q_T (transport) applied to f with the given coefficients.
    void apply(const SliceCoeff& c, const double* f, double* out, bool diffusion = true, bool transport = true);

    // out = D^T A D f (the positive semidefinite diffusion part, i.e. -Q_D).
    void apply_diffusion_operator(const SliceCoeff& c, const double* f, double* out);

private:
    PhaseGrid grid_;
    CoeffBuilder builder_;
    std::array<std::vector<double>, 3> grad_, flux_;
};

DistField q_diffusion(const CoeffField& coeff, const DistField& F);
DistField q_transport(const CoeffField& coeff, const DistField& F);
DistField q_full(const DistField& G, const DistField& F);

// Weak form sum (tr(Phi*G) + 2 v . (Phi * grad G)) F dv dx of the kinetic-energy
// exchange, with grad G taken spectrally; independent of the finite differences in Q.
double collision_energy_moment(const DistField& G, const DistField& F);

// Direct x,v quadrature of |v|^2/2 * Q.
double energy_moment(const DistField& Q);

}  // namespace vplk
