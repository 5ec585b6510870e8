#pragma once

#include <array>
#include <span>
#include <vector>

#include "vplk/phase_space.hpp"

namespace vplk {

struct NormParams {
    double s = 2.6;  // x regularity, (5/2, 3]
    double r = 0.5;  // v regularity, (0, 1]
    double m0 = 5.0, m1 = 10.0, m2 = 15.0;

    // Throws PreconditionError outside the admissible ranges.
    void validate() const;
    bool operator==(const NormParams&) const = default;
};

// Norm values and their summands (each summand is itself a norm, so e^2 = sum of e_terms^2).
struct NormReport {
    double e = 0.0, d = 0.0, e_prime = 0.0, d_prime = 0.0;
    std::array<double, 3> e_terms{}, d_terms{};
    std::array<double, 2> e_prime_terms{}, d_prime_terms{};
};

// Fourier multipliers (1 + |k|^2)^(s/2); v is treated as 2 v_max periodic.
DistField bessel_x(const DistField& u, double s);
DistField bessel_v(const DistField& u, double r);
SpatialField bessel_x(const SpatialField& u, double s);
std::vector<double> bessel_v(const PhaseGrid& grid, std::span<const double> u, double r);

// ||<grad_x>^s u||_{L^2_x}
double hs_norm(const SpatialField& u, double s);

// sigma-weighted Dirichlet form  sum sigma_ij d_i psi d_j psi dv  on one v slice,
// centred 2nd-order differences, one-sided at the box faces.
double h_sigma_seminorm(const PhaseGrid& grid, std::span<const double> psi);

// Weighted L^2_{x,v} norm  ||<v>^m u||.
double weighted_l2(const DistField& u, double m);

NormReport norm_report(const DistField& u, const NormParams& p = {});

// The energy-type norms alone, without the dissipation terms.
double e_norm(const DistField& u, const NormParams& p = {});
double e_prime_norm(const DistField& u, const NormParams& p = {});

// Sides of the weighted commutator estimate for v-slices u1, u2:
//   lhs  = ||<v>^m (<grad_v>^r (u1 u2) - u1 <grad_v>^r u2)||
//   rhs1 = ||<grad_v>^r u1||_{FL^1} ||<v>^m u2||
//   rhs2 = ||<grad_v>^(r+3/2) u1|| ||u2||
// FL^1 is the sum of |Fourier coefficients| of the periodised box function.
struct CommutatorSides {
    double lhs = 0.0, rhs1 = 0.0, rhs2 = 0.0;
};
CommutatorSides commutator_check(const PhaseGrid& grid, std::span<const double> u1, std::span<const double> u2, double m,
                                 double r);

}  // namespace vplk
