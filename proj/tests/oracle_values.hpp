#pragma once

// Reference values produced by tests/oracles/oracles.py (scipy adaptive
// quadrature, Gauss-Legendre box integrals, fixed-point and bisection solves).
// None of them is computed with the library.

namespace vplk::oracle {

// sigma = Phi * mu
inline constexpr double sigma_origin = 0.5319230405352436;

struct SigmaPoint {
    double v[3];
    double s[6];  // xx, xy, xz, yy, yz, zz
};
inline constexpr SigmaPoint sigma_points[] = {
    {{1.0, 0.5, -0.3},
     {0.3889333315327176, -0.04039974885333647, 0.02423984931200189, 0.44953295481272215, 0.012119924656000942,
      0.46246087444579}},
    {{5.0, 0.0, 0.0},
     {0.015999752952027345, -2.9356114735787477e-18, -1.5420388036038563e-17, 0.19200000886335755,
      -2.6917824672051157e-21, 0.19200000886335752}},
    {{0.2, -1.7, 2.4},
     {0.29938524065956873, 0.008802428396579997, -0.012426957736348226, 0.22560017910000127, 0.10562914075895981,
      0.15129732763475257}},
};

// parallel / perpendicular eigenvalue ratio times <v>^2 at |v| = 2, 3, 4, 5, 6, 8
inline constexpr double aniso_r[] = {2, 3, 4, 5, 6, 8};
inline constexpr double aniso_scaled[] = {2.39826181453238,   2.425259203050878,  2.264078113495368,
                                          2.1666331122347238, 2.1142855557274918, 2.0634920634918936};

// box [-6, 6)^3
inline constexpr double sigma11_box_integral = 224.29863673846805;
inline constexpr double sigma11_midpoint_n32 = 224.34772177424654;

// int v1 Q_T(mu, v1 mu) dv
inline constexpr double drift_moment = -0.1880631945159187;
// int |v|^2/2 Q(mu, M_{T=2}) dv
inline constexpr double energy_exchange_T2 = -0.3071059106411871;

// norms of mu on [-6, 6)^3, s = 2.6, r = 0.5, m = (5, 10, 15)
inline constexpr double norm_e = 587896.3490557703;
inline constexpr double norm_e_prime = 882.7471900752579;
inline constexpr double norm_d = 111493.4646678388;
inline constexpr double norm_d_prime = 216.0664253349339;

// n = 1 + 0.1 cos(2 pi x), n_x = 32
inline constexpr double pb_phi0_beta1 = 0.02398925015465375;
inline constexpr double pb_phi_half_beta1 = -0.024302232331965396;
inline constexpr double coupled_beta_E1 = 1.5005469466226486;

}  // namespace vplk::oracle
