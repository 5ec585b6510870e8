#pragma once

// Half-spectrum (r2c) transforms over the x axes of a PhaseGrid.

#include <array>
#include <cmath>
#include <complex>
#include <vector>

#include "fftw_plan.hpp"
#include "vplk/fft.hpp"
#include "vplk/phase_space.hpp"

namespace vplk::detail {

inline std::vector<int> x_dims(const PhaseGrid& g) { return std::vector<int>(static_cast<std::size_t>(g.dim_x), g.n_x); }

inline std::size_t x_half_size(const PhaseGrid& g) {
    std::size_t n = static_cast<std::size_t>(g.n_x / 2 + 1);
    for (int d = 1; d < g.dim_x; ++d) n *= static_cast<std::size_t>(g.n_x);
    return n;
}

// Integer frequency indices (FFTW order) of half-spectrum entry q.
inline std::array<int, 3> x_half_index(const PhaseGrid& g, std::size_t q) {
    const std::size_t nh = static_cast<std::size_t>(g.n_x / 2 + 1);
    std::array<int, 3> idx{0, 0, 0};
    idx[static_cast<std::size_t>(g.dim_x - 1)] = static_cast<int>(q % nh);
    std::size_t rest = q / nh;
    for (int d = g.dim_x - 2; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = static_cast<int>(rest % static_cast<std::size_t>(g.n_x));
        rest /= static_cast<std::size_t>(g.n_x);
    }
    return idx;
}

// Wave vector of half-spectrum entry q; `nyquist` is set if any component sits at n_x/2.
inline std::array<double, 3> x_kvec(const PhaseGrid& g, std::size_t q, bool* nyquist = nullptr) {
    std::array<double, 3> k{0.0, 0.0, 0.0};
    const auto idx = x_half_index(g, q);
    bool nyq = false;
    for (int d = 0; d < g.dim_x; ++d) {
        k[static_cast<std::size_t>(d)] = x_wavenumber(g, idx[static_cast<std::size_t>(d)]);
        if (idx[static_cast<std::size_t>(d)] == g.n_x / 2) nyq = true;
    }
    if (nyquist) *nyquist = nyq;
    return k;
}

inline double x_k2(const PhaseGrid& g, std::size_t q) {
    const auto k = x_kvec(g, q);
    return k[0] * k[0] + k[1] * k[1] + k[2] * k[2];
}

inline std::vector<cplx> rfft_x(const PhaseGrid& g, const double* u) {
    std::vector<cplx> hat(x_half_size(g));
    get_plan({0, x_dims(g), 1, 1, 0, 1, 0})->r2c(u, hat.data());
    return hat;
}

// Consumes `hat`; includes the 1/N normalisation.
inline std::vector<double> irfft_x(const PhaseGrid& g, std::vector<cplx> hat) {
    std::vector<double> out(g.nx_total());
    get_plan({1, x_dims(g), 1, 1, 0, 1, 0})->c2r(hat.data(), out.data());
    const double inv = 1.0 / static_cast<double>(g.nx_total());
    for (auto& x : out) x *= inv;
    return out;
}

// Half spectrum over x of every v point of a DistField; entry (q, iv) at q * nv + iv.
inline std::vector<cplx> rfft_x_dist(const PhaseGrid& g, const double* f) {
    const int nv = static_cast<int>(g.nv_total());
    std::vector<cplx> hat(x_half_size(g) * g.nv_total());
    get_plan({0, x_dims(g), nv, nv, 1, nv, 1})->r2c(f, hat.data());
    return hat;
}

inline void irfft_x_dist(const PhaseGrid& g, std::vector<cplx>& hat, double* f) {
    const int nv = static_cast<int>(g.nv_total());
    get_plan({1, x_dims(g), nv, nv, 1, nv, 1})->c2r(hat.data(), f);
    const double inv = 1.0 / static_cast<double>(g.nx_total());
    for (std::size_t i = 0; i < g.size(); ++i) f[i] *= inv;
}

}  // namespace vplk::detail
