#pragma once

#include <complex>
#include <vector>

#include "vplk/phase_space.hpp"

namespace vplk {

using cplx = std::complex<double>;

// Full complex transforms. Forward is unnormalised, inverse divides by the
// transform length, frequencies in FFTW order (0, 1, ..., -1).
std::vector<cplx> fft_x(const SpatialField& u);
SpatialField ifft_x(const PhaseGrid& grid, const std::vector<cplx>& u_hat);

// Over x for every v point; layout matches DistField.
std::vector<cplx> fft_x(const DistField& u);
DistField ifft_x_dist(const PhaseGrid& grid, const std::vector<cplx>& u_hat);

// Over v (3D, n_v^3) for every x point; layout matches DistField.
std::vector<cplx> fft_v(const DistField& u);
DistField ifft_v(const PhaseGrid& grid, const std::vector<cplx>& u_hat);

// Angular wavenumber 2*pi*k along x for index i of an axis of length n_x.
double x_wavenumber(const PhaseGrid& grid, int i);
// Angular wavenumber on the 2*v_max periodic velocity axis.
double v_wavenumber(const PhaseGrid& grid, int i);

}  // namespace vplk
