#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "vplk/phase_space.hpp"

namespace vplk {

// Collocated first-derivative operator on one velocity axis, applied along any
// of the three axes of an n_v^3 slice. Every row annihilates constants and is
// exact on quadratics, which is what makes the discrete collision operator
// conserve mass, momentum and energy.
//
// The default operator blends the 4th-order centred stencil (|v| small) into the
// 2nd-order one (tails): theta(v) = (1 - tanh((|v| - blend_center)/blend_width))/2.
// The 4th-order stencil alone produces wrong-signed slopes on under-resolved cold
// tails and with them negative densities.
class VelocityDerivative {
public:
    static constexpr int width = 5;
    static constexpr double blend_center = 3.0;
    static constexpr double blend_width = 0.5;

    enum class Kind { blended, second_order, fourth_order };

    explicit VelocityDerivative(const PhaseGrid& grid, Kind kind = Kind::blended);

    int n() const { return n_; }
    int start(int row) const { return start_[static_cast<std::size_t>(row)]; }
    double coeff(int row, int k) const { return c_[static_cast<std::size_t>(row)][static_cast<std::size_t>(k)]; }

    // out = D_axis f on an n^3 slice (axis 0 is the slowest index).
    void apply(int axis, const double* f, double* out) const;
    // out += D_axis^T f
    void apply_transpose_add(int axis, const double* f, double* out) const;

    Eigen::MatrixXd matrix() const;

private:
    int n_;
    std::vector<int> start_;
    std::vector<std::array<double, width>> c_;
};

}  // namespace vplk
