#include "vplk/stencil.hpp"

#include <algorithm>
#include <cmath>

namespace vplk {

namespace {

std::vector<double> d2_row(int n, double h, int i) {
    std::vector<double> r(static_cast<std::size_t>(n), 0.0);
    auto at = [&](int j) -> double& { return r[static_cast<std::size_t>(j)]; };
    if (i == 0) {
        at(0) = -3.0 / (2 * h), at(1) = 4.0 / (2 * h), at(2) = -1.0 / (2 * h);
    } else if (i == n - 1) {
        at(n - 3) = 1.0 / (2 * h), at(n - 2) = -4.0 / (2 * h), at(n - 1) = 3.0 / (2 * h);
    } else {
        at(i - 1) = -1.0 / (2 * h), at(i + 1) = 1.0 / (2 * h);
    }
    return r;
}

std::vector<double> d4_row(int n, double h, int i) {
    static constexpr double c0[5] = {-25, 48, -36, 16, -3};
    static constexpr double c1[5] = {-3, -10, 18, -6, 1};
    static constexpr double ci[5] = {1, -8, 0, 8, -1};
    std::vector<double> r(static_cast<std::size_t>(n), 0.0);
    const double s = 1.0 / (12 * h);
    for (int k = 0; k < 5; ++k) {
        if (i == 0)
            r[static_cast<std::size_t>(k)] = c0[k] * s;
        else if (i == 1)
            r[static_cast<std::size_t>(k)] = c1[k] * s;
        else if (i == n - 1)
            r[static_cast<std::size_t>(n - 1 - k)] = -c0[k] * s;
        else if (i == n - 2)
            r[static_cast<std::size_t>(n - 1 - k)] = -c1[k] * s;
        else
            r[static_cast<std::size_t>(i - 2 + k)] = ci[k] * s;
    }
    return r;
}

}  // namespace

VelocityDerivative::VelocityDerivative(const PhaseGrid& grid, Kind kind)
    : n_(grid.n_v), start_(static_cast<std::size_t>(grid.n_v)), c_(static_cast<std::size_t>(grid.n_v)) {
    const double h = grid.dv;
    for (int i = 0; i < n_; ++i) {
        double theta = 0.0;
        switch (kind) {
            case Kind::second_order: theta = 0.0; break;
            case Kind::fourth_order: theta = 1.0; break;
            case Kind::blended: theta = 0.5 * (1.0 - std::tanh((std::abs(grid.v(i)) - blend_center) / blend_width)); break;
        }
        const auto r2 = d2_row(n_, h, i);
        const auto r4 = d4_row(n_, h, i);
        const int s = std::clamp(i - 2, 0, n_ - width);
        start_[static_cast<std::size_t>(i)] = s;
        for (int k = 0; k < width; ++k) {
            const auto j = static_cast<std::size_t>(s + k);
            c_[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] = theta * r4[j] + (1.0 - theta) * r2[j];
        }
    }
}

void VelocityDerivative::apply(int axis, const double* f, double* out) const {
    const std::size_t n = static_cast<std::size_t>(n_);
    const std::size_t stride = axis == 0 ? n * n : (axis == 1 ? n : 1);
    // Iterate over the two transverse indices; `base` is the line start.
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            std::size_t base;
            if (axis == 0)
                base = a * n + b;
            else if (axis == 1)
                base = a * n * n + b;
            else
                base = (a * n + b) * n;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& c = c_[i];
                const double* p = f + base + static_cast<std::size_t>(start_[i]) * stride;
                double s = 0.0;
                for (int k = 0; k < width; ++k) s += c[static_cast<std::size_t>(k)] * p[static_cast<std::size_t>(k) * stride];
                out[base + i * stride] = s;
            }
        }
}

void VelocityDerivative::apply_transpose_add(int axis, const double* f, double* out) const {
    const std::size_t n = static_cast<std::size_t>(n_);
    const std::size_t stride = axis == 0 ? n * n : (axis == 1 ? n : 1);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b) {
            std::size_t base;
            if (axis == 0)
                base = a * n + b;
            else if (axis == 1)
                base = a * n * n + b;
            else
                base = (a * n + b) * n;
            for (std::size_t i = 0; i < n; ++i) {
                const auto& c = c_[i];
                const double v = f[base + i * stride];
                double* p = out + base + static_cast<std::size_t>(start_[i]) * stride;
                for (int k = 0; k < width; ++k) p[static_cast<std::size_t>(k) * stride] += c[static_cast<std::size_t>(k)] * v;
            }
        }
}

Eigen::MatrixXd VelocityDerivative::matrix() const {
    Eigen::MatrixXd m = Eigen::MatrixXd::Zero(n_, n_);
    for (int i = 0; i < n_; ++i)
        for (int k = 0; k < width; ++k) m(i, start(i) + k) = coeff(i, k);
    return m;
}

}  // namespace vplk
