#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace vplk {

using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

// Periodic unit torus in x (dim_x axes) times the cell-centred box [-v_max, v_max)^3 in v.
struct PhaseGrid {
    int dim_x = 1;
    int n_x = 8;
    int n_v = 8;
    double v_max = 1.0;
    double dx = 0.125;
    double dv = 0.25;

    std::size_t nx_total() const;  // n_x^dim_x
    std::size_t nv_total() const { return static_cast<std::size_t>(n_v) * n_v * n_v; }
    std::size_t size() const { return nx_total() * nv_total(); }

    double v(int j) const { return -v_max + (j + 0.5) * dv; }
    Vec3 v3(std::size_t iv) const;
    // First dim_x coordinates of the spatial point; the rest are zero.
    Vec3 x3(std::size_t ix) const;
    std::array<int, 3> x_index(std::size_t ix) const;

    double wx() const;  // dx^dim_x
    double wv() const { return dv * dv * dv; }

    bool operator==(const PhaseGrid& o) const {
        return dim_x == o.dim_x && n_x == o.n_x && n_v == o.n_v && v_max == o.v_max;
    }
};

PhaseGrid make_grid(int dim_x, int n_x, int n_v, double v_max);

// Throws PreconditionError unless both grids are equal.
void require_same_grid(const PhaseGrid& a, const PhaseGrid& b, const char* what);

// F(x, v); storage is x-outer, v-inner, v index (i*n_v + j)*n_v + k.
class DistField {
public:
    DistField() = default;
    explicit DistField(const PhaseGrid& grid);
    DistField(const PhaseGrid& grid, std::vector<double> values);

    const PhaseGrid& grid() const { return grid_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }

    std::span<double> slice(std::size_t ix);
    std::span<const double> slice(std::size_t ix) const;

    double& operator()(std::size_t ix, std::size_t iv) { return values_[ix * grid_.nv_total() + iv]; }
    double operator()(std::size_t ix, std::size_t iv) const { return values_[ix * grid_.nv_total() + iv]; }

    bool nonnegative() const { return nonneg_; }
    void set_nonnegative(bool flag) { nonneg_ = flag; }

    double min() const;
    double max() const;
    bool all_finite() const;

    DistField& operator+=(const DistField& o);
    DistField& operator-=(const DistField& o);
    DistField& operator*=(double a);

private:
    PhaseGrid grid_{};
    std::vector<double> values_;
    bool nonneg_ = false;
};

DistField operator+(DistField a, const DistField& b);
DistField operator-(DistField a, const DistField& b);
DistField operator*(double a, DistField f);

class SpatialField {
public:
    SpatialField() = default;
    explicit SpatialField(const PhaseGrid& grid, double fill = 0.0);
    SpatialField(const PhaseGrid& grid, std::vector<double> values);

    const PhaseGrid& grid() const { return grid_; }
    std::vector<double>& values() { return values_; }
    const std::vector<double>& values() const { return values_; }
    std::size_t size() const { return values_.size(); }
    double& operator[](std::size_t i) { return values_[i]; }
    double operator[](std::size_t i) const { return values_[i]; }

    double min() const;
    double max() const;
    double integral() const;  // sum * dx^dim_x

    SpatialField& operator+=(const SpatialField& o);
    SpatialField& operator-=(const SpatialField& o);
    SpatialField& operator*=(double a);

private:
    PhaseGrid grid_{};
    std::vector<double> values_;
};

SpatialField operator+(SpatialField a, const SpatialField& b);
SpatialField operator-(SpatialField a, const SpatialField& b);
SpatialField operator*(double a, SpatialField f);

DistField maxwellian(const PhaseGrid& grid, double density, const Vec3& mean, double temperature);

// Largest |F| on the outer layer of the v-box relative to max|F|.
double boundary_fraction(const DistField& f);

struct Moments {
    SpatialField mass;
    std::array<SpatialField, 3> momentum;
    double kinetic_energy = 0.0;  // x- and v-integrated |v|^2/2 F
};

Moments moments(const DistField& f);

// v-quadrature of a single slice.
double v_integral(const PhaseGrid& grid, std::span<const double> g);

}  // namespace vplk
