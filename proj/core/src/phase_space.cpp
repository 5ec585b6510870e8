#include "vplk/phase_space.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "vplk/errors.hpp"

namespace vplk {

namespace {
bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }
}  // namespace

std::size_t PhaseGrid::nx_total() const {
    std::size_t n = 1;
    for (int d = 0; d < dim_x; ++d) n *= static_cast<std::size_t>(n_x);
    return n;
}

Vec3 PhaseGrid::v3(std::size_t iv) const {
    const auto n = static_cast<std::size_t>(n_v);
    return {v(static_cast<int>(iv / (n * n))), v(static_cast<int>((iv / n) % n)), v(static_cast<int>(iv % n))};
}

std::array<int, 3> PhaseGrid::x_index(std::size_t ix) const {
    std::array<int, 3> idx{0, 0, 0};
    const auto n = static_cast<std::size_t>(n_x);
    for (int d = dim_x - 1; d >= 0; --d) {
        idx[static_cast<std::size_t>(d)] = static_cast<int>(ix % n);
        ix /= n;
    }
    return idx;
}

Vec3 PhaseGrid::x3(std::size_t ix) const {
    const auto idx = x_index(ix);
    return {idx[0] * dx, idx[1] * dx, idx[2] * dx};
}

double PhaseGrid::wx() const { return std::pow(dx, dim_x); }

PhaseGrid make_grid(int dim_x, int n_x, int n_v, double v_max) {
    if (dim_x < 1 || dim_x > 3) throw PreconditionError("dim_x must be 1, 2 or 3");
    if (!is_pow2(n_x) || n_x < 8) throw PreconditionError("n_x must be a power of two >= 8");
    if (!is_pow2(n_v) || n_v < 8) throw PreconditionError("n_v must be a power of two >= 8");
    if (!(v_max > 0.0) || !std::isfinite(v_max)) throw PreconditionError("v_max must be positive");
    PhaseGrid g;
    g.dim_x = dim_x;
    g.n_x = n_x;
    g.n_v = n_v;
    g.v_max = v_max;
    g.dx = 1.0 / n_x;
    g.dv = 2.0 * v_max / n_v;
    return g;
}

void require_same_grid(const PhaseGrid& a, const PhaseGrid& b, const char* what) {
    if (!(a == b)) throw PreconditionError(std::string(what) + ": grid mismatch");
}

DistField::DistField(const PhaseGrid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

DistField::DistField(const PhaseGrid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw PreconditionError("DistField: value count does not match grid");
}

std::span<double> DistField::slice(std::size_t ix) {
    return {values_.data() + ix * grid_.nv_total(), grid_.nv_total()};
}

std::span<const double> DistField::slice(std::size_t ix) const {
    return {values_.data() + ix * grid_.nv_total(), grid_.nv_total()};
}

double DistField::min() const { return values_.empty() ? 0.0 : *std::min_element(values_.begin(), values_.end()); }
double DistField::max() const { return values_.empty() ? 0.0 : *std::max_element(values_.begin(), values_.end()); }

bool DistField::all_finite() const {
    return std::all_of(values_.begin(), values_.end(), [](double x) { return std::isfinite(x); });
}

DistField& DistField::operator+=(const DistField& o) {
    require_same_grid(grid_, o.grid_, "DistField +=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    nonneg_ = nonneg_ && o.nonneg_;
    return *this;
}

DistField& DistField::operator-=(const DistField& o) {
    require_same_grid(grid_, o.grid_, "DistField -=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    nonneg_ = false;
    return *this;
}

DistField& DistField::operator*=(double a) {
    for (auto& x : values_) x *= a;
    nonneg_ = nonneg_ && a >= 0.0;
    return *this;
}

DistField operator+(DistField a, const DistField& b) { return a += b; }
DistField operator-(DistField a, const DistField& b) { return a -= b; }
DistField operator*(double a, DistField f) { return f *= a; }

SpatialField::SpatialField(const PhaseGrid& grid, double fill) : grid_(grid), values_(grid.nx_total(), fill) {}

SpatialField::SpatialField(const PhaseGrid& grid, std::vector<double> values) : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.nx_total()) throw PreconditionError("SpatialField: value count does not match grid");
}

double SpatialField::min() const { return *std::min_element(values_.begin(), values_.end()); }
double SpatialField::max() const { return *std::max_element(values_.begin(), values_.end()); }

double SpatialField::integral() const {
    double s = 0.0;
    for (double x : values_) s += x;
    return s * grid_.wx();
}

SpatialField& SpatialField::operator+=(const SpatialField& o) {
    require_same_grid(grid_, o.grid_, "SpatialField +=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += o.values_[i];
    return *this;
}

SpatialField& SpatialField::operator-=(const SpatialField& o) {
    require_same_grid(grid_, o.grid_, "SpatialField -=");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= o.values_[i];
    return *this;
}

SpatialField& SpatialField::operator*=(double a) {
    for (auto& x : values_) x *= a;
    return *this;
}

SpatialField operator+(SpatialField a, const SpatialField& b) { return a += b; }
SpatialField operator-(SpatialField a, const SpatialField& b) { return a -= b; }
SpatialField operator*(double a, SpatialField f) { return f *= a; }

double boundary_fraction(const DistField& f) {
    const auto& g = f.grid();
    const int n = g.n_v;
    double peak = 0.0, edge = 0.0;
    for (std::size_t ix = 0; ix < g.nx_total(); ++ix) {
        auto s = f.slice(ix);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k) {
                    const double a = std::abs(s[(static_cast<std::size_t>(i) * n + j) * n + k]);
                    peak = std::max(peak, a);
                    if (i == 0 || j == 0 || k == 0 || i == n - 1 || j == n - 1 || k == n - 1) edge = std::max(edge, a);
                }
    }
    return peak > 0.0 ? edge / peak : 0.0;
}

DistField maxwellian(const PhaseGrid& grid, double density, const Vec3& mean, double temperature) {
    if (!(density > 0.0)) throw PreconditionError("maxwellian: density must be positive");
    if (!(temperature > 0.0)) throw PreconditionError("maxwellian: temperature must be positive");
    DistField f(grid);
    const double c = density * std::pow(2.0 * M_PI * temperature, -1.5);
    const std::size_t nv = grid.nv_total();
    std::vector<double> slice(nv);
    for (std::size_t iv = 0; iv < nv; ++iv) {
        const Vec3 d = grid.v3(iv) - mean;
        slice[iv] = c * std::exp(-d.squaredNorm() / (2.0 * temperature));
    }
    for (std::size_t ix = 0; ix < grid.nx_total(); ++ix) std::copy(slice.begin(), slice.end(), f.slice(ix).begin());
    f.set_nonnegative(true);
    const double frac = boundary_fraction(f);
    if (frac > 1e-10) {
        std::ostringstream os;
        os << "maxwellian: boundary values reach " << frac << " of the maximum";
        warn(os.str());
    }
    return f;
}

double v_integral(const PhaseGrid& grid, std::span<const double> g) {
    double s = 0.0;
    for (double x : g) s += x;
    return s * grid.wv();
}

Moments moments(const DistField& f) {
    const auto& g = f.grid();
    Moments m{SpatialField(g), {SpatialField(g), SpatialField(g), SpatialField(g)}, 0.0};
    const std::size_t nv = g.nv_total();
    std::vector<Vec3> vs(nv);
    for (std::size_t iv = 0; iv < nv; ++iv) vs[iv] = g.v3(iv);
    double kin = 0.0;
    for (std::size_t ix = 0; ix < g.nx_total(); ++ix) {
        auto s = f.slice(ix);
        double mass = 0.0, e = 0.0;
        Vec3 p = Vec3::Zero();
        for (std::size_t iv = 0; iv < nv; ++iv) {
            mass += s[iv];
            p += s[iv] * vs[iv];
            e += 0.5 * vs[iv].squaredNorm() * s[iv];
        }
        m.mass[ix] = mass * g.wv();
        for (int d = 0; d < 3; ++d) m.momentum[static_cast<std::size_t>(d)][ix] = p[d] * g.wv();
        kin += e;
    }
    m.kinetic_energy = kin * g.wv() * g.wx();
    return m;
}

}  // namespace vplk
