#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include "vplk/phase_space.hpp"
#include "vplk/stencil.hpp"

namespace vplk {

// (1/|z|)(I - z z^T/|z|^2); throws PreconditionError for z = 0.
Mat3 phi_matrix(const Vec3& z);

// Eigenvalues of sigma = Phi * mu at |v| = r: `parallel` along v, `perpendicular` (double) across.
struct SigmaEigen {
    double parallel;
    double perpendicular;
};
SigmaEigen sigma_eigenvalues(double r);

// sigma(v) = (Phi * mu)(v) for the standard Maxwellian, by exact radial reduction.
Mat3 sigma_matrix(const Vec3& v);

// Symmetric component order used by tables and coefficient fields: xx, xy, xz, yy, yz, zz.
constexpr int sym_index(int i, int j) {
    if (i > j) return sym_index(j, i);
    return i == 0 ? j : (i == 1 ? 2 + j : 5);
}

// Fourier table of the six kernel components on the doubled (2 n_v)^3 grid.
// The kernel is the band-limited version of Phi truncated at radius
// sqrt(3) * 2 v_max, whose Fourier transform is known in closed form; this makes
// the discrete convolution spectrally accurate for smooth G despite the 1/|z|
// singularity.
class KernelTable {
public:
    explicit KernelTable(const PhaseGrid& grid);

    // Shared instance per (n_v, v_max).
    static std::shared_ptr<const KernelTable> for_grid(const PhaseGrid& grid);

    int n() const { return n_; }
    double h() const { return h_; }

    // Real-space kernel weight (times dv^3) at integer offset m, |m_i| <= n - 1.
    double effective_weight(int component, int m0, int m1, int m2) const;

    class Workspace {
    public:
        explicit Workspace(int n);
        ~Workspace();
        Workspace(const Workspace&) = delete;
        Workspace& operator=(const Workspace&) = delete;

    private:
        friend class KernelTable;
        struct Impl;
        std::unique_ptr<Impl> impl_;
    };

    // mat[c] = (Phi_c * g) on the n^3 slice.
    void convolve(std::span<const double> g, const std::array<double*, 6>& mat, Workspace& ws) const;
    // vec[l] = sum_k (Phi_kl * dg[k]).
    void convolve_divergence(const std::array<const double*, 3>& dg, const std::array<double*, 3>& vec,
                             Workspace& ws) const;

private:
    int n_;
    double h_;
    std::array<std::vector<double>, 6> table_;   // real-valued spectra, (2n)^2 (n+1)
    std::array<std::vector<double>, 6> weights_; // real-space weights, (2n)^3 wrap-around
};

// Per-point coefficient fields A = Phi * G and b = sum_i Phi_ij * D_i G.
struct CoeffField {
    PhaseGrid grid;
    std::array<std::vector<double>, 6> mat;
    std::array<std::vector<double>, 3> vec;

    explicit CoeffField(const PhaseGrid& g);
    Mat3 matrix(std::size_t ix, std::size_t iv) const;
    Vec3 vector(std::size_t ix, std::size_t iv) const;
};

// Coefficients for one velocity slice.
struct SliceCoeff {
    std::array<std::vector<double>, 6> a;
    std::array<std::vector<double>, 3> b;
    explicit SliceCoeff(std::size_t nv = 0);
};

class CoeffBuilder {
public:
    explicit CoeffBuilder(const PhaseGrid& grid);
    void build(std::span<const double> g, SliceCoeff& out, bool with_vec = true);
    const VelocityDerivative& derivative() const { return d_; }

private:
    PhaseGrid grid_;
    std::shared_ptr<const KernelTable> table_;
    VelocityDerivative d_;
    KernelTable::Workspace ws_;
    std::array<std::vector<double>, 3> dg_;
};

CoeffField convolve_phi(const DistField& G);

// True when every x-slice equals slice 0 bitwise.
bool x_independent(const DistField& f);

struct BoundReport {
    double c_upper = 0.0;  // max over (x, v, nu) of nu^T (Phi*G) nu / nu^T sigma nu
    double c_lower = 0.0;  // min of the same ratio
    Vec3 upper_v = Vec3::Zero(), upper_dir = Vec3::Zero();
    Vec3 lower_v = Vec3::Zero(), lower_dir = Vec3::Zero();
    double mass = 0.0;         // ||G||_{L^1_v} (slice attaining lower_constant)
    double weighted_l2 = 0.0;  // ||<v>^2 G||_{L^2_v} (same slice)
    double weighted5_l2 = 0.0; // ||<v>^5 G||_{L^2_v} (slice attaining upper_constant)
    double upper_constant = 0.0;  // max_x c_upper(x) / ||<v>^5 G(x)||
    double lower_constant = 0.0;  // min_x c_lower(x) / lower_bound_expression(x)
    bool lower_checked = false;
};

// ||G||_1 / <||<v>^2 G||_2 / ||G||_1>^17
double lower_bound_expression(double mass, double weighted_l2);

// Axes, the four main diagonals, then `random_count` seeded uniform directions.
std::vector<Vec3> bound_directions(int random_count, std::uint64_t seed);

BoundReport verify_bounds(const DistField& G, int sample_dirs, bool check_lower = true, std::uint64_t seed = 20240917);

}  // namespace vplk
