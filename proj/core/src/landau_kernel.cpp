#include "vplk/landau_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <mutex>
#include <random>

#include "fftw_plan.hpp"
#include "vplk/errors.hpp"
#include "vplk/parallel.hpp"

namespace vplk {

namespace {

constexpr double kSqrt2OverPi = 0.79788456080286535588;  // sqrt(2/pi)

// Fourier transform of Phi restricted to |z| < R: a(rho) I + b(rho) xi_hat xi_hat^T.
void truncated_transform(double rho, double R, double& a, double& b) {
    const double u = rho * R;
    if (u < 1.0) {
        // Series in u; first terms a = 4 pi R^2 / 3, b = 0.
        double sa = 0.0, sb = 0.0;
        double upow = 1.0;     // u^(2k-2)
        double fact = 6.0;     // (2k+1)!
        double sign = 1.0;     // (-1)^(k+1)
        for (int k = 1; k <= 14; ++k) {
            sa += sign * upow * (2.0 * k) / fact;
            if (k >= 2) sb -= sign * upow * (2.0 * k - 2.0) / fact;
            upow *= u * u;
            fact *= (2.0 * k + 2.0) * (2.0 * k + 3.0);
            sign = -sign;
        }
        a = 4.0 * M_PI * R * R * sa;
        b = 4.0 * M_PI * R * R * sb;
        return;
    }
    const double s = std::sin(u) / u;
    const double c = std::cos(u);
    a = 4.0 * M_PI / (rho * rho) * (s - c);
    b = 4.0 * M_PI / (rho * rho) * (2.0 - 3.0 * s + c);
}

int signed_index(int i, int n) { return i < n / 2 ? i : i - n; }

}  // namespace

Mat3 phi_matrix(const Vec3& z) {
    const double r = z.norm();
    if (r == 0.0) throw PreconditionError("phi_matrix: z = 0 is singular");
    const Vec3 zh = z / r;
    return (Mat3::Identity() - zh * zh.transpose()) / r;
}

SigmaEigen sigma_eigenvalues(double r) {
    r = std::abs(r);
    double h, e_over_r;
    if (r < 1.0) {
        // h = (erf(r/sqrt2) - r g)/r^3 and erf(r/sqrt2)/r as power series in -r^2/2.
        const double x = -0.5 * r * r;
        double term = 1.0, sh = 0.0, se = 0.0;
        for (int k = 0; k < 30; ++k) {
            sh += term / (2 * k + 3);
            se += term / (2 * k + 1);
            term *= x / (k + 1);
        }
        h = kSqrt2OverPi * sh;
        e_over_r = kSqrt2OverPi * se;
    } else {
        const double eps = std::erf(r / std::sqrt(2.0));
        const double g = kSqrt2OverPi * std::exp(-0.5 * r * r);
        h = (eps - r * g) / (r * r * r);
        e_over_r = eps / r;
    }
    return {2.0 * h, e_over_r - h};
}

Mat3 sigma_matrix(const Vec3& v) {
    const double r = v.norm();
    const auto ev = sigma_eigenvalues(r);
    if (r == 0.0) return ev.perpendicular * Mat3::Identity();
    const Vec3 vh = v / r;
    const Mat3 P = vh * vh.transpose();
    return ev.parallel * P + ev.perpendicular * (Mat3::Identity() - P);
}

// ---------------------------------------------------------------------------

struct KernelTable::Workspace::Impl {
    int n;
    std::size_t nreal, ncplx;
    detail::AlignedVector<double> pad;
    detail::AlignedVector<detail::cplx> ghat, tmp;
    std::array<detail::AlignedVector<detail::cplx>, 3> dghat;
    std::shared_ptr<const detail::Plan> fwd, bwd;

    explicit Impl(int n_)
        : n(n_),
          nreal(static_cast<std::size_t>(8) * n_ * n_ * n_),
          ncplx(static_cast<std::size_t>(4) * n_ * n_ * (n_ + 1)),
          pad(nreal),
          ghat(ncplx),
          tmp(ncplx),
          fwd(detail::get_plan(detail::r2c_3d(2 * n_, 2 * n_, 2 * n_))),
          bwd(detail::get_plan(detail::c2r_3d(2 * n_, 2 * n_, 2 * n_))) {
        for (auto& d : dghat) d.resize(ncplx);
    }

    void load(const double* g) {
        std::fill(pad.begin(), pad.end(), 0.0);
        const std::size_t m = static_cast<std::size_t>(n), M = 2 * m;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                std::copy(g + (i * m + j) * m, g + (i * m + j) * m + m, pad.data() + (i * M + j) * M);
    }

    void store(double* out) const {
        const std::size_t m = static_cast<std::size_t>(n), M = 2 * m;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = 0; j < m; ++j)
                std::copy(pad.data() + (i * M + j) * M, pad.data() + (i * M + j) * M + m, out + (i * m + j) * m);
    }
};

KernelTable::Workspace::Workspace(int n) : impl_(std::make_unique<Impl>(n)) {}
KernelTable::Workspace::~Workspace() = default;

KernelTable::KernelTable(const PhaseGrid& grid) : n_(grid.n_v), h_(grid.dv) {
    const int n = n_;
    const int N = 4 * n;
    const double L = n * h_;
    const double R = std::sqrt(3.0) * L;
    const double dk = 2.0 * M_PI / (4.0 * L);
    const std::size_t Nh = static_cast<std::size_t>(N / 2 + 1);
    const std::size_t nspec = static_cast<std::size_t>(N) * N * Nh;

    std::vector<double> a(nspec), b(nspec);
    std::vector<std::array<double, 3>> xh(nspec);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            for (std::size_t k = 0; k < Nh; ++k) {
                const std::size_t idx = (static_cast<std::size_t>(i) * N + j) * Nh + k;
                const double xi[3] = {dk * signed_index(i, N), dk * signed_index(j, N), dk * static_cast<double>(k)};
                const double rho = std::sqrt(xi[0] * xi[0] + xi[1] * xi[1] + xi[2] * xi[2]);
                truncated_transform(rho, R, a[idx], b[idx]);
                for (int d = 0; d < 3; ++d) xh[idx][static_cast<std::size_t>(d)] = rho > 0 ? xi[d] / rho : 0.0;
            }

    const auto inv_big = detail::get_plan(detail::c2r_3d(N, N, N));
    const auto fwd_small = detail::get_plan(detail::r2c_3d(2 * n, 2 * n, 2 * n));
    detail::AlignedVector<detail::cplx> spec(nspec);
    detail::AlignedVector<double> real(static_cast<std::size_t>(N) * N * N);
    const std::size_t M = static_cast<std::size_t>(2 * n);
    detail::AlignedVector<double> wrap(M * M * M);
    detail::AlignedVector<detail::cplx> wspec(M * M * (M / 2 + 1));
    const double invN3 = 1.0 / (static_cast<double>(N) * N * N);
    const double invM3 = 1.0 / static_cast<double>(M * M * M);

    for (int i = 0; i < 3; ++i)
        for (int j = i; j < 3; ++j) {
            const int c = sym_index(i, j);
            for (std::size_t idx = 0; idx < nspec; ++idx)
                spec[idx] = (i == j ? a[idx] : 0.0) + b[idx] * xh[idx][static_cast<std::size_t>(i)] * xh[idx][static_cast<std::size_t>(j)];
            inv_big->c2r(spec.data(), real.data());
            // Restrict to offsets |m| <= n-1 and wrap onto the doubled grid.
            std::fill(wrap.begin(), wrap.end(), 0.0);
            for (int m0 = -(n - 1); m0 <= n - 1; ++m0)
                for (int m1 = -(n - 1); m1 <= n - 1; ++m1)
                    for (int m2 = -(n - 1); m2 <= n - 1; ++m2) {
                        const auto src = (static_cast<std::size_t>((m0 + N) % N) * N + static_cast<std::size_t>((m1 + N) % N)) * N +
                                         static_cast<std::size_t>((m2 + N) % N);
                        const auto M_ = static_cast<int>(M);
                        const auto dst = (static_cast<std::size_t>((m0 + M_) % M_) * M + static_cast<std::size_t>((m1 + M_) % M_)) * M +
                                         static_cast<std::size_t>((m2 + M_) % M_);
                        wrap[dst] = real[src] * invN3;
                    }
            weights_[static_cast<std::size_t>(c)].assign(wrap.begin(), wrap.end());
            fwd_small->r2c(wrap.data(), wspec.data());
            auto& t = table_[static_cast<std::size_t>(c)];
            t.resize(wspec.size());
            // The weights are even in m, so the spectrum is real.
            for (std::size_t q = 0; q < wspec.size(); ++q) t[q] = wspec[q].real() * invM3;
        }
}

std::shared_ptr<const KernelTable> KernelTable::for_grid(const PhaseGrid& grid) {
    static std::mutex mtx;
    static std::map<std::pair<int, double>, std::shared_ptr<const KernelTable>> cache;
    std::lock_guard lock(mtx);
    auto key = std::make_pair(grid.n_v, grid.v_max);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto t = std::make_shared<const KernelTable>(grid);
    cache.emplace(key, t);
    return t;
}

double KernelTable::effective_weight(int component, int m0, int m1, int m2) const {
    const int M = 2 * n_;
    if (std::abs(m0) >= n_ || std::abs(m1) >= n_ || std::abs(m2) >= n_) return 0.0;
    const auto idx = (static_cast<std::size_t>((m0 + M) % M) * M + static_cast<std::size_t>((m1 + M) % M)) * M +
                     static_cast<std::size_t>((m2 + M) % M);
    return weights_[static_cast<std::size_t>(component)][idx];
}

void KernelTable::convolve(std::span<const double> g, const std::array<double*, 6>& mat, Workspace& ws) const {
    auto& w = *ws.impl_;
    w.load(g.data());
    w.fwd->r2c(w.pad.data(), w.ghat.data());
    for (std::size_t c = 0; c < 6; ++c) {
        const auto& t = table_[c];
        for (std::size_t q = 0; q < w.ncplx; ++q) w.tmp[q] = t[q] * w.ghat[q];
        w.bwd->c2r(w.tmp.data(), w.pad.data());
        w.store(mat[c]);
    }
}

void KernelTable::convolve_divergence(const std::array<const double*, 3>& dg, const std::array<double*, 3>& vec,
                                      Workspace& ws) const {
    auto& w = *ws.impl_;
    for (std::size_t k = 0; k < 3; ++k) {
        w.load(dg[k]);
        w.fwd->r2c(w.pad.data(), w.dghat[k].data());
    }
    for (int l = 0; l < 3; ++l) {
        const auto& t0 = table_[static_cast<std::size_t>(sym_index(0, l))];
        const auto& t1 = table_[static_cast<std::size_t>(sym_index(1, l))];
        const auto& t2 = table_[static_cast<std::size_t>(sym_index(2, l))];
        for (std::size_t q = 0; q < w.ncplx; ++q)
            w.tmp[q] = t0[q] * w.dghat[0][q] + t1[q] * w.dghat[1][q] + t2[q] * w.dghat[2][q];
        w.bwd->c2r(w.tmp.data(), w.pad.data());
        w.store(vec[static_cast<std::size_t>(l)]);
    }
}

// ---------------------------------------------------------------------------

CoeffField::CoeffField(const PhaseGrid& g) : grid(g) {
    for (auto& m : mat) m.assign(g.size(), 0.0);
    for (auto& v : vec) v.assign(g.size(), 0.0);
}

Mat3 CoeffField::matrix(std::size_t ix, std::size_t iv) const {
    const std::size_t p = ix * grid.nv_total() + iv;
    Mat3 m;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = mat[static_cast<std::size_t>(sym_index(i, j))][p];
    return m;
}

Vec3 CoeffField::vector(std::size_t ix, std::size_t iv) const {
    const std::size_t p = ix * grid.nv_total() + iv;
    return {vec[0][p], vec[1][p], vec[2][p]};
}

SliceCoeff::SliceCoeff(std::size_t nv) {
    for (auto& x : a) x.assign(nv, 0.0);
    for (auto& x : b) x.assign(nv, 0.0);
}

CoeffBuilder::CoeffBuilder(const PhaseGrid& grid)
    : grid_(grid), table_(KernelTable::for_grid(grid)), d_(grid), ws_(grid.n_v) {
    for (auto& x : dg_) x.assign(grid.nv_total(), 0.0);
}

void CoeffBuilder::build(std::span<const double> g, SliceCoeff& out, bool with_vec) {
    const std::size_t nv = grid_.nv_total();
    for (auto& x : out.a) x.resize(nv);
    for (auto& x : out.b) x.resize(nv);
    table_->convolve(g, {out.a[0].data(), out.a[1].data(), out.a[2].data(), out.a[3].data(), out.a[4].data(), out.a[5].data()},
                     ws_);
    if (!with_vec) return;
    for (int k = 0; k < 3; ++k) d_.apply(k, g.data(), dg_[static_cast<std::size_t>(k)].data());
    table_->convolve_divergence({dg_[0].data(), dg_[1].data(), dg_[2].data()},
                                {out.b[0].data(), out.b[1].data(), out.b[2].data()}, ws_);
}

bool x_independent(const DistField& f) {
    const auto& g = f.grid();
    const auto s0 = f.slice(0);
    for (std::size_t ix = 1; ix < g.nx_total(); ++ix) {
        const auto s = f.slice(ix);
        if (!std::equal(s.begin(), s.end(), s0.begin())) return false;
    }
    return true;
}

CoeffField convolve_phi(const DistField& G) {
    const auto& g = G.grid();
    CoeffField out(g);
    const std::size_t nv = g.nv_total();
    const bool uniform = x_independent(G);
    const std::size_t nslices = uniform ? 1 : g.nx_total();
    parallel_for(nslices, [&](std::size_t b, std::size_t e, int) {
        CoeffBuilder builder(g);
        SliceCoeff sc(nv);
        for (std::size_t ix = b; ix < e; ++ix) {
            builder.build(G.slice(ix), sc);
            for (std::size_t c = 0; c < 6; ++c) std::copy(sc.a[c].begin(), sc.a[c].end(), out.mat[c].begin() + ix * nv);
            for (std::size_t c = 0; c < 3; ++c) std::copy(sc.b[c].begin(), sc.b[c].end(), out.vec[c].begin() + ix * nv);
        }
    });
    if (uniform)
        for (std::size_t ix = 1; ix < g.nx_total(); ++ix) {
            for (std::size_t c = 0; c < 6; ++c) std::copy_n(out.mat[c].begin(), nv, out.mat[c].begin() + ix * nv);
            for (std::size_t c = 0; c < 3; ++c) std::copy_n(out.vec[c].begin(), nv, out.vec[c].begin() + ix * nv);
        }
    return out;
}

// ---------------------------------------------------------------------------

double lower_bound_expression(double mass, double weighted_l2) {
    const double q = weighted_l2 / mass;
    return mass / std::pow(1.0 + q * q, 8.5);
}

std::vector<Vec3> bound_directions(int random_count, std::uint64_t seed) {
    std::vector<Vec3> dirs = {Vec3::UnitX(), Vec3::UnitY(), Vec3::UnitZ()};
    for (double sy : {1.0, -1.0})
        for (double sz : {1.0, -1.0}) dirs.push_back(Vec3(1.0, sy, sz).normalized());
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    for (int i = 0; i < random_count; ++i) {
        Vec3 d;
        do {
            d = Vec3(nd(rng), nd(rng), nd(rng));
        } while (d.norm() < 1e-8);
        dirs.push_back(d.normalized());
    }
    return dirs;
}

BoundReport verify_bounds(const DistField& G, int sample_dirs, bool check_lower, std::uint64_t seed) {
    if (sample_dirs < 0) throw PreconditionError("verify_bounds: sample_dirs must be >= 0");
    const auto& g = G.grid();
    const std::size_t nv = g.nv_total();
    const bool uniform = x_independent(G);
    const std::size_t nslices = uniform ? 1 : g.nx_total();

    if (check_lower)
        for (std::size_t ix = 0; ix < nslices; ++ix) {
            const auto s = G.slice(ix);
            if (std::any_of(s.begin(), s.end(), [](double x) { return x < 0.0; }))
                throw PreconditionError("verify_bounds: lower bound requires G >= 0");
            if (!(v_integral(g, s) > 0.0)) throw PreconditionError("verify_bounds: lower bound requires positive mass");
        }

    const auto dirs = bound_directions(sample_dirs, seed);
    std::vector<Mat3> sig(nv);
    for (std::size_t iv = 0; iv < nv; ++iv) sig[iv] = sigma_matrix(g.v3(iv));

    BoundReport rep;
    rep.lower_checked = check_lower;
    rep.c_upper = -std::numeric_limits<double>::infinity();
    rep.c_lower = std::numeric_limits<double>::infinity();
    rep.upper_constant = -std::numeric_limits<double>::infinity();
    rep.lower_constant = std::numeric_limits<double>::infinity();

    CoeffBuilder builder(g);
    SliceCoeff sc(nv);
    for (std::size_t ix = 0; ix < nslices; ++ix) {
        const auto s = G.slice(ix);
        builder.build(s, sc, false);
        double mass = 0.0, w2 = 0.0, w5 = 0.0;
        for (std::size_t iv = 0; iv < nv; ++iv) {
            const double jap2 = 1.0 + g.v3(iv).squaredNorm();
            mass += s[iv];
            w2 += jap2 * jap2 * s[iv] * s[iv];
            w5 += std::pow(jap2, 5) * s[iv] * s[iv];
        }
        mass *= g.wv();
        w2 = std::sqrt(w2 * g.wv());
        w5 = std::sqrt(w5 * g.wv());

        double up = -std::numeric_limits<double>::infinity(), lo = std::numeric_limits<double>::infinity();
        for (std::size_t iv = 0; iv < nv; ++iv) {
            Mat3 A;
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j) A(i, j) = sc.a[static_cast<std::size_t>(sym_index(i, j))][iv];
            for (const auto& d : dirs) {
                const double r = d.dot(A * d) / d.dot(sig[iv] * d);
                if (r > up) up = r;
                if (r > rep.c_upper) rep.c_upper = r, rep.upper_v = g.v3(iv), rep.upper_dir = d;
                if (r < lo) lo = r;
                if (r < rep.c_lower) rep.c_lower = r, rep.lower_v = g.v3(iv), rep.lower_dir = d;
            }
        }
        const double uc = w5 > 0.0 ? up / w5 : 0.0;
        if (uc > rep.upper_constant) rep.upper_constant = uc, rep.weighted5_l2 = w5;
        if (check_lower) {
            const double lc = lo / lower_bound_expression(mass, w2);
            if (lc < rep.lower_constant) rep.lower_constant = lc, rep.mass = mass, rep.weighted_l2 = w2;
        } else if (ix == 0) {
            rep.mass = mass;
            rep.weighted_l2 = w2;
        }
    }
    if (!check_lower) rep.lower_constant = 0.0;
    return rep;
}

}  // namespace vplk
