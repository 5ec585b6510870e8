#include "vplk/norms.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "fftw_plan.hpp"
#include "spectral_x.hpp"
#include "vplk/errors.hpp"
#include "vplk/fft.hpp"
#include "vplk/landau_kernel.hpp"
#include "vplk/parallel.hpp"
#include "vplk/stencil.hpp"

namespace vplk {

void NormParams::validate() const {
    if (!(s > 2.5 && s <= 3.0)) throw PreconditionError("norm.s must lie in (5/2, 3]");
    if (!(r > 0.0 && r <= 1.0)) throw PreconditionError("norm.r must lie in (0, 1]");
    if (!(m0 >= 0.0)) throw PreconditionError("norm.m0 must be >= 0");
    if (!(m1 >= 5.0)) throw PreconditionError("norm.m1 must be >= 5");
    if (!(m1 + 1.5 * s <= m2)) throw PreconditionError("norm.m2 must be >= m1 + 3/2 s");
}

namespace {

using detail::x_dims;
using detail::x_k2;

// Per-grid cache of sigma at the v nodes.
std::shared_ptr<const std::vector<Mat3>> sigma_nodes(const PhaseGrid& g) {
    static std::mutex mtx;
    static std::map<std::pair<int, double>, std::shared_ptr<const std::vector<Mat3>>> cache;
    std::lock_guard lock(mtx);
    auto key = std::make_pair(g.n_v, g.v_max);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    auto s = std::make_shared<std::vector<Mat3>>(g.nv_total());
    for (std::size_t iv = 0; iv < g.nv_total(); ++iv) (*s)[iv] = sigma_matrix(g.v3(iv));
    cache.emplace(key, s);
    return s;
}

std::vector<double> japanese_pow(const PhaseGrid& g, double m) {
    std::vector<double> w(g.nv_total());
    for (std::size_t iv = 0; iv < w.size(); ++iv) w[iv] = std::pow(1.0 + g.v3(iv).squaredNorm(), 0.5 * m);
    return w;
}

}  // namespace

DistField bessel_x(const DistField& u, double s) {
    const auto& g = u.grid();
    if (s == 0.0) return u;
    const int nv = static_cast<int>(g.nv_total());
    const std::size_t nh = detail::x_half_size(g);
    std::vector<cplx> hat(nh * static_cast<std::size_t>(nv));
    detail::get_plan({0, x_dims(g), nv, nv, 1, nv, 1})->r2c(u.values().data(), hat.data());
    const double inv = 1.0 / static_cast<double>(g.nx_total());
    for (std::size_t q = 0; q < nh; ++q) {
        const double mult = std::pow(1.0 + x_k2(g, q), 0.5 * s) * inv;
        for (std::size_t iv = 0; iv < static_cast<std::size_t>(nv); ++iv) hat[q * static_cast<std::size_t>(nv) + iv] *= mult;
    }
    DistField out(g);
    detail::get_plan({1, x_dims(g), nv, nv, 1, nv, 1})->c2r(hat.data(), out.values().data());
    return out;
}

SpatialField bessel_x(const SpatialField& u, double s) {
    const auto& g = u.grid();
    const std::size_t nh = detail::x_half_size(g);
    std::vector<cplx> hat(nh);
    detail::get_plan({0, x_dims(g), 1, 1, 0, 1, 0})->r2c(u.values().data(), hat.data());
    const double inv = 1.0 / static_cast<double>(g.nx_total());
    for (std::size_t q = 0; q < nh; ++q) hat[q] *= std::pow(1.0 + x_k2(g, q), 0.5 * s) * inv;
    SpatialField out(g);
    detail::get_plan({1, x_dims(g), 1, 1, 0, 1, 0})->c2r(hat.data(), out.values().data());
    return out;
}

double hs_norm(const SpatialField& u, double s) {
    const auto b = bessel_x(u, s);
    double sum = 0.0;
    for (double x : b.values()) sum += x * x;
    return std::sqrt(sum * u.grid().wx());
}

std::vector<double> bessel_v(const PhaseGrid& g, std::span<const double> u, double r) {
    std::vector<double> out(u.begin(), u.end());
    if (r == 0.0) return out;
    const int n = g.n_v;
    const std::size_t nh = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    std::vector<cplx> hat(nh);
    detail::get_plan(detail::r2c_3d(n, n, n))->r2c(u.data(), hat.data());
    const double inv = 1.0 / static_cast<double>(g.nv_total());
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k <= n / 2; ++k) {
                const double k2 = std::pow(v_wavenumber(g, i), 2) + std::pow(v_wavenumber(g, j), 2) + std::pow(v_wavenumber(g, k), 2);
                hat[(static_cast<std::size_t>(i) * n + j) * (n / 2 + 1) + k] *= std::pow(1.0 + k2, 0.5 * r) * inv;
            }
    detail::get_plan(detail::c2r_3d(n, n, n))->c2r(hat.data(), out.data());
    return out;
}

DistField bessel_v(const DistField& u, double r) {
    const auto& g = u.grid();
    DistField out(g);
    parallel_for(g.nx_total(), [&](std::size_t b, std::size_t e, int) {
        for (std::size_t ix = b; ix < e; ++ix) {
            const auto s = bessel_v(g, u.slice(ix), r);
            std::copy(s.begin(), s.end(), out.slice(ix).begin());
        }
    });
    return out;
}

double h_sigma_seminorm(const PhaseGrid& g, std::span<const double> psi) {
    if (psi.size() != g.nv_total()) throw PreconditionError("h_sigma_seminorm: size mismatch");
    const auto sig = sigma_nodes(g);
    const VelocityDerivative D(g, VelocityDerivative::Kind::second_order);
    const std::size_t nv = g.nv_total();
    std::array<std::vector<double>, 3> grad;
    for (int k = 0; k < 3; ++k) {
        grad[static_cast<std::size_t>(k)].resize(nv);
        D.apply(k, psi.data(), grad[static_cast<std::size_t>(k)].data());
    }
    double s = 0.0;
    for (std::size_t iv = 0; iv < nv; ++iv) {
        const Vec3 d(grad[0][iv], grad[1][iv], grad[2][iv]);
        s += d.dot((*sig)[iv] * d);
    }
    return s * g.wv();
}

double weighted_l2(const DistField& u, double m) {
    const auto& g = u.grid();
    const auto w = japanese_pow(g, m);
    const std::size_t nv = g.nv_total();
    double s = 0.0;
    for (std::size_t ix = 0; ix < g.nx_total(); ++ix) {
        const auto sl = u.slice(ix);
        for (std::size_t iv = 0; iv < nv; ++iv) s += std::pow(w[iv] * sl[iv], 2);
    }
    return std::sqrt(s * g.wv() * g.wx());
}

namespace {

// x-integrated H_sigma seminorm (squared) of <v>^m u.
double weighted_h_sigma2(const DistField& u, double m) {
    const auto& g = u.grid();
    const auto w = japanese_pow(g, m);
    const std::size_t nv = g.nv_total();
    const bool uniform = x_independent(u);
    const std::size_t nslices = uniform ? 1 : g.nx_total();
    std::vector<double> per(nslices);
    parallel_for(nslices, [&](std::size_t b, std::size_t e, int) {
        std::vector<double> tmp(nv);
        for (std::size_t ix = b; ix < e; ++ix) {
            const auto sl = u.slice(ix);
            for (std::size_t iv = 0; iv < nv; ++iv) tmp[iv] = w[iv] * sl[iv];
            per[ix] = h_sigma_seminorm(g, tmp);
        }
    });
    double s = 0.0;
    for (double x : per) s += x;
    if (uniform) s *= static_cast<double>(g.nx_total());
    return s * g.wx();
}

}  // namespace

NormReport norm_report(const DistField& u, const NormParams& p) {
    const DistField ux = bessel_x(u, p.s);
    const DistField uv = bessel_v(u, p.r);
    NormReport rep;
    rep.e_terms = {weighted_l2(u, p.m2), weighted_l2(ux, p.m1), weighted_l2(uv, 0.0)};
    rep.e_prime_terms = {weighted_l2(u, p.m1), weighted_l2(ux, p.m0)};
    rep.d_terms = {std::sqrt(weighted_h_sigma2(u, p.m2)), std::sqrt(weighted_h_sigma2(ux, p.m1)),
                   std::sqrt(weighted_h_sigma2(uv, 0.0))};
    rep.d_prime_terms = {std::sqrt(weighted_h_sigma2(u, p.m1)), std::sqrt(weighted_h_sigma2(ux, p.m0))};
    auto hyp = [](const auto& t) {
        double s = 0.0;
        for (double x : t) s += x * x;
        return std::sqrt(s);
    };
    rep.e = hyp(rep.e_terms);
    rep.d = hyp(rep.d_terms);
    rep.e_prime = hyp(rep.e_prime_terms);
    rep.d_prime = hyp(rep.d_prime_terms);
    return rep;
}

double e_norm(const DistField& u, const NormParams& p) {
    const DistField ux = bessel_x(u, p.s);
    return std::hypot(weighted_l2(u, p.m2), weighted_l2(ux, p.m1), weighted_l2(bessel_v(u, p.r), 0.0));
}

double e_prime_norm(const DistField& u, const NormParams& p) {
    return std::hypot(weighted_l2(u, p.m1), weighted_l2(bessel_x(u, p.s), p.m0));
}

CommutatorSides commutator_check(const PhaseGrid& g, std::span<const double> u1, std::span<const double> u2, double m,
                                 double r) {
    if (!(m >= 0.0)) throw PreconditionError("commutator_check: m must be >= 0");
    if (!(r > 0.0 && r <= 1.0)) throw PreconditionError("commutator_check: r must lie in (0, 1]");
    const std::size_t nv = g.nv_total();
    if (u1.size() != nv || u2.size() != nv) throw PreconditionError("commutator_check: size mismatch");
    const auto w = japanese_pow(g, m);
    std::vector<double> prod(nv);
    for (std::size_t i = 0; i < nv; ++i) prod[i] = u1[i] * u2[i];
    const auto bp = bessel_v(g, prod, r);
    const auto b2 = bessel_v(g, u2, r);
    double lhs = 0.0, wu2 = 0.0, nu2 = 0.0;
    for (std::size_t i = 0; i < nv; ++i) {
        lhs += std::pow(w[i] * (bp[i] - u1[i] * b2[i]), 2);
        wu2 += std::pow(w[i] * u2[i], 2);
        nu2 += u2[i] * u2[i];
    }
    const auto b1 = bessel_v(g, u1, r + 1.5);
    double n1 = 0.0;
    for (double x : b1) n1 += x * x;

    // FL^1 of <grad>^r u1: sum of |Fourier coefficients| over the full spectrum.
    const int n = g.n_v;
    const std::size_t nh = static_cast<std::size_t>(n) * n * (n / 2 + 1);
    std::vector<cplx> hat(nh);
    detail::get_plan(detail::r2c_3d(n, n, n))->r2c(u1.data(), hat.data());
    double fl1 = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k <= n / 2; ++k) {
                const double k2 = std::pow(v_wavenumber(g, i), 2) + std::pow(v_wavenumber(g, j), 2) + std::pow(v_wavenumber(g, k), 2);
                // Entries 1..n/2-1 of the last axis stand for two conjugate coefficients.
                const double mult = (k == 0 || k == n / 2) ? 1.0 : 2.0;
                fl1 += mult * std::abs(hat[(static_cast<std::size_t>(i) * n + j) * (n / 2 + 1) + static_cast<std::size_t>(k)]) *
                       std::pow(1.0 + k2, 0.5 * r);
            }
    fl1 /= static_cast<double>(nv);

    const double wv = g.wv();
    return {std::sqrt(lhs * wv), fl1 * std::sqrt(wu2 * wv), std::sqrt(n1 * wv) * std::sqrt(nu2 * wv)};
}

}  // namespace vplk
