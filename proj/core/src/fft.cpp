#include "vplk/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <map>
#include <mutex>
#include <new>

#include "fftw_plan.hpp"

namespace vplk {
namespace detail {

namespace {
std::mutex g_plan_mutex;
std::map<PlanKey, std::shared_ptr<const Plan>> g_plans;

std::size_t product(const std::vector<int>& d) {
    std::size_t p = 1;
    for (int x : d) p *= static_cast<std::size_t>(x);
    return p;
}
std::size_t half_product(const std::vector<int>& d) {
    std::size_t p = 1;
    for (std::size_t i = 0; i + 1 < d.size(); ++i) p *= static_cast<std::size_t>(d[i]);
    return p * static_cast<std::size_t>(d.back() / 2 + 1);
}
}  // namespace

void* fftw_alloc_bytes(std::size_t bytes) {
    void* p = fftw_malloc(std::max<std::size_t>(bytes, 16));
    if (!p) throw std::bad_alloc();
    return p;
}

void fftw_free_bytes(void* p) noexcept { fftw_free(p); }

Plan::Plan(const PlanKey& key) : key_(key) {
    const int rank = static_cast<int>(key.dims.size());
    const std::size_t nreal = product(key.dims);
    const std::size_t ncplx = half_product(key.dims);
    const std::size_t extent_in = (key.howmany - 1) * static_cast<std::size_t>(key.idist) + 1;
    const std::size_t extent_out = (key.howmany - 1) * static_cast<std::size_t>(key.odist) + 1;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = nullptr;
    // FFTW_ESTIMATE does not touch the arrays, but they must be large enough to describe the layout.
    if (key.kind == 0) {
        auto* in = static_cast<double*>(fftw_alloc_bytes(sizeof(double) * (nreal * key.istride + extent_in)));
        auto* out = static_cast<fftw_complex*>(fftw_alloc_bytes(sizeof(fftw_complex) * (ncplx * key.ostride + extent_out)));
        p = fftw_plan_many_dft_r2c(rank, key.dims.data(), key.howmany, in, nullptr, key.istride, key.idist, out, nullptr,
                                   key.ostride, key.odist, flags);
        fftw_free(in);
        fftw_free(out);
    } else if (key.kind == 1) {
        auto* in = static_cast<fftw_complex*>(fftw_alloc_bytes(sizeof(fftw_complex) * (ncplx * key.istride + extent_in)));
        auto* out = static_cast<double*>(fftw_alloc_bytes(sizeof(double) * (nreal * key.ostride + extent_out)));
        p = fftw_plan_many_dft_c2r(rank, key.dims.data(), key.howmany, in, nullptr, key.istride, key.idist, out, nullptr,
                                   key.ostride, key.odist, flags);
        fftw_free(in);
        fftw_free(out);
    } else {
        auto* in = static_cast<fftw_complex*>(fftw_alloc_bytes(sizeof(fftw_complex) * (nreal * key.istride + extent_in)));
        auto* out = static_cast<fftw_complex*>(fftw_alloc_bytes(sizeof(fftw_complex) * (nreal * key.ostride + extent_out)));
        p = fftw_plan_many_dft(rank, key.dims.data(), key.howmany, in, nullptr, key.istride, key.idist, out, nullptr,
                               key.ostride, key.odist, key.kind == 2 ? FFTW_FORWARD : FFTW_BACKWARD, flags);
        fftw_free(in);
        fftw_free(out);
    }
    if (!p) throw std::runtime_error("FFTW planning failed");
    plan_ = p;
}

Plan::~Plan() {
    std::lock_guard lock(g_plan_mutex);
    fftw_destroy_plan(static_cast<fftw_plan>(plan_));
}

void Plan::r2c(const double* in, cplx* out) const {
    fftw_execute_dft_r2c(static_cast<fftw_plan>(plan_), const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
}

void Plan::c2r(cplx* in, double* out) const {
    fftw_execute_dft_c2r(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex*>(in), out);
}

void Plan::c2c(const cplx* in, cplx* out) const {
    fftw_execute_dft(static_cast<fftw_plan>(plan_), reinterpret_cast<fftw_complex*>(const_cast<cplx*>(in)),
                     reinterpret_cast<fftw_complex*>(out));
}

std::shared_ptr<const Plan> get_plan(const PlanKey& key) {
    {
        std::lock_guard lock(g_plan_mutex);
        auto it = g_plans.find(key);
        if (it != g_plans.end()) return it->second;
    }
    std::shared_ptr<const Plan> plan;
    {
        std::lock_guard lock(g_plan_mutex);
        auto it = g_plans.find(key);
        if (it != g_plans.end()) return it->second;
        plan = std::make_shared<Plan>(key);
        g_plans.emplace(key, plan);
    }
    return plan;
}

}  // namespace detail

namespace {

std::vector<int> x_dims(const PhaseGrid& g) { return std::vector<int>(static_cast<std::size_t>(g.dim_x), g.n_x); }

std::vector<cplx> to_complex(const std::vector<double>& v) { return {v.begin(), v.end()}; }

}  // namespace

std::vector<cplx> fft_x(const SpatialField& u) {
    const auto& g = u.grid();
    auto in = to_complex(u.values());
    std::vector<cplx> out(in.size());
    detail::get_plan({2, x_dims(g), 1, 1, 0, 1, 0})->c2c(in.data(), out.data());
    return out;
}

SpatialField ifft_x(const PhaseGrid& grid, const std::vector<cplx>& u_hat) {
    std::vector<cplx> out(u_hat.size());
    detail::get_plan({3, x_dims(grid), 1, 1, 0, 1, 0})->c2c(u_hat.data(), out.data());
    SpatialField r(grid);
    const double inv = 1.0 / static_cast<double>(grid.nx_total());
    for (std::size_t i = 0; i < out.size(); ++i) r[i] = out[i].real() * inv;
    return r;
}

std::vector<cplx> fft_x(const DistField& u) {
    const auto& g = u.grid();
    const int nv = static_cast<int>(g.nv_total());
    auto in = to_complex(u.values());
    std::vector<cplx> out(in.size());
    detail::get_plan({2, x_dims(g), nv, nv, 1, nv, 1})->c2c(in.data(), out.data());
    return out;
}

DistField ifft_x_dist(const PhaseGrid& grid, const std::vector<cplx>& u_hat) {
    const int nv = static_cast<int>(grid.nv_total());
    std::vector<cplx> out(u_hat.size());
    detail::get_plan({3, x_dims(grid), nv, nv, 1, nv, 1})->c2c(u_hat.data(), out.data());
    DistField r(grid);
    const double inv = 1.0 / static_cast<double>(grid.nx_total());
    for (std::size_t i = 0; i < out.size(); ++i) r.values()[i] = out[i].real() * inv;
    return r;
}

std::vector<cplx> fft_v(const DistField& u) {
    const auto& g = u.grid();
    const int nv = static_cast<int>(g.nv_total());
    auto in = to_complex(u.values());
    std::vector<cplx> out(in.size());
    detail::get_plan({2, {g.n_v, g.n_v, g.n_v}, static_cast<int>(g.nx_total()), 1, nv, 1, nv})->c2c(in.data(), out.data());
    return out;
}

DistField ifft_v(const PhaseGrid& grid, const std::vector<cplx>& u_hat) {
    const int nv = static_cast<int>(grid.nv_total());
    std::vector<cplx> out(u_hat.size());
    detail::get_plan({3, {grid.n_v, grid.n_v, grid.n_v}, static_cast<int>(grid.nx_total()), 1, nv, 1, nv})
        ->c2c(u_hat.data(), out.data());
    DistField r(grid);
    const double inv = 1.0 / static_cast<double>(grid.nv_total());
    for (std::size_t i = 0; i < out.size(); ++i) r.values()[i] = out[i].real() * inv;
    return r;
}

double x_wavenumber(const PhaseGrid& grid, int i) {
    const int k = i <= grid.n_x / 2 ? i : i - grid.n_x;
    return 2.0 * M_PI * k;
}

double v_wavenumber(const PhaseGrid& grid, int i) {
    const int k = i <= grid.n_v / 2 ? i : i - grid.n_v;
    return 2.0 * M_PI * k / (2.0 * grid.v_max);
}

}  // namespace vplk
