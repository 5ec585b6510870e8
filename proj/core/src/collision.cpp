#include "vplk/collision.hpp"

#include <algorithm>

#include "vplk/errors.hpp"
#include "vplk/fft.hpp"
#include "vplk/parallel.hpp"

namespace vplk {

CollisionWorkspace::CollisionWorkspace(const PhaseGrid& grid) : grid_(grid), builder_(grid) {
    for (auto& x : grad_) x.assign(grid.nv_total(), 0.0);
    for (auto& x : flux_) x.assign(grid.nv_total(), 0.0);
}

void CollisionWorkspace::apply(const SliceCoeff& c, const double* f, double* out, bool diffusion, bool transport) {
    const std::size_t nv = grid_.nv_total();
    const auto& D = derivative();
    if (diffusion)
        for (int k = 0; k < 3; ++k) D.apply(k, f, grad_[static_cast<std::size_t>(k)].data());
    for (int j = 0; j < 3; ++j) {
        auto& J = flux_[static_cast<std::size_t>(j)];
        const auto& a0 = c.a[static_cast<std::size_t>(sym_index(0, j))];
        const auto& a1 = c.a[static_cast<std::size_t>(sym_index(1, j))];
        const auto& a2 = c.a[static_cast<std::size_t>(sym_index(2, j))];
        const auto& bj = c.b[static_cast<std::size_t>(j)];
        for (std::size_t p = 0; p < nv; ++p) {
            double s = 0.0;
            if (diffusion) s += a0[p] * grad_[0][p] + a1[p] * grad_[1][p] + a2[p] * grad_[2][p];
            if (transport) s -= bj[p] * f[p];
            J[p] = -s;
        }
    }
    std::fill(out, out + nv, 0.0);
    for (int j = 0; j < 3; ++j) D.apply_transpose_add(j, flux_[static_cast<std::size_t>(j)].data(), out);
}

void CollisionWorkspace::apply_diffusion_operator(const SliceCoeff& c, const double* f, double* out) {
    apply(c, f, out, true, false);
    const std::size_t nv = grid_.nv_total();
    for (std::size_t p = 0; p < nv; ++p) out[p] = -out[p];
}

namespace {

DistField apply_coeff(const CoeffField& coeff, const DistField& F, bool diffusion, bool transport) {
    require_same_grid(coeff.grid, F.grid(), "collision");
    const auto& g = F.grid();
    const std::size_t nv = g.nv_total();
    DistField out(g);
    parallel_for(g.nx_total(), [&](std::size_t b, std::size_t e, int) {
        CollisionWorkspace ws(g);
        SliceCoeff sc(nv);
        for (std::size_t ix = b; ix < e; ++ix) {
            for (std::size_t c = 0; c < 6; ++c)
                std::copy_n(coeff.mat[c].begin() + static_cast<std::ptrdiff_t>(ix * nv), nv, sc.a[c].begin());
            for (std::size_t c = 0; c < 3; ++c)
                std::copy_n(coeff.vec[c].begin() + static_cast<std::ptrdiff_t>(ix * nv), nv, sc.b[c].begin());
            ws.apply(sc, F.slice(ix).data(), out.slice(ix).data(), diffusion, transport);
        }
    });
    return out;
}

}  // namespace

DistField q_diffusion(const CoeffField& coeff, const DistField& F) { return apply_coeff(coeff, F, true, false); }

DistField q_transport(const CoeffField& coeff, const DistField& F) { return apply_coeff(coeff, F, false, true); }

DistField q_full(const DistField& G, const DistField& F) {
    require_same_grid(G.grid(), F.grid(), "q_full");
    const auto& g = F.grid();
    const std::size_t nv = g.nv_total();
    DistField out(g);
    const bool uniform = x_independent(G) && x_independent(F);
    const std::size_t nslices = uniform ? 1 : g.nx_total();
    parallel_for(nslices, [&](std::size_t b, std::size_t e, int) {
        CollisionWorkspace ws(g);
        SliceCoeff sc(nv);
        for (std::size_t ix = b; ix < e; ++ix) {
            ws.builder().build(G.slice(ix), sc);
            ws.apply(sc, F.slice(ix).data(), out.slice(ix).data());
        }
    });
    if (uniform)
        for (std::size_t ix = 1; ix < g.nx_total(); ++ix) std::copy_n(out.slice(0).begin(), nv, out.slice(ix).begin());
    return out;
}

namespace {

// Spectral v-derivatives of every slice of G (box treated as periodic, Nyquist dropped).
std::array<DistField, 3> spectral_gradient(const DistField& G) {
    const auto& g = G.grid();
    const int n = g.n_v;
    const auto hat = fft_v(G);
    std::array<DistField, 3> out;
    for (int axis = 0; axis < 3; ++axis) {
        auto d = hat;
        for (std::size_t p = 0; p < d.size(); ++p) {
            const std::size_t iv = p % g.nv_total();
            const int idx[3] = {static_cast<int>(iv / (static_cast<std::size_t>(n) * n)),
                                static_cast<int>(iv / static_cast<std::size_t>(n) % n), static_cast<int>(iv % n)};
            const int i = idx[axis];
            d[p] *= (i == n / 2) ? cplx(0.0) : cplx(0.0, v_wavenumber(g, i));
        }
        out[static_cast<std::size_t>(axis)] = ifft_v(g, d);
    }
    return out;
}

}  // namespace

double collision_energy_moment(const DistField& G, const DistField& F) {
    require_same_grid(G.grid(), F.grid(), "collision_energy_moment");
    const auto& g = F.grid();
    const std::size_t nv = g.nv_total();
    const auto table = KernelTable::for_grid(g);
    KernelTable::Workspace ws(g.n_v);
    const auto dG = spectral_gradient(G);
    std::array<std::vector<double>, 6> a;
    std::array<std::vector<double>, 3> b;
    for (auto& x : a) x.resize(nv);
    for (auto& x : b) x.resize(nv);
    double total = 0.0;
    for (std::size_t ix = 0; ix < g.nx_total(); ++ix) {
        table->convolve(G.slice(ix), {a[0].data(), a[1].data(), a[2].data(), a[3].data(), a[4].data(), a[5].data()}, ws);
        table->convolve_divergence({dG[0].slice(ix).data(), dG[1].slice(ix).data(), dG[2].slice(ix).data()},
                                   {b[0].data(), b[1].data(), b[2].data()}, ws);
        double s = 0.0;
        for (std::size_t iv = 0; iv < nv; ++iv) {
            const Vec3 v = g.v3(iv);
            const double tr = a[0][iv] + a[3][iv] + a[5][iv];
            const double vb = v[0] * b[0][iv] + v[1] * b[1][iv] + v[2] * b[2][iv];
            s += (tr + 2.0 * vb) * F(ix, iv);
        }
        total += s;
    }
    return total * g.wv() * g.wx();
}

double energy_moment(const DistField& Q) {
    const auto& g = Q.grid();
    const std::size_t nv = g.nv_total();
    double total = 0.0;
    for (std::size_t ix = 0; ix < g.nx_total(); ++ix) {
        double s = 0.0;
        for (std::size_t iv = 0; iv < nv; ++iv) s += 0.5 * g.v3(iv).squaredNorm() * Q(ix, iv);
        total += s;
    }
    return total * g.wv() * g.wx();
}

}  // namespace vplk
