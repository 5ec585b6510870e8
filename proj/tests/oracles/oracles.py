"""Independent reference values for the C++ test suite.

Run once; paste the printed constants into tests/oracle_values.hpp.
Everything here is computed without the library: adaptive quadrature,
Gauss-Legendre box integrals and plain spectral iterations.
"""
import numpy as np
from scipy import integrate, special

SQ2PI = np.sqrt(2 * np.pi)


def mu_r(r, T=1.0):
    return np.exp(-r * r / (2 * T)) / (2 * np.pi * T) ** 1.5


def sigma_quad(v):
    """sigma(v) = int Phi(z) mu(v - z) dz, spherical coordinates around z = 0."""
    v = np.asarray(v, float)
    out = np.zeros((3, 3))

    def integrand(th, ph, i, j):
        zh = np.array([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)])
        proj = (1.0 if i == j else 0.0) - zh[i] * zh[j]
        # radial integral of (1/r) r^2 mu(v - r zh) dr, done in closed form
        a = zh @ v
        c = v @ v
        # int_0^inf r exp(-(r^2 - 2 a r + c)/2) dr
        rad = np.exp(-(c - a * a) / 2) * (np.exp(-a * a / 2) + a * np.sqrt(np.pi / 2) * (1 + special.erf(a / np.sqrt(2))))
        return proj * rad / (2 * np.pi) ** 1.5 * np.sin(th)

    for i in range(3):
        for j in range(i, 3):
            val, _ = integrate.dblquad(lambda ph, th: integrand(th, ph, i, j), 0, np.pi, 0, 2 * np.pi,
                                       epsabs=1e-13, epsrel=1e-12)
            out[i, j] = out[j, i] = val
    return out


def lam(r):
    """Closed-form eigenvalues (parallel, perpendicular) of sigma at |v| = r."""
    r = np.asarray(r, float)
    eps = special.erf(r / np.sqrt(2))
    g = np.sqrt(2 / np.pi) * np.exp(-r * r / 2)
    with np.errstate(divide='ignore', invalid='ignore'):
        h = (eps - r * g) / r ** 3
        e_r = eps / r
    small = r < 1
    if np.any(small):
        rs = r[small] if r.ndim else r
        x = -rs * rs / 2
        hs = np.zeros_like(rs)
        es = np.zeros_like(rs)
        term = np.ones_like(rs)
        for k in range(30):
            hs = hs + term / (2 * k + 3)
            es = es + term / (2 * k + 1)
            term = term * x / (k + 1)
        if r.ndim:
            h[small] = np.sqrt(2 / np.pi) * hs
            e_r[small] = np.sqrt(2 / np.pi) * es
        else:
            h = np.sqrt(2 / np.pi) * hs
            e_r = np.sqrt(2 / np.pi) * es
    return 2 * h, e_r - h


def sigma_closed(v):
    v = np.asarray(v, float)
    r = np.linalg.norm(v)
    lp, lt = lam(np.array([r]))
    lp, lt = lp[0], lt[0]
    if r == 0:
        return lt * np.eye(3)
    vh = v / r
    P = np.outer(vh, vh)
    return lp * P + lt * (np.eye(3) - P)


def box_integral(f, vmax, n=96):
    """Integral over [-vmax, vmax]^3 of f(V) (V shape (...,3)) by tensor Gauss-Legendre, split in halves."""
    x, w = np.polynomial.legendre.leggauss(n)
    xs = np.concatenate([-vmax / 2 + vmax / 2 * x, vmax / 2 + vmax / 2 * x])
    ws = np.concatenate([w, w]) * vmax / 2
    V = np.stack(np.meshgrid(xs, xs, xs, indexing='ij'), -1)
    W = ws[:, None, None] * ws[None, :, None] * ws[None, None, :]
    return (f(V) * W).sum()


def radial_mass(r):
    # mass of the standard Maxwellian inside the ball of radius r
    return special.erf(r / np.sqrt(2)) - np.sqrt(2 / np.pi) * r * np.exp(-r * r / 2)


def pb_fixed_point(n, beta, tol=1e-13):
    N = n.size
    k = np.fft.fftfreq(N, 1.0 / N)
    lap = (2 * np.pi * k) ** 2
    kap = 4 * np.pi * beta * np.max(np.exp(beta * 0 + np.log(n.max())))  # damping above the Lipschitz constant
    phi = np.zeros(N)
    for it in range(200000):
        rhs = 4 * np.pi * (n - np.exp(beta * phi)) + kap * phi
        new = np.real(np.fft.ifft(np.fft.fft(rhs) / (lap + kap)))
        if np.max(np.abs(new - phi)) < tol:
            return new
        phi = new
    raise RuntimeError('no convergence')


def grad_energy(phi):
    N = phi.size
    k = np.fft.fftfreq(N, 1.0 / N)
    ph = np.fft.fft(phi) / N
    return np.sum((2 * np.pi * k) ** 2 * np.abs(ph) ** 2)


def main():
    np.set_printoptions(precision=17)
    print('// sigma')
    s0 = sigma_quad([0, 0, 0])
    print('sigma0', repr(s0[0, 0]), 'offdiag', np.abs(s0 - np.diag(np.diag(s0))).max())
    pts = [(1.0, 0.5, -0.3), (5.0, 0.0, 0.0), (0.2, -1.7, 2.4)]
    for p in pts:
        q = sigma_quad(p)
        c = sigma_closed(p)
        print('sigma', p, [repr(q[i, j]) for i, j in [(0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2)]],
              'closed-form err', np.abs(q - c).max())

    # normalized anisotropy ratio
    for r in [2, 3, 4, 5, 6, 8]:
        lp, lt = lam(np.array([float(r)]))
        print('aniso r', r, 'ratio', lp[0] / lt[0], 'x <v>^2', lp[0] / lt[0] * (1 + r * r))

    vmax = 6.0
    print('// integral of sigma_11 over the box', repr(box_integral(lambda V: sigma11_field(V), vmax)))
    n = 32
    h = 2 * vmax / n
    vg = -vmax + (np.arange(n) + 0.5) * h
    Vg = np.stack(np.meshgrid(vg, vg, vg, indexing='ij'), -1)
    print('// midpoint sum of closed-form sigma_11', repr(sigma11_field(Vg).sum() * h ** 3))

    # transport drift: int v1 Q_T(mu, v1 mu) = int vec_1 v1 mu = -(2/3) int 4 pi r M(r) mu(r) dr
    val, _ = integrate.quad(lambda r: -(2.0 / 3) * 4 * np.pi * r * radial_mass(r) * mu_r(r), 0, np.inf, epsabs=1e-14)
    print('// v1 moment of Q_T(mu, v1 mu)', repr(val))
    # energy exchange: G = mu, F = Maxwellian(T = 2): int (tr sigma + 2 v.vec) F
    def ex(r):
        lp, lt = lam(np.array([r]))
        tr = lp[0] + 2 * lt[0]
        return (tr - 4 * radial_mass(r) / r) * mu_r(r, 2.0) * 4 * np.pi * r * r
    val, _ = integrate.quad(ex, 1e-12, 40, epsabs=1e-14, limit=200)
    print('// energy exchange mu vs T=2', repr(val))

    norms_mu(vmax)
    pb()


def sigma11_field(V):
    r = np.sqrt((V ** 2).sum(-1))
    lp, lt = lam(r.ravel())
    lp = lp.reshape(r.shape)
    lt = lt.reshape(r.shape)
    with np.errstate(invalid='ignore', divide='ignore'):
        c = np.where(r > 0, V[..., 0] ** 2 / np.where(r > 0, r * r, 1), 1.0 / 3)
    return lt + (lp - lt) * c


def norms_mu(vmax, s=2.6, rr=0.5, m=(5, 10, 15)):
    """Box integrals of the weighted terms for u = mu (x independent, unit torus)."""
    print('// norms of mu on [-6,6)^3, s=2.6 r=0.5 m=(5,10,15)')
    def wl2(mm):
        return box_integral(lambda V: (1 + (V ** 2).sum(-1)) ** mm * mu_r(np.sqrt((V ** 2).sum(-1))) ** 2, vmax)
    # <grad_v>^r term over the whole space via the Fourier side
    br, _ = integrate.quad(lambda k: 4 * np.pi * k * k * (1 + k * k) ** rr * np.exp(-k * k), 0, np.inf, epsabs=1e-15)
    br /= (2 * np.pi) ** 3
    t = {m_: wl2(m_) for m_ in m}
    e2 = [t[m[2]], t[m[1]], br]
    ep2 = [t[m[1]], t[m[0]]]
    print('E terms^2', [repr(x) for x in e2], 'E', repr(np.sqrt(sum(e2))))
    print("E' terms^2", [repr(x) for x in ep2], "E'", repr(np.sqrt(sum(ep2))))

    # H_sigma of w = <v>^m mu (radial): lambda_par(r) * w'(r)^2
    def hs(mm):
        def f(V):
            r = np.sqrt((V ** 2).sum(-1))
            lp, _ = lam(r.ravel())
            lp = lp.reshape(r.shape)
            w = (1 + r * r) ** (mm / 2) * mu_r(r)
            dw = w * (mm * r / (1 + r * r) - r)
            return lp * dw * dw
        return box_integral(f, vmax)
    # H_sigma of <grad_v>^r mu: radial profile via Hankel transform
    def bessel_profile_deriv(rho):
        # d/drho of (1/(2 pi^2)) int (1+k^2)^{r/2} e^{-k^2/2} k sin(k rho)/rho dk
        def g(k):
            return (1 + k * k) ** (rr / 2) * np.exp(-k * k / 2) * k * (k * np.cos(k * rho) / rho - np.sin(k * rho) / rho ** 2)
        val, _ = integrate.quad(g, 0, 40, limit=400, epsabs=1e-15)
        return val / (2 * np.pi ** 2)
    rho = np.linspace(1e-3, vmax * np.sqrt(3) + 0.1, 1200)
    dprof = np.array([bessel_profile_deriv(x) for x in rho])
    def hb(V):
        r = np.sqrt((V ** 2).sum(-1))
        lp, _ = lam(r.ravel())
        lp = lp.reshape(r.shape)
        d = np.interp(r, rho, dprof)
        return lp * d * d
    d2 = [hs(m[2]), hs(m[1]), box_integral(hb, vmax)]
    dp2 = [hs(m[1]), hs(m[0])]
    print('D terms^2', [repr(x) for x in d2], 'D', repr(np.sqrt(sum(d2))))
    print("D' terms^2", [repr(x) for x in dp2], "D'", repr(np.sqrt(sum(dp2))))


def pb():
    N = 32
    x = np.arange(N) / N
    n = 1 + 0.1 * np.cos(2 * np.pi * x)
    phi1 = pb_fixed_point(n, 1.0)
    print('// solve_pb n = 1 + 0.1 cos, beta = 1: phi[0], phi[N/2], max|phi|')
    print(repr(phi1[0]), repr(phi1[N // 2]), repr(np.abs(phi1).max()))

    def g(beta):
        phi = pb_fixed_point(n, beta)
        return 1.5 / beta + grad_energy(phi) / (8 * np.pi) - 1.0
    lo, hi = 1.5, 3.0
    while g(hi) > 0:
        hi *= 2
    while hi - lo > 1e-12:
        mid = 0.5 * (lo + hi)
        if g(mid) > 0:
            lo = mid
        else:
            hi = mid
    print('// solve_coupled n = 1 + 0.1 cos, E = 1: beta', repr(0.5 * (lo + hi)))


if __name__ == '__main__':
    main()
