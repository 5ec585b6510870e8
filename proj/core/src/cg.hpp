#pragma once

// Preconditioned conjugate gradients on std::vector<double>.

#include <cmath>
#include <vector>

namespace vplk::detail {

struct CgResult {
    int iterations = 0;
    double residual = 0.0;  // final ||r|| / ||b||
    bool converged = false;
};

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

// Solves A x = b for SPD A; x holds the initial guess.
template <class ApplyA, class ApplyM>
CgResult pcg(const ApplyA& apply_a, const ApplyM& apply_m, const std::vector<double>& b, std::vector<double>& x,
             double rel_tol, int max_iter) {
    const std::size_t n = b.size();
    std::vector<double> r(n), z(n), p(n), q(n);
    apply_a(x, q);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - q[i];
    const double bnorm = std::sqrt(dot(b, b));
    CgResult res;
    if (bnorm == 0.0) {
        std::fill(x.begin(), x.end(), 0.0);
        res.converged = true;
        return res;
    }
    apply_m(r, z);
    p = z;
    double rz = dot(r, z);
    for (int it = 0; it < max_iter; ++it) {
        res.residual = std::sqrt(dot(r, r)) / bnorm;
        if (res.residual <= rel_tol) {
            res.converged = true;
            res.iterations = it;
            return res;
        }
        apply_a(p, q);
        const double pq = dot(p, q);
        if (!(pq > 0.0)) break;
        const double alpha = rz / pq;
        for (std::size_t i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * q[i];
        }
        apply_m(r, z);
        const double rz_new = dot(r, z);
        const double beta = rz_new / rz;
        rz = rz_new;
        for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
        res.iterations = it + 1;
    }
    res.residual = std::sqrt(dot(r, r)) / bnorm;
    res.converged = res.residual <= rel_tol;
    return res;
}

}  // namespace vplk::detail
