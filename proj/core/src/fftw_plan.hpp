#pragma once

// Thin FFTW wrapper. Plans are created once under a global lock and cached;
// execution uses the new-array interface, which FFTW allows concurrently.

#include <complex>
#include <memory>
#include <vector>

namespace vplk::detail {

using cplx = std::complex<double>;

struct PlanKey {
    int kind;  // 0 r2c, 1 c2r, 2 c2c forward, 3 c2c backward
    std::vector<int> dims;
    int howmany, istride, idist, ostride, odist;
    auto operator<=>(const PlanKey&) const = default;
};

class Plan {
public:
    explicit Plan(const PlanKey& key);
    ~Plan();
    Plan(const Plan&) = delete;
    Plan& operator=(const Plan&) = delete;

    void r2c(const double* in, cplx* out) const;
    // Destroys `in`.
    void c2r(cplx* in, double* out) const;
    void c2c(const cplx* in, cplx* out) const;

private:
    PlanKey key_;
    void* plan_ = nullptr;
};

std::shared_ptr<const Plan> get_plan(const PlanKey& key);

// Contiguous 3D transform of an n0 x n1 x n2 real array.
inline PlanKey r2c_3d(int n0, int n1, int n2) { return {0, {n0, n1, n2}, 1, 1, 0, 1, 0}; }
inline PlanKey c2r_3d(int n0, int n1, int n2) { return {1, {n0, n1, n2}, 1, 1, 0, 1, 0}; }

// Aligned scratch buffers.
template <class T>
struct FftwAllocator {
    using value_type = T;
    FftwAllocator() = default;
    template <class U>
    FftwAllocator(const FftwAllocator<U>&) {}
    T* allocate(std::size_t n);
    void deallocate(T* p, std::size_t) noexcept;
    template <class U>
    bool operator==(const FftwAllocator<U>&) const { return true; }
};

template <class T>
using AlignedVector = std::vector<T, FftwAllocator<T>>;

void* fftw_alloc_bytes(std::size_t bytes);
void fftw_free_bytes(void* p) noexcept;

template <class T>
T* FftwAllocator<T>::allocate(std::size_t n) {
    return static_cast<T*>(fftw_alloc_bytes(n * sizeof(T)));
}
template <class T>
void FftwAllocator<T>::deallocate(T* p, std::size_t) noexcept {
    fftw_free_bytes(p);
}

}  // namespace vplk::detail
