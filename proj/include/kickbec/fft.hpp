#ifndef KICKBEC_FFT_HPP
#define KICKBEC_FFT_HPP

#include <cstddef>
#include <new>
#include <vector>

#include <fftw3.h>

#include "kickbec/core.hpp"

namespace kickbec {

template <class T>
struct FftwAllocator {
  using value_type = T;
  FftwAllocator() = default;
  template <class U>
  FftwAllocator(const FftwAllocator<U>&) noexcept {}
  T* allocate(std::size_t n) {
    void* p = fftw_malloc(n * sizeof(T));
    if (!p) throw std::bad_alloc();
    return static_cast<T*>(p);
  }
  void deallocate(T* p, std::size_t) noexcept { fftw_free(p); }
  template <class U>
  bool operator==(const FftwAllocator<U>&) const noexcept { return true; }
};

using AlignedVector = std::vector<cplx, FftwAllocator<cplx>>;

// In-place batched complex DFT over `howmany` contiguous rows of length n.
// Plans are made with FFTW_ESTIMATE so results are bit-reproducible.
// Unnormalized: backward(forward(x)) == n * x.
class BatchedFft {
 public:
  BatchedFft(int n, int howmany, cplx* data);
  ~BatchedFft();
  BatchedFft(const BatchedFft&) = delete;
  BatchedFft& operator=(const BatchedFft&) = delete;

  void forward() const { fftw_execute(fwd_); }
  void backward() const { fftw_execute(bwd_); }

 private:
  fftw_plan fwd_ = nullptr;
  fftw_plan bwd_ = nullptr;
};

// One-off transforms of a single row (allocates a plan; not for inner loops).
std::vector<cplx> dft(const std::vector<cplx>& x);
std::vector<cplx> inverse_dft(const std::vector<cplx>& x);  // includes 1/n

}  // namespace kickbec

#endif
