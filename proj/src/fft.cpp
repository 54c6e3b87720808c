#include "kickbec/fft.hpp"

#include <mutex>
#include <stdexcept>

namespace kickbec {

namespace {
// FFTW's planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

BatchedFft::BatchedFft(int n, int howmany, cplx* data) {
  if (n < 1 || howmany < 1) throw std::invalid_argument("BatchedFft: bad dimensions");
  auto* buf = reinterpret_cast<fftw_complex*>(data);
  int dims[1] = {n};
  std::lock_guard lock(planner_mutex());
  fwd_ = fftw_plan_many_dft(1, dims, howmany, buf, nullptr, 1, n, buf, nullptr, 1, n, FFTW_FORWARD,
                            FFTW_ESTIMATE);
  bwd_ = fftw_plan_many_dft(1, dims, howmany, buf, nullptr, 1, n, buf, nullptr, 1, n,
                            FFTW_BACKWARD, FFTW_ESTIMATE);
  if (!fwd_ || !bwd_) throw std::runtime_error("BatchedFft: FFTW planning failed");
}

BatchedFft::~BatchedFft() {
  std::lock_guard lock(planner_mutex());
  if (fwd_) fftw_destroy_plan(fwd_);
  if (bwd_) fftw_destroy_plan(bwd_);
}

std::vector<cplx> dft(const std::vector<cplx>& x) {
  AlignedVector buf(x.begin(), x.end());
  BatchedFft fft(static_cast<int>(buf.size()), 1, buf.data());
  fft.forward();
  return {buf.begin(), buf.end()};
}

std::vector<cplx> inverse_dft(const std::vector<cplx>& x) {
  AlignedVector buf(x.begin(), x.end());
  BatchedFft fft(static_cast<int>(buf.size()), 1, buf.data());
  fft.backward();
  const double s = 1.0 / static_cast<double>(buf.size());
  std::vector<cplx> out(buf.begin(), buf.end());
  for (auto& v : out) v *= s;
  return out;
}

}  // namespace kickbec
