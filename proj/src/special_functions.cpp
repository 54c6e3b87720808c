#include "kickbec/special_functions.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace kickbec {

namespace {

constexpr double kRescaleAbove = 1e250;
constexpr double kRescaleBy = 1e-250;

int miller_start(int nmax, double ax) {
  const double top = std::max<double>(nmax, std::ceil(ax));
  int m = static_cast<int>(top + 20.0 + std::sqrt(160.0 * std::max(top, 1.0)));
  return m + (m % 2);  // even start keeps the J-normalization sum aligned
}

// Unnormalized downward sweep; returns the recurrence values for orders
// 0..nmax and the normalization sum.  `sign` is -1 for J (three-term
// recurrence f_{k-1} = (2k/x) f_k - f_{k+1}) and +1 for I.
std::vector<double> downward(int nmax, double ax, double sign, double& norm) {
  const int start = miller_start(nmax, ax);
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  double next = 0.0;
  double cur = 1e-300;
  double sum = 0.0;
  const bool even_only = sign < 0.0;
  for (int k = start; k >= 1; --k) {
    const double prev = (2.0 * k / ax) * cur + sign * next;
    next = cur;
    cur = prev;
    // cur now holds f_{k-1}
    const int order = k - 1;
    if (order <= nmax) out[static_cast<std::size_t>(order)] = cur;
    if (order > 0 && (!even_only || order % 2 == 0)) sum += cur;
    if (std::abs(cur) > kRescaleAbove) {
      cur *= kRescaleBy;
      next *= kRescaleBy;
      sum *= kRescaleBy;
      for (auto& v : out) v *= kRescaleBy;
    }
  }
  // cur == f_0
  norm = cur + 2.0 * sum;
  return out;
}

std::vector<double> j_table_nonneg(int nmax, double ax) {
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (ax == 0.0) {
    out[0] = 1.0;
    return out;
  }
  double norm = 0.0;
  out = downward(nmax, ax, -1.0, norm);
  for (auto& v : out) v /= norm;
  return out;
}

std::vector<double> i_table_nonneg(int nmax, double ax) {
  std::vector<double> out(static_cast<std::size_t>(nmax) + 1, 0.0);
  if (ax == 0.0) {
    out[0] = 1.0;
    return out;
  }
  double norm = 0.0;
  out = downward(nmax, ax, +1.0, norm);
  const double scale = std::exp(ax) / norm;
  for (auto& v : out) v *= scale;
  return out;
}

}  // namespace

std::vector<double> bessel_j_table(int nmax, double x) {
  if (nmax < 0) throw std::invalid_argument("bessel_j_table: nmax < 0");
  auto out = j_table_nonneg(nmax, std::abs(x));
  if (x < 0.0)
    for (int n = 1; n <= nmax; n += 2) out[static_cast<std::size_t>(n)] = -out[static_cast<std::size_t>(n)];
  return out;
}

std::vector<double> bessel_i_table(int nmax, double x) {
  if (nmax < 0) throw std::invalid_argument("bessel_i_table: nmax < 0");
  auto out = i_table_nonneg(nmax, std::abs(x));
  if (x < 0.0)
    for (int n = 1; n <= nmax; n += 2) out[static_cast<std::size_t>(n)] = -out[static_cast<std::size_t>(n)];
  return out;
}

double bessel_j(int n, double x) {
  const int an = std::abs(n);
  double v = bessel_j_table(an, x)[static_cast<std::size_t>(an)];
  // J_{-n} = (-1)^n J_n
  if (n < 0 && (an % 2 == 1)) v = -v;
  return v;
}

double bessel_i(int n, double x) {
  // I_{-n} = I_n
  const int an = std::abs(n);
  return bessel_i_table(an, x)[static_cast<std::size_t>(an)];
}

}  // namespace kickbec
