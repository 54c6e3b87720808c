#ifndef KICKBEC_SPECIAL_FUNCTIONS_HPP
#define KICKBEC_SPECIAL_FUNCTIONS_HPP

#include <vector>

namespace kickbec {

// Integer-order Bessel functions of real argument, evaluated by downward
// (Miller) recurrence normalized with the generating-function sums
//   1   = J_0 + 2 sum_k J_2k
//   e^x = I_0 + 2 sum_k I_k
// Accurate to ~1e-13 for |x| <= 10, |n| <= 50.

double bessel_j(int n, double x);
double bessel_i(int n, double x);

// J_0..J_nmax (or I_0..I_nmax) from a single recurrence sweep.
std::vector<double> bessel_j_table(int nmax, double x);
std::vector<double> bessel_i_table(int nmax, double x);

}  // namespace kickbec

#endif
