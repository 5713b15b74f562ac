#pragma once

#include "ccef/ccef_analytic.hpp"
#include "ccef/copula.hpp"

#include <span>
#include <string>
#include <vector>

namespace ccef {

//! Order m >= 1 of a Bernstein approximation.
class BernsteinOrder
{
public:
  explicit BernsteinOrder(int m);
  int value() const { return m_; }

private:
  int m_;
};

//! P_{k,m}(x) = binom(m, k) x^k (1 - x)^(m - k). Log-space for m > 500.
double bernstein_basis(int k, int m, double x);

//! All P_{0..m, m}(x) into `out` (size m + 1), by recurrence from the nearer
//! end of the index range; log-space for m > 500.
void bernstein_basis_all(int m, double x, std::span<double> out);

//! Grid of C(k/m, l/m), k, l = 0..m.
BernsteinGrid bernstein_grid(const CopulaModel& model, BernsteinOrder m);

//! B_m C(u, v) as the double sum over the (k/m, l/m) grid.
double bernstein_copula_cdf(const CopulaModel& model,
                            BernsteinOrder m,
                            UnitPoint p);

//! R_{B_m C}(u) = 1 - 1 / ((m + 1) u) sum_{k,l=1}^m C(k/m, l/m) P_{k,m}(u).
double ccef_bernstein(const CopulaModel& model, BernsteinOrder m, CcefQuery q);

//! Same sum from a precomputed grid, O(m) per call.
double ccef_bernstein(const BernsteinGrid& grid, CcefQuery q);

//! 7 M / (12 u0 m).
double rate_bound(double lipschitz_m, double u0, BernsteinOrder m);

//! Grid estimate (200 x 200 interior points) of the constant in the uniform
//! rate: the largest of |C11|, |C22| and the difference quotients of C1 in v
//! and C2 in u.
double estimate_rate_constant(const CopulaModel& model);

struct RateSweepRow
{
  double u;
  int m;
  double value;     //!< R_{B_m C}(u)
  double abs_error; //!< |R_C(u) - R_{B_m C}(u)|
  double bound;     //!< rate_bound(M, u0, m), NaN when M is not supplied
};

//! Error table over u_list x m_list against the exact CCEF (closed form when
//! available, quadrature otherwise). `u0` defaults to min(u_list).
std::vector<RateSweepRow> empirical_rate_sweep(const CopulaModel& model,
                                               std::span<const double> u_list,
                                               std::span<const int> m_list,
                                               double lipschitz_m = -1.0,
                                               double u0 = -1.0);

//! Columns u,m,abs_error,bound; `with_value` inserts the approximation
//! itself after m (the CLI's approx output).
std::string rate_sweep_csv(std::span<const RateSweepRow> rows,
                           bool with_value = false);

} // namespace ccef
