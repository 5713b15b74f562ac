#pragma once

#include "ccef/bernstein.hpp"
#include "ccef/copula.hpp"
#include "ccef/empirical.hpp"
#include "ccef/quadrature.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ccef {

// Moments of the limit of sqrt(n) (R_hat(u) - R_C(u)), i.e. of the process
// -(1/u) int_0^1 G_C(u, v) dv where G_C is the Gaussian limit of
// sqrt(n) (B_m C_n - C) with mean d b(u, v) and covariance E[h h'].

struct LimitMoments
{
  enum class Method
  {
    printed_formula,
    h_kernel_quadrature,
    monte_carlo
  };
  double u = 0.0;
  double mean = 0.0;
  double variance = 0.0;
  Method method = Method::h_kernel_quadrature;
};

//! b(u, v) = (u(1-u) C11 + v(1-v) C22) / 2.
double bias_b(const CopulaModel& model, UnitPoint p);

//! d (1/2 - R_C(u)) + d (u - 1) / 2 int_0^1 C11(u, v) dv.
double limit_mean(const CopulaModel& model,
                  double u,
                  double d,
                  const QuadratureSpec& spec = {});

//! -(d/u) int_0^1 b(u, v) dv, the mean of the limit computed from b.
double limit_mean_from_bias(const CopulaModel& model,
                            double u,
                            double d,
                            const QuadratureSpec& spec = {});

//! h(u, v) = I(U <= u, V <= v) - C(u, v) - C1(u, v)(I(U <= u) - u)
//!           - C2(u, v)(I(V <= v) - v), at one observation (U, V).
double h_kernel(const CopulaModel& model,
                double u,
                double v,
                std::pair<double, double> obs);

//! (1 / (w1 w2)) int C1(w1, v) dv int C(w1, v) C2(w2, v) dv.
double remark_h1(const CopulaModel& model,
                 double w1,
                 double w2,
                 const QuadratureSpec& spec = {});

//! (1 / (w1 w2)) int int C2(w2, v) C(w1, min(v, v')) dv dv'
//!   - (1 - R_C(w1)) R_C(w2).
double remark_h2(const CopulaModel& model,
                 double w1,
                 double w2,
                 const QuadratureSpec& spec = {});

//! ((R_C(min w) - 1) / max w + 1 - 2 R_C(w1)) int C1(w2, v) dv.
double remark_h3(const CopulaModel& model,
                 double w1,
                 double w2,
                 const QuadratureSpec& spec = {});

//! Term-by-term transcription of the closed-form variance display, with
//! H1(u, u) = (1/2) int C1(u, v) dv.
double limit_variance_printed(const CopulaModel& model,
                              double u,
                              const QuadratureSpec& spec = {});

//! Term-by-term transcription of the closed-form covariance display built
//! from H1, H2 and H3.
double limit_covariance_printed(const CopulaModel& model,
                                double u,
                                double u2,
                                const QuadratureSpec& spec = {});

//! (1 / (u u2)) int int E[h(u, v) h(u2, v')] dv dv', with E[h h'] expanded
//! into the covariances of the centered indicators. Authoritative path.
double limit_covariance_hkernel(const CopulaModel& model,
                                double u,
                                double u2,
                                const QuadratureSpec& spec = {});

//! Variance from the h-kernel path; values in (-1e-9, 0) are clamped to 0,
//! more negative values throw NegativeVariance.
LimitMoments limit_moments(const CopulaModel& model,
                           double u,
                           double d,
                           const QuadratureSpec& spec = {});

struct AsymptoticBand
{
  double u;
  double r_hat;
  double bias_correction; //!< limit mean / sqrt(n) with d = sqrt(n) / m
  double std_error;       //!< sqrt(variance / n)
  double level;
  double lower;
  double upper;
};

//! Standard normal quantile.
double normal_quantile(double p);

//! Plug-in bands r_hat - bias +- z_{1 - (1 - level)/2} se, with the limit
//! moments evaluated under the Bernstein-smoothed empirical copula.
std::vector<AsymptoticBand> confidence_band(const RankedSample& rs,
                                            BernsteinOrder m,
                                            std::span<const double> grid,
                                            double level,
                                            const QuadratureSpec& spec = {},
                                            bool clamp = false);

//! CSV with header u,r_hat,bias_correction,std_error,lower,upper,level.
std::string bands_csv(std::span<const AsymptoticBand> bands);

} // namespace ccef
