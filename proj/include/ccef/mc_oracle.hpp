#pragma once

#include "ccef/copula.hpp"
#include "ccef/empirical.hpp"
#include "ccef/quadrature.hpp"

#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace ccef {

struct McConfig
{
  std::uint64_t seed = 0;
  int n = 1000;       //!< observations per replicate
  int replicates = 1;
};

//! Throws InvalidDomain unless n >= 2 and replicates >= 1.
void validate(const McConfig& cfg);

//! Recorded in experiment metadata.
inline constexpr std::string_view rng_algorithm =
  "mt19937_64; seeds derived by splitmix64(root + 0x9E3779B97F4A7C15 * (i + 1)); "
  "uniform = ((x >> 11) + 0.5) * 2^-53";

//! splitmix64 finaliser applied to root + golden * (index + 1).
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index);

//! Uniform draws on the open interval (0, 1).
class UniformRng
{
public:
  explicit UniformRng(std::uint64_t seed)
    : engine_(seed)
  {}

  double operator()()
  {
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

private:
  std::mt19937_64 engine_;
};

//! Solves C1(u, v) = t for v (conditional inversion). FGM uses the closed
//! form root of a v^2 + b v - t = 0, Lin bisection to 1e-12.
double conditional_inverse(const CopulaModel& model, double u, double t);

//! n draws by conditional inversion: U uniform, V = F^{-1}(T | U). M gives
//! V = U, W gives V = 1 - U, mixtures pick a component by weight first.
//! Supports independence, M, W, FGM, Lin and mixtures of these.
Sample sample(const CopulaModel& model, int n, std::uint64_t seed);

inline Sample sample(const CopulaModel& model, const McConfig& cfg)
{
  validate(cfg);
  return sample(model, cfg.n, cfg.seed);
}

//! Plain conditional mean of y over {x <= u}.
double mc_ccef(const Sample& s, double u);

//! Anderson-Darling A*^2 for normality with estimated mean and variance.
double anderson_darling_normal(std::span<const double> x);

//! 1% critical value of A*^2 (mean and variance estimated).
inline constexpr double anderson_darling_critical_1pct = 1.035;

//! Two-sample Kolmogorov-Smirnov statistic sup |F_a - F_b|.
double ks_two_sample(std::span<const double> a, std::span<const double> b);

//! Asymptotic critical value c(alpha) sqrt((na + nb) / (na nb)).
double ks_critical(double alpha, std::size_t na, std::size_t nb);

struct McEstimate
{
  double value;
  double std_error;
};

//! Monte Carlo estimate of the limit covariance from products of
//! (1/u) int_0^1 h(u, v) dv over draws from the model.
McEstimate limit_covariance_hkernel_mc(const CopulaModel& model,
                                       double u,
                                       double u2,
                                       const McConfig& cfg,
                                       const QuadratureSpec& spec = {});

//! int_0^1 h(u, v; obs) dv in closed form given the section integrals.
double integrated_h_kernel(const CopulaModel& model,
                           double u,
                           std::pair<double, double> obs,
                           const QuadratureSpec& spec = {});

struct McSummary
{
  double u;
  double emp_mean; //!< of sqrt(n) (R_hat - R_C)
  double emp_var;
  double theory_mean; //!< limit_mean with d = sqrt(n) / m
  double theory_var;  //!< h-kernel diagonal
  double ad_statistic;
  int n;
  int m;
  int replicates;
  std::uint64_t seed;
};

//! Independent estimations of R_C at each u; the exact R_C comes from the
//! closed form or quadrature.
std::vector<McSummary> replicate_experiment(const CopulaModel& model,
                                            int n,
                                            int m,
                                            std::span<const double> u_list,
                                            const McConfig& cfg,
                                            const QuadratureSpec& spec = {});

//! JSON array of {u, emp_mean, emp_var, theory_mean, theory_var, n, m,
//! replicates, seed, ad_statistic, rng}.
std::string to_json(std::span<const McSummary> rows);

} // namespace ccef
