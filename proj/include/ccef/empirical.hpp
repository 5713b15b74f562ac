#pragma once

#include "ccef/bernstein.hpp"
#include "ccef/ccef_analytic.hpp"
#include "ccef/copula.hpp"

#include <istream>
#include <span>
#include <utility>
#include <vector>

namespace ccef {

//! Paired raw observations (x_j, y_j), j = 1..n.
class Sample
{
public:
  //! Throws NonFiniteInput on NaN/inf entries, InvalidDomain when n < 2.
  explicit Sample(std::vector<std::pair<double, double>> pairs);

  std::size_t size() const { return pairs_.size(); }
  const std::vector<std::pair<double, double>>& pairs() const { return pairs_; }

private:
  std::vector<std::pair<double, double>> pairs_;
};

//! Rank pairs; each column is a permutation of 1..n.
class RankedSample
{
public:
  //! Throws InvalidDomain if either column is not a permutation of 1..n.
  explicit RankedSample(std::vector<std::pair<int, int>> rank_pairs);

  int size() const { return static_cast<int>(ranks_.size()); }
  const std::vector<std::pair<int, int>>& rank_pairs() const { return ranks_; }

private:
  std::vector<std::pair<int, int>> ranks_;
};

//! Ordinal ranks; ties are ranked by original index (stable).
RankedSample compute_ranks(const Sample& s);

//! C_n(u, v) = (1/n) #{ j : R_Uj / n <= u, R_Vj / n <= v }.
double empirical_copula_cdf(const RankedSample& rs, UnitPoint p);

//! C_n(k/m, l/m) for k, l = 0..m in O(n + m^2) via 2-D cumulative counts.
BernsteinGrid empirical_grid(const RankedSample& rs, BernsteinOrder m);

struct EstimatorConfig
{
  enum class Rule
  {
    explicit_order,
    sqrt_n
  };
  Rule rule = Rule::sqrt_n;
  int m = 0;      //!< used by explicit_order
  double d = 1.0; //!< target sqrt(n) / m for sqrt_n
  bool clamp = false; //!< clamp estimates into [u/2, 1 - u/2]
};

//! explicit -> cfg.m; sqrt_n -> max(1, round(sqrt(n) / max(d, 1))).
BernsteinOrder choose_order(int n, const EstimatorConfig& cfg);

//! 1 - 1 / ((m + 1) u) sum_{k,l=0}^m C_n(k/m, l/m) P_{k,m}(u).
double ccef_estimate(const RankedSample& rs, BernsteinOrder m, CcefQuery q);

//! Same sum from a precomputed empirical grid.
double ccef_estimate(const BernsteinGrid& empirical, CcefQuery q);

CcefCurve ccef_estimate_curve(const RankedSample& rs,
                              BernsteinOrder m,
                              std::span<const double> grid,
                              bool clamp = false);

//! Two numeric columns, comma-separated, optional header, blank lines
//! skipped. Throws ParseError / NonFiniteInput naming the 1-based line.
Sample read_sample_csv(std::istream& in);

} // namespace ccef
