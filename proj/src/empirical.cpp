#include "ccef/empirical.hpp"

#include "ccef/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <numeric>
#include <string>

namespace ccef {

Sample::Sample(std::vector<std::pair<double, double>> pairs)
  : pairs_(std::move(pairs))
{
  if (pairs_.size() < 2)
    throw Error(Errc::invalid_domain, "a sample needs at least 2 pairs");
  for (std::size_t j = 0; j < pairs_.size(); ++j)
    if (!std::isfinite(pairs_[j].first) || !std::isfinite(pairs_[j].second))
      throw Error(Errc::non_finite_input,
                  "non-finite value in pair " + std::to_string(j + 1));
}

RankedSample::RankedSample(std::vector<std::pair<int, int>> rank_pairs)
  : ranks_(std::move(rank_pairs))
{
  const int n = static_cast<int>(ranks_.size());
  if (n < 2)
    throw Error(Errc::invalid_domain, "a ranked sample needs n >= 2");
  std::vector<char> seen_u(n + 1, 0), seen_v(n + 1, 0);
  for (const auto& [ru, rv] : ranks_) {
    if (ru < 1 || ru > n || rv < 1 || rv > n || seen_u[ru] || seen_v[rv])
      throw Error(Errc::invalid_domain,
                  "rank columns must be permutations of 1..n");
    seen_u[ru] = seen_v[rv] = 1;
  }
}

namespace {

std::vector<int> ordinal_ranks(const std::vector<double>& x)
{
  std::vector<int> order(x.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return x[a] < x[b]; });
  std::vector<int> rank(x.size());
  for (std::size_t r = 0; r < order.size(); ++r)
    rank[order[r]] = static_cast<int>(r) + 1;
  return rank;
}

} // namespace

RankedSample compute_ranks(const Sample& s)
{
  std::vector<double> x, y;
  x.reserve(s.size());
  y.reserve(s.size());
  for (const auto& [a, b] : s.pairs()) {
    x.push_back(a);
    y.push_back(b);
  }
  const std::vector<int> rx = ordinal_ranks(x), ry = ordinal_ranks(y);
  std::vector<std::pair<int, int>> out(s.size());
  for (std::size_t j = 0; j < s.size(); ++j)
    out[j] = {rx[j], ry[j]};
  return RankedSample(std::move(out));
}

double empirical_copula_cdf(const RankedSample& rs, UnitPoint p)
{
  const double n = rs.size();
  int count = 0;
  for (const auto& [ru, rv] : rs.rank_pairs())
    if (ru / n <= p.u && rv / n <= p.v)
      ++count;
  return count / n;
}

BernsteinGrid empirical_grid(const RankedSample& rs, BernsteinOrder order)
{
  const int m = order.value();
  const long long n = rs.size();
  const int w = m + 1;
  std::vector<double> counts(w * w, 0.0);
  // smallest k with R / n <= k / m
  auto cell = [&](long long r) {
    return static_cast<int>((r * m + n - 1) / n);
  };
  for (const auto& [ru, rv] : rs.rank_pairs())
    counts[cell(ru) * w + cell(rv)] += 1.0;
  for (int k = 0; k <= m; ++k)
    for (int l = 0; l <= m; ++l) {
      double c = counts[k * w + l];
      if (k > 0)
        c += counts[(k - 1) * w + l];
      if (l > 0)
        c += counts[k * w + l - 1];
      if (k > 0 && l > 0)
        c -= counts[(k - 1) * w + l - 1];
      counts[k * w + l] = c;
    }
  BernsteinGrid g;
  g.order = m;
  g.values.resize(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    g.values[i] = counts[i] / static_cast<double>(n);
  return g;
}

BernsteinOrder choose_order(int n, const EstimatorConfig& cfg)
{
  if (n < 2)
    throw Error(Errc::invalid_domain, "sample size must be >= 2");
  if (cfg.rule == EstimatorConfig::Rule::explicit_order)
    return BernsteinOrder(cfg.m);
  if (!(cfg.d >= 0.0))
    throw Error(Errc::invalid_domain, "target ratio d must be >= 0");
  // d = 0 asks for m much larger than sqrt(n); use m = n
  if (cfg.d == 0.0)
    return BernsteinOrder(n);
  const long m = std::lround(std::sqrt(static_cast<double>(n)) / cfg.d);
  return BernsteinOrder(static_cast<int>(std::max(1L, m)));
}

double ccef_estimate(const BernsteinGrid& empirical, CcefQuery q)
{
  const int m = empirical.order;
  const double u = q.u();
  std::vector<double> pu(m + 1);
  bernstein_basis_all(m, u, pu);
  double sum = 0.0;
  for (int k = 0; k <= m; ++k) {
    double row = 0.0;
    for (int l = 0; l <= m; ++l)
      row += empirical.at(k, l);
    sum += row * pu[k];
  }
  return 1.0 - sum / ((m + 1) * u);
}

double ccef_estimate(const RankedSample& rs, BernsteinOrder m, CcefQuery q)
{
  return ccef_estimate(empirical_grid(rs, m), q);
}

CcefCurve ccef_estimate_curve(const RankedSample& rs,
                              BernsteinOrder m,
                              std::span<const double> grid,
                              bool clamp)
{
  const BernsteinGrid g = empirical_grid(rs, m);
  CcefCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.provenance = Provenance::estimate(rs.size(), m.value());
  for (double u : grid) {
    double r = ccef_estimate(g, CcefQuery(u));
    if (clamp)
      r = std::clamp(r, u / 2.0, 1.0 - u / 2.0);
    curve.values.push_back(r);
  }
  validate(curve);
  return curve;
}

namespace {

std::string trim(const std::string& s)
{
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos)
    return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool parse_number(const std::string& field, double& out)
{
  const std::string t = trim(field);
  if (t.empty())
    return false;
  char* end = nullptr;
  out = std::strtod(t.c_str(), &end);
  return end == t.c_str() + t.size();
}

} // namespace

Sample read_sample_csv(std::istream& in)
{
  std::vector<std::pair<double, double>> pairs;
  std::string line;
  int line_no = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty())
      continue;
    const auto comma = line.find(',');
    const bool two_fields =
      comma != std::string::npos && line.find(',', comma + 1) == std::string::npos;
    double x = 0.0, y = 0.0;
    const bool numeric = two_fields && parse_number(line.substr(0, comma), x) &&
                         parse_number(line.substr(comma + 1), y);
    if (!numeric) {
      if (first_content && two_fields) {
        first_content = false;
        continue; // header
      }
      throw Error(Errc::parse_error,
                  "line " + std::to_string(line_no) +
                    ": expected two comma-separated numbers");
    }
    first_content = false;
    if (!std::isfinite(x) || !std::isfinite(y))
      throw Error(Errc::non_finite_input,
                  "line " + std::to_string(line_no) + ": non-finite value");
    pairs.emplace_back(x, y);
  }
  if (pairs.size() < 2)
    throw Error(Errc::invalid_domain, "a sample needs at least 2 rows");
  return Sample(std::move(pairs));
}

} // namespace ccef
