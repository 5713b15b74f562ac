#include "ccef/mc_oracle.hpp"

#include "ccef/asymptotics.hpp"
#include "ccef/ccef_analytic.hpp"
#include "ccef/error.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace ccef {

void validate(const McConfig& cfg)
{
  if (cfg.n < 2)
    throw Error(Errc::invalid_domain, "Monte Carlo n must be >= 2");
  if (cfg.replicates < 1)
    throw Error(Errc::invalid_domain, "Monte Carlo replicates must be >= 1");
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t index)
{
  std::uint64_t z = root + 0x9E3779B97F4A7C15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

double fgm_inverse(double theta, double u, double t)
{
  const double a = -theta * (1.0 - 2.0 * u);
  const double b = 1.0 + theta * (1.0 - 2.0 * u);
  if (t <= 0.0)
    return 0.0;
  if (std::abs(a) < 1e-12)
    return t / b;
  // root of a v^2 + b v - t = 0 in [0, 1], written without cancellation
  const double v = 2.0 * t / (b + std::sqrt(b * b + 4.0 * a * t));
  return std::clamp(v, 0.0, 1.0);
}

double bisect_inverse(const CopulaSection& s, double t)
{
  double lo = 0.0, hi = 1.0;
  while (hi - lo > 1e-12) {
    const double mid = 0.5 * (lo + hi);
    if (s.partial(PartialKind::d1, mid) < t)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double draw_v(const CopulaModel& model, double u, UniformRng& rng);

double draw_v(const Node& node, const CopulaModel& model, double u,
              UniformRng& rng)
{
  if (std::holds_alternative<Independence>(node.family))
    return rng();
  if (std::holds_alternative<FrechetUpper>(node.family))
    return u;
  if (std::holds_alternative<FrechetLower>(node.family))
    return 1.0 - u;
  if (const auto* f = std::get_if<Fgm>(&node.family))
    return fgm_inverse(f->theta, u, rng());
  if (std::holds_alternative<LinFgm>(node.family))
    return bisect_inverse(CopulaSection(model, u), rng());
  if (const auto* mix = std::get_if<Mixture>(&node.family)) {
    const double pick = rng();
    double acc = 0.0;
    for (const auto& c : mix->components) {
      acc += c.weight;
      if (pick < acc)
        return draw_v(c.model, u, rng);
    }
    return draw_v(mix->components.back().model, u, rng);
  }
  throw Error(Errc::unsupported_family,
              "sampling supports independence, M, W, FGM, Lin and mixtures");
}

double draw_v(const CopulaModel& model, double u, UniformRng& rng)
{
  return draw_v(model.node(), model, u, rng);
}

} // namespace

double conditional_inverse(const CopulaModel& model, double u, double t)
{
  if (!(u >= 0.0 && u <= 1.0 && t >= 0.0 && t <= 1.0))
    throw Error(Errc::invalid_domain, "conditional inverse needs u, t in [0, 1]");
  if (const auto* f = std::get_if<Fgm>(&model.node().family))
    return fgm_inverse(f->theta, u, t);
  return bisect_inverse(CopulaSection(model, u), t);
}

Sample sample(const CopulaModel& model, int n, std::uint64_t seed)
{
  if (n < 2)
    throw Error(Errc::invalid_domain, "sample size must be >= 2");
  UniformRng rng(seed);
  std::vector<std::pair<double, double>> pairs;
  pairs.reserve(n);
  for (int j = 0; j < n; ++j) {
    const double u = rng();
    pairs.emplace_back(u, draw_v(model, u, rng));
  }
  return Sample(std::move(pairs));
}

double mc_ccef(const Sample& s, double u)
{
  double sum = 0.0;
  std::size_t count = 0;
  for (const auto& [x, y] : s.pairs())
    if (x <= u) {
      sum += y;
      ++count;
    }
  if (count == 0)
    throw Error(Errc::empty_conditioning_set, "no observation with x <= u");
  return sum / count;
}

double anderson_darling_normal(std::span<const double> x)
{
  const std::size_t n = x.size();
  if (n < 8)
    throw Error(Errc::invalid_domain, "Anderson-Darling needs n >= 8");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : x)
    ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / (n - 1));
  if (!(sd > 0.0))
    throw Error(Errc::invalid_domain, "Anderson-Darling needs spread");
  std::vector<double> f(n);
  for (std::size_t i = 0; i < n; ++i)
    f[i] = 0.5 * std::erfc(-(x[i] - mean) / sd / std::sqrt(2.0));
  std::sort(f.begin(), f.end());
  constexpr double tiny = 1e-300;
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    s += (2.0 * i + 1.0) * (std::log(std::max(f[i], tiny)) +
                            std::log(std::max(1.0 - f[n - 1 - i], tiny)));
  const double a2 = -static_cast<double>(n) - s / n;
  return a2 * (1.0 + 0.75 / n + 2.25 / (static_cast<double>(n) * n));
}

double ks_two_sample(std::span<const double> a, std::span<const double> b)
{
  if (a.empty() || b.empty())
    throw Error(Errc::invalid_domain, "Kolmogorov-Smirnov needs data");
  std::vector<double> x(a.begin(), a.end()), y(b.begin(), b.end());
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < x.size() && j < y.size()) {
    const double t = std::min(x[i], y[j]);
    while (i < x.size() && x[i] <= t)
      ++i;
    while (j < y.size() && y[j] <= t)
      ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / x.size() -
                             static_cast<double>(j) / y.size()));
  }
  return d;
}

double ks_critical(double alpha, std::size_t na, std::size_t nb)
{
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  return c * std::sqrt(static_cast<double>(na + nb) /
                       (static_cast<double>(na) * nb));
}

namespace {

struct SectionIntegrals
{
  double c, c1, vc2, top;
};

SectionIntegrals section_integrals(const CopulaSection& s,
                                   const QuadratureSpec& spec)
{
  SectionIntegrals r;
  const std::vector<double> breaks = s.kinks();
  r.c = integrate_1d_split([&](double v) { return s.cdf(v); }, 0.0, 1.0,
                           breaks, spec);
  r.c1 = integrate_1d_split(
    [&](double v) { return s.partial(PartialKind::d1, v); }, 0.0, 1.0, breaks,
    spec);
  r.vc2 = integrate_1d_split(
    [&](double v) { return v * s.partial(PartialKind::d2, v); }, 0.0, 1.0,
    breaks, spec);
  r.top = s.cdf(1.0);
  return r;
}

// int_0^1 h(u, v) dv for one observation:
// I(U<=u)(1 - V) - int C - (I(U<=u) - u) int C1 - (C(u,1) - C(u,V)) + int v C2
double integrated_h(const CopulaSection& s,
                    const SectionIntegrals& k,
                    std::pair<double, double> obs)
{
  const double u = s.u();
  const double iu = obs.first <= u ? 1.0 : 0.0;
  return iu * (1.0 - obs.second) - k.c - (iu - u) * k.c1 -
         (k.top - s.cdf(obs.second)) + k.vc2;
}

} // namespace

double integrated_h_kernel(const CopulaModel& model,
                           double u,
                           std::pair<double, double> obs,
                           const QuadratureSpec& spec)
{
  const CopulaSection s(model, u);
  return integrated_h(s, section_integrals(s, spec), obs);
}

McEstimate limit_covariance_hkernel_mc(const CopulaModel& model,
                                       double u,
                                       double u2,
                                       const McConfig& cfg,
                                       const QuadratureSpec& spec)
{
  validate(cfg);
  if (!(u > 0.0 && u < 1.0 && u2 > 0.0 && u2 < 1.0))
    throw Error(Errc::invalid_domain, "covariance arguments must be in (0, 1)");
  const CopulaSection s1(model, u), s2(model, u2);
  const SectionIntegrals k1 = section_integrals(s1, spec);
  const SectionIntegrals k2 = section_integrals(s2, spec);
  const Sample draws = sample(model, cfg.n, cfg.seed);
  const double n = draws.size();
  double m1 = 0.0, m2 = 0.0;
  std::vector<double> a, b;
  a.reserve(draws.size());
  b.reserve(draws.size());
  for (const auto& obs : draws.pairs()) {
    a.push_back(integrated_h(s1, k1, obs) / u);
    b.push_back(integrated_h(s2, k2, obs) / u2);
    m1 += a.back();
    m2 += b.back();
  }
  m1 /= n;
  m2 /= n;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double p = (a[j] - m1) * (b[j] - m2);
    sum += p;
    sum_sq += p * p;
  }
  const double mean = sum / n;
  const double var_p = (sum_sq / n - mean * mean) * n / (n - 1.0);
  return {sum / (n - 1.0), std::sqrt(std::max(var_p, 0.0) / n)};
}

std::vector<McSummary> replicate_experiment(const CopulaModel& model,
                                            int n,
                                            int m,
                                            std::span<const double> u_list,
                                            const McConfig& cfg,
                                            const QuadratureSpec& spec)
{
  if (cfg.replicates < 2)
    throw Error(Errc::invalid_domain, "experiment needs >= 2 replicates");
  if (n < 2)
    throw Error(Errc::invalid_domain, "experiment needs n >= 2");
  const BernsteinOrder order(m);
  const double root_n = std::sqrt(static_cast<double>(n));
  std::vector<double> truth;
  for (double u : u_list)
    truth.push_back(ccef_exact(model, CcefQuery(u), spec));

  std::vector<std::vector<double>> errors(u_list.size());
  for (int r = 0; r < cfg.replicates; ++r) {
    const Sample s = sample(model, n, derive_seed(cfg.seed, r));
    const BernsteinGrid g = empirical_grid(compute_ranks(s), order);
    for (std::size_t i = 0; i < u_list.size(); ++i)
      errors[i].push_back(root_n *
                          (ccef_estimate(g, CcefQuery(u_list[i])) - truth[i]));
  }

  std::vector<McSummary> out;
  for (std::size_t i = 0; i < u_list.size(); ++i) {
    const auto& e = errors[i];
    const double reps = e.size();
    const double mean = std::accumulate(e.begin(), e.end(), 0.0) / reps;
    double ss = 0.0;
    for (double x : e)
      ss += (x - mean) * (x - mean);
    McSummary row;
    row.u = u_list[i];
    row.emp_mean = mean;
    row.emp_var = ss / (reps - 1.0);
    row.theory_mean = limit_mean(model, u_list[i], root_n / m, spec);
    row.theory_var =
      limit_covariance_hkernel(model, u_list[i], u_list[i], spec);
    row.ad_statistic = e.size() >= 8 ? anderson_darling_normal(e) : 0.0;
    row.n = n;
    row.m = m;
    row.replicates = cfg.replicates;
    row.seed = cfg.seed;
    out.push_back(row);
  }
  return out;
}

std::string to_json(std::span<const McSummary> rows)
{
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : rows)
    arr.push_back({{"u", r.u},
                   {"emp_mean", r.emp_mean},
                   {"emp_var", r.emp_var},
                   {"theory_mean", r.theory_mean},
                   {"theory_var", r.theory_var},
                   {"n", r.n},
                   {"m", r.m},
                   {"replicates", r.replicates},
                   {"seed", r.seed},
                   {"ad_statistic", r.ad_statistic},
                   {"rng", std::string(rng_algorithm)}});
  return arr.dump(2);
}

} // namespace ccef
