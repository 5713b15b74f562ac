#include "ccef/quadrature.hpp"

#include "ccef/error.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <queue>
#include <vector>

namespace ccef {

namespace {

struct StoredRule
{
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Newton iteration on the Legendre three-term recurrence.
StoredRule make_rule(int order)
{
  StoredRule r;
  r.nodes.resize(order);
  r.weights.resize(order);
  for (int i = 0; i < (order + 1) / 2; ++i) {
    double x = std::cos(std::numbers::pi * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 1; j <= order; ++j) {
        const double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
      }
      dp = order * (x * p0 - p1) / (x * x - 1.0);
      const double dx = p0 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16)
        break;
    }
    // recompute the derivative at the converged node
    double p0 = 1.0, p1 = 0.0;
    for (int j = 1; j <= order; ++j) {
      const double p2 = p1;
      p1 = p0;
      p0 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p2) / j;
    }
    dp = order * (x * p0 - p1) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    r.nodes[i] = -x;
    r.nodes[order - 1 - i] = x;
    r.weights[i] = w;
    r.weights[order - 1 - i] = w;
  }
  if (order % 2 == 1)
    r.nodes[order / 2] = 0.0;
  return r;
}

struct Panel
{
  double a, b;
  double whole;       // rule on [a, b]
  double left, right; // rule on the halves
  double error() const { return std::abs(whole - (left + right)); }
};

struct ByError
{
  bool operator()(const Panel& x, const Panel& y) const
  {
    return x.error() < y.error();
  }
};

} // namespace

void validate(const QuadratureSpec& spec)
{
  if (!(spec.abs_tol > 0.0))
    throw Error(Errc::invalid_domain, "quadrature tolerance must be > 0");
  if (spec.max_subdivisions < 1)
    throw Error(Errc::invalid_domain, "quadrature subdivisions must be >= 1");
  if (spec.panel_order < 1)
    throw Error(Errc::invalid_domain, "Gauss-Legendre order must be >= 1");
}

GaussRule gauss_legendre_rule(int order)
{
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<const StoredRule>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[order];
  if (!slot)
    slot = std::make_unique<const StoredRule>(make_rule(order));
  return {slot->nodes, slot->weights};
}

namespace {

double apply(const GaussRule& rule,
             const std::function<double(double)>& f,
             double a,
             double b)
{
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double s = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i)
    s += rule.weights[i] * f(mid + half * rule.nodes[i]);
  return half * s;
}

} // namespace

double gauss_legendre(const std::function<double(double)>& f,
                      double a,
                      double b,
                      int order)
{
  return apply(gauss_legendre_rule(order), f, a, b);
}

double integrate_1d(const std::function<double(double)>& f,
                    double a,
                    double b,
                    const QuadratureSpec& spec)
{
  validate(spec);
  if (!(a <= b))
    throw Error(Errc::invalid_domain, "integration bounds require a <= b");
  if (a == b)
    return 0.0;
  const GaussRule rule = gauss_legendre_rule(spec.panel_order);
  auto make_panel = [&](double lo, double hi, double whole) {
    const double mid = 0.5 * (lo + hi);
    return Panel{lo, hi, whole, apply(rule, f, lo, mid),
                 apply(rule, f, mid, hi)};
  };

  std::priority_queue<Panel, std::vector<Panel>, ByError> queue;
  queue.push(make_panel(a, b, apply(rule, f, a, b)));
  double total_error = queue.top().error();
  int splits = 0;
  while (total_error > spec.abs_tol) {
    if (splits >= spec.max_subdivisions)
      throw Error(Errc::tolerance_not_reached,
                  "estimated error " + std::to_string(total_error) +
                    " after " + std::to_string(splits) + " subdivisions");
    Panel worst = queue.top();
    queue.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      throw Error(Errc::tolerance_not_reached,
                  "panel width reached machine resolution");
    }
    Panel lp = make_panel(worst.a, mid, worst.left);
    Panel rp = make_panel(mid, worst.b, worst.right);
    total_error += lp.error() + rp.error() - worst.error();
    queue.push(lp);
    queue.push(rp);
    ++splits;
    // refresh the running sum periodically against drift
    if (splits % 64 == 0) {
      auto copy = queue;
      total_error = 0.0;
      while (!copy.empty()) {
        total_error += copy.top().error();
        copy.pop();
      }
    }
  }

  std::vector<Panel> panels;
  panels.reserve(queue.size());
  while (!queue.empty()) {
    panels.push_back(queue.top());
    queue.pop();
  }
  std::sort(panels.begin(), panels.end(),
            [](const Panel& x, const Panel& y) { return x.a < y.a; });
  double sum = 0.0;
  for (const Panel& p : panels)
    sum += p.left + p.right;
  return sum;
}

double integrate_1d_split(const std::function<double(double)>& f,
                          double a,
                          double b,
                          std::span<const double> breaks,
                          const QuadratureSpec& spec)
{
  std::vector<double> cuts{a};
  for (double x : breaks)
    if (x > a && x < b)
      cuts.push_back(x);
  cuts.push_back(b);
  std::sort(cuts.begin(), cuts.end());
  double sum = 0.0;
  for (std::size_t i = 1; i < cuts.size(); ++i)
    sum += integrate_1d(f, cuts[i - 1], cuts[i], spec);
  return sum;
}

double integrate_2d_min_kink(const std::function<double(double, double)>& f,
                             const QuadratureSpec& spec)
{
  validate(spec);
  // inner results feed the outer error estimate, so they get a tighter budget
  QuadratureSpec inner = spec;
  inner.abs_tol = 0.25 * spec.abs_tol;
  auto lower = [&](double w) {
    return integrate_1d([&](double v) { return f(v, w); }, 0.0, w, inner);
  };
  auto upper = [&](double w) {
    return integrate_1d([&](double v) { return f(v, w); }, w, 1.0, inner);
  };
  return integrate_1d(lower, 0.0, 1.0, spec) +
         integrate_1d(upper, 0.0, 1.0, spec);
}

} // namespace ccef
