#include "ccef/bernstein.hpp"

#include "ccef/error.hpp"
#include "ccef/format.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ccef {

namespace {

constexpr int log_space_order = 500;

} // namespace

BernsteinOrder::BernsteinOrder(int m)
  : m_(m)
{
  if (m < 1)
    throw Error(Errc::param_out_of_range,
                "Bernstein order must be >= 1, got " + std::to_string(m));
}

double bernstein_basis(int k, int m, double x)
{
  if (m < 0 || k < 0 || k > m)
    throw Error(Errc::index_out_of_range,
                "basis index k = " + std::to_string(k) + " outside [0, " +
                  std::to_string(m) + "]");
  if (!(x >= 0.0 && x <= 1.0))
    throw Error(Errc::invalid_domain, "basis argument outside [0, 1]");
  if (x == 0.0)
    return k == 0 ? 1.0 : 0.0;
  if (x == 1.0)
    return k == m ? 1.0 : 0.0;
  if (m > log_space_order) {
    const double log_binom =
      std::lgamma(m + 1.0) - std::lgamma(k + 1.0) - std::lgamma(m - k + 1.0);
    return std::exp(log_binom + k * std::log(x) + (m - k) * std::log1p(-x));
  }
  double binom = 1.0;
  for (int i = 1; i <= k; ++i)
    binom = binom * (m - k + i) / i;
  return binom * std::pow(x, k) * std::pow(1.0 - x, m - k);
}

void bernstein_basis_all(int m, double x, std::span<double> out)
{
  std::fill(out.begin(), out.begin() + m + 1, 0.0);
  if (x <= 0.0) {
    out[0] = 1.0;
    return;
  }
  if (x >= 1.0) {
    out[m] = 1.0;
    return;
  }
  if (m > log_space_order) {
    const double lx = std::log(x), ly = std::log1p(-x);
    double log_binom = 0.0;
    for (int k = 0; k <= m; ++k) {
      out[k] = std::exp(log_binom + k * lx + (m - k) * ly);
      log_binom += std::log(static_cast<double>(m - k)) -
                   std::log(static_cast<double>(k + 1));
    }
    return;
  }
  if (x <= 0.5) {
    const double t = x / (1.0 - x);
    double p = std::pow(1.0 - x, m);
    for (int k = 0; k <= m; ++k) {
      out[k] = p;
      p *= t * (m - k) / (k + 1);
    }
  } else {
    const double t = (1.0 - x) / x;
    double p = std::pow(x, m);
    for (int k = m; k >= 0; --k) {
      out[k] = p;
      p *= t * k / (m - k + 1);
    }
  }
}

BernsteinGrid bernstein_grid(const CopulaModel& model, BernsteinOrder order)
{
  const int m = order.value();
  BernsteinGrid g;
  g.order = m;
  g.values.resize((m + 1) * (m + 1));
  for (int k = 0; k <= m; ++k) {
    const double u = static_cast<double>(k) / m;
    const CopulaSection section(model, u);
    for (int l = 0; l <= m; ++l)
      g.values[k * (m + 1) + l] = section.cdf(static_cast<double>(l) / m);
  }
  return g;
}

double bernstein_copula_cdf(const CopulaModel& model,
                            BernsteinOrder order,
                            UnitPoint p)
{
  if (!(p.u >= 0.0 && p.u <= 1.0 && p.v >= 0.0 && p.v <= 1.0))
    throw Error(Errc::invalid_domain, "point outside the unit square");
  const int m = order.value();
  std::vector<double> pu(m + 1), pv(m + 1);
  bernstein_basis_all(m, p.u, pu);
  bernstein_basis_all(m, p.v, pv);
  double sum = 0.0;
  for (int k = 1; k <= m; ++k) {
    const double x = static_cast<double>(k) / m;
    const CopulaSection section(model, x);
    double row = 0.0;
    for (int l = 1; l <= m; ++l)
      row += section.cdf(static_cast<double>(l) / m) * pv[l];
    sum += row * pu[k];
  }
  return sum;
}

double ccef_bernstein(const BernsteinGrid& grid, CcefQuery q)
{
  const int m = grid.order;
  const double u = q.u();
  std::vector<double> pu(m + 1);
  bernstein_basis_all(m, u, pu);
  double sum = 0.0;
  for (int k = 1; k <= m; ++k) {
    double row = 0.0;
    for (int l = 1; l <= m; ++l)
      row += grid.at(k, l);
    sum += row * pu[k];
  }
  return 1.0 - sum / ((m + 1) * u);
}

double ccef_bernstein(const CopulaModel& model, BernsteinOrder m, CcefQuery q)
{
  return ccef_bernstein(bernstein_grid(model, m), q);
}

double rate_bound(double lipschitz_m, double u0, BernsteinOrder m)
{
  if (!(lipschitz_m >= 0.0) || !std::isfinite(lipschitz_m))
    throw Error(Errc::invalid_domain, "rate constant must be >= 0");
  if (!(u0 > 0.0 && u0 < 1.0))
    throw Error(Errc::invalid_domain, "u0 must lie in (0, 1)");
  return 7.0 * lipschitz_m / (12.0 * u0 * m.value());
}

double estimate_rate_constant(const CopulaModel& model)
{
  constexpr int steps = 200;
  const double h = 1.0 / (steps + 1);
  double best = 0.0;
  for (int i = 1; i <= steps; ++i) {
    const double u = i * h;
    const CopulaSection here(model, u);
    const CopulaSection next(model, u + h);
    for (int j = 1; j <= steps; ++j) {
      const double v = j * h;
      const PointValues a = here.values(v);
      best = std::max({best, std::abs(a.d11), std::abs(a.d22)});
      if (i < steps) {
        const double dc2 = next.partial(PartialKind::d2, v) - a.d2;
        best = std::max(best, std::abs(dc2) / h);
      }
      if (j < steps) {
        const double dc1 = here.partial(PartialKind::d1, v + h) - a.d1;
        best = std::max(best, std::abs(dc1) / h);
      }
    }
  }
  return best;
}

std::vector<RateSweepRow> empirical_rate_sweep(const CopulaModel& model,
                                               std::span<const double> u_list,
                                               std::span<const int> m_list,
                                               double lipschitz_m,
                                               double u0)
{
  if (u_list.empty() || m_list.empty())
    throw Error(Errc::invalid_domain, "sweep needs u and m values");
  if (u0 <= 0.0)
    u0 = *std::min_element(u_list.begin(), u_list.end());
  std::vector<double> exact;
  exact.reserve(u_list.size());
  for (double u : u_list)
    exact.push_back(ccef_exact(model, CcefQuery(u)));

  std::vector<RateSweepRow> rows;
  for (int mv : m_list) {
    const BernsteinOrder m(mv);
    const BernsteinGrid grid = bernstein_grid(model, m);
    const double bound = lipschitz_m >= 0.0
                           ? rate_bound(lipschitz_m, u0, m)
                           : std::numeric_limits<double>::quiet_NaN();
    for (std::size_t i = 0; i < u_list.size(); ++i) {
      const double value = ccef_bernstein(grid, CcefQuery(u_list[i]));
      rows.push_back(
        {u_list[i], mv, value, std::abs(exact[i] - value), bound});
    }
  }
  return rows;
}

std::string rate_sweep_csv(std::span<const RateSweepRow> rows, bool with_value)
{
  std::ostringstream os;
  os << (with_value ? "u,m,value,abs_error,bound\n" : "u,m,abs_error,bound\n");
  for (const auto& r : rows) {
    os << format_double(r.u) << ',' << r.m << ',';
    if (with_value)
      os << format_double(r.value) << ',';
    os << format_double(r.abs_error) << ',' << format_double(r.bound) << '\n';
  }
  return os.str();
}

} // namespace ccef
