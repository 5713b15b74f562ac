#include "ccef/asymptotics.hpp"

#include "ccef/ccef_analytic.hpp"
#include "ccef/error.hpp"
#include "ccef/format.hpp"

#include <boost/math/distributions/normal.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace ccef {

namespace {

void check_interior(double u, const char* what)
{
  if (!(u > 0.0 && u < 1.0))
    throw Error(Errc::invalid_domain,
                std::string(what) + " must lie strictly inside (0, 1), got " +
                  format_double(u));
}

double integral_of(const CopulaSection& s, PartialKind kind,
                   const QuadratureSpec& spec)
{
  return integrate_1d_split([&](double v) { return s.partial(kind, v); }, 0.0,
                            1.0, s.kinks(), spec);
}

double ccef_of(const CopulaModel& model, double u, const QuadratureSpec& spec)
{
  return ccef_exact(model, CcefQuery(u), spec);
}

} // namespace

double bias_b(const CopulaModel& model, UnitPoint p)
{
  check_interior(p.u, "u");
  check_interior(p.v, "v");
  const PointValues pv = CopulaSection(model, p.u).values(p.v);
  return 0.5 * (p.u * (1.0 - p.u) * pv.d11 + p.v * (1.0 - p.v) * pv.d22);
}

double limit_mean(const CopulaModel& model,
                  double u,
                  double d,
                  const QuadratureSpec& spec)
{
  check_interior(u, "u");
  if (!(d >= 0.0))
    throw Error(Errc::invalid_domain, "d must be >= 0");
  if (d == 0.0)
    return 0.0;
  const CopulaSection s(model, u);
  const double c11 = integral_of(s, PartialKind::d11, spec);
  return d * (0.5 - ccef_of(model, u, spec)) + d * (u - 1.0) / 2.0 * c11;
}

double limit_mean_from_bias(const CopulaModel& model,
                            double u,
                            double d,
                            const QuadratureSpec& spec)
{
  check_interior(u, "u");
  const CopulaSection s(model, u);
  const double integral = integrate_1d_split(
    [&](double v) {
      const PointValues pv = s.values(v);
      return 0.5 * (u * (1.0 - u) * pv.d11 + v * (1.0 - v) * pv.d22);
    },
    0.0, 1.0, s.kinks(), spec);
  return -d / u * integral;
}

double h_kernel(const CopulaModel& model,
                double u,
                double v,
                std::pair<double, double> obs)
{
  check_interior(u, "u");
  check_interior(v, "v");
  const PointValues pv = CopulaSection(model, u).values(v);
  const double iu = obs.first <= u ? 1.0 : 0.0;
  const double iv = obs.second <= v ? 1.0 : 0.0;
  return iu * iv - pv.c - pv.d1 * (iu - u) - pv.d2 * (iv - v);
}

double remark_h1(const CopulaModel& model,
                 double w1,
                 double w2,
                 const QuadratureSpec& spec)
{
  check_interior(w1, "w1");
  check_interior(w2, "w2");
  const CopulaSection s1(model, w1), s2(model, w2);
  const double c1 = integral_of(s1, PartialKind::d1, spec);
  std::vector<double> breaks = s1.kinks();
  for (double k : s2.kinks())
    breaks.push_back(k);
  const double cc2 = integrate_1d_split(
    [&](double v) { return s1.cdf(v) * s2.partial(PartialKind::d2, v); }, 0.0,
    1.0, breaks, spec);
  return c1 * cc2 / (w1 * w2);
}

double remark_h2(const CopulaModel& model,
                 double w1,
                 double w2,
                 const QuadratureSpec& spec)
{
  check_interior(w1, "w1");
  check_interior(w2, "w2");
  const CopulaSection s1(model, w1), s2(model, w2);
  const double dbl = integrate_2d_min_kink(
    [&](double v, double vp) {
      return s2.partial(PartialKind::d2, v) * s1.cdf(std::min(v, vp));
    },
    spec);
  return dbl / (w1 * w2) -
         (1.0 - ccef_of(model, w1, spec)) * ccef_of(model, w2, spec);
}

double remark_h3(const CopulaModel& model,
                 double w1,
                 double w2,
                 const QuadratureSpec& spec)
{
  check_interior(w1, "w1");
  check_interior(w2, "w2");
  const double hi = std::max(w1, w2), lo = std::min(w1, w2);
  const double c1 = integral_of(CopulaSection(model, w2), PartialKind::d1, spec);
  return ((ccef_of(model, lo, spec) - 1.0) / hi + 1.0 -
          2.0 * ccef_of(model, w1, spec)) *
         c1;
}

double limit_variance_printed(const CopulaModel& model,
                              double u,
                              const QuadratureSpec& spec)
{
  check_interior(u, "u");
  const CopulaSection s(model, u);
  const double r = ccef_of(model, u, spec);
  const double h1 = 0.5 * integral_of(s, PartialKind::d1, spec);
  const double c2sq = integrate_1d_split(
    [&](double v) {
      const double c2 = s.partial(PartialKind::d2, v);
      return c2 * c2 * v;
    },
    0.0, 1.0, s.kinks(), spec);
  return -4.0 * r * r + (4.0 - 1.0 / u) * r -
         4.0 * (2.0 - 1.0 / u) * r * h1 + 2.0 * (3.0 - 2.0 / u) * h1 -
         4.0 * (1.0 - 1.0 / u) * h1 * h1 - 2.0 + 1.0 / u + c2sq / (u * u);
}

double limit_covariance_printed(const CopulaModel& model,
                                double u,
                                double u2,
                                const QuadratureSpec& spec)
{
  check_interior(u, "u");
  check_interior(u2, "u2");
  const double lo = std::min(u, u2), hi = std::max(u, u2);
  const CopulaSection su(model, u), su2(model, u2), slo(model, lo);
  const double r = ccef_of(model, u, spec);
  const double r2 = ccef_of(model, u2, spec);

  const double joint = integrate_2d_min_kink(
    [&](double v, double vp) { return slo.cdf(std::min(v, vp)); }, spec);
  const double c2c2 = integrate_2d_min_kink(
    [&](double v, double vp) {
      return su2.partial(PartialKind::d2, vp) *
             su.partial(PartialKind::d2, v) * std::min(v, vp);
    },
    spec);
  const double c1u = integral_of(su, PartialKind::d1, spec);
  const double c1u2 = integral_of(su2, PartialKind::d1, spec);

  return joint / (u * u2) + (1.0 - r) * (r2 - 1.0) +
         remark_h3(model, u, u2, spec) + remark_h3(model, u2, u, spec) +
         (1.0 / hi - 1.0) * c1u2 * c1u - remark_h2(model, u, u2, spec) -
         remark_h2(model, u2, u, spec) + c2c2 / (u * u2) - r * r2 +
         remark_h1(model, u, u2, spec) + remark_h1(model, u2, u, spec);
}

double limit_covariance_hkernel(const CopulaModel& model,
                                double u,
                                double u2,
                                const QuadratureSpec& spec)
{
  check_interior(u, "u");
  check_interior(u2, "u2");
  const double lo = std::min(u, u2);
  const CopulaSection a(model, u), b(model, u2), c(model, lo);

  // quantities depending only on the outer variable w
  double cached_w = std::numeric_limits<double>::quiet_NaN();
  PointValues b_w;
  double a_w = 0.0, c_w = 0.0;

  auto integrand = [&](double v, double w) {
    if (w != cached_w) {
      b_w = b.values(w);
      a_w = a.cdf(w);
      c_w = c.cdf(w);
      cached_w = w;
    }
    const PointValues a_v = a.values(v);
    const double b_v = b.cdf(v);
    const double c_v = c.cdf(v);
    const bool v_first = v <= w;
    const double c_min = v_first ? c_v : c_w;
    const double a_min = v_first ? a_v.c : a_w;
    const double b_min = v_first ? b_v : b_w.c;

    // A = I(U<=u, V<=v), B = I(U<=u), D = I(V<=v); primes at (u2, w)
    const double cov_aa = c_min - a_v.c * b_w.c;
    const double cov_ab = c_v - a_v.c * u2;
    const double cov_ad = a_min - a_v.c * w;
    const double cov_ba = c_w - u * b_w.c;
    const double cov_bb = lo - u * u2;
    const double cov_bd = a_w - u * w;
    const double cov_da = b_min - v * b_w.c;
    const double cov_db = b_v - v * u2;
    const double cov_dd = std::min(v, w) - v * w;

    return cov_aa - b_w.d1 * cov_ab - b_w.d2 * cov_ad - a_v.d1 * cov_ba +
           a_v.d1 * b_w.d1 * cov_bb + a_v.d1 * b_w.d2 * cov_bd -
           a_v.d2 * cov_da + a_v.d2 * b_w.d1 * cov_db +
           a_v.d2 * b_w.d2 * cov_dd;
  };
  return integrate_2d_min_kink(integrand, spec) / (u * u2);
}

LimitMoments limit_moments(const CopulaModel& model,
                           double u,
                           double d,
                           const QuadratureSpec& spec)
{
  LimitMoments out;
  out.u = u;
  out.mean = limit_mean(model, u, d, spec);
  double var = limit_covariance_hkernel(model, u, u, spec);
  if (var < 0.0) {
    if (var < -1e-9)
      throw Error(Errc::negative_variance,
                  "limit variance " + format_double(var) + " at u = " +
                    format_double(u));
    var = 0.0;
  }
  out.variance = var;
  out.method = LimitMoments::Method::h_kernel_quadrature;
  return out;
}

double normal_quantile(double p)
{
  if (!(p > 0.0 && p < 1.0))
    throw Error(Errc::invalid_domain, "quantile level must lie in (0, 1)");
  return boost::math::quantile(boost::math::normal_distribution<double>(), p);
}

std::vector<AsymptoticBand> confidence_band(const RankedSample& rs,
                                            BernsteinOrder m,
                                            std::span<const double> grid,
                                            double level,
                                            const QuadratureSpec& spec,
                                            bool clamp)
{
  if (!(level > 0.0 && level < 1.0))
    throw Error(Errc::invalid_domain, "band level must lie in (0, 1)");
  const double n = rs.size();
  const double root_n = std::sqrt(n);
  const double d = root_n / m.value();
  const double z = normal_quantile(1.0 - (1.0 - level) / 2.0);
  BernsteinGrid g = empirical_grid(rs, m);
  const CopulaModel plugin = CopulaModel::bernstein_from_grid(g);

  std::vector<AsymptoticBand> out;
  out.reserve(grid.size());
  for (double u : grid) {
    double r_hat = ccef_estimate(g, CcefQuery(u));
    if (clamp)
      r_hat = std::clamp(r_hat, u / 2.0, 1.0 - u / 2.0);
    const LimitMoments lm = limit_moments(plugin, u, d, spec);
    AsymptoticBand band;
    band.u = u;
    band.r_hat = r_hat;
    band.bias_correction = lm.mean / root_n;
    band.std_error = std::sqrt(lm.variance / n);
    band.level = level;
    const double centre = r_hat - band.bias_correction;
    band.lower = centre - z * band.std_error;
    band.upper = centre + z * band.std_error;
    out.push_back(band);
  }
  return out;
}

std::string bands_csv(std::span<const AsymptoticBand> bands)
{
  std::ostringstream os;
  os << "u,r_hat,bias_correction,std_error,lower,upper,level\n";
  for (const auto& b : bands)
    os << format_double(b.u) << ',' << format_double(b.r_hat) << ','
       << format_double(b.bias_correction) << ',' << format_double(b.std_error)
       << ',' << format_double(b.lower) << ',' << format_double(b.upper) << ','
       << format_double(b.level) << '\n';
  return os.str();
}

} // namespace ccef
