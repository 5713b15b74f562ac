#include "ccef/ccef_analytic.hpp"

#include "ccef/error.hpp"
#include "ccef/format.hpp"

#include <cmath>
#include <sstream>

namespace ccef {

CcefQuery::CcefQuery(double u)
  : u_(u)
{
  if (!(u > 0.0 && u < 1.0))
    throw Error(Errc::invalid_domain,
                "CCEF is defined for u strictly inside (0, 1), got " +
                  format_double(u));
}

std::string Provenance::to_string() const
{
  switch (kind) {
    case Kind::exact:
      return "exact";
    case Kind::bernstein:
      return "bernstein:" + std::to_string(m);
    case Kind::estimate:
      return "estimate:" + std::to_string(n) + ":" + std::to_string(m);
  }
  return "exact";
}

void validate(const CcefCurve& curve)
{
  if (curve.grid.empty())
    throw Error(Errc::invalid_domain, "curve grid is empty");
  if (curve.grid.size() != curve.values.size())
    throw Error(Errc::invalid_domain, "curve grid and values differ in length");
  for (std::size_t i = 0; i < curve.grid.size(); ++i) {
    const double u = curve.grid[i];
    if (!(u > 0.0 && u < 1.0))
      throw Error(Errc::invalid_domain, "curve grid point outside (0, 1)");
    if (i > 0 && !(u > curve.grid[i - 1]))
      throw Error(Errc::invalid_domain, "curve grid not strictly increasing");
  }
}

std::string to_csv(const CcefCurve& curve)
{
  validate(curve);
  std::ostringstream os;
  os << "u,value,provenance\n";
  const std::string tag = curve.provenance.to_string();
  for (std::size_t i = 0; i < curve.grid.size(); ++i)
    os << format_double(curve.grid[i]) << ',' << format_double(curve.values[i])
       << ',' << tag << '\n';
  return os.str();
}

double ccef_by_integral(const CopulaModel& model,
                        CcefQuery q,
                        const QuadratureSpec& spec)
{
  const double u = q.u();
  const CopulaSection section(model, u);
  const double area =
    integrate_1d_split([&](double v) { return section.cdf(v); }, 0.0, 1.0,
                       section.kinks(), spec);
  return 1.0 - area / u;
}

namespace {

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

bool has_closed_form(const CopulaModel& model)
{
  return std::visit(
    overloaded{
      [](const PolynomialCrossSection&) { return false; },
      [](const BernsteinOf&) { return false; },
      [](const Mixture& m) {
        for (const auto& c : m.components)
          if (!has_closed_form(c.model))
            return false;
        return true;
      },
      [](const auto&) { return true; },
    },
    model.node().family);
}

double ccef_closed_form(const CopulaModel& model, CcefQuery q)
{
  const double u = q.u();
  return std::visit(
    overloaded{
      [](const Independence&) { return 0.5; },
      [&](const FrechetUpper&) { return u / 2.0; },
      [&](const FrechetLower&) { return 1.0 - u / 2.0; },
      [&](const Fgm& f) { return (3.0 + f.theta * (u - 1.0)) / 6.0; },
      [&](const LinFgm& f) {
        const double t = f.theta, p = f.phi;
        return (0.5 - t / 6.0 - p * t / 12.0) + (t / 6.0 + t * p / 6.0) * u -
               (p * t / 12.0) * u * u;
      },
      [&](const Mixture& m) {
        double r = 0.0;
        for (const auto& c : m.components)
          r += c.weight * ccef_closed_form(c.model, q);
        return r;
      },
      [](const auto&) -> double {
        throw Error(Errc::no_closed_form,
                    "no closed-form CCEF for this family");
      },
    },
    model.node().family);
}

double ccef_polynomial(std::span<const double> alpha_integrals, CcefQuery q)
{
  if (alpha_integrals.empty())
    throw Error(Errc::invalid_domain, "alpha integrals list is empty");
  // Horner in u
  double s = 0.0;
  for (auto it = alpha_integrals.rbegin(); it != alpha_integrals.rend(); ++it)
    s = s * q.u() + *it;
  return 1.0 - s;
}

double ccef_by_regression_average(const CopulaModel& model,
                                  CcefQuery q,
                                  const QuadratureSpec& spec)
{
  const double u = q.u();
  auto regression = [&](double w) {
    const CopulaSection section(model, w);
    return 1.0 - integrate_1d_split(
                   [&](double v) { return section.partial(PartialKind::d1, v); },
                   0.0, 1.0, section.kinks(), spec);
  };
  return integrate_1d(regression, 0.0, u, spec) / u;
}

double ccef_exact(const CopulaModel& model,
                  CcefQuery q,
                  const QuadratureSpec& spec)
{
  if (has_closed_form(model))
    return ccef_closed_form(model, q);
  return ccef_by_integral(model, q, spec);
}

CcefCurve ccef_exact_curve(const CopulaModel& model,
                           std::span<const double> grid,
                           const QuadratureSpec& spec)
{
  CcefCurve curve;
  curve.grid.assign(grid.begin(), grid.end());
  curve.values.reserve(grid.size());
  for (double u : grid)
    curve.values.push_back(ccef_exact(model, CcefQuery(u), spec));
  curve.provenance = Provenance::exact();
  validate(curve);
  return curve;
}

CcefCurve ccef_mixture(std::span<const std::pair<double, CcefCurve>> curves)
{
  if (curves.empty())
    throw Error(Errc::grid_mismatch, "no curves to mix");
  double total = 0.0;
  for (const auto& [w, c] : curves) {
    if (!(w >= 0.0 && w <= 1.0))
      throw Error(Errc::param_out_of_range, "mixture weight outside [0, 1]");
    total += w;
    if (c.grid != curves.front().second.grid ||
        c.values.size() != c.grid.size())
      throw Error(Errc::grid_mismatch, "curves are on different grids");
  }
  if (std::abs(total - 1.0) > 1e-12)
    throw Error(Errc::param_out_of_range, "mixture weights do not sum to 1");

  CcefCurve out;
  out.grid = curves.front().second.grid;
  out.values.assign(out.grid.size(), 0.0);
  out.provenance = curves.front().second.provenance;
  for (const auto& [w, c] : curves)
    for (std::size_t i = 0; i < out.values.size(); ++i)
      out.values[i] += w * c.values[i];
  return out;
}

} // namespace ccef
