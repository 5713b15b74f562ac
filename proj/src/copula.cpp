#include "ccef/copula.hpp"

#include "ccef/bernstein.hpp"
#include "ccef/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ccef {

namespace {

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

// A(x) = x(1 - x) and A2(x) = x(1 - x)^2 generate FGM and Lin:
// C = uv + theta (A(u) A(v) + phi A2(u) A2(v)).
struct Factor
{
  double a, da, dda;
};

Factor quad_factor(double x)
{
  return {x * (1.0 - x), 1.0 - 2.0 * x, -2.0};
}

Factor cubic_factor(double x)
{
  const double y = 1.0 - x;
  return {x * y * y, 1.0 - 4.0 * x + 3.0 * x * x, -4.0 + 6.0 * x};
}

PointValues lin_values(double theta, double phi, double u, double v)
{
  const Factor au = quad_factor(u), av = quad_factor(v);
  const Factor bu = cubic_factor(u), bv = cubic_factor(v);
  PointValues r;
  r.c = u * v + theta * (au.a * av.a + phi * bu.a * bv.a);
  r.d1 = v + theta * (au.da * av.a + phi * bu.da * bv.a);
  r.d2 = u + theta * (au.a * av.da + phi * bu.a * bv.da);
  r.d11 = theta * (au.dda * av.a + phi * bu.dda * bv.a);
  r.d22 = theta * (au.a * av.dda + phi * bu.a * bv.dda);
  return r;
}

// Horner evaluation of a coefficient vector and its first two derivatives.
struct PolyValue
{
  double p, dp, ddp;
};

PolyValue eval_poly(const std::vector<double>& c, double x)
{
  PolyValue r{0.0, 0.0, 0.0};
  for (auto it = c.rbegin(); it != c.rend(); ++it) {
    r.ddp = r.ddp * x + 2.0 * r.dp;
    r.dp = r.dp * x + r.p;
    r.p = r.p * x + *it;
  }
  return r;
}

PointValues polynomial_values(const PolynomialCrossSection& pcs,
                              double u,
                              double v)
{
  PointValues r;
  const int k = static_cast<int>(pcs.alpha.size());
  for (int i = 1; i <= k; ++i) {
    const PolyValue a = eval_poly(pcs.alpha[i - 1], v);
    const double ui = std::pow(u, i);
    const double dui = i * std::pow(u, i - 1);
    const double ddui = i >= 2 ? i * (i - 1) * std::pow(u, i - 2) : 0.0;
    r.c += a.p * ui;
    r.d1 += a.p * dui;
    r.d2 += a.dp * ui;
    r.d11 += a.p * ddui;
    r.d22 += a.ddp * ui;
  }
  return r;
}

double polynomial_density(const PolynomialCrossSection& pcs, double u, double v)
{
  double r = 0.0;
  const int k = static_cast<int>(pcs.alpha.size());
  for (int i = 1; i <= k; ++i)
    r += eval_poly(pcs.alpha[i - 1], v).dp * i * std::pow(u, i - 1);
  return r;
}

void check_polynomial(const PolynomialCrossSection& pcs)
{
  constexpr double tol = 1e-10;
  constexpr int steps = 20;
  if (pcs.alpha.empty())
    throw Error(Errc::param_out_of_range,
                "polynomial cross sections need at least one alpha_i");
  for (int a = 0; a <= steps; ++a) {
    const double x = static_cast<double>(a) / steps;
    if (std::abs(polynomial_values(pcs, x, 0.0).c) > tol)
      throw Error(Errc::param_out_of_range, "C(u, 0) = 0 violated");
    if (std::abs(polynomial_values(pcs, x, 1.0).c - x) > tol)
      throw Error(Errc::param_out_of_range, "C(u, 1) = u violated");
    if (std::abs(polynomial_values(pcs, 1.0, x).c - x) > tol)
      throw Error(Errc::param_out_of_range, "C(1, v) = v violated");
    for (int b = 0; b <= steps; ++b) {
      const double y = static_cast<double>(b) / steps;
      if (polynomial_density(pcs, x, y) < -tol)
        throw Error(Errc::param_out_of_range,
                    "negative copula density (not 2-increasing)");
    }
  }
}

bool interior(double x)
{
  return x > 0.0 && x < 1.0;
}

void check_unit(UnitPoint p)
{
  if (!(p.u >= 0.0 && p.u <= 1.0 && p.v >= 0.0 && p.v <= 1.0))
    throw Error(Errc::invalid_domain, "point outside the unit square");
}

std::string describe(double x)
{
  std::ostringstream os;
  os << x;
  return os.str();
}

} // namespace

CopulaModel::CopulaModel(std::shared_ptr<const Node> node)
  : node_(std::move(node))
{}

CopulaModel CopulaModel::independence()
{
  return CopulaModel(std::make_shared<const Node>(Node{Independence{}}));
}

CopulaModel CopulaModel::frechet_upper()
{
  return CopulaModel(std::make_shared<const Node>(Node{FrechetUpper{}}));
}

CopulaModel CopulaModel::frechet_lower()
{
  return CopulaModel(std::make_shared<const Node>(Node{FrechetLower{}}));
}

CopulaModel CopulaModel::fgm(double theta)
{
  return CopulaModel(std::make_shared<const Node>(Node{Fgm{theta}}));
}

CopulaModel CopulaModel::lin(double theta, double phi)
{
  return CopulaModel(std::make_shared<const Node>(Node{LinFgm{theta, phi}}));
}

CopulaModel CopulaModel::polynomial(std::vector<std::vector<double>> alpha)
{
  PolynomialCrossSection pcs{std::move(alpha)};
  check_polynomial(pcs);
  return CopulaModel(std::make_shared<const Node>(Node{std::move(pcs)}));
}

CopulaModel CopulaModel::mixture(std::vector<MixtureComponent> components)
{
  return CopulaModel(
    std::make_shared<const Node>(Node{Mixture{std::move(components)}}));
}

CopulaModel CopulaModel::bernstein(const CopulaModel& inner, int order)
{
  auto grid = std::make_shared<const BernsteinGrid>(
    bernstein_grid(inner, BernsteinOrder(order)));
  return CopulaModel(std::make_shared<const Node>(
    Node{BernsteinOf{std::make_shared<const CopulaModel>(inner), grid}}));
}

CopulaModel CopulaModel::bernstein_from_grid(BernsteinGrid grid)
{
  if (grid.order < 1 ||
      grid.values.size() !=
        static_cast<std::size_t>((grid.order + 1) * (grid.order + 1)))
    throw Error(Errc::param_out_of_range,
                "Bernstein grid must be (m + 1) x (m + 1) with m >= 1");
  return CopulaModel(std::make_shared<const Node>(Node{BernsteinOf{
    nullptr, std::make_shared<const BernsteinGrid>(std::move(grid))}}));
}

double lin_upper_limit(double theta)
{
  return (3.0 - theta + std::sqrt(9.0 - 6.0 * theta - 3.0 * theta * theta)) /
         2.0;
}

void validate(const CopulaModel& model)
{
  std::visit(
    overloaded{
      [](const Independence&) {},
      [](const FrechetUpper&) {},
      [](const FrechetLower&) {},
      [](const Fgm& f) {
        if (!(f.theta >= -1.0 && f.theta <= 1.0))
          throw Error(Errc::param_out_of_range,
                      "FGM theta = " + describe(f.theta) +
                        " outside [-1, 1]");
      },
      [](const LinFgm& f) {
        if (!(f.theta >= -1.0 && f.theta <= 1.0))
          throw Error(Errc::param_out_of_range,
                      "Lin theta = " + describe(f.theta) +
                        " outside [-1, 1]");
        if (!std::isfinite(f.phi))
          throw Error(Errc::param_out_of_range, "Lin phi must be finite");
        const double s = f.theta * (1.0 + f.phi);
        if (s < -1.0 - f.theta || s > lin_upper_limit(f.theta))
          throw Error(Errc::param_out_of_range,
                      "Lin constraint -1 - theta <= theta (1 + phi) <= "
                      "(3 - theta + sqrt(9 - 6 theta - 3 theta^2)) / 2 "
                      "violated: theta (1 + phi) = " +
                        describe(s));
      },
      [](const PolynomialCrossSection& p) { check_polynomial(p); },
      [](const Mixture& m) {
        if (m.components.empty())
          throw Error(Errc::param_out_of_range, "mixture has no components");
        double total = 0.0;
        for (const auto& c : m.components) {
          if (!(c.weight >= 0.0 && c.weight <= 1.0))
            throw Error(Errc::param_out_of_range,
                        "mixture weight " + describe(c.weight) +
                          " outside [0, 1]");
          total += c.weight;
          validate(c.model);
        }
        if (std::abs(total - 1.0) > 1e-12)
          throw Error(Errc::param_out_of_range,
                      "mixture weights sum to " + describe(total) +
                        ", not 1");
      },
      [](const BernsteinOf& b) {
        if (!b.grid || b.grid->order < 1)
          throw Error(Errc::param_out_of_range,
                      "Bernstein order must be >= 1");
        if (b.inner)
          validate(*b.inner);
      },
    },
    model.node().family);
}

double cdf(const CopulaModel& model, UnitPoint p)
{
  check_unit(p);
  return CopulaSection(model, p.u).cdf(p.v);
}

double partial(const CopulaModel& model, PartialKind kind, UnitPoint p)
{
  check_unit(p);
  return CopulaSection(model, p.u).partial(kind, p.v);
}

CopulaSection::CopulaSection(const CopulaModel& model, double u)
  : node_(&model.node())
  , u_(u)
{
  if (const auto* mix = std::get_if<Mixture>(&node_->family)) {
    for (const auto& c : mix->components) {
      weights_.push_back(c.weight);
      children_.emplace_back(c.model, u);
    }
  } else if (const auto* b = std::get_if<BernsteinOf>(&node_->family)) {
    const BernsteinGrid& g = *b->grid;
    const int m = g.order;
    // weights of P_{k,m}(u) and its derivatives per grid row k
    std::vector<double> p(m + 1), dp(m + 1, 0.0), ddp(m + 1, 0.0);
    bernstein_basis_all(m, u, p);
    std::vector<double> q(m);
    bernstein_basis_all(m - 1, u, q);
    for (int k = 0; k <= m; ++k)
      dp[k] = m * ((k >= 1 ? q[k - 1] : 0.0) - (k <= m - 1 ? q[k] : 0.0));
    if (m >= 2) {
      std::vector<double> r(m - 1);
      bernstein_basis_all(m - 2, u, r);
      for (int k = 0; k <= m; ++k) {
        const double a = k >= 2 ? r[k - 2] : 0.0;
        const double c = (k >= 1 && k - 1 <= m - 2) ? r[k - 1] : 0.0;
        const double e = k <= m - 2 ? r[k] : 0.0;
        ddp[k] = static_cast<double>(m) * (m - 1) * (a - 2.0 * c + e);
      }
    }
    coef_.assign(m + 1, 0.0);
    coef_d1_.assign(m + 1, 0.0);
    coef_d11_.assign(m + 1, 0.0);
    for (int k = 0; k <= m; ++k) {
      for (int l = 0; l <= m; ++l) {
        const double gkl = g.at(k, l);
        coef_[l] += gkl * p[k];
        coef_d1_[l] += gkl * dp[k];
        coef_d11_[l] += gkl * ddp[k];
      }
    }
  }
}

double CopulaSection::cdf(double v) const
{
  const double u = u_;
  return std::visit(
    overloaded{
      [&](const Independence&) { return u * v; },
      [&](const FrechetUpper&) { return std::min(u, v); },
      [&](const FrechetLower&) { return std::max(u + v - 1.0, 0.0); },
      [&](const Fgm& f) { return lin_values(f.theta, 0.0, u, v).c; },
      [&](const LinFgm& f) { return lin_values(f.theta, f.phi, u, v).c; },
      [&](const PolynomialCrossSection& p) {
        return polynomial_values(p, u, v).c;
      },
      [&](const Mixture&) {
        double r = 0.0;
        for (std::size_t i = 0; i < children_.size(); ++i)
          r += weights_[i] * children_[i].cdf(v);
        return r;
      },
      [&](const BernsteinOf& b) {
        const int m = b.grid->order;
        std::vector<double> pv(m + 1);
        bernstein_basis_all(m, v, pv);
        double r = 0.0;
        for (int l = 0; l <= m; ++l)
          r += coef_[l] * pv[l];
        return r;
      },
    },
    node_->family);
}

double CopulaSection::partial(PartialKind kind, double v) const
{
  const PointValues pv = values(v);
  switch (kind) {
    case PartialKind::d1:
      return pv.d1;
    case PartialKind::d2:
      return pv.d2;
    case PartialKind::d11:
      return pv.d11;
    case PartialKind::d22:
      return pv.d22;
  }
  return 0.0;
}

PointValues CopulaSection::values(double v) const
{
  const double u = u_;
  auto frechet_guard = [&](bool on_kink, const char* name) {
    if (!interior(u) || !interior(v))
      throw Error(Errc::boundary_point,
                  std::string(name) +
                    " partials are undefined on the edge of the square");
    if (on_kink)
      throw Error(Errc::not_differentiable,
                  std::string(name) + " is not differentiable on its kink");
  };
  return std::visit(
    overloaded{
      [&](const Independence&) { return PointValues{u * v, v, u, 0.0, 0.0}; },
      [&](const FrechetUpper&) {
        frechet_guard(u == v, "M");
        return u < v ? PointValues{u, 1.0, 0.0, 0.0, 0.0}
                     : PointValues{v, 0.0, 1.0, 0.0, 0.0};
      },
      [&](const FrechetLower&) {
        frechet_guard(u + v == 1.0, "W");
        return u + v > 1.0 ? PointValues{u + v - 1.0, 1.0, 1.0, 0.0, 0.0}
                           : PointValues{0.0, 0.0, 0.0, 0.0, 0.0};
      },
      [&](const Fgm& f) { return lin_values(f.theta, 0.0, u, v); },
      [&](const LinFgm& f) { return lin_values(f.theta, f.phi, u, v); },
      [&](const PolynomialCrossSection& p) {
        return polynomial_values(p, u, v);
      },
      [&](const Mixture&) {
        PointValues r;
        for (std::size_t i = 0; i < children_.size(); ++i) {
          const PointValues c = children_[i].values(v);
          const double w = weights_[i];
          r.c += w * c.c;
          r.d1 += w * c.d1;
          r.d2 += w * c.d2;
          r.d11 += w * c.d11;
          r.d22 += w * c.d22;
        }
        return r;
      },
      [&](const BernsteinOf& b) {
        const int m = b.grid->order;
        std::vector<double> pv(m + 1), qv(m);
        bernstein_basis_all(m, v, pv);
        bernstein_basis_all(m - 1, v, qv);
        PointValues r;
        for (int l = 0; l <= m; ++l) {
          r.c += coef_[l] * pv[l];
          r.d1 += coef_d1_[l] * pv[l];
          r.d11 += coef_d11_[l] * pv[l];
        }
        for (int l = 0; l < m; ++l)
          r.d2 += (coef_[l + 1] - coef_[l]) * qv[l];
        r.d2 *= m;
        if (m >= 2) {
          std::vector<double> rv(m - 1);
          bernstein_basis_all(m - 2, v, rv);
          for (int l = 0; l + 2 <= m; ++l)
            r.d22 += (coef_[l + 2] - 2.0 * coef_[l + 1] + coef_[l]) * rv[l];
          r.d22 *= static_cast<double>(m) * (m - 1);
        }
        return r;
      },
    },
    node_->family);
}

std::vector<double> CopulaSection::kinks() const
{
  std::vector<double> out;
  auto add = [&](double v) {
    if (v > 0.0 && v < 1.0)
      out.push_back(v);
  };
  if (std::holds_alternative<FrechetUpper>(node_->family))
    add(u_);
  else if (std::holds_alternative<FrechetLower>(node_->family))
    add(1.0 - u_);
  for (const auto& c : children_)
    for (double v : c.kinks())
      add(v);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

PolynomialCrossSection cross_sections(const CopulaModel& model)
{
  // coefficient vectors in v of A(v) = v - v^2 and A2(v) = v - 2v^2 + v^3
  const std::vector<double> qa{0.0, 1.0, -1.0};
  const std::vector<double> ca{0.0, 1.0, -2.0, 1.0};
  auto lin = [&](double theta, double phi) {
    PolynomialCrossSection r;
    r.alpha.assign(3, std::vector<double>(4, 0.0));
    r.alpha[0][1] = 1.0;
    for (int j = 0; j < 3; ++j) {
      r.alpha[0][j] += theta * qa[j];
      r.alpha[1][j] -= theta * qa[j];
    }
    for (int j = 0; j < 4; ++j) {
      r.alpha[0][j] += theta * phi * ca[j];
      r.alpha[1][j] -= 2.0 * theta * phi * ca[j];
      r.alpha[2][j] += theta * phi * ca[j];
    }
    return r;
  };
  return std::visit(
    overloaded{
      [](const Independence&) {
        return PolynomialCrossSection{{{0.0, 1.0}}};
      },
      [&](const Fgm& f) {
        PolynomialCrossSection r = lin(f.theta, 0.0);
        r.alpha.pop_back();
        return r;
      },
      [&](const LinFgm& f) { return lin(f.theta, f.phi); },
      [](const PolynomialCrossSection& p) { return p; },
      [](const Mixture& m) {
        PolynomialCrossSection r;
        for (const auto& c : m.components) {
          const PolynomialCrossSection s = cross_sections(c.model);
          if (r.alpha.size() < s.alpha.size())
            r.alpha.resize(s.alpha.size());
          for (std::size_t i = 0; i < s.alpha.size(); ++i) {
            if (r.alpha[i].size() < s.alpha[i].size())
              r.alpha[i].resize(s.alpha[i].size(), 0.0);
            for (std::size_t j = 0; j < s.alpha[i].size(); ++j)
              r.alpha[i][j] += c.weight * s.alpha[i][j];
          }
        }
        return r;
      },
      [](const auto&) -> PolynomialCrossSection {
        throw Error(Errc::unsupported_family,
                    "family has no polynomial cross-section expansion");
      },
    },
    model.node().family);
}

std::vector<double> alpha_integrals(const PolynomialCrossSection& pcs)
{
  std::vector<double> out;
  out.reserve(pcs.alpha.size());
  for (const auto& a : pcs.alpha) {
    double s = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j)
      s += a[j] / static_cast<double>(j + 1);
    out.push_back(s);
  }
  return out;
}

} // namespace ccef
