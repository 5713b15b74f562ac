#pragma once

#include <memory>
#include <span>
#include <variant>
#include <vector>

namespace ccef {

//! A point of the unit square, both coordinates in [0, 1].
struct UnitPoint
{
  double u;
  double v;
};

enum class PartialKind
{
  d1,  //!< d/du
  d2,  //!< d/dv
  d11, //!< d^2/du^2
  d22, //!< d^2/dv^2
};

struct Node;
class CopulaModel;

struct Independence
{};

//! M(u, v) = min(u, v).
struct FrechetUpper
{};

//! W(u, v) = max(u + v - 1, 0).
struct FrechetLower
{};

struct Fgm
{
  double theta;
};

//! Lin's iterated FGM: uv + theta uv(1-u)(1-v)(1 + phi (1-u)(1-v)).
struct LinFgm
{
  double theta;
  double phi;
};

//! C(u, v) = sum_{i=1}^k alpha_i(v) u^i. `alpha[i - 1][j]` is the coefficient
//! of v^j in alpha_i.
struct PolynomialCrossSection
{
  std::vector<std::vector<double>> alpha;
};

struct MixtureComponent;

struct Mixture
{
  std::vector<MixtureComponent> components;
};

//! Values C(k/m, l/m) for k, l = 0..m, row-major in k.
struct BernsteinGrid
{
  int order = 0;
  std::vector<double> values;

  double at(int k, int l) const { return values[k * (order + 1) + l]; }
};

//! Bernstein copula of order m built either from a model (`inner` set) or
//! directly from a grid of copula values (`inner` empty, e.g. empirical).
struct BernsteinOf
{
  std::shared_ptr<const CopulaModel> inner;
  std::shared_ptr<const BernsteinGrid> grid;
};

//! Immutable, cheaply copyable handle on a copula description.
class CopulaModel
{
public:
  static CopulaModel independence();
  static CopulaModel frechet_upper();
  static CopulaModel frechet_lower();
  static CopulaModel fgm(double theta);
  static CopulaModel lin(double theta, double phi);
  //! Throws ParamOutOfRange when the cross sections fail the copula
  //! boundary conditions or have negative density on a check grid.
  static CopulaModel polynomial(std::vector<std::vector<double>> alpha);
  static CopulaModel mixture(std::vector<MixtureComponent> components);
  static CopulaModel bernstein(const CopulaModel& inner, int order);
  static CopulaModel bernstein_from_grid(BernsteinGrid grid);

  const Node& node() const { return *node_; }

private:
  explicit CopulaModel(std::shared_ptr<const Node> node);

  std::shared_ptr<const Node> node_;
};

struct MixtureComponent
{
  double weight;
  CopulaModel model;
};

struct Node
{
  std::variant<Independence,
               FrechetUpper,
               FrechetLower,
               Fgm,
               LinFgm,
               PolynomialCrossSection,
               Mixture,
               BernsteinOf>
    family;
};

//! Checks every parameter constraint, recursing into mixtures and the inner
//! model of Bernstein copulas. Throws ParamOutOfRange naming the constraint.
void validate(const CopulaModel& model);

//! Upper limit of theta (1 + phi) for Lin's family.
double lin_upper_limit(double theta);

double cdf(const CopulaModel& model, UnitPoint p);

//! Analytic partial derivative. M and W throw NotDifferentiable on their kink
//! and BoundaryPoint on the edge of the square.
double partial(const CopulaModel& model, PartialKind kind, UnitPoint p);

//! Central finite differences with step h; stencil points are clamped into
//! [1e-8, 1 - 1e-8].
template<typename Cdf>
double finite_difference_partial(const Cdf& c,
                                 PartialKind kind,
                                 UnitPoint p,
                                 double h = 1e-5);

//! C and its partials at one point.
struct PointValues
{
  double c = 0.0;
  double d1 = 0.0;
  double d2 = 0.0;
  double d11 = 0.0;
  double d22 = 0.0;
};

//! The copula restricted to a fixed first argument u, evaluated along v.
//! Bernstein copulas precompute their v-coefficients here, which turns each
//! evaluation from O(m^2) into O(m). The section keeps a pointer into the
//! model, which must outlive it.
class CopulaSection
{
public:
  CopulaSection(const CopulaModel& model, double u);

  double u() const { return u_; }
  double cdf(double v) const;
  double partial(PartialKind kind, double v) const;
  PointValues values(double v) const;

  //! Sorted v in (0, 1) where the section is not smooth (M: v = u,
  //! W: v = 1 - u, unions for mixtures).
  std::vector<double> kinks() const;

private:
  const Node* node_;
  double u_;
  std::vector<double> weights_;
  std::vector<CopulaSection> children_;
  // Bernstein: sum_k G[k][l] times P_{k,m}(u) and its first two u-derivatives.
  std::vector<double> coef_, coef_d1_, coef_d11_;
};

//! Polynomial cross-section expansion of FGM, Lin and the independence copula.
PolynomialCrossSection cross_sections(const CopulaModel& model);

//! Exact integrals int_0^1 alpha_i(v) dv of each cross-section coefficient.
std::vector<double> alpha_integrals(const PolynomialCrossSection& pcs);

// ---------------------------------------------------------------------------

template<typename Cdf>
double finite_difference_partial(const Cdf& c,
                                 PartialKind kind,
                                 UnitPoint p,
                                 double h)
{
  auto clamp = [](double x) {
    constexpr double lo = 1e-8;
    return x < lo ? lo : (x > 1.0 - lo ? 1.0 - lo : x);
  };
  const bool along_u = kind == PartialKind::d1 || kind == PartialKind::d11;
  auto at = [&](double offset) {
    return along_u ? c(clamp(p.u + offset), p.v) : c(p.u, clamp(p.v + offset));
  };
  const double x = along_u ? p.u : p.v;
  const double hi = clamp(x + h) - x;
  const double lo = x - clamp(x - h);
  if (kind == PartialKind::d1 || kind == PartialKind::d2)
    return (at(hi) - at(-lo)) / (hi + lo);
  // non-uniform three-point second difference
  return 2.0 * (lo * at(hi) - (hi + lo) * at(0.0) + hi * at(-lo)) /
         (hi * lo * (hi + lo));
}

} // namespace ccef
