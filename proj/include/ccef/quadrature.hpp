#pragma once

#include <functional>
#include <span>

namespace ccef {

struct QuadratureSpec
{
  double abs_tol = 1e-10;
  int max_subdivisions = 1 << 14;
  int panel_order = 16; //!< Gauss-Legendre points per panel
};

//! Throws InvalidDomain unless tol > 0, subdivisions >= 1 and order >= 1.
void validate(const QuadratureSpec& spec);

struct GaussRule
{
  std::span<const double> nodes;   //!< on [-1, 1]
  std::span<const double> weights;
};

//! Gauss-Legendre rule of the given order; computed once and cached.
GaussRule gauss_legendre_rule(int order);

//! Single Gauss-Legendre panel on [a, b].
double gauss_legendre(const std::function<double(double)>& f,
                      double a,
                      double b,
                      int order);

//! Globally adaptive bisection with a Gauss-Legendre rule per panel. The
//! error of a panel is |G(panel) - G(left) - G(right)|; the panel with the
//! largest error is split until the summed error is below spec.abs_tol.
//! Throws ToleranceNotReached when the subdivision budget runs out.
double integrate_1d(const std::function<double(double)>& f,
                    double a,
                    double b,
                    const QuadratureSpec& spec = {});

//! integrate_1d over [a, b] split at the given breakpoints (those outside
//! (a, b) are ignored); the budget applies per piece.
double integrate_1d_split(const std::function<double(double)>& f,
                          double a,
                          double b,
                          std::span<const double> breaks,
                          const QuadratureSpec& spec = {});

//! int_0^1 int_0^1 f(v, w) dv dw for integrands that are smooth away from the
//! diagonal v = w. The triangles {v <= w} and {v > w} are integrated
//! separately as iterated integrals (outer in w, inner in v), so `f` is
//! called with w fixed over runs of consecutive calls.
double integrate_2d_min_kink(const std::function<double(double, double)>& f,
                             const QuadratureSpec& spec = {});

} // namespace ccef
