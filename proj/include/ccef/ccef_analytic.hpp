#pragma once

#include "ccef/copula.hpp"
#include "ccef/quadrature.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ccef {

//! Argument of R_C, strictly inside (0, 1).
class CcefQuery
{
public:
  explicit CcefQuery(double u);
  double u() const { return u_; }

private:
  double u_;
};

struct Provenance
{
  enum class Kind
  {
    exact,
    bernstein,
    estimate
  };
  Kind kind = Kind::exact;
  int m = 0;
  int n = 0;

  static Provenance exact() { return {}; }
  static Provenance bernstein(int m) { return {Kind::bernstein, m, 0}; }
  static Provenance estimate(int n, int m) { return {Kind::estimate, m, n}; }

  //! "exact", "bernstein:<m>" or "estimate:<n>:<m>".
  std::string to_string() const;
};

struct CcefCurve
{
  std::vector<double> grid;
  std::vector<double> values;
  Provenance provenance;
};

//! Throws InvalidDomain unless the grid is nonempty, strictly increasing,
//! inside (0, 1) and matches values in length.
void validate(const CcefCurve& curve);

//! CSV with header u,value,provenance.
std::string to_csv(const CcefCurve& curve);

//! 1 - (1/u) int_0^1 C(u, v) dv.
double ccef_by_integral(const CopulaModel& model,
                        CcefQuery q,
                        const QuadratureSpec& spec = {});

//! Closed forms for independence, M, W, FGM, Lin and mixtures of those.
//! Throws NoClosedForm otherwise.
double ccef_closed_form(const CopulaModel& model, CcefQuery q);

bool has_closed_form(const CopulaModel& model);

//! 1 - sum_i u^i alpha_integrals[i], where alpha_integrals[i] is the integral
//! of the (i+1)-th cross-section coefficient.
double ccef_polynomial(std::span<const double> alpha_integrals, CcefQuery q);

//! (1/u) int_0^u E[V | U = w] dw with E[V | U = w] = 1 - int_0^1 C1(w, v) dv.
double ccef_by_regression_average(const CopulaModel& model,
                                  CcefQuery q,
                                  const QuadratureSpec& spec = {});

//! Closed form when available, quadrature otherwise.
double ccef_exact(const CopulaModel& model,
                  CcefQuery q,
                  const QuadratureSpec& spec = {});

CcefCurve ccef_exact_curve(const CopulaModel& model,
                           std::span<const double> grid,
                           const QuadratureSpec& spec = {});

//! Pointwise convex combination of curves on identical grids.
CcefCurve ccef_mixture(std::span<const std::pair<double, CcefCurve>> curves);

} // namespace ccef
