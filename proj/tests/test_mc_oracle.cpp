#include "ccef/asymptotics.hpp"
#include "ccef/empirical.hpp"
#include "ccef/error.hpp"
#include "ccef/mc_oracle.hpp"

#include <doctest.h>

#include <json.hpp>

#include <cmath>
#include <random>
#include <vector>

using namespace ccef;

TEST_CASE("config validation")
{
  McConfig cfg;
  cfg.n = 1;
  CHECK_THROWS_AS(validate(cfg), Error);
  cfg = {};
  cfg.replicates = 0;
  CHECK_THROWS_AS(validate(cfg), Error);
}

TEST_CASE("seeding is deterministic")
{
  CHECK(derive_seed(1, 0) != derive_seed(1, 1));
  CHECK(derive_seed(1, 0) != derive_seed(2, 0));
  CHECK(derive_seed(77, 5) == derive_seed(77, 5));
  UniformRng a(9), b(9);
  for (int i = 0; i < 1000; ++i) {
    const double x = a();
    CHECK(x == b());
    CHECK(x > 0.0);
    CHECK(x < 1.0);
  }
  const auto s1 = sample(CopulaModel::lin(0.5, 1.0), 500, 3);
  const auto s2 = sample(CopulaModel::lin(0.5, 1.0), 500, 3);
  CHECK(s1.pairs() == s2.pairs());
  CHECK(sample(CopulaModel::lin(0.5, 1.0), 500, 4).pairs() != s1.pairs());
}

TEST_CASE("conditional inverse solves the conditional cdf")
{
  for (const auto& model : {CopulaModel::fgm(1.0), CopulaModel::fgm(-0.8),
                            CopulaModel::lin(1.0, -1.0), CopulaModel::lin(-1.0, -2.0)})
    for (double u : {0.05, 0.5, 0.93})
      for (double t : {1e-6, 0.3, 0.77, 1 - 1e-6}) {
        const double v = conditional_inverse(model, u, t);
        CHECK(v >= 0.0);
        CHECK(v <= 1.0);
        CHECK(std::abs(partial(model, PartialKind::d1, {u, v}) - t) <= 1e-10);
      }
  // a = 0 at u = 1/2 for FGM, the linear branch
  CHECK(conditional_inverse(CopulaModel::fgm(1.0), 0.5, 0.4) == doctest::Approx(0.4));
}

TEST_CASE("extreme samplers")
{
  for (const auto& [x, y] : sample(CopulaModel::frechet_upper(), 200, 1).pairs())
    CHECK(x == y);
  for (const auto& [x, y] : sample(CopulaModel::frechet_lower(), 200, 1).pairs())
    CHECK(x + y == doctest::Approx(1.0).epsilon(1e-15));
  CHECK_THROWS_AS(sample(CopulaModel::bernstein(CopulaModel::fgm(1.0), 5), 10, 1), Error);
}

TEST_CASE("FGM(0) looks independent under KS")
{
  const auto s = sample(CopulaModel::fgm(0.0), 4000, 12);
  std::vector<double> ys;
  for (const auto& p : s.pairs())
    ys.push_back(p.second);
  std::mt19937_64 rng(12345);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> ref(4000);
  for (double& r : ref)
    r = unif(rng);
  CHECK(ks_two_sample(ys, ref) < ks_critical(0.01, ys.size(), ref.size()));

  // and a clear shift is rejected
  std::vector<double> shifted = ref;
  for (double& r : shifted)
    r = r * r;
  CHECK(ks_two_sample(ys, shifted) > ks_critical(0.01, ys.size(), shifted.size()));
}

TEST_CASE("FGM sampler reproduces the copula")
{
  const int n = 100000;
  const auto model = CopulaModel::fgm(1.0);
  const auto rs = compute_ranks(sample(model, n, 77));
  CHECK(std::abs(empirical_copula_cdf(rs, {0.5, 0.5}) - 0.3125) <= 3.0 / std::sqrt(n));
  double worst = 0.0;
  for (int i = 1; i <= 9; ++i)
    for (int j = 1; j <= 9; ++j)
      worst = std::max(worst, std::abs(empirical_copula_cdf(rs, {i / 10.0, j / 10.0}) -
                                       cdf(model, {i / 10.0, j / 10.0})));
  CHECK(worst <= 3.0 / std::sqrt(n));
}

TEST_CASE("definitional CCEF")
{
  const int big = 1000000;
  const auto fgm = sample(CopulaModel::fgm(1.0), big, 5);
  // V | U <= u has variance below 1/12 + a bit; use 0.3 as a safe sigma
  CHECK(std::abs(mc_ccef(fgm, 0.5) - 5.0 / 12.0) <= 3 * 0.3 / std::sqrt(big * 0.5));

  const int n = 20000;
  const auto m = sample(CopulaModel::frechet_upper(), n, 6);
  const double se_m = 0.4 / std::sqrt(std::sqrt(12.0) * n * 0.4);
  CHECK(std::abs(mc_ccef(m, 0.4) - 0.2) <= 3 * se_m);
  const auto w = sample(CopulaModel::frechet_lower(), n, 6);
  CHECK(std::abs(mc_ccef(w, 0.4) - 0.8) <= 3 * se_m);
  const auto pi = sample(CopulaModel::independence(), n, 6);
  for (double u : {0.2, 0.6})
    CHECK(std::abs(mc_ccef(pi, u) - 0.5) <= 3 * std::sqrt(1.0 / 12.0 / (n * u)));

  const Sample small({{0.6, 0.1}, {0.9, 0.2}});
  try {
    mc_ccef(small, 0.5);
    FAIL("expected EmptyConditioningSet");
  } catch (const Error& e) {
    CHECK(e.code() == Errc::empty_conditioning_set);
  }
}

TEST_CASE("Anderson-Darling")
{
  std::mt19937_64 rng(2);
  std::normal_distribution<double> z;
  std::vector<double> x(500);
  for (double& v : x)
    v = 3.0 + 2.0 * z(rng);
  CHECK(anderson_darling_normal(x) < anderson_darling_critical_1pct);
  std::exponential_distribution<double> e;
  for (double& v : x)
    v = e(rng);
  CHECK(anderson_darling_normal(x) > anderson_darling_critical_1pct);
}

TEST_CASE("integrated h kernel")
{
  // the closed form matches a direct quadrature of h over v
  for (const auto& model : {CopulaModel::lin(0.5, 1.0), CopulaModel::fgm(-1.0)})
    for (auto obs : {std::pair{0.2, 0.6}, {0.8, 0.1}, {0.35, 0.35}}) {
      const double direct = integrate_1d_split(
        [&](double v) { return h_kernel(model, 0.4, v, obs); }, 0.0, 1.0,
        std::vector<double>{obs.second});
      CHECK(integrated_h_kernel(model, 0.4, obs) == doctest::Approx(direct).epsilon(1e-9));
    }
  McConfig cfg;
  cfg.n = 50000;
  cfg.seed = 8;
  const auto est = limit_covariance_hkernel_mc(CopulaModel::independence(), 0.5, 0.5, cfg);
  CHECK(std::abs(est.value - 0.5 / 6.0) <= 3 * est.std_error + 1e-3);
}

TEST_CASE("mixture sampling")
{
  const auto mix = CopulaModel::mixture({{0.3, CopulaModel::frechet_upper()},
                                         {0.7, CopulaModel::independence()}});
  const int n = 200000;
  const auto s = sample(mix, n, 21);
  int on_diag = 0;
  for (const auto& [x, y] : s.pairs())
    on_diag += x == y;
  const double frac = static_cast<double>(on_diag) / n;
  CHECK(std::abs(frac - 0.3) <= 3 * std::sqrt(0.21 / n));
  // R = 0.3 u / 2 + 0.7 / 2 at u = 0.5
  CHECK(std::abs(mc_ccef(s, 0.5) - (0.075 + 0.35)) <= 0.005);
}

TEST_CASE("replicate experiment")
{
  McConfig cfg;
  cfg.seed = 31;
  cfg.replicates = 40;
  const std::vector<double> us{0.4, 0.6};
  // m far above sqrt(n) makes the limit mean vanish
  const auto rows = replicate_experiment(CopulaModel::fgm(0.5), 1000, 400, us, cfg);
  REQUIRE(rows.size() == 2);
  for (const auto& r : rows) {
    CHECK(r.n == 1000);
    CHECK(r.m == 400);
    CHECK(r.replicates == 40);
    CHECK(std::abs(r.theory_mean) < 0.02);
    CHECK(std::abs(r.emp_mean - r.theory_mean) <= 4 * std::sqrt(r.theory_var / 40));
    CHECK(r.emp_var > 0.0);
  }
  const auto again = replicate_experiment(CopulaModel::fgm(0.5), 1000, 400, us, cfg);
  CHECK(again[0].emp_mean == rows[0].emp_mean);

  const auto j = nlohmann::json::parse(to_json(rows));
  REQUIRE(j.is_array());
  REQUIRE(j.size() == 2);
  for (const char* key : {"u", "emp_mean", "emp_var", "theory_mean", "theory_var", "n",
                          "m", "replicates", "seed", "ad_statistic", "rng"})
    CHECK(j[0].contains(key));
  CHECK(j[1]["u"].get<double>() == 0.6);
}
