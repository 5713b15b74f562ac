#include "ccef/cli.hpp"

#include "ccef/asymptotics.hpp"
#include "ccef/bernstein.hpp"
#include "ccef/ccef_analytic.hpp"
#include "ccef/empirical.hpp"
#include "ccef/error.hpp"
#include "ccef/mc_oracle.hpp"
#include "ccef/model_json.hpp"
#include "ccef/validation.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cmath>
#include <cstdint>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>

namespace ccef::cli {

namespace {

using nlohmann::json;

struct Shared
{
  std::string out;
  std::uint64_t seed = 0;
  double tol = 1e-10;
  std::string grid = "0.05:0.95:0.05";
};

void add_shared(CLI::App* cmd, Shared& s)
{
  cmd->add_option("--out", s.out, "Output path (stdout when omitted)");
  cmd->add_option("--seed", s.seed, "Seed recorded in the run manifest");
  cmd->add_option("--tol", s.tol, "Absolute quadrature tolerance")
    ->check(CLI::PositiveNumber);
  cmd->add_option("--grid", s.grid, "u grid as start:stop:step");
}

std::string utc_timestamp()
{
  const std::time_t now =
    std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Writes the payload to --out (plus a manifest sidecar) or to `out`.
void emit(const Shared& s,
          const std::string& command,
          const json& config,
          const std::string& payload,
          std::ostream& out)
{
  if (s.out.empty()) {
    out << payload;
    return;
  }
  std::ofstream f(s.out, std::ios::binary);
  if (!f)
    throw Error(Errc::parse_error, "cannot open output file " + s.out);
  f << payload;
  json manifest{{"command", command},
                {"config", config},
                {"seed", s.seed},
                {"version", version},
                {"timestamp", utc_timestamp()},
                {"rng", std::string(rng_algorithm)},
                {"output", s.out}};
  std::ofstream m(s.out + ".manifest.json", std::ios::binary);
  m << manifest.dump(2) << '\n';
}

json shared_config(const Shared& s)
{
  return {{"grid", s.grid}, {"tol", s.tol}, {"seed", s.seed}, {"out", s.out}};
}

QuadratureSpec spec_of(const Shared& s)
{
  QuadratureSpec spec;
  spec.abs_tol = s.tol;
  return spec;
}

std::vector<int> parse_int_list(const std::string& text)
{
  std::vector<int> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t used = 0;
    int v = 0;
    try {
      v = std::stoi(item, &used);
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != item.size())
      throw Error(Errc::parse_error, "bad integer \"" + item + "\" in list");
    out.push_back(v);
  }
  if (out.empty())
    throw Error(Errc::parse_error, "empty integer list");
  return out;
}

int exit_code_for(const Error& e)
{
  switch (e.code()) {
    case Errc::parse_error:
    case Errc::param_out_of_range:
    case Errc::non_finite_input:
    case Errc::invalid_domain:
    case Errc::index_out_of_range:
    case Errc::unsupported_family:
    case Errc::grid_mismatch:
      return exit_usage;
    case Errc::empty_conditioning_set:
      return exit_empty_support;
    default:
      return exit_numeric;
  }
}

} // namespace

std::vector<double> parse_grid(const std::string& text)
{
  double a = 0.0, b = 0.0, step = 0.0;
  char c1 = 0, c2 = 0;
  std::istringstream is(text);
  if (!(is >> a >> c1 >> b >> c2 >> step) || c1 != ':' || c2 != ':' ||
      !(is >> std::ws).eof())
    throw Error(Errc::parse_error, "grid must be start:stop:step");
  if (!(a > 0.0 && a <= b && b < 1.0 && step > 0.0))
    throw Error(Errc::parse_error,
                "grid needs 0 < start <= stop < 1 and step > 0");
  std::vector<double> g;
  for (long i = 0;; ++i) {
    const double x = std::round((a + i * step) * 1e12) / 1e12;
    if (x > b + 1e-12)
      break;
    g.push_back(x);
  }
  return g;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Cumulative conditional expectation E[V | U <= u] for copulas"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version));

  Shared shared;

  auto* eval = app.add_subcommand("eval", "Exact CCEF of a model on a grid");
  std::string model_text, method = "integral";
  eval->add_option("--model", model_text, "Model as JSON")->required();
  eval->add_option("--method", method, "closed | integral | regression")
    ->check(CLI::IsMember({"closed", "integral", "regression"}));
  add_shared(eval, shared);

  auto* approx =
    app.add_subcommand("approx", "Bernstein approximation error sweep");
  std::string m_list = "50,100,200,400";
  double rate_constant = -1.0;
  approx->add_option("--model", model_text, "Model as JSON")->required();
  approx->add_option("--m", m_list, "Comma-separated Bernstein orders");
  approx->add_option("--M", rate_constant,
                     "Rate constant for the bound (grid estimate if omitted)");
  add_shared(approx, shared);

  auto* estimate =
    app.add_subcommand("estimate", "Estimate CCEF with bands from CSV data");
  std::string data_path, m_rule = "sqrt";
  int m_explicit = 0;
  double d_target = 1.0, level = 0.95;
  bool clamp = false;
  estimate->add_option("--data", data_path, "Two-column CSV")->required();
  estimate->add_option("--m", m_explicit, "Explicit Bernstein order");
  estimate->add_option("--m-rule", m_rule, "Order rule when --m is absent")
    ->check(CLI::IsMember({"sqrt"}));
  estimate->add_option("--d", d_target, "Target sqrt(n)/m for --m-rule sqrt");
  estimate->add_option("--band", level, "Confidence level of the bands");
  estimate->add_flag("--clamp", clamp, "Clamp estimates into [u/2, 1 - u/2]");
  add_shared(estimate, shared);

  auto* validate_cmd = app.add_subcommand("validate", "Run a validation suite");
  std::string suite;
  validate_cmd->add_option("--suite", suite, "Suite name")
    ->required()
    ->check(CLI::IsMember(suite_names()));
  add_shared(validate_cmd, shared);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    app.exit(e, out, err);
    return exit_ok;
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return exit_usage;
  }

  try {
    const std::vector<double> grid = parse_grid(shared.grid);
    const QuadratureSpec spec = spec_of(shared);
    json config = shared_config(shared);

    if (eval->parsed()) {
      const CopulaModel model = parse_model(model_text);
      CcefCurve curve;
      curve.grid = grid;
      curve.provenance = Provenance::exact();
      for (double u : grid) {
        const CcefQuery q(u);
        if (method == "closed")
          curve.values.push_back(ccef_closed_form(model, q));
        else if (method == "integral")
          curve.values.push_back(ccef_by_integral(model, q, spec));
        else
          curve.values.push_back(ccef_by_regression_average(model, q, spec));
      }
      config["model"] = json::parse(model_text);
      config["method"] = method;
      emit(shared, "eval", config, to_csv(curve), out);
      return exit_ok;
    }

    if (approx->parsed()) {
      const CopulaModel model = parse_model(model_text);
      const std::vector<int> ms = parse_int_list(m_list);
      double lip = rate_constant;
      if (lip < 0.0) {
        try {
          lip = estimate_rate_constant(model);
        } catch (const Error&) {
          lip = -1.0; // no smooth partials (M, W): bound left empty
        }
      }
      const auto rows =
        empirical_rate_sweep(model, grid, ms, lip, grid.front());
      config["model"] = json::parse(model_text);
      config["m"] = ms;
      config["rate_constant"] = lip;
      emit(shared, "approx", config, rate_sweep_csv(rows, true), out);
      return exit_ok;
    }

    if (estimate->parsed()) {
      std::ifstream in(data_path);
      if (!in)
        throw Error(Errc::parse_error, "cannot read " + data_path);
      const Sample s = read_sample_csv(in);
      const int n = static_cast<int>(s.size());
      if (n < 10)
        throw Error(Errc::parse_error,
                    "need at least 10 observations, got " + std::to_string(n));
      if (grid.front() < 1.0 / n)
        throw Error(Errc::empty_conditioning_set,
                    "grid point " + std::to_string(grid.front()) +
                      " is below 1/n; no observation has scaled rank <= u");
      EstimatorConfig cfg;
      if (m_explicit > 0) {
        cfg.rule = EstimatorConfig::Rule::explicit_order;
        cfg.m = m_explicit;
      } else {
        cfg.rule = EstimatorConfig::Rule::sqrt_n;
        cfg.d = d_target;
      }
      cfg.clamp = clamp;
      const BernsteinOrder m = choose_order(n, cfg);
      const RankedSample rs = compute_ranks(s);
      const auto bands = confidence_band(rs, m, grid, level, spec, clamp);
      config["data"] = data_path;
      config["n"] = n;
      config["m"] = m.value();
      config["m_rule"] = m_explicit > 0 ? "explicit" : m_rule;
      config["d"] = d_target;
      config["level"] = level;
      config["clamp"] = clamp;
      emit(shared, "estimate", config, bands_csv(bands), out);
      return exit_ok;
    }

    if (validate_cmd->parsed()) {
      const SuiteResult r = run_suite(suite, shared.seed, spec);
      config["suite"] = suite;
      emit(shared, "validate", config, r.report.dump(2) + "\n", out);
      if (!r.passed) {
        err << "suite " << suite << " failed\n";
        return exit_validation_failed;
      }
      return exit_ok;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const json::exception& e) {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
  return exit_usage;
}

} // namespace ccef::cli
