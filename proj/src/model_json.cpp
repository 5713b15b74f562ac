#include "ccef/model_json.hpp"

#include "ccef/error.hpp"

namespace ccef {

namespace {

using nlohmann::json;

double number(const json& j, const char* key)
{
  if (!j.contains(key) || !j.at(key).is_number())
    throw Error(Errc::parse_error,
                std::string("missing numeric field \"") + key + "\"");
  return j.at(key).get<double>();
}

CopulaModel build(const json& j)
{
  if (!j.is_object() || !j.contains("family") || !j.at("family").is_string())
    throw Error(Errc::parse_error, "model must be an object with \"family\"");
  const std::string family = j.at("family").get<std::string>();
  if (family == "independence")
    return CopulaModel::independence();
  if (family == "frechet_upper")
    return CopulaModel::frechet_upper();
  if (family == "frechet_lower")
    return CopulaModel::frechet_lower();
  if (family == "fgm")
    return CopulaModel::fgm(number(j, "theta"));
  if (family == "lin")
    return CopulaModel::lin(number(j, "theta"), number(j, "phi"));
  if (family == "polynomial") {
    if (!j.contains("alpha") || !j.at("alpha").is_array())
      throw Error(Errc::parse_error, "polynomial needs an \"alpha\" array");
    std::vector<std::vector<double>> alpha;
    for (const auto& row : j.at("alpha")) {
      if (!row.is_array())
        throw Error(Errc::parse_error, "alpha rows must be arrays");
      std::vector<double> coeffs;
      for (const auto& c : row) {
        if (!c.is_number())
          throw Error(Errc::parse_error, "alpha coefficients must be numbers");
        coeffs.push_back(c.get<double>());
      }
      alpha.push_back(std::move(coeffs));
    }
    return CopulaModel::polynomial(std::move(alpha));
  }
  if (family == "mixture") {
    if (!j.contains("components") || !j.at("components").is_array())
      throw Error(Errc::parse_error, "mixture needs a \"components\" array");
    std::vector<MixtureComponent> comps;
    for (const auto& c : j.at("components")) {
      if (!c.is_object() || !c.contains("model"))
        throw Error(Errc::parse_error,
                    "mixture components need \"weight\" and \"model\"");
      comps.push_back({number(c, "weight"), build(c.at("model"))});
    }
    return CopulaModel::mixture(std::move(comps));
  }
  if (family == "bernstein") {
    if (!j.contains("order") || !j.at("order").is_number_integer())
      throw Error(Errc::parse_error, "bernstein needs an integer \"order\"");
    if (!j.contains("inner"))
      throw Error(Errc::parse_error, "bernstein needs an \"inner\" model");
    const CopulaModel inner = build(j.at("inner"));
    validate(inner);
    return CopulaModel::bernstein(inner, j.at("order").get<int>());
  }
  throw Error(Errc::parse_error, "unknown family \"" + family + "\"");
}

template<class... Ts>
struct overloaded : Ts...
{
  using Ts::operator()...;
};
template<class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

} // namespace

CopulaModel model_from_json(const nlohmann::json& j)
{
  CopulaModel model = build(j);
  validate(model);
  return model;
}

CopulaModel parse_model(std::string_view text)
{
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(Errc::parse_error, e.what());
  }
  return model_from_json(j);
}

nlohmann::json model_to_json(const CopulaModel& model)
{
  using nlohmann::json;
  return std::visit(
    overloaded{
      [](const Independence&) { return json{{"family", "independence"}}; },
      [](const FrechetUpper&) { return json{{"family", "frechet_upper"}}; },
      [](const FrechetLower&) { return json{{"family", "frechet_lower"}}; },
      [](const Fgm& f) { return json{{"family", "fgm"}, {"theta", f.theta}}; },
      [](const LinFgm& f) {
        return json{{"family", "lin"}, {"theta", f.theta}, {"phi", f.phi}};
      },
      [](const PolynomialCrossSection& p) {
        return json{{"family", "polynomial"}, {"alpha", p.alpha}};
      },
      [](const Mixture& m) {
        json comps = json::array();
        for (const auto& c : m.components)
          comps.push_back(
            {{"weight", c.weight}, {"model", model_to_json(c.model)}});
        return json{{"family", "mixture"}, {"components", comps}};
      },
      [](const BernsteinOf& b) {
        if (!b.inner)
          throw Error(Errc::unsupported_family,
                      "a Bernstein copula built from a grid has no JSON form");
        return json{{"family", "bernstein"},
                    {"order", b.grid->order},
                    {"inner", model_to_json(*b.inner)}};
      },
    },
    model.node().family);
}

std::string serialize_model(const CopulaModel& model)
{
  return model_to_json(model).dump();
}

} // namespace ccef
