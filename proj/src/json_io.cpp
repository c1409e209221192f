#include "mscycles/json_io.hpp"

#include <cmath>

#include "json.hpp"

namespace mscycles {

namespace {

using nlohmann::json;

json model_to_json_value(const MsVarModel& m) {
  return json{
      {"a1", {m.regime1.a11, m.regime1.a12, m.regime1.a21, m.regime1.a22}},
      {"a2", {m.regime2.a11, m.regime2.a22}},
      {"sigma1", {m.sigma1.v11, m.sigma1.v12, m.sigma1.v22}},
      {"sigma2", {m.sigma2.v11, m.sigma2.v12, m.sigma2.v22}},
      {"trans", {m.trans.p11, m.trans.p12, m.trans.p21, m.trans.p22}},
      {"init", {m.init_dist[0], m.init_dist[1]}},
  };
}

std::vector<double> expect_array(const json& j, const char* key, std::size_t size) {
  if (!j.contains(key))
    throw validation_error(std::string("model json: missing field '") + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != size)
    throw validation_error(std::string("model json: field '") + key + "' must be an array of " +
                           std::to_string(size) + " numbers");
  std::vector<double> out;
  out.reserve(size);
  for (const auto& e : v) {
    if (!e.is_number())
      throw validation_error(std::string("model json: field '") + key + "' has a non-numeric entry");
    out.push_back(e.get<double>());
  }
  return out;
}

// NaN serializes to null in JSON; map it back and forth explicitly so
// standard-error vectors with undefined entries stay representable.
json se_value(double v) {
  if (std::isnan(v)) return nullptr;
  return v;
}

}  // namespace

std::string model_to_json(const MsVarModel& model, int indent) {
  return model_to_json_value(model).dump(indent);
}

MsVarModel model_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw validation_error(std::string("model json: ") + e.what());
  }
  const auto a1 = expect_array(j, "a1", 4);
  const auto a2 = expect_array(j, "a2", 2);
  const auto s1 = expect_array(j, "sigma1", 3);
  const auto s2 = expect_array(j, "sigma2", 3);
  const auto tr = expect_array(j, "trans", 4);
  const auto in = expect_array(j, "init", 2);

  MsVarModel m;
  m.regime1 = RegimeCoefficients::full(a1[0], a1[1], a1[2], a1[3]);
  m.regime2 = RegimeCoefficients::diagonal(a2[0], a2[1]);
  m.sigma1 = {s1[0], s1[1], s1[2]};
  m.sigma2 = {s2[0], s2[1], s2[2]};
  m.trans = {tr[0], tr[1], tr[2], tr[3]};
  m.init_dist = {in[0], in[1]};
  return m;
}

std::string estimation_to_json(const EstimationResult& result, int indent) {
  json j = model_to_json_value(result.model);
  const StdErrors& se = result.std_errors;
  j["se"] = {
      {"a1", {se_value(se.a1[0]), se_value(se.a1[1]), se_value(se.a1[2]), se_value(se.a1[3])}},
      {"a2", {se_value(se.a2[0]), se_value(se.a2[1])}},
      {"sigma1", {se_value(se.sigma1[0]), se_value(se.sigma1[1]), se_value(se.sigma1[2])}},
      {"sigma2", {se_value(se.sigma2[0]), se_value(se.sigma2[1]), se_value(se.sigma2[2])}},
      {"trans", {se_value(se.trans[0]), se_value(se.trans[1])}},
      {"hessian_warning", se.hessian_warning},
  };
  j["loglik"] = result.loglik_path.empty() ? result.filter.loglik
                                           : result.loglik_path.back();
  j["iterations"] = result.iterations;
  j["converged"] = result.converged;
  return j.dump(indent);
}

}  // namespace mscycles
