#include "domination/model_io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <initializer_list>
#include <sstream>

#include "domination/errors.hpp"

namespace domination::io {

namespace {

void reject_unknown(const json& j, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (const char* name : allowed) known = known || key == name;
    if (!known) throw ValidationError("unknown field \"" + where + key + "\"");
  }
}

double number(const json& j, const char* name, const std::string& where = "") {
  const auto it = j.find(name);
  if (it == j.end()) throw ValidationError("missing field \"" + where + name + "\"");
  if (!it->is_number()) {
    throw ValidationError("field \"" + where + name + "\" must be a number, got " + it->dump());
  }
  const double value = it->get<double>();
  if (!std::isfinite(value)) {
    throw ValidationError("field \"" + where + name + "\" must be finite");
  }
  return value;
}

}  // namespace

ModelFile parse_model(const json& j) {
  if (!j.is_object()) throw ValidationError("model file must contain a JSON object");
  const auto kind_it = j.find("kind");
  if (kind_it == j.end()) throw ValidationError("missing field \"kind\"");
  if (!kind_it->is_string()) throw ValidationError("field \"kind\" must be a string");
  const std::string kind = kind_it->get<std::string>();

  ModelFile mf;
  if (kind == "poisson") {
    reject_unknown(j, {"kind", "r1", "r2", "c1", "c2", "lambda1", "lambda2", "q1", "q2", "shock"},
                   "");
    PoissonModel pm;
    pm.c = {number(j, "c1"), number(j, "c2")};
    pm.lambda = {number(j, "lambda1"), number(j, "lambda2")};
    pm.q = {number(j, "q1"), number(j, "q2")};
    if (const auto sh = j.find("shock"); sh != j.end()) {
      if (!sh->is_object()) throw ValidationError("field \"shock\" must be an object");
      reject_unknown(*sh, {"lambda", "qbar1", "qbar2"}, "shock.");
      pm.shock = CommonShock{number(*sh, "lambda", "shock."), number(*sh, "qbar1", "shock."),
                             number(*sh, "qbar2", "shock.")};
    }
    mf.model = pm;
  } else if (kind == "brownian") {
    reject_unknown(j, {"kind", "r1", "r2", "mu1", "mu2", "sigma1", "sigma2", "rho"}, "");
    BrownianModel bm;
    bm.mu = {number(j, "mu1"), number(j, "mu2")};
    bm.sigma = {number(j, "sigma1"), number(j, "sigma2")};
    bm.rho = number(j, "rho");
    mf.model = bm;
  } else {
    throw ValidationError("field \"kind\" must be \"poisson\" or \"brownian\", got \"" + kind + "\"");
  }
  mf.r = {number(j, "r1"), number(j, "r2")};
  return mf;
}

ModelFile parse_model_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("malformed JSON: ") + e.what());
  }
  return parse_model(j);
}

ModelFile read_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open model file " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("cannot read model file " + path);
  return parse_model_text(buf.str());
}

json to_json(const Model& model, const ReflectionPair& r) {
  json j;
  if (const auto* pm = std::get_if<PoissonModel>(&model)) {
    j["kind"] = "poisson";
    j["c1"] = pm->c[0];
    j["c2"] = pm->c[1];
    j["lambda1"] = pm->lambda[0];
    j["lambda2"] = pm->lambda[1];
    j["q1"] = pm->q[0];
    j["q2"] = pm->q[1];
    if (pm->shock) {
      j["shock"] = {{"lambda", pm->shock->lambda},
                    {"qbar1", pm->shock->qbar1},
                    {"qbar2", pm->shock->qbar2}};
    }
  } else {
    const auto& bm = std::get<BrownianModel>(model);
    j["kind"] = "brownian";
    j["mu1"] = bm.mu[0];
    j["mu2"] = bm.mu[1];
    j["sigma1"] = bm.sigma[0];
    j["sigma2"] = bm.sigma[1];
    j["rho"] = bm.rho;
  }
  j["r1"] = r.r1;
  j["r2"] = r.r2;
  return j;
}

std::string format_number(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, value);
  return buf;
}

json rounded(const json& j, int digits) {
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (!std::isfinite(v)) return nullptr;
    return std::strtod(format_number(v, digits).c_str(), nullptr);
  }
  if (j.is_object()) {
    json out = json::object();
    for (const auto& [key, value] : j.items()) out[key] = rounded(value, digits);
    return out;
  }
  if (j.is_array()) {
    json out = json::array();
    for (const auto& value : j) out.push_back(rounded(value, digits));
    return out;
  }
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path + " for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("failed writing " + path);
}

}  // namespace domination::io
