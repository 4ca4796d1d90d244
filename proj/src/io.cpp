#include "gpde/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace gpde {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string kind_name(SegmentKind k) {
  switch (k) {
    case SegmentKind::Constant: return "constant";
    case SegmentKind::Affine: return "affine";
    case SegmentKind::SqrtRise: return "sqrt_rise";
    case SegmentKind::SqrtFall: return "sqrt_fall";
  }
  return "constant";
}

}  // namespace

nlohmann::json derivator_to_json(const Derivator& d) {
  nlohmann::json out;
  out["schema_version"] = 1;
  if (d.periodic()) out["period"] = d.period();
  if (d.value_at_zero() != d.segments().front().v0) out["g_at_zero"] = d.value_at_zero();
  nlohmann::json segs = nlohmann::json::array();
  for (const Segment& s : d.segments()) {
    nlohmann::json js;
    js["kind"] = kind_name(s.kind);
    js["span"] = {s.a, s.b};
    switch (s.kind) {
      case SegmentKind::Constant:
        js["level"] = s.v0;
        break;
      case SegmentKind::Affine:
        js["start"] = s.v0;
        js["slope"] = (s.v1 - s.v0) / (s.b - s.a);
        break;
      case SegmentKind::SqrtRise:
      case SegmentKind::SqrtFall:
        js["from"] = s.v0;
        js["to"] = s.v1;
        break;
    }
    if (s.jump_after != 0.0) js["jump_after"] = s.jump_after;
    segs.push_back(std::move(js));
  }
  out["segments"] = std::move(segs);
  return out;
}

Derivator derivator_from_json(const nlohmann::json& j) {
  if (!j.contains("segments") || !j["segments"].is_array() || j["segments"].empty())
    throw std::invalid_argument("derivator json: missing segments");
  std::vector<Segment> segs;
  for (const auto& js : j["segments"]) {
    const std::string kind = js.at("kind").get<std::string>();
    const auto span = js.at("span");
    const double a = span.at(0).get<double>();
    const double b = span.at(1).get<double>();
    const double jump = js.value("jump_after", 0.0);
    if (kind == "constant") {
      segs.push_back(Segment::constant(a, b, js.at("level").get<double>(), jump));
    } else if (kind == "affine") {
      segs.push_back(
          Segment::affine(a, b, js.at("start").get<double>(), js.at("slope").get<double>(), jump));
    } else if (kind == "identity") {
      segs.push_back(Segment::affine(a, b, js.value("start", a), 1.0, jump));
    } else if (kind == "sqrt_rise") {
      segs.push_back(
          Segment::sqrt_rise(a, b, js.at("from").get<double>(), js.at("to").get<double>(), jump));
    } else if (kind == "sqrt_fall") {
      segs.push_back(
          Segment::sqrt_fall(a, b, js.at("from").get<double>(), js.at("to").get<double>(), jump));
    } else {
      throw std::invalid_argument("derivator json: unknown kind '" + kind + "'");
    }
  }
  std::optional<double> period;
  if (j.contains("period")) period = j["period"].get<double>();
  std::optional<double> g0;
  if (j.contains("g_at_zero")) g0 = j["g_at_zero"].get<double>();
  return Derivator(std::move(segs), period, g0);
}

Derivator resolve_derivator(const std::string& spec, double horizon) {
  if (spec == "silkworm") return Derivator::silkworm();
  if (spec == "identity") return Derivator::identity(horizon);
  std::ifstream in(spec);
  if (!in) throw std::invalid_argument("cannot open derivator spec '" + spec + "'");
  nlohmann::json j;
  in >> j;
  return derivator_from_json(j);
}

nlohmann::json hypothesis_report_to_json(const HypothesisReport& rep) {
  nlohmann::json out;
  out["schema_version"] = 1;
  out["c1"] = rep.c1;
  out["c2"] = rep.c2;
  out["h1_pass"] = rep.h1_pass;
  out["all_pass"] = rep.all_pass;
  out["sufficient_condition"] = rep.sufficient_condition;
  nlohmann::json offenders = nlohmann::json::array();
  for (const auto& [mode, t] : rep.h1_offenders)
    offenders.push_back({{"mode", mode}, {"time", t}});
  out["h1_offenders"] = std::move(offenders);
  nlohmann::json modes = nlohmann::json::array();
  for (std::size_t k = 0; k < rep.modes.size(); ++k) {
    const ModeHypotheses& mh = rep.modes[k];
    modes.push_back({{"lambda", rep.lambdas[k]},
                     {"h1", mh.h1},
                     {"h2", mh.h2},
                     {"h3", mh.h3},
                     {"h4", mh.h4},
                     {"h5", mh.h5},
                     {"h2_sup", mh.h2_sup},
                     {"h3_int", mh.h3_int},
                     {"h4_sup", mh.h4_sup},
                     {"h5_int", mh.h5_int}});
  }
  out["modes"] = std::move(modes);
  return out;
}

SilkwormParams silkworm_params_from_json(const nlohmann::json& j) {
  SilkwormParams p;
  p.c = j.value("c", p.c);
  p.lambda_birth = j.value("lambda_birth", p.lambda_birth);
  p.x0_total = j.value("x0_total", p.x0_total);
  p.eta = j.value("eta", p.eta);
  p.horizon = j.value("T", p.horizon);
  p.n_modes = j.value("n_modes", p.n_modes);
  if (p.c <= 0 || p.lambda_birth <= 0 || p.x0_total <= 0 || p.eta <= 0 || p.horizon <= 0)
    throw std::invalid_argument("silkworm params: all parameters must be positive");
  return p;
}

nlohmann::json silkworm_params_to_json(const SilkwormParams& p) {
  return {{"c", p.c},          {"lambda_birth", p.lambda_birth}, {"x0_total", p.x0_total},
          {"eta", p.eta},      {"T", p.horizon},                 {"n_modes", p.n_modes}};
}

}  // namespace gpde
