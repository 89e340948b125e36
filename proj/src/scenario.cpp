#include "kneser/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include "kneser/error.hpp"

namespace kneser {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& what) { throw Error(ErrorCode::InvalidSpec, what); }

double positive(const json& j, const char* key, double fallback) {
  if (!j.contains(key)) return fallback;
  const double v = j.at(key).get<double>();
  if (!(v > 0.0) || !std::isfinite(v)) invalid(std::string(key) + " must be positive");
  return v;
}

cplx point(const json& j) {
  if (j.is_array() && j.size() == 2) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
  if (j.is_number()) return {j.get<double>(), 0.0};
  invalid("expected a complex number as [re, im]");
}

json point_json(cplx z) { return json::array({z.real(), z.imag()}); }

std::size_t power_of_two(const json& j, const char* what) {
  const auto n = j.get<long long>();
  if (n <= 0 || !is_power_of_two(static_cast<std::size_t>(n))) invalid(std::string(what) + " must be a power of two");
  return static_cast<std::size_t>(n);
}

CurveKind curve_kind(const std::string& s) {
  for (auto k : {CurveKind::Circle, CurveKind::Ellipse, CurveKind::PolarGraph, CurveKind::FourierCoefficients,
                 CurveKind::SampleTable}) {
    if (to_string(k) == s) return k;
  }
  invalid("unknown curve kind '" + s + "'");
}

MapType map_type(const std::string& s) {
  for (auto t : {MapType::Identity, MapType::Twist, MapType::Plateau, MapType::Piecewise, MapType::Samples,
                 MapType::Native}) {
    if (to_string(t) == s) return t;
  }
  invalid("unknown map type '" + s + "'");
}

std::vector<std::pair<double, double>> pairs(const json& j) {
  std::vector<std::pair<double, double>> out;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2) invalid("expected a list of pairs");
    out.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return out;
}

Scenario parse_unchecked(const json& doc) {
  if (!doc.is_object()) invalid("scenario must be a JSON object");
  Scenario sc;
  sc.name = doc.value("name", "");
  if (!doc.contains("curve")) invalid("scenario has no curve");
  sc.curve = parse_curve(doc.at("curve"));
  if (doc.at("curve").contains("samples")) sc.curve_samples = power_of_two(doc.at("curve").at("samples"), "curve.samples");
  sc.map = doc.contains("map") ? parse_map(doc.at("map")) : MapSpec{};
  if (doc.contains("quadrature_N")) sc.quadrature_n = power_of_two(doc.at("quadrature_N"), "quadrature_N");
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    if (g.is_string()) {
      sc.grid = parse_grid(g.get<std::string>());
    } else if (g.is_object()) {
      sc.grid.radial = g.at("radial").get<std::size_t>();
      sc.grid.angular = g.at("angular").get<std::size_t>();
    } else if (g.is_array() && g.size() == 2) {
      sc.grid.radial = g[0].get<std::size_t>();
      sc.grid.angular = g[1].get<std::size_t>();
    } else {
      invalid("grid must be \"RxT\", [R, T] or {radial, angular}");
    }
    if (sc.grid.radial < 2 || sc.grid.angular < 3) invalid("grid must be at least 2x3");
  }
  if (doc.contains("tolerances")) {
    const auto& t = doc.at("tolerances");
    if (!t.is_object()) invalid("tolerances must be an object");
    for (const auto& [key, value] : t.items()) {
      static const char* known[] = {"t_relative", "l_not_qc", "l_inconclusive", "refine", "mu_slack", "kernel_slack"};
      if (std::find(std::begin(known), std::end(known), key) == std::end(known)) invalid("unknown tolerance '" + key + "'");
      (void)value;
    }
    auto& tol = sc.tolerances;
    tol.t_relative = positive(t, "t_relative", tol.t_relative);
    tol.l_not_qc = positive(t, "l_not_qc", tol.l_not_qc);
    tol.l_inconclusive = positive(t, "l_inconclusive", tol.l_inconclusive);
    tol.refine = positive(t, "refine", tol.refine);
    tol.mu_slack = positive(t, "mu_slack", tol.mu_slack);
    tol.kernel_slack = positive(t, "kernel_slack", tol.kernel_slack);
    if (tol.l_not_qc >= tol.l_inconclusive) invalid("l_not_qc must be below l_inconclusive");
  }
  if (doc.contains("options")) {
    const auto& o = doc.at("options");
    if (o.contains("schedule")) {
      sc.schedule = o.at("schedule").get<std::vector<int>>();
      for (int n : sc.schedule) {
        if (n < 1) invalid("schedule entries must be positive");
      }
    }
    if (o.contains("sweep")) {
      for (const auto& m : o.at("sweep")) sc.sweep.push_back(parse_map(m));
    }
    if (o.contains("seed")) sc.seed = o.at("seed").get<std::uint64_t>();
    if (o.contains("random")) {
      const auto& r = o.at("random");
      sc.random.count = r.value("count", std::size_t{0});
      sc.random.amplitude_min = r.value("amplitude_min", sc.random.amplitude_min);
      sc.random.amplitude_max = r.value("amplitude_max", sc.random.amplitude_max);
      sc.random.frequency_max = r.value("frequency_max", sc.random.frequency_max);
      if (sc.random.amplitude_min < 0.0 || sc.random.amplitude_max > 1.0 ||
          sc.random.amplitude_min > sc.random.amplitude_max || sc.random.frequency_max < 1) {
        invalid("random family needs 0 <= amplitude_min <= amplitude_max <= 1 and frequency_max >= 1");
      }
    }
  }
  return sc;
}

}  // namespace

PolarGrid parse_grid(const std::string& text) {
  static const std::regex pattern(R"(^\s*(\d+)\s*[xX]\s*(\d+)\s*$)");
  std::smatch m;
  if (!std::regex_match(text, m, pattern)) invalid("grid '" + text + "' is not of the form RxT");
  PolarGrid g;
  g.radial = std::stoul(m[1].str());
  g.angular = std::stoul(m[2].str());
  if (g.radial < 2 || g.angular < 3) invalid("grid must be at least 2x3");
  return g;
}

CurveSpec parse_curve(const json& j) {
  if (!j.is_object()) invalid("curve must be an object");
  CurveSpec spec;
  spec.kind = curve_kind(j.at("kind").get<std::string>());
  switch (spec.kind) {
    case CurveKind::Circle: {
      const cplx c = j.contains("center") ? point(j.at("center")) : cplx{};
      spec = CurveSpec::circle(j.value("radius", 1.0), c);
      break;
    }
    case CurveKind::Ellipse:
      spec = CurveSpec::ellipse(j.at("a").get<double>(), j.at("b").get<double>());
      break;
    case CurveKind::PolarGraph:
      spec = CurveSpec::polar_graph(j.at("coefficients").get<std::vector<double>>());
      break;
    case CurveKind::FourierCoefficients: {
      std::vector<FourierTerm> terms;
      for (const auto& t : j.at("terms")) terms.push_back({t.at("k").get<int>(), point(t.at("c"))});
      spec = CurveSpec::fourier(std::move(terms));
      break;
    }
    case CurveKind::SampleTable: {
      std::vector<cplx> pts;
      for (const auto& p : j.at("points")) pts.push_back(point(p));
      spec = CurveSpec::sample_table(std::move(pts));
      break;
    }
  }
  if (j.contains("alpha")) {
    const double a = j.at("alpha").get<double>();
    if (!(a > 0.0 && a <= 1.0)) invalid("alpha must lie in (0, 1]");
    spec.alpha = a;
  }
  if (j.contains("holder_c")) spec.holder_c = positive(j, "holder_c", 1.0);
  spec.c2 = j.value("c2", spec.c2);
  return spec;
}

MapSpec parse_map(const json& j) {
  if (!j.is_object()) invalid("map must be an object");
  MapSpec spec;
  spec.type = map_type(j.at("type").get<std::string>());
  spec.offset = j.value("offset", 0.0);
  switch (spec.type) {
    case MapType::Twist:
      spec.amplitude = j.at("amplitude").get<double>();
      spec.frequency = j.value("frequency", 1);
      spec.phase = j.value("phase", 0.0);
      if (spec.frequency < 1) invalid("twist frequency must be >= 1");
      break;
    case MapType::Plateau:
      spec.arcs = pairs(j.at("arcs"));
      break;
    case MapType::Piecewise:
      spec.knots = pairs(j.at("knots"));
      break;
    case MapType::Samples:
      spec.values = j.at("values").get<std::vector<double>>();
      if (j.contains("span")) spec.span = j.at("span").get<double>();
      break;
    case MapType::Identity:
    case MapType::Native:
      break;
  }
  return spec;
}

Scenario parse_scenario(const json& doc) {
  try {
    return parse_unchecked(doc);
  } catch (const json::exception& e) {
    invalid(std::string("malformed scenario: ") + e.what());
  }
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) invalid("cannot open scenario file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    invalid(std::string("scenario is not valid JSON: ") + e.what());
  }
  return parse_scenario(doc);
}

json to_json(const CurveSpec& spec) {
  json j;
  j["kind"] = to_string(spec.kind);
  switch (spec.kind) {
    case CurveKind::Circle:
      j["radius"] = spec.parameters.at(0);
      if (spec.parameters.size() >= 3) j["center"] = json::array({spec.parameters[1], spec.parameters[2]});
      break;
    case CurveKind::Ellipse:
      j["a"] = spec.parameters.at(0);
      j["b"] = spec.parameters.at(1);
      break;
    case CurveKind::PolarGraph:
      j["coefficients"] = spec.parameters;
      break;
    case CurveKind::FourierCoefficients: {
      json terms = json::array();
      for (const auto& t : spec.terms) terms.push_back({{"k", t.k}, {"c", point_json(t.c)}});
      j["terms"] = terms;
      break;
    }
    case CurveKind::SampleTable: {
      json pts = json::array();
      for (cplx p : spec.points) pts.push_back(point_json(p));
      j["points"] = pts;
      break;
    }
  }
  if (spec.alpha) j["alpha"] = *spec.alpha;
  if (spec.holder_c) j["holder_c"] = *spec.holder_c;
  j["c2"] = spec.c2;
  return j;
}

json to_json(const MapSpec& spec) {
  json j;
  j["type"] = to_string(spec.type);
  switch (spec.type) {
    case MapType::Twist:
      j["amplitude"] = spec.amplitude;
      j["frequency"] = spec.frequency;
      j["phase"] = spec.phase;
      break;
    case MapType::Plateau: {
      json a = json::array();
      for (auto [s, e] : spec.arcs) a.push_back(json::array({s, e}));
      j["arcs"] = a;
      break;
    }
    case MapType::Piecewise: {
      json k = json::array();
      for (auto [t, u] : spec.knots) k.push_back(json::array({t, u}));
      j["knots"] = k;
      break;
    }
    case MapType::Samples:
      j["values"] = spec.values;
      if (spec.span) j["span"] = *spec.span;
      break;
    case MapType::Identity:
    case MapType::Native:
      break;
  }
  if (spec.offset != 0.0) j["offset"] = spec.offset;
  return j;
}

json to_json(const Tolerances& tol) {
  return {{"t_relative", tol.t_relative}, {"l_not_qc", tol.l_not_qc},   {"l_inconclusive", tol.l_inconclusive},
          {"refine", tol.refine},         {"mu_slack", tol.mu_slack},   {"kernel_slack", tol.kernel_slack}};
}

}  // namespace kneser
