#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "kneser/correspondence.hpp"
#include "kneser/curve.hpp"
#include "kneser/qc.hpp"

namespace kneser {

struct Tolerances {
  double t_relative = 1e-6;       // inconclusive band for min T, relative to max |T|
  double l_not_qc = 1e-8;         // l(F) at or below: not quasiconformal
  double l_inconclusive = 1e-4;   // l(F) below: inconclusive
  double refine = 1e-4;           // boundary extrema must settle to this
  double mu_slack = 1e-6;         // interior dilatation vs bound
  double kernel_slack = 1e-9;
};

// Random twist family for the probe command: amplitudes uniform in
// [amplitude_min, amplitude_max], frequencies in 1..frequency_max, phases
// uniform in [0, 2pi).
struct RandomFamily {
  std::size_t count = 0;
  double amplitude_min = 0.0;
  double amplitude_max = 0.9;
  int frequency_max = 3;
};

struct Scenario {
  std::string name;
  CurveSpec curve;
  std::size_t curve_samples = 1024;
  MapSpec map;
  std::size_t quadrature_n = 1024;
  PolarGrid grid;
  Tolerances tolerances;
  std::vector<int> schedule{8, 16, 32, 64, 128, 256, 512};
  std::vector<MapSpec> sweep;
  RandomFamily random;
  std::uint64_t seed = 20240611;
};

// Throws Error(InvalidSpec) with a readable message on malformed input.
Scenario parse_scenario(const nlohmann::json& doc);
Scenario load_scenario(const std::string& path);

// "RxT", e.g. "64x256".
PolarGrid parse_grid(const std::string& text);

CurveSpec parse_curve(const nlohmann::json& j);
MapSpec parse_map(const nlohmann::json& j);

nlohmann::json to_json(const CurveSpec& spec);
nlohmann::json to_json(const MapSpec& spec);
nlohmann::json to_json(const Tolerances& tol);

}  // namespace kneser
