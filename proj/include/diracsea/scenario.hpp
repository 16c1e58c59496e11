#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "diracsea/dynamics.hpp"
#include "diracsea/qnorm.hpp"

namespace diracsea {

// Invalid configuration; `path` names the offending field (e.g. potential.terms[1].sigma).
struct ConfigError : std::runtime_error {
  ConfigError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path(std::move(path)) {}
  std::string path;
};

enum class Experiment { Spectrum, Evolve, Scan, Qnorm, Lift, Gauge, WedgeSuite };

std::string experiment_name(Experiment e);
Experiment experiment_from_name(const std::string& name);

struct ScanSettings {
  std::vector<int> sizes{32, 64, 128};
  double threshold = 0.02;
};

struct QnormSettings {
  double time = 0.0;
  // radius 0 means the grid cutoff of each size
  QnormQuadrature quadrature;
};

struct GaugeSettings {
  PotentialTerm profile;
  Envelope switching{EnvelopeKind::SmoothStep, 0.0, 1.0};
  double tolerance = 1e-6;
  double band = 0.5;
  int refinements = 3;
};

struct WedgeSettings {
  int trials = 200;
  int max_space = 10;
  int max_index = 4;
};

struct ScenarioConfig {
  Experiment experiment = Experiment::Spectrum;
  std::uint64_t seed = 0;
  PhysicsParams physics;
  GridSpec grid;
  PotentialSpec potential;
  EvolutionConfig evolution;
  ScanSettings scan;
  QnormSettings qnorm;
  GaugeSettings gauge;
  WedgeSettings wedge;
  nlohmann::json source;  // document after overrides, used for the config hash
};

// Applies "a.b.c=value" overrides; value is parsed as JSON, else taken as a string.
void apply_override(nlohmann::json& doc, const std::string& assignment);
ScenarioConfig parse_scenario(const nlohmann::json& doc);
// Reads, overrides and parses; parse errors carry a location.
ScenarioConfig load_scenario(const std::string& path, const std::vector<std::string>& overrides);

// 64-bit FNV-1a of the canonical dump, as 16 hex digits.
std::string config_hash(const nlohmann::json& doc);

}  // namespace diracsea
