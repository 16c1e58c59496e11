#include "diracsea/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace diracsea {

using nlohmann::json;

std::string experiment_name(Experiment e) {
  switch (e) {
    case Experiment::Spectrum: return "spectrum";
    case Experiment::Evolve: return "evolve";
    case Experiment::Scan: return "scan";
    case Experiment::Qnorm: return "qnorm";
    case Experiment::Lift: return "lift";
    case Experiment::Gauge: return "gauge";
    case Experiment::WedgeSuite: return "wedge-suite";
  }
  return "?";
}

Experiment experiment_from_name(const std::string& name) {
  for (auto e : {Experiment::Spectrum, Experiment::Evolve, Experiment::Scan, Experiment::Qnorm, Experiment::Lift,
                 Experiment::Gauge, Experiment::WedgeSuite})
    if (experiment_name(e) == name) return e;
  throw ConfigError("experiment", "unknown experiment '" + name + "'");
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("--set", "expected KEY=VALUE, got '" + assignment + "'");
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  std::string pointer;
  std::stringstream ss(key);
  for (std::string part; std::getline(ss, part, '.');) {
    if (part.empty()) throw ConfigError(key, "empty path component");
    pointer += "/" + part;
  }
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  try {
    doc[json::json_pointer(pointer)] = value;
  } catch (const json::exception& e) {
    throw ConfigError(key, e.what());
  }
}

namespace {

template <class Fn>
void at_path(const std::string& path, Fn&& fn) {
  try {
    fn();
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(path, e.what());
  }
}

void reject_unknown(const json& j, const std::string& path, std::initializer_list<const char*> allowed) {
  if (!j.is_object()) throw ConfigError(path.empty() ? "<root>" : path, "expected an object");
  const std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [k, v] : j.items())
    if (!ok.count(k)) throw ConfigError(path.empty() ? k : path + "." + k, "unknown field");
}

Method method_from_name(const std::string& s) {
  if (s == "strang") return Method::StrangSplit;
  if (s == "midpoint") return Method::DenseMidpointExp;
  if (s == "born") return Method::BornSeries;
  throw std::invalid_argument("unknown method '" + s + "' (strang, midpoint, born)");
}

KernelWrap wrap_from_name(const std::string& s) {
  if (s == "periodic") return KernelWrap::Periodic;
  if (s == "aperiodic") return KernelWrap::Aperiodic;
  throw std::invalid_argument("unknown wrap '" + s + "' (periodic, aperiodic)");
}

}  // namespace

ScenarioConfig parse_scenario(const json& doc) {
  reject_unknown(doc, "", {"experiment", "seed", "physics", "grid", "potential", "evolution", "scan", "qnorm",
                           "gauge", "wedge", "description"});
  ScenarioConfig c;
  c.source = doc;
  if (doc.contains("experiment")) {
    at_path("experiment", [&] { c.experiment = experiment_from_name(doc.at("experiment").get<std::string>()); });
  }
  at_path("seed", [&] { c.seed = doc.value("seed", std::uint64_t{0}); });
  if (doc.contains("physics")) {
    reject_unknown(doc["physics"], "physics", {"mass", "charge"});
    at_path("physics", [&] { c.physics = doc["physics"].get<PhysicsParams>(); });
  }
  at_path("physics", [&] { c.physics.validate(); });
  if (doc.contains("grid")) {
    reject_unknown(doc["grid"], "grid", {"dim", "n", "box_length"});
    at_path("grid", [&] { c.grid = doc["grid"].get<GridSpec>(); });
  }
  at_path("grid", [&] { c.grid.validate(); });

  if (doc.contains("potential")) {
    const json& p = doc["potential"];
    reject_unknown(p, "potential", {"terms", "envelope"});
    Envelope shared;
    const bool has_shared = p.contains("envelope");
    if (has_shared) at_path("potential.envelope", [&] { shared = p["envelope"].get<Envelope>(); });
    if (p.contains("terms")) {
      if (!p["terms"].is_array()) throw ConfigError("potential.terms", "expected an array");
      for (std::size_t i = 0; i < p["terms"].size(); ++i) {
        const std::string path = "potential.terms[" + std::to_string(i) + "]";
        const json& item = p["terms"][i];
        reject_unknown(item, path, {"component", "amplitude", "sigma", "center", "profile", "axis", "wavevector",
                                    "envelope", "derivative_order"});
        PotentialTerm t;
        at_path(path, [&] { t = item.get<PotentialTerm>(); });
        if (has_shared && !item.contains("envelope")) t.envelope = shared;
        PotentialSpec single{{t}};
        at_path(path, [&] { single.validate(c.grid.dim); });
        c.potential.terms.push_back(t);
      }
    }
  }

  if (doc.contains("evolution")) {
    const json& e = doc["evolution"];
    reject_unknown(e, "evolution",
                   {"t0", "t1", "steps", "method", "born_order", "quadrature_points", "born_tolerance", "wrap"});
    at_path("evolution", [&] {
      c.evolution.t0 = e.value("t0", c.evolution.t0);
      c.evolution.t1 = e.value("t1", c.evolution.t1);
      c.evolution.steps = e.value("steps", c.evolution.steps);
      if (e.contains("method")) c.evolution.method = method_from_name(e["method"].get<std::string>());
      c.evolution.born_order = e.value("born_order", c.evolution.born_order);
      c.evolution.quadrature_points = e.value("quadrature_points", c.evolution.quadrature_points);
      c.evolution.born_tolerance = e.value("born_tolerance", c.evolution.born_tolerance);
      if (e.contains("wrap")) c.evolution.wrap = wrap_from_name(e["wrap"].get<std::string>());
    });
  }
  at_path("evolution", [&] { c.evolution.validate(); });

  if (doc.contains("scan")) {
    reject_unknown(doc["scan"], "scan", {"sizes", "threshold"});
    at_path("scan", [&] {
      c.scan.sizes = doc["scan"].value("sizes", c.scan.sizes);
      c.scan.threshold = doc["scan"].value("threshold", c.scan.threshold);
    });
  }
  if (doc.contains("qnorm")) {
    const json& q = doc["qnorm"];
    reject_unknown(q, "qnorm", {"time", "radius", "samples", "replicates", "sampling"});
    at_path("qnorm", [&] {
      c.qnorm.time = q.value("time", c.qnorm.time);
      c.qnorm.quadrature.radius = q.value("radius", 0.0);
      c.qnorm.quadrature.samples = q.value("samples", c.qnorm.quadrature.samples);
      c.qnorm.quadrature.replicates = q.value("replicates", c.qnorm.quadrature.replicates);
      const auto s = q.value("sampling", std::string("energy"));
      if (s == "energy") c.qnorm.quadrature.sampling = QnormSampling::EnergyWeighted;
      else if (s == "difference") c.qnorm.quadrature.sampling = QnormSampling::DifferenceWeighted;
      else throw std::invalid_argument("unknown sampling '" + s + "' (energy, difference)");
    });
  } else {
    c.qnorm.quadrature.radius = 0.0;
  }
  c.qnorm.quadrature.seed = c.seed;
  if (doc.contains("gauge")) {
    const json& g = doc["gauge"];
    reject_unknown(g, "gauge", {"profile", "switching", "tolerance", "band", "refinements"});
    if (g.contains("profile")) at_path("gauge.profile", [&] { c.gauge.profile = g["profile"].get<PotentialTerm>(); });
    if (g.contains("switching"))
      at_path("gauge.switching", [&] { c.gauge.switching = g["switching"].get<Envelope>(); });
    at_path("gauge", [&] {
      c.gauge.tolerance = g.value("tolerance", c.gauge.tolerance);
      c.gauge.band = g.value("band", c.gauge.band);
      c.gauge.refinements = g.value("refinements", c.gauge.refinements);
      c.gauge.switching.validate();
      if (c.gauge.band <= 0.0 || c.gauge.band > 1.0) throw std::invalid_argument("band must lie in (0, 1]");
      if (c.gauge.refinements < 0) throw std::invalid_argument("refinements must be >= 0");
    });
  }
  if (doc.contains("wedge")) {
    const json& w = doc["wedge"];
    reject_unknown(w, "wedge", {"trials", "max_space", "max_index"});
    at_path("wedge", [&] {
      c.wedge.trials = w.value("trials", c.wedge.trials);
      c.wedge.max_space = w.value("max_space", c.wedge.max_space);
      c.wedge.max_index = w.value("max_index", c.wedge.max_index);
      if (c.wedge.trials < 1 || c.wedge.max_index < 1 || c.wedge.max_space <= c.wedge.max_index)
        throw std::invalid_argument("need trials >= 1 and max_space > max_index >= 1");
    });
  }
  return c;
}

ScenarioConfig load_scenario(const std::string& path, const std::vector<std::string>& overrides) {
  json doc = json::object();
  if (!path.empty()) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file");
    try {
      doc = json::parse(in);
    } catch (const json::parse_error& e) {
      throw ConfigError(path, e.what());
    }
  }
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_scenario(doc);
}

std::string config_hash(const json& doc) {
  const std::string text = doc.dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace diracsea
