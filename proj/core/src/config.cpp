#include "neasslab/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace neasslab {

namespace {

using nlohmann::json;

// Tracks which keys of one object were consumed; leftovers are errors.
class ObjectReader {
 public:
  ObjectReader(const json& j, std::string context) : j_(j), context_(std::move(context)) {
    if (!j.is_object())
      throw ConfigError("config: '" + context_ + "' must be a JSON object");
  }

  bool has(const std::string& key) {
    if (j_.contains(key)) {
      seen_.insert(key);
      return true;
    }
    return false;
  }

  template <typename T>
  void get(const std::string& key, T& out) {
    if (!has(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception&) {
      throw ConfigError("config: bad value for '" + context_ + "." + key + "'");
    }
  }

  const json* child(const std::string& key) {
    if (!has(key)) return nullptr;
    return &j_.at(key);
  }

  void finish() {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (!seen_.count(it.key()))
        throw ConfigError("config: unknown key '" + context_ + "." + it.key() + "'");
    }
  }

 private:
  const json& j_;
  std::string context_;
  std::set<std::string> seen_;
};

void parse_lattice(const json& j, ScenarioConfig& sc) {
  ObjectReader r(j, "lattice");
  r.get("length", sc.length);
  std::string geom = sc.geometry == Geometry::torus ? "torus" : "open";
  r.get("geometry", geom);
  if (geom == "torus") {
    sc.geometry = Geometry::torus;
  } else if (geom == "open") {
    sc.geometry = Geometry::open_box;
  } else {
    throw ConfigError("config: lattice.geometry must be 'open' or 'torus'");
  }
  r.finish();
}

void parse_model(const json& j, ScenarioConfig& sc) {
  ObjectReader r(j, "model");
  r.get("kind", sc.kind);
  r.get("hopping", sc.hopping);
  r.get("hopping_alt", sc.hopping_alt);
  r.get("stagger", sc.stagger);
  r.get("mu", sc.mu);
  r.get("density_coupling", sc.density_coupling);
  r.get("density_range", sc.density_range);
  if (const json* ramp = r.child("ramp")) {
    ObjectReader rr(*ramp, "model.ramp");
    rr.get("target", sc.ramp_target);
    rr.get("amplitude", sc.ramp_amplitude);
    rr.get("t_on", sc.ramp_on);
    rr.get("t_off", sc.ramp_off);
    rr.finish();
  }
  r.finish();
}

void parse_perturbation(const json& j, ScenarioConfig& sc) {
  ObjectReader r(j, "perturbation");
  r.get("hopping", sc.pert_hopping);
  r.get("potential", sc.pert_potential);
  r.get("potential_amplitude", sc.pert_potential_amplitude);
  r.get("ramped", sc.pert_ramped);
  r.get("t_on", sc.pert_on);
  r.get("t_off", sc.pert_off);
  r.finish();
}

void parse_weight(const json& j, ScenarioConfig& sc) {
  ObjectReader r(j, "weight");
  r.get("gap", sc.gap);
  r.get("n_terms", sc.weight.n_terms);
  r.get("s_max_over_gap", sc.weight.s_max_over_gap);
  r.get("grid_points", sc.weight.grid_points);
  r.get("kernel_grid", sc.weight.kernel_grid);
  r.get("leakage_span", sc.weight.leakage_span);
  r.finish();
}

void parse_experiment(const json& j, RunConfig& rc) {
  ObjectReader r(j, "experiment");
  r.get("kind", rc.experiment_kind);

  if (rc.experiment_kind == "validate") {
    // no parameters beyond the scenario itself
  } else if (rc.experiment_kind == "invliou-check") {
    auto& e = rc.invliou;
    r.get("t", e.t);
    r.get("pairs", e.pairs);
    r.get("quadrature_ops", e.quadrature_ops);
    r.get("tol_identity", e.tol_identity);
    r.get("tol_quadrature", e.tol_quadrature);
    r.get("tol_derivative", e.tol_derivative);
    r.get("fd_step", e.fd_step);
  } else if (rc.experiment_kind == "lr-cone") {
    auto& e = rc.lr;
    r.get("time_max", e.time_max);
    r.get("time_points", e.time_points);
    r.get("threshold", e.threshold);
    r.get("zeta_rate", e.zeta_rate);
    r.get("max_distance", e.max_distance);
  } else if (rc.experiment_kind == "adiabatic-sweep") {
    auto& e = rc.adiabatic;
    r.get("orders", e.orders);
    r.get("epsilons", e.epsilons);
    r.get("theta", e.theta);
    r.get("t0", e.t0);
    r.get("t1", e.t1);
    r.get("steps_per_unit", e.steps_per_unit);
    r.get("fd_step", e.fd_step);
    r.get("slope_margin", e.slope_margin);
    r.get("stationarity_tol", e.stationarity_tol);
  } else if (rc.experiment_kind == "bulk-boundary") {
    auto& e = rc.bulk_boundary;
    r.get("order", e.order);
    r.get("epsilon", e.epsilon);
    r.get("theta", e.theta);
    r.get("t0", e.t0);
    r.get("t1", e.t1);
    r.get("steps_per_unit", e.steps_per_unit);
    r.get("ratio_min", e.ratio_min);
  } else if (rc.experiment_kind == "tdl-convergence") {
    auto& e = rc.tdl;
    r.get("radii", e.radii);
    r.get("dyn_radii", e.dyn_radii);
    r.get("gamma", e.gamma);
    r.get("lambda", e.lambda);
    r.get("windows", e.windows);
    r.get("t", e.t);
    r.get("eta", e.eta);
    r.get("dynamic_ratio_min", e.dynamic_ratio_min);
    r.get("steps_per_unit", e.steps_per_unit);
  } else {
    throw ConfigError("config: unknown experiment.kind '" + rc.experiment_kind + "'");
  }
  r.finish();
}

}  // namespace

RunConfig parse_config(const std::string& json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }
  RunConfig rc;
  ObjectReader root(doc, "root");
  if (const json* j = root.child("lattice")) parse_lattice(*j, rc.scenario);
  if (const json* j = root.child("model")) parse_model(*j, rc.scenario);
  if (const json* j = root.child("perturbation")) parse_perturbation(*j, rc.scenario);
  if (const json* j = root.child("weight")) parse_weight(*j, rc.scenario);
  root.get("sector", rc.scenario.sector);
  root.get("seed", rc.scenario.seed);
  if (const json* j = root.child("experiment")) parse_experiment(*j, rc);
  root.finish();

  rc.canonical = doc.dump();  // nlohmann objects iterate in sorted key order
  return rc;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace neasslab
