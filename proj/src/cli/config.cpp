#include "liouspec/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <set>
#include <string>

namespace liouspec::cli {

namespace {

using Json = nlohmann::ordered_json;

void reject_unknown(const Json& obj, const std::string& where,
                    std::initializer_list<const char*> allowed) {
  if (!obj.is_object()) throw ConfigError(where + ": expected an object");
  const std::set<std::string> keys(allowed.begin(), allowed.end());
  for (const auto& [key, value] : obj.items()) {
    if (!keys.contains(key)) throw ConfigError(where + ": unknown key '" + key + "'");
  }
}

double get_number(const Json& v, const std::string& where) {
  if (!v.is_number()) throw ConfigError(where + ": expected a number");
  const double x = v.get<double>();
  if (!std::isfinite(x)) throw ConfigError(where + ": must be finite");
  return x;
}

std::size_t get_count(const Json& v, const std::string& where) {
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
    throw ConfigError(where + ": expected a non-negative integer");
  }
  return v.get<std::size_t>();
}

bool get_bool(const Json& v, const std::string& where) {
  if (!v.is_boolean()) throw ConfigError(where + ": expected true or false");
  return v.get<bool>();
}

std::vector<double> get_numbers(const Json& v, const std::string& where) {
  if (!v.is_array()) throw ConfigError(where + ": expected an array of numbers");
  std::vector<double> out;
  for (std::size_t k = 0; k < v.size(); ++k) {
    out.push_back(get_number(v[k], where + "[" + std::to_string(k) + "]"));
  }
  return out;
}

SpinLength spin_from(double j, const std::string& where) {
  try {
    return SpinLength::from_value(j);
  } catch (const InvalidArgument& e) {
    throw ConfigError(where + ": " + e.what());
  }
}

Json optional_number(const std::optional<double>& x) { return x ? Json(*x) : Json(nullptr); }

}  // namespace

std::vector<double> GridSpec::build(const ModelParams& params) const {
  const double half = half_span_gamma * params.gamma;
  return uniform_grid(min.value_or(params.h - half), max.value_or(params.h + half), n);
}

std::string SourceSpec::label() const {
  if (kind == SourceKind::Random) return "random_seed" + std::to_string(seed.value_or(0));
  return std::string(to_string(kind));
}

ModelParams RunConfig::default_params() {
  ModelParams p;
  p.j = SpinLength::from_twice(40);
  p.h = 1.0;
  p.gamma = 0.1;
  p.gamma0 = 0.0;
  p.p = 0.9;
  return p;
}

std::vector<SourceSpec> RunConfig::default_sources() {
  return {{SourceKind::Steady, std::nullopt},
          {SourceKind::InfiniteTemperature, std::nullopt},
          {SourceKind::Random, 1},
          {SourceKind::Random, 2},
          {SourceKind::Random, 3}};
}

void RunConfig::validate() const {
  try {
    params.validate();
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("model: ") + e.what());
  }
  if (!(params.gamma > 0.0)) throw ConfigError("model.gamma must be > 0");
  if (grid.n < 2) throw ConfigError("grid.n must be >= 2");
  if (!(grid.half_span_gamma > 0.0)) throw ConfigError("grid.half_span_gamma must be > 0");
  const auto g = [&] {
    const double half = grid.half_span_gamma * params.gamma;
    return std::pair{grid.min.value_or(params.h - half), grid.max.value_or(params.h + half)};
  }();
  if (!(g.second > g.first)) throw ConfigError("grid: min must be below max");
  if (sources.empty()) throw ConfigError("sources: at least one source is required");
  if (!(fit.window_mult > 0.0)) throw ConfigError("fit.window_mult must be > 0");
  if (fit.min_points < 20) throw ConfigError("fit.min_points must be >= 20");
  if (fit.fit.gamma_scales.empty()) throw ConfigError("fit.gamma_scales must not be empty");
  for (double s : fit.fit.gamma_scales) {
    if (!(s > 0.0)) throw ConfigError("fit.gamma_scales entries must be > 0");
  }
  if (fit.fit.max_iterations < 1) throw ConfigError("fit.max_iterations must be >= 1");
  if (!(fit.fit.rss_rtol > 0.0) || !(fit.fit.grad_tol > 0.0)) {
    throw ConfigError("fit tolerances must be > 0");
  }
  if (sweep.p.empty() || sweep.j.empty()) throw ConfigError("sweep: p and j must be nonempty");
  for (double p : sweep.p) {
    if (p < -1.0 || p > 1.0) throw ConfigError("sweep.p entries must lie in [-1, 1]");
  }
  if (eigs.p.empty()) throw ConfigError("eigs.p must be nonempty");
  for (double p : eigs.p) {
    if (p < -1.0 || p > 1.0) throw ConfigError("eigs.p entries must lie in [-1, 1]");
  }
  if (!(eigs.threshold > 0.0)) throw ConfigError("eigs.threshold must be > 0");
  if (!(synthetic.gamma > 0.0)) throw ConfigError("synthetic.gamma must be > 0");
  if (!(synthetic.r0 >= 0.0 && synthetic.r0 < 1.0)) {
    throw ConfigError("synthetic.r0 must lie in [0, 1)");
  }
  for (double e : synthetic.epsilon) {
    if (!(e >= 0.0) || !(e < synthetic.gamma)) {
      throw ConfigError("synthetic.epsilon entries must lie in [0, synthetic.gamma)");
    }
  }
  if (!(synthetic.grid_max > synthetic.grid_min) || synthetic.grid_n < 21) {
    throw ConfigError("synthetic grid needs min < max and n >= 21");
  }
  if (out.empty()) throw ConfigError("output.dir must not be empty");
}

RunConfig config_from_json(const Json& doc) {
  reject_unknown(doc, "config",
                 {"model", "grid", "sources", "fit", "sweep", "eigs", "synthetic", "output",
                  "threads"});
  RunConfig cfg;

  if (doc.contains("model")) {
    const auto& m = doc["model"];
    reject_unknown(m, "model", {"j", "h", "gamma", "gamma0", "p"});
    if (m.contains("j")) cfg.params.j = spin_from(get_number(m["j"], "model.j"), "model.j");
    if (m.contains("h")) cfg.params.h = get_number(m["h"], "model.h");
    if (m.contains("gamma")) cfg.params.gamma = get_number(m["gamma"], "model.gamma");
    if (m.contains("gamma0")) cfg.params.gamma0 = get_number(m["gamma0"], "model.gamma0");
    if (m.contains("p")) cfg.params.p = get_number(m["p"], "model.p");
  }

  if (doc.contains("grid")) {
    const auto& g = doc["grid"];
    reject_unknown(g, "grid", {"min", "max", "n", "half_span_gamma"});
    if (g.contains("min") && !g["min"].is_null()) cfg.grid.min = get_number(g["min"], "grid.min");
    if (g.contains("max") && !g["max"].is_null()) cfg.grid.max = get_number(g["max"], "grid.max");
    if (g.contains("n")) cfg.grid.n = get_count(g["n"], "grid.n");
    if (g.contains("half_span_gamma")) {
      cfg.grid.half_span_gamma = get_number(g["half_span_gamma"], "grid.half_span_gamma");
    }
  }

  if (doc.contains("sources")) {
    const auto& s = doc["sources"];
    reject_unknown(s, "sources", {"steady", "infinite_temperature", "random_seeds"});
    cfg.sources.clear();
    if (get_bool(s.value("steady", Json(true)), "sources.steady")) {
      cfg.sources.push_back({SourceKind::Steady, std::nullopt});
    }
    if (get_bool(s.value("infinite_temperature", Json(true)), "sources.infinite_temperature")) {
      cfg.sources.push_back({SourceKind::InfiniteTemperature, std::nullopt});
    }
    if (s.contains("random_seeds")) {
      const auto& seeds = s["random_seeds"];
      if (!seeds.is_array()) throw ConfigError("sources.random_seeds: expected an array");
      for (const auto& v : seeds) {
        if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
          throw ConfigError("sources.random_seeds: seeds must be non-negative integers");
        }
        cfg.sources.push_back({SourceKind::Random, v.get<std::uint64_t>()});
      }
    }
  }

  if (doc.contains("fit")) {
    const auto& f = doc["fit"];
    reject_unknown(f, "fit",
                   {"window_mult", "min_points", "gamma_scales", "max_iterations", "rss_rtol",
                    "grad_tol"});
    if (f.contains("window_mult")) cfg.fit.window_mult = get_number(f["window_mult"], "fit.window_mult");
    if (f.contains("min_points")) {
      cfg.fit.min_points = static_cast<Index>(get_count(f["min_points"], "fit.min_points"));
    }
    if (f.contains("gamma_scales")) {
      cfg.fit.fit.gamma_scales = get_numbers(f["gamma_scales"], "fit.gamma_scales");
    }
    if (f.contains("max_iterations")) {
      cfg.fit.fit.max_iterations =
          static_cast<int>(get_count(f["max_iterations"], "fit.max_iterations"));
    }
    if (f.contains("rss_rtol")) cfg.fit.fit.rss_rtol = get_number(f["rss_rtol"], "fit.rss_rtol");
    if (f.contains("grad_tol")) cfg.fit.fit.grad_tol = get_number(f["grad_tol"], "fit.grad_tol");
  }

  if (doc.contains("sweep")) {
    const auto& s = doc["sweep"];
    reject_unknown(s, "sweep", {"p", "j"});
    if (s.contains("p")) cfg.sweep.p = get_numbers(s["p"], "sweep.p");
    if (s.contains("j")) {
      cfg.sweep.j.clear();
      for (double j : get_numbers(s["j"], "sweep.j")) cfg.sweep.j.push_back(spin_from(j, "sweep.j"));
    }
  }

  if (doc.contains("eigs")) {
    const auto& e = doc["eigs"];
    reject_unknown(e, "eigs", {"p", "threshold", "rescale_by_j"});
    if (e.contains("p")) cfg.eigs.p = get_numbers(e["p"], "eigs.p");
    if (e.contains("threshold")) cfg.eigs.threshold = get_number(e["threshold"], "eigs.threshold");
    if (e.contains("rescale_by_j")) {
      cfg.eigs.rescale_by_j = get_bool(e["rescale_by_j"], "eigs.rescale_by_j");
    }
  }

  if (doc.contains("synthetic")) {
    const auto& s = doc["synthetic"];
    reject_unknown(s, "synthetic",
                   {"gamma", "omega0", "r0", "epsilon", "grid_min", "grid_max", "grid_n"});
    auto& sy = cfg.synthetic;
    if (s.contains("gamma")) sy.gamma = get_number(s["gamma"], "synthetic.gamma");
    if (s.contains("omega0")) sy.omega0 = get_number(s["omega0"], "synthetic.omega0");
    if (s.contains("r0")) sy.r0 = get_number(s["r0"], "synthetic.r0");
    if (s.contains("epsilon")) sy.epsilon = get_numbers(s["epsilon"], "synthetic.epsilon");
    if (s.contains("grid_min")) sy.grid_min = get_number(s["grid_min"], "synthetic.grid_min");
    if (s.contains("grid_max")) sy.grid_max = get_number(s["grid_max"], "synthetic.grid_max");
    if (s.contains("grid_n")) sy.grid_n = get_count(s["grid_n"], "synthetic.grid_n");
  }

  if (doc.contains("output")) {
    const auto& o = doc["output"];
    reject_unknown(o, "output", {"dir"});
    if (o.contains("dir")) {
      if (!o["dir"].is_string()) throw ConfigError("output.dir: expected a string");
      cfg.out = o["dir"].get<std::string>();
    }
  }

  if (doc.contains("threads")) {
    cfg.threads = static_cast<unsigned>(get_count(doc["threads"], "threads"));
  }

  cfg.validate();
  return cfg;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError("config file " + path.string() + " is not valid JSON: " + e.what());
  }
  try {
    return config_from_json(doc);
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

Json config_to_json(const RunConfig& cfg) {
  Json doc;
  doc["model"] = {{"j", cfg.params.j.value()},
                  {"h", cfg.params.h},
                  {"gamma", cfg.params.gamma},
                  {"gamma0", cfg.params.gamma0},
                  {"p", cfg.params.p}};
  doc["grid"] = {{"min", optional_number(cfg.grid.min)},
                 {"max", optional_number(cfg.grid.max)},
                 {"n", cfg.grid.n},
                 {"half_span_gamma", cfg.grid.half_span_gamma}};

  Json seeds = Json::array();
  bool steady = false;
  bool infinite = false;
  for (const auto& s : cfg.sources) {
    if (s.kind == SourceKind::Steady) steady = true;
    if (s.kind == SourceKind::InfiniteTemperature) infinite = true;
    if (s.kind == SourceKind::Random) seeds.push_back(s.seed.value_or(0));
  }
  doc["sources"] = {{"steady", steady}, {"infinite_temperature", infinite}, {"random_seeds", seeds}};

  doc["fit"] = {{"window_mult", cfg.fit.window_mult},
                {"min_points", cfg.fit.min_points},
                {"gamma_scales", cfg.fit.fit.gamma_scales},
                {"max_iterations", cfg.fit.fit.max_iterations},
                {"rss_rtol", cfg.fit.fit.rss_rtol},
                {"grad_tol", cfg.fit.fit.grad_tol}};

  Json js = Json::array();
  for (const auto& j : cfg.sweep.j) js.push_back(j.value());
  doc["sweep"] = {{"p", cfg.sweep.p}, {"j", js}};
  doc["eigs"] = {{"p", cfg.eigs.p},
                 {"threshold", cfg.eigs.threshold},
                 {"rescale_by_j", cfg.eigs.rescale_by_j}};
  const auto& sy = cfg.synthetic;
  doc["synthetic"] = {{"gamma", sy.gamma},       {"omega0", sy.omega0},
                      {"r0", sy.r0},             {"epsilon", sy.epsilon},
                      {"grid_min", sy.grid_min}, {"grid_max", sy.grid_max},
                      {"grid_n", sy.grid_n}};
  doc["output"] = {{"dir", cfg.out.string()}};
  doc["threads"] = cfg.threads;
  return doc;
}

void apply_overrides(RunConfig& cfg, const Overrides& o) {
  if (o.j) {
    cfg.params.j = spin_from(*o.j, "--j");
    cfg.sweep.j = {cfg.params.j};
  }
  if (o.p) {
    cfg.params.p = *o.p;
    cfg.sweep.p = {*o.p};
    cfg.eigs.p = {*o.p};
  }
  if (o.gamma) cfg.params.gamma = *o.gamma;
  if (o.gamma0) cfg.params.gamma0 = *o.gamma0;
  if (o.h) cfg.params.h = *o.h;
  if (o.threshold) cfg.eigs.threshold = *o.threshold;
  if (o.out) cfg.out = *o.out;
  if (o.seed) {
    std::erase_if(cfg.sources, [](const SourceSpec& s) { return s.kind == SourceKind::Random; });
    cfg.sources.push_back({SourceKind::Random, *o.seed});
  }
  if (o.window_mult) cfg.fit.window_mult = *o.window_mult;
  if (o.grid_min) cfg.grid.min = *o.grid_min;
  if (o.grid_max) cfg.grid.max = *o.grid_max;
  if (o.grid_n) cfg.grid.n = *o.grid_n;
  if (o.threads) cfg.threads = *o.threads;
  cfg.validate();
}

}  // namespace liouspec::cli
