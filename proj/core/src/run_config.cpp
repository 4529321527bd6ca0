// Copyright 2026 The zigzag Authors
// SPDX-License-Identifier: Apache-2.0

#include "zigzag/run_config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "json.hpp"

namespace zigzag::run {

namespace {

std::vector<double> grid_from(const YAML::Node& n, const std::string& what) {
  if (n.IsScalar()) return {n.as<double>()};
  if (n.IsSequence()) return n.as<std::vector<double>>();
  if (n.IsMap()) {
    for (const char* k : {"start", "stop", "step"})
      if (!n[k]) throw ConfigError(what + " range needs start, stop and step");
    return arange(n["start"].as<double>(), n["stop"].as<double>(), n["step"].as<double>());
  }
  throw ConfigError("cannot read grid " + what);
}

template <class T>
void set_if(const YAML::Node& n, const char* key, T& target) {
  if (n && n[key]) target = n[key].as<T>();
}

void check_keys(const YAML::Node& n, std::initializer_list<std::string_view> allowed, const std::string& where) {
  if (!n || !n.IsMap()) return;
  for (const auto& kv : n) {
    const auto k = kv.first.as<std::string>();
    bool ok = false;
    for (auto a : allowed) ok = ok || a == k;
    if (!ok) throw ConfigError("unknown key '" + k + "' in " + where);
  }
}

}  // namespace

std::string_view to_string(Axis a) noexcept { return a == Axis::G ? "g" : "eta"; }

Axis parse_axis(std::string_view s) {
  if (s == "g") return Axis::G;
  if (s == "eta") return Axis::Eta;
  throw ConfigError("unknown scan axis '" + std::string(s) + "' (g|eta)");
}

std::vector<double> arange(double start, double stop, double step) {
  if (!(step > 0) || !std::isfinite(start) || !std::isfinite(stop) || stop < start)
    throw ConfigError("grid needs start <= stop and step > 0");
  const auto n = static_cast<long>(std::floor((stop - start) / step + 1e-3));
  if (n > 1000000) throw ConfigError("grid too long");
  std::vector<double> v;
  for (long i = 0; i <= n; ++i) {
    // 0.2 + 2 * 0.02 should print as 0.24
    const double x = start + static_cast<double>(i) * step;
    v.push_back(std::round(x * 1e12) / 1e12);
  }
  return v;
}

ModelParams RunConfig::point(double g, double eta, int L) const {
  ModelParams p = model;
  p.g = g;
  p.eta = eta;
  p.L = L;
  if (!n_explicit) p.N = L / 2;
  return p;
}

void RunConfig::validate() const {
  if (g_grid.empty() || eta_grid.empty()) throw ConfigError("empty grid");
  if (sizes.empty()) throw ConfigError("empty size list");
  if (threads < 0) throw ConfigError("threads must be >= 0");
  if (peaks < 1) throw ConfigError("peaks must be >= 1");
  if (!(prominence >= 0)) throw ConfigError("prominence must be >= 0");
  if (!(tol > 0) || max_iter < 1) throw ConfigError("bad solver settings");
  for (double g : g_grid)
    for (double e : eta_grid) point(g, e).validate();
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  const auto probe = out_dir / ".zigzag_write_probe";
  {
    std::ofstream f(probe);
    if (!f) throw ConfigError("output directory not writable: " + out_dir.string());
  }
  std::filesystem::remove(probe, ec);
}

std::string RunConfig::to_json() const {
  nlohmann::ordered_json j;
  j["model"] = {{"L", model.L},
                {"N", n_explicit ? nlohmann::ordered_json(model.N) : nlohmann::ordered_json("half")},
                {"g", model.g},
                {"eta", model.eta},
                {"J", model.J},
                {"boundary", std::string(zigzag::to_string(model.boundary))}};
  j["grid"] = {{"g", g_grid}, {"eta", eta_grid}, {"axis", std::string(to_string(axis))}};
  j["sizes"] = sizes;
  j["peaks"] = peaks;
  j["prominence"] = prominence;
  j["observables"] = {{"density", observables.density},   {"g2", observables.g2},
                      {"currents", observables.currents}, {"flux", observables.flux},
                      {"correlators", observables.correlators}, {"continuity", observables.continuity}};
  j["current_convention"] = convention == CurrentConvention::Formula ? "formula" : "continuity";
  j["solver"] = {{"tol", tol}, {"max_iter", max_iter}};
  j["output"] = {{"dir", out_dir.generic_string()},
                 {"format", std::string(io::to_string(format))},
                 {"tag", tag},
                 {"dump_operator", dump_operator},
                 {"operator_cache", operator_cache}};
  j["seed"] = seed;
  j["threads"] = threads;
  return j.dump();
}

RunConfig default_config() {
  RunConfig c;
  c.g_grid = arange(0.0, 3.0, 0.025);
  c.eta_grid = arange(0.0, 10.0, 0.25);
  return c;
}

RunConfig parse_config(std::string_view text) {
  YAML::Node root;
  try {
    root = YAML::Load(std::string(text));
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config parse error: ") + e.what());
  }
  RunConfig c;
  if (!root || root.IsNull()) return c;
  if (!root.IsMap()) throw ConfigError("config must be a mapping");
  try {
    check_keys(root,
               {"model", "grid", "sizes", "peaks", "prominence", "observables", "current_convention", "solver",
                "output", "seed", "threads"},
               "config");
    if (const auto m = root["model"]) {
      check_keys(m, {"L", "N", "g", "eta", "J", "boundary"}, "model");
      set_if(m, "L", c.model.L);
      c.model.N = c.model.L / 2;
      if (m["N"] && !(m["N"].IsScalar() && m["N"].as<std::string>() == "half")) {
        c.model.N = m["N"].as<int>();
        c.n_explicit = true;
      }
      set_if(m, "g", c.model.g);
      set_if(m, "eta", c.model.eta);
      set_if(m, "J", c.model.J);
      if (m["boundary"]) c.model.boundary = parse_boundary(m["boundary"].as<std::string>());
    }
    c.g_grid = {c.model.g};
    c.eta_grid = {c.model.eta};
    if (const auto g = root["grid"]) {
      check_keys(g, {"g", "eta", "axis"}, "grid");
      if (g["g"]) c.g_grid = grid_from(g["g"], "g");
      if (g["eta"]) c.eta_grid = grid_from(g["eta"], "eta");
      if (g["axis"]) c.axis = parse_axis(g["axis"].as<std::string>());
    }
    if (root["sizes"]) c.sizes = root["sizes"].as<std::vector<int>>();
    set_if(root, "peaks", c.peaks);
    set_if(root, "prominence", c.prominence);
    if (const auto o = root["observables"]) {
      check_keys(o, {"density", "g2", "currents", "flux", "correlators", "continuity"}, "observables");
      set_if(o, "density", c.observables.density);
      set_if(o, "g2", c.observables.g2);
      set_if(o, "currents", c.observables.currents);
      set_if(o, "flux", c.observables.flux);
      set_if(o, "correlators", c.observables.correlators);
      set_if(o, "continuity", c.observables.continuity);
    }
    if (root["current_convention"]) {
      const auto s = root["current_convention"].as<std::string>();
      if (s == "formula") c.convention = CurrentConvention::Formula;
      else if (s == "continuity") c.convention = CurrentConvention::Continuity;
      else throw ConfigError("current_convention must be formula or continuity");
    }
    if (const auto s = root["solver"]) {
      check_keys(s, {"tol", "max_iter"}, "solver");
      set_if(s, "tol", c.tol);
      set_if(s, "max_iter", c.max_iter);
    }
    if (const auto o = root["output"]) {
      check_keys(o, {"dir", "format", "tag", "dump_operator", "operator_cache"}, "output");
      if (o["dir"]) c.out_dir = o["dir"].as<std::string>();
      if (o["format"]) c.format = io::parse_format(o["format"].as<std::string>());
      set_if(o, "tag", c.tag);
      set_if(o, "dump_operator", c.dump_operator);
      set_if(o, "operator_cache", c.operator_cache);
    }
    set_if(root, "seed", c.seed);
    set_if(root, "threads", c.threads);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return c;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace zigzag::run
