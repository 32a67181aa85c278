#pragma once

#include <cstdint>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "spiralbound/bound.hpp"
#include "spiralbound/spiral.hpp"

namespace spiralbound {

struct GeometryConfig {
  double horizon = 5000.0;  // arc length
  double margin = 0.1;
  double grid_ratio = 1.05;
  int bump_refine = 48;
};

struct BoundConfig {
  std::vector<double> sigmas{1.5, 2.0};
  double r_factor = std::numeric_limits<double>::quiet_NaN();
  double threshold = std::numeric_limits<double>::quiet_NaN();
  double quad_rel_tol = 1e-8;
  TailPolicy tail_cut = TailPolicy::asymptotic;
};

struct CertifyConfig {
  double rel_tol = 0.1;
};

struct OracleConfig {
  double h = 0.125;
  double R = 26.0;
  int k = 8;
  double tol = 1e-8;
  double shift = 0.0;
  std::uint64_t seed = 12345;
  int max_basis = 0;
  int max_restarts = 60;
  bool dump_eigenvectors = false;
};

struct OutputConfig {
  std::string directory = "out";
  bool csv = true;
  bool json = true;
};

struct RunConfig {
  SpiralSpec spiral = SpiralSpec::pure(1.0);
  GeometryConfig geometry;
  BoundConfig bound;
  CertifyConfig certify;
  OracleConfig oracle;
  OutputConfig output;
  std::uint64_t hash = 0;  // FNV-1a of the canonical serialized form

  void validate() const {
    spiral.validate();
    if (bound.sigmas.empty())
      throw std::invalid_argument("config: bound.sigmas must be nonempty");
    for (double s : bound.sigmas)
      if (!(s >= 0.5)) throw std::invalid_argument("config: every sigma must be >= 1/2");
    if (!(geometry.margin > 0.0 && geometry.margin < 1.0))
      throw std::invalid_argument("config: geometry.margin must lie in (0,1)");
    if (!(geometry.horizon > 0.0))
      throw std::invalid_argument("config: geometry.horizon must be > 0");
    if (!(oracle.h > 0.0 && oracle.R > 0.0 && oracle.k >= 1))
      throw std::invalid_argument("config: oracle.h, oracle.R, oracle.k invalid");
  }
};

namespace detail {

inline void reject_unknown_keys(const nlohmann::json& j, const char* where,
                                std::initializer_list<const char*> known) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    bool ok = false;
    for (const char* k : known) ok = ok || it.key() == k;
    if (!ok)
      throw std::invalid_argument(std::string("config: unknown key \"") + where + "." +
                                  it.key() + "\"");
  }
}

template <class T>
inline void get_if(const nlohmann::json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

inline std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace detail

/// Canonical serialized form (sorted keys) used for the provenance hash.
inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["spiral"]["family"] = to_string(c.spiral.family);
  j["spiral"]["a0"] = c.spiral.a0;
  if (c.spiral.family == RhoFamily::power_tail) {
    j["spiral"]["c"] = c.spiral.c;
    j["spiral"]["p"] = c.spiral.p;
  }
  if (c.spiral.family == RhoFamily::bump) {
    j["spiral"]["amplitude"] = c.spiral.amplitude;
    j["spiral"]["theta1"] = c.spiral.theta1;
    j["spiral"]["theta2"] = c.spiral.theta2;
  }
  j["geometry"] = {{"horizon", c.geometry.horizon},
                   {"margin", c.geometry.margin},
                   {"grid_ratio", c.geometry.grid_ratio},
                   {"bump_refine", c.geometry.bump_refine}};
  j["bound"] = {{"sigmas", c.bound.sigmas},
                {"quad_rel_tol", c.bound.quad_rel_tol},
                {"tail_cut", c.bound.tail_cut == TailPolicy::asymptotic    ? "asymptotic"
                             : c.bound.tail_cut == TailPolicy::truncate    ? "truncate"
                                                                           : "require_compact"}};
  if (!std::isnan(c.bound.r_factor)) j["bound"]["r_factor"] = c.bound.r_factor;
  if (!std::isnan(c.bound.threshold)) j["bound"]["threshold"] = c.bound.threshold;
  j["certify"] = {{"rel_tol", c.certify.rel_tol}};
  j["oracle"] = {{"h", c.oracle.h},         {"R", c.oracle.R},
                 {"k", c.oracle.k},         {"tol", c.oracle.tol},
                 {"shift", c.oracle.shift}, {"seed", c.oracle.seed},
                 {"max_basis", c.oracle.max_basis},
                 {"max_restarts", c.oracle.max_restarts},
                 {"dump_eigenvectors", c.oracle.dump_eigenvectors}};
  j["output"] = {{"directory", c.output.directory},
                 {"csv", c.output.csv},
                 {"json", c.output.json}};
  return j;
}

inline std::uint64_t config_hash(const RunConfig& c) {
  return detail::fnv1a(to_json(c).dump());
}

inline RunConfig parse_config(const nlohmann::json& j) {
  using detail::get_if;
  using detail::reject_unknown_keys;
  reject_unknown_keys(j, "", {"spiral", "geometry", "bound", "certify", "oracle", "output"});

  RunConfig c;
  if (j.contains("spiral")) {
    const auto& js = j.at("spiral");
    reject_unknown_keys(js, "spiral", {"family", "a0", "c", "p", "amplitude", "theta1", "theta2"});
    std::string family = "pure";
    get_if(js, "family", family);
    SpiralSpec s;
    s.a0 = 1.0;
    get_if(js, "a0", s.a0);
    if (family == "pure") {
      s.family = RhoFamily::pure;
    } else if (family == "power_tail") {
      s.family = RhoFamily::power_tail;
      s.c = 0.5;
      s.p = 1.5;
      get_if(js, "c", s.c);
      get_if(js, "p", s.p);
    } else if (family == "bump") {
      s.family = RhoFamily::bump;
      s.amplitude = 0.5;
      s.theta1 = 10.0;
      s.theta2 = 20.0;
      get_if(js, "amplitude", s.amplitude);
      get_if(js, "theta1", s.theta1);
      get_if(js, "theta2", s.theta2);
    } else {
      throw std::invalid_argument("config: unknown value for \"spiral.family\": " + family);
    }
    c.spiral = s;
  }
  if (j.contains("geometry")) {
    const auto& jg = j.at("geometry");
    reject_unknown_keys(jg, "geometry", {"horizon", "margin", "grid_ratio", "bump_refine"});
    get_if(jg, "horizon", c.geometry.horizon);
    get_if(jg, "margin", c.geometry.margin);
    get_if(jg, "grid_ratio", c.geometry.grid_ratio);
    get_if(jg, "bump_refine", c.geometry.bump_refine);
  }
  if (j.contains("bound")) {
    const auto& jb = j.at("bound");
    reject_unknown_keys(jb, "bound",
                        {"sigmas", "r_factor", "threshold", "quad_rel_tol", "tail_cut"});
    get_if(jb, "sigmas", c.bound.sigmas);
    get_if(jb, "r_factor", c.bound.r_factor);
    get_if(jb, "threshold", c.bound.threshold);
    get_if(jb, "quad_rel_tol", c.bound.quad_rel_tol);
    if (jb.contains("tail_cut")) {
      const std::string t = jb.at("tail_cut").get<std::string>();
      if (t == "asymptotic") c.bound.tail_cut = TailPolicy::asymptotic;
      else if (t == "truncate") c.bound.tail_cut = TailPolicy::truncate;
      else if (t == "require_compact") c.bound.tail_cut = TailPolicy::require_compact;
      else throw std::invalid_argument("config: unknown value for \"bound.tail_cut\": " + t);
    }
  }
  if (j.contains("certify")) {
    const auto& jc = j.at("certify");
    reject_unknown_keys(jc, "certify", {"rel_tol"});
    get_if(jc, "rel_tol", c.certify.rel_tol);
  }
  if (j.contains("oracle")) {
    const auto& jo = j.at("oracle");
    reject_unknown_keys(jo, "oracle",
                        {"h", "R", "k", "tol", "shift", "seed", "max_basis", "max_restarts",
                         "dump_eigenvectors"});
    get_if(jo, "h", c.oracle.h);
    get_if(jo, "R", c.oracle.R);
    get_if(jo, "k", c.oracle.k);
    get_if(jo, "tol", c.oracle.tol);
    get_if(jo, "shift", c.oracle.shift);
    get_if(jo, "seed", c.oracle.seed);
    get_if(jo, "max_basis", c.oracle.max_basis);
    get_if(jo, "max_restarts", c.oracle.max_restarts);
    get_if(jo, "dump_eigenvectors", c.oracle.dump_eigenvectors);
  }
  if (j.contains("output")) {
    const auto& jo = j.at("output");
    reject_unknown_keys(jo, "output", {"directory", "csv", "json"});
    get_if(jo, "directory", c.output.directory);
    get_if(jo, "csv", c.output.csv);
    get_if(jo, "json", c.output.json);
  }
  c.validate();
  c.hash = config_hash(c);
  return c;
}

inline RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("config: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument("config: parse error in " + path + ": " + e.what());
  }
  return parse_config(j);
}

}  // namespace spiralbound
