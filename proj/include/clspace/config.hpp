#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <initializer_list>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "measure.hpp"
#include "spaces.hpp"
#include "theorems.hpp"
#include "young.hpp"

namespace clspace {

// Malformed configuration: unknown keys, wrong types, unresolved names.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace config_detail {

using Json = nlohmann::ordered_json;

// Read-only view of a JSON value that knows its path for error messages.
class Node {
 public:
  Node(const Json& j, std::string path) : j_(&j), path_(std::move(path)) {}

  const std::string& path() const { return path_; }
  const Json& json() const { return *j_; }
  bool is_string() const { return j_->is_string(); }
  bool is_object() const { return j_->is_object(); }

  void expect_object() const {
    if (!j_->is_object()) fail("expected an object");
  }

  // Rejects keys outside `allowed`.
  void only(std::initializer_list<const char*> allowed) const {
    expect_object();
    for (const auto& [k, v] : j_->items()) {
      bool ok = false;
      for (const char* a : allowed) ok = ok || k == a;
      if (!ok) throw ConfigError("unknown key " + path_ + "." + k);
    }
  }

  bool has(const std::string& key) const { return j_->is_object() && j_->contains(key); }

  Node at(const std::string& key) const {
    expect_object();
    if (!j_->contains(key)) throw ConfigError("missing key " + path_ + "." + key);
    return Node((*j_)[key], path_ + "." + key);
  }

  std::vector<std::pair<std::string, Node>> entries() const {
    expect_object();
    std::vector<std::pair<std::string, Node>> out;
    for (const auto& [k, v] : j_->items()) out.emplace_back(k, Node(v, path_ + "." + k));
    return out;
  }

  std::vector<Node> elements() const {
    if (!j_->is_array()) fail("expected an array");
    std::vector<Node> out;
    for (std::size_t i = 0; i < j_->size(); ++i) out.emplace_back((*j_)[i], path_ + "[" + std::to_string(i) + "]");
    return out;
  }

  // Decimal number or the literal "inf".
  double number() const {
    if (j_->is_number()) return j_->get<double>();
    if (j_->is_string() && j_->get<std::string>() == "inf") return kInf;
    fail("expected a number or \"inf\"");
  }

  long long integer() const {
    if (!j_->is_number_integer()) fail("expected an integer");
    return j_->get<long long>();
  }

  bool boolean() const {
    if (!j_->is_boolean()) fail("expected true or false");
    return j_->get<bool>();
  }

  std::string string() const {
    if (!j_->is_string()) fail("expected a string");
    return j_->get<std::string>();
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& e : elements()) out.push_back(e.number());
    return out;
  }

  [[noreturn]] void fail(const std::string& what) const { throw ConfigError(path_ + ": " + what); }

 private:
  const Json* j_;
  std::string path_;
};

}  // namespace config_detail

struct TripleDef {
  Triple triple;
  std::optional<YoungFunction> conjugate_override;
};

struct RunConfig {
  std::uint64_t seed = 1;
  VerifyConfig verify;
  std::map<std::string, MeasureModel> models;
  std::map<std::string, YoungFunction> young;
  std::map<std::string, SpaceSpec> spaces;
  std::map<std::string, StepFunction> functions;
  std::map<std::string, TripleDef> triples;

  template <typename T>
  static const T& lookup(const std::map<std::string, T>& m, const std::string& name, const char* what) {
    const auto it = m.find(name);
    if (it == m.end()) throw ConfigError("unknown " + std::string(what) + " '" + name + "'");
    return it->second;
  }

  const MeasureModel& model(const std::string& n) const { return lookup(models, n, "model"); }
  const YoungFunction& young_function(const std::string& n) const { return lookup(young, n, "young function"); }
  const SpaceSpec& space(const std::string& n) const { return lookup(spaces, n, "space"); }
  const StepFunction& function(const std::string& n) const { return lookup(functions, n, "function"); }
  const TripleDef& triple(const std::string& n) const { return lookup(triples, n, "triple"); }
};

namespace config_detail {

inline std::vector<double> read_csv_values(const std::filesystem::path& path, const std::string& where) {
  std::ifstream in(path);
  if (!in) throw ConfigError(where + ": cannot read " + path.string());
  std::vector<double> out;
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    bool numeric = true;
    while (std::getline(ss, cell, ',')) {
      const auto b = cell.find_first_not_of(" \t\r");
      if (b == std::string::npos) continue;
      const auto e = cell.find_last_not_of(" \t\r");
      cell = cell.substr(b, e - b + 1);
      try {
        std::size_t used = 0;
        row.push_back(std::stod(cell, &used));
        if (used != cell.size()) numeric = false;
      } catch (const std::exception&) {
        numeric = false;
      }
    }
    if (!numeric) {
      if (first) {
        first = false;
        continue;  // header row
      }
      throw ConfigError(where + ": non-numeric CSV row '" + line + "' in " + path.string());
    }
    first = false;
    out.insert(out.end(), row.begin(), row.end());
  }
  return out;
}

class Loader {
 public:
  Loader(const Json& root, std::filesystem::path base_dir) : root_(root, "$"), dir_(std::move(base_dir)) {}

  RunConfig load() {
    root_.only({"seed", "tolerances", "optimizer", "probes", "asymptotics", "models", "young", "spaces", "functions",
                "triples"});
    if (root_.has("seed")) {
      const auto s = root_.at("seed").integer();
      if (s < 0) root_.at("seed").fail("seed must be nonnegative");
      cfg_.seed = static_cast<std::uint64_t>(s);
    }
    cfg_.verify.seed = cfg_.seed;
    cfg_.verify.opt.seed = cfg_.seed;
    if (root_.has("tolerances")) tolerances(root_.at("tolerances"));
    if (root_.has("optimizer")) optimizer(root_.at("optimizer"));
    if (root_.has("probes")) {
      const auto p = root_.at("probes");
      p.only({"count"});
      if (p.has("count")) cfg_.verify.probes = positive_int(p.at("count"));
    }
    if (root_.has("asymptotics")) asymptotics(root_.at("asymptotics"));
    if (root_.has("models")) {
      for (const auto& [name, node] : root_.at("models").entries()) cfg_.models.emplace(name, model(node));
    }
    if (root_.has("young")) {
      young_nodes_ = root_.at("young").entries();
      for (const auto& [name, node] : young_nodes_) young_named(name, node.path());
    }
    if (root_.has("spaces")) {
      space_nodes_ = root_.at("spaces").entries();
      for (const auto& [name, node] : space_nodes_) space_named(name, node.path());
    }
    if (root_.has("functions")) {
      for (const auto& [name, node] : root_.at("functions").entries()) cfg_.functions.emplace(name, function(node));
    }
    if (root_.has("triples")) {
      for (const auto& [name, node] : root_.at("triples").entries()) cfg_.triples.emplace(name, triple(name, node));
    }
    return std::move(cfg_);
  }

 private:
  static int positive_int(const Node& n) {
    const auto v = n.integer();
    if (v < 1 || v > 1'000'000'000) n.fail("expected a positive integer");
    return static_cast<int>(v);
  }

  static int nonnegative_int(const Node& n) {
    const auto v = n.integer();
    if (v < 0 || v > 1'000'000'000) n.fail("expected a nonnegative integer");
    return static_cast<int>(v);
  }

  static double positive(const Node& n) {
    const double v = n.number();
    if (!(v > 0.0)) n.fail("expected a positive number");
    return v;
  }

  void tolerances(const Node& t) {
    t.only({"rtol_norm", "rtol_inv", "tol_sup", "tol_cvx", "sup_grid", "c_max", "split_c"});
    auto& norm = cfg_.verify.opt.norm;
    if (t.has("rtol_norm")) norm.rtol_norm = positive(t.at("rtol_norm"));
    if (t.has("rtol_inv")) norm.young.rtol_inv = positive(t.at("rtol_inv"));
    if (t.has("tol_sup")) norm.young.tol_sup = positive(t.at("tol_sup"));
    if (t.has("tol_cvx")) norm.young.tol_cvx = positive(t.at("tol_cvx"));
    if (t.has("sup_grid")) norm.young.sup_grid = positive_int(t.at("sup_grid"));
    if (t.has("c_max")) cfg_.verify.c_max = positive(t.at("c_max"));
    if (t.has("split_c")) cfg_.verify.split_c = positive(t.at("split_c"));
  }

  void optimizer(const Node& o) {
    o.only({"restarts", "iterations", "method", "resolution", "sorted_ansatz", "min_step", "zoom_rounds"});
    auto& opt = cfg_.verify.opt;
    if (o.has("restarts")) opt.restarts = positive_int(o.at("restarts"));
    if (o.has("iterations")) opt.iterations = positive_int(o.at("iterations"));
    if (o.has("resolution")) opt.resolution = nonnegative_int(o.at("resolution"));
    if (o.has("zoom_rounds")) opt.zoom_rounds = positive_int(o.at("zoom_rounds"));
    if (o.has("min_step")) opt.min_step = positive(o.at("min_step"));
    if (o.has("sorted_ansatz")) opt.sorted_ansatz = o.at("sorted_ansatz").boolean();
    if (o.has("method")) {
      const auto m = o.at("method").string();
      if (m == "coordinate_ascent") {
        opt.method = OptimizerMethod::coordinate_ascent;
      } else if (m == "grid_oracle") {
        opt.method = OptimizerMethod::grid_oracle;
      } else {
        o.at("method").fail("expected \"coordinate_ascent\" or \"grid_oracle\"");
      }
    }
  }

  void asymptotics(const Node& a) {
    a.only({"t_small", "t_large", "t_max", "small_floor", "points"});
    auto& g = cfg_.verify.grid;
    if (a.has("t_small")) g.t_small = positive(a.at("t_small"));
    if (a.has("t_large")) g.t_large = positive(a.at("t_large"));
    if (a.has("t_max")) g.t_max = positive(a.at("t_max"));
    if (a.has("small_floor")) g.small_floor = positive(a.at("small_floor"));
    if (a.has("points")) g.probes = std::max(2, positive_int(a.at("points")));
  }

  static MeasureModel model(const Node& n) {
    const auto kind = n.at("kind").string();
    try {
      if (kind == "unit_interval") {
        n.only({"kind", "cells"});
        return MeasureModel::unit_interval(static_cast<std::size_t>(positive_int(n.at("cells"))));
      }
      if (kind == "half_line") {
        n.only({"kind", "cells", "horizon"});
        return MeasureModel::half_line(n.at("horizon").number(),
                                       static_cast<std::size_t>(positive_int(n.at("cells"))));
      }
      if (kind == "counting") {
        n.only({"kind", "cells"});
        return MeasureModel::counting(static_cast<std::size_t>(positive_int(n.at("cells"))));
      }
    } catch (const DomainError& e) {
      n.fail(e.what());
    }
    n.at("kind").fail("unknown model kind '" + kind + "'");
  }

  YoungFunction young_named(const std::string& name, const std::string& from) {
    if (const auto it = cfg_.young.find(name); it != cfg_.young.end()) return it->second;
    for (const auto& [k, node] : young_nodes_) {
      if (k != name) continue;
      if (!visiting_.insert("young:" + name).second) throw ConfigError("cyclic young function definition '" + name + "'");
      auto f = young_def(node);
      visiting_.erase("young:" + name);
      cfg_.young.emplace(name, f);
      return f;
    }
    throw ConfigError("unknown young function '" + name + "' referenced at " + from);
  }

  YoungFunction young_ref(const Node& n) { return n.is_string() ? young_named(n.string(), n.path()) : young_def(n); }

  YoungFunction young_def(const Node& n) {
    const auto kind = n.at("kind").string();
    try {
      if (kind == "power") {
        n.only({"kind", "p"});
        const double p = n.at("p").number();
        if (!(p >= 1.0) || std::isinf(p)) n.at("p").fail("power exponent must satisfy 1 <= p < inf");
        return YoungFunction::power(p);
      }
      if (kind == "truncated_power") {
        n.only({"kind", "p", "b"});
        return YoungFunction::truncated_power(n.at("p").number(), n.at("b").number());
      }
      if (kind == "exp_minus_one") {
        n.only({"kind"});
        return YoungFunction::exp_minus_one();
      }
      if (kind == "piecewise_linear") {
        n.only({"kind", "knots", "jump"});
        std::vector<std::pair<double, double>> knots;
        for (const auto& k : n.at("knots").elements()) {
          const auto xy = k.numbers();
          if (xy.size() != 2) k.fail("knot must be [t, value]");
          knots.emplace_back(xy[0], xy[1]);
        }
        return YoungFunction::piecewise_linear(std::move(knots), n.has("jump") ? n.at("jump").number() : kInf);
      }
      if (kind == "conjugate") {
        n.only({"kind", "outer", "inner", "bound"});
        const auto G = young_ref(n.at("outer"));
        const auto F = young_ref(n.at("inner"));
        const auto& ycfg = cfg_.verify.opt.norm.young;
        if (n.has("bound")) return conjugate_truncated(G, F, n.at("bound").number(), ycfg);
        return conjugate(G, F, ycfg);
      }
      if (kind == "classical_conjugate") {
        n.only({"kind", "of"});
        return classical_conjugate(young_ref(n.at("of")), cfg_.verify.opt.norm.young);
      }
    } catch (const DomainError& e) {
      n.fail(e.what());
    }
    n.at("kind").fail("unknown young function kind '" + kind + "'");
  }

  SpaceSpec space_named(const std::string& name, const std::string& from) {
    if (const auto it = cfg_.spaces.find(name); it != cfg_.spaces.end()) return it->second;
    for (const auto& [k, node] : space_nodes_) {
      if (k != name) continue;
      if (!visiting_.insert("space:" + name).second) throw ConfigError("cyclic space definition '" + name + "'");
      auto s = space_def(node);
      visiting_.erase("space:" + name);
      cfg_.spaces.emplace(name, s);
      return s;
    }
    throw ConfigError("unknown space '" + name + "' referenced at " + from);
  }

  SpaceSpec space_ref(const Node& n) { return n.is_string() ? space_named(n.string(), n.path()) : space_def(n); }

  SpaceSpec space_def(const Node& n) {
    const auto kind = n.at("kind").string();
    try {
      if (kind == "lp") {
        n.only({"kind", "p"});
        return SpaceSpec::lp(n.at("p").number());
      }
      if (kind == "linf") {
        n.only({"kind"});
        return SpaceSpec::linf();
      }
      if (kind == "l1_cap_linf") {
        n.only({"kind"});
        return SpaceSpec::l1_cap_linf();
      }
      if (kind == "lorentz") {
        n.only({"kind", "weight"});
        return SpaceSpec::lorentz(n.at("weight").numbers());
      }
      if (kind == "convexification") {
        n.only({"kind", "base", "p"});
        return SpaceSpec::convexification(space_ref(n.at("base")), n.at("p").number());
      }
      if (kind == "cl") {
        n.only({"kind", "base", "young"});
        return SpaceSpec::cl(space_ref(n.at("base")), young_ref(n.at("young")));
      }
    } catch (const DomainError& e) {
      n.fail(e.what());
    }
    n.at("kind").fail("unknown space kind '" + kind + "'");
  }

  const MeasureModel& model_ref(const Node& n) {
    const auto name = n.string();
    const auto it = cfg_.models.find(name);
    if (it == cfg_.models.end()) throw ConfigError("unknown model '" + name + "' referenced at " + n.path());
    return it->second;
  }

  StepFunction function(const Node& n) {
    n.only({"model", "values", "csv", "indicator"});
    const auto& m = model_ref(n.at("model"));
    const int sources = static_cast<int>(n.has("values")) + static_cast<int>(n.has("csv")) +
                        static_cast<int>(n.has("indicator"));
    if (sources != 1) n.fail("exactly one of values, csv, indicator is required");
    try {
      if (n.has("indicator")) return indicator(m, n.at("indicator").number()).function;
      std::vector<double> v;
      if (n.has("values")) {
        v = n.at("values").numbers();
      } else {
        v = read_csv_values(dir_ / n.at("csv").string(), n.at("csv").path());
      }
      return StepFunction(m, std::move(v));
    } catch (const DomainError& e) {
      n.fail(e.what());
    } catch (const ModelMismatch& e) {
      n.fail(e.what());
    }
  }

  TripleDef triple(const std::string& name, const Node& n) {
    n.only({"space", "model", "F", "G", "conjugate_override"});
    const auto X = space_ref(n.at("space"));
    const auto& m = model_ref(n.at("model"));
    try {
      check_compatible(X, m);
    } catch (const ModelMismatch& e) {
      n.fail(e.what());
    }
    TripleDef d{Triple{name, X, m, young_ref(n.at("F")), young_ref(n.at("G"))}, std::nullopt};
    if (n.has("conjugate_override")) d.conjugate_override = young_ref(n.at("conjugate_override"));
    return d;
  }

  Node root_;
  std::filesystem::path dir_;
  RunConfig cfg_;
  std::vector<std::pair<std::string, Node>> young_nodes_;
  std::vector<std::pair<std::string, Node>> space_nodes_;
  std::set<std::string> visiting_;
};

}  // namespace config_detail

inline RunConfig parse_config(const std::string& text, const std::filesystem::path& base_dir = ".") {
  config_detail::Json j;
  try {
    j = config_detail::Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  return config_detail::Loader(j, base_dir).load();
}

inline RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path.parent_path().empty() ? std::filesystem::path(".") : path.parent_path());
}

}  // namespace clspace
