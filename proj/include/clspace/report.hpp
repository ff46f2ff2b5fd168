#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "asymptotics.hpp"
#include "multprod.hpp"
#include "theorems.hpp"

namespace clspace {

using Json = nlohmann::ordered_json;

// Finite values as JSON numbers, ∞ as the string "inf".
inline Json to_json(const ExtReal& v) { return v.is_inf() ? Json("inf") : Json(v.value()); }

inline Json number(double v) {
  if (std::isinf(v)) return v > 0 ? Json("inf") : Json("-inf");
  return Json(v);
}

inline Json to_json(const StepFunction& f) {
  return Json{{"model", f.model().describe()}, {"values", std::vector<double>(f.values().begin(), f.values().end())}};
}

inline Json to_json(const TripleClassification& c) {
  return Json{{"cond_psi", c.cond_psi},
              {"cond_F_finite", c.cond_F_finite},
              {"cond_G_jumps", c.cond_G_jumps},
              {"nice", c.nice},
              {"sequence_space", c.sequence_space},
              {"psi_smallest_cell", number(c.psi_smallest_cell)}};
}

inline Json to_json(const MultNormEstimate& e) {
  return Json{{"lower", to_json(e.lower)},
              {"method", e.method},
              {"evaluations", e.evaluations},
              {"certificate", to_json(e.certificate)}};
}

inline Json to_json(const ProductEstimate& e) {
  return Json{{"upper", to_json(e.upper)},
              {"method", e.method},
              {"evaluations", e.evaluations},
              {"g", to_json(e.g)},
              {"h", to_json(e.h)}};
}

inline Json to_json(const EquivalenceVerdict& v) {
  Json j{{"relation", to_string(v.relation)},
         {"constant", number(v.constant)},
         {"probes", v.probes},
         {"indeterminate", v.indeterminate},
         {"summary", describe(v)}};
  if (v.witness) {
    j["witness"] = Json{{"t", v.witness->t},
                        {"lhs", to_json(v.witness->lhs)},
                        {"rhs", to_json(v.witness->rhs)},
                        {"ratio", number(v.witness->ratio)}};
  }
  return j;
}

inline Json to_json(const TheoremReport& r) {
  Json probes = Json::array();
  for (const auto& p : r.probes) {
    probes.push_back(Json{{"probe_id", p.id},
                          {"probe", to_json(p.probe)},
                          {"mult_lower", to_json(p.mult_lower)},
                          {"certificate", to_json(p.certificate)},
                          {"method", p.method},
                          {"lux_value", to_json(p.lux)},
                          {"ratio", number(p.ratio)},
                          {"verdict", to_string(p.verdict)}});
  }
  Json j{{"triple_id", r.triple_id},
         {"triple", r.triple},
         {"classification", to_json(r.cls)},
         {"branch", to_string(r.branch)},
         {"branch_label", r.branch_label},
         {"conjugate", r.conjugate},
         {"ratio_min", number(r.ratio_min)},
         {"ratio_max", number(r.ratio_max)},
         {"constant", number(r.constant)},
         {"verdict", to_string(r.verdict)},
         {"notes", r.notes},
         {"probes", probes}};
  if (r.necessity) {
    j["necessity"] = Json{{"conjugate", r.necessity->conjugate},
                          {"conjugate_degenerate", r.necessity->conjugate_degenerate},
                          {"luxemburg_infinite", r.necessity->luxemburg_infinite},
                          {"indicator_mult", to_json(r.necessity->indicator_mult)},
                          {"confirmed", r.necessity->confirmed}};
  }
  return j;
}

inline Json to_json(const FactorizationReport& r) {
  Json splits = Json::array();
  for (const auto& s : r.splits) {
    splits.push_back(Json{{"probe_id", s.id},
                          {"target", to_json(s.target)},
                          {"product", to_json(s.product)},
                          {"split_ratio", number(s.split_ratio)},
                          {"reverse_ratio", number(s.reverse_ratio)},
                          {"g", to_json(s.g)},
                          {"h", to_json(s.h)},
                          {"verdict", to_string(s.verdict)}});
  }
  Json esc = Json::array();
  for (const auto& [n, a] : r.escalating) esc.push_back(Json{{"n", n}, {"point", a}});
  Json j{{"triple_id", r.triple_id},
         {"triple", r.triple},
         {"case", r.case_label},
         {"branch", to_string(r.branch)},
         {"conjugate", r.conjugate},
         {"analytic_checked", r.analytic_checked}};
  if (r.analytic_checked) {
    j["regime"] = to_string(r.regime);
    j["condition"] = r.condition;
    j["analytic"] = to_json(r.analytic);
    j["witness_reproduced"] = r.witness_reproduced;
    j["escalating_sequence"] = esc;
  }
  j["split_max"] = number(r.split_max);
  j["reverse_max"] = number(r.reverse_max);
  j["worst_probe"] = r.worst_probe ? Json(*r.worst_probe) : Json(nullptr);
  j["verdict"] = to_string(r.verdict);
  j["notes"] = r.notes;
  j["splits"] = splits;
  return j;
}

inline Json to_json(const PerfectnessReport& r) {
  Json probes = Json::array();
  for (const auto& p : r.probes) {
    probes.push_back(Json{{"probe_id", p.id},
                          {"nested", to_json(p.nested)},
                          {"direct", to_json(p.direct)},
                          {"ratio", number(p.ratio)},
                          {"verdict", to_string(p.verdict)}});
  }
  return Json{{"triple_id", r.triple_id},     {"conjugate", r.conjugate},
              {"ratio_min", number(r.ratio_min)}, {"ratio_max", number(r.ratio_max)},
              {"verdict", to_string(r.verdict)}, {"notes", r.notes},
              {"probes", probes}};
}

inline Json to_json(const ExampleRow& r) {
  return Json{{"name", r.name},       {"identity", r.identity}, {"measured", r.measured},
              {"value", number(r.value)}, {"lo", number(r.lo)},     {"hi", number(r.hi)},
              {"pass", r.pass},       {"detail", r.detail}};
}

// CSV with a header row, 10 significant digits and the literal "inf".
class CsvWriter {
 public:
  explicit CsvWriter(std::vector<std::string> header) { row(header); }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << escape(cells[i]);
    }
    out_ << '\n';
  }

  std::string str() const { return out_.str(); }

 private:
  static std::string escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string r = "\"";
    for (char c : s) r += c == '"' ? std::string("\"\"") : std::string(1, c);
    return r + "\"";
  }
  std::ostringstream out_;
};

inline std::string theorem_csv(const std::vector<TheoremReport>& reports) {
  CsvWriter w({"triple_id", "branch", "probe_id", "mult_lower", "lux_value", "ratio", "verdict"});
  for (const auto& r : reports) {
    for (const auto& p : r.probes) {
      w.row({r.triple_id, to_string(r.branch), std::to_string(p.id), format_number(p.mult_lower),
             format_number(p.lux), format_number(p.ratio), to_string(p.verdict)});
    }
  }
  return w.str();
}

inline std::string factorization_csv(const std::vector<FactorizationReport>& reports) {
  CsvWriter w({"triple_id", "branch", "probe_id", "product", "split_ratio", "reverse_ratio", "verdict"});
  for (const auto& r : reports) {
    for (const auto& s : r.splits) {
      w.row({r.triple_id, to_string(r.branch), std::to_string(s.id), format_number(s.product),
             format_number(s.split_ratio), format_number(s.reverse_ratio), to_string(s.verdict)});
    }
  }
  return w.str();
}

inline std::string perfectness_csv(const std::vector<PerfectnessReport>& reports) {
  CsvWriter w({"triple_id", "probe_id", "nested", "direct", "ratio", "verdict"});
  for (const auto& r : reports) {
    for (const auto& p : r.probes) {
      w.row({r.triple_id, std::to_string(p.id), format_number(p.nested), format_number(p.direct),
             format_number(p.ratio), to_string(p.verdict)});
    }
  }
  return w.str();
}

inline std::string examples_csv(const std::vector<ExampleRow>& rows) {
  CsvWriter w({"name", "measured", "value", "lo", "hi", "pass"});
  for (const auto& r : rows) {
    w.row({r.name, r.measured, format_number(r.value), format_number(r.lo), format_number(r.hi),
           r.pass ? "true" : "false"});
  }
  return w.str();
}

struct PlotSeries {
  std::string id;
  std::vector<PlotRow> rows;
};

inline std::string plot_csv(const std::vector<PlotSeries>& series) {
  CsvWriter w({"series", "t", "lhs", "rhs"});
  for (const auto& s : series) {
    for (const auto& r : s.rows) w.row({s.id, format_number(r.t), format_number(r.lhs), format_number(r.rhs)});
  }
  return w.str();
}

inline void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content;
}

}  // namespace clspace
