#pragma once

/**
 * @file report.hpp
 * @brief Experiment reports and their CSV / JSON renderings.
 *
 * A report carries a config echo, named hypothesis checks, a result
 * payload, named histograms and an optional flat table. Wall-clock time,
 * thread count and library version live in a separate `meta` block that the
 * canonical form leaves out.
 */

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "curvestat/curvewin.hpp"
#include "curvestat/experiment.hpp"

#ifndef CURVESTAT_VERSION
#define CURVESTAT_VERSION "0.1.0"
#endif

namespace curvestat {

using Json = nlohmann::ordered_json;

inline constexpr const char* kHistogramHeader = "a,count,phi_num,phi_den,phi_dec";

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Json>> rows;
};

struct Meta {
  double duration_s = 0;
  unsigned threads = 1;
  std::string version = CURVESTAT_VERSION;
};

struct Report {
  std::string command;
  Json config = Json::object();
  std::vector<HypothesisCheck> checks;
  Json result = Json::object();
  std::vector<std::pair<std::string, Histogram>> histograms;
  std::optional<Table> table;
  Meta meta;

  void check(std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), ok ? CheckStatus::pass : CheckStatus::fail, std::move(detail), false});
  }

  bool all_checks_pass() const {
    return std::none_of(checks.begin(), checks.end(), [](const auto& c) { return c.status == CheckStatus::fail; });
  }
};

/// "0.666667"-style six-decimal rendering of an exact fraction.
inline std::string decimal6(const Rational& r) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6f", r.to_double());
  return buf;
}

inline std::string cell_label(const Histogram& h, std::size_t cell) {
  const auto parts = h.label(cell);
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) s += ';';
    s += std::to_string(parts[i]);
  }
  return s;
}

inline Json histogram_json(const Histogram& h) {
  Json rows = Json::array();
  for (std::size_t c = 0; c < h.cells(); ++c) {
    const Rational phi = h.phi(c);
    rows.push_back(Json{{"a", cell_label(h, c)},
                        {"count", h.counts[c]},
                        {"phi_num", to_string128(phi.num())},
                        {"phi_den", to_string128(phi.den())},
                        {"phi_dec", decimal6(phi)}});
  }
  const Rational disc = discrepancy(h);
  return Json{{"m", h.m},
              {"dims", h.dims},
              {"total", h.total},
              {"discrepancy_num", to_string128(disc.num())},
              {"discrepancy_den", to_string128(disc.den())},
              {"discrepancy", disc.to_double()},
              {"rows", rows}};
}

inline Json checks_json(const std::vector<HypothesisCheck>& checks) {
  Json arr = Json::array();
  for (const auto& c : checks) {
    Json j{{"name", c.name}, {"status", to_string(c.status)}};
    if (!c.detail.empty()) j["detail"] = c.detail;
    arr.push_back(j);
  }
  return arr;
}

/// Full JSON; with_meta = false gives the canonical form.
inline Json to_json(const Report& r, bool with_meta = true) {
  Json j;
  j["command"] = r.command;
  j["config"] = r.config;
  j["checks"] = checks_json(r.checks);
  j["result"] = r.result;
  Json hs = Json::object();
  for (const auto& [name, h] : r.histograms) hs[name] = histogram_json(h);
  j["histograms"] = hs;
  if (r.table) {
    Json rows = Json::array();
    for (const auto& row : r.table->rows) {
      Json o = Json::object();
      for (std::size_t i = 0; i < r.table->columns.size(); ++i) o[r.table->columns[i]] = row.at(i);
      rows.push_back(o);
    }
    j["table"] = Json{{"columns", r.table->columns}, {"rows", rows}};
  }
  if (with_meta) {
    j["meta"] = Json{{"duration_s", r.meta.duration_s}, {"threads", r.meta.threads}, {"version", r.meta.version}};
  }
  return j;
}

inline std::string canonical(const Report& r) { return to_json(r, false).dump(); }

inline void write_histogram_csv(std::ostream& os, const Histogram& h) {
  os << kHistogramHeader << '\n';
  for (std::size_t c = 0; c < h.cells(); ++c) {
    const Rational phi = h.phi(c);
    os << cell_label(h, c) << ',' << h.counts[c] << ',' << to_string128(phi.num()) << ',' << to_string128(phi.den())
       << ',' << decimal6(phi) << '\n';
  }
}

inline std::string csv_cell(const Json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

inline void write_table_csv(std::ostream& os, const Table& t) {
  for (std::size_t i = 0; i < t.columns.size(); ++i) os << (i ? "," : "") << t.columns[i];
  os << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << csv_cell(row[i]);
    os << '\n';
  }
}

enum class Format { csv, json };

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot write " + path.string());
  return f;
}

inline std::filesystem::path sibling(const std::filesystem::path& base, const std::string& suffix) {
  auto name = base.stem().string() + "_" + suffix + ".csv";
  return base.parent_path() / name;
}

}  // namespace detail

/// Writes `r` to `path` (or `os` when path is empty).
///
/// JSON: one object. CSV: histograms if any, else the table. With several
/// histograms and a path, each goes to <stem>_<name>.csv; on a stream they
/// are separated by a blank line.
inline void emit(const Report& r, Format format, const std::string& path, std::ostream& os) {
  if (format == Format::json) {
    const std::string text = to_json(r, true).dump(2) + "\n";
    if (path.empty()) {
      os << text;
    } else {
      auto f = detail::open_out(path);
      f << text;
    }
    return;
  }
  if (!r.histograms.empty()) {
    if (path.empty()) {
      for (std::size_t i = 0; i < r.histograms.size(); ++i) {
        if (i) os << '\n';
        write_histogram_csv(os, r.histograms[i].second);
      }
    } else if (r.histograms.size() == 1) {
      auto f = detail::open_out(path);
      write_histogram_csv(f, r.histograms.front().second);
    } else {
      for (const auto& [name, h] : r.histograms) {
        auto f = detail::open_out(detail::sibling(path, name));
        write_histogram_csv(f, h);
      }
    }
    if (r.table && !path.empty()) {
      auto f = detail::open_out(detail::sibling(path, "table"));
      write_table_csv(f, *r.table);
    }
    return;
  }
  Table t;
  if (r.table) {
    t = *r.table;
  } else {
    t.columns = {"key", "value"};
    for (const auto& [k, v] : r.result.items()) t.rows.push_back({Json(k), v});
  }
  if (path.empty()) {
    write_table_csv(os, t);
  } else {
    auto f = detail::open_out(path);
    write_table_csv(f, t);
  }
}

inline Json model_json(const ModelQuantiles& q) {
  return Json{{"q50", q.q50},
              {"q95", q.q95},
              {"q99", q.q99},
              {"trials", q.samples.size()},
              {"method", q.method_used == ModelMethod::block_law ? "block_law" : "direct"}};
}

/// Report body shared by the phi / joint / restricted commands.
inline void fill_experiment(Report& r, const ExperimentResult& e) {
  r.checks = e.checks;
  r.result["discrepancy_num"] = to_string128(e.discrepancy.num());
  r.result["discrepancy_den"] = to_string128(e.discrepancy.den());
  r.result["discrepancy"] = e.discrepancy.to_double();
  r.result["bound"] = e.bound;
  r.result["bound_pass"] = e.bound_pass;
  r.result["epsilon"] = e.epsilon;
  if (e.alpha) r.result["alpha"] = e.alpha->str();
  r.result["model_blocks"] = e.model_blocks;
  r.result["model"] = model_json(e.model);
  r.result["model_pass"] = e.model_pass;
  r.histograms.emplace_back("phi", e.hist);
}

}  // namespace curvestat
