#include "pnptg/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "pnptg/manufactured.hpp"
#include "pnptg/norms.hpp"
#include "pnptg/probes.hpp"

namespace pnptg {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

int parse_positive_int(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const int v = std::stoi(s, &used);
    if (used != s.size() || v <= 0) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a positive integer, got '" + s + "'");
  }
}

double parse_positive_real(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size() || !(v > 0.0)) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(what + ": expected a positive number, got '" + s + "'");
  }
}

std::string format_g6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string fraction_of_inverse(int inverse) {
  return inverse > 0 ? format_g6(1.0 / inverse) : "";
}

TwoGridVariant variant_of(Method m) {
  switch (m) {
    case Method::tg1: return TwoGridVariant::linearized;
    case Method::tg2: return TwoGridVariant::decoupled;
    case Method::tg3: return TwoGridVariant::symmetrized;
    case Method::tg4: return TwoGridVariant::symmetrized_decoupled;
    default: throw ConfigError("method has no two-grid variant");
  }
}

}  // namespace

std::string method_name(Method m) {
  switch (m) {
    case Method::fem: return "fem";
    case Method::tg1: return "tg1";
    case Method::tg2: return "tg2";
    case Method::tg3: return "tg3";
    case Method::tg4: return "tg4";
  }
  return "?";
}

ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin) {
  ExperimentConfig cfg;
  bool have_method = false;
  bool have_resolutions = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    const std::string where = origin + ":" + std::to_string(lineno);
    if (eq == std::string::npos) {
      throw ConfigError(where + ": expected 'key = value'");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "method") {
      if (value == "fem") cfg.method = Method::fem;
      else if (value == "tg1") cfg.method = Method::tg1;
      else if (value == "tg2") cfg.method = Method::tg2;
      else if (value == "tg3") cfg.method = Method::tg3;
      else if (value == "tg4") cfg.method = Method::tg4;
      else throw ConfigError(where + ": unknown method '" + value + "'");
      have_method = true;
    } else if (key == "resolutions") {
      cfg.resolutions.clear();
      for (const std::string& raw : split(value, ',')) {
        const std::string item = trim(raw);
        if (item.empty()) continue;
        ResolutionPair pair;
        const auto colon = item.find(':');
        if (colon == std::string::npos) {
          pair.fine_inverse = parse_positive_int(item, where);
        } else {
          pair.coarse_inverse =
              parse_positive_int(trim(item.substr(0, colon)), where);
          pair.fine_inverse =
              parse_positive_int(trim(item.substr(colon + 1)), where);
        }
        cfg.resolutions.push_back(pair);
      }
      have_resolutions = true;
    } else if (key == "stop_tolerance") {
      cfg.stop_tolerance = parse_positive_real(value, where);
    } else if (key == "rel_tolerance") {
      cfg.rel_tolerance = parse_positive_real(value, where);
    } else if (key == "output") {
      if (value.empty()) throw ConfigError(where + ": output path is empty");
      cfg.output = value;
    } else if (key == "emit_probes") {
      if (value == "true" || value == "1") cfg.emit_probes = true;
      else if (value == "false" || value == "0") cfg.emit_probes = false;
      else throw ConfigError(where + ": emit_probes must be true or false");
    } else {
      throw ConfigError(where + ": unknown key '" + key + "'");
    }
  }
  if (!have_method) throw ConfigError(origin + ": missing 'method'");
  if (!have_resolutions || cfg.resolutions.empty()) {
    throw ConfigError(origin + ": 'resolutions' is missing or empty");
  }
  for (auto& pair : cfg.resolutions) {
    if (cfg.method == Method::fem) {
      pair.coarse_inverse = 0;  // ignored for fem
    } else {
      if (pair.coarse_inverse <= 0) {
        throw ConfigError(origin + ": two-grid methods need 'H_inv:h_inv' pairs");
      }
      if (pair.fine_inverse % pair.coarse_inverse != 0) {
        throw ConfigError(origin + ": resolutions " +
                          std::to_string(pair.coarse_inverse) + ":" +
                          std::to_string(pair.fine_inverse) +
                          " are not nested (h_inv must be a multiple of H_inv)");
      }
    }
  }
  return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config_text(text.str(), path);
}

void write_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records) {
  out << kCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.method << ',' << fraction_of_inverse(r.coarse_inverse) << ','
        << fraction_of_inverse(r.fine_inverse) << ',' << format_g6(r.l2_p1)
        << ',' << format_g6(r.l2_p2) << ',' << format_g6(r.h1_phi) << ','
        << format_g6(r.h1_p1) << ',' << format_g6(r.h1_p2) << ','
        << (r.order_h1_phi ? format_g6(*r.order_h1_phi) : std::string())
        << ',' << format_g6(r.wall_seconds) << ',' << r.outer_iters << '\n';
  }
}

std::vector<ConvergenceRecord> read_csv(std::istream& in,
                                        const std::string& origin) {
  std::string line;
  if (!std::getline(in, line) || trim(line) != kCsvHeader) {
    throw ConfigError(origin + ": missing or unexpected CSV header");
  }
  std::vector<ConvergenceRecord> records;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    const std::vector<std::string> f = split(line, ',');
    if (f.size() != 11) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": expected 11 columns");
    }
    ConvergenceRecord r;
    r.method = trim(f[0]);
    auto inverse_of = [&](const std::string& s) {
      if (trim(s).empty()) return 0;
      const double h = std::stod(s);
      return static_cast<int>(std::lround(1.0 / h));
    };
    try {
      r.coarse_inverse = inverse_of(f[1]);
      r.fine_inverse = inverse_of(f[2]);
      r.l2_p1 = std::stod(f[3]);
      r.l2_p2 = std::stod(f[4]);
      r.h1_phi = std::stod(f[5]);
      r.h1_p1 = std::stod(f[6]);
      r.h1_p2 = std::stod(f[7]);
      if (!trim(f[8]).empty()) r.order_h1_phi = std::stod(f[8]);
      r.wall_seconds = std::stod(f[9]);
      r.outer_iters = std::stoi(f[10]);
    } catch (const std::exception&) {
      throw ConfigError(origin + ":" + std::to_string(lineno) +
                        ": malformed numeric field");
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ConvergenceRecord> read_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open CSV file '" + path + "'");
  return read_csv(in, path);
}

namespace {

std::string pad(const std::string& s, std::size_t width) {
  return s + std::string(width > s.size() ? width - s.size() : 0, ' ');
}

std::string render_rows(const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width;
  for (const auto& row : rows) {
    width.resize(std::max(width.size(), row.size()), 0);
    for (std::size_t c = 0; c < row.size(); ++c) {
      width[c] = std::max(width[c], row[c].size());
    }
  }
  std::string out;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    out += "|";
    for (std::size_t c = 0; c < width.size(); ++c) {
      const std::string cell = c < rows[i].size() ? rows[i][c] : "";
      out += " " + pad(cell, width[c]) + " |";
    }
    out += "\n";
    if (i == 0) {
      out += "|";
      for (std::size_t c = 0; c < width.size(); ++c) {
        out += std::string(width[c] + 2, '-') + "|";
      }
      out += "\n";
    }
  }
  return out;
}

}  // namespace

std::string markdown_table(const std::vector<ConvergenceRecord>& records) {
  std::vector<std::vector<std::string>> rows;
  rows.push_back({"method", "H", "h", "l2_p1", "l2_p2", "h1_phi", "h1_p1",
                  "h1_p2", "order_h1_phi", "wall_seconds", "outer_iters"});
  for (const auto& r : records) {
    rows.push_back({r.method, fraction_of_inverse(r.coarse_inverse),
                    fraction_of_inverse(r.fine_inverse), format_g6(r.l2_p1),
                    format_g6(r.l2_p2), format_g6(r.h1_phi),
                    format_g6(r.h1_p1), format_g6(r.h1_p2),
                    r.order_h1_phi ? format_g6(*r.order_h1_phi) : "",
                    format_g6(r.wall_seconds), std::to_string(r.outer_iters)});
  }
  return render_rows(rows);
}

int run_experiment(const ExperimentConfig& cfg, const RunOptions& opt,
                   std::ostream& out, std::ostream& err) {
  using clock = std::chrono::steady_clock;
  const std::string output = opt.out_override ? *opt.out_override : cfg.output;
  const ManufacturedSolution sol = manufactured_solution();
  const SourceTerms sources = source_terms(sol);

  GummelConfig gummel;
  gummel.stop_tolerance = cfg.stop_tolerance;
  gummel.inner.rel_tolerance = cfg.rel_tolerance;

  std::vector<ConvergenceRecord> records;
  std::vector<ResolutionPair> probe_pairs;
  try {
    for (const ResolutionPair& pair : cfg.resolutions) {
      if (pair.fine_inverse > 16 && !opt.heavy) {
        err << "warning: skipping h = 1/" << pair.fine_inverse
            << " (heavy tier, pass --heavy to run)\n";
        continue;
      }
      const Mesh fine = build_unit_cube_mesh(pair.fine_inverse);
      const auto t0 = clock::now();
      PnpState state;
      int outer = 0;
      long inner = 0;
      if (cfg.method == Method::fem) {
        GummelResult run = gummel_solve(fine, sources, gummel);
        state = std::move(run.state);
        outer = run.outer_iterations;
        inner = run.inner_iterations;
      } else {
        const Mesh coarse = build_unit_cube_mesh(pair.coarse_inverse);
        TwoGridOptions tg_opt;
        tg_opt.gummel = gummel;
        TwoGridResult run = two_grid_solve(coarse, fine, sources,
                                           variant_of(cfg.method), tg_opt);
        state = std::move(run.fine);
        outer = run.coarse_outer_iterations;
        inner = run.inner_iterations;
        probe_pairs.push_back(pair);
      }
      const double wall =
          std::chrono::duration<double>(clock::now() - t0).count();

      ConvergenceRecord r;
      r.method = method_name(cfg.method);
      r.coarse_inverse = pair.coarse_inverse;
      r.fine_inverse = pair.fine_inverse;
      r.l2_p1 = error_l2(fine, state.p1, sol.p1);
      r.l2_p2 = error_l2(fine, state.p2, sol.p2);
      r.h1_phi = error_h1(fine, state.phi, sol.phi, sol.grad_phi);
      r.h1_p1 = error_h1(fine, state.p1, sol.p1, sol.grad_p1);
      r.h1_p2 = error_h1(fine, state.p2, sol.p2, sol.grad_p2);
      r.wall_seconds = wall;
      r.outer_iters = outer;
      r.inner_iters = inner;
      if (!records.empty() &&
          records.back().fine_inverse != pair.fine_inverse) {
        const ConvergenceRecord& prev = records.back();
        const double refine =
            static_cast<double>(pair.fine_inverse) / prev.fine_inverse;
        r.order_h1_phi = std::log(prev.h1_phi / r.h1_phi) / std::log(refine);
      }
      records.push_back(std::move(r));
    }
  } catch (const std::runtime_error& e) {
    err << "solver failure: " << e.what() << "\n";
    return 1;
  }

  std::ofstream csv(output);
  if (!csv) {
    err << "cannot write output file '" << output << "'\n";
    return 2;
  }
  write_csv(csv, records);
  out << markdown_table(records);
  out << "wrote " << output << "\n";

  if ((cfg.emit_probes || opt.probes) && cfg.method != Method::fem &&
      !probe_pairs.empty()) {
    std::vector<std::pair<int, int>> pairs;
    for (const auto& p : probe_pairs) {
      pairs.emplace_back(p.coarse_inverse, p.fine_inverse);
    }
    TwoGridOptions tg_opt;
    tg_opt.gummel = gummel;
    try {
      const std::vector<ProbeRow> probe_rows =
          theorem_probe(variant_of(cfg.method), pairs, sources, tg_opt);
      std::vector<std::vector<std::string>> rows;
      rows.push_back({"quantity", "H", "h", "lhs", "rhs", "ratio"});
      for (const ProbeRow& p : probe_rows) {
        rows.push_back({p.quantity, fraction_of_inverse(p.coarse_inverse),
                        fraction_of_inverse(p.fine_inverse), format_g6(p.lhs),
                        format_g6(p.rhs), format_g6(p.ratio)});
      }
      out << "\nerror-coupling probes (" << method_name(cfg.method) << "):\n"
          << render_rows(rows);
    } catch (const std::runtime_error& e) {
      err << "probe failure: " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

CompareResult compare_csv_files(const std::vector<std::string>& paths) {
  if (paths.size() < 2) {
    throw ConfigError("compare needs at least two CSV files");
  }
  const std::vector<ConvergenceRecord> base = read_csv_file(paths.front());
  if (base.empty()) {
    throw ConfigError("baseline file '" + paths.front() + "' has no rows");
  }
  // Same method and h beats any row at the same h; among the latter a fem
  // row wins so two-grid errors are always measured against plain FEM.
  std::map<std::pair<std::string, int>, const ConvergenceRecord*> by_method_h;
  std::map<int, const ConvergenceRecord*> by_h;
  for (const ConvergenceRecord& r : base) {
    by_method_h[{r.method, r.fine_inverse}] = &r;
    const auto it = by_h.find(r.fine_inverse);
    if (it == by_h.end() || it->second->method != "fem" || r.method == "fem") {
      by_h[r.fine_inverse] = &r;
    }
  }

  CompareResult result;
  result.baseline = paths.front();

  std::vector<std::vector<std::string>> rows;
  rows.push_back({"method", "h", "h1_phi ratio", "h1_p1 ratio", "h1_p2 ratio",
                  "time ratio", "note"});
  for (std::size_t i = 1; i < paths.size(); ++i) {
    std::map<int, bool> covered;
    for (const auto& [h_inv, unused] : by_h) covered[h_inv] = false;
    for (const ConvergenceRecord& record : read_csv_file(paths[i])) {
      const ConvergenceRecord* b = nullptr;
      const auto exact = by_method_h.find({record.method, record.fine_inverse});
      if (exact != by_method_h.end()) {
        b = exact->second;
      } else {
        const auto same_h = by_h.find(record.fine_inverse);
        if (same_h != by_h.end()) b = same_h->second;
      }
      if (b == nullptr) {
        result.warnings.push_back("no baseline row at h = 1/" +
                                  std::to_string(record.fine_inverse) +
                                  " to compare with " + record.method);
        continue;
      }
      covered[record.fine_inverse] = true;
      CompareCell cell;
      cell.method = record.method;
      cell.fine_inverse = record.fine_inverse;
      cell.h1_ratio = {record.h1_phi / b->h1_phi, record.h1_p1 / b->h1_p1,
                       record.h1_p2 / b->h1_p2};
      cell.time_ratio =
          b->wall_seconds > 0.0 ? record.wall_seconds / b->wall_seconds : 0.0;
      const double worst =
          std::max({cell.h1_ratio[0], cell.h1_ratio[1], cell.h1_ratio[2]});
      cell.flagged = worst > 1.25;
      std::string note;
      if (cell.flagged) {
        note = "exceeds baseline by more than 25%";
      } else if (worst > 1.05) {
        note = "elevated, within accepted degradation";
      }
      rows.push_back({cell.method, fraction_of_inverse(cell.fine_inverse),
                      format_g6(cell.h1_ratio[0]), format_g6(cell.h1_ratio[1]),
                      format_g6(cell.h1_ratio[2]), format_g6(cell.time_ratio),
                      note});
      result.cells.push_back(cell);
    }
    for (const auto& [h_inv, seen] : covered) {
      if (!seen) {
        result.warnings.push_back("'" + paths[i] + "' has no row at h = 1/" +
                                  std::to_string(h_inv));
      }
    }
  }
  result.markdown =
      "comparison against " + result.baseline + ":\n" + render_rows(rows);
  return result;
}

}  // namespace pnptg
