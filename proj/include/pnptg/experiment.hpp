#pragma once

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "pnptg/pnp.hpp"

namespace pnptg {

enum class Method { fem, tg1, tg2, tg3, tg4 };

std::string method_name(Method m);

struct ResolutionPair {
  int coarse_inverse = 0;  // 0 for fem
  int fine_inverse = 0;
};

struct ExperimentConfig {
  Method method = Method::fem;
  std::vector<ResolutionPair> resolutions;
  double stop_tolerance = 1e-5;
  double rel_tolerance = 1e-10;
  std::string output = "results.csv";
  bool emit_probes = false;
};

// Thrown for malformed configs and unusable CLI input; maps to exit code 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Line-oriented "key = value" text; '#' starts a comment. Keys: method,
// resolutions, stop_tolerance, rel_tolerance, output, emit_probes.
// resolutions is a comma list of "H_inv:h_inv" pairs ("h_inv" alone for fem).
ExperimentConfig parse_config_file(const std::string& path);
ExperimentConfig parse_config_text(const std::string& text,
                                   const std::string& origin);

struct ConvergenceRecord {
  std::string method;
  int coarse_inverse = 0;  // 0 = no coarse mesh (fem)
  int fine_inverse = 0;
  double l2_p1 = 0.0, l2_p2 = 0.0;
  double h1_phi = 0.0, h1_p1 = 0.0, h1_p2 = 0.0;
  std::optional<double> order_h1_phi;  // vs previous row; empty on the first
  double wall_seconds = 0.0;
  int outer_iters = 0;
  long inner_iters = 0;  // informational; not serialized
};

inline constexpr const char* kCsvHeader =
    "method,H,h,l2_p1,l2_p2,h1_phi,h1_p1,h1_p2,order_h1_phi,wall_seconds,"
    "outer_iters";

// 6 significant digits, stable column order. H empty for fem rows; order
// empty where undefined.
void write_csv(std::ostream& out, const std::vector<ConvergenceRecord>& records);
std::vector<ConvergenceRecord> read_csv(std::istream& in,
                                        const std::string& origin);
std::vector<ConvergenceRecord> read_csv_file(const std::string& path);

std::string markdown_table(const std::vector<ConvergenceRecord>& records);

struct RunOptions {
  bool heavy = false;    // run rows with h_inverse > 16
  bool probes = false;   // force probe output on
  std::optional<std::string> out_override;
};

// Executes the experiment, writes the CSV, prints the Markdown table to out
// and warnings to err. Returns a process exit code: 0 success, 1 solver
// failure, 2 config error.
int run_experiment(const ExperimentConfig& cfg, const RunOptions& opt,
                   std::ostream& out, std::ostream& err);

struct CompareCell {
  std::string method;
  int fine_inverse = 0;
  // Ratios against the matched baseline row: h1_phi, h1_p1, h1_p2.
  std::array<double, 3> h1_ratio{};
  double time_ratio = 0.0;
  bool flagged = false;  // some H1 ratio exceeds 1.25
};

struct CompareResult {
  std::string baseline;  // path of the baseline file (the first argument)
  std::vector<CompareCell> cells;
  std::vector<std::string> warnings;
  std::string markdown;
};

// Side-by-side comparison of >= 2 CSVs. The first file is the baseline;
// each later row is divided by the baseline row with the same method and h,
// falling back to the baseline row at equal h (fem preferred) when the
// baseline never ran that method. Rows with no baseline counterpart, and
// baseline h values absent from a later file, produce warnings.
CompareResult compare_csv_files(const std::vector<std::string>& paths);

}  // namespace pnptg
