#include <cstdlib>
#include <iostream>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "pnptg/experiment.hpp"
#include "pnptg/parallel.hpp"

namespace {

int usage(std::ostream& out) {
  out << "usage:\n"
         "  pnptg run <config> [--heavy] [--probes] [--out <path>]\n"
         "  pnptg compare <a.csv> <b.csv> [more.csv ...]\n"
         "\n"
         "run executes the experiment described by the config file and writes\n"
         "a CSV plus a Markdown table on stdout. Rows with h finer than 1/16\n"
         "are skipped unless --heavy is given. compare reports error/time\n"
         "ratios of each later file against the first file as baseline.\n"
         "Set PNPTG_THREADS=<n> to run the OpenMP kernels with n threads.\n";
  return 2;
}

void apply_thread_env() {
  const char* env = std::getenv("PNPTG_THREADS");
  if (env == nullptr) return;
  const int n = std::atoi(env);
  if (n > 1 && pnptg::openmp_available()) {
#ifdef _OPENMP
    omp_set_num_threads(n);
#endif
    pnptg::set_default_exec_policy(pnptg::ExecPolicy::openmp);
  }
}

int run_command(const std::vector<std::string>& args) {
  std::string config_path;
  pnptg::RunOptions opt;
  for (std::size_t i = 0; i < args.size(); ++i) {
    const std::string& a = args[i];
    if (a == "--heavy") {
      opt.heavy = true;
    } else if (a == "--probes") {
      opt.probes = true;
    } else if (a == "--out") {
      if (i + 1 >= args.size()) {
        std::cerr << "--out needs a path\n";
        return usage(std::cerr);
      }
      opt.out_override = args[++i];
    } else if (!a.empty() && a[0] == '-') {
      std::cerr << "unknown flag '" << a << "'\n";
      return usage(std::cerr);
    } else if (config_path.empty()) {
      config_path = a;
    } else {
      std::cerr << "unexpected argument '" << a << "'\n";
      return usage(std::cerr);
    }
  }
  if (config_path.empty()) {
    std::cerr << "run needs a config file\n";
    return usage(std::cerr);
  }
  try {
    const pnptg::ExperimentConfig cfg = pnptg::parse_config_file(config_path);
    return pnptg::run_experiment(cfg, opt, std::cout, std::cerr);
  } catch (const pnptg::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "solver failure: " << e.what() << "\n";
    return 1;
  }
}

int compare_command(const std::vector<std::string>& args) {
  if (args.size() < 2) {
    std::cerr << "compare needs at least two CSV files\n";
    return usage(std::cerr);
  }
  try {
    const pnptg::CompareResult result = pnptg::compare_csv_files(args);
    std::cout << result.markdown;
    for (const std::string& w : result.warnings) {
      std::cerr << "warning: " << w << "\n";
    }
    return 0;
  } catch (const pnptg::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_env();
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.empty()) return usage(std::cerr);
  const std::string command = args.front();
  args.erase(args.begin());
  if (command == "run") return run_command(args);
  if (command == "compare") return compare_command(args);
  std::cerr << "unknown command '" << command << "'\n";
  return usage(std::cerr);
}
