// obproj command-line front end. Talks to the library exclusively through
// the C API in obproj.h; nlohmann/json is used only to pretty-print report
// documents.

#include <CLI11.hpp>
#include <nlohmann/json.hpp>
#include <obproj.h>

#include <cstdint>
#include <cstdio>
#include <iostream>
#include <optional>
#include <string>
#include <utility>

namespace {

using nlohmann::json;

int status_to_exit_code(obproj_status status) {
  switch (status) {
    case OBPROJ_OK: return 0;
    case OBPROJ_ERR_INVALID_ARG:
    case OBPROJ_ERR_SPACE_MISMATCH:
    case OBPROJ_ERR_INDEX:
    case OBPROJ_ERR_PARSE: return 2;
    case OBPROJ_ERR_DIRECT_SUM:
    case OBPROJ_ERR_DEGENERATE: return 3;
    case OBPROJ_ERR_IO:
    case OBPROJ_ERR_INTERNAL: return 4;
  }
  return 4;
}

int report_failure(obproj_status status) {
  std::cerr << "error (" << obproj_status_name(status)
            << "): " << obproj_last_error_message() << "\n";
  return status_to_exit_code(status);
}

std::optional<std::pair<int, int>> parse_sweep(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) return std::nullopt;
  try {
    const int lo = std::stoi(text.substr(0, colon));
    const int hi = std::stoi(text.substr(colon + 1));
    return std::make_pair(lo, hi);
  } catch (...) {
    return std::nullopt;
  }
}

void print_report(const std::string& report_text) {
  const json r = json::parse(report_text);
  std::cout << "experiment:   " << r.value("experiment", std::string("?"))
            << "\n";
  std::cout << "final k:      " << r.value("final_k", 0) << "\n";
  std::printf("rel. error:   %.6e\n", r.value("rel_error", 0.0));
  const double conditioning = r.value("conditioning", 1.0);
  std::printf("conditioning: %.6e (min ||q||/||u||)\n", conditioning);
  if (conditioning < 1e-6)
    std::printf("warning:      model and null subspaces are nearly aligned; "
                "duals are amplified by ~%.1e\n", 1.0 / conditioning);
  if (r.contains("oracle")) {
    std::printf("oracle:       operator distance %.6e, rel. error %.6e\n",
                r["oracle"].value("operator_distance", 0.0),
                r["oracle"].value("rel_error", 0.0));
  }
  if (r.contains("sweep") && r["sweep"].size() > 1) {
    double lo = 0, hi = 0;
    bool first = true;
    for (const auto& p : r["sweep"]) {
      const double e = p.value("rel_error", 0.0);
      if (first) {
        lo = hi = e;
        first = false;
      } else {
        lo = std::min(lo, e);
        hi = std::max(hi, e);
      }
    }
    std::printf("sweep:        %zu orders visited, rel. error %.3e .. %.3e\n",
                r["sweep"].size(), lo, hi);
  }
  if (r.contains("outputs")) {
    for (const auto& o : r["outputs"])
      std::cout << "wrote:        " << o.get<std::string>() << "\n";
  }
}

struct DemoOptions {
  std::string experiment;
  int k = 0;
  std::string sweep;
  int grid = 2048;
  std::uint64_t seed = 1;
  int pulses = 50;
  double dep_tol = 1e-10;
  std::string out_dir = "obproj_out";
  bool oracle = false;
  bool no_files = false;
  bool incremental_qbasis = false;
};

int run_demo_or_custom(const DemoOptions& opt, const std::string& model_path) {
  obproj_run_config cfg;
  obproj_run_config_defaults(&cfg);
  cfg.grid_points = opt.grid;
  cfg.k = opt.k;
  if (!opt.sweep.empty()) {
    const auto sw = parse_sweep(opt.sweep);
    if (!sw) {
      std::cerr << "error: --sweep expects LO:HI\n";
      return 2;
    }
    cfg.sweep_lo = sw->first;
    cfg.sweep_hi = sw->second;
  }
  cfg.seed = opt.seed;
  cfg.pulse_count = opt.pulses;
  cfg.dep_tol = opt.dep_tol;
  cfg.output_dir = opt.no_files ? nullptr : opt.out_dir.c_str();
  cfg.oracle_check = opt.oracle ? 1 : 0;
  cfg.incremental_qbasis = opt.incremental_qbasis ? 1 : 0;

  char* report = nullptr;
  const obproj_status status =
      model_path.empty()
          ? obproj_run_demo(opt.experiment.c_str(), &cfg, &report)
          : obproj_run_custom(model_path.c_str(), &cfg, &report);
  if (status != OBPROJ_OK) return report_failure(status);
  if (report) {
    print_report(report);
    obproj_string_free(report);
  }
  return 0;
}

struct StateOptions {
  std::string state_path;
  std::string vector_path;
  std::string y_path;
  std::string out_path;
  int j = 0;
};

class StateHandle {
 public:
  ~StateHandle() { obproj_state_free(state_); }
  obproj_status load(const std::string& path) {
    return obproj_state_load_json(path.c_str(), &state_);
  }
  obproj_state* get() { return state_; }

 private:
  obproj_state* state_ = nullptr;
};

class SignalHandle {
 public:
  ~SignalHandle() { obproj_signal_free(sig_); }
  obproj_status load(const obproj_space* space, const std::string& path) {
    return obproj_signal_load_json(space, path.c_str(), &sig_);
  }
  obproj_signal** out() { return &sig_; }
  obproj_signal* get() { return sig_; }

 private:
  obproj_signal* sig_ = nullptr;
};

int run_state_op(const std::string& op, const StateOptions& opt) {
  StateHandle state;
  obproj_status status = state.load(opt.state_path);
  if (status != OBPROJ_OK) return report_failure(status);

  SignalHandle vec;
  if (!opt.vector_path.empty()) {
    status = vec.load(obproj_state_space(state.get()), opt.vector_path);
    if (status != OBPROJ_OK) return report_failure(status);
  }
  SignalHandle y;
  if (!opt.y_path.empty()) {
    status = y.load(obproj_state_space(state.get()), opt.y_path);
    if (status != OBPROJ_OK) return report_failure(status);
  }

  obproj_update_report up{};
  obproj_downdate_report down{};
  if (op == "update") {
    status = obproj_state_update(state.get(), vec.get(), y.get(), &up);
    if (status != OBPROJ_OK) return report_failure(status);
    std::printf("update: %s case, ||q||/||u|| = %.3e\n",
                up.independent ? "independent" : "dependent",
                up.residual_ratio);
  } else if (op == "downdate") {
    status = obproj_state_downdate(state.get(), opt.j, &down);
    if (status != OBPROJ_OK) return report_failure(status);
    std::printf("downdate: removed %s atom, s = %.12g, rank %d -> %d\n",
                down.removed_independent ? "an independent" : "a redundant",
                down.s, down.rank_before, down.rank_after);
  } else if (op == "replace") {
    status = obproj_state_replace(state.get(), opt.j, vec.get(), &down, &up);
    if (status != OBPROJ_OK) return report_failure(status);
    std::printf("replace: removed %s atom (s = %.12g); new atom %s "
                "(||q||/||u|| = %.3e)\n",
                down.removed_independent ? "an independent" : "a redundant",
                down.s, up.independent ? "independent" : "dependent",
                up.residual_ratio);
  } else if (op == "apply") {
    obproj_signal* projected = nullptr;
    status = obproj_state_apply(state.get(), vec.get(), &projected);
    if (status != OBPROJ_OK) return report_failure(status);
    if (!opt.out_path.empty()) {
      status = obproj_signal_save_json(projected, opt.out_path.c_str());
      if (status != OBPROJ_OK) {
        obproj_signal_free(projected);
        return report_failure(status);
      }
      std::cout << "wrote: " << opt.out_path << "\n";
    }
    obproj_signal_free(projected);
    std::printf("apply: k = %d, rank = %d\n", obproj_state_size(state.get()),
                obproj_state_rank(state.get()));
    return 0;
  }

  const std::string out =
      opt.out_path.empty() ? opt.state_path : opt.out_path;
  status = obproj_state_save_json(state.get(), out.c_str());
  if (status != OBPROJ_OK) return report_failure(status);
  std::cout << "state: k = " << obproj_state_size(state.get())
            << ", rank = " << obproj_state_rank(state.get()) << ", wrote "
            << out << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"obproj: recursive oblique projectors for signal splitting"};
  app.set_version_flag("--version", std::string(obproj_version()));
  app.require_subcommand(1);

  DemoOptions demo_opt;
  std::string model_path;

  CLI::App* demo = app.add_subcommand(
      "demo", "Run a bundled experiment (diffraction or oscillators)");
  demo->add_option("experiment", demo_opt.experiment,
                   "'diffraction' or 'oscillators'")
      ->required();
  demo->add_option("--k", demo_opt.k, "model order (0 = experiment preset)");
  demo->add_option("--sweep", demo_opt.sweep,
                   "LO:HI -- enlarge to HI, then downdate to LO");
  demo->add_option("--grid", demo_opt.grid, "grid points (default 2048)");
  demo->add_option("--seed", demo_opt.seed, "noise seed");
  demo->add_option("--pulses", demo_opt.pulses,
                   "oscillators: number of noise sparks (0..400)");
  demo->add_option("--dep-tol", demo_opt.dep_tol,
                   "linear-dependence tolerance");
  demo->add_option("--out", demo_opt.out_dir,
                   "output directory (default obproj_out)");
  demo->add_flag("--oracle", demo_opt.oracle,
                 "cross-check against the direct Gram pseudo-inverse build");
  demo->add_flag("--no-files", demo_opt.no_files,
                 "compute and report only, write nothing");
  demo->add_flag("--incremental-qbasis", demo_opt.incremental_qbasis,
                 "one-pass residual-basis downdating (benchmark option)");

  CLI::App* run = app.add_subcommand(
      "run", "Run the split pipeline on a custom model document");
  run->add_option("--model", model_path, "model JSON document")->required();
  run->add_option("--k", demo_opt.k, "model order (0 = all atoms)");
  run->add_option("--sweep", demo_opt.sweep, "LO:HI sweep");
  run->add_option("--seed", demo_opt.seed, "probe seed for --oracle");
  run->add_option("--dep-tol", demo_opt.dep_tol,
                  "linear-dependence tolerance");
  run->add_option("--out", demo_opt.out_dir, "output directory");
  run->add_flag("--oracle", demo_opt.oracle, "oracle cross-check");
  run->add_flag("--no-files", demo_opt.no_files, "write nothing");
  run->add_flag("--incremental-qbasis", demo_opt.incremental_qbasis,
                "one-pass residual-basis downdating (benchmark option)");

  StateOptions state_opt;
  CLI::App* state = app.add_subcommand(
      "state", "Operate on a serialized projector state");
  state->require_subcommand(1);
  for (const char* name : {"update", "downdate", "replace", "apply"}) {
    CLI::App* sub = state->add_subcommand(name);
    sub->add_option("--state", state_opt.state_path, "state JSON document")
        ->required();
    if (std::string(name) != "downdate")
      sub->add_option("--vector", state_opt.vector_path, "signal JSON")
          ->required();
    if (std::string(name) == "update")
      sub->add_option("--y", state_opt.y_path,
                      "dual choice for a dependent atom (default: zero)");
    if (std::string(name) == "downdate" || std::string(name) == "replace")
      sub->add_option("-j,--index", state_opt.j, "1-based atom index")
          ->required();
    sub->add_option("--out", state_opt.out_path,
                    "output path (default: rewrite --state in place; for "
                    "apply: projected signal JSON)");
  }

  CLI11_PARSE(app, argc, argv);

  if (demo->parsed()) return run_demo_or_custom(demo_opt, "");
  if (run->parsed()) return run_demo_or_custom(demo_opt, model_path);
  for (const char* name : {"update", "downdate", "replace", "apply"}) {
    CLI::App* sub = state->get_subcommand(name);
    if (sub->parsed()) return run_state_op(name, state_opt);
  }
  return 2;
}
