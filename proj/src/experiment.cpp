#include "experiment.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <sstream>

#include "oracle.hpp"
#include "signals.hpp"
#include "svg.hpp"
#include "version.hpp"

namespace obproj::experiments {

using json = nlohmann::ordered_json;

namespace {

constexpr double kPi = 3.14159265358979323846;

std::string fmt17(double v) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string kind_name(ExperimentConfig::Kind k) {
  switch (k) {
    case ExperimentConfig::Kind::kDiffraction: return "diffraction";
    case ExperimentConfig::Kind::kOscillators: return "oscillators";
    case ExperimentConfig::Kind::kCustom: return "custom";
  }
  return "unknown";
}

json config_json(const ExperimentConfig& cfg) {
  json j{{"experiment", kind_name(cfg.experiment)},
         {"grid_points", cfg.grid_points},
         {"k", cfg.k},
         {"seed", cfg.seed},
         {"pulse_count", cfg.pulse_count},
         {"dep_tol", cfg.dep_tol},
         {"oracle_check", cfg.oracle_check},
         {"q_basis_policy",
          cfg.q_basis_policy == QBasisPolicy::kRecompute ? "recompute"
                                                         : "incremental"}};
  if (cfg.k_sweep)
    j["k_sweep"] = json::array({cfg.k_sweep->first, cfg.k_sweep->second});
  return j;
}

struct RunContext {
  std::string name;
  SpacePtr space;
  Signal f;                       // observed signal
  std::optional<Signal> truth;    // component to recover, when known
  std::vector<Signal> wperp;      // null-space spanning set
  std::function<Signal(int)> atom;  // 1-based atom generator
  int max_atoms = 0;
  json extra_metadata = json::object();
};

double recovery_error(const ProjectorState& state, const RunContext& ctx) {
  const Signal rec = state.apply(ctx.f);
  if (ctx.truth) {
    const double denom = norm(*ctx.truth);
    return denom > 0.0 ? norm(rec - *ctx.truth) / denom : norm(rec);
  }
  const double denom = norm(ctx.f);
  return denom > 0.0 ? norm(ctx.f - rec) / denom : 0.0;
}

void write_series_csv(const std::string& path, const RunContext& ctx,
                      const Signal& recovered) {
  std::ostringstream out;
  const bool has_truth = ctx.truth.has_value();
  out << (has_truth ? "x,f,f1_true,recovered,residual\n"
                    : "x,f,recovered,residual\n");
  const int n = ctx.space->dim();
  for (int i = 0; i < n; ++i) {
    const double x =
        ctx.space->is_grid() ? ctx.space->grid_info().nodes[i] : double(i);
    const double fv = ctx.f.values[i].real();
    const double rv = recovered.values[i].real();
    out << fmt17(x) << ',' << fmt17(fv) << ',';
    if (has_truth) out << fmt17(ctx.truth->values[i].real()) << ',';
    out << fmt17(rv) << ',' << fmt17(fv - rv) << '\n';
  }
  write_file(path, out.str());
}

void write_sweep_csv(const std::string& path,
                     const std::vector<SweepPoint>& sweep) {
  std::ostringstream out;
  out << "k,phase,rel_error\n";
  for (const SweepPoint& p : sweep)
    out << p.k << ',' << p.phase << ',' << fmt17(p.rel_error) << '\n';
  write_file(path, out.str());
}

void write_plot(const std::string& path, const RunContext& ctx,
                const Signal& recovered, const std::string& title) {
  RealVec x(ctx.space->dim());
  if (ctx.space->is_grid()) {
    x = ctx.space->grid_info().nodes;
  } else {
    for (int i = 0; i < x.size(); ++i) x[i] = i;
  }
  const RealVec fv = ctx.f.values.real();
  const RealVec rv = recovered.values.real();
  RealVec tv;
  std::vector<PlotSeries> series;
  series.push_back({"observed f", "#888888", &fv});
  if (ctx.truth) {
    tv = ctx.truth->values.real();
    series.push_back({"true component", "#1f77b4", &tv});
  }
  series.push_back({"recovered", "#d62728", &rv});
  write_file(path, render_svg_plot(title, x, series));
}

ExperimentReport run_pipeline(const ExperimentConfig& cfg, RunContext ctx) {
  cfg.validate();

  // Resolve the visiting protocol: an explicit sweep wins, then a single
  // order, then the experiment preset.
  int k_lo = 0, k_hi = 0;
  if (cfg.k_sweep) {
    k_lo = cfg.k_sweep->first;
    k_hi = cfg.k_sweep->second;
  } else if (cfg.k > 0) {
    k_lo = k_hi = cfg.k;
  } else if (cfg.experiment == ExperimentConfig::Kind::kDiffraction) {
    k_lo = 40;
    k_hi = 200;  // enlarge to 200, then downdate to 40
  } else {
    k_lo = k_hi = ctx.max_atoms;
  }
  if (k_hi > ctx.max_atoms)
    throw Error(ErrorCode::kInvalidArgument,
                "model order " + std::to_string(k_hi) + " exceeds the " +
                    std::to_string(ctx.max_atoms) + " available atoms");

  ExperimentReport report;
  report.experiment = ctx.name;

  ProjectorState state(ctx.space, ctx.wperp, cfg.dep_tol);
  state.set_q_basis_policy(cfg.q_basis_policy);
  for (int n = 1; n <= k_hi; ++n) {
    state.update(ctx.atom(n));
    if (state.size() >= k_lo)
      report.sweep.push_back({state.size(), 'u', recovery_error(state, ctx)});
  }
  while (state.size() > k_lo) {
    state.downdate(state.size());
    report.sweep.push_back({state.size(), 'd', recovery_error(state, ctx)});
  }

  report.final_k = state.size();
  report.rel_error = report.sweep.empty() ? recovery_error(state, ctx)
                                          : report.sweep.back().rel_error;
  report.stats = state.stats();
  report.conditioning = state.stats().min_residual_ratio;

  if (cfg.oracle_check) {
    std::vector<Signal> final_atoms;
    for (int n = 1; n <= state.size(); ++n) final_atoms.push_back(ctx.atom(n));
    const GramOracleResult oracle =
        direct_projector(final_atoms, ctx.wperp, 1e-12);
    report.oracle_distance = operator_distance(
        [&state](const Signal& s) { return state.apply(s); },
        [&oracle](const Signal& s) { return oracle.apply(s); }, ctx.space, 20,
        cfg.seed + 7);
    const Signal orec = oracle.apply(ctx.f);
    if (ctx.truth) {
      report.oracle_rel_error =
          norm(orec - *ctx.truth) / norm(*ctx.truth);
    } else {
      report.oracle_rel_error = norm(ctx.f - orec) / norm(ctx.f);
    }
  }

  if (!cfg.output_dir.empty()) {
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(cfg.output_dir, ec);
    if (ec)
      throw Error(ErrorCode::kIoError,
                  "cannot create output directory '" + cfg.output_dir + "'");
    const std::string base = cfg.output_dir + "/" + ctx.name;
    const Signal recovered = state.apply(ctx.f);

    write_series_csv(base + ".csv", ctx, recovered);
    report.outputs.push_back(base + ".csv");

    if (report.sweep.size() > 1) {
      write_sweep_csv(base + "_sweep.csv", report.sweep);
      report.outputs.push_back(base + "_sweep.csv");
    }

    write_plot(base + ".svg", ctx, recovered,
               ctx.name + " (k = " + std::to_string(report.final_k) + ")");
    report.outputs.push_back(base + ".svg");

    save_state(state, base + "_state.json");
    report.outputs.push_back(base + "_state.json");

    json meta{{"experiment", ctx.name},
              {"config", config_json(cfg)},
              {"library_version", kVersion},
              {"final_k", report.final_k},
              {"rel_error", report.rel_error},
              {"conditioning", report.conditioning},
              {"stats",
               json{{"independent_updates", report.stats.independent_updates},
                    {"dependent_updates", report.stats.dependent_updates},
                    {"redundant_downdates", report.stats.redundant_downdates},
                    {"independent_downdates",
                     report.stats.independent_downdates}}}};
    if (!ctx.extra_metadata.empty()) meta["inputs"] = ctx.extra_metadata;
    if (report.oracle_distance) {
      meta["oracle"] = json{{"operator_distance", *report.oracle_distance},
                            {"rel_error", *report.oracle_rel_error}};
    }
    json sweep = json::array();
    for (const SweepPoint& p : report.sweep)
      sweep.push_back(json{{"k", p.k},
                           {"phase", std::string(1, p.phase)},
                           {"rel_error", p.rel_error}});
    meta["sweep"] = std::move(sweep);
    meta["outputs"] = report.outputs;
    write_file(base + "_meta.json", meta.dump(2) + "\n");
    report.outputs.push_back(base + "_meta.json");
  }
  return report;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (grid_points < 64)
    throw Error(ErrorCode::kInvalidArgument, "grid_points must be >= 64");
  if (k < 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  if (k_sweep) {
    if (k_sweep->first < 1 || k_sweep->second < k_sweep->first)
      throw Error(ErrorCode::kInvalidArgument,
                  "k_sweep must satisfy 1 <= lo <= hi");
  }
  if (pulse_count < 0 || pulse_count > signals::kSparkCount)
    throw Error(ErrorCode::kInvalidArgument,
                "pulse_count must lie in 0.." +
                    std::to_string(signals::kSparkCount));
  if (!(dep_tol > 0.0))
    throw Error(ErrorCode::kInvalidArgument, "dep_tol must be positive");
}

ExperimentReport run_diffraction(const ExperimentConfig& cfg) {
  RunContext ctx;
  ctx.name = "diffraction";
  ctx.space = Space::grid(kPi / 2.0, 3.0 * kPi / 2.0, cfg.grid_points);
  const Signal f1 = signals::diffraction_truth(ctx.space);
  const Signal f2 = signals::diffraction_background(ctx.space);
  ctx.f = f1 + f2;
  ctx.truth = f1;
  ctx.wperp = signals::wperp_diffraction(ctx.space);
  ctx.atom = [space = ctx.space](int n) {
    return signals::diffraction_atom(n, space);
  };
  ctx.max_atoms = 1 << 20;  // any order is generable
  ExperimentConfig c = cfg;
  c.experiment = ExperimentConfig::Kind::kDiffraction;
  return run_pipeline(c, std::move(ctx));
}

ExperimentReport run_oscillators(const ExperimentConfig& cfg) {
  RunContext ctx;
  ctx.name = "oscillators";
  ctx.space = Space::grid(0.0, 1.0, cfg.grid_points);
  const Signal f1 = signals::oscillator_truth(ctx.space);
  const Signal noise =
      signals::random_spark_noise(cfg.pulse_count, cfg.seed, ctx.space);
  ctx.f = f1 + noise;
  ctx.truth = f1;
  ctx.wperp = signals::spark_atoms(ctx.space);
  ctx.atom = [space = ctx.space](int n) {
    return signals::oscillator_atom(n, space);
  };
  ctx.max_atoms = 1 << 20;

  const signals::SparkDraw draw =
      signals::draw_sparks(cfg.pulse_count, cfg.seed, ctx.space);
  ctx.extra_metadata = json{{"spark_indices", draw.indices},
                            {"spark_amplitudes", draw.amplitudes},
                            {"amplitude_rule",
                             "uniform in [0.5*A, A], A = max |truth| on the "
                             "grid; SplitMix64 seeded draw"}};

  ExperimentConfig c = cfg;
  c.experiment = ExperimentConfig::Kind::kOscillators;
  if (c.k == 0 && !c.k_sweep) c.k = 100;
  return run_pipeline(c, std::move(ctx));
}

ExperimentReport run_custom(const CustomModel& model,
                            const ExperimentConfig& cfg) {
  RunContext ctx;
  ctx.name = "custom";
  ctx.space = model.space;
  ctx.f = model.signal;
  ctx.wperp = model.wperp;
  ctx.atom = [&model](int n) { return model.atoms[n - 1]; };
  ctx.max_atoms = static_cast<int>(model.atoms.size());
  ExperimentConfig c = cfg;
  c.experiment = ExperimentConfig::Kind::kCustom;
  if (c.k == 0 && !c.k_sweep) c.k = ctx.max_atoms;
  return run_pipeline(c, std::move(ctx));
}

ExperimentReport run_custom_file(const std::string& model_path,
                                 const ExperimentConfig& cfg) {
  const CustomModel model = load_custom_model(model_path);
  return run_custom(model, cfg);
}

std::string ExperimentReport::to_json() const {
  json j{{"experiment", experiment},
         {"final_k", final_k},
         {"rel_error", rel_error},
         {"conditioning", conditioning},
         {"stats",
          json{{"independent_updates", stats.independent_updates},
               {"dependent_updates", stats.dependent_updates},
               {"redundant_downdates", stats.redundant_downdates},
               {"independent_downdates", stats.independent_downdates}}}};
  if (oracle_distance) {
    j["oracle"] = json{{"operator_distance", *oracle_distance},
                       {"rel_error", *oracle_rel_error}};
  }
  json sw = json::array();
  for (const SweepPoint& p : sweep)
    sw.push_back(json{{"k", p.k},
                      {"phase", std::string(1, p.phase)},
                      {"rel_error", p.rel_error}});
  j["sweep"] = std::move(sw);
  j["outputs"] = outputs;
  return j.dump(2) + "\n";
}

}  // namespace obproj::experiments
