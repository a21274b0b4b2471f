#include "obproj.h"

#include <cstring>
#include <new>
#include <string>
#include <utility>
#include <vector>

#include "experiment.hpp"
#include "oracle.hpp"
#include "projector.hpp"
#include "serialize.hpp"
#include "space.hpp"
#include "version.hpp"

using obproj::Error;
using obproj::ErrorCode;
using obproj::Signal;
using obproj::SpacePtr;

struct obproj_space {
  SpacePtr impl;
};
struct obproj_signal {
  Signal impl;
};
struct obproj_state {
  obproj::ProjectorState impl;
  SpacePtr space;  // keeps a handle-compatible wrapper alive
  obproj_space space_view;
};

namespace {

thread_local std::string g_last_error = "no error";

obproj_status code_to_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return OBPROJ_ERR_INVALID_ARG;
    case ErrorCode::kSpaceMismatch: return OBPROJ_ERR_SPACE_MISMATCH;
    case ErrorCode::kIndexOutOfRange: return OBPROJ_ERR_INDEX;
    case ErrorCode::kDirectSumViolation: return OBPROJ_ERR_DIRECT_SUM;
    case ErrorCode::kNumericalDegeneracy: return OBPROJ_ERR_DEGENERATE;
    case ErrorCode::kParseError: return OBPROJ_ERR_PARSE;
    case ErrorCode::kIoError: return OBPROJ_ERR_IO;
  }
  return OBPROJ_ERR_INTERNAL;
}

obproj_status fail(obproj_status status, const char* message) {
  g_last_error = message;
  return status;
}

/* Runs `fn`, mapping library exceptions onto status codes. */
template <typename Fn>
obproj_status guarded(Fn&& fn) {
  try {
    fn();
    return OBPROJ_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return code_to_status(e.code());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return OBPROJ_ERR_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return OBPROJ_ERR_INTERNAL;
  }
}

obproj::experiments::ExperimentConfig to_config(const obproj_run_config* cfg) {
  obproj::experiments::ExperimentConfig c;
  if (!cfg) return c;
  if (cfg->grid_points > 0) c.grid_points = cfg->grid_points;
  c.k = cfg->k;
  if (cfg->sweep_lo > 0 && cfg->sweep_hi > 0)
    c.k_sweep = std::make_pair(cfg->sweep_lo, cfg->sweep_hi);
  c.seed = cfg->seed;
  c.pulse_count = cfg->pulse_count;
  if (cfg->dep_tol > 0.0) c.dep_tol = cfg->dep_tol;
  if (cfg->output_dir) c.output_dir = cfg->output_dir;
  c.oracle_check = cfg->oracle_check != 0;
  c.q_basis_policy = cfg->incremental_qbasis
                         ? obproj::QBasisPolicy::kIncremental
                         : obproj::QBasisPolicy::kRecompute;
  return c;
}

char* dup_string(const std::string& s) {
  char* out = new char[s.size() + 1];
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

obproj_state* wrap_state(obproj::ProjectorState st) {
  auto* out = new obproj_state{std::move(st), nullptr, {}};
  out->space = out->impl.space();
  out->space_view.impl = out->space;
  return out;
}

}  // namespace

extern "C" {

const char* obproj_version(void) { return obproj::kVersion; }

const char* obproj_status_name(obproj_status status) {
  switch (status) {
    case OBPROJ_OK: return "ok";
    case OBPROJ_ERR_INVALID_ARG: return "invalid argument";
    case OBPROJ_ERR_SPACE_MISMATCH: return "space mismatch";
    case OBPROJ_ERR_INDEX: return "index out of range";
    case OBPROJ_ERR_DIRECT_SUM: return "direct-sum violation";
    case OBPROJ_ERR_DEGENERATE: return "numerical degeneracy";
    case OBPROJ_ERR_PARSE: return "parse error";
    case OBPROJ_ERR_IO: return "i/o error";
    case OBPROJ_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* obproj_last_error_message(void) { return g_last_error.c_str(); }

obproj_status obproj_space_euclidean(int dim, obproj_space** out) {
  if (!out) return fail(OBPROJ_ERR_INVALID_ARG, "out pointer is null");
  return guarded([&] { *out = new obproj_space{obproj::Space::euclidean(dim)}; });
}

obproj_status obproj_space_grid(double a, double b, int n_points,
                                obproj_space** out) {
  if (!out) return fail(OBPROJ_ERR_INVALID_ARG, "out pointer is null");
  return guarded(
      [&] { *out = new obproj_space{obproj::Space::grid(a, b, n_points)}; });
}

int obproj_space_dim(const obproj_space* space) {
  return space ? space->impl->dim() : 0;
}

obproj_status obproj_space_nodes(const obproj_space* space, double* nodes) {
  if (!space || !nodes) return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const obproj::Grid& g = space->impl->grid_info();
    std::memcpy(nodes, g.nodes.data(), sizeof(double) * g.n_points());
  });
}

void obproj_space_free(obproj_space* space) { delete space; }

obproj_status obproj_signal_create(const obproj_space* space, const double* re,
                                   const double* im, size_t len,
                                   obproj_signal** out) {
  if (!space || !re || !out)
    return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    if (len != static_cast<size_t>(space->impl->dim()))
      throw Error(ErrorCode::kInvalidArgument,
                  "value length does not match space dimension");
    obproj::Vec v(static_cast<int>(len));
    for (size_t i = 0; i < len; ++i)
      v[static_cast<int>(i)] = obproj::Complex(re[i], im ? im[i] : 0.0);
    *out = new obproj_signal{Signal(space->impl, std::move(v))};
  });
}

size_t obproj_signal_len(const obproj_signal* sig) {
  return sig ? static_cast<size_t>(sig->impl.values.size()) : 0;
}

obproj_status obproj_signal_values(const obproj_signal* sig, double* re,
                                   double* im) {
  if (!sig) return fail(OBPROJ_ERR_INVALID_ARG, "null signal");
  const obproj::Vec& v = sig->impl.values;
  for (int i = 0; i < v.size(); ++i) {
    if (re) re[i] = v[i].real();
    if (im) im[i] = v[i].imag();
  }
  return OBPROJ_OK;
}

obproj_status obproj_signal_load_json(const obproj_space* space,
                                      const char* path, obproj_signal** out) {
  if (!space || !path || !out)
    return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    *out = new obproj_signal{obproj::load_signal(path, space->impl)};
  });
}

obproj_status obproj_signal_save_json(const obproj_signal* sig,
                                      const char* path) {
  if (!sig || !path) return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] { obproj::save_signal(sig->impl, path); });
}

void obproj_signal_free(obproj_signal* sig) { delete sig; }

obproj_status obproj_inner_product(const obproj_signal* f,
                                   const obproj_signal* g, double* out_re,
                                   double* out_im) {
  if (!f || !g) return fail(OBPROJ_ERR_INVALID_ARG, "null signal");
  return guarded([&] {
    const obproj::Complex ip = obproj::inner_product(f->impl, g->impl);
    if (out_re) *out_re = ip.real();
    if (out_im) *out_im = ip.imag();
  });
}

obproj_status obproj_state_init(const obproj_space* space,
                                const obproj_signal* const* wperp,
                                size_t n_wperp, double dep_tol,
                                obproj_state** out) {
  if (!space || !out || (n_wperp > 0 && !wperp))
    return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    std::vector<Signal> spanning;
    spanning.reserve(n_wperp);
    for (size_t i = 0; i < n_wperp; ++i) {
      if (!wperp[i])
        throw Error(ErrorCode::kInvalidArgument, "null spanning signal");
      spanning.push_back(wperp[i]->impl);
    }
    *out = wrap_state(
        obproj::ProjectorState(space->impl, spanning, dep_tol));
  });
}

obproj_status obproj_state_update(obproj_state* state,
                                  const obproj_signal* atom,
                                  const obproj_signal* y_choice,
                                  obproj_update_report* report) {
  if (!state || !atom) return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    std::optional<Signal> y;
    if (y_choice) y = y_choice->impl;
    const obproj::UpdateReport r = state->impl.update(atom->impl, y);
    if (report) {
      report->independent = r.independent ? 1 : 0;
      report->residual_ratio = r.residual_ratio;
      report->q_norm = r.q_norm;
      report->u_norm = r.u_norm;
    }
  });
}

obproj_status obproj_state_downdate(obproj_state* state, int j,
                                    obproj_downdate_report* report) {
  if (!state) return fail(OBPROJ_ERR_INVALID_ARG, "null state");
  return guarded([&] {
    const obproj::DowndateReport r = state->impl.downdate(j);
    if (report) {
      report->removed_independent = r.removed_independent ? 1 : 0;
      report->s = r.s;
      report->rank_before = r.rank_before;
      report->rank_after = r.rank_after;
    }
  });
}

obproj_status obproj_state_replace(obproj_state* state, int j,
                                   const obproj_signal* atom,
                                   obproj_downdate_report* down_report,
                                   obproj_update_report* up_report) {
  if (!state || !atom) return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const obproj::ReplaceReport r = state->impl.replace(j, atom->impl);
    if (down_report) {
      down_report->removed_independent =
          r.downdate.removed_independent ? 1 : 0;
      down_report->s = r.downdate.s;
      down_report->rank_before = r.downdate.rank_before;
      down_report->rank_after = r.downdate.rank_after;
    }
    if (up_report) {
      up_report->independent = r.update.independent ? 1 : 0;
      up_report->residual_ratio = r.update.residual_ratio;
      up_report->q_norm = r.update.q_norm;
      up_report->u_norm = r.update.u_norm;
    }
  });
}

obproj_status obproj_state_apply(const obproj_state* state,
                                 const obproj_signal* f, obproj_signal** out) {
  if (!state || !f || !out)
    return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded(
      [&] { *out = new obproj_signal{state->impl.apply(f->impl)}; });
}

obproj_status obproj_state_apply_pw(const obproj_state* state,
                                    const obproj_signal* f,
                                    obproj_signal** out) {
  if (!state || !f || !out)
    return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded(
      [&] { *out = new obproj_signal{state->impl.apply_pw(f->impl)}; });
}

int obproj_state_size(const obproj_state* state) {
  return state ? state->impl.size() : 0;
}

int obproj_state_rank(const obproj_state* state) {
  return state ? state->impl.rank() : 0;
}

double obproj_state_conditioning(const obproj_state* state) {
  return state ? state->impl.stats().min_residual_ratio : 1.0;
}

obproj_status obproj_state_clone(const obproj_state* state,
                                 obproj_state** out) {
  if (!state || !out) return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out = wrap_state(state->impl); });
}

obproj_status obproj_state_save_json(const obproj_state* state,
                                     const char* path) {
  if (!state || !path) return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] { obproj::save_state(state->impl, path); });
}

obproj_status obproj_state_load_json(const char* path, obproj_state** out) {
  if (!path || !out) return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] { *out = wrap_state(obproj::load_state(path)); });
}

const obproj_space* obproj_state_space(const obproj_state* state) {
  return state ? &state->space_view : nullptr;
}

void obproj_state_free(obproj_state* state) { delete state; }

obproj_status obproj_state_oracle_distance(const obproj_state* state,
                                           int probes, uint64_t seed,
                                           double* out) {
  if (!state || !out) return fail(OBPROJ_ERR_INVALID_ARG, "null argument");
  return guarded([&] {
    const obproj::ProjectorState& st = state->impl;
    if (st.size() == 0)
      throw Error(ErrorCode::kInvalidArgument, "state holds no atoms");
    const obproj::GramOracleResult oracle =
        obproj::direct_projector(st.atoms(), st.wperp_basis(), 1e-12);
    *out = obproj::operator_distance(
        [&st](const Signal& s) { return st.apply(s); },
        [&oracle](const Signal& s) { return oracle.apply(s); }, st.space(),
        probes, seed);
  });
}

void obproj_run_config_defaults(obproj_run_config* cfg) {
  if (!cfg) return;
  cfg->grid_points = 2048;
  cfg->k = 0;
  cfg->sweep_lo = 0;
  cfg->sweep_hi = 0;
  cfg->seed = 1;
  cfg->pulse_count = 50;
  cfg->dep_tol = 1e-10;
  cfg->output_dir = nullptr;
  cfg->oracle_check = 0;
  cfg->incremental_qbasis = 0;
}

obproj_status obproj_run_demo(const char* experiment,
                              const obproj_run_config* cfg,
                              char** report_json) {
  if (!experiment) return fail(OBPROJ_ERR_INVALID_ARG, "null experiment name");
  return guarded([&] {
    const obproj::experiments::ExperimentConfig c = to_config(cfg);
    obproj::experiments::ExperimentReport report;
    const std::string name = experiment;
    if (name == "diffraction") {
      report = obproj::experiments::run_diffraction(c);
    } else if (name == "oscillators") {
      report = obproj::experiments::run_oscillators(c);
    } else {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown experiment '" + name +
                      "' (expected 'diffraction' or 'oscillators')");
    }
    if (report_json) *report_json = dup_string(report.to_json());
  });
}

obproj_status obproj_run_custom(const char* model_path,
                                const obproj_run_config* cfg,
                                char** report_json) {
  if (!model_path) return fail(OBPROJ_ERR_INVALID_ARG, "null model path");
  return guarded([&] {
    const obproj::experiments::ExperimentReport report =
        obproj::experiments::run_custom_file(model_path, to_config(cfg));
    if (report_json) *report_json = dup_string(report.to_json());
  });
}

void obproj_string_free(char* s) { delete[] s; }

} /* extern "C" */
