#include "semdiff/semdiff.h"

#include <cstring>
#include <string>

#include <nlohmann/json.hpp>

#include "core/dynamics.hpp"
#include "core/estimate.hpp"
#include "core/stages.hpp"
#include "core/util.hpp"

struct semdiff_ctx {
  std::string last_error;
};

namespace {

semdiff_status fail(semdiff_ctx* ctx, semdiff_status code, const std::string& msg) {
  if (ctx) ctx->last_error = msg;
  return code;
}

template <typename F>
semdiff_status guarded(semdiff_ctx* ctx, F&& f) {
  if (ctx) ctx->last_error.clear();
  try {
    return f();
  } catch (const semdiff::Error& e) {
    return fail(ctx, SEMDIFF_ERR_RUNTIME, e.what());
  } catch (const std::exception& e) {
    return fail(ctx, SEMDIFF_ERR_RUNTIME, e.what());
  } catch (...) {
    return fail(ctx, SEMDIFF_ERR_RUNTIME, "unknown error");
  }
}

}  // namespace

extern "C" {

const char* semdiff_version(void) { return semdiff::stages::kVersion; }

semdiff_ctx* semdiff_ctx_new(void) { return new (std::nothrow) semdiff_ctx(); }

void semdiff_ctx_free(semdiff_ctx* ctx) { delete ctx; }

const char* semdiff_last_error(const semdiff_ctx* ctx) {
  return ctx ? ctx->last_error.c_str() : "null context";
}

semdiff_status semdiff_run_stage(semdiff_ctx* ctx, const char* stage, const char* options_json) {
  if (!ctx || !stage) return fail(ctx, SEMDIFF_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(ctx, [&]() -> semdiff_status {
    if (!semdiff::stages::is_known_stage(stage))
      return fail(ctx, SEMDIFF_ERR_INVALID_ARGUMENT, std::string("unknown stage: ") + stage);
    nlohmann::json options = nlohmann::json::object();
    if (options_json && *options_json) {
      options = nlohmann::json::parse(options_json, nullptr, false);
      if (options.is_discarded() || !options.is_object())
        return fail(ctx, SEMDIFF_ERR_INVALID_ARGUMENT, "options must be a JSON object");
    }
    semdiff::stages::run_stage(stage, options);
    return SEMDIFF_OK;
  });
}

semdiff_status semdiff_fit_samples(semdiff_ctx* ctx, size_t n, const double* y, const double* u,
                                   const double* v, const uint8_t* has_neighbors,
                                   semdiff_fit_result* out) {
  if (!ctx || !y || !v || !out) return fail(ctx, SEMDIFF_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(ctx, [&]() -> semdiff_status {
    std::vector<semdiff::estimate::TransitionSample> samples(n);
    for (size_t i = 0; i < n; ++i) {
      samples[i].y = y[i];
      samples[i].v = v[i];
      samples[i].has_neighbors = has_neighbors ? has_neighbors[i] != 0 : (u != nullptr);
      samples[i].u = (samples[i].has_neighbors && u) ? u[i] : 0.0;
    }
    semdiff::estimate::MemberFit fit = semdiff::estimate::fit_member(samples);
    out->x_neighbor_raw = fit.x_neighbor_raw;
    out->x_trend_raw = fit.x_trend_raw;
    out->x_neighbor_proj = fit.x_neighbor_proj;
    out->x_trend_proj = fit.x_trend_proj;
    out->chi2_full = fit.chi2_full;
    out->chi2_proj = fit.chi2_proj;
    out->chi2_null = fit.chi2_null;
    out->status = static_cast<int32_t>(fit.status);
    return SEMDIFF_OK;
  });
}

semdiff_status semdiff_step_discrete(semdiff_ctx* ctx, size_t n_members, size_t n_topics,
                                     double* profiles, const double* trend,
                                     const double* x_neighbor, const double* x_trend,
                                     const uint64_t* offsets, const uint32_t* neighbor_ids) {
  if (!ctx || !profiles || !trend || !x_neighbor || !x_trend || !offsets)
    return fail(ctx, SEMDIFF_ERR_INVALID_ARGUMENT, "null argument");
  return guarded(ctx, [&]() -> semdiff_status {
    semdiff::dynamics::SimulationState state;
    state.trend.assign(trend, trend + n_topics);
    state.profiles.resize(n_members);
    for (size_t i = 0; i < n_members; ++i)
      state.profiles[i].assign(profiles + i * n_topics, profiles + (i + 1) * n_topics);
    semdiff::dynamics::ParameterSet params;
    params.neighbor.assign(x_neighbor, x_neighbor + n_members);
    params.trend.assign(x_trend, x_trend + n_members);
    semdiff::dynamics::Adjacency adj(n_members);
    for (size_t i = 0; i < n_members; ++i)
      adj[i].assign(neighbor_ids + offsets[i], neighbor_ids + offsets[i + 1]);
    semdiff::dynamics::SimulationState next =
        semdiff::dynamics::step_discrete(state, params, adj);
    for (size_t i = 0; i < n_members; ++i)
      std::memcpy(profiles + i * n_topics, next.profiles[i].data(), n_topics * sizeof(double));
    return SEMDIFF_OK;
  });
}

}  // extern "C"
