#include "dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "util.hpp"

namespace semdiff::dynamics {

bool ParameterSet::feasible_discrete(double tol) const {
  if (trend.size() != neighbor.size()) return false;
  for (size_t i = 0; i < neighbor.size(); ++i) {
    if (neighbor[i] < -tol || trend[i] < -tol) return false;
    if (neighbor[i] + trend[i] > 1.0 + tol) return false;
  }
  return true;
}

namespace {

void check_state(const SimulationState& state, const ParameterSet& params,
                 const Adjacency& neighbors) {
  size_t n = state.profiles.size();
  if (params.size() != n || neighbors.size() != n)
    throw Error("state, parameters and graph disagree on member count");
  for (size_t i = 0; i < n; ++i) {
    if (state.profiles[i].size() != state.trend.size())
      throw Error("profile dimension mismatch at member " + std::to_string(i));
    for (size_t k = 0; k < state.profiles[i].size(); ++k) {
      if (std::isnan(state.profiles[i][k]))
        throw Error("NaN in state at member " + std::to_string(i) + " topic " + std::to_string(k));
    }
  }
}

// One generalized step: L_i += scale * [x_i (M_i - L_i) + x_is (L_s - L_i)].
// scale = 1 gives the discrete map, scale = dt the Euler update.
SimulationState apply_step(const SimulationState& state, const ParameterSet& params,
                           const Adjacency& neighbors, double scale) {
  SimulationState next = state;
  next.time = state.time + scale;
  size_t n_topics = state.trend.size();
  for (size_t i = 0; i < state.profiles.size(); ++i) {
    double xi = params.neighbor[i];
    double xs = params.trend[i];
    const auto& adj = neighbors[i];
    std::vector<double>& out = next.profiles[i];
    if (adj.empty()) {
      for (size_t k = 0; k < n_topics; ++k)
        out[k] = state.profiles[i][k] + scale * xs * (state.trend[k] - state.profiles[i][k]);
      continue;
    }
    double inv = 1.0 / double(adj.size());
    for (size_t k = 0; k < n_topics; ++k) {
      // averaging the differences keeps consensus an exact fixed point
      double diff = 0.0;
      for (uint32_t j : adj) diff += state.profiles[j][k] - state.profiles[i][k];
      out[k] = state.profiles[i][k] + scale * (xi * inv * diff +
                                               xs * (state.trend[k] - state.profiles[i][k]));
    }
  }
  return next;
}

}  // namespace

SimulationState step_discrete(const SimulationState& state, const ParameterSet& params,
                              const Adjacency& neighbors) {
  check_state(state, params, neighbors);
  if (!params.feasible_discrete())
    throw Error("infeasible parameters: need x_i >= 0, x_is >= 0, x_i + x_is <= 1");
  return apply_step(state, params, neighbors, 1.0);
}

Trajectory integrate_continuous(const SimulationState& initial, const ParameterSet& rates,
                                const Adjacency& neighbors, double dt, double horizon) {
  check_state(initial, rates, neighbors);
  if (dt <= 0.0) throw Error("dt must be positive");
  for (size_t i = 0; i < rates.size(); ++i) {
    if (rates.neighbor[i] < 0.0 || rates.trend[i] < 0.0)
      throw Error("negative rate at member " + std::to_string(i));
    if (dt * (rates.neighbor[i] + rates.trend[i]) >= 1.0)
      throw Error("explicit step unstable at member " + std::to_string(i) +
                  ": dt*(a_i+a_is) >= 1");
  }
  Trajectory traj;
  traj.snapshots.push_back(initial);
  long n_steps = std::lround(horizon / dt);
  for (long s = 0; s < n_steps; ++s)
    traj.snapshots.push_back(apply_step(traj.snapshots.back(), rates, neighbors, dt));
  return traj;
}

namespace {

std::vector<double> dirichlet(std::mt19937_64& rng, size_t n, double alpha) {
  std::gamma_distribution<double> gamma(alpha, 1.0);
  std::vector<double> v(n);
  double sum = 0.0;
  for (double& x : v) {
    x = gamma(rng);
    sum += x;
  }
  if (sum <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / double(n));
    return v;
  }
  for (double& x : v) x /= sum;
  return v;
}

void renormalize(std::vector<double>& v) {
  double sum = 0.0;
  for (double& x : v) {
    if (x < 0.0) x = 0.0;
    sum += x;
  }
  if (sum <= 0.0) {
    std::fill(v.begin(), v.end(), 1.0 / double(v.size()));
    return;
  }
  for (double& x : v) x /= sum;
}

}  // namespace

SyntheticRun generate_synthetic(const SyntheticConfig& cfg) {
  if (cfg.n_members == 0 || cfg.n_topics == 0) throw Error("need members and topics");
  if (cfg.mean_degree < 0.0 || cfg.mean_degree > double(cfg.n_members - 1))
    throw Error("mean degree out of range");
  std::mt19937_64 rng(cfg.seed);

  SyntheticRun run;
  size_t n = cfg.n_members;

  // graph
  run.neighbors.assign(n, {});
  if (cfg.graph_model == GraphModel::ErdosRenyi) {
    double p = (n > 1) ? cfg.mean_degree / double(n - 1) : 0.0;
    std::bernoulli_distribution coin(std::min(1.0, p));
    for (size_t i = 0; i < n; ++i) {
      for (size_t j = i + 1; j < n; ++j) {
        if (coin(rng)) {
          run.neighbors[i].push_back(uint32_t(j));
          run.neighbors[j].push_back(uint32_t(i));
        }
      }
    }
  } else {
    // core clique plus leaf stars plus a crown of isolates
    size_t core = std::max<size_t>(2, n / 10);
    for (size_t i = 0; i < core; ++i)
      for (size_t j = i + 1; j < core; ++j) {
        run.neighbors[i].push_back(uint32_t(j));
        run.neighbors[j].push_back(uint32_t(i));
      }
    std::uniform_int_distribution<size_t> hub(0, core - 1);
    size_t attached = core + (n - core) * 2 / 3;
    for (size_t i = core; i < attached; ++i) {
      size_t h = hub(rng);
      run.neighbors[i].push_back(uint32_t(h));
      run.neighbors[h].push_back(uint32_t(i));
    }
  }

  // ground-truth parameters, truncated to the feasible triangle
  std::uniform_real_distribution<double> un(cfg.x_neighbor.lo, cfg.x_neighbor.hi);
  std::uniform_real_distribution<double> ut(cfg.x_trend.lo, cfg.x_trend.hi);
  run.truth.neighbor.resize(n);
  run.truth.trend.resize(n);
  for (size_t i = 0; i < n; ++i) {
    double xi, xs;
    do {
      xi = un(rng);
      xs = ut(rng);
    } while (xi < 0.0 || xs < 0.0 || xi + xs > 1.0);
    run.truth.neighbor[i] = xi;
    run.truth.trend[i] = xs;
  }

  // initial state
  SimulationState state;
  if (cfg.profile_alpha <= 0.0) throw Error("profile_alpha must be positive");
  state.trend = dirichlet(rng, cfg.n_topics, 1.0);
  state.profiles.reserve(n);
  for (size_t i = 0; i < n; ++i)
    state.profiles.push_back(dirichlet(rng, cfg.n_topics, cfg.profile_alpha));

  std::normal_distribution<double> walk(0.0, cfg.trend_step);
  std::normal_distribution<double> noise(0.0, cfg.noise_sigma);
  std::bernoulli_distribution miss(cfg.missing_prob);
  std::vector<double> drift_target;
  if (cfg.trend_process == TrendProcess::DriftMixture)
    drift_target = dirichlet(rng, cfg.n_topics, 1.0);

  auto observe = [&](uint32_t step, const SimulationState& s) {
    Observation obs;
    obs.step = step;
    obs.trend = s.trend;
    obs.profiles.resize(n);
    for (size_t i = 0; i < n; ++i) {
      if (cfg.missing_prob > 0.0 && miss(rng)) continue;
      std::vector<double> v = s.profiles[i];
      if (cfg.noise_sigma > 0.0) {
        for (double& x : v) x += noise(rng);
        renormalize(v);
      }
      obs.profiles[i] = std::move(v);
    }
    run.observed.push_back(std::move(obs));
  };

  run.trajectory.snapshots.push_back(state);
  observe(0, state);
  for (uint32_t step = 1; step <= cfg.n_steps; ++step) {
    state = apply_step(state, run.truth, run.neighbors, 1.0);
    switch (cfg.trend_process) {
      case TrendProcess::Static:
        break;
      case TrendProcess::RandomWalk:
        for (double& x : state.trend) x += walk(rng);
        renormalize(state.trend);
        break;
      case TrendProcess::DriftMixture:
        for (size_t k = 0; k < state.trend.size(); ++k)
          state.trend[k] += cfg.trend_step * (drift_target[k] - state.trend[k]);
        renormalize(state.trend);
        break;
    }
    run.trajectory.snapshots.push_back(state);
    if (step % cfg.observe_every == 0) observe(step, state);
  }
  return run;
}

}  // namespace semdiff::dynamics
