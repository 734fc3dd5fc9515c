#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace semdiff::dynamics {

/// Per-member susceptibilities. Discrete feasibility is the closed triangle
/// x_i >= 0, x_is >= 0, x_i + x_is <= 1; continuous rates just need to be
/// nonnegative. Per-neighbor coefficients are supported only in the
/// homogeneous reduction (one x_i shared by all of i's neighbors).
struct ParameterSet {
  std::vector<double> neighbor;  // x_i (discrete) or a_i (continuous)
  std::vector<double> trend;     // x_is or a_is

  size_t size() const { return neighbor.size(); }
  bool feasible_discrete(double tol = 0.0) const;
};

struct SimulationState {
  std::vector<std::vector<double>> profiles;  // member x topic
  std::vector<double> trend;                  // L_s
  double time = 0.0;
};

using Adjacency = std::vector<std::vector<uint32_t>>;

// Synchronous Eq-style update from time-t values. Isolated members drop the
// neighbor term: L_i <- (1 - x_is) L_i + x_is L_s.
SimulationState step_discrete(const SimulationState& state, const ParameterSet& params,
                              const Adjacency& neighbors);

struct Trajectory {
  std::vector<SimulationState> snapshots;
};

// Explicit Euler on the rate form. Requires dt * (a_i + a_is) < 1 for every
// member; with dt = 1 and rates equal to the discrete x's, each step is
// identical to step_discrete.
Trajectory integrate_continuous(const SimulationState& initial, const ParameterSet& rates,
                                const Adjacency& neighbors, double dt, double horizon);

enum class GraphModel { ErdosRenyi, StarCore };
enum class TrendProcess { Static, RandomWalk, DriftMixture };

struct ParameterRange {
  double lo = 0.0;
  double hi = 0.5;
};

struct SyntheticConfig {
  uint32_t n_members = 100;
  uint32_t n_topics = 20;
  GraphModel graph_model = GraphModel::ErdosRenyi;
  double mean_degree = 6.0;
  ParameterRange x_neighbor;  // see below
  ParameterRange x_trend;
  TrendProcess trend_process = TrendProcess::Static;
  double trend_step = 0.02;   // walk / drift magnitude
  double profile_alpha = 1.0; // Dirichlet concentration of the initial profiles
  uint32_t n_steps = 30;
  uint32_t observe_every = 1;
  double missing_prob = 0.0;  // per member-observation dropout
  double noise_sigma = 0.0;   // observation noise, re-normalized after
  uint64_t seed = 0;
};

struct Observation {
  uint32_t step;  // simulation step index
  std::vector<std::optional<std::vector<double>>> profiles;  // nullopt = missing
  std::vector<double> trend;
};

struct SyntheticRun {
  Adjacency neighbors;
  ParameterSet truth;
  Trajectory trajectory;              // exact states, every step
  std::vector<Observation> observed;  // schedule with dropout and noise applied
};

SyntheticRun generate_synthetic(const SyntheticConfig& cfg);

}  // namespace semdiff::dynamics
