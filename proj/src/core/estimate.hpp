#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "graph.hpp"
#include "lexicon.hpp"
#include "profile.hpp"

namespace semdiff::estimate {

/// One (member, year-pair, topic) observation of the linear transition
/// model y = x_i * u + x_is * v.
struct TransitionSample {
  double y = 0.0;  // L_i(k, t+1) - L_i(k, t)
  double u = 0.0;  // M_i(k, t)   - L_i(k, t); 0 when has_neighbors is false
  double v = 0.0;  // L_s(k, t)   - L_i(k, t)
  bool has_neighbors = false;
};

enum class FitStatus {
  Interior,             // unconstrained minimizer already feasible
  Boundary,             // projected onto the feasible triangle
  DegenerateNoNeighbors,  // all samples lack a neighbor term; only x_is fitted
  DegenerateSingular,   // normal matrix singular; identifiable subproblem fitted
  InsufficientData,
};

std::string fit_status_name(FitStatus s);

struct MemberFit {
  graph::MemberId member_id = 0;
  double x_neighbor_raw = 0.0;
  double x_trend_raw = 0.0;
  double x_neighbor_proj = 0.0;
  double x_trend_proj = 0.0;
  double chi2_full = 0.0;   // at the raw minimizer
  double chi2_proj = 0.0;   // at the projected point
  double chi2_null = 0.0;   // x_i = 0 model at its own minimizer
  long n_samples = 0;
  long dof = 0;             // n_samples - 2
  FitStatus status = FitStatus::InsufficientData;
  double authority = 0.0;
  double normalized_authority = 0.0;
  uint64_t success = 0;     // paper count
  bool flagged_ambiguous = false;
};

struct TransitionOptions {
  // Trend topics admitted per transition beyond the member's own support;
  // nullopt lifts the cap entirely.
  std::optional<size_t> trend_top_k = 50;
};

// Samples for one member, one per (topic, consecutive-profile-year pair).
// Neighbor means average only neighbors with a profile at t.
std::vector<TransitionSample> build_transitions(const profile::ProfileSeries& profiles,
                                                const graph::TemporalLayerGraph& graph,
                                                const lexicon::TrendSeries& trend,
                                                graph::MemberId member,
                                                const TransitionOptions& opts = {});

double chi2_at(const std::vector<TransitionSample>& samples, double x_neighbor, double x_trend);

MemberFit fit_member(const std::vector<TransitionSample>& samples);

struct ModelComparison {
  double reduced_chi2_full = 0.0;
  double reduced_chi2_null = 0.0;
  bool neighbor_term_preferred = false;
  bool available = false;
};

ModelComparison model_comparison(const MemberFit& fit);

// A_i = sum over j in N_i(t) of j's projected neighbor susceptibility;
// members without a fit contribute 0.
void compute_authority(std::vector<MemberFit>& fits, const graph::TemporalLayerGraph& graph,
                       int at_year);

struct CorrelationResult {
  double r = 0.0;
  bool degenerate = false;  // zero variance on either side
};

CorrelationResult pearson(const std::vector<double>& a, const std::vector<double>& b);

struct SuccessReport {
  CorrelationResult authority_vs_success;
  CorrelationResult trend_susc_vs_success;
};

SuccessReport success_report(const std::vector<MemberFit>& fits);

}  // namespace semdiff::estimate
