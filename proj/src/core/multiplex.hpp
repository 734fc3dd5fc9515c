#pragma once

#include <optional>
#include <string>
#include <vector>

#include "estimate.hpp"
#include "graph.hpp"

namespace semdiff::multiplex {

struct AlignedPair {
  graph::MemberId in_a;
  graph::MemberId in_b;
  std::string name;
  bool flagged = false;
};

struct LayerAlignment {
  std::string layer_a, layer_b;
  std::vector<AlignedPair> pairs;
};

LayerAlignment align_layers(const graph::MemberRegistry& a, const graph::MemberRegistry& b,
                            const std::set<graph::MemberId>& flagged_a = {},
                            const std::set<graph::MemberId>& flagged_b = {});

struct LayerMeans {
  double neighbor_susc = 0.0;
  double trend_susc = 0.0;
  double authority = 0.0;
  size_t n = 0;
};

struct ScatterRow {
  std::string name;
  double value_a = 0.0;
  double value_b = 0.0;
  std::string dominant;  // "a", "b" or "tie"
  bool flagged = false;
};

struct ComparisonReport {
  LayerMeans shared_a, shared_b;  // over aligned members with valid fits
  LayerMeans whole_a, whole_b;    // over each full layer
  bool correlations_available = false;
  estimate::CorrelationResult corr_neighbor, corr_trend, corr_authority;
  std::vector<ScatterRow> scatter_neighbor, scatter_trend, scatter_authority;
};

ComparisonReport compare_communities(const std::vector<estimate::MemberFit>& fits_a,
                                     const std::vector<estimate::MemberFit>& fits_b,
                                     const LayerAlignment& alignment);

}  // namespace semdiff::multiplex
