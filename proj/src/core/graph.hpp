#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "corpus.hpp"

namespace semdiff::graph {

using MemberId = uint32_t;

struct MemberInfo {
  std::string name;
  int first_year = 0;
  std::set<int> years;
  uint64_t n_papers = 0;
};

class MemberRegistry {
 public:
  explicit MemberRegistry(std::string layer) : layer_(std::move(layer)) {}

  MemberId intern(const std::string& normalized_name);
  std::optional<MemberId> find(const std::string& normalized_name) const;

  const std::string& layer() const { return layer_; }
  size_t size() const { return members_.size(); }
  const MemberInfo& info(MemberId id) const { return members_[id]; }
  MemberInfo& info_mut(MemberId id) { return members_[id]; }

 private:
  std::string layer_;
  std::vector<MemberInfo> members_;
  std::unordered_map<std::string, MemberId> by_name_;
};

struct Edge {
  MemberId a, b;  // a < b
  int first_year;
};

/// Cumulative co-authorship graph. Edges are undirected, unweighted and
/// never removed; an edge carries the first year the pair shared a paper.
class TemporalLayerGraph {
 public:
  explicit TemporalLayerGraph(std::string layer) : layer_(std::move(layer)) {}

  void add_edge(MemberId a, MemberId b, int year);
  void ensure_node(MemberId id);

  // Builds the year-sorted adjacency; the graph is read-only afterwards.
  void freeze();
  bool frozen() const { return frozen_; }

  const std::string& layer() const { return layer_; }
  size_t n_nodes() const { return adjacency_.size(); }
  size_t n_edges(int year) const;
  size_t n_edges() const { return edges_.size(); }
  std::vector<Edge> edges_sorted() const;

  // N_i(t): neighbors joined by year <= t. Frozen graphs only.
  std::vector<MemberId> neighbors(MemberId i, int year) const;
  size_t degree(MemberId i, int year) const;

 private:
  std::string layer_;
  bool frozen_ = false;
  std::unordered_map<uint64_t, int> edges_;  // packed pair -> first year
  std::vector<std::vector<std::pair<int, MemberId>>> adjacency_;  // (first_year, j), year-sorted
};

struct BuildOptions {
  // Papers with more coauthors than this are excluded from edge creation.
  std::optional<size_t> max_coauthors;
};

struct BuildResult {
  MemberRegistry registry;
  TemporalLayerGraph graph;
  uint64_t n_hyperauthor_skipped = 0;
  // record_id -> member ids, for joining indexed papers to members later
  std::vector<std::pair<std::string, std::vector<MemberId>>> paper_members;
};

BuildResult build_graph(const std::vector<corpus::PublicationRecord>& records,
                        const std::string& layer, const BuildOptions& opts = {});

struct TreatabilityReport {
  std::vector<bool> treatable;       // by member id
  std::vector<uint32_t> n_years;     // distinct publication years
  uint64_t n_treatable = 0;
};

TreatabilityReport classify_treatable(const MemberRegistry& registry);

struct SnapshotStats {
  size_t n_nodes = 0;
  size_t n_edges = 0;
  size_t largest_component = 0;
  size_t n_isolated = 0;
  size_t n_small_components = 0;  // size >= 2, excluding the largest
};

SnapshotStats snapshot_stats(const TemporalLayerGraph& graph, int year);

// Cross product of given and family name lists; members whose normalized
// name equals "<given> <family>" are flagged.
std::set<MemberId> flag_ambiguous(const MemberRegistry& registry,
                                  const std::vector<std::string>& given_names,
                                  const std::vector<std::string>& family_names);

/// Array-based union-find with path halving and union by size.
class UnionFind {
 public:
  explicit UnionFind(size_t n) : parent_(n), size_(n, 1) {
    for (size_t i = 0; i < n; ++i) parent_[i] = static_cast<uint32_t>(i);
  }
  uint32_t find(uint32_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  bool unite(uint32_t a, uint32_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
    return true;
  }
  uint32_t component_size(uint32_t x) { return size_[find(x)]; }

 private:
  std::vector<uint32_t> parent_;
  std::vector<uint32_t> size_;
};

}  // namespace semdiff::graph
