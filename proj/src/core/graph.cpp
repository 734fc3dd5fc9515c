#include "graph.hpp"

#include <algorithm>

#include "util.hpp"

namespace semdiff::graph {

MemberId MemberRegistry::intern(const std::string& name) {
  auto it = by_name_.find(name);
  if (it != by_name_.end()) return it->second;
  MemberId id = static_cast<MemberId>(members_.size());
  members_.push_back(MemberInfo{name, 0, {}, 0});
  by_name_.emplace(name, id);
  return id;
}

std::optional<MemberId> MemberRegistry::find(const std::string& name) const {
  auto it = by_name_.find(name);
  if (it == by_name_.end()) return std::nullopt;
  return it->second;
}

namespace {
uint64_t pack(MemberId a, MemberId b) {
  if (a > b) std::swap(a, b);
  return (uint64_t(a) << 32) | b;
}
}  // namespace

void TemporalLayerGraph::ensure_node(MemberId id) {
  if (adjacency_.size() <= id) adjacency_.resize(id + 1);
}

void TemporalLayerGraph::add_edge(MemberId a, MemberId b, int year) {
  if (a == b) return;  // no self-loops
  if (frozen_) throw Error("graph is frozen");
  ensure_node(std::max(a, b));
  auto [it, inserted] = edges_.emplace(pack(a, b), year);
  if (!inserted && year < it->second) it->second = year;
}

void TemporalLayerGraph::freeze() {
  for (const auto& [key, year] : edges_) {
    MemberId a = MemberId(key >> 32), b = MemberId(key & 0xFFFFFFFF);
    adjacency_[a].emplace_back(year, b);
    adjacency_[b].emplace_back(year, a);
  }
  for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());
  frozen_ = true;
}

size_t TemporalLayerGraph::n_edges(int year) const {
  size_t n = 0;
  for (const auto& [key, y] : edges_)
    if (y <= year) ++n;
  return n;
}

std::vector<Edge> TemporalLayerGraph::edges_sorted() const {
  std::vector<Edge> out;
  out.reserve(edges_.size());
  for (const auto& [key, y] : edges_)
    out.push_back({MemberId(key >> 32), MemberId(key & 0xFFFFFFFF), y});
  std::sort(out.begin(), out.end(), [](const Edge& l, const Edge& r) {
    return std::tie(l.a, l.b) < std::tie(r.a, r.b);
  });
  return out;
}

std::vector<MemberId> TemporalLayerGraph::neighbors(MemberId i, int year) const {
  if (!frozen_) throw Error("neighbor queries require a frozen graph");
  std::vector<MemberId> out;
  if (i >= adjacency_.size()) return out;
  for (const auto& [y, j] : adjacency_[i]) {
    if (y > year) break;
    out.push_back(j);
  }
  return out;
}

size_t TemporalLayerGraph::degree(MemberId i, int year) const {
  if (!frozen_) throw Error("neighbor queries require a frozen graph");
  if (i >= adjacency_.size()) return 0;
  const auto& adj = adjacency_[i];
  auto it = std::upper_bound(adj.begin(), adj.end(), year,
                             [](int y, const std::pair<int, MemberId>& e) { return y < e.first; });
  return size_t(it - adj.begin());
}

BuildResult build_graph(const std::vector<corpus::PublicationRecord>& records,
                        const std::string& layer, const BuildOptions& opts) {
  BuildResult res{MemberRegistry(layer), TemporalLayerGraph(layer), 0, {}};
  // member ids are assigned in sorted-name order so the graph is identical
  // under any permutation of the input records
  {
    std::set<std::string> names;
    for (const auto& rec : records)
      for (const auto& name : rec.authors) names.insert(name);
    for (const auto& name : names) res.registry.intern(name);
  }
  for (const auto& rec : records) {
    std::vector<MemberId> ids;
    ids.reserve(rec.authors.size());
    for (const auto& name : rec.authors) {
      MemberId id = res.registry.intern(name);
      if (std::find(ids.begin(), ids.end(), id) == ids.end()) ids.push_back(id);
    }
    for (MemberId id : ids) {
      MemberInfo& m = res.registry.info_mut(id);
      ++m.n_papers;
      m.years.insert(rec.year);
      if (m.first_year == 0 || rec.year < m.first_year) m.first_year = rec.year;
      res.graph.ensure_node(id);
    }
    res.paper_members.emplace_back(rec.record_id, ids);
    if (opts.max_coauthors && ids.size() > *opts.max_coauthors) {
      ++res.n_hyperauthor_skipped;
      continue;
    }
    for (size_t i = 0; i < ids.size(); ++i)
      for (size_t j = i + 1; j < ids.size(); ++j) res.graph.add_edge(ids[i], ids[j], rec.year);
  }
  res.graph.freeze();
  return res;
}

TreatabilityReport classify_treatable(const MemberRegistry& registry) {
  TreatabilityReport rep;
  rep.treatable.resize(registry.size());
  rep.n_years.resize(registry.size());
  for (MemberId i = 0; i < registry.size(); ++i) {
    rep.n_years[i] = static_cast<uint32_t>(registry.info(i).years.size());
    rep.treatable[i] = rep.n_years[i] >= 2;
    if (rep.treatable[i]) ++rep.n_treatable;
  }
  return rep;
}

SnapshotStats snapshot_stats(const TemporalLayerGraph& graph, int year) {
  SnapshotStats st;
  st.n_nodes = graph.n_nodes();
  if (st.n_nodes == 0) return st;
  UnionFind uf(st.n_nodes);
  for (const Edge& e : graph.edges_sorted()) {
    if (e.first_year <= year) {
      uf.unite(e.a, e.b);
      ++st.n_edges;
    }
  }
  std::unordered_map<uint32_t, size_t> comp_size;
  for (uint32_t i = 0; i < st.n_nodes; ++i) ++comp_size[uf.find(i)];
  for (const auto& [root, sz] : comp_size) {
    if (sz == 1) ++st.n_isolated;
    st.largest_component = std::max(st.largest_component, sz);
  }
  for (const auto& [root, sz] : comp_size)
    if (sz >= 2 && sz < st.largest_component) ++st.n_small_components;
  return st;
}

std::set<MemberId> flag_ambiguous(const MemberRegistry& registry,
                                  const std::vector<std::string>& given_names,
                                  const std::vector<std::string>& family_names) {
  std::set<MemberId> out;
  for (const auto& g : given_names) {
    for (const auto& f : family_names) {
      std::string full = corpus::normalize_name(g + " " + f);
      if (auto id = registry.find(full)) out.insert(*id);
    }
  }
  return out;
}

}  // namespace semdiff::graph
