#include "profile.hpp"

#include <algorithm>
#include <unordered_map>

#include "util.hpp"

namespace semdiff::profile {

bool ProfileSeries::has_profile(graph::MemberId id, int year) const {
  return at(id, year) != nullptr;
}

const SparseVec* ProfileSeries::at(graph::MemberId id, int year) const {
  auto it = members.find(id);
  if (it == members.end()) return nullptr;
  const MemberProfiles& mp = it->second;
  if (mode == Mode::Cumulative) {
    auto yit = std::upper_bound(mp.years.begin(), mp.years.end(), year);
    if (yit == mp.years.begin()) return nullptr;
    return &mp.vecs[size_t(yit - mp.years.begin()) - 1];
  }
  auto yit = std::lower_bound(mp.years.begin(), mp.years.end(), year);
  if (yit == mp.years.end() || *yit != year) return nullptr;
  return &mp.vecs[size_t(yit - mp.years.begin())];
}

const ProfileSeries::MemberProfiles* ProfileSeries::member(graph::MemberId id) const {
  auto it = members.find(id);
  return it == members.end() ? nullptr : &it->second;
}

ProfileSeries build_profiles(const std::vector<lexicon::IndexedPaper>& indexed,
                             const graph::BuildResult& built, Mode mode, int window_years) {
  if (mode == Mode::Windowed && window_years <= 0)
    throw Error("windowed profiles need a positive window");

  ProfileSeries ps;
  ps.mode = mode;
  ps.window = window_years;

  std::unordered_map<std::string, const lexicon::IndexedPaper*> by_id;
  for (const auto& p : indexed) by_id.emplace(p.record_id, &p);

  // per member: year -> indexed papers with >=1 topic
  std::map<graph::MemberId, std::map<int, std::vector<const lexicon::IndexedPaper*>>> papers;
  for (const auto& [record_id, member_ids] : built.paper_members) {
    auto it = by_id.find(record_id);
    if (it == by_id.end() || it->second->topic_ids.empty()) continue;
    for (graph::MemberId id : member_ids) papers[id][it->second->year].push_back(it->second);
  }

  for (const auto& [id, by_year] : papers) {
    uint32_t n_papers = 0;
    for (const auto& [year, list] : by_year) n_papers += static_cast<uint32_t>(list.size());
    ps.n_indexed_papers[id] = n_papers;
    ProfileSeries::MemberProfiles mp;
    if (mode == Mode::Cumulative) {
      SparseVec weights;  // unnormalized, accumulated over years
      double total = 0.0;
      for (const auto& [year, list] : by_year) {
        for (const auto* p : list) {
          double w = 1.0 / double(p->topic_ids.size());
          for (const auto& t : p->topic_ids) weights[t] += w;
          total += 1.0;
        }
        SparseVec vec;
        for (const auto& [t, w] : weights) vec[t] = w / total;
        mp.years.push_back(year);
        mp.vecs.push_back(std::move(vec));
      }
    } else {
      for (const auto& [year, _] : by_year) {
        SparseVec weights;
        double total = 0.0;
        for (const auto& [y, list] : by_year) {
          if (y <= year - window_years || y > year) continue;
          for (const auto* p : list) {
            double w = 1.0 / double(p->topic_ids.size());
            for (const auto& t : p->topic_ids) weights[t] += w;
            total += 1.0;
          }
        }
        if (total == 0.0) continue;
        SparseVec vec;
        for (const auto& [t, w] : weights) vec[t] = w / total;
        mp.years.push_back(year);
        mp.vecs.push_back(std::move(vec));
      }
    }
    if (!mp.years.empty()) ps.members.emplace(id, std::move(mp));
  }
  return ps;
}

SemanticTreatabilityReport classify_semantically_treatable(
    const ProfileSeries& profiles, const graph::TreatabilityReport& treat, size_t n_members) {
  SemanticTreatabilityReport rep;
  rep.semantically_treatable.assign(n_members, false);
  rep.n_profile_years.assign(n_members, 0);
  rep.n_indexed_papers.assign(n_members, 0);
  for (const auto& [id, mp] : profiles.members) {
    if (id >= n_members) continue;
    rep.n_profile_years[id] = static_cast<uint32_t>(mp.years.size());
  }
  for (const auto& [id, n] : profiles.n_indexed_papers)
    if (id < n_members) rep.n_indexed_papers[id] = n;
  for (size_t i = 0; i < n_members; ++i) {
    rep.semantically_treatable[i] = treat.treatable[i] && rep.n_profile_years[i] >= 2;
    if (rep.semantically_treatable[i]) ++rep.n_semantically_treatable;
  }
  return rep;
}

}  // namespace semdiff::profile
