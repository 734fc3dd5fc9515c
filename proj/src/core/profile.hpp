#pragma once

#include <map>
#include <string>
#include <vector>

#include "graph.hpp"
#include "lexicon.hpp"

namespace semdiff::profile {

using SparseVec = std::map<std::string, double>;  // topic_id -> mass, zeros omitted

enum class Mode { Cumulative, Windowed };

/// L_i(c_k,t) per member. Vectors are stored at the member's observation
/// years (years with at least one indexed paper in scope); in cumulative
/// mode the profile between observation years equals the last stored one.
class ProfileSeries {
 public:
  Mode mode = Mode::Cumulative;
  int window = 0;  // windowed mode only

  struct MemberProfiles {
    std::vector<int> years;       // ascending observation years
    std::vector<SparseVec> vecs;  // parallel to years
  };

  std::map<graph::MemberId, MemberProfiles> members;
  std::map<graph::MemberId, uint32_t> n_indexed_papers;

  bool has_profile(graph::MemberId id, int year) const;
  // Profile value at `year`, or nullptr. Cumulative mode returns the vector
  // at the latest observation year <= year; windowed mode requires an exact
  // observation year.
  const SparseVec* at(graph::MemberId id, int year) const;
  const MemberProfiles* member(graph::MemberId id) const;
};

ProfileSeries build_profiles(const std::vector<lexicon::IndexedPaper>& indexed,
                             const graph::BuildResult& built, Mode mode, int window_years = 0);

struct SemanticTreatabilityReport {
  std::vector<bool> semantically_treatable;
  std::vector<uint32_t> n_profile_years;
  std::vector<uint32_t> n_indexed_papers;
  uint64_t n_semantically_treatable = 0;
};

SemanticTreatabilityReport classify_semantically_treatable(
    const ProfileSeries& profiles, const graph::TreatabilityReport& treat, size_t n_members);

}  // namespace semdiff::profile
