#include "multiplex.hpp"

#include <algorithm>
#include <unordered_map>

namespace semdiff::multiplex {

LayerAlignment align_layers(const graph::MemberRegistry& a, const graph::MemberRegistry& b,
                            const std::set<graph::MemberId>& flagged_a,
                            const std::set<graph::MemberId>& flagged_b) {
  LayerAlignment al;
  al.layer_a = a.layer();
  al.layer_b = b.layer();
  for (graph::MemberId i = 0; i < a.size(); ++i) {
    const std::string& name = a.info(i).name;
    if (auto j = b.find(name)) {
      AlignedPair p;
      p.in_a = i;
      p.in_b = *j;
      p.name = name;
      p.flagged = flagged_a.count(i) > 0 || flagged_b.count(*j) > 0;
      al.pairs.push_back(std::move(p));
    }
  }
  return al;
}

namespace {

bool valid(const estimate::MemberFit& f) {
  return f.status != estimate::FitStatus::InsufficientData;
}

LayerMeans means_over(const std::vector<const estimate::MemberFit*>& fits) {
  LayerMeans m;
  for (const auto* f : fits) {
    m.neighbor_susc += f->x_neighbor_proj;
    m.trend_susc += f->x_trend_proj;
    m.authority += f->authority;
    ++m.n;
  }
  if (m.n) {
    m.neighbor_susc /= double(m.n);
    m.trend_susc /= double(m.n);
    m.authority /= double(m.n);
  }
  return m;
}

std::string dominant_of(double va, double vb) {
  if (va > vb) return "a";
  if (vb > va) return "b";
  return "tie";
}

}  // namespace

ComparisonReport compare_communities(const std::vector<estimate::MemberFit>& fits_a,
                                     const std::vector<estimate::MemberFit>& fits_b,
                                     const LayerAlignment& alignment) {
  ComparisonReport rep;

  std::unordered_map<graph::MemberId, const estimate::MemberFit*> by_id_a, by_id_b;
  std::vector<const estimate::MemberFit*> whole_a, whole_b;
  for (const auto& f : fits_a) {
    if (!valid(f)) continue;
    by_id_a.emplace(f.member_id, &f);
    whole_a.push_back(&f);
  }
  for (const auto& f : fits_b) {
    if (!valid(f)) continue;
    by_id_b.emplace(f.member_id, &f);
    whole_b.push_back(&f);
  }
  rep.whole_a = means_over(whole_a);
  rep.whole_b = means_over(whole_b);

  std::vector<const estimate::MemberFit*> shared_a, shared_b;
  std::vector<double> na, nb, ta, tb, aa, ab;
  for (const auto& p : alignment.pairs) {
    auto ia = by_id_a.find(p.in_a);
    auto ib = by_id_b.find(p.in_b);
    if (ia == by_id_a.end() || ib == by_id_b.end()) continue;
    const auto* fa = ia->second;
    const auto* fb = ib->second;
    shared_a.push_back(fa);
    shared_b.push_back(fb);
    na.push_back(fa->x_neighbor_proj);
    nb.push_back(fb->x_neighbor_proj);
    ta.push_back(fa->x_trend_proj);
    tb.push_back(fb->x_trend_proj);
    aa.push_back(fa->authority);
    ab.push_back(fb->authority);
    rep.scatter_neighbor.push_back({p.name, fa->x_neighbor_proj, fb->x_neighbor_proj,
                                    dominant_of(fa->x_neighbor_proj, fb->x_neighbor_proj),
                                    p.flagged});
    rep.scatter_trend.push_back({p.name, fa->x_trend_proj, fb->x_trend_proj,
                                 dominant_of(fa->x_trend_proj, fb->x_trend_proj), p.flagged});
    rep.scatter_authority.push_back(
        {p.name, fa->authority, fb->authority, dominant_of(fa->authority, fb->authority),
         p.flagged});
  }
  rep.shared_a = means_over(shared_a);
  rep.shared_b = means_over(shared_b);

  if (!shared_a.empty()) {
    rep.correlations_available = true;
    rep.corr_neighbor = estimate::pearson(na, nb);
    rep.corr_trend = estimate::pearson(ta, tb);
    rep.corr_authority = estimate::pearson(aa, ab);
  }
  return rep;
}

}  // namespace semdiff::multiplex
