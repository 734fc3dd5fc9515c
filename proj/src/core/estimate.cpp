#include "estimate.hpp"

#include <algorithm>
#include <cmath>

#include "util.hpp"

namespace semdiff::estimate {

std::string fit_status_name(FitStatus s) {
  switch (s) {
    case FitStatus::Interior: return "interior";
    case FitStatus::Boundary: return "boundary";
    case FitStatus::DegenerateNoNeighbors: return "degenerate_no_neighbors";
    case FitStatus::DegenerateSingular: return "degenerate_singular";
    case FitStatus::InsufficientData: return "insufficient_data";
  }
  return "?";
}

std::vector<TransitionSample> build_transitions(const profile::ProfileSeries& profiles,
                                                const graph::TemporalLayerGraph& graph,
                                                const lexicon::TrendSeries& trend,
                                                graph::MemberId member,
                                                const TransitionOptions& opts) {
  std::vector<TransitionSample> out;
  const auto* mp = profiles.member(member);
  if (!mp || mp->years.size() < 2) return out;

  for (size_t yi = 0; yi + 1 < mp->years.size(); ++yi) {
    int t = mp->years[yi];
    const profile::SparseVec& cur = mp->vecs[yi];
    const profile::SparseVec& nxt = mp->vecs[yi + 1];

    // neighbor mean over neighbors with a profile at t
    profile::SparseVec mean;
    size_t n_active = 0;
    for (graph::MemberId j : graph.neighbors(member, t)) {
      if (const profile::SparseVec* pj = profiles.at(j, t)) {
        ++n_active;
        for (const auto& [topic, w] : *pj) mean[topic] += w;
      }
    }
    bool has_neighbors = n_active > 0;
    if (has_neighbors)
      for (auto& [topic, w] : mean) w /= double(n_active);

    const auto* trend_row = trend.year_row(t);

    // admitted topics: member's own support, plus the top-K trend topics
    std::set<std::string> admitted;
    for (const auto& [topic, w] : cur) admitted.insert(topic);
    for (const auto& [topic, w] : nxt) admitted.insert(topic);
    std::set<std::string> own = admitted;
    if (trend_row && (!opts.trend_top_k || *opts.trend_top_k > 0)) {
      if (!opts.trend_top_k) {
        for (const auto& [topic, w] : *trend_row) admitted.insert(topic);
      } else {
        std::vector<std::pair<double, std::string>> ranked;
        ranked.reserve(trend_row->size());
        for (const auto& [topic, w] : *trend_row) ranked.emplace_back(-w, topic);
        std::sort(ranked.begin(), ranked.end());
        for (size_t i = 0; i < ranked.size() && i < *opts.trend_top_k; ++i)
          admitted.insert(ranked[i].second);
      }
    }

    // sample topics: union of the four supports, intersected with admitted
    std::set<std::string> topics = own;
    for (const auto& [topic, w] : mean)
      if (admitted.count(topic)) topics.insert(topic);
    if (trend_row)
      for (const auto& [topic, w] : *trend_row)
        if (admitted.count(topic)) topics.insert(topic);

    auto value = [](const profile::SparseVec& v, const std::string& topic) {
      auto it = v.find(topic);
      return it == v.end() ? 0.0 : it->second;
    };
    for (const auto& topic : topics) {
      TransitionSample s;
      double li = value(cur, topic);
      s.y = value(nxt, topic) - li;
      s.v = (trend_row ? trend.share(topic, t) : 0.0) - li;
      s.has_neighbors = has_neighbors;
      if (has_neighbors) s.u = value(mean, topic) - li;
      out.push_back(s);
    }
  }
  return out;
}

double chi2_at(const std::vector<TransitionSample>& samples, double xn, double xt) {
  double chi2 = 0.0;
  for (const auto& s : samples) {
    double r = s.y - xn * (s.has_neighbors ? s.u : 0.0) - xt * s.v;
    chi2 += r * r;
  }
  return chi2;
}

namespace {

constexpr double kSingularRatio = 1e-12;

struct Normal {
  double suu = 0, suv = 0, svv = 0, suy = 0, svy = 0, syy = 0;
};

Normal accumulate(const std::vector<TransitionSample>& samples) {
  Normal n;
  for (const auto& s : samples) {
    double u = s.has_neighbors ? s.u : 0.0;
    n.suu += u * u;
    n.suv += u * s.v;
    n.svv += s.v * s.v;
    n.suy += u * s.y;
    n.svy += s.v * s.y;
    n.syy += s.y * s.y;
  }
  return n;
}

// Minimizes chi2 along x = base + t * dir for t in [0, 1], returns best t.
double clamp01(double t) { return std::clamp(t, 0.0, 1.0); }

}  // namespace

MemberFit fit_member(const std::vector<TransitionSample>& samples) {
  MemberFit fit;
  fit.n_samples = static_cast<long>(samples.size());
  fit.dof = fit.n_samples - 2;
  if (samples.empty()) {
    fit.status = FitStatus::InsufficientData;
    return fit;
  }

  Normal n = accumulate(samples);

  // null model (x_i = 0) at its own unconstrained minimizer
  double null_xt = n.svv > 0.0 ? n.svy / n.svv : 0.0;
  fit.chi2_null = chi2_at(samples, 0.0, null_xt);

  bool any_neighbors = std::any_of(samples.begin(), samples.end(),
                                   [](const TransitionSample& s) { return s.has_neighbors; });

  // eigenvalues of the symmetric 2x2 normal matrix
  double tr = n.suu + n.svv;
  double det = n.suu * n.svv - n.suv * n.suv;
  double disc = std::sqrt(std::max(0.0, tr * tr - 4.0 * det));
  double lmax = 0.5 * (tr + disc);
  double lmin = 0.5 * (tr - disc);

  bool singular = !(lmin > kSingularRatio * lmax) || lmax == 0.0;

  if (!any_neighbors || n.suu == 0.0) {
    // only the trend coefficient is identifiable
    fit.x_neighbor_raw = 0.0;
    fit.x_trend_raw = null_xt;
    fit.status = any_neighbors ? FitStatus::DegenerateSingular : FitStatus::DegenerateNoNeighbors;
  } else if (singular) {
    // fall back to whichever 1-parameter subproblem is identifiable
    if (n.suu >= n.svv) {
      fit.x_neighbor_raw = n.suu > 0.0 ? n.suy / n.suu : 0.0;
      fit.x_trend_raw = 0.0;
    } else {
      fit.x_neighbor_raw = 0.0;
      fit.x_trend_raw = null_xt;
    }
    fit.status = FitStatus::DegenerateSingular;
  } else {
    fit.x_neighbor_raw = (n.svv * n.suy - n.suv * n.svy) / det;
    fit.x_trend_raw = (n.suu * n.svy - n.suv * n.suy) / det;
    fit.status = FitStatus::Interior;
  }
  fit.chi2_full = chi2_at(samples, fit.x_neighbor_raw, fit.x_trend_raw);

  // constrained minimizer over the triangle {x >= 0, y >= 0, x + y <= 1}
  bool inside = fit.x_neighbor_raw >= 0.0 && fit.x_trend_raw >= 0.0 &&
                fit.x_neighbor_raw + fit.x_trend_raw <= 1.0;
  if (inside) {
    fit.x_neighbor_proj = fit.x_neighbor_raw;
    fit.x_trend_proj = fit.x_trend_raw;
    fit.chi2_proj = fit.chi2_full;
  } else {
    double best_chi2 = std::numeric_limits<double>::infinity();
    auto consider = [&](double xn, double xt) {
      double c = chi2_at(samples, xn, xt);
      if (c < best_chi2) {
        best_chi2 = c;
        fit.x_neighbor_proj = xn;
        fit.x_trend_proj = xt;
      }
    };
    // edge x_is = 0: chi2(t) minimized at t = suy/suu
    consider(n.suu > 0.0 ? clamp01(n.suy / n.suu) : 0.0, 0.0);
    // edge x_i = 0
    consider(0.0, n.svv > 0.0 ? clamp01(n.svy / n.svv) : 0.0);
    // edge x_i + x_is = 1: parameterize x_i = t, x_is = 1 - t.
    // residual r = y - v - t(u - v); quadratic in t with minimum at
    // t = sum (u-v)(y-v) / sum (u-v)^2
    {
      double sww = 0.0, swz = 0.0;
      for (const auto& s : samples) {
        double u = s.has_neighbors ? s.u : 0.0;
        double w = u - s.v;
        sww += w * w;
        swz += w * (s.y - s.v);
      }
      double t = sww > 0.0 ? clamp01(swz / sww) : 0.0;
      consider(t, 1.0 - t);
    }
    fit.chi2_proj = best_chi2;
    if (fit.status == FitStatus::Interior) fit.status = FitStatus::Boundary;
  }
  return fit;
}

ModelComparison model_comparison(const MemberFit& fit) {
  ModelComparison mc;
  long dof_full = fit.n_samples - 2;
  long dof_null = fit.n_samples - 1;
  if (dof_full <= 0 || fit.status == FitStatus::InsufficientData) return mc;
  mc.available = true;
  mc.reduced_chi2_full = fit.chi2_full / double(dof_full);
  mc.reduced_chi2_null = fit.chi2_null / double(dof_null);
  mc.neighbor_term_preferred = mc.reduced_chi2_full < mc.reduced_chi2_null;
  return mc;
}

void compute_authority(std::vector<MemberFit>& fits, const graph::TemporalLayerGraph& graph,
                       int at_year) {
  std::vector<double> x_by_member(graph.n_nodes(), 0.0);
  for (const auto& f : fits) {
    if (f.status == FitStatus::InsufficientData) continue;
    if (f.member_id < x_by_member.size()) x_by_member[f.member_id] = f.x_neighbor_proj;
  }
  for (auto& f : fits) {
    double a = 0.0;
    auto nbrs = graph.neighbors(f.member_id, at_year);
    for (graph::MemberId j : nbrs) a += x_by_member[j];
    f.authority = a;
    f.normalized_authority = nbrs.empty() ? 0.0 : a / double(nbrs.size());
  }
}

CorrelationResult pearson(const std::vector<double>& a, const std::vector<double>& b) {
  CorrelationResult res;
  size_t n = std::min(a.size(), b.size());
  if (n < 2) {
    res.degenerate = true;
    return res;
  }
  double ma = 0, mb = 0;
  for (size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= double(n);
  mb /= double(n);
  double sab = 0, saa = 0, sbb = 0;
  for (size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) {
    res.degenerate = true;
    return res;
  }
  res.r = sab / std::sqrt(saa * sbb);
  return res;
}

SuccessReport success_report(const std::vector<MemberFit>& fits) {
  std::vector<double> auth, trend, succ;
  for (const auto& f : fits) {
    if (f.status == FitStatus::InsufficientData) continue;
    auth.push_back(f.authority);
    trend.push_back(f.x_trend_proj);
    succ.push_back(double(f.success));
  }
  SuccessReport rep;
  rep.authority_vs_success = pearson(auth, succ);
  rep.trend_susc_vs_success = pearson(trend, succ);
  return rep;
}

}  // namespace semdiff::estimate
