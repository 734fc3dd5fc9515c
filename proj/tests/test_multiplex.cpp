#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "core/estimate.hpp"
#include "core/graph.hpp"
#include "core/multiplex.hpp"

using namespace semdiff;
using estimate::FitStatus;
using estimate::MemberFit;
using graph::MemberId;
using graph::MemberRegistry;

namespace {

MemberRegistry registry(const char* layer, std::vector<std::string> names) {
  MemberRegistry reg(layer);
  for (const auto& n : names) reg.intern(n);
  return reg;
}

MemberFit fit(MemberId id, double xn, double xt, double auth,
              FitStatus status = FitStatus::Interior) {
  MemberFit f;
  f.member_id = id;
  f.x_neighbor_proj = xn;
  f.x_trend_proj = xt;
  f.authority = auth;
  f.status = status;
  return f;
}

}  // namespace

TEST_CASE("alignment joins by exact name, order-independent ids") {
  auto a = registry("la", {"Ann", "Bob", "Cid"});
  auto b = registry("lb", {"Cid", "Dee", "Ann"});
  auto al = multiplex::align_layers(a, b);
  CHECK(al.layer_a == "la");
  CHECK(al.layer_b == "lb");
  REQUIRE(al.pairs.size() == 2);
  CHECK(al.pairs[0].name == "Ann");
  CHECK(al.pairs[0].in_a == *a.find("Ann"));
  CHECK(al.pairs[0].in_b == *b.find("Ann"));
  CHECK(al.pairs[1].name == "Cid");
  CHECK_FALSE(al.pairs[0].flagged);
}

TEST_CASE("flag on either side marks the pair") {
  auto a = registry("la", {"Ann", "Bob"});
  auto b = registry("lb", {"Ann", "Bob"});
  auto al = multiplex::align_layers(a, b, {*a.find("Ann")}, {*b.find("Bob")});
  REQUIRE(al.pairs.size() == 2);
  CHECK(al.pairs[0].flagged);  // Ann, via layer a
  CHECK(al.pairs[1].flagged);  // Bob, via layer b
}

TEST_CASE("disjoint registries align to nothing") {
  auto al = multiplex::align_layers(registry("la", {"X"}), registry("lb", {"Y"}));
  CHECK(al.pairs.empty());
  auto rep = multiplex::compare_communities({fit(0, 0.1, 0.1, 0.0)}, {fit(0, 0.2, 0.2, 0.0)}, al);
  CHECK_FALSE(rep.correlations_available);
  CHECK(rep.shared_a.n == 0);
  CHECK(rep.whole_a.n == 1);
  CHECK(rep.whole_b.n == 1);
}

TEST_CASE("self-comparison yields perfect correlations") {
  auto a = registry("la", {"Ann", "Bob", "Cid", "Dee"});
  std::vector<MemberFit> fits = {fit(0, 0.1, 0.4, 1.0), fit(1, 0.2, 0.3, 0.5),
                                 fit(2, 0.3, 0.2, 2.0), fit(3, 0.4, 0.1, 0.0)};
  auto al = multiplex::align_layers(a, a);
  auto rep = multiplex::compare_communities(fits, fits, al);
  REQUIRE(rep.correlations_available);
  CHECK(rep.corr_neighbor.r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.corr_trend.r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.corr_authority.r == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& row : rep.scatter_neighbor) CHECK(row.dominant == "tie");
  CHECK(rep.shared_a.neighbor_susc == doctest::Approx(rep.shared_b.neighbor_susc));
}

TEST_CASE("four-member hand fixture") {
  // shared members Ann..Dee; layer b also holds Eve (valid) and Fog (no fit)
  auto a = registry("la", {"Ann", "Bob", "Cid", "Dee"});
  auto b = registry("lb", {"Ann", "Bob", "Cid", "Dee", "Eve", "Fog"});
  std::vector<MemberFit> fa = {
      fit(*a.find("Ann"), 0.10, 0.20, 1.0), fit(*a.find("Bob"), 0.20, 0.10, 2.0),
      fit(*a.find("Cid"), 0.30, 0.40, 3.0), fit(*a.find("Dee"), 0.40, 0.30, 4.0)};
  std::vector<MemberFit> fb = {
      fit(*b.find("Ann"), 0.20, 0.10, 2.0), fit(*b.find("Bob"), 0.40, 0.05, 4.0),
      fit(*b.find("Cid"), 0.60, 0.20, 6.0), fit(*b.find("Dee"), 0.80, 0.15, 8.0),
      fit(*b.find("Eve"), 0.90, 0.90, 9.0),
      fit(*b.find("Fog"), 0.0, 0.0, 0.0, FitStatus::InsufficientData)};
  auto rep = multiplex::compare_communities(fa, fb, multiplex::align_layers(a, b));
  REQUIRE(rep.correlations_available);
  // b doubles a on shared members -> exact linear relation
  CHECK(rep.corr_neighbor.r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.corr_authority.r == doctest::Approx(1.0).epsilon(1e-12));
  // trend values in b are a/2 - shuffled enough to stay positive but exact here:
  // (0.20,0.10,0.40,0.30) vs (0.10,0.05,0.20,0.15)
  CHECK(rep.corr_trend.r == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(rep.shared_a.n == 4);
  CHECK(rep.shared_a.neighbor_susc == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(rep.shared_b.neighbor_susc == doctest::Approx(0.50).epsilon(1e-12));
  CHECK(rep.shared_a.authority == doctest::Approx(2.5).epsilon(1e-12));
  // whole-layer means include Eve but never Fog
  CHECK(rep.whole_b.n == 5);
  CHECK(rep.whole_b.neighbor_susc == doctest::Approx((0.2 + 0.4 + 0.6 + 0.8 + 0.9) / 5));
  REQUIRE(rep.scatter_neighbor.size() == 4);
  for (const auto& row : rep.scatter_neighbor) CHECK(row.dominant == "b");
  for (const auto& row : rep.scatter_trend) CHECK(row.dominant == "a");
}

TEST_CASE("swapping the layers transposes the report") {
  auto a = registry("la", {"Ann", "Bob", "Cid"});
  auto b = registry("lb", {"Bob", "Cid", "Dee"});
  std::vector<MemberFit> fa = {fit(*a.find("Ann"), 0.1, 0.3, 1.0),
                               fit(*a.find("Bob"), 0.5, 0.2, 0.5),
                               fit(*a.find("Cid"), 0.2, 0.6, 2.0)};
  std::vector<MemberFit> fb = {fit(*b.find("Bob"), 0.3, 0.1, 1.5),
                               fit(*b.find("Cid"), 0.1, 0.4, 0.2),
                               fit(*b.find("Dee"), 0.7, 0.1, 3.0)};
  auto fwd = multiplex::compare_communities(fa, fb, multiplex::align_layers(a, b));
  auto rev = multiplex::compare_communities(fb, fa, multiplex::align_layers(b, a));
  CHECK(fwd.corr_neighbor.r == doctest::Approx(rev.corr_neighbor.r).epsilon(1e-12));
  CHECK(fwd.corr_authority.r == doctest::Approx(rev.corr_authority.r).epsilon(1e-12));
  CHECK(fwd.shared_a.neighbor_susc == doctest::Approx(rev.shared_b.neighbor_susc));
  CHECK(fwd.shared_b.trend_susc == doctest::Approx(rev.shared_a.trend_susc));
  REQUIRE(fwd.scatter_neighbor.size() == rev.scatter_neighbor.size());
  for (size_t i = 0; i < fwd.scatter_neighbor.size(); ++i) {
    const auto& f = fwd.scatter_neighbor[i];
    const auto& r = rev.scatter_neighbor[i];
    CHECK(f.value_a == r.value_b);
    CHECK(f.value_b == r.value_a);
    if (f.dominant == "a") CHECK(r.dominant == "b");
    if (f.dominant == "b") CHECK(r.dominant == "a");
  }
}

TEST_CASE("pairs missing a valid fit on either side drop out of shared stats") {
  auto a = registry("la", {"Ann", "Bob"});
  auto b = registry("lb", {"Ann", "Bob"});
  std::vector<MemberFit> fa = {fit(*a.find("Ann"), 0.1, 0.1, 0.0),
                               fit(*a.find("Bob"), 0.2, 0.2, 0.0)};
  std::vector<MemberFit> fb = {
      fit(*b.find("Ann"), 0.3, 0.3, 0.0),
      fit(*b.find("Bob"), 0.4, 0.4, 0.0, FitStatus::InsufficientData)};
  auto rep = multiplex::compare_communities(fa, fb, multiplex::align_layers(a, b));
  CHECK(rep.shared_a.n == 1);
  CHECK(rep.scatter_neighbor.size() == 1);
  CHECK(rep.scatter_neighbor[0].name == "Ann");
  // a single pair cannot support a correlation
  CHECK(rep.corr_neighbor.degenerate);
}
