#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <random>

#include "core/corpus.hpp"
#include "core/graph.hpp"
#include "core/util.hpp"

using namespace semdiff;
using corpus::PublicationRecord;
using graph::MemberId;

namespace {

PublicationRecord rec(const char* id, int year, std::vector<std::string> authors) {
  PublicationRecord r;
  r.record_id = id;
  r.title = "t";
  r.authors = std::move(authors);
  r.year = year;
  r.layer = "test";
  return r;
}

int first_year_of(const graph::TemporalLayerGraph& g, MemberId a, MemberId b) {
  for (const auto& e : g.edges_sorted()) {
    MemberId lo = std::min(a, b), hi = std::max(a, b);
    if (e.a == lo && e.b == hi) return e.first_year;
  }
  return -1;
}

}  // namespace

TEST_CASE("pairwise edges with first co-publication year") {
  auto built = graph::build_graph(
      {
          rec("p1", 2001, {"A", "B", "C"}),
          rec("p2", 2003, {"A", "B"}),  // repeat: year must stay 2001
          rec("p3", 1999, {"C", "D"}),
      },
      "test");
  const auto& g = built.graph;
  REQUIRE(g.n_nodes() == 4);
  CHECK(g.n_edges() == 4);  // AB, AC, BC, CD
  auto id = [&](const char* n) { return *built.registry.find(n); };
  CHECK(first_year_of(g, id("A"), id("B")) == 2001);
  CHECK(first_year_of(g, id("A"), id("C")) == 2001);
  CHECK(first_year_of(g, id("C"), id("D")) == 1999);
}

TEST_CASE("duplicate author within a paper creates no self-loop") {
  auto built = graph::build_graph({rec("p1", 2000, {"A", "A", "B"})}, "test");
  CHECK(built.registry.size() == 2);
  CHECK(built.graph.n_edges() == 1);
  CHECK(built.registry.info(*built.registry.find("A")).n_papers == 1);
}

TEST_CASE("cumulative neighborhoods are monotone in t") {
  auto built = graph::build_graph(
      {rec("p1", 2000, {"A", "B"}), rec("p2", 2002, {"A", "C"}), rec("p3", 2004, {"A", "D"})},
      "test");
  MemberId a = *built.registry.find("A");
  size_t prev = 0;
  for (int year = 1999; year <= 2005; ++year) {
    size_t deg = built.graph.degree(a, year);
    CHECK(deg >= prev);
    prev = deg;
    auto n = built.graph.neighbors(a, year);
    CHECK(n.size() == deg);
  }
  CHECK(built.graph.degree(a, 1999) == 0);
  CHECK(built.graph.degree(a, 2002) == 2);
  CHECK(built.graph.degree(a, 2004) == 3);
}

TEST_CASE("handshake identity: degree sum equals twice the edge count") {
  std::mt19937 rng(11);
  std::vector<PublicationRecord> records;
  for (int i = 0; i < 120; ++i) {
    int n = 1 + int(rng() % 4);
    std::vector<std::string> authors;
    for (int j = 0; j < n; ++j) authors.push_back("M" + std::to_string(rng() % 30));
    records.push_back(rec(("p" + std::to_string(i)).c_str(), 1990 + int(rng() % 20), authors));
  }
  auto built = graph::build_graph(records, "test");
  for (int year : {1995, 2000, 2005, 2010}) {
    size_t degsum = 0;
    for (MemberId i = 0; i < built.graph.n_nodes(); ++i) degsum += built.graph.degree(i, year);
    CHECK(degsum == 2 * built.graph.n_edges(year));
  }
}

TEST_CASE("graph is invariant under record permutation") {
  std::vector<PublicationRecord> records = {
      rec("p1", 2001, {"Zed", "Ann"}), rec("p2", 2000, {"Ann", "Bob", "Cid"}),
      rec("p3", 2002, {"Bob", "Zed"}), rec("p4", 1998, {"Cid"})};
  auto base = graph::build_graph(records, "test");
  auto base_edges = base.graph.edges_sorted();
  std::mt19937 rng(3);
  for (int trial = 0; trial < 8; ++trial) {
    std::shuffle(records.begin(), records.end(), rng);
    auto other = graph::build_graph(records, "test");
    REQUIRE(other.registry.size() == base.registry.size());
    for (MemberId i = 0; i < base.registry.size(); ++i)
      CHECK(other.registry.info(i).name == base.registry.info(i).name);
    auto other_edges = other.graph.edges_sorted();
    REQUIRE(other_edges.size() == base_edges.size());
    for (size_t k = 0; k < base_edges.size(); ++k) {
      CHECK(other_edges[k].a == base_edges[k].a);
      CHECK(other_edges[k].b == base_edges[k].b);
      CHECK(other_edges[k].first_year == base_edges[k].first_year);
    }
  }
}

TEST_CASE("hyperauthorship cap skips edges but keeps members") {
  graph::BuildOptions opts;
  opts.max_coauthors = 3;
  auto built = graph::build_graph(
      {rec("big", 2000, {"A", "B", "C", "D", "E"}), rec("ok", 2001, {"A", "B"})}, "test", opts);
  CHECK(built.n_hyperauthor_skipped == 1);
  CHECK(built.registry.size() == 5);
  CHECK(built.graph.n_edges() == 1);
  CHECK(built.registry.info(*built.registry.find("E")).n_papers == 1);
}

TEST_CASE("treatable requires two distinct publication years") {
  auto built = graph::build_graph(
      {
          rec("p1", 2000, {"A", "B"}),
          rec("p2", 2000, {"A"}),  // same year: A still needs a second year
          rec("p3", 2005, {"A"}),
          rec("p4", 2001, {"C"}),
      },
      "test");
  auto rep = graph::classify_treatable(built.registry);
  CHECK(rep.n_treatable == 1);
  CHECK(rep.treatable[*built.registry.find("A")]);
  CHECK_FALSE(rep.treatable[*built.registry.find("B")]);
  CHECK_FALSE(rep.treatable[*built.registry.find("C")]);
  CHECK(rep.n_years[*built.registry.find("A")] == 2);
}

TEST_CASE("snapshot stats: triangle plus isolated node") {
  auto built = graph::build_graph(
      {rec("p1", 2000, {"A", "B", "C"}), rec("p2", 1999, {"D"})}, "test");
  auto st = graph::snapshot_stats(built.graph, 2000);
  CHECK(st.n_nodes == 4);
  CHECK(st.n_edges == 3);
  CHECK(st.largest_component == 3);
  CHECK(st.n_isolated == 1);
  CHECK(st.n_small_components == 0);
  // before the triangle forms everyone is isolated
  auto before = graph::snapshot_stats(built.graph, 1999);
  CHECK(before.n_edges == 0);
  CHECK(before.n_isolated == 4);
  CHECK(before.largest_component == 1);
}

TEST_CASE("snapshot stats: star K_1,5 plus a pair") {
  auto built = graph::build_graph(
      {
          rec("s1", 2000, {"Hub", "L1"}), rec("s2", 2000, {"Hub", "L2"}),
          rec("s3", 2000, {"Hub", "L3"}), rec("s4", 2000, {"Hub", "L4"}),
          rec("s5", 2000, {"Hub", "L5"}), rec("q", 2000, {"X", "Y"}),
      },
      "test");
  auto st = graph::snapshot_stats(built.graph, 2000);
  CHECK(st.n_nodes == 8);
  CHECK(st.n_edges == 6);
  CHECK(st.largest_component == 6);
  CHECK(st.n_small_components == 1);
  CHECK(st.n_isolated == 0);
  CHECK(built.graph.degree(*built.registry.find("Hub"), 2000) == 5);
}

TEST_CASE("union-find matches component sizes") {
  graph::UnionFind uf(6);
  CHECK(uf.unite(0, 1));
  CHECK(uf.unite(1, 2));
  CHECK_FALSE(uf.unite(0, 2));
  CHECK(uf.unite(3, 4));
  CHECK(uf.component_size(2) == 3);
  CHECK(uf.component_size(4) == 2);
  CHECK(uf.component_size(5) == 1);
}

TEST_CASE("ambiguous name flagging uses the given x family cross product") {
  auto built = graph::build_graph(
      {
          rec("p1", 2000, {"Wei Wang", "Alice Quirk"}),
          rec("p2", 2001, {"Li Wang", "Wei Chen"}),
          rec("p3", 2002, {"Alice Quirk", "Wei Wang"}),
      },
      "test");
  auto flagged = graph::flag_ambiguous(built.registry, {"Wei", "Li"}, {"Wang", "Chen"});
  CHECK(flagged.size() == 3);  // Wei Wang, Li Wang, Wei Chen
  CHECK(flagged.count(*built.registry.find("Wei Wang")));
  CHECK(flagged.count(*built.registry.find("Li Wang")));
  CHECK(flagged.count(*built.registry.find("Wei Chen")));
  CHECK_FALSE(flagged.count(*built.registry.find("Alice Quirk")));
}

TEST_CASE("paper membership join survives the hyperauthor cap") {
  graph::BuildOptions opts;
  opts.max_coauthors = 2;
  auto built = graph::build_graph(
      {rec("big", 2000, {"A", "B", "C"}), rec("ok", 2001, {"A"})}, "test", opts);
  REQUIRE(built.paper_members.size() == 2);
  CHECK(built.paper_members[0].first == "big");
  CHECK(built.paper_members[0].second.size() == 3);
  CHECK(built.paper_members[1].second.size() == 1);
}
