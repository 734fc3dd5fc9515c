#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include <nlohmann/json.hpp>

#include "core/stages.hpp"
#include "core/util.hpp"

using namespace semdiff;
using json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

const fs::path kSample = SEMDIFF_SAMPLE_DIR;
const fs::path kGolden = SEMDIFF_GOLDEN_DIR;

fs::path fresh_dir(const std::string& name) {
  fs::path p = fs::temp_directory_path() / "semdiff_tests" / name;
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

// The full two-layer pipeline on the bundled sample corpus.
void run_pipeline(const fs::path& root) {
  std::string cfg = (kSample / "run.toml").string();
  auto layer = [&](const std::string& tag, const std::string& kind, const std::string& name) {
    fs::path d = root / tag;
    stages::run_stage("ingest", {{"config", cfg},
                                 {"input", (kSample / "records.jsonl").string()},
                                 {"out", (d / "records.jsonl").string()},
                                 {"layer", name},
                                 {"kinds", json::array({kind})}});
    stages::run_stage("index", {{"config", cfg},
                                {"topics", (kSample / "topics.json").string()},
                                {"stoplist", (kSample / "stoplist.txt").string()},
                                {"records", (d / "records.jsonl").string()},
                                {"out", (d / "indexed.jsonl").string()}});
    stages::run_stage("trend", {{"config", cfg},
                                {"indexed", (d / "indexed.jsonl").string()},
                                {"out", (d / "trend.csv").string()}});
    stages::run_stage("graph", {{"config", cfg},
                                {"records", (d / "records.jsonl").string()},
                                {"layer", name},
                                {"given_names", (kSample / "given_names.txt").string()},
                                {"family_names", (kSample / "family_names.txt").string()},
                                {"out", (d / "graph").string()}});
    stages::run_stage("profile", {{"config", cfg},
                                  {"indexed", (d / "indexed.jsonl").string()},
                                  {"graph", (d / "graph").string()},
                                  {"out", (d / "profile").string()}});
    stages::run_stage("fit", {{"config", cfg},
                              {"profiles", (d / "profile").string()},
                              {"graph", (d / "graph").string()},
                              {"trend", (d / "trend.csv").string()},
                              {"out", (d / "fits.csv").string()}});
  };
  layer("a", "journal", "journals");
  layer("b", "conference", "proceedings");
  stages::run_stage("compare", {{"config", cfg},
                                {"fits_a", (root / "a" / "fits.csv").string()},
                                {"fits_b", (root / "b" / "fits.csv").string()},
                                {"out", (root / "compare").string()}});
  stages::run_stage("report", {{"config", cfg},
                               {"fits_a", (root / "a" / "fits.csv").string()},
                               {"fits_b", (root / "b" / "fits.csv").string()},
                               {"out", (root / "report").string()}});
  stages::run_stage("simulate", {{"config", cfg}, {"out", (root / "sim").string()}});
}

std::map<std::string, std::string> snapshot(const fs::path& root) {
  std::map<std::string, std::string> files;
  for (const auto& e : fs::recursive_directory_iterator(root)) {
    if (!e.is_regular_file()) continue;
    files[fs::relative(e.path(), root).generic_string()] = util::read_file(e.path());
  }
  return files;
}

}  // namespace

TEST_CASE("full pipeline on the sample corpus") {
  fs::path root = fresh_dir("full");
  run_pipeline(root);

  // ingest accounting for the journal layer: 15 journal records survive;
  // the 2015 record is year-filtered, the non-journal kinds and the broken
  // line are filtered or malformed
  json stats = json::parse(util::read_file(root / "a" / "records.jsonl.stats.json"));
  CHECK(stats.at("n_papers") == 15);
  CHECK(stats.at("n_malformed") == 1);
  CHECK(stats.at("n_filtered") == 17);
  json stats_b = json::parse(util::read_file(root / "b" / "records.jsonl.stats.json"));
  CHECK(stats_b.at("n_papers") == 15);

  // every stage leaves a manifest carrying its name and a config hash
  for (const char* m : {"a/records.jsonl.manifest.json", "a/indexed.jsonl.manifest.json",
                        "a/trend.csv.manifest.json", "a/graph/manifest.json",
                        "a/profile/manifest.json", "a/fits.csv.manifest.json",
                        "compare/manifest.json", "report/manifest.json", "sim/manifest.json"}) {
    json manifest = json::parse(util::read_file(root / m));
    CHECK(manifest.contains("stage"));
    CHECK(manifest.at("config_hash").get<std::string>().size() == 16);
  }

  // fits exist on both layers and the comparison found shared members
  json rep = json::parse(util::read_file(root / "compare" / "report.json"));
  CHECK(rep.at("shared").at("a").at("n").get<int>() >= 4);
  CHECK(rep.at("whole").at("b").at("n").get<int>() >= 4);

  // flagged ambiguous members show up in the scatter output
  std::string scatter = util::read_file(root / "compare" / "scatter_neighbor_susc.csv");
  CHECK(scatter.find("Wei Wang") != std::string::npos);

  if (std::getenv("SEMDIFF_WRITE_GOLDEN")) {
    for (const auto& [rel, content] : snapshot(root)) {
      if (rel.find("manifest") != std::string::npos) continue;  // absolute paths inside
      fs::path dst = kGolden / rel;
      fs::create_directories(dst.parent_path());
      util::write_file(dst, content);
    }
  }
}

TEST_CASE("pipeline reruns are byte-identical") {
  fs::path root = fresh_dir("determinism");
  run_pipeline(root);
  auto first = snapshot(root);
  fs::remove_all(root);
  fs::create_directories(root);
  run_pipeline(root);
  auto second = snapshot(root);
  REQUIRE(first.size() == second.size());
  for (const auto& [rel, content] : first) {
    REQUIRE(second.count(rel));
    CHECK_MESSAGE(second.at(rel) == content, "file differs between runs: ", rel);
  }
}

TEST_CASE("pipeline outputs match the committed golden files") {
  REQUIRE_MESSAGE(fs::exists(kGolden / "a" / "fits.csv"),
                  "golden files missing; run test_pipeline with SEMDIFF_WRITE_GOLDEN=1");
  fs::path root = fresh_dir("golden");
  run_pipeline(root);
  size_t n_checked = 0;
  for (const auto& e : fs::recursive_directory_iterator(kGolden)) {
    if (!e.is_regular_file()) continue;
    std::string rel = fs::relative(e.path(), kGolden).generic_string();
    CHECK_MESSAGE(util::read_file(root / rel) == util::read_file(e.path()),
                  "output differs from golden: ", rel);
    ++n_checked;
  }
  CHECK(n_checked >= 20);
}

TEST_CASE("ingest round-trip through the canonical form is lossless") {
  fs::path root = fresh_dir("roundtrip");
  stages::run_stage("ingest", {{"input", (kSample / "records.jsonl").string()},
                               {"out", (root / "once.jsonl").string()}});
  stages::run_stage("ingest", {{"input", (root / "once.jsonl").string()},
                               {"out", (root / "twice.jsonl").string()}});
  CHECK(util::read_file(root / "once.jsonl") == util::read_file(root / "twice.jsonl"));
}

TEST_CASE("missing upstream artifact names the prerequisite stage") {
  fs::path root = fresh_dir("prereq");
  try {
    stages::run_stage("fit", {{"profiles", (root / "profile").string()},
                              {"graph", (root / "graph").string()},
                              {"trend", (root / "trend.csv").string()},
                              {"out", (root / "fits.csv").string()}});
    FAIL("expected a prerequisite error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("profile") != std::string::npos);
  }
  try {
    stages::run_stage("trend",
                      {{"indexed", (root / "none.jsonl").string()}, {"out", (root / "t.csv").string()}});
    FAIL("expected a prerequisite error");
  } catch (const Error& e) {
    CHECK(std::string(e.what()).find("index") != std::string::npos);
  }
}

TEST_CASE("config defaults merge under explicit options") {
  fs::path root = fresh_dir("config");
  std::string cfg = (kSample / "run.toml").string();
  // run.toml caps year_max at 2010, so the 2015 record is dropped
  stages::run_stage("ingest", {{"config", cfg},
                               {"input", (kSample / "records.jsonl").string()},
                               {"out", (root / "capped.jsonl").string()}});
  json capped = json::parse(util::read_file(root / "capped.jsonl.stats.json"));
  CHECK(capped.at("n_filtered") == 1);
  // an explicit year_max overrides the config default
  stages::run_stage("ingest", {{"config", cfg},
                               {"input", (kSample / "records.jsonl").string()},
                               {"out", (root / "open.jsonl").string()},
                               {"year_max", 2020}});
  json open = json::parse(util::read_file(root / "open.jsonl.stats.json"));
  CHECK(open.at("n_filtered") == 0);
  CHECK(open.at("n_papers") == capped.at("n_papers").get<int>() + 1);
}

TEST_CASE("simulate requires a seed and obeys the config") {
  fs::path root = fresh_dir("simulate");
  CHECK_THROWS_AS(stages::run_stage("simulate", {{"out", (root / "s").string()}}), Error);
  stages::run_stage("simulate", {{"config", (kSample / "run.toml").string()},
                                 {"out", (root / "s").string()}});
  CHECK(fs::exists(root / "s" / "truth.csv"));
  util::CsvTable truth = util::read_csv(root / "s" / "truth.csv");
  CHECK(truth.rows.size() == 60);  // n_members from run.toml
}

TEST_CASE("hard dictionary conflicts abort indexing") {
  fs::path root = fresh_dir("conflict");
  util::write_file(root / "bad_topics.json",
                   R"([{"topic_id":"TA","lexeme":"markov chain"},
                       {"topic_id":"TB","lexeme":"markov chain"}])");
  stages::run_stage("ingest", {{"input", (kSample / "records.jsonl").string()},
                               {"out", (root / "records.jsonl").string()}});
  CHECK_THROWS_AS(stages::run_stage("index", {{"topics", (root / "bad_topics.json").string()},
                                              {"records", (root / "records.jsonl").string()},
                                              {"out", (root / "indexed.jsonl").string()}}),
                  Error);
}

TEST_CASE("unknown stage is rejected") {
  CHECK_FALSE(stages::is_known_stage("frobnicate"));
  CHECK(stages::is_known_stage("ingest"));
  CHECK_THROWS_AS(stages::run_stage("frobnicate", json::object()), Error);
}
