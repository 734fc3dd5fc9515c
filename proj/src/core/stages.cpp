#include "stages.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "config.hpp"
#include "corpus.hpp"
#include "dynamics.hpp"
#include "estimate.hpp"
#include "graph.hpp"
#include "lexicon.hpp"
#include "multiplex.hpp"
#include "profile.hpp"
#include "util.hpp"

namespace semdiff::stages {

namespace fs = std::filesystem;
using json = nlohmann::json;
using util::csv_row;
using util::fmt_double;

namespace {

std::string opt_str(const json& o, const std::string& key, const std::string& def = "") {
  return o.contains(key) ? o.at(key).get<std::string>() : def;
}

std::string require_str(const json& o, const std::string& key) {
  if (!o.contains(key)) throw Error("missing required option: " + key);
  return o.at(key).get<std::string>();
}

void require_input(const fs::path& p, const std::string& producing_stage) {
  if (!fs::exists(p))
    throw Error("missing input " + p.string() + "; run `semdiff " + producing_stage + "` first");
}

void write_manifest(const fs::path& where, const std::string& stage, const json& options,
                    const std::vector<fs::path>& inputs, const std::vector<std::string>& outputs) {
  json m;
  m["stage"] = stage;
  m["version"] = kVersion;
  m["config_hash"] = util::hex64(util::fnv1a64(options.dump()));
  json ins = json::object();
  for (const auto& p : inputs)
    ins[p.generic_string()] = util::hex64(util::fnv1a64_file(p));
  m["inputs"] = ins;
  m["outputs"] = outputs;
  fs::path target = fs::is_directory(where) ? where / "manifest.json"
                                            : fs::path(where.string() + ".manifest.json");
  util::write_file(target, m.dump(2) + "\n");
}

// ---------------------------------------------------------------- ingest

corpus::ParseFilters filters_from(const json& o) {
  corpus::ParseFilters f;
  if (o.contains("year_min")) f.year_min = o.at("year_min").get<int>();
  if (o.contains("year_max")) f.year_max = o.at("year_max").get<int>();
  if (f.year_min > f.year_max) throw Error("year_min exceeds year_max");
  if (o.contains("kinds") && !o.at("kinds").empty()) {
    std::vector<corpus::Kind> kinds;
    for (const auto& k : o.at("kinds")) kinds.push_back(corpus::kind_from_string(k.get<std::string>()));
    f.kinds = std::move(kinds);
  }
  return f;
}

corpus::XmlMapping xml_mapping_from(const json& o) {
  corpus::XmlMapping m;
  json x;
  if (o.contains("xml_map")) x = o.at("xml_map");
  else if (o.contains("xml_map_file")) x = json::parse(util::read_file(o.at("xml_map_file").get<std::string>()));
  else return m;
  if (x.contains("record_elements")) {
    m.record_elements.clear();
    for (const auto& [name, kind] : x.at("record_elements").items())
      m.record_elements[name] = corpus::kind_from_string(kind.get<std::string>());
  }
  if (x.contains("id_attribute")) m.id_attribute = x.at("id_attribute").get<std::string>();
  if (x.contains("title_element")) m.title_element = x.at("title_element").get<std::string>();
  if (x.contains("author_element")) m.author_element = x.at("author_element").get<std::string>();
  if (x.contains("year_element")) m.year_element = x.at("year_element").get<std::string>();
  if (x.contains("venue_elements")) {
    m.venue_elements.clear();
    for (const auto& v : x.at("venue_elements")) m.venue_elements.push_back(v.get<std::string>());
  }
  return m;
}

void stage_ingest(const json& o) {
  std::string input = require_str(o, "input");
  fs::path out = require_str(o, "out");
  std::string format = opt_str(o, "format", "jsonl");
  std::string layer = opt_str(o, "layer");
  corpus::ParseFilters filters = filters_from(o);

  std::ifstream file_in;
  std::istream* in = &std::cin;
  if (input != "-") {
    require_input(input, "ingest (external dataset)");
    file_in.open(input, std::ios::binary);
    in = &file_in;
  }

  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + out.string());

  corpus::StatsAccumulator acc;
  auto sink = [&](corpus::PublicationRecord&& rec) {
    acc.add(rec);
    corpus::write_canonical(os, rec);
  };

  corpus::ParseResult res;
  if (format == "jsonl") {
    res = corpus::parse_jsonl(*in, filters, layer, sink);
  } else if (format == "xml") {
    res = corpus::parse_xml(*in, xml_mapping_from(o), filters, layer, sink);
  } else {
    throw Error("unknown format: " + format);
  }
  os.close();

  corpus::CorpusStats stats = acc.finish();
  json sj;
  sj["n_papers"] = stats.n_papers;
  sj["n_distinct_authors"] = stats.n_distinct_authors;
  json hist = json::object();
  for (const auto& [year, count] : stats.year_histogram) hist[std::to_string(year)] = count;
  sj["year_histogram"] = hist;
  sj["n_malformed"] = res.n_malformed;
  sj["n_filtered"] = res.n_filtered;
  util::write_file(out.string() + ".stats.json", sj.dump(2) + "\n");

  std::vector<fs::path> inputs;
  if (input != "-") inputs.push_back(input);
  write_manifest(out, "ingest", o, inputs, {out.filename().string(), out.filename().string() + ".stats.json"});
}

// ----------------------------------------------------------------- shared loads

std::vector<corpus::PublicationRecord> load_records(const fs::path& path) {
  require_input(path, "ingest");
  std::ifstream in(path, std::ios::binary);
  std::vector<corpus::PublicationRecord> records;
  corpus::parse_jsonl(in, {}, "", [&](corpus::PublicationRecord&& r) { records.push_back(std::move(r)); });
  return records;
}

std::vector<lexicon::IndexedPaper> load_indexed(const fs::path& path) {
  require_input(path, "index");
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<lexicon::IndexedPaper> out;
  std::string line;
  while (std::getline(in, line)) {
    if (util::trim(line).empty()) continue;
    json j = json::parse(line);
    lexicon::IndexedPaper p;
    p.record_id = j.at("record_id").get<std::string>();
    p.year = j.at("year").get<int>();
    for (const auto& t : j.at("topic_ids")) p.topic_ids.insert(t.get<std::string>());
    out.push_back(std::move(p));
  }
  return out;
}

// ------------------------------------------------------------------ index

void stage_index(const json& o) {
  fs::path topics_path = require_str(o, "topics");
  fs::path records_path = require_str(o, "records");
  fs::path out = require_str(o, "out");
  require_input(topics_path, "index (topic dictionary is an input)");
  require_input(records_path, "ingest");

  lexicon::TopicSet topics = lexicon::TopicSet::load(topics_path.string(), opt_str(o, "stoplist"));
  auto conflicts = lexicon::validate_disjointness(topics);
  for (const auto& c : conflicts) {
    if (c.severity == lexicon::ConflictSeverity::Hard)
      throw Error("topic dictionary conflict: " + c.detail);
    std::cerr << "warning: " << c.detail << "\n";
  }

  if (out.has_parent_path()) fs::create_directories(out.parent_path());
  std::ofstream os(out, std::ios::binary | std::ios::trunc);
  if (!os) throw Error("cannot write " + out.string());

  std::vector<lexicon::IndexedPaper> indexed;
  {
    std::ifstream in(records_path, std::ios::binary);
    corpus::parse_jsonl(in, {}, "", [&](corpus::PublicationRecord&& rec) {
      lexicon::IndexedPaper p;
      p.record_id = rec.record_id;
      p.year = rec.year;
      p.topic_ids = lexicon::index_title(rec.title, topics);
      json j;
      j["record_id"] = p.record_id;
      j["year"] = p.year;
      j["topic_ids"] = p.topic_ids;
      os << j.dump() << '\n';
      indexed.push_back(std::move(p));
    });
  }
  os.close();

  lexicon::Coverage cov = lexicon::coverage(indexed);
  std::string cov_csv = csv_row({"year", "indexed_fraction"});
  for (const auto& [year, frac] : cov.per_year)
    cov_csv += csv_row({std::to_string(year), fmt_double(frac)});
  cov_csv += csv_row({"overall", fmt_double(cov.overall)});
  std::string cov_path = opt_str(o, "coverage_out", out.string() + ".coverage.csv");
  util::write_file(cov_path, cov_csv);

  write_manifest(out, "index", o, {topics_path, records_path},
                 {out.filename().string(), fs::path(cov_path).filename().string()});
}

// ------------------------------------------------------------------ trend

void stage_trend(const json& o) {
  fs::path indexed_path = require_str(o, "indexed");
  fs::path out = require_str(o, "out");
  auto indexed = load_indexed(indexed_path);
  lexicon::TrendSeries ts = lexicon::compute_trend(indexed);

  std::string csv = csv_row({"year", "topic_id", "count", "share"});
  for (const auto& [year, row] : ts.counts) {
    for (const auto& [topic, count] : row) {
      csv += csv_row({std::to_string(year), topic, std::to_string(count),
                      fmt_double(ts.share(topic, year))});
    }
  }
  util::write_file(out, csv);
  write_manifest(out, "trend", o, {indexed_path}, {out.filename().string()});
}

// ------------------------------------------------------------------ graph

void stage_graph(const json& o) {
  fs::path records_path = require_str(o, "records");
  fs::path outdir = require_str(o, "out");
  std::string layer = opt_str(o, "layer", "default");

  auto records = load_records(records_path);
  graph::BuildOptions opts;
  if (o.contains("max_coauthors")) opts.max_coauthors = o.at("max_coauthors").get<size_t>();
  graph::BuildResult built = graph::build_graph(records, layer, opts);
  graph::TreatabilityReport treat = graph::classify_treatable(built.registry);

  std::set<graph::MemberId> flagged;
  if (o.contains("given_names") && o.contains("family_names")) {
    auto load_names = [](const fs::path& p) {
      std::vector<std::string> names;
      std::ifstream in(p);
      if (!in) throw Error("cannot open name list: " + p.string());
      std::string line;
      while (std::getline(in, line)) {
        std::string t = util::trim(line);
        if (!t.empty()) names.push_back(t);
      }
      return names;
    };
    flagged = graph::flag_ambiguous(built.registry, load_names(require_str(o, "given_names")),
                                    load_names(require_str(o, "family_names")));
  }

  fs::create_directories(outdir);
  {
    std::string csv = csv_row({"member_id_a", "member_id_b", "first_year"});
    for (const auto& e : built.graph.edges_sorted())
      csv += csv_row({std::to_string(e.a), std::to_string(e.b), std::to_string(e.first_year)});
    util::write_file(outdir / "edges.csv", csv);
  }
  {
    std::string csv =
        csv_row({"member_id", "name", "first_year", "n_papers", "n_years", "treatable", "flagged"});
    for (graph::MemberId i = 0; i < built.registry.size(); ++i) {
      const auto& m = built.registry.info(i);
      csv += csv_row({std::to_string(i), m.name, std::to_string(m.first_year),
                      std::to_string(m.n_papers), std::to_string(treat.n_years[i]),
                      treat.treatable[i] ? "1" : "0", flagged.count(i) ? "1" : "0"});
    }
    util::write_file(outdir / "members.csv", csv);
  }
  {
    std::string csv = csv_row({"record_id", "member_id"});
    for (const auto& [record_id, ids] : built.paper_members)
      for (graph::MemberId id : ids) csv += csv_row({record_id, std::to_string(id)});
    util::write_file(outdir / "paper_members.csv", csv);
  }
  write_manifest(outdir, "graph", o, {records_path},
                 {"edges.csv", "members.csv", "paper_members.csv"});
}

struct LoadedGraph {
  graph::MemberRegistry registry{"?"};
  graph::TemporalLayerGraph graph_{"?"};
  std::vector<bool> treatable;
  std::vector<bool> flagged;
  std::vector<uint64_t> n_papers;
  std::vector<std::pair<std::string, std::vector<graph::MemberId>>> paper_members;
};

LoadedGraph load_graph_dir(const fs::path& dir) {
  require_input(dir / "members.csv", "graph");
  require_input(dir / "edges.csv", "graph");
  LoadedGraph lg;
  util::CsvTable members = util::read_csv(dir / "members.csv");
  size_t c_id = members.col("member_id"), c_name = members.col("name"),
         c_first = members.col("first_year"), c_np = members.col("n_papers"),
         c_ny = members.col("n_years"), c_tr = members.col("treatable"),
         c_fl = members.col("flagged");
  lg.treatable.resize(members.rows.size());
  lg.flagged.resize(members.rows.size());
  lg.n_papers.resize(members.rows.size());
  for (const auto& row : members.rows) {
    graph::MemberId id = lg.registry.intern(row[c_name]);
    if (id != graph::MemberId(std::stoul(row[c_id])))
      throw Error("members.csv ids are not dense/sorted");
    auto& info = lg.registry.info_mut(id);
    info.first_year = std::stoi(row[c_first]);
    info.n_papers = std::stoull(row[c_np]);
    // years are not round-tripped; keep the distinct count via a dummy set
    int ny = std::stoi(row[c_ny]);
    for (int y = 0; y < ny; ++y) info.years.insert(info.first_year + y);
    lg.treatable[id] = row[c_tr] == "1";
    lg.flagged[id] = row[c_fl] == "1";
    lg.n_papers[id] = info.n_papers;
    lg.graph_.ensure_node(id);
  }
  util::CsvTable edges = util::read_csv(dir / "edges.csv");
  size_t e_a = edges.col("member_id_a"), e_b = edges.col("member_id_b"),
         e_y = edges.col("first_year");
  for (const auto& row : edges.rows)
    lg.graph_.add_edge(graph::MemberId(std::stoul(row[e_a])), graph::MemberId(std::stoul(row[e_b])),
                       std::stoi(row[e_y]));
  lg.graph_.freeze();
  if (fs::exists(dir / "paper_members.csv")) {
    util::CsvTable pm = util::read_csv(dir / "paper_members.csv");
    size_t p_r = pm.col("record_id"), p_m = pm.col("member_id");
    for (const auto& row : pm.rows) {
      if (lg.paper_members.empty() || lg.paper_members.back().first != row[p_r])
        lg.paper_members.emplace_back(row[p_r], std::vector<graph::MemberId>{});
      lg.paper_members.back().second.push_back(graph::MemberId(std::stoul(row[p_m])));
    }
  }
  return lg;
}

// ---------------------------------------------------------------- profile

void stage_profile(const json& o) {
  fs::path indexed_path = require_str(o, "indexed");
  fs::path graph_dir = require_str(o, "graph");
  fs::path outdir = require_str(o, "out");
  std::string mode_s = opt_str(o, "mode", "cumulative");
  int window = o.contains("window") ? o.at("window").get<int>() : 0;

  auto indexed = load_indexed(indexed_path);
  LoadedGraph lg = load_graph_dir(graph_dir);
  if (lg.paper_members.empty())
    throw Error("missing input " + (graph_dir / "paper_members.csv").string() +
                "; run `semdiff graph` first");

  profile::Mode mode = mode_s == "windowed" ? profile::Mode::Windowed : profile::Mode::Cumulative;
  graph::BuildResult built{std::move(lg.registry), std::move(lg.graph_), 0, {}};
  built.paper_members = std::move(lg.paper_members);
  profile::ProfileSeries ps = profile::build_profiles(indexed, built, mode, window);

  graph::TreatabilityReport treat;
  treat.treatable = lg.treatable;
  profile::SemanticTreatabilityReport sem =
      profile::classify_semantically_treatable(ps, treat, built.registry.size());

  fs::create_directories(outdir);
  {
    std::string csv = csv_row({"member_id", "year", "topic_id", "value"});
    for (const auto& [id, mp] : ps.members) {
      for (size_t yi = 0; yi < mp.years.size(); ++yi) {
        for (const auto& [topic, v] : mp.vecs[yi])
          csv += csv_row({std::to_string(id), std::to_string(mp.years[yi]), topic, fmt_double(v)});
      }
    }
    util::write_file(outdir / "profiles.csv", csv);
  }
  {
    json meta;
    meta["mode"] = mode_s;
    meta["window"] = window;
    util::write_file(outdir / "meta.json", meta.dump(2) + "\n");
  }
  {
    std::string csv =
        csv_row({"member_id", "semantically_treatable", "n_profile_years", "n_indexed_papers"});
    for (size_t i = 0; i < sem.semantically_treatable.size(); ++i)
      csv += csv_row({std::to_string(i), sem.semantically_treatable[i] ? "1" : "0",
                      std::to_string(sem.n_profile_years[i]), std::to_string(sem.n_indexed_papers[i])});
    util::write_file(outdir / "treatability.csv", csv);
  }
  write_manifest(outdir, "profile", o, {indexed_path, graph_dir / "members.csv"},
                 {"profiles.csv", "meta.json", "treatability.csv"});
}

profile::ProfileSeries load_profiles_dir(const fs::path& dir) {
  require_input(dir / "profiles.csv", "profile");
  require_input(dir / "meta.json", "profile");
  profile::ProfileSeries ps;
  json meta = json::parse(util::read_file(dir / "meta.json"));
  ps.mode = meta.value("mode", "cumulative") == "windowed" ? profile::Mode::Windowed
                                                           : profile::Mode::Cumulative;
  ps.window = meta.value("window", 0);
  util::CsvTable t = util::read_csv(dir / "profiles.csv");
  size_t c_m = t.col("member_id"), c_y = t.col("year"), c_t = t.col("topic_id"),
         c_v = t.col("value");
  for (const auto& row : t.rows) {
    graph::MemberId id = graph::MemberId(std::stoul(row[c_m]));
    int year = std::stoi(row[c_y]);
    auto& mp = ps.members[id];
    if (mp.years.empty() || mp.years.back() != year) {
      mp.years.push_back(year);
      mp.vecs.emplace_back();
    }
    mp.vecs.back()[row[c_t]] = std::stod(row[c_v]);
  }
  return ps;
}

lexicon::TrendSeries load_trend_csv(const fs::path& path) {
  require_input(path, "trend");
  lexicon::TrendSeries ts;
  util::CsvTable t = util::read_csv(path);
  size_t c_y = t.col("year"), c_t = t.col("topic_id"), c_c = t.col("count"),
         c_s = t.col("share");
  for (const auto& row : t.rows) {
    int year = std::stoi(row[c_y]);
    ts.counts[year][row[c_t]] = std::stoull(row[c_c]);
    ts.trend[year][row[c_t]] = std::stod(row[c_s]);
  }
  return ts;
}

// -------------------------------------------------------------------- fit

void stage_fit(const json& o) {
  fs::path profiles_dir = require_str(o, "profiles");
  fs::path graph_dir = require_str(o, "graph");
  fs::path trend_path = require_str(o, "trend");
  fs::path out = require_str(o, "out");

  profile::ProfileSeries ps = load_profiles_dir(profiles_dir);
  LoadedGraph lg = load_graph_dir(graph_dir);
  lexicon::TrendSeries ts = load_trend_csv(trend_path);

  estimate::TransitionOptions topts;
  if (o.contains("trend_top_k")) {
    long k = o.at("trend_top_k").get<long>();
    if (k < 0) topts.trend_top_k = std::nullopt;
    else topts.trend_top_k = size_t(k);
  }

  int at_year = std::numeric_limits<int>::min();
  for (const auto& [id, mp] : ps.members)
    if (!mp.years.empty()) at_year = std::max(at_year, mp.years.back());
  if (o.contains("at_year")) at_year = o.at("at_year").get<int>();

  std::vector<estimate::MemberFit> fits;
  std::vector<estimate::ModelComparison> comparisons;
  for (const auto& [id, mp] : ps.members) {
    if (id >= lg.treatable.size() || !lg.treatable[id] || mp.years.size() < 2) continue;
    auto samples = estimate::build_transitions(ps, lg.graph_, ts, id, topts);
    estimate::MemberFit fit = estimate::fit_member(samples);
    fit.member_id = id;
    fit.success = lg.n_papers[id];
    fit.flagged_ambiguous = lg.flagged[id];
    comparisons.push_back(estimate::model_comparison(fit));
    fits.push_back(fit);
  }
  estimate::compute_authority(fits, lg.graph_, at_year);
  estimate::SuccessReport succ = estimate::success_report(fits);

  std::string csv = csv_row({"member_id", "name", "x_i_raw", "x_is_raw", "x_i_proj", "x_is_proj",
                             "chi2_full", "chi2_proj", "chi2_null", "n_samples", "dof", "status",
                             "neighbor_preferred", "authority", "normalized_authority",
                             "n_coauthors", "success", "flagged"});
  for (size_t i = 0; i < fits.size(); ++i) {
    const auto& f = fits[i];
    const auto& mc = comparisons[i];
    csv += csv_row({std::to_string(f.member_id), lg.registry.info(f.member_id).name,
                    fmt_double(f.x_neighbor_raw), fmt_double(f.x_trend_raw),
                    fmt_double(f.x_neighbor_proj), fmt_double(f.x_trend_proj),
                    fmt_double(f.chi2_full), fmt_double(f.chi2_proj), fmt_double(f.chi2_null),
                    std::to_string(f.n_samples), std::to_string(f.dof),
                    estimate::fit_status_name(f.status),
                    mc.available ? (mc.neighbor_term_preferred ? "1" : "0") : "",
                    fmt_double(f.authority), fmt_double(f.normalized_authority),
                    std::to_string(lg.graph_.degree(f.member_id, at_year)),
                    std::to_string(f.success), f.flagged_ambiguous ? "1" : "0"});
  }
  util::write_file(out, csv);

  // 2-D histogram over the projected estimates
  double bin = o.contains("hist_bin") ? o.at("hist_bin").get<double>() : 0.05;
  std::map<std::pair<long, long>, uint64_t> hist;
  for (const auto& f : fits) {
    if (f.status == estimate::FitStatus::InsufficientData) continue;
    ++hist[{long(std::floor(f.x_neighbor_proj / bin)), long(std::floor(f.x_trend_proj / bin))}];
  }
  std::string hist_csv = csv_row({"x_i_bin", "x_is_bin", "count"});
  for (const auto& [key, count] : hist)
    hist_csv += csv_row({fmt_double(double(key.first) * bin), fmt_double(double(key.second) * bin),
                         std::to_string(count)});
  fs::path hist_path = out.parent_path() / (out.stem().string() + "_hist.csv");
  util::write_file(hist_path, hist_csv);

  std::string corr_csv = csv_row({"pair", "pearson_r", "degenerate"});
  corr_csv += csv_row({"authority_vs_success", fmt_double(succ.authority_vs_success.r),
                       succ.authority_vs_success.degenerate ? "1" : "0"});
  corr_csv += csv_row({"trend_susc_vs_success", fmt_double(succ.trend_susc_vs_success.r),
                       succ.trend_susc_vs_success.degenerate ? "1" : "0"});
  fs::path corr_path = out.parent_path() / (out.stem().string() + "_correlations.csv");
  util::write_file(corr_path, corr_csv);

  write_manifest(out, "fit", o,
                 {profiles_dir / "profiles.csv", graph_dir / "members.csv",
                  graph_dir / "edges.csv", trend_path},
                 {out.filename().string(), hist_path.filename().string(),
                  corr_path.filename().string()});
}

// --------------------------------------------------------------- simulate

void stage_simulate(const json& o) {
  fs::path outdir = require_str(o, "out");
  const json sim = o.contains("simulation") ? o.at("simulation") : o;

  dynamics::SyntheticConfig cfg;
  if (!sim.contains("seed")) throw Error("simulation requires an explicit seed");
  cfg.seed = sim.at("seed").get<uint64_t>();
  if (sim.contains("n_members")) cfg.n_members = sim.at("n_members").get<uint32_t>();
  if (sim.contains("n_topics")) cfg.n_topics = sim.at("n_topics").get<uint32_t>();
  if (sim.contains("mean_degree")) cfg.mean_degree = sim.at("mean_degree").get<double>();
  if (sim.contains("n_steps")) cfg.n_steps = sim.at("n_steps").get<uint32_t>();
  if (sim.contains("observe_every")) cfg.observe_every = sim.at("observe_every").get<uint32_t>();
  if (sim.contains("missing_prob")) cfg.missing_prob = sim.at("missing_prob").get<double>();
  if (sim.contains("noise_sigma")) cfg.noise_sigma = sim.at("noise_sigma").get<double>();
  if (sim.contains("graph_model"))
    cfg.graph_model = sim.at("graph_model").get<std::string>() == "star_core"
                          ? dynamics::GraphModel::StarCore
                          : dynamics::GraphModel::ErdosRenyi;
  if (sim.contains("trend_process")) {
    std::string p = sim.at("trend_process").get<std::string>();
    cfg.trend_process = p == "random_walk" ? dynamics::TrendProcess::RandomWalk
                        : p == "drift"     ? dynamics::TrendProcess::DriftMixture
                                           : dynamics::TrendProcess::Static;
  }
  if (sim.contains("x_neighbor_lo")) cfg.x_neighbor.lo = sim.at("x_neighbor_lo").get<double>();
  if (sim.contains("x_neighbor_hi")) cfg.x_neighbor.hi = sim.at("x_neighbor_hi").get<double>();
  if (sim.contains("x_trend_lo")) cfg.x_trend.lo = sim.at("x_trend_lo").get<double>();
  if (sim.contains("x_trend_hi")) cfg.x_trend.hi = sim.at("x_trend_hi").get<double>();

  dynamics::SyntheticRun run = dynamics::generate_synthetic(cfg);
  fs::create_directories(outdir);
  {
    std::string csv = csv_row({"time", "member_id", "topic_id", "value"});
    for (size_t s = 0; s < run.trajectory.snapshots.size(); ++s) {
      const auto& st = run.trajectory.snapshots[s];
      for (size_t i = 0; i < st.profiles.size(); ++i)
        for (size_t k = 0; k < st.profiles[i].size(); ++k)
          csv += csv_row({std::to_string(s), std::to_string(i), std::to_string(k),
                          fmt_double(st.profiles[i][k])});
    }
    util::write_file(outdir / "trajectory.csv", csv);
  }
  {
    std::string csv = csv_row({"member_id", "x_i", "x_is"});
    for (size_t i = 0; i < run.truth.size(); ++i)
      csv += csv_row({std::to_string(i), fmt_double(run.truth.neighbor[i]),
                      fmt_double(run.truth.trend[i])});
    util::write_file(outdir / "truth.csv", csv);
  }
  {
    std::string csv = csv_row({"step", "member_id", "topic_id", "value"});
    std::string tcsv = csv_row({"step", "topic_id", "value"});
    for (const auto& obs : run.observed) {
      for (size_t i = 0; i < obs.profiles.size(); ++i) {
        if (!obs.profiles[i]) continue;
        for (size_t k = 0; k < obs.profiles[i]->size(); ++k)
          csv += csv_row({std::to_string(obs.step), std::to_string(i), std::to_string(k),
                          fmt_double((*obs.profiles[i])[k])});
      }
      for (size_t k = 0; k < obs.trend.size(); ++k)
        tcsv += csv_row({std::to_string(obs.step), std::to_string(k), fmt_double(obs.trend[k])});
    }
    util::write_file(outdir / "observations.csv", csv);
    util::write_file(outdir / "obs_trend.csv", tcsv);
  }
  {
    std::string csv = csv_row({"member_id_a", "member_id_b"});
    for (size_t i = 0; i < run.neighbors.size(); ++i)
      for (uint32_t j : run.neighbors[i])
        if (j > i) csv += csv_row({std::to_string(i), std::to_string(j)});
    util::write_file(outdir / "graph.csv", csv);
  }
  write_manifest(outdir, "simulate", o, {},
                 {"trajectory.csv", "truth.csv", "observations.csv", "obs_trend.csv", "graph.csv"});
}

// ---------------------------------------------------------------- compare

struct LoadedFits {
  std::vector<estimate::MemberFit> fits;
  std::vector<std::string> names;  // parallel to fits
};

LoadedFits load_fits_csv(const fs::path& path) {
  require_input(path, "fit");
  LoadedFits lf;
  util::CsvTable t = util::read_csv(path);
  size_t c_id = t.col("member_id"), c_name = t.col("name"), c_xn = t.col("x_i_proj"),
         c_xt = t.col("x_is_proj"), c_xnr = t.col("x_i_raw"), c_xtr = t.col("x_is_raw"),
         c_auth = t.col("authority"), c_status = t.col("status"), c_succ = t.col("success"),
         c_fl = t.col("flagged");
  for (const auto& row : t.rows) {
    estimate::MemberFit f;
    f.member_id = graph::MemberId(std::stoul(row[c_id]));
    f.x_neighbor_raw = std::stod(row[c_xnr]);
    f.x_trend_raw = std::stod(row[c_xtr]);
    f.x_neighbor_proj = std::stod(row[c_xn]);
    f.x_trend_proj = std::stod(row[c_xt]);
    f.authority = std::stod(row[c_auth]);
    f.success = std::stoull(row[c_succ]);
    f.flagged_ambiguous = row[c_fl] == "1";
    const std::string& st = row[c_status];
    f.status = st == "interior"                  ? estimate::FitStatus::Interior
               : st == "boundary"                ? estimate::FitStatus::Boundary
               : st == "degenerate_no_neighbors" ? estimate::FitStatus::DegenerateNoNeighbors
               : st == "degenerate_singular"     ? estimate::FitStatus::DegenerateSingular
                                                 : estimate::FitStatus::InsufficientData;
    lf.fits.push_back(f);
    lf.names.push_back(row[c_name]);
  }
  return lf;
}

multiplex::LayerAlignment align_from_fits(const LoadedFits& a, const LoadedFits& b) {
  multiplex::LayerAlignment al;
  al.layer_a = "a";
  al.layer_b = "b";
  std::unordered_map<std::string, size_t> b_by_name;
  for (size_t i = 0; i < b.names.size(); ++i) b_by_name.emplace(b.names[i], i);
  for (size_t i = 0; i < a.names.size(); ++i) {
    auto it = b_by_name.find(a.names[i]);
    if (it == b_by_name.end()) continue;
    multiplex::AlignedPair p;
    p.in_a = a.fits[i].member_id;
    p.in_b = b.fits[it->second].member_id;
    p.name = a.names[i];
    p.flagged = a.fits[i].flagged_ambiguous || b.fits[it->second].flagged_ambiguous;
    al.pairs.push_back(std::move(p));
  }
  return al;
}

void write_comparison(const multiplex::ComparisonReport& rep, const fs::path& outdir) {
  fs::create_directories(outdir);
  auto corr_field = [](const estimate::CorrelationResult& c) {
    return c.degenerate ? std::string("") : fmt_double(c.r);
  };
  std::string csv = csv_row({"community", "avg_neighbor_susc", "avg_trend_susc", "avg_authority",
                             "n_shared", "whole_avg_neighbor_susc", "whole_avg_trend_susc",
                             "whole_avg_authority", "n_whole"});
  csv += csv_row({"a", fmt_double(rep.shared_a.neighbor_susc), fmt_double(rep.shared_a.trend_susc),
                  fmt_double(rep.shared_a.authority), std::to_string(rep.shared_a.n),
                  fmt_double(rep.whole_a.neighbor_susc), fmt_double(rep.whole_a.trend_susc),
                  fmt_double(rep.whole_a.authority), std::to_string(rep.whole_a.n)});
  csv += csv_row({"b", fmt_double(rep.shared_b.neighbor_susc), fmt_double(rep.shared_b.trend_susc),
                  fmt_double(rep.shared_b.authority), std::to_string(rep.shared_b.n),
                  fmt_double(rep.whole_b.neighbor_susc), fmt_double(rep.whole_b.trend_susc),
                  fmt_double(rep.whole_b.authority), std::to_string(rep.whole_b.n)});
  if (rep.correlations_available) {
    csv += csv_row({"correlation", corr_field(rep.corr_neighbor), corr_field(rep.corr_trend),
                    corr_field(rep.corr_authority), "", "", "", "", ""});
  } else {
    csv += csv_row({"correlation", "unavailable", "unavailable", "unavailable", "", "", "", "", ""});
  }
  util::write_file(outdir / "report.csv", csv);

  json j;
  j["shared"] = {{"a",
                  {{"neighbor_susc", rep.shared_a.neighbor_susc},
                   {"trend_susc", rep.shared_a.trend_susc},
                   {"authority", rep.shared_a.authority},
                   {"n", rep.shared_a.n}}},
                 {"b",
                  {{"neighbor_susc", rep.shared_b.neighbor_susc},
                   {"trend_susc", rep.shared_b.trend_susc},
                   {"authority", rep.shared_b.authority},
                   {"n", rep.shared_b.n}}}};
  j["whole"] = {{"a",
                 {{"neighbor_susc", rep.whole_a.neighbor_susc},
                  {"trend_susc", rep.whole_a.trend_susc},
                  {"authority", rep.whole_a.authority},
                  {"n", rep.whole_a.n}}},
                {"b",
                 {{"neighbor_susc", rep.whole_b.neighbor_susc},
                  {"trend_susc", rep.whole_b.trend_susc},
                  {"authority", rep.whole_b.authority},
                  {"n", rep.whole_b.n}}}};
  if (rep.correlations_available) {
    j["correlations"] = {{"neighbor_susc", rep.corr_neighbor.r},
                         {"trend_susc", rep.corr_trend.r},
                         {"authority", rep.corr_authority.r}};
  } else {
    j["correlations"] = nullptr;
  }
  util::write_file(outdir / "report.json", j.dump(2) + "\n");

  auto write_scatter = [&](const std::string& name, const std::vector<multiplex::ScatterRow>& rows) {
    std::string s = csv_row({"name", "value_in_a", "value_in_b", "dominant_layer", "flagged"});
    for (const auto& r : rows)
      s += csv_row({r.name, fmt_double(r.value_a), fmt_double(r.value_b), r.dominant,
                    r.flagged ? "1" : "0"});
    util::write_file(outdir / name, s);
  };
  write_scatter("scatter_neighbor_susc.csv", rep.scatter_neighbor);
  write_scatter("scatter_trend_susc.csv", rep.scatter_trend);
  write_scatter("scatter_authority.csv", rep.scatter_authority);
}

void stage_compare(const json& o) {
  fs::path fits_a = require_str(o, "fits_a");
  fs::path fits_b = require_str(o, "fits_b");
  fs::path outdir = require_str(o, "out");
  LoadedFits a = load_fits_csv(fits_a);
  LoadedFits b = load_fits_csv(fits_b);
  multiplex::LayerAlignment al = align_from_fits(a, b);
  multiplex::ComparisonReport rep = multiplex::compare_communities(a.fits, b.fits, al);
  write_comparison(rep, outdir);
  write_manifest(outdir, "compare", o, {fits_a, fits_b},
                 {"report.csv", "report.json", "scatter_neighbor_susc.csv",
                  "scatter_trend_susc.csv", "scatter_authority.csv"});
}

// ----------------------------------------------------------------- report

void stage_report(const json& o) {
  fs::path fits_a_path = require_str(o, "fits_a");
  fs::path outdir = require_str(o, "out");
  fs::create_directories(outdir);
  std::vector<std::string> outputs;

  auto emit_layer = [&](const LoadedFits& lf, const std::string& tag, const fs::path& fits_path) {
    // susceptibility histogram
    double bin = o.contains("hist_bin") ? o.at("hist_bin").get<double>() : 0.05;
    std::map<std::pair<long, long>, uint64_t> hist;
    for (const auto& f : lf.fits) {
      if (f.status == estimate::FitStatus::InsufficientData) continue;
      ++hist[{long(std::floor(f.x_neighbor_proj / bin)), long(std::floor(f.x_trend_proj / bin))}];
    }
    std::string hcsv = csv_row({"x_i_bin", "x_is_bin", "count"});
    for (const auto& [key, count] : hist)
      hcsv += csv_row({fmt_double(double(key.first) * bin), fmt_double(double(key.second) * bin),
                       std::to_string(count)});
    util::write_file(outdir / ("susceptibility_hist_" + tag + ".csv"), hcsv);
    outputs.push_back("susceptibility_hist_" + tag + ".csv");

    // authority vs success scatter, with ambiguity markers
    util::CsvTable t = util::read_csv(fits_path);
    size_t c_name = t.col("name"), c_auth = t.col("authority"), c_succ = t.col("success"),
           c_xt = t.col("x_is_proj"), c_fl = t.col("flagged"), c_deg = t.col("n_coauthors"),
           c_status = t.col("status");
    std::string s1 = csv_row({"name", "authority", "success", "x_is", "flagged"});
    std::string s2 = csv_row({"name", "n_coauthors", "authority", "flagged"});
    for (const auto& row : t.rows) {
      if (row[c_status] == "insufficient_data") continue;
      s1 += csv_row({row[c_name], row[c_auth], row[c_succ], row[c_xt], row[c_fl]});
      s2 += csv_row({row[c_name], row[c_deg], row[c_auth], row[c_fl]});
    }
    util::write_file(outdir / ("authority_vs_success_" + tag + ".csv"), s1);
    util::write_file(outdir / ("coauthors_vs_authority_" + tag + ".csv"), s2);
    outputs.push_back("authority_vs_success_" + tag + ".csv");
    outputs.push_back("coauthors_vs_authority_" + tag + ".csv");

    // top members by authority
    std::vector<size_t> order(lf.fits.size());
    for (size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](size_t x, size_t y) {
      return lf.fits[x].authority > lf.fits[y].authority;
    });
    std::string topc = csv_row({"name", "x_i", "x_is", "authority", "success", "flagged"});
    size_t top_n = o.contains("top_n") ? o.at("top_n").get<size_t>() : 20;
    for (size_t i = 0; i < order.size() && i < top_n; ++i) {
      const auto& f = lf.fits[order[i]];
      topc += csv_row({lf.names[order[i]], fmt_double(f.x_neighbor_raw), fmt_double(f.x_trend_raw),
                       fmt_double(f.authority), std::to_string(f.success),
                       f.flagged_ambiguous ? "1" : "0"});
    }
    util::write_file(outdir / ("top_authorities_" + tag + ".csv"), topc);
    outputs.push_back("top_authorities_" + tag + ".csv");
  };

  LoadedFits a = load_fits_csv(fits_a_path);
  emit_layer(a, "a", fits_a_path);
  std::vector<fs::path> inputs{fits_a_path};
  if (o.contains("fits_b")) {
    fs::path fits_b_path = o.at("fits_b").get<std::string>();
    LoadedFits b = load_fits_csv(fits_b_path);
    emit_layer(b, "b", fits_b_path);
    multiplex::ComparisonReport rep =
        multiplex::compare_communities(a.fits, b.fits, align_from_fits(a, b));
    write_comparison(rep, outdir / "comparison");
    outputs.push_back("comparison/report.csv");
    inputs.push_back(fits_b_path);
  }
  write_manifest(outdir, "report", o, inputs, outputs);
}

}  // namespace

bool is_known_stage(const std::string& stage) {
  static const char* names[] = {"ingest", "index",    "trend",   "graph",  "profile",
                                "fit",    "simulate", "compare", "report"};
  for (const char* n : names)
    if (stage == n) return true;
  return false;
}

void run_stage(const std::string& stage, const json& options) {
  json o = options;
  if (o.contains("config")) {
    json cfg = config::load_toml_file(o.at("config").get<std::string>());
    json defaults = cfg.contains(stage) ? cfg.at(stage) : json::object();
    // top-level scalars (seed, year window, paths) apply to every stage
    for (const auto& [k, v] : cfg.items())
      if (!v.is_object()) defaults[k] = v;
    o.erase("config");
    o = config::merge(defaults, o);
  }
  if (stage == "ingest") stage_ingest(o);
  else if (stage == "index") stage_index(o);
  else if (stage == "trend") stage_trend(o);
  else if (stage == "graph") stage_graph(o);
  else if (stage == "profile") stage_profile(o);
  else if (stage == "fit") stage_fit(o);
  else if (stage == "simulate") stage_simulate(o);
  else if (stage == "compare") stage_compare(o);
  else if (stage == "report") stage_report(o);
  else throw Error("unknown stage: " + stage);
}

}  // namespace semdiff::stages
