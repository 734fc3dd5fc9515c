// semdiff command line front end. Builds stage options from flags and hands
// them to the shared library through the C API.

#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "semdiff/semdiff.h"

using json = nlohmann::json;

namespace {

struct StageCmd {
  std::string name;
  json options = json::object();
};

int run(const StageCmd& cmd) {
  semdiff_ctx* ctx = semdiff_ctx_new();
  if (!ctx) {
    std::fprintf(stderr, "semdiff: out of memory\n");
    return 1;
  }
  semdiff_status rc = semdiff_run_stage(ctx, cmd.name.c_str(), cmd.options.dump().c_str());
  if (rc != SEMDIFF_OK) {
    std::fprintf(stderr, "semdiff %s: %s\n", cmd.name.c_str(), semdiff_last_error(ctx));
  }
  semdiff_ctx_free(ctx);
  return rc == SEMDIFF_OK ? 0 : 1;
}

// Parses "A:B" into year_min/year_max options.
void apply_years(StageCmd& cmd, const std::string& years) {
  if (years.empty()) return;
  auto colon = years.find(':');
  if (colon == std::string::npos)
    throw CLI::ValidationError("--years", "expected A:B");
  cmd.options["year_min"] = std::stoi(years.substr(0, colon));
  cmd.options["year_max"] = std::stoi(years.substr(colon + 1));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string("semdiff ") + semdiff_version() +
               " — interest diffusion on co-authorship networks"};
  app.require_subcommand(1);

  std::vector<StageCmd> cmds(9);
  std::string years, kinds, config;

  auto add_config = [&](CLI::App* sub, StageCmd& cmd) {
    sub->add_option_function<std::string>(
        "--config", [&cmd](const std::string& p) { cmd.options["config"] = p; },
        "TOML run config supplying stage defaults");
  };
  auto opt = [](StageCmd& cmd, const std::string& key) {
    return [&cmd, key](const std::string& v) { cmd.options[key] = v; };
  };

  // ingest
  {
    StageCmd& c = cmds[0];
    c.name = "ingest";
    auto* sub = app.add_subcommand("ingest", "Parse bibliographic records into canonical JSONL");
    add_config(sub, c);
    sub->add_option_function<std::string>("--input,-i", opt(c, "input"),
                                          "source file, or - for stdin");
    sub->add_option_function<std::string>("--format", opt(c, "format"), "jsonl or xml");
    sub->add_option("--years", years, "observation window A:B");
    sub->add_option("--kinds", kinds, "comma separated paper kinds to keep");
    sub->add_option_function<std::string>("--layer", opt(c, "layer"), "layer tag (e.g. dblp, aps)");
    sub->add_option_function<std::string>("--xml-map", opt(c, "xml_map_file"),
                                          "JSON element/attribute mapping for XML sources");
    sub->add_option_function<std::string>("-o,--out", opt(c, "out"), "output records.jsonl");
  }
  // index
  {
    StageCmd& c = cmds[1];
    c.name = "index";
    auto* sub = app.add_subcommand("index", "Index titles against the topic dictionary");
    add_config(sub, c);
    sub->add_option_function<std::string>("--topics", opt(c, "topics"), "topic dictionary JSON");
    sub->add_option_function<std::string>("--stoplist", opt(c, "stoplist"), "stoplist file");
    sub->add_option_function<std::string>("--records", opt(c, "records"), "records.jsonl");
    sub->add_option_function<std::string>("-o,--out", opt(c, "out"), "output indexed.jsonl");
  }
  // trend
  {
    StageCmd& c = cmds[2];
    c.name = "trend";
    auto* sub = app.add_subcommand("trend", "Compute per-year topic counts and shares");
    add_config(sub, c);
    sub->add_option_function<std::string>("--indexed", opt(c, "indexed"), "indexed.jsonl");
    sub->add_option_function<std::string>("-o,--out", opt(c, "out"), "output trend.csv");
  }
  // graph
  {
    StageCmd& c = cmds[3];
    c.name = "graph";
    auto* sub = app.add_subcommand("graph", "Build the cumulative co-authorship graph");
    add_config(sub, c);
    sub->add_option_function<std::string>("--records", opt(c, "records"), "records.jsonl");
    sub->add_option_function<std::string>("--layer", opt(c, "layer"), "layer tag");
    sub->add_option_function<long>(
        "--max-coauthors", [&c](long v) { c.options["max_coauthors"] = v; },
        "exclude papers with more coauthors from edge creation");
    sub->add_option_function<std::string>("--given-names", opt(c, "given_names"),
                                          "frequent given-name list (ambiguity flags)");
    sub->add_option_function<std::string>("--family-names", opt(c, "family_names"),
                                          "frequent family-name list");
    sub->add_option_function<std::string>("-o,--out", opt(c, "out"), "output directory");
  }
  // profile
  {
    StageCmd& c = cmds[4];
    c.name = "profile";
    auto* sub = app.add_subcommand("profile", "Compute per-member semantic profiles");
    add_config(sub, c);
    sub->add_option_function<std::string>("--indexed", opt(c, "indexed"), "indexed.jsonl");
    sub->add_option_function<std::string>("--graph", opt(c, "graph"), "graph directory");
    sub->add_option_function<std::string>("--mode", opt(c, "mode"), "cumulative or windowed");
    sub->add_option_function<long>(
        "--window", [&c](long v) { c.options["window"] = v; }, "window width in years");
    sub->add_option_function<std::string>("-o,--out", opt(c, "out"), "output directory");
  }
  // fit
  {
    StageCmd& c = cmds[5];
    c.name = "fit";
    auto* sub = app.add_subcommand("fit", "Fit per-member susceptibilities and authorities");
    add_config(sub, c);
    sub->add_option_function<std::string>("--profiles", opt(c, "profiles"), "profiles directory");
    sub->add_option_function<std::string>("--graph", opt(c, "graph"), "graph directory");
    sub->add_option_function<std::string>("--trend", opt(c, "trend"), "trend.csv");
    sub->add_option_function<long>(
        "--trend-top-k", [&c](long v) { c.options["trend_top_k"] = v; },
        "trend topics admitted per transition (-1 = all)");
    sub->add_option_function<long>(
        "--at-year", [&c](long v) { c.options["at_year"] = v; },
        "neighborhood year for authority (default: last observation)");
    sub->add_option_function<double>(
        "--hist-bin", [&c](double v) { c.options["hist_bin"] = v; }, "histogram bin width");
    sub->add_option_function<std::string>("-o,--out", opt(c, "out"), "output fits.csv");
  }
  // simulate
  {
    StageCmd& c = cmds[6];
    c.name = "simulate";
    auto* sub = app.add_subcommand("simulate", "Run a seeded synthetic diffusion experiment");
    add_config(sub, c);
    sub->add_option_function<std::string>("-o,--out", opt(c, "out"), "output directory");
  }
  // compare
  {
    StageCmd& c = cmds[7];
    c.name = "compare";
    auto* sub = app.add_subcommand("compare", "Compare two fitted communities");
    add_config(sub, c);
    sub->add_option_function<std::string>("--fits-a", opt(c, "fits_a"), "first layer fits.csv");
    sub->add_option_function<std::string>("--fits-b", opt(c, "fits_b"), "second layer fits.csv");
    sub->add_option_function<std::string>("-o,--out", opt(c, "out"), "output directory");
  }
  // report
  {
    StageCmd& c = cmds[8];
    c.name = "report";
    auto* sub = app.add_subcommand("report", "Bundle plot-ready data for one or two layers");
    add_config(sub, c);
    sub->add_option_function<std::string>("--fits-a", opt(c, "fits_a"), "first layer fits.csv");
    sub->add_option_function<std::string>("--fits-b", opt(c, "fits_b"), "second layer fits.csv");
    sub->add_option_function<double>(
        "--hist-bin", [&c](double v) { c.options["hist_bin"] = v; }, "histogram bin width");
    sub->add_option_function<std::string>("-o,--out", opt(c, "out"), "output directory");
  }

  CLI11_PARSE(app, argc, argv);

  for (auto& c : cmds) {
    if (app.got_subcommand(c.name)) {
      if (c.name == "ingest") {
        apply_years(c, years);
        if (!kinds.empty()) {
          json arr = json::array();
          std::string cur;
          for (char ch : kinds + ",") {
            if (ch == ',') {
              if (!cur.empty()) arr.push_back(cur);
              cur.clear();
            } else {
              cur += ch;
            }
          }
          c.options["kinds"] = arr;
        }
      }
      return run(c);
    }
  }
  return 1;
}
