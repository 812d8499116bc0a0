#include "slangvar/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "slangvar/error.hpp"
#include "slangvar/eval.hpp"
#include "slangvar/report.hpp"
#include "slangvar/synthetic.hpp"

namespace slangvar {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string read_file(const fs::path& path, const char* what) {
  std::ifstream file(path, std::ios::binary);
  if (!file) {
    throw config_error(std::string(what) + " file not found: " + path.string());
  }
  std::ostringstream buffer;
  buffer << file.rdbuf();
  return buffer.str();
}

void write_output(const std::string& bytes, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << bytes;
    return;
  }
  std::ofstream file(out_path, std::ios::binary);
  if (!file) throw data_error("cannot write output file: " + out_path);
  file << bytes;
  if (!file.good()) throw data_error("failed writing output file: " + out_path);
}

struct EvalOverrides {
  std::vector<std::string> models;
  std::string need_model;
  std::string need_agg;
  bool include_shared = false;
  bool no_shared = false;
  int memory_years = 0;
  int k = 0;
  std::int64_t seed = -1;
  int repeats = 0;
  bool normalize_embeddings = false;
};

struct LoadedRun {
  EvalConfig cfg;
  Resources res;
  std::vector<ModelSpec> models;
  std::vector<std::string> model_names;
  json resolved;  // config echo with the values actually used
};

NeedAggregation parse_agg(const std::string& s) {
  if (s == "vote" || s == "majority_vote") return NeedAggregation::majority_vote;
  if (s == "sum") return NeedAggregation::sum;
  throw config_error("need_agg must be 'vote' or 'sum', got '" + s + "'");
}

LoadedRun load_run(const std::string& config_path, const EvalOverrides& over) {
  json cfg_json;
  try {
    cfg_json = json::parse(read_file(config_path, "config"));
  } catch (const json::exception& e) {
    throw config_error("config " + config_path + ": " + e.what());
  }
  const fs::path base = fs::path(config_path).parent_path();
  const auto resolve = [&](const std::string& p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
  };

  LoadedRun run;
  EvalConfig& cfg = run.cfg;
  if (cfg_json.contains("universe")) {
    cfg.universe.clear();
    for (const auto& code : cfg_json.at("universe")) {
      cfg.universe.emplace_back(code.get<std::string>());
    }
  }
  cfg.k = over.k > 0 ? over.k : cfg_json.value("k", cfg.k);
  cfg.history_start = cfg_json.value("history_start", cfg.history_start);
  cfg.test_start = cfg_json.value("test_start", cfg.test_start);
  cfg.repeats = over.repeats > 0 ? over.repeats : cfg_json.value("repeats", cfg.repeats);
  cfg.rng_seed = over.seed >= 0 ? static_cast<std::uint64_t>(over.seed)
                                : cfg_json.value("rng_seed", cfg.rng_seed);
  cfg.include_shared = cfg_json.value("include_shared", cfg.include_shared);
  if (over.include_shared) cfg.include_shared = true;
  if (over.no_shared) cfg.include_shared = false;
  if (over.memory_years > 0) {
    cfg.memory_years = over.memory_years;
  } else if (cfg_json.contains("memory_years") && cfg_json.at("memory_years").is_number_integer()) {
    cfg.memory_years = cfg_json.at("memory_years").get<int>();
  }
  cfg.validate();

  NeedConfig& need_cfg = run.res.need_cfg;
  need_cfg.window_alpha = cfg_json.value("window_alpha", need_cfg.window_alpha);
  need_cfg.freq_smoothing = cfg_json.value("freq_smoothing", need_cfg.freq_smoothing);
  need_cfg.vote_smoothing = cfg_json.value("vote_smoothing", need_cfg.vote_smoothing);
  need_cfg.weighted_vote = cfg_json.value("weighted_vote", need_cfg.weighted_vote);
  if (need_cfg.window_alpha < 1) throw config_error("window_alpha must be >= 1");
  if (need_cfg.freq_smoothing <= 0.0 || need_cfg.vote_smoothing <= 0.0) {
    throw config_error("smoothing constants must be positive");
  }

  const NeedAggregation agg =
      parse_agg(!over.need_agg.empty() ? over.need_agg : cfg_json.value("need_agg", "vote"));

  std::vector<std::string> model_names;
  if (!over.models.empty() || !over.need_model.empty()) {
    model_names = over.models;
    if (!over.need_model.empty()) model_names.push_back(over.need_model + "_need");
  } else if (cfg_json.contains("models")) {
    for (const auto& name : cfg_json.at("models")) {
      model_names.push_back(name.get<std::string>());
    }
  }
  if (model_names.empty()) throw config_error("no models requested (config 'models' or --model)");
  for (const auto& name : model_names) {
    run.models.push_back(ModelSpec::parse(name, agg));
  }
  run.model_names = model_names;

  const bool any_need = std::any_of(run.models.begin(), run.models.end(),
                                    [](const ModelSpec& m) { return m.uses_need(); });
  const bool any_hist = std::any_of(run.models.begin(), run.models.end(),
                                    [](const ModelSpec& m) { return m.uses_history(); });

  if (!cfg_json.contains("inventory")) throw config_error("config is missing 'inventory'");
  const fs::path inv_path = resolve(cfg_json.at("inventory").get<std::string>());
  std::ifstream inv_stream(inv_path);
  if (!inv_stream) throw config_error("inventory file not found: " + inv_path.string());
  ParseReport parse_report;
  const Inventory raw = parse_inventory(inv_stream, parse_report);
  if (!parse_report.errors.empty()) {
    std::cerr << "inventory: " << parse_report.errors.size() << " malformed line(s) skipped\n";
  }
  run.res.inventory = shared_word_filter(raw, cfg.universe);

  const bool normalize =
      over.normalize_embeddings || cfg_json.value("normalize_embeddings", false);
  if (any_hist) {
    if (!cfg_json.contains("embeddings")) throw config_error("config is missing 'embeddings'");
    const fs::path path = resolve(cfg_json.at("embeddings").get<std::string>());
    std::ifstream stream(path);
    if (!stream) throw config_error("embeddings file not found: " + path.string());
    run.res.embeddings = EmbeddingStore::load(stream, normalize);
  }
  if (any_need) {
    if (!cfg_json.contains("stopwords")) throw config_error("config is missing 'stopwords'");
    const fs::path sw_path = resolve(cfg_json.at("stopwords").get<std::string>());
    std::ifstream sw_stream(sw_path);
    if (!sw_stream) throw config_error("stopwords file not found: " + sw_path.string());
    run.res.stopwords = load_stopwords(sw_stream);

    if (!cfg_json.contains("frequencies") || !cfg_json.at("frequencies").is_object()) {
      throw config_error("config is missing 'frequencies' map");
    }
    for (const auto& region : cfg.universe) {
      if (!cfg_json.at("frequencies").contains(region.code)) {
        throw config_error("no frequency table configured for region '" + region.code + "'");
      }
      const fs::path path =
          resolve(cfg_json.at("frequencies").at(region.code).get<std::string>());
      std::ifstream stream(path);
      if (!stream) throw config_error("frequency file not found: " + path.string());
      FreqLoadReport load_report;
      run.res.tables.emplace(region, load_frequency_table(stream, region, load_report));
      if (!load_report.errors.empty()) {
        std::cerr << "frequencies[" << region.code << "]: " << load_report.errors.size()
                  << " bad row(s) skipped\n";
      }
    }
  }

  json universe_json = json::array();
  for (const auto& region : cfg.universe) universe_json.push_back(region.code);
  run.resolved = json{{"config_file", config_path},
                      {"universe", universe_json},
                      {"k", cfg.k},
                      {"history_start", cfg.history_start},
                      {"test_start", cfg.test_start},
                      {"repeats", cfg.repeats},
                      {"rng_seed", cfg.rng_seed},
                      {"include_shared", cfg.include_shared},
                      {"memory_years", cfg.memory_years ? json(*cfg.memory_years) : json()},
                      {"window_alpha", need_cfg.window_alpha},
                      {"freq_smoothing", need_cfg.freq_smoothing},
                      {"vote_smoothing", need_cfg.vote_smoothing},
                      {"weighted_vote", need_cfg.weighted_vote},
                      {"need_agg", agg == NeedAggregation::majority_vote ? "vote" : "sum"},
                      {"normalize_embeddings", normalize},
                      {"models", json(model_names)}};
  return run;
}

void emit_report(const std::vector<AccuracyReport>& reports, const RegionList& universe,
                 const std::string& config_json, const std::string& format,
                 const std::string& out_path, const std::string& json_path) {
  if (reports.empty()) throw data_error("emit_report: no reports to write");
  if (format != "tsv" && format != "json") {
    throw config_error("format must be 'tsv' or 'json', got '" + format + "'");
  }
  const std::string body = format == "tsv" ? reports_to_tsv(reports, universe)
                                           : reports_to_json(reports, universe, config_json);
  write_output(body, out_path);
  if (!json_path.empty()) {
    write_output(reports_to_json(reports, universe, config_json), json_path);
  }
}

void add_eval_flags(CLI::App* cmd, std::string& config_path, EvalOverrides& over,
                    std::string& out_path, std::string& json_path, std::string& format,
                    int& jobs) {
  cmd->add_option("--config", config_path, "experiment config JSON")->required();
  cmd->add_option("--model", over.models,
                  "model to evaluate (repeatable): onenn|exemplar|prototype|sense-freq|lda|"
                  "logreg|hybrid:<need>:<chain>|form_need|semantic_need|context_need");
  cmd->add_option("--need-model", over.need_model, "need model: form|semantic|context")
      ->check(CLI::IsMember({"form", "semantic", "context"}));
  cmd->add_option("--need-agg", over.need_agg, "need aggregation: sum|vote")
      ->check(CLI::IsMember({"sum", "vote"}));
  cmd->add_flag("--include-shared", over.include_shared,
                "admit shared senses into every constituent region's history");
  cmd->add_flag("--no-shared", over.no_shared, "drop shared senses from histories");
  cmd->add_option("--memory-years", over.memory_years,
                  "drop historical senses older than this many years");
  cmd->add_option("--k", over.k, "minimum exclusive senses per region");
  cmd->add_option("--seed", over.seed, "rng seed override");
  cmd->add_option("--repeats", over.repeats, "number of balanced resamples");
  cmd->add_option("--jobs", jobs, "worker threads (0 = all cores)");
  cmd->add_option("--out", out_path, "write the report here instead of stdout");
  cmd->add_option("--json", json_path, "also write the JSON mirror here");
  cmd->add_option("--format", format, "stdout/--out format: tsv|json")
      ->check(CLI::IsMember({"tsv", "json"}));
}

int run_ingest(const std::string& inventory_path, const std::string& out_path,
               const std::string& report_path) {
  std::ifstream stream(inventory_path);
  if (!stream) throw config_error("inventory file not found: " + inventory_path);
  ParseReport report;
  const Inventory inv = parse_inventory(stream, report);

  std::ostringstream canon;
  serialize_inventory(inv, canon);
  write_output(canon.str(), out_path);
  if (!report_path.empty()) write_output(report.to_json() + "\n", report_path);
  std::cerr << "ingest: " << inv.words.size() << " words, " << inv.sense_count()
            << " senses; dropped " << report.dropped_references << " reference(s), "
            << report.dropped_senses << " sense(s), " << report.dropped_words << " word(s), "
            << report.errors.size() << " malformed line(s)\n";
  return 0;
}

std::vector<TestSeries> prepare_series(const LoadedRun& run) {
  const std::vector<WordEntry> words = select_words(run.res.inventory, run.cfg);
  std::vector<TestSeries> series = build_test_series(words, run.cfg);
  if (series.empty()) throw data_error("no test senses after " +
                                       std::to_string(run.cfg.test_start));
  std::cerr << "eval: " << words.size() << " words selected, " << series.size()
            << " with test senses\n";
  return series;
}

}  // namespace

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"regional-origin inference for emerging slang senses"};
  app.require_subcommand(1);

  // ingest
  std::string ing_inventory, ing_out, ing_report;
  CLI::App* ingest = app.add_subcommand("ingest", "parse and canonicalize a sense inventory");
  ingest->add_option("--inventory", ing_inventory, "raw JSON-lines inventory")->required();
  ingest->add_option("--out", ing_out, "canonical inventory destination (default stdout)");
  ingest->add_option("--report", ing_report, "parse report JSON destination");

  // shared eval-style flag sets
  std::string eval_config, eval_out, eval_json, eval_format = "tsv";
  EvalOverrides eval_over;
  int eval_jobs = 0;
  CLI::App* eval_cmd = app.add_subcommand("eval", "run the region-tracing experiment");
  add_eval_flags(eval_cmd, eval_config, eval_over, eval_out, eval_json, eval_format, eval_jobs);

  std::string sweep_config, sweep_out, sweep_json, sweep_format = "tsv", sweep_thresholds;
  EvalOverrides sweep_over;
  int sweep_jobs = 0;
  CLI::App* sweep_cmd = app.add_subcommand("memory-sweep", "evaluate across memory thresholds");
  add_eval_flags(sweep_cmd, sweep_config, sweep_over, sweep_out, sweep_json, sweep_format,
                 sweep_jobs);
  sweep_cmd->add_option("--thresholds", sweep_thresholds, "comma-separated years, e.g. 10,25,50")
      ->required();

  std::string dec_config, dec_out, dec_json, dec_format = "tsv";
  EvalOverrides dec_over;
  int dec_jobs = 0;
  CLI::App* dec_cmd = app.add_subcommand("decades", "per-decade accuracy analysis");
  add_eval_flags(dec_cmd, dec_config, dec_over, dec_out, dec_json, dec_format, dec_jobs);

  // synth
  std::string synth_spec_path, synth_out;
  std::int64_t synth_seed = -1;
  CLI::App* synth_cmd = app.add_subcommand("synth", "generate a synthetic corpus");
  synth_cmd->add_option("--spec", synth_spec_path, "generator spec JSON (defaults when omitted)");
  synth_cmd->add_option("--seed", synth_seed, "seed override");
  synth_cmd->add_option("--out", synth_out, "output directory")->required();

  // report
  std::string rep_in, rep_out, rep_format = "tsv";
  CLI::App* rep_cmd = app.add_subcommand("report", "convert a JSON report");
  rep_cmd->add_option("--in", rep_in, "report JSON produced by eval")->required();
  rep_cmd->add_option("--format", rep_format, "tsv|json")->check(CLI::IsMember({"tsv", "json"}));
  rep_cmd->add_option("--out", rep_out, "destination (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e);
      return 0;
    }
    std::cerr << e.what() << "\n";
    return 1;
  }

  try {
    if (ingest->parsed()) return run_ingest(ing_inventory, ing_out, ing_report);

    if (eval_cmd->parsed()) {
      const LoadedRun run = load_run(eval_config, eval_over);
      const std::vector<TestSeries> series = prepare_series(run);
      const auto reports = run_experiment(run.models, series, run.cfg, run.res, eval_jobs);
      if (eval_format == "tsv" && eval_json.empty()) {
        std::cerr << "config: " << run.resolved.dump() << "\n";
      }
      emit_report(reports, run.cfg.universe, run.resolved.dump(), eval_format, eval_out,
                  eval_json);
      return 0;
    }

    if (sweep_cmd->parsed()) {
      std::vector<int> thresholds;
      std::stringstream ss(sweep_thresholds);
      std::string item;
      while (std::getline(ss, item, ',')) {
        try {
          thresholds.push_back(std::stoi(item));
        } catch (const std::exception&) {
          throw config_error("bad threshold '" + item + "'");
        }
      }
      const LoadedRun run = load_run(sweep_config, sweep_over);
      const std::vector<TestSeries> series = prepare_series(run);
      const auto reports =
          memory_sweep(thresholds, run.models, series, run.cfg, run.res, sweep_jobs);
      emit_report(reports, run.cfg.universe, run.resolved.dump(), sweep_format, sweep_out,
                  sweep_json);
      return 0;
    }

    if (dec_cmd->parsed()) {
      const LoadedRun run = load_run(dec_config, dec_over);
      const std::vector<TestSeries> series = prepare_series(run);
      const auto reports = decade_analysis(run.models, series, run.cfg, run.res, dec_jobs);
      emit_report(reports, run.cfg.universe, run.resolved.dump(), dec_format, dec_out, dec_json);
      return 0;
    }

    if (synth_cmd->parsed()) {
      SynthSpec spec;
      if (!synth_spec_path.empty()) {
        spec = SynthSpec::from_json(read_file(synth_spec_path, "synth spec"));
      }
      if (synth_seed >= 0) spec.seed = static_cast<std::uint64_t>(synth_seed);
      write_synthetic(spec, synth_out);
      std::cerr << "synth: wrote corpus to " << synth_out << "\n";
      return 0;
    }

    if (rep_cmd->parsed()) {
      RegionList universe;
      std::string config_json;
      const auto reports = reports_from_json(read_file(rep_in, "report"), universe, config_json);
      emit_report(reports, universe, config_json, rep_format, rep_out, "");
      return 0;
    }
  } catch (const config_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const data_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}

}  // namespace slangvar
