// specgr: command-line pipeline for the draft-verify recommender.
//
//   specgr synth | tokenize | fit | index | recommend | evaluate | bench
//
// Every option can also come from a config file (--config run.toml); keys
// use the long option names without dashes, and a [section] applies to the
// subcommand of that name.

#include "manifest.hpp"

#include "specgr/bench.hpp"
#include "specgr/catalog_io.hpp"
#include "specgr/codebooks.hpp"
#include "specgr/errors.hpp"
#include "specgr/evaluate.hpp"
#include "specgr/ngram_scorer.hpp"
#include "specgr/synthetic.hpp"

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unordered_set>

namespace specgr::cli {
namespace {

using nlohmann::json;
using Clock = std::chrono::steady_clock;

struct RunConfig {
  std::string data_dir = "data";
  std::string artifacts = "artifacts";
  std::string interactions;  // default <data_dir>/interactions.jsonl
  std::string embeddings;    // default <data_dir>/embeddings.f32

  std::size_t digits = 4;
  std::size_t codebook_size = 8;
  std::size_t id_vocab = 196;

  std::size_t order = 8;
  double smoothing = 0.1;
  std::size_t embed_dim = 32;

  std::size_t K = 50;
  std::size_t delta = 50;
  double gamma = -1.6;
  std::size_t beta = 50;
  std::string mode = "auxiliary";
  double rho = -1.0;  // negative: unseen share of the validation split

  std::int64_t t_valid = -1;  // negative: read <data_dir>/split.json
  std::int64_t t_test = -1;
  std::uint64_t seed = 0;
  bool force = false;

  fs::path data(const std::string& name) const { return fs::path(data_dir) / name; }
  fs::path artifact(const std::string& name) const { return fs::path(artifacts) / name; }
  fs::path interactions_path() const { return interactions.empty() ? data("interactions.jsonl") : fs::path(interactions); }
  fs::path embeddings_path() const { return embeddings.empty() ? data("embeddings.f32") : fs::path(embeddings); }
  fs::path draft_path() const { return artifact(fmt::format("draft_{}.bin", mode)); }

  TokenLayout layout() const {
    TokenLayout l;
    l.digits = digits;
    l.codebook_size = codebook_size;
    l.id_vocab = id_vocab;
    l.validate();
    return l;
  }
  void resolve_cutoffs() {
    if (t_valid >= 0 && t_test >= 0) return;
    const fs::path p = data("split.json");
    std::ifstream in(p);
    if (!in) throw UsageError(fmt::format("no cut-offs: pass --t-valid/--t-test or run `specgr synth` to write {}", p.string()));
    try {
      const json j = json::parse(in);
      if (t_valid < 0) t_valid = j.at("t_valid").get<std::int64_t>();
      if (t_test < 0) t_test = j.at("t_test").get<std::int64_t>();
    } catch (const json::exception& e) {
      throw FormatError(fmt::format("{}: {}", p.string(), e.what()));
    }
  }
  json tokenize_config() const {
    return {{"digits", digits}, {"codebook_size", codebook_size}, {"id_vocab", id_vocab}, {"seed", seed}, {"t_valid", t_valid}};
  }
  json fit_config() const {
    json j = tokenize_config();
    j["order"] = order;
    j["smoothing"] = smoothing;
    j["embed_dim"] = embed_dim;
    return j;
  }
  json index_config() const {
    json j = fit_config();
    j["mode"] = mode;
    return j;
  }
  SpecGRConfig engine_config() const {
    SpecGRConfig c;
    c.K = K;
    c.delta = delta;
    c.gamma = gamma;
    c.beta = beta;
    return c;
  }
};

double elapsed_ms(Clock::time_point start) {
  return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError(fmt::format("cannot create {}: {}", dir.string(), ec.message()));
}

InteractionLog load_log(const RunConfig& cfg) {
  const fs::path p = cfg.interactions_path();
  if (!fs::exists(p)) throw UsageError(fmt::format("missing {}; run `specgr synth` or pass --interactions", p.string()));
  return read_interactions(p.string());
}

Catalog load_catalog(const RunConfig& cfg) {
  const fs::path books_path = cfg.artifact("codebooks.bin");
  const fs::path ids_path = cfg.artifact("semantic_ids.jsonl");
  check_artifact(books_path, "tokenize", cfg.tokenize_config(), cfg.force);
  check_artifact(ids_path, "tokenize", cfg.tokenize_config(), cfg.force);
  if (!fs::exists(cfg.embeddings_path())) {
    throw UsageError(fmt::format("missing {}; run `specgr synth` or pass --embeddings", cfg.embeddings_path().string()));
  }
  EmbeddingTable table = read_embeddings(cfg.embeddings_path());
  std::ifstream bin(books_path, std::ios::binary);
  Codebooks books = Codebooks::load(bin);
  std::ifstream ids_in(ids_path);
  const auto records = read_semantic_ids(ids_in);
  if (records.size() != table.ids.size()) {
    throw FormatError(fmt::format("{} has {} records but the embedding table has {} rows", ids_path.string(),
                                  records.size(), table.ids.size()));
  }
  std::vector<SemanticId> ids;
  std::vector<bool> seen;
  for (std::size_t i = 0; i < records.size(); ++i) {
    if (records[i].id != table.ids[i]) {
      throw FormatError(fmt::format("{} line {} names '{}' but embedding row {} is '{}'", ids_path.string(), i + 1,
                                    records[i].id, i, table.ids[i]));
    }
    ids.push_back(records[i].digits);
    seen.push_back(records[i].seen);
  }
  return Catalog::restore(cfg.layout(), std::move(books), table.ids, table.rows, std::move(ids), std::move(seen));
}

NGramScorer load_scorer(const RunConfig& cfg) {
  const fs::path p = cfg.artifact("scorer.bin");
  check_artifact(p, "fit", cfg.fit_config(), cfg.force);
  std::ifstream in(p, std::ios::binary);
  NGramScorer scorer = NGramScorer::load(in);
  if (!(scorer.layout() == cfg.layout())) throw FormatError(fmt::format("{} uses a different token layout", p.string()));
  return scorer;
}

DraftIndex load_index(const RunConfig& cfg, const Catalog& catalog, const Scorer& scorer) {
  const fs::path p = cfg.draft_path();
  check_artifact(p, "index", cfg.index_config(), cfg.force);
  DraftMode mode;
  Matrix rows = read_draft_rows(p.string(), mode);
  if (static_cast<std::size_t>(rows.rows()) != catalog.size()) {
    throw FormatError(fmt::format("{} has {} rows for a {}-item catalog", p.string(), rows.rows(), catalog.size()));
  }
  return DraftIndex::from_rows(mode, std::move(rows), &scorer);
}

// ---------------------------------------------------------------- commands

struct SynthArgs {
  SyntheticOptions options;
};

void cmd_synth(const RunConfig& cfg, SynthArgs args) {
  const auto start = Clock::now();
  args.options.seed = cfg.seed;
  const SyntheticData data = generate_synthetic(args.options);
  ensure_dir(cfg.data_dir);
  const fs::path log_path = cfg.interactions_path();
  const fs::path emb_path = cfg.embeddings_path();
  const fs::path split_path = cfg.data("split.json");
  {
    std::ofstream out(log_path);
    write_interactions(out, data.log);
  }
  write_embeddings(emb_path, {data.item_ids, data.embeddings});
  {
    std::ofstream out(split_path);
    out << json{{"t_valid", data.t_valid}, {"t_test", data.t_test}}.dump(2) << '\n';
  }
  const auto& o = args.options;
  json config = {{"num_items", o.num_items}, {"num_users", o.num_users}, {"dim", o.dim},
                 {"clusters", o.clusters},   {"subclusters", o.subclusters}, {"new_item_fraction", o.new_item_fraction},
                 {"seed", cfg.seed}};
  write_manifests({"synth", config, cfg.seed, {}, {log_path, emb_path, fs::path(emb_path.string() + ".json"), split_path},
                   elapsed_ms(start)});
  fmt::print("wrote {} interactions over {} items to {}\n", data.log.size(), data.item_ids.size(), cfg.data_dir);
}

void cmd_tokenize(RunConfig cfg) {
  const auto start = Clock::now();
  if (!fs::exists(cfg.embeddings_path())) {
    throw UsageError(fmt::format("missing {}; run `specgr synth` or pass --embeddings", cfg.embeddings_path().string()));
  }
  const EmbeddingTable table = read_embeddings(cfg.embeddings_path());
  std::vector<bool> seen(table.ids.size(), true);
  std::vector<fs::path> inputs = {cfg.embeddings_path()};
  if (fs::exists(cfg.interactions_path())) {
    cfg.resolve_cutoffs();
    std::unordered_set<std::string> train;
    for (const Interaction& r : load_log(cfg)) {
      if (r.ts < cfg.t_valid) train.insert(r.item);
    }
    for (std::size_t i = 0; i < seen.size(); ++i) seen[i] = train.contains(table.ids[i]);
    inputs.push_back(cfg.interactions_path());
  }
  CatalogOptions options;
  options.layout = cfg.layout();
  options.seed = cfg.seed;
  const Catalog catalog = Catalog::fit(table.ids, table.rows, seen, options);

  ensure_dir(cfg.artifacts);
  const fs::path books_path = cfg.artifact("codebooks.bin");
  const fs::path ids_path = cfg.artifact("semantic_ids.jsonl");
  {
    std::ofstream out(books_path, std::ios::binary);
    catalog.codebooks().save(out);
  }
  {
    std::ofstream out(ids_path);
    write_semantic_ids(out, catalog);
  }
  write_manifests({"tokenize", cfg.tokenize_config(), cfg.seed, inputs, {books_path, ids_path}, elapsed_ms(start)});
  fmt::print("tokenized {} items ({} seen in training) into {}\n", catalog.size(), catalog.num_seen(), ids_path.string());
}

void cmd_fit(RunConfig cfg) {
  const auto start = Clock::now();
  cfg.resolve_cutoffs();
  const Catalog catalog = load_catalog(cfg);
  InteractionLog train;
  for (Interaction& r : load_log(cfg)) {
    if (r.ts < cfg.t_valid) train.push_back(std::move(r));
  }
  const auto corpus = training_corpus(catalog, train);
  NGramOptions options;
  options.order = cfg.order;
  options.smoothing = cfg.smoothing;
  options.embed_dim = cfg.embed_dim;
  options.seed = cfg.seed;
  const NGramScorer scorer = NGramScorer::fit(catalog.layout(), corpus, options);
  const fs::path p = cfg.artifact("scorer.bin");
  {
    std::ofstream out(p, std::ios::binary);
    scorer.save(out);
  }
  write_manifests({"fit", cfg.fit_config(), cfg.seed,
                   {cfg.interactions_path(), cfg.artifact("semantic_ids.jsonl")}, {p}, elapsed_ms(start)});
  fmt::print("fitted order-{} scorer on {} sequences ({} contexts) into {}\n", options.order, corpus.size(),
             scorer.num_contexts(), p.string());
}

void cmd_index(RunConfig cfg) {
  const auto start = Clock::now();
  cfg.resolve_cutoffs();
  const Catalog catalog = load_catalog(cfg);
  const NGramScorer scorer = load_scorer(cfg);
  const DraftIndex index = DraftIndex::build(catalog, parse_draft_mode(cfg.mode), &scorer);
  const fs::path p = cfg.draft_path();
  write_draft_index(p.string(), index);
  write_manifests({"index", cfg.index_config(), cfg.seed, {cfg.artifact("scorer.bin"), cfg.embeddings_path()}, {p},
                   elapsed_ms(start)});
  fmt::print("indexed {} items ({} mode, {} dims) into {}\n", index.size(), cfg.mode, index.dim(), p.string());
}

struct RecommendArgs {
  std::string user;
  std::string history;
  std::string method = "specgr";
};

std::vector<std::string> split_ids(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',' || ch == ' ' || ch == '\t' || ch == '\r') {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

double default_rho(const RunConfig& cfg) {
  if (cfg.rho >= 0.0) return cfg.rho;
  const TemporalSplit split = temporal_split(load_log(cfg), cfg.t_valid, cfg.t_test);
  if (split.valid.empty()) return 0.0;
  std::size_t unseen = 0;
  for (const auto& c : split.valid) unseen += c.target_unseen ? 1 : 0;
  return static_cast<double>(unseen) / static_cast<double>(split.valid.size());
}

json list_json(const Catalog& catalog, const RecommendationList& list) {
  json items = json::array();
  for (const auto& e : list.entries) {
    items.push_back({{"id", catalog.external_id(e.item)}, {"score", e.score}, {"provenance", to_string(e.provenance)}});
  }
  return {{"items", items},
          {"iterations_used", list.iterations_used},
          {"decode_steps_used", list.decode_steps_used},
          {"short_list", list.short_list}};
}

void cmd_recommend(RunConfig cfg, const RecommendArgs& args) {
  cfg.resolve_cutoffs();
  const Method method = parse_method(args.method);
  const Catalog catalog = load_catalog(cfg);
  const NGramScorer scorer = load_scorer(cfg);
  const DraftIndex index = load_index(cfg, catalog, scorer);
  const Engine engine(catalog, scorer, index);
  const double rho = method == Method::kHeuristicMix ? default_rho(cfg) : 0.0;

  auto run = [&](const std::vector<std::string>& ids) {
    if (ids.empty()) throw UsageError("history is empty");
    std::vector<ItemIndex> history;
    for (const auto& id : ids) history.push_back(catalog.index_of(id));
    RecommendationList list;
    switch (method) {
      case Method::kSpecGR: list = engine.recommend(history, cfg.engine_config()); break;
      case Method::kBeamOnly: list = engine.beam_only(history, cfg.beta, cfg.K); break;
      case Method::kHeuristicMix: list = engine.heuristic_mix(history, cfg.beta, cfg.K, rho); break;
    }
    std::cout << list_json(catalog, list).dump() << '\n';
  };

  if (!args.user.empty()) {
    InteractionLog mine;
    for (auto& r : load_log(cfg)) {
      if (r.user == args.user) mine.push_back(std::move(r));
    }
    if (mine.empty()) throw UsageError(fmt::format("user '{}' has no interactions", args.user));
    run(user_sequences(mine).front());
  } else if (!args.history.empty() && args.history != "-") {
    run(split_ids(args.history));
  } else {
    std::string line;
    bool any = false;
    while (std::getline(std::cin, line)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      any = true;
      run(split_ids(line));
    }
    if (!any) throw UsageError("history is empty: pass --history, --user, or ids on stdin");
  }
}

struct EvaluateArgs {
  std::string split = "test";
  std::string method = "specgr";
  bool select_gamma = false;
  std::size_t max_cases = 0;
};

std::vector<ResolvedCase> load_cases(const RunConfig& cfg, const Catalog& catalog, const std::string& which,
                                     std::size_t max_cases) {
  const TemporalSplit split = temporal_split(load_log(cfg), cfg.t_valid, cfg.t_test);
  for (const auto& w : split.warnings) fmt::print(stderr, "warning: {}\n", w);
  if (which != "valid" && which != "test") throw UsageError(fmt::format("unknown split '{}' (valid or test)", which));
  auto cases = resolve_cases(catalog, which == "valid" ? split.valid : split.test);
  if (max_cases > 0 && cases.size() > max_cases) cases.resize(max_cases);
  return cases;
}

void cmd_evaluate(RunConfig cfg, const EvaluateArgs& args) {
  const auto start = Clock::now();
  cfg.resolve_cutoffs();
  const Catalog catalog = load_catalog(cfg);
  const NGramScorer scorer = load_scorer(cfg);
  const DraftIndex index = load_index(cfg, catalog, scorer);
  const Engine engine(catalog, scorer, index);

  EvalOptions options;
  options.method = parse_method(args.method);
  options.config = cfg.engine_config();
  if (options.method == Method::kHeuristicMix) options.rho = default_rho(cfg);
  json selection;
  if (args.select_gamma && options.method == Method::kSpecGR) {
    const auto valid = load_cases(cfg, catalog, "valid", args.max_cases);
    const GammaChoice choice = select_gamma(engine, valid, options);
    options.config.gamma = choice.gamma;
    for (const auto& [g, r] : choice.recall) selection.push_back({{"gamma", g}, {"valid_recall", r}});
  }
  const auto cases = load_cases(cfg, catalog, args.split, args.max_cases);
  const EvalReport report = evaluate(engine, cases, options);

  ensure_dir(cfg.artifacts);
  const std::string stem = fmt::format("report_{}_{}_{}", args.split, args.method, cfg.mode);
  const fs::path json_path = cfg.artifact(stem + ".json");
  const fs::path text_path = cfg.artifact(stem + ".txt");
  const fs::path timing_path = cfg.artifact(stem + ".timing.json");
  json j = report.to_json();
  if (!selection.is_null()) j["gamma_selection"] = selection;
  {
    std::ofstream out(json_path);
    out << j.dump(2) << '\n';
  }
  {
    std::ofstream out(text_path);
    out << report.table();
  }
  {
    std::ofstream out(timing_path);
    out << report.timing_json().dump(2) << '\n';
  }
  json config = cfg.index_config();
  config["K"] = cfg.K;
  config["delta"] = cfg.delta;
  config["beta"] = cfg.beta;
  config["gamma"] = report.gamma;
  config["method"] = args.method;
  config["split"] = args.split;
  write_manifests({"evaluate", config, cfg.seed,
                   {cfg.interactions_path(), cfg.artifact("scorer.bin"), cfg.draft_path()},
                   {json_path, text_path},
                   elapsed_ms(start)});
  std::cout << report.table();
}

struct BenchArgs {
  std::size_t max_cases = 500;
  std::size_t bench_k = 10;
  std::size_t reps = 30;
  std::vector<std::size_t> sizes = {10, 100, 1000};
};

void cmd_bench(RunConfig cfg, const BenchArgs& args) {
  const auto start = Clock::now();
  cfg.resolve_cutoffs();
  const Catalog catalog = load_catalog(cfg);
  const NGramScorer scorer = load_scorer(cfg);
  const DraftIndex index = load_index(cfg, catalog, scorer);
  const Engine engine(catalog, scorer, index);
  const auto cases = load_cases(cfg, catalog, "valid", args.max_cases);

  EvalOptions base;
  base.config = cfg.engine_config();
  const std::vector<std::size_t> grid = {10, 25, 50, 100};
  const auto rows = sweep(engine, cases, base, kGammaGrid, grid);

  SubsetBenchOptions bo;
  bo.sizes.clear();
  for (std::size_t s : args.sizes) {
    if (s <= catalog.size()) bo.sizes.push_back(s);
  }
  bo.reps = args.reps;
  bo.config = cfg.engine_config();
  bo.config.K = args.bench_k;
  bo.seed = cfg.seed;
  const auto latency = bench_subset_latency(engine, cases, bo);

  ensure_dir(cfg.artifacts);
  const fs::path sweep_path = cfg.artifact("sweep.csv");
  const fs::path latency_path = cfg.artifact("latency.csv");
  {
    std::ofstream out(sweep_path);
    write_sweep_csv(out, rows);
  }
  {
    std::ofstream out(latency_path);
    write_latency_csv(out, latency);
  }
  json config = cfg.index_config();
  config["bench_k"] = args.bench_k;
  config["max_cases"] = args.max_cases;
  write_manifests({"bench", config, cfg.seed, {cfg.interactions_path(), cfg.artifact("scorer.bin")},
                   {sweep_path, latency_path}, elapsed_ms(start)});
  std::ifstream in(latency_path);
  std::cout << in.rdbuf();
}

int run(int argc, char** argv) {
  CLI::App app{"specgr: draft-verify generative recommendation pipeline"};
  app.set_config("--config", "", "Read options from a TOML/INI file");
  app.require_subcommand(1);
  app.fallthrough();

  RunConfig cfg;
  app.add_option("--data-dir", cfg.data_dir, "Directory with interactions and embeddings")->capture_default_str();
  app.add_option("--artifacts", cfg.artifacts, "Directory for produced artifacts")->capture_default_str();
  app.add_option("--interactions", cfg.interactions, "Interaction JSONL (default <data-dir>/interactions.jsonl)");
  app.add_option("--embeddings", cfg.embeddings, "Item embedding f32 file (default <data-dir>/embeddings.f32)");
  app.add_option("--digits", cfg.digits, "Semantic id length l")->capture_default_str();
  app.add_option("--codebook-size", cfg.codebook_size, "Codes per semantic level")->capture_default_str();
  app.add_option("--id-vocab", cfg.id_vocab, "Codes of the identification digit")->capture_default_str();
  app.add_option("--order", cfg.order, "N-gram order")->capture_default_str();
  app.add_option("--smoothing", cfg.smoothing, "Additive smoothing")->capture_default_str();
  app.add_option("--embed-dim", cfg.embed_dim, "Scorer token vector size")->capture_default_str();
  app.add_option("-K,--K", cfg.K, "Recommendation list size")->capture_default_str();
  app.add_option("--delta", cfg.delta, "Draft batch size")->capture_default_str();
  app.add_option("--gamma", cfg.gamma, "Acceptance threshold")->capture_default_str();
  app.add_option("--beta", cfg.beta, "Beam width")->capture_default_str();
  app.add_option("--mode", cfg.mode, "Draft mode: auxiliary or self")->capture_default_str();
  app.add_option("--rho", cfg.rho, "Unseen share for heuristic_mix (default: validation unseen share)");
  app.add_option("--t-valid", cfg.t_valid, "Validation cut-off (default from <data-dir>/split.json)");
  app.add_option("--t-test", cfg.t_test, "Test cut-off (default from <data-dir>/split.json)");
  app.add_option("--seed", cfg.seed, "Random seed")->capture_default_str();
  app.add_flag("--force", cfg.force, "Consume artifacts even when their config hash differs");

  SynthArgs synth;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
  synth_cmd->add_option("--items", synth.options.num_items)->capture_default_str();
  synth_cmd->add_option("--users", synth.options.num_users)->capture_default_str();
  synth_cmd->add_option("--dim", synth.options.dim)->capture_default_str();
  synth_cmd->add_option("--clusters", synth.options.clusters)->capture_default_str();
  synth_cmd->add_option("--subclusters", synth.options.subclusters)->capture_default_str();
  synth_cmd->add_option("--new-fraction", synth.options.new_item_fraction)->capture_default_str();

  app.add_subcommand("tokenize", "Fit codebooks and assign semantic ids");
  app.add_subcommand("fit", "Fit the n-gram scorer on the training split");
  app.add_subcommand("index", "Build the draft index for --mode");

  RecommendArgs rec;
  auto* rec_cmd = app.add_subcommand("recommend", "Recommend for one history (or one per stdin line)");
  rec_cmd->add_option("--user", rec.user, "Use this user's full interaction history");
  rec_cmd->add_option("--history", rec.history, "Comma-separated item ids, oldest first");
  rec_cmd->add_option("--method", rec.method, "specgr, beam_only or heuristic_mix")->capture_default_str();

  EvaluateArgs ev;
  auto* ev_cmd = app.add_subcommand("evaluate", "Evaluate on a temporal split");
  ev_cmd->add_option("--split", ev.split, "valid or test")->capture_default_str();
  ev_cmd->add_option("--method", ev.method, "specgr, beam_only or heuristic_mix")->capture_default_str();
  ev_cmd->add_flag("--select-gamma", ev.select_gamma, "Pick gamma from the grid on the validation split");
  ev_cmd->add_option("--max-cases", ev.max_cases, "Evaluate only the first N cases (0 = all)");

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "Hyperparameter sweep and subset-ranking latency CSVs");
  bench_cmd->add_option("--max-cases", bench.max_cases, "Validation cases used")->capture_default_str();
  bench_cmd->add_option("--bench-k", bench.bench_k, "K for the subset-ranking timings")->capture_default_str();
  bench_cmd->add_option("--reps", bench.reps, "Timed repetitions per setting")->capture_default_str();
  bench_cmd->add_option("--sizes", bench.sizes, "Subset sizes")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "synth") cmd_synth(cfg, synth);
  else if (name == "tokenize") cmd_tokenize(cfg);
  else if (name == "fit") cmd_fit(cfg);
  else if (name == "index") cmd_index(cfg);
  else if (name == "recommend") cmd_recommend(cfg, rec);
  else if (name == "evaluate") cmd_evaluate(cfg, ev);
  else if (name == "bench") cmd_bench(cfg, bench);
  return 0;
}

}  // namespace
}  // namespace specgr::cli

int main(int argc, char** argv) {
  using namespace specgr;
  try {
    return cli::run(argc, argv);
  } catch (const UsageError& e) {
    fmt::print(stderr, "usage error: {}\n", e.what());
    return 1;
  } catch (const CapabilityError& e) {
    fmt::print(stderr, "capability error: {}\n", e.what());
    return 3;
  } catch (const FormatError& e) {
    fmt::print(stderr, "format error: {}\n", e.what());
    return 2;
  } catch (const DataError& e) {
    fmt::print(stderr, "data error: {}\n", e.what());
    return 2;
  } catch (const CapacityError& e) {
    fmt::print(stderr, "capacity error: {}\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    fmt::print(stderr, "error: {}\n", e.what());
    return 2;
  }
}
