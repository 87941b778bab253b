#include "wmsketch/cli.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <stdexcept>
#include <unordered_map>

#include <CLI11.hpp>
#include <json.hpp>

#include "wmsketch/apps.hpp"
#include "wmsketch/baselines.hpp"
#include "wmsketch/eval.hpp"
#include "wmsketch/libsvm.hpp"
#include "wmsketch/sizing.hpp"
#include "wmsketch/snapshot.hpp"
#include "wmsketch/synthetic.hpp"

namespace wmsketch::cli {

namespace {

using nlohmann::json;

void write_text(const std::string& path, const std::string& data) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << data;
    out.flush();
    if (!out) throw std::runtime_error("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

struct LearnerOpts {
  std::string method = "awm";
  uint64_t width = 0;
  uint32_t depth = 0;
  uint64_t heap = 0;
  uint64_t budget = 0;
  std::string loss = "logistic";
  double smoothing = 1.0;
  std::string schedule = "inv_sqrt";
  double lr0 = 0.1;
  double lambda = 0.0;
  uint64_t seed = 42;
};

void add_learner_flags(CLI::App* cmd, LearnerOpts& o) {
  cmd->add_option("--method", o.method, "wm|awm|trunc|ptrunc|ss|hash|dense|cmff")
      ->check(CLI::IsMember({"wm", "awm", "trunc", "ptrunc", "ss", "hash", "dense", "cmff"}));
  cmd->add_option("--width", o.width, "sketch width (buckets per row)");
  cmd->add_option("--depth", o.depth, "sketch depth (rows)");
  cmd->add_option("--heap", o.heap, "heap capacity / top-K size");
  cmd->add_option("--budget-bytes", o.budget, "byte budget; fills unset sizes");
  cmd->add_option("--loss", o.loss)->check(CLI::IsMember({"logistic", "hinge"}));
  cmd->add_option("--smoothing", o.smoothing, "hinge smoothing zone width");
  cmd->add_option("--lr-schedule", o.schedule)
      ->check(CLI::IsMember({"constant", "inv_sqrt", "inv_sc"}));
  cmd->add_option("--lr0", o.lr0, "base learning rate");
  cmd->add_option("--lambda", o.lambda, "l2 regularization strength");
  cmd->add_option("--seed", o.seed);
}

LearnerSpec to_spec(const LearnerOpts& o) {
  LearnerSpec s;
  s.method = method_from_name(o.method);
  s.width = o.width;
  s.depth = o.depth;
  s.heap = o.heap;
  s.budget_bytes = o.budget;
  s.loss = make_loss(o.loss == "hinge" ? LossKind::smoothed_hinge : LossKind::logistic,
                     o.smoothing);
  ScheduleKind kind = ScheduleKind::inv_sqrt;
  if (o.schedule == "constant") kind = ScheduleKind::constant;
  if (o.schedule == "inv_sc") kind = ScheduleKind::inv_strongly_convex;
  s.schedule = make_schedule(kind, o.lr0, o.lambda);
  s.lambda = o.lambda;
  s.seed = o.seed;
  return s;
}

json spec_json(const LearnerSpec& resolved, const LearnerOpts& o) {
  return json{{"method", method_name(resolved.method)},
              {"width", resolved.width},
              {"depth", resolved.depth},
              {"heap", resolved.heap},
              {"budget_bytes", o.budget},
              {"loss", o.loss},
              {"smoothing", o.smoothing},
              {"schedule", o.schedule},
              {"lr0", o.lr0},
              {"lambda", o.lambda},
              {"seed", o.seed}};
}

struct SynthOpts {
  uint64_t dim = 1024;
  uint32_t sparsity = 10;
  uint32_t heavy = 16;
  double heavy_min = 1.0;
  double heavy_max = 3.0;
  double noise = 0.0;
  double zipf = 0.0;
  uint64_t steps = 10000;
  uint64_t seed = 1;
};

void add_synth_flags(CLI::App* cmd, SynthOpts& o) {
  cmd->add_option("--dim", o.dim);
  cmd->add_option("--sparsity", o.sparsity);
  cmd->add_option("--heavy", o.heavy, "planted true weights");
  cmd->add_option("--heavy-min", o.heavy_min);
  cmd->add_option("--heavy-max", o.heavy_max);
  cmd->add_option("--noise", o.noise, "label flip rate");
  cmd->add_option("--zipf", o.zipf, "popularity skew exponent");
  cmd->add_option("--steps", o.steps);
  cmd->add_option("--data-seed", o.seed);
}

io::SyntheticSpec to_synth_spec(const SynthOpts& o) {
  io::SyntheticSpec s;
  s.dim = o.dim;
  s.sparsity = o.sparsity;
  s.heavy = o.heavy;
  s.heavy_min = o.heavy_min;
  s.heavy_max = o.heavy_max;
  s.noise = o.noise;
  s.zipf = o.zipf;
  s.steps = o.steps;
  s.seed = o.seed;
  return s;
}

void emit(const json& metrics, const std::string& command,
          const std::vector<std::string>& argv, const json& config,
          const std::string& manifest_path) {
  std::cout << metrics.dump(2) << "\n";
  json manifest{{"command", command},
                {"argv", argv},
                {"config", config},
                {"metrics", metrics}};
  write_text(manifest_path, manifest.dump(2) + "\n");
}

std::string libsvm_line(const LabeledExample& ex) {
  std::string line = ex.y > 0 ? "+1" : "-1";
  char buf[64];
  for (const auto& [id, v] : ex.x) {
    std::snprintf(buf, sizeof buf, " %u:%.17g", id, v);
    line += buf;
  }
  return line;
}

std::vector<std::string> read_tokens(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::vector<std::string> tokens;
  std::string tok;
  while (in >> tok) tokens.push_back(tok);
  return tokens;
}

void save_snapshot(OnlineLearner& learner, const std::string& path) {
  if (auto* wm = dynamic_cast<WmSketch*>(&learner)) return snapshot::save_wm(*wm, path);
  if (auto* awm = dynamic_cast<AwmSketch*>(&learner)) return snapshot::save_awm(*awm, path);
  if (auto* dense = dynamic_cast<DenseModel*>(&learner)) return snapshot::save_dense(*dense, path);
  throw std::invalid_argument(std::string("snapshots are not supported for method ") +
                              learner.name());
}

int dispatch(const std::vector<std::string>& args);

int do_replay(const std::string& manifest_path) {
  std::ifstream in(manifest_path);
  if (!in) throw std::runtime_error("cannot open " + manifest_path);
  json manifest;
  try {
    manifest = json::parse(in);
  } catch (const json::exception& e) {
    throw std::runtime_error("bad manifest " + manifest_path + ": " + e.what());
  }
  if (!manifest.contains("argv") || !manifest["argv"].is_array())
    throw std::runtime_error("manifest has no argv array");
  std::vector<std::string> argv;
  for (const auto& a : manifest["argv"]) argv.push_back(a.get<std::string>());
  return dispatch(argv);
}

int dispatch(const std::vector<std::string>& args) {
  CLI::App app{"streaming weighted-feature sketching toolkit"};
  app.require_subcommand(1);

  // train
  auto* train = app.add_subcommand("train", "train an online classifier over a stream");
  LearnerOpts train_learner;
  SynthOpts train_synth;
  std::string train_input, train_save, train_topk_out;
  std::string train_manifest = "run_manifest.json";
  bool train_use_synth = false;
  uint64_t train_k = 128;
  add_learner_flags(train, train_learner);
  train->add_option("--input", train_input, "LIBSVM stream file");
  train->add_flag("--synth", train_use_synth, "generate the stream instead of reading one");
  add_synth_flags(train, train_synth);
  train->add_option("--save", train_save, "snapshot output (wm/awm/dense)");
  train->add_option("--topk-out", train_topk_out, "top-k weights CSV");
  train->add_option("--k", train_k, "rows in --topk-out");
  train->add_option("--manifest", train_manifest);

  // eval recovery
  auto* eval_cmd = app.add_subcommand("eval", "evaluate recovered weights");
  eval_cmd->require_subcommand(1);
  auto* recovery = eval_cmd->add_subcommand("recovery", "relative recovery error vs true weights");
  std::string rec_truth, rec_estimate;
  std::string rec_manifest = "run_manifest.json";
  uint64_t rec_k = 128;
  recovery->add_option("--truth", rec_truth, "true weights CSV")->required();
  recovery->add_option("--estimate", rec_estimate, "estimated top-k CSV")->required();
  recovery->add_option("--k", rec_k);
  recovery->add_option("--manifest", rec_manifest);

  // size
  auto* size_cmd = app.add_subcommand("size", "theoretical sketch sizing");
  sizing::TheoryParams theory;
  bool simplified = false;
  std::string size_manifest = "run_manifest.json";
  size_cmd->add_option("--epsilon", theory.epsilon)->required();
  size_cmd->add_option("--delta", theory.delta)->required();
  size_cmd->add_option("--dim", theory.dim)->required();
  size_cmd->add_option("--lambda", theory.lambda)->required();
  size_cmd->add_option("--beta", theory.beta);
  size_cmd->add_option("--gamma", theory.gamma);
  size_cmd->add_option("--c1", theory.c1);
  size_cmd->add_option("--c2", theory.c2);
  size_cmd->add_flag("--simplified", simplified, "unit-constant form");
  size_cmd->add_option("--manifest", size_manifest);

  // gen
  auto* gen = app.add_subcommand("gen", "write a synthetic LIBSVM stream");
  SynthOpts gen_synth;
  std::string gen_out, gen_truth_out;
  std::string gen_manifest = "run_manifest.json";
  add_synth_flags(gen, gen_synth);
  gen->add_option("--out", gen_out, "LIBSVM output path")->required();
  gen->add_option("--truth-out", gen_truth_out, "true weights CSV");
  gen->add_option("--manifest", gen_manifest);

  // app
  auto* app_cmd = app.add_subcommand("app", "applications");
  app_cmd->require_subcommand(1);

  auto* explain = app_cmd->add_subcommand("explain", "correlate weights with relative risk");
  LearnerOpts explain_learner;
  std::string explain_input, explain_out;
  std::string explain_manifest = "run_manifest.json";
  uint64_t explain_k = 64;
  add_learner_flags(explain, explain_learner);
  explain->add_option("--input", explain_input, "event CSV: label,attr,attr,...")->required();
  explain->add_option("--out", explain_out, "feature,weight,risk,log_risk CSV");
  explain->add_option("--k", explain_k);
  explain->add_option("--manifest", explain_manifest);

  auto* deltoid = app_cmd->add_subcommand("deltoid", "relative-frequency deltoid detection");
  LearnerOpts deltoid_learner;
  std::string deltoid_a, deltoid_b, deltoid_out;
  std::string deltoid_manifest = "run_manifest.json";
  double deltoid_phi = 5.0;
  uint64_t deltoid_k = 128;
  add_learner_flags(deltoid, deltoid_learner);
  deltoid->add_option("--a", deltoid_a, "stream A token file")->required();
  deltoid->add_option("--b", deltoid_b, "stream B token file")->required();
  deltoid->add_option("--phi", deltoid_phi, "ratio threshold");
  deltoid->add_option("--k", deltoid_k, "retrieval size");
  deltoid->add_option("--out", deltoid_out, "item,feature_id,weight CSV");
  deltoid->add_option("--manifest", deltoid_manifest);

  auto* pmi = app_cmd->add_subcommand("pmi", "streaming pointwise mutual information");
  LearnerOpts pmi_learner;
  std::string pmi_corpus, pmi_out;
  std::string pmi_manifest = "run_manifest.json";
  apps::PmiConfig pmi_cfg;
  add_learner_flags(pmi, pmi_learner);
  pmi->add_option("--corpus", pmi_corpus, "whitespace-delimited token file")->required();
  pmi->add_option("--window", pmi_cfg.window);
  pmi->add_option("--negatives", pmi_cfg.negatives);
  pmi->add_option("--reservoir", pmi_cfg.reservoir);
  pmi->add_option("--k", pmi_cfg.k, "pairs reported");
  pmi->add_option("--out", pmi_out, "u,v,feature_id,weight,pmi CSV");
  pmi->add_option("--manifest", pmi_manifest);

  // replay
  auto* replay = app.add_subcommand("replay", "re-run a recorded manifest");
  std::string replay_manifest;
  replay->add_option("--manifest", replay_manifest)->required();

  {
    std::vector<const char*> argv;
    argv.reserve(args.size() + 1);
    argv.push_back("wmsketch");
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
      app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
      int code = app.exit(e);
      return code == 0 ? 0 : 2;
    }
  }

  if (replay->parsed()) return do_replay(replay_manifest);

  if (train->parsed()) {
    if (train_use_synth == !train_input.empty())
      throw std::invalid_argument("give exactly one of --input or --synth");
    std::vector<LabeledExample> stream;
    if (train_use_synth) {
      stream = io::generate_synthetic(to_synth_spec(train_synth)).stream;
    } else {
      stream = io::load_libsvm(train_input);
    }
    LearnerSpec spec = resolve_spec(to_spec(train_learner));
    auto learner = make_learner(spec);
    eval::OnlineStats stats = eval::run_online(*learner, stream);
    if (!train_topk_out.empty())
      snapshot::write_weights_csv(learner->topk(static_cast<size_t>(train_k)), train_topk_out);
    if (!train_save.empty()) save_snapshot(*learner, train_save);
    json metrics{{"examples", stats.examples},
                 {"mistakes", stats.mistakes},
                 {"error_rate", stats.error_rate()},
                 {"steps", learner->steps()},
                 {"scale", learner->scale()}};
    emit(metrics, "train", args, spec_json(spec, train_learner), train_manifest);
    return 0;
  }

  if (recovery->parsed()) {
    auto truth = snapshot::read_weight_map_csv(rec_truth);
    auto estimate = snapshot::read_weights_csv(rec_estimate);
    double err = eval::rel_err(estimate, truth, static_cast<size_t>(rec_k));
    json metrics{{"rel_err", err}, {"k", rec_k}};
    json config{{"truth", rec_truth}, {"estimate", rec_estimate}, {"k", rec_k}};
    emit(metrics, "eval recovery", args, config, rec_manifest);
    return 0;
  }

  if (size_cmd->parsed()) {
    sizing::SketchSize sz;
    json config{{"epsilon", theory.epsilon}, {"delta", theory.delta}, {"dim", theory.dim},
                {"lambda", theory.lambda},   {"beta", theory.beta},   {"gamma", theory.gamma},
                {"c1", theory.c1},           {"c2", theory.c2},       {"simplified", simplified}};
    if (simplified) {
      sz = sizing::simplified_size(theory.epsilon, theory.delta, theory.dim, theory.lambda);
    } else {
      sz = sizing::theoretical_size(theory);
    }
    json metrics{{"k", sz.k}, {"s", sz.s}, {"width", sz.k / sz.s}, {"bytes", 4 * sz.k}};
    if (!simplified) {
      metrics["k_real"] = sizing::theoretical_k_real(theory);
      metrics["s_real"] = sizing::theoretical_s_real(theory);
    }
    emit(metrics, "size", args, config, size_manifest);
    return 0;
  }

  if (gen->parsed()) {
    io::SyntheticSpec spec = to_synth_spec(gen_synth);
    io::SyntheticData data = io::generate_synthetic(spec);
    std::string body;
    uint64_t positives = 0;
    for (const auto& ex : data.stream) {
      body += libsvm_line(ex);
      body += '\n';
      if (ex.y > 0) ++positives;
    }
    write_text(gen_out, body);
    if (!gen_truth_out.empty()) {
      std::vector<WeightEntry> rows;
      rows.reserve(data.w_true.size());
      for (const auto& [id, w] : data.w_true) rows.push_back({id, w});
      std::sort(rows.begin(), rows.end(),
                [](const WeightEntry& a, const WeightEntry& b) { return a.feature < b.feature; });
      snapshot::write_weights_csv(rows, gen_truth_out);
    }
    json config{{"dim", spec.dim},   {"sparsity", spec.sparsity}, {"heavy", spec.heavy},
                {"noise", spec.noise}, {"zipf", spec.zipf},       {"steps", spec.steps},
                {"seed", spec.seed}};
    json metrics{{"examples", data.stream.size()}, {"positives", positives}};
    emit(metrics, "gen", args, config, gen_manifest);
    return 0;
  }

  if (explain->parsed()) {
    std::ifstream in(explain_input);
    if (!in) throw std::runtime_error("cannot open " + explain_input);
    std::vector<apps::AttributedEvent> events;
    std::string line;
    size_t line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (line.empty() || line == "\r") continue;
      apps::AttributedEvent ev;
      size_t pos = 0;
      bool first = true;
      while (pos <= line.size()) {
        size_t comma = line.find(',', pos);
        std::string tok = line.substr(pos, comma == std::string::npos ? std::string::npos
                                                                      : comma - pos);
        if (!tok.empty() && tok.back() == '\r') tok.pop_back();
        if (first) {
          if (tok == "+1" || tok == "1") ev.label = 1;
          else if (tok == "-1" || tok == "0") ev.label = -1;
          else throw std::runtime_error("line " + std::to_string(line_no) + ": bad label");
          first = false;
        } else if (!tok.empty()) {
          errno = 0;
          char* end = nullptr;
          unsigned long long raw = std::strtoull(tok.c_str(), &end, 10);
          if (errno != 0 || *end != '\0' || raw > 0xffffffffull)
            throw std::runtime_error("line " + std::to_string(line_no) + ": bad attribute");
          ev.attributes.push_back(static_cast<feature_t>(raw));
        }
        if (comma == std::string::npos) break;
        pos = comma + 1;
      }
      events.push_back(std::move(ev));
    }
    LearnerSpec spec = resolve_spec(to_spec(explain_learner));
    apps::ExplainResult res =
        apps::explain_stream(events, spec, static_cast<size_t>(explain_k));
    if (!explain_out.empty()) {
      std::string body = "feature_id,weight,risk,log_risk\n";
      char buf[160];
      for (const auto& row : res.top) {
        std::snprintf(buf, sizeof buf, "%u,%.17g,%.17g,%.17g\n", row.feature, row.weight,
                      row.risk, row.log_risk);
        body += buf;
      }
      write_text(explain_out, body);
    }
    json metrics{{"pearson", res.pearson}, {"examples", res.examples}, {"rows", res.top.size()}};
    emit(metrics, "app explain", args, spec_json(spec, explain_learner), explain_manifest);
    return 0;
  }

  if (deltoid->parsed()) {
    auto toks_a = read_tokens(deltoid_a);
    auto toks_b = read_tokens(deltoid_b);
    std::unordered_map<feature_t, std::string> names;
    auto to_ids = [&](const std::vector<std::string>& toks) {
      std::vector<feature_t> ids;
      ids.reserve(toks.size());
      for (const auto& t : toks) {
        feature_t id = hash::token_id(t);
        names.emplace(id, t);
        ids.push_back(id);
      }
      return ids;
    };
    auto ids_a = to_ids(toks_a), ids_b = to_ids(toks_b);
    apps::DeltoidConfig cfg;
    cfg.learner = resolve_spec(to_spec(deltoid_learner));
    cfg.phi = deltoid_phi;
    cfg.k = static_cast<size_t>(deltoid_k);
    apps::DeltoidResult res = apps::deltoid_detect(ids_a, ids_b, cfg);
    if (!deltoid_out.empty()) {
      std::string body = "item,feature_id,weight\n";
      char buf[64];
      for (const auto& e : res.top) {
        std::snprintf(buf, sizeof buf, ",%u,%.17g\n", e.feature, e.weight);
        body += names.at(e.feature);
        body += buf;
      }
      write_text(deltoid_out, body);
    }
    json metrics{{"recall", res.recall},
                 {"detected", res.detected.size()},
                 {"truth", res.truth.size()},
                 {"steps", res.steps}};
    json config = spec_json(cfg.learner, deltoid_learner);
    config["phi"] = deltoid_phi;
    config["k"] = deltoid_k;
    emit(metrics, "app deltoid", args, config, deltoid_manifest);
    return 0;
  }

  if (pmi->parsed()) {
    auto tokens = read_tokens(pmi_corpus);
    pmi_cfg.learner = to_spec(pmi_learner);
    if (pmi_cfg.learner.budget_bytes == 0) {
      if (pmi_cfg.learner.heap == 0) pmi_cfg.learner.heap = 1024;
      if (pmi_cfg.learner.width == 0) pmi_cfg.learner.width = 4096;
      if (pmi_cfg.learner.depth == 0) pmi_cfg.learner.depth = 1;
    }
    pmi_cfg.seed = pmi_learner.seed;
    apps::PmiResult res = apps::pmi_stream(tokens, pmi_cfg);
    if (!pmi_out.empty()) {
      std::string body = "u,v,feature_id,weight,pmi\n";
      char buf[96];
      for (const auto& p : res.top) {
        std::snprintf(buf, sizeof buf, ",%u,%.17g,%.17g\n", p.pair, p.weight, p.pmi);
        body += p.u;
        body += ',';
        body += p.v;
        body += buf;
      }
      write_text(pmi_out, body);
    }
    json metrics{{"positives", res.positives},
                 {"steps", res.steps},
                 {"pairs_reported", res.top.size()}};
    json config = spec_json(resolve_spec(pmi_cfg.learner), pmi_learner);
    config["window"] = pmi_cfg.window;
    config["negatives"] = pmi_cfg.negatives;
    config["reservoir"] = pmi_cfg.reservoir;
    emit(metrics, "app pmi", args, config, pmi_manifest);
    return 0;
  }

  return 0;
}

}  // namespace

int run_command(const std::vector<std::string>& args) {
  try {
    return dispatch(args);
  } catch (const std::logic_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace wmsketch::cli
