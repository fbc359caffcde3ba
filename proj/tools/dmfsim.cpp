// dmfsim: data preparation, graph construction, training, evaluation,
// parameter sweeps and synthetic corpus generation for decentralized
// matrix factorization experiments.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "dmf/baselines.hpp"
#include "dmf/dataio.hpp"
#include "dmf/dmfcore.hpp"
#include "dmf/errors.hpp"
#include "dmf/eval.hpp"
#include "dmf/geograph.hpp"
#include "dmf/synth.hpp"

using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw dmf::DataError("cannot open " + path);
  json j;
  in >> j;
  return j;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dmf::DataError("cannot write " + path);
  out << text;
}

// Config precedence: command-line flags > config file > defaults. Values
// from the config file are applied only where the flag was not given.
class ConfigOverlay {
 public:
  void load(const std::string& path) {
    if (!path.empty()) cfg_ = load_json_file(path);
  }
  template <class T>
  void maybe(const CLI::Option* opt, T& value, const char* key) const {
    if (opt->count() == 0 && cfg_.contains(key)) value = cfg_.at(key).get<T>();
  }

 private:
  json cfg_ = json::object();
};

std::uint64_t env_seed_fallback(std::uint64_t current, bool seed_given) {
  if (seed_given) return current;
  if (const char* env = std::getenv("DMF_SEED")) return std::strtoull(env, nullptr, 10);
  return current;
}

std::vector<dmf::CheckinRecord> load_checkins(const std::string& path,
                                              bool skip_malformed) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw dmf::DataError("cannot open " + path);
  dmf::ParseOptions opts;
  opts.skip_malformed = skip_malformed;
  auto result = dmf::parse_checkins(in, opts);
  for (const auto& s : result.skipped) std::cerr << "skipped " << s << "\n";
  return result.records;
}

dmf::WalkMode parse_walk_mode(const std::string& s) {
  if (s == "layers") return dmf::WalkMode::DeterministicLayers;
  if (s == "sampled") return dmf::WalkMode::Sampled;
  throw CLI::ValidationError("--walk-mode must be 'layers' or 'sampled'");
}

dmf::WalkScale parse_walk_scale(const std::string& s) {
  if (s == "paper") return dmf::WalkScale::Paper;
  if (s == "normalized") return dmf::WalkScale::Normalized;
  throw CLI::ValidationError("--walk-scale must be 'paper' or 'normalized'");
}

// ---------------------------------------------------------------- prepare

struct PrepareArgs {
  std::string input, output, config;
  std::string mode = "binary";
  double split = 0.9;
  std::uint64_t seed = 42;
  long min_interactions = 1;
  long max_interactions = 0;
  bool skip_malformed = false;
};

int cmd_prepare(const PrepareArgs& a) {
  auto records = load_checkins(a.input, a.skip_malformed);
  records = dmf::filter_interactions(records, a.min_interactions, a.max_interactions);
  if (records.empty()) throw dmf::EmptyInput("all records filtered out");
  dmf::Dataset ds = dmf::normalize(
      records, a.mode == "minmax" ? dmf::NormalizeMode::MinMax : dmf::NormalizeMode::Binary);
  dmf::split(ds, a.split, a.seed);
  write_text_file(a.output, ds.to_json().dump());
  std::cout << "users=" << ds.user_count() << " items=" << ds.item_count()
            << " train=" << ds.train.size() << " test=" << ds.test.size() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ graph

struct GraphArgs {
  std::string input, dataset, output, config;
  int n = 2;
  std::string f = "constant";
  double sigma = 1.0;
  bool skip_malformed = false;
};

int cmd_graph(const GraphArgs& a) {
  auto records = load_checkins(a.input, a.skip_malformed);
  dmf::Dataset ds = dmf::Dataset::from_json(load_json_file(a.dataset));
  auto locations = dmf::derive_locations(records, ds.user_index);
  dmf::KernelSpec kernel;
  kernel.kind = a.f == "gaussian" ? dmf::DistanceKernel::Gaussian
                                  : dmf::DistanceKernel::Constant;
  kernel.sigma = a.sigma;
  dmf::AdjacencyGraph graph = dmf::build_graph(locations, a.n, kernel);
  write_text_file(a.output, graph.to_json().dump());
  std::cout << "users=" << graph.user_count() << " edges=" << graph.edge_count() << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ train

struct TrainArgs {
  std::string dataset, graph, output, stats, report, config;
  std::string model = "dmf";
  int K = 5;
  double theta = 0.1, alpha = 0.1, beta = 0.01, gamma = 0.01, lambda = 0.1;
  int D = 2, m = 3, T = 100;
  std::uint64_t seed = 42;
  bool freeze_q = false;
  std::string walk_mode = "layers";
  std::string walk_scale = "paper";
  int checkpoint_every = 0;
};

void write_stats_csv(const std::string& path, const std::vector<dmf::EpochStats>& stats) {
  std::ostringstream os;
  os.precision(12);
  os << "epoch,train_loss,test_loss,messages,bytes\n";
  for (const auto& s : stats)
    os << s.epoch << ',' << s.train_loss << ',' << s.test_loss << ',' << s.messages << ','
       << s.bytes << '\n';
  write_text_file(path, os.str());
}

int cmd_train(const TrainArgs& a) {
  dmf::Dataset ds = dmf::Dataset::from_json(load_json_file(a.dataset));
  const std::string stats_path = a.stats.empty() ? a.output + ".stats.csv" : a.stats;
  const std::string report_path = a.report.empty() ? a.output + ".report.json" : a.report;

  if (a.model == "mf" || a.model == "bpr") {
    dmf::CentralHyper hp{a.K, a.theta, a.lambda, a.T, a.m, a.seed};
    dmf::CentralModel model =
        a.model == "mf" ? dmf::mf_train(ds, hp) : dmf::bpr_train(ds, hp);
    json checkpoint = {{"schema_version", 1},
                       {"model", a.model},
                       {"hp", hp.to_json()},
                       {"central", model.to_json()}};
    write_text_file(a.output, checkpoint.dump());
    write_stats_csv(stats_path, {});
    json report = {{"schema_version", 1}, {"model", a.model}, {"hp", hp.to_json()},
                   {"epochs", a.T}};
    write_text_file(report_path, report.dump());
    std::cout << "model=" << a.model << " epochs=" << a.T << "\n";
    return kExitOk;
  }

  dmf::HyperParams hp;
  hp.K = a.K;
  hp.theta = a.theta;
  hp.alpha = a.alpha;
  hp.beta = a.beta;
  hp.gamma = a.gamma;
  hp.D = a.D;
  hp.m = a.m;
  hp.T = a.T;
  hp.seed = a.seed;
  hp.freeze_q = a.freeze_q;
  hp.walk_scale = parse_walk_scale(a.walk_scale);
  const std::string family = dmf::apply_model_kind(a.model, hp);
  if (a.freeze_q) hp.freeze_q = true;

  dmf::AdjacencyGraph graph = dmf::AdjacencyGraph::from_json(load_json_file(a.graph));
  dmf::WalkPolicy policy{hp.D, parse_walk_mode(a.walk_mode), hp.walk_scale};

  dmf::EpochHook hook;
  if (a.checkpoint_every > 0) {
    hook = [&](int epoch, const std::vector<dmf::NodeState>& states,
               const dmf::EpochStats&) {
      if (epoch % a.checkpoint_every != 0) return;
      json snapshot = {{"schema_version", 1},
                       {"model", family},
                       {"hp", hp.to_json()},
                       {"states", dmf::states_to_json(states)}};
      write_text_file(a.output + ".epoch" + std::to_string(epoch), snapshot.dump());
    };
  }

  dmf::TrainResult result = dmf::train(ds, graph, policy, hp, nullptr, hook);

  json checkpoint = {{"schema_version", 1},
                     {"model", family},
                     {"hp", hp.to_json()},
                     {"states", dmf::states_to_json(result.states)}};
  write_text_file(a.output, checkpoint.dump());
  write_stats_csv(stats_path, result.stats);
  json report = {{"schema_version", 1},
                 {"model", family},
                 {"hp", hp.to_json()},
                 {"final_train_loss", result.stats.back().train_loss},
                 {"final_test_loss", result.stats.back().test_loss},
                 {"communication", dmf::cost_report(result.meter)}};
  write_text_file(report_path, report.dump());
  std::cout << "model=" << family << " epochs=" << hp.T
            << " final_train_loss=" << result.stats.back().train_loss
            << " bytes=" << result.meter.bytes << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------- eval

struct EvalArgs {
  std::string checkpoint, dataset, output, csv, config;
  std::vector<int> k_values = {5, 10};
};

int cmd_eval(const EvalArgs& a) {
  dmf::Dataset ds = dmf::Dataset::from_json(load_json_file(a.dataset));
  json checkpoint = load_json_file(a.checkpoint);
  const std::string model = checkpoint.at("model").get<std::string>();

  dmf::EvalReport report;
  int K = 0, D = 0;
  double beta = 0.0, gamma = 0.0;
  if (model == "mf" || model == "bpr") {
    dmf::CentralModel central = dmf::CentralModel::from_json(checkpoint.at("central"));
    dmf::CentralHyper hp = dmf::CentralHyper::from_json(checkpoint.at("hp"));
    dmf::CentralScorer scorer(central);
    report = dmf::evaluate(scorer, ds, a.k_values);
    K = hp.K;
    beta = gamma = hp.lambda;
  } else {
    auto states = dmf::states_from_json(checkpoint.at("states"));
    dmf::HyperParams hp = dmf::HyperParams::from_json(checkpoint.at("hp"));
    dmf::DmfScorer scorer(states);
    report = dmf::evaluate(scorer, ds, a.k_values);
    K = hp.K;
    D = hp.D;
    beta = hp.beta;
    gamma = hp.gamma;
  }
  report.model_kind = model;

  write_text_file(a.output, report.to_json().dump());
  if (!a.csv.empty())
    write_text_file(a.csv, dmf::EvalReport::csv_header(a.k_values) + "\n" +
                               report.csv_row(K, D, beta, gamma) + "\n");
  for (int k : a.k_values)
    std::cout << "P@" << k << "=" << report.per_k[k].first << " R@" << k << "="
              << report.per_k[k].second << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ sweep

struct SweepArgs {
  std::string dataset, graph, output, manifest, config;
  std::string model = "dmf";
  std::vector<double> grid_beta = {1e-3, 1e-2, 1e-1, 1.0, 10.0};
  std::vector<double> grid_gamma = {1e-3, 1e-2, 1e-1, 1.0, 10.0};
  std::vector<int> grid_d = {2};
  std::vector<int> grid_k = {5};
  double theta = 0.1, alpha = 0.1;
  int m = 3, T = 100;
  std::uint64_t seed = 42;
  std::string walk_scale = "paper";
};

int cmd_sweep(const SweepArgs& a) {
  dmf::Dataset ds = dmf::Dataset::from_json(load_json_file(a.dataset));
  dmf::AdjacencyGraph graph = dmf::AdjacencyGraph::from_json(load_json_file(a.graph));

  const std::string manifest_path =
      a.manifest.empty() ? a.output + ".manifest" : a.manifest;
  std::set<std::string> done;
  {
    std::ifstream in(manifest_path);
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) done.insert(line);
  }

  const std::vector<int> k_values = {5, 10};
  const bool fresh = done.empty();
  std::ofstream csv(a.output, fresh ? std::ios::trunc : std::ios::app);
  if (!csv) throw dmf::DataError("cannot write " + a.output);
  if (fresh) csv << dmf::EvalReport::csv_header(k_values) << ",bytes\n";
  std::ofstream manifest(manifest_path, std::ios::app);

  int cells = 0, skipped = 0;
  for (int K : a.grid_k)
    for (int D : a.grid_d)
      for (double beta : a.grid_beta)
        for (double gamma : a.grid_gamma) {
          std::ostringstream key;
          key.precision(12);
          key << "model=" << a.model << ",K=" << K << ",D=" << D << ",beta=" << beta
              << ",gamma=" << gamma << ",seed=" << a.seed;
          if (done.count(key.str())) {
            ++skipped;
            continue;
          }
          dmf::HyperParams hp;
          hp.K = K;
          hp.theta = a.theta;
          hp.alpha = a.alpha;
          hp.beta = beta;
          hp.gamma = gamma;
          hp.D = D;
          hp.m = a.m;
          hp.T = a.T;
          hp.seed = a.seed;
          hp.walk_scale = parse_walk_scale(a.walk_scale);
          dmf::apply_model_kind(a.model, hp);
          dmf::WalkPolicy policy{hp.D, dmf::WalkMode::DeterministicLayers, hp.walk_scale};
          dmf::TrainResult result = dmf::train(ds, graph, policy, hp);
          dmf::DmfScorer scorer(result.states);
          dmf::EvalReport report = dmf::evaluate(scorer, ds, k_values);
          report.model_kind = a.model;
          csv << report.csv_row(K, D, beta, gamma) << ',' << result.meter.bytes << "\n";
          csv.flush();
          manifest << key.str() << "\n";
          manifest.flush();
          ++cells;
        }
  std::cout << "cells=" << cells << " skipped=" << skipped << "\n";
  return kExitOk;
}

// ------------------------------------------------------------------ synth

struct SynthArgs {
  std::string output, config;
  int cities = 2, users = 100, items = 50, groups = 2;
  double p_in = 0.3, p_out = 0.02;
  std::uint64_t seed = 42;
};

int cmd_synth(const SynthArgs& a) {
  dmf::SynthConfig cfg{a.cities, a.users, a.items, a.groups, a.p_in, a.p_out, a.seed};
  auto records = dmf::generate_synthetic(cfg);
  std::ofstream out(a.output, std::ios::binary);
  if (!out) throw dmf::DataError("cannot write " + a.output);
  dmf::write_checkins_csv(out, records);
  std::cout << "records=" << records.size() << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized matrix factorization simulator"};
  app.require_subcommand(1);

  PrepareArgs pa;
  auto* prepare = app.add_subcommand("prepare", "Parse, filter, normalize and split check-ins");
  auto* pa_input = prepare->add_option("--input", pa.input, "Check-in CSV")->required();
  auto* pa_output = prepare->add_option("--output", pa.output, "Dataset JSON")->required();
  auto* pa_mode = prepare->add_option("--mode", pa.mode, "binary|minmax");
  auto* pa_split = prepare->add_option("--split", pa.split, "Train fraction");
  auto* pa_seed = prepare->add_option("--seed", pa.seed, "Split seed");
  auto* pa_min = prepare->add_option("--min-interactions", pa.min_interactions);
  auto* pa_max = prepare->add_option("--max-interactions", pa.max_interactions);
  prepare->add_flag("--skip-malformed", pa.skip_malformed);
  prepare->add_option("--config", pa.config, "JSON config file");

  GraphArgs ga;
  auto* graph_cmd = app.add_subcommand("graph", "Build the same-city user adjacency graph");
  graph_cmd->add_option("--input", ga.input, "Check-in CSV")->required();
  graph_cmd->add_option("--dataset", ga.dataset, "Dataset JSON (user index)")->required();
  graph_cmd->add_option("--output", ga.output, "Graph JSON")->required();
  auto* ga_n = graph_cmd->add_option("--n", ga.n, "Max direct neighbors per user");
  auto* ga_f = graph_cmd->add_option("--f", ga.f, "constant|gaussian");
  auto* ga_sigma = graph_cmd->add_option("--sigma", ga.sigma, "Gaussian kernel sigma (km)");
  graph_cmd->add_flag("--skip-malformed", ga.skip_malformed);
  graph_cmd->add_option("--config", ga.config);

  TrainArgs ta;
  auto* train_cmd = app.add_subcommand("train", "Train a model");
  train_cmd->add_option("--dataset", ta.dataset)->required();
  auto* ta_graph = train_cmd->add_option("--graph", ta.graph, "Required for dmf/gdmf/ldmf");
  train_cmd->add_option("--output", ta.output, "Checkpoint JSON")->required();
  train_cmd->add_option("--stats", ta.stats, "Per-epoch stats CSV");
  train_cmd->add_option("--report", ta.report, "Training report JSON");
  auto* ta_model = train_cmd->add_option("--model", ta.model, "dmf|mf|bpr|gdmf|ldmf");
  auto* ta_k = train_cmd->add_option("--k-dim", ta.K, "Latent dimension K");
  auto* ta_theta = train_cmd->add_option("--theta", ta.theta, "Learning rate");
  auto* ta_alpha = train_cmd->add_option("--alpha", ta.alpha, "User regularizer");
  auto* ta_beta = train_cmd->add_option("--beta", ta.beta, "Global item regularizer");
  auto* ta_gamma = train_cmd->add_option("--gamma", ta.gamma, "Personal item regularizer");
  auto* ta_lambda = train_cmd->add_option("--lambda", ta.lambda, "Central regularizer");
  auto* ta_d = train_cmd->add_option("--d", ta.D, "Max walk distance");
  auto* ta_m = train_cmd->add_option("--m", ta.m, "Negatives per positive");
  auto* ta_t = train_cmd->add_option("--t", ta.T, "Epochs");
  auto* ta_seed = train_cmd->add_option("--seed", ta.seed);
  train_cmd->add_flag("--freeze-q", ta.freeze_q, "No personal factors (gdmf)");
  auto* ta_wm = train_cmd->add_option("--walk-mode", ta.walk_mode, "layers|sampled");
  auto* ta_ws = train_cmd->add_option("--walk-scale", ta.walk_scale, "paper|normalized");
  train_cmd->add_option("--checkpoint-every", ta.checkpoint_every);
  train_cmd->add_option("--config", ta.config);

  EvalArgs ea;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a checkpoint (P@k / R@k)");
  eval_cmd->add_option("--checkpoint", ea.checkpoint)->required();
  eval_cmd->add_option("--dataset", ea.dataset)->required();
  eval_cmd->add_option("--output", ea.output, "Report JSON")->required();
  eval_cmd->add_option("--csv", ea.csv, "Report CSV");
  auto* ea_k = eval_cmd->add_option("--k", ea.k_values, "k values");
  eval_cmd->add_option("--config", ea.config);

  SweepArgs sa;
  auto* sweep_cmd = app.add_subcommand("sweep", "Grid sweep over beta/gamma/D/K");
  sweep_cmd->add_option("--dataset", sa.dataset)->required();
  sweep_cmd->add_option("--graph", sa.graph)->required();
  sweep_cmd->add_option("--output", sa.output, "Aggregated CSV")->required();
  sweep_cmd->add_option("--manifest", sa.manifest, "Completed-cell manifest");
  auto* sa_model = sweep_cmd->add_option("--model", sa.model, "dmf|gdmf|ldmf");
  auto* sa_beta = sweep_cmd->add_option("--grid-beta", sa.grid_beta);
  auto* sa_gamma = sweep_cmd->add_option("--grid-gamma", sa.grid_gamma);
  auto* sa_d = sweep_cmd->add_option("--grid-d", sa.grid_d);
  auto* sa_k = sweep_cmd->add_option("--grid-k", sa.grid_k);
  auto* sa_theta = sweep_cmd->add_option("--theta", sa.theta);
  auto* sa_alpha = sweep_cmd->add_option("--alpha", sa.alpha);
  auto* sa_m = sweep_cmd->add_option("--m", sa.m);
  auto* sa_t = sweep_cmd->add_option("--t", sa.T);
  auto* sa_seed = sweep_cmd->add_option("--seed", sa.seed);
  auto* sa_ws = sweep_cmd->add_option("--walk-scale", sa.walk_scale);
  sweep_cmd->add_option("--config", sa.config);

  SynthArgs ya;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic check-in corpus");
  synth_cmd->add_option("--output", ya.output)->required();
  auto* ya_c = synth_cmd->add_option("--cities", ya.cities);
  auto* ya_u = synth_cmd->add_option("--users", ya.users, "Users per city");
  auto* ya_v = synth_cmd->add_option("--items", ya.items, "Items per city");
  auto* ya_g = synth_cmd->add_option("--groups", ya.groups, "Preference groups per city");
  auto* ya_pi = synth_cmd->add_option("--p-in", ya.p_in);
  auto* ya_po = synth_cmd->add_option("--p-out", ya.p_out);
  auto* ya_seed = synth_cmd->add_option("--seed", ya.seed);
  synth_cmd->add_option("--config", ya.config);

  try {
    app.parse(argc, argv);

    if (prepare->parsed()) {
      ConfigOverlay cfg;
      cfg.load(pa.config);
      cfg.maybe(pa_input, pa.input, "input");
      cfg.maybe(pa_output, pa.output, "output");
      cfg.maybe(pa_mode, pa.mode, "mode");
      cfg.maybe(pa_split, pa.split, "split");
      cfg.maybe(pa_seed, pa.seed, "seed");
      cfg.maybe(pa_min, pa.min_interactions, "min_interactions");
      cfg.maybe(pa_max, pa.max_interactions, "max_interactions");
      pa.seed = env_seed_fallback(pa.seed, pa_seed->count() > 0);
      return cmd_prepare(pa);
    }
    if (graph_cmd->parsed()) {
      ConfigOverlay cfg;
      cfg.load(ga.config);
      cfg.maybe(ga_n, ga.n, "n");
      cfg.maybe(ga_f, ga.f, "f");
      cfg.maybe(ga_sigma, ga.sigma, "sigma");
      return cmd_graph(ga);
    }
    if (train_cmd->parsed()) {
      ConfigOverlay cfg;
      cfg.load(ta.config);
      cfg.maybe(ta_model, ta.model, "model");
      cfg.maybe(ta_k, ta.K, "K");
      cfg.maybe(ta_theta, ta.theta, "theta");
      cfg.maybe(ta_alpha, ta.alpha, "alpha");
      cfg.maybe(ta_beta, ta.beta, "beta");
      cfg.maybe(ta_gamma, ta.gamma, "gamma");
      cfg.maybe(ta_lambda, ta.lambda, "lambda");
      cfg.maybe(ta_d, ta.D, "D");
      cfg.maybe(ta_m, ta.m, "m");
      cfg.maybe(ta_t, ta.T, "T");
      cfg.maybe(ta_seed, ta.seed, "seed");
      cfg.maybe(ta_wm, ta.walk_mode, "walk_mode");
      cfg.maybe(ta_ws, ta.walk_scale, "walk_scale");
      ta.seed = env_seed_fallback(ta.seed, ta_seed->count() > 0);
      if (ta.model != "mf" && ta.model != "bpr" && ta_graph->count() == 0)
        throw CLI::RequiredError("--graph (required for decentralized models)");
      return cmd_train(ta);
    }
    if (eval_cmd->parsed()) {
      ConfigOverlay cfg;
      cfg.load(ea.config);
      cfg.maybe(ea_k, ea.k_values, "k");
      return cmd_eval(ea);
    }
    if (sweep_cmd->parsed()) {
      ConfigOverlay cfg;
      cfg.load(sa.config);
      cfg.maybe(sa_model, sa.model, "model");
      cfg.maybe(sa_beta, sa.grid_beta, "grid_beta");
      cfg.maybe(sa_gamma, sa.grid_gamma, "grid_gamma");
      cfg.maybe(sa_d, sa.grid_d, "grid_d");
      cfg.maybe(sa_k, sa.grid_k, "grid_k");
      cfg.maybe(sa_theta, sa.theta, "theta");
      cfg.maybe(sa_alpha, sa.alpha, "alpha");
      cfg.maybe(sa_m, sa.m, "m");
      cfg.maybe(sa_t, sa.T, "T");
      cfg.maybe(sa_seed, sa.seed, "seed");
      cfg.maybe(sa_ws, sa.walk_scale, "walk_scale");
      sa.seed = env_seed_fallback(sa.seed, sa_seed->count() > 0);
      return cmd_sweep(sa);
    }
    if (synth_cmd->parsed()) {
      ConfigOverlay cfg;
      cfg.load(ya.config);
      cfg.maybe(ya_c, ya.cities, "cities");
      cfg.maybe(ya_u, ya.users, "users");
      cfg.maybe(ya_v, ya.items, "items");
      cfg.maybe(ya_g, ya.groups, "groups");
      cfg.maybe(ya_pi, ya.p_in, "p_in");
      cfg.maybe(ya_po, ya.p_out, "p_out");
      cfg.maybe(ya_seed, ya.seed, "seed");
      ya.seed = env_seed_fallback(ya.seed, ya_seed->count() > 0);
      return cmd_synth(ya);
    }
    return kExitUsage;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const dmf::NonFiniteUpdate& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const dmf::DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return kExitData;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
}
