// Command-line front end: simulate, ingest, train, select, classify, report.
// Every artifact file is stamped with the seed and a hash of the effective
// configuration so identical inputs reproduce byte-identical outputs.

#include "betacorm/chain.hpp"
#include "betacorm/error.hpp"
#include "betacorm/matrix.hpp"
#include "betacorm/ngram.hpp"
#include "betacorm/predict.hpp"
#include "betacorm/prior.hpp"
#include "betacorm/sampler.hpp"
#include "betacorm/selection.hpp"
#include "betacorm/simulate.hpp"

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace betacorm;

namespace {

std::string format17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::uint64_t fnv1a(const std::string& text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(const std::map<std::string, std::string>& kv) {
  std::string canonical;
  for (const auto& [k, v] : kv) canonical += k + "=" + v + "\n";
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(canonical)));
  return buf;
}

std::vector<Index> parse_sizes(const std::string& text) {
  std::vector<Index> sizes;
  std::stringstream ss(text);
  std::string field;
  while (std::getline(ss, field, ',')) {
    try {
      sizes.push_back(std::stol(field));
    } catch (const std::exception&) {
      throw Error(ErrorKind::usage, "bad group size '" + field + "'");
    }
  }
  if (sizes.empty()) throw Error(ErrorKind::usage, "no group sizes given");
  return sizes;
}

// Flat key=value configuration: the file's pairs are injected as
// --key=value arguments right after the subcommand token, so anything given
// on the command line itself takes precedence (TakeLast policy).
std::vector<std::string> expand_config_args(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);

  std::string config_path;
  for (std::size_t k = 0; k < args.size(); ++k) {
    if (args[k] == "--config" && k + 1 < args.size()) {
      config_path = args[k + 1];
    } else if (args[k].rfind("--config=", 0) == 0) {
      config_path = args[k].substr(9);
    }
  }
  if (config_path.empty() || args.empty()) return args;

  std::ifstream in(config_path);
  if (!in) throw Error(ErrorKind::data, "cannot open config file '" + config_path + "'");
  auto trim = [](std::string s) {
    const auto begin = s.find_first_not_of(" \t\r");
    const auto end = s.find_last_not_of(" \t\r");
    return begin == std::string::npos ? std::string{} : s.substr(begin, end - begin + 1);
  };
  std::vector<std::string> injected;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text[0] == '#') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw Error(ErrorKind::usage, config_path + ":" + std::to_string(line_no) +
                                        ": expected key=value, got '" + text + "'");
    }
    injected.push_back("--" + trim(text.substr(0, eq)) + "=" + trim(text.substr(eq + 1)));
  }
  args.insert(args.begin() + 1, injected.begin(), injected.end());
  return args;
}

std::ofstream open_output(const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::data, "cannot open '" + path.string() + "' for writing");
  return out;
}

// Provenance comment carried by every text artifact; readers skip '#' lines.
std::string stamp(const std::string& config_hash, std::uint64_t seed) {
  return "# config=" + config_hash + " seed=" + std::to_string(seed) + "\n";
}

// Shared knobs for the prior structure; maps one-to-one onto config keys.
struct PriorOptions {
  std::string mode = "global";
  double qbar = 0.5;
  double x0 = 1e-5;
  double c_shape = 0.1;
  double c_rate = 0.1;
  double a_shape = 0.1;
  double a_rate = 0.1;
  double hyper_shape = 0.1;
  double hyper_rate = 0.1;
  double fix_c = 0.0;       // 0 means "not fixed"
  double fix_a = 0.0;
  std::string q_file;
  std::string shapes_file;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--mode", mode, "shape prior: global|local|obj-lomax|lomax|half-cauchy")
        ->capture_default_str();
    cmd.add_option("--qbar", qbar, "uniform base weight q")->capture_default_str();
    cmd.add_option("--x0", x0, "spike cut point for slab summaries")->capture_default_str();
    cmd.add_option("--c-shape", c_shape, "gamma prior shape on c")->capture_default_str();
    cmd.add_option("--c-rate", c_rate, "gamma prior rate on c")->capture_default_str();
    cmd.add_option("--a-shape", a_shape, "gamma prior shape on a (or each a_i)")
        ->capture_default_str();
    cmd.add_option("--a-rate", a_rate, "gamma prior rate on a (or each a_i)")
        ->capture_default_str();
    cmd.add_option("--hyper-shape", hyper_shape, "hyperprior shape on kappa/phi")
        ->capture_default_str();
    cmd.add_option("--hyper-rate", hyper_rate, "hyperprior rate on kappa/phi")
        ->capture_default_str();
    cmd.add_option("--fix-c", fix_c, "fix the concentration c (skip its update)");
    cmd.add_option("--fix-a", fix_a, "fix all shapes at one value (skip their update)");
    cmd.add_option("--q-file", q_file, "per-feature q values, one per line");
    cmd.add_option("--shapes-file", shapes_file, "fixed per-feature shapes, one per line");
  }

  Vector read_vector_file(const std::string& path, Index expected) const {
    std::ifstream in(path);
    if (!in) throw Error(ErrorKind::data, "cannot open '" + path + "'");
    std::vector<double> values;
    double v = 0.0;
    while (in >> v) values.push_back(v);
    if (expected >= 0 && static_cast<Index>(values.size()) != expected) {
      throw Error(ErrorKind::data, "'" + path + "' has " + std::to_string(values.size()) +
                                       " values, expected " + std::to_string(expected));
    }
    return Eigen::Map<const Vector>(values.data(), static_cast<Index>(values.size()));
  }

  PriorConfig build(Index m_features) const {
    PriorConfig config;
    config.q = q_file.empty() ? Vector::Constant(m_features, qbar)
                              : read_vector_file(q_file, m_features);
    config.c_prior = {c_shape, c_rate};
    config.shape_mode = shape_mode_from_string(mode);
    config.a_prior = {a_shape, a_rate};
    config.hyper_prior = {hyper_shape, hyper_rate};
    config.x0 = x0;
    config.apply_mode_constraints();
    if (fix_c > 0.0) config.c_fixed = fix_c;
    if (!shapes_file.empty()) {
      config.shapes_fixed = read_vector_file(shapes_file, m_features);
    } else if (fix_a > 0.0) {
      config.shapes_fixed =
          Vector::Constant(config.per_feature_shapes() ? m_features : 1, fix_a);
    }
    config.validate(m_features);
    return config;
  }

  void collect(std::map<std::string, std::string>& kv) const {
    kv["mode"] = mode;
    kv["qbar"] = format17(qbar);
    kv["x0"] = format17(x0);
    kv["c-shape"] = format17(c_shape);
    kv["c-rate"] = format17(c_rate);
    kv["a-shape"] = format17(a_shape);
    kv["a-rate"] = format17(a_rate);
    kv["hyper-shape"] = format17(hyper_shape);
    kv["hyper-rate"] = format17(hyper_rate);
    if (fix_c > 0.0) kv["fix-c"] = format17(fix_c);
    if (fix_a > 0.0) kv["fix-a"] = format17(fix_a);
    if (!q_file.empty()) kv["q-file"] = q_file;
    if (!shapes_file.empty()) kv["shapes-file"] = shapes_file;
  }
};

struct ScheduleOptions {
  std::uint64_t iters = 251000;
  std::uint64_t burnin = 1000;
  std::uint64_t thin = 250;
  std::uint64_t seed = 1;

  void add_to(CLI::App& cmd) {
    cmd.add_option("--iters", iters, "total MCMC iterations")->capture_default_str();
    cmd.add_option("--burnin", burnin, "burn-in iterations")->capture_default_str();
    cmd.add_option("--thin", thin, "thinning interval")->capture_default_str();
    cmd.add_option("--seed", seed, "RNG seed")->capture_default_str();
  }

  Schedule build() const { return {iters, burnin, thin, seed}; }

  void collect(std::map<std::string, std::string>& kv) const {
    kv["iters"] = std::to_string(iters);
    kv["burnin"] = std::to_string(burnin);
    kv["thin"] = std::to_string(thin);
    kv["seed"] = std::to_string(seed);
  }
};

void write_ids(const fs::path& path, const std::vector<std::string>& ids,
               const ArtifactMeta& meta) {
  auto out = open_output(path);
  out << stamp(meta.config_hash, meta.seed);
  for (const auto& id : ids) out << id << "\n";
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::data, "cannot open '" + path.string() + "'");
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') lines.push_back(line);
  }
  return lines;
}

fs::path chain_path(const fs::path& base, int chain, int total) {
  if (total <= 1) return base;
  fs::path p = base;
  const std::string stem = p.stem().string();
  const std::string ext = p.extension().string();
  p.replace_filename(stem + ".chain" + std::to_string(chain + 1) + ext);
  return p;
}

// ---------------------------------------------------------------------------
// simulate

struct SimulateArgs {
  PriorOptions prior;
  std::string groups;
  Index features = 0;
  std::uint64_t seed = 1;
  std::string out;
};

void run_simulate(const SimulateArgs& args) {
  const std::vector<Index> sizes = parse_sizes(args.groups);
  if (args.features < 1) throw Error(ErrorKind::usage, "--features must be >= 1");
  const PriorConfig config = args.prior.build(args.features);

  std::map<std::string, std::string> kv;
  args.prior.collect(kv);
  kv["command"] = "simulate";
  kv["groups"] = args.groups;
  kv["features"] = std::to_string(args.features);
  kv["seed"] = std::to_string(args.seed);
  const ArtifactMeta meta{args.seed, hash_hex(kv)};

  ForwardSimulation sim = forward_simulate(config, sizes, args.seed);
  fs::create_directories(args.out);
  save_matrix(sim.data, fs::path(args.out) / "data.matrix", meta);

  PosteriorSamples truth;
  Draw draw;
  draw.iter = 0;
  draw.c = sim.truth.c;
  draw.shapes = sim.truth.shapes;
  draw.p = sim.truth.p;
  draw.m = sim.truth.m;
  draw.alphas = sim.truth.alphas;
  draw.phi = sim.truth.phi;
  draw.kappa = sim.truth.kappa;
  truth.draws.push_back(std::move(draw));
  truth.meta.seed = args.seed;
  truth.meta.shape_mode = config.shape_mode;
  truth.meta.config_hash = meta.config_hash;
  save_samples(truth, fs::path(args.out) / "truth.csv");

  std::cout << "simulate: wrote " << sim.data.rows() << "x" << sim.data.num_features()
            << " matrix to " << args.out << "\n";
}

// ---------------------------------------------------------------------------
// ingest

struct IngestArgs {
  std::string input;
  std::string labels;
  std::string out;
  int n = 4;
  std::string filter = "all-families";
  double split = 0.0;
  std::uint64_t seed = 1;
};

void run_ingest(const IngestArgs& args) {
  const VocabularyFilter filter = [&] {
    if (args.filter == "all-families") return VocabularyFilter::all_families;
    if (args.filter == "none") return VocabularyFilter::none;
    throw Error(ErrorKind::usage, "--filter must be all-families or none");
  }();

  std::map<std::string, std::string> kv{{"command", "ingest"},
                                        {"n", std::to_string(args.n)},
                                        {"filter", args.filter},
                                        {"split", format17(args.split)},
                                        {"seed", std::to_string(args.seed)}};
  const ArtifactMeta meta{args.seed, hash_hex(kv)};

  const std::vector<HexDocument> docs = load_documents(args.input, args.labels);
  fs::create_directories(args.out);

  if (args.split > 0.0) {
    const TrainTestSplit split = split_train_test(docs, args.split, args.seed);
    const BuiltMatrix train = build_matrix(split.train, args.n, filter);
    const BuiltMatrix test = build_matrix(split.test, train.vocabulary);
    save_matrix(train.matrix, fs::path(args.out) / "train.matrix", meta);
    save_matrix(test.matrix, fs::path(args.out) / "test.matrix", meta);
    write_ids(fs::path(args.out) / "train.ids", train.row_ids, meta);
    write_ids(fs::path(args.out) / "test.ids", test.row_ids, meta);
    std::cout << "ingest: " << train.matrix.rows() << " train / " << test.matrix.rows()
              << " test rows, " << train.vocabulary.grams.size() << " features\n";
  } else {
    const BuiltMatrix built = build_matrix(docs, args.n, filter);
    save_matrix(built.matrix, fs::path(args.out) / "data.matrix", meta);
    write_ids(fs::path(args.out) / "data.ids", built.row_ids, meta);
    std::cout << "ingest: " << built.matrix.rows() << " rows, "
              << built.vocabulary.grams.size() << " features\n";
  }
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  PriorOptions prior;
  ScheduleOptions schedule;
  std::string data;
  std::string out;
  int chains = 1;
};

void run_train(const TrainArgs& args) {
  if (args.chains < 1) throw Error(ErrorKind::usage, "--chains must be >= 1");
  const GroupedBinaryMatrix data = load_matrix(args.data);
  const PriorConfig config = args.prior.build(data.num_features());

  std::map<std::string, std::string> kv;
  args.prior.collect(kv);
  args.schedule.collect(kv);
  kv["command"] = "train";
  kv["chains"] = std::to_string(args.chains);
  const std::string config_hash = hash_hex(kv);

  std::vector<PosteriorSamples> results(static_cast<std::size_t>(args.chains));
  std::vector<std::exception_ptr> failures(static_cast<std::size_t>(args.chains));
  std::vector<std::thread> workers;
  for (int chain = 0; chain < args.chains; ++chain) {
    workers.emplace_back([&, chain] {
      try {
        Schedule schedule = args.schedule.build();
        schedule.seed += static_cast<std::uint64_t>(chain);
        results[static_cast<std::size_t>(chain)] = run_chain(data, config, schedule);
      } catch (...) {
        failures[static_cast<std::size_t>(chain)] = std::current_exception();
      }
    });
  }
  for (auto& worker : workers) worker.join();
  for (const auto& failure : failures) {
    if (failure) std::rethrow_exception(failure);
  }

  for (int chain = 0; chain < args.chains; ++chain) {
    auto& samples = results[static_cast<std::size_t>(chain)];
    samples.meta.config_hash = config_hash;
    const fs::path path = chain_path(args.out, chain, args.chains);
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    save_samples(samples, path);
    std::cout << "train: chain " << (chain + 1) << " wrote " << samples.draws.size()
              << " draws to " << path.string();
    if (samples.meta.c_accept_rate) {
      std::cout << " (c acceptance " << *samples.meta.c_accept_rate << ")";
    }
    std::cout << "\n";
  }
}

// ---------------------------------------------------------------------------
// select

struct SelectArgs {
  std::string samples;
  std::string train;
  std::string validation;  // heldout|train, mandatory
  std::string heldout;
  std::string priors = "empirical";
  std::string out;
};

PriorWeighting parse_weighting(const std::string& name) {
  if (name == "empirical") return PriorWeighting::empirical;
  if (name == "uniform") return PriorWeighting::uniform;
  throw Error(ErrorKind::usage, "--priors must be empirical or uniform");
}

void run_select(const SelectArgs& args) {
  if (args.validation != "train" && args.validation != "heldout") {
    throw Error(ErrorKind::usage, "--validation must be given as heldout or train");
  }
  if (args.validation == "heldout" && args.heldout.empty()) {
    throw Error(ErrorKind::usage, "--validation heldout requires --heldout FILE");
  }
  parse_weighting(args.priors);

  const PosteriorSamples samples = load_samples(args.samples);
  const GroupedBinaryMatrix train = load_matrix(args.train);
  GroupedBinaryMatrix heldout;
  const GroupedBinaryMatrix* validation = &train;
  if (args.validation == "heldout") {
    heldout = load_matrix(args.heldout);
    validation = &heldout;
  }

  const PredictiveProfile profile =
      predictive_profile(samples, train, parse_weighting(args.priors));
  const Vector means = posterior_shape_means(samples);
  const SelectionResult result = threshold_sweep(means, *validation, profile);

  std::map<std::string, std::string> kv{{"command", "select"},
                                        {"validation", args.validation},
                                        {"priors", args.priors},
                                        {"samples-config", samples.meta.config_hash}};
  const std::string config_hash = hash_hex(kv);

  auto sweep_out = open_output(args.out + ".sweep.csv");
  sweep_out << stamp(config_hash, samples.meta.seed);
  sweep_out << "threshold,count,accuracy\n";
  for (const auto& row : result.sweep_table) {
    sweep_out << format17(row.threshold) << "," << row.count << "," << format17(row.accuracy)
              << "\n";
  }

  auto features_out = open_output(args.out + ".features.txt");
  features_out << stamp(config_hash, samples.meta.seed);
  for (const Index i : result.selected) {
    features_out << train.feature_labels[static_cast<std::size_t>(i)] << "\n";
  }

  nlohmann::json meta{{"threshold", result.threshold},
                      {"count", result.selected.size()},
                      {"accuracy", result.accuracy_at_threshold},
                      {"validation", args.validation},
                      {"seed", samples.meta.seed},
                      {"config_hash", config_hash}};
  open_output(args.out + ".meta.json") << meta.dump(2) << "\n";

  std::cout << "select: " << result.selected.size() << " features at threshold "
            << result.threshold << " (validation accuracy " << result.accuracy_at_threshold
            << ")\n";
}

// ---------------------------------------------------------------------------
// classify

struct ClassifyArgs {
  std::string samples;
  std::string train;
  std::string data;
  std::string ids;
  std::string subset;
  std::string priors = "empirical";
  std::string out;
  bool retrain = false;
  PriorOptions prior;        // used only with --retrain
  ScheduleOptions schedule;  // used only with --retrain
};

std::vector<Index> subset_indices(const GroupedBinaryMatrix& train, const fs::path& path) {
  std::map<std::string, Index> index_of;
  for (std::size_t i = 0; i < train.feature_labels.size(); ++i) {
    index_of[train.feature_labels[i]] = static_cast<Index>(i);
  }
  std::vector<Index> subset;
  for (const std::string& label : read_lines(path)) {
    const auto it = index_of.find(label);
    if (it == index_of.end()) {
      throw Error(ErrorKind::data, "subset feature '" + label + "' not in the training matrix");
    }
    subset.push_back(it->second);
  }
  if (subset.empty()) throw Error(ErrorKind::data, "subset file is empty");
  std::sort(subset.begin(), subset.end());
  return subset;
}

void run_classify(const ClassifyArgs& args) {
  GroupedBinaryMatrix train = load_matrix(args.train);
  GroupedBinaryMatrix test = load_matrix(args.data);
  if (test.num_features() != train.num_features()) {
    throw Error(ErrorKind::data, "test matrix features do not match the training matrix");
  }

  std::vector<Index> subset;
  if (!args.subset.empty()) subset = subset_indices(train, args.subset);

  PosteriorSamples samples;
  PredictiveProfile profile;
  std::vector<Index> effective_subset;
  if (args.retrain) {
    if (subset.empty()) throw Error(ErrorKind::usage, "--retrain requires --subset");
    SelectionResult restriction;
    restriction.selected = subset;
    train = select_features(restriction, train);
    test = select_features(restriction, test);
    const PriorConfig config = args.prior.build(train.num_features());
    samples = run_chain(train, config, args.schedule.build());
    profile = predictive_profile(samples, train, parse_weighting(args.priors));
  } else {
    samples = load_samples(args.samples);
    profile = predictive_profile(samples, train, parse_weighting(args.priors));
    effective_subset = subset;
  }

  std::vector<std::string> ids;
  if (!args.ids.empty()) {
    ids = read_lines(args.ids);
    if (ids.size() != static_cast<std::size_t>(test.rows())) {
      throw Error(ErrorKind::data, "ids file row count does not match the test matrix");
    }
  } else {
    for (Index r = 0; r < test.rows(); ++r) ids.push_back("row" + std::to_string(r + 1));
  }

  auto out = open_output(args.out);
  out << stamp(samples.meta.config_hash, samples.meta.seed);
  out << "id,true,predicted";
  for (Index j = 0; j < test.num_groups(); ++j) {
    out << ",score_" << test.group_labels[static_cast<std::size_t>(j)];
  }
  out << "\n";

  std::vector<Index> predicted;
  std::vector<Index> truth;
  for (Index r = 0; r < test.rows(); ++r) {
    const Classification result =
        classify(test.entries.row(r).transpose(), profile, effective_subset);
    const Index true_group = test.group_of_row(r);
    predicted.push_back(result.group);
    truth.push_back(true_group);
    out << ids[static_cast<std::size_t>(r)] << ","
        << test.group_labels[static_cast<std::size_t>(true_group)] << ","
        << test.group_labels[static_cast<std::size_t>(result.group)];
    for (Index j = 0; j < test.num_groups(); ++j) out << "," << format17(result.log_scores[j]);
    out << "\n";
  }

  const Metrics metrics = evaluate_metrics(predicted, truth, test.num_groups());
  nlohmann::json metrics_json{{"accuracy", metrics.accuracy},
                              {"precision", metrics.precision},
                              {"recall", metrics.recall},
                              {"f1", metrics.f1},
                              {"rows", test.rows()},
                              {"subset_size", args.subset.empty() ? test.num_features()
                                                                  : static_cast<Index>(subset.size())},
                              {"seed", samples.meta.seed},
                              {"config_hash", samples.meta.config_hash}};
  open_output(args.out + ".metrics.json") << metrics_json.dump(2) << "\n";

  std::printf("classify: accuracy %.2f%% precision %.2f%% recall %.2f%% f1 %.2f%%\n",
              100.0 * metrics.accuracy, 100.0 * metrics.precision, 100.0 * metrics.recall,
              100.0 * metrics.f1);
}

// ---------------------------------------------------------------------------
// report

struct ReportArgs {
  std::vector<std::string> samples;
  std::string data;
  double level = 0.95;
  std::string out;
};

void run_report(const ReportArgs& args) {
  if (args.samples.empty()) throw Error(ErrorKind::usage, "report needs at least one --samples");
  fs::create_directories(args.out);

  std::vector<PosteriorSamples> all;
  for (const auto& path : args.samples) {
    all.push_back(load_samples(path));
    const auto& samples = all.back();
    const std::vector<CredibleRow> rows = summarize_credible(samples, args.level);
    const std::string stem = fs::path(path).stem().string();
    auto out = open_output(fs::path(args.out) / ("credible_" + stem + ".csv"));
    out << stamp(samples.meta.config_hash, samples.meta.seed);
    out << "param,lower,median,upper\n";
    for (const auto& row : rows) {
      out << row.param << "," << format17(row.lower) << "," << format17(row.median) << ","
          << format17(row.upper) << "\n";
    }
  }

  if (all.size() >= 2) {
    if (args.data.empty()) {
      throw Error(ErrorKind::usage, "profile distances require --data for the training matrix");
    }
    const GroupedBinaryMatrix data = load_matrix(args.data);
    std::vector<PredictiveProfile> profiles;
    for (const auto& samples : all) profiles.push_back(predictive_profile(samples, data));

    auto out = open_output(fs::path(args.out) / "profile_distances.csv");
    out << stamp(all.front().meta.config_hash, all.front().meta.seed);
    out << "profile";
    for (const auto& path : args.samples) out << "," << fs::path(path).stem().string();
    out << "\n";
    for (std::size_t r = 0; r < profiles.size(); ++r) {
      out << fs::path(args.samples[r]).stem().string();
      for (std::size_t c = 0; c < profiles.size(); ++c) {
        out << "," << format17(profile_distance(profiles[r], profiles[c]));
      }
      out << "\n";
    }
  }
  std::cout << "report: wrote credible tables for " << all.size() << " sample file(s) to "
            << args.out << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Beta compound-random-measure modeling of grouped binary n-gram profiles"};
  app.require_subcommand(1);
  app.fallthrough(false);
  std::string config_file;

  SimulateArgs simulate_args;
  auto* cmd_simulate = app.add_subcommand("simulate", "forward-simulate a synthetic matrix");
  cmd_simulate->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_simulate->add_option("--config", config_file, "flat key=value config file");
  simulate_args.prior.add_to(*cmd_simulate);
  cmd_simulate->add_option("--groups", simulate_args.groups, "comma-separated group sizes")
      ->required();
  cmd_simulate->add_option("--features", simulate_args.features, "number of features")->required();
  cmd_simulate->add_option("--seed", simulate_args.seed, "RNG seed")->capture_default_str();
  cmd_simulate->add_option("--out", simulate_args.out, "output directory")->required();
  cmd_simulate->callback([&] { run_simulate(simulate_args); });

  IngestArgs ingest_args;
  auto* cmd_ingest = app.add_subcommand("ingest", "build matrices from hex-dump files");
  cmd_ingest->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_ingest->add_option("--config", config_file, "flat key=value config file");
  cmd_ingest->add_option("--input", ingest_args.input, "directory of hex-dump files")->required();
  cmd_ingest->add_option("--labels", ingest_args.labels, "two-column id->family label file")
      ->required();
  cmd_ingest->add_option("--out", ingest_args.out, "output directory")->required();
  cmd_ingest->add_option("--n", ingest_args.n, "gram length")->capture_default_str();
  cmd_ingest->add_option("--filter", ingest_args.filter, "vocabulary filter: all-families|none")
      ->capture_default_str();
  cmd_ingest->add_option("--split", ingest_args.split, "train fraction for a stratified split");
  cmd_ingest->add_option("--seed", ingest_args.seed, "split seed")->capture_default_str();
  cmd_ingest->callback([&] { run_ingest(ingest_args); });

  TrainArgs train_args;
  auto* cmd_train = app.add_subcommand("train", "run the Gibbs sampler");
  cmd_train->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_train->add_option("--config", config_file, "flat key=value config file");
  train_args.prior.add_to(*cmd_train);
  train_args.schedule.add_to(*cmd_train);
  cmd_train->add_option("--data", train_args.data, "training matrix file")->required();
  cmd_train->add_option("--out", train_args.out, "samples output file")->required();
  cmd_train->add_option("--chains", train_args.chains, "independent seeded chains")
      ->capture_default_str();
  cmd_train->callback([&] { run_train(train_args); });

  SelectArgs select_args;
  auto* cmd_select = app.add_subcommand("select", "sweep shape thresholds for feature selection");
  cmd_select->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_select->add_option("--config", config_file, "flat key=value config file");
  cmd_select->add_option("--samples", select_args.samples, "posterior samples file")->required();
  cmd_select->add_option("--train", select_args.train, "training matrix file")->required();
  cmd_select->add_option("--validation", select_args.validation,
                         "validation policy: heldout|train (mandatory, no default)")
      ->required();
  cmd_select->add_option("--heldout", select_args.heldout, "held-out matrix file");
  cmd_select->add_option("--priors", select_args.priors, "class priors: empirical|uniform")
      ->capture_default_str();
  cmd_select->add_option("--out", select_args.out, "output prefix")->required();
  cmd_select->callback([&] { run_select(select_args); });

  ClassifyArgs classify_args;
  auto* cmd_classify = app.add_subcommand("classify", "classify observations and report metrics");
  cmd_classify->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_classify->add_option("--config", config_file, "flat key=value config file");
  cmd_classify->add_option("--samples", classify_args.samples, "posterior samples file");
  cmd_classify->add_option("--train", classify_args.train, "training matrix file")->required();
  cmd_classify->add_option("--data", classify_args.data, "matrix to classify")->required();
  cmd_classify->add_option("--ids", classify_args.ids, "row ids file");
  cmd_classify->add_option("--subset", classify_args.subset, "selected feature labels file");
  cmd_classify->add_option("--priors", classify_args.priors, "class priors: empirical|uniform")
      ->capture_default_str();
  cmd_classify->add_option("--out", classify_args.out, "report csv path")->required();
  cmd_classify->add_flag("--retrain", classify_args.retrain,
                         "re-run the chain on the restricted training matrix");
  classify_args.prior.add_to(*cmd_classify);
  classify_args.schedule.add_to(*cmd_classify);
  cmd_classify->callback([&] {
    if (!classify_args.retrain && classify_args.samples.empty()) {
      throw Error(ErrorKind::usage, "classify requires --samples (or --retrain)");
    }
    run_classify(classify_args);
  });

  ReportArgs report_args;
  auto* cmd_report = app.add_subcommand("report", "credible intervals and profile distances");
  cmd_report->option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  cmd_report->add_option("--config", config_file, "flat key=value config file");
  cmd_report->add_option("--samples", report_args.samples, "posterior samples file(s)")
      ->required()
      ->take_all();
  cmd_report->add_option("--data", report_args.data, "training matrix (for profile distances)");
  cmd_report->add_option("--level", report_args.level, "credible level")->capture_default_str();
  cmd_report->add_option("--out", report_args.out, "output directory")->required();
  cmd_report->callback([&] { run_report(report_args); });

  try {
    std::vector<std::string> args = expand_config_args(argc, argv);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error[usage]: " << e.what() << "\n";
    std::cerr << app.help() << std::flush;
    return 1;
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::usage:
        std::cerr << "error[usage]: " << e.what() << "\n";
        return 1;
      case ErrorKind::data:
        std::cerr << "error[data]: " << e.what() << "\n";
        return 2;
      case ErrorKind::numeric:
        std::cerr << "error[numeric]: " << e.what() << "\n";
        return 3;
    }
  } catch (const std::exception& e) {
    std::cerr << "error[data]: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
