#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "betacorm/chain.hpp"
#include "betacorm/error.hpp"
#include "betacorm/math.hpp"
#include "betacorm/sampler.hpp"
#include "betacorm/simulate.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

using namespace betacorm;
namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(BETACORM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path fresh_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("samples persist and reload exactly") {
  auto gen = PriorConfig::uniform(3, 0.5);
  gen.c_fixed = 2.0;
  const auto sim = forward_simulate(gen, {4, 4}, 31);

  for (const ShapeMode mode : {ShapeMode::global_vague, ShapeMode::local_vague,
                               ShapeMode::lomax}) {
    auto config = PriorConfig::uniform(3);
    config.shape_mode = mode;
    config.apply_mode_constraints();
    auto samples = run_chain(sim.data, config, {120, 20, 2, 9});
    samples.meta.config_hash = "0123456789abcdef";

    const fs::path dir = fresh_dir("betacorm_samples_io");
    const fs::path path = dir / "chain.csv";
    save_samples(samples, path);
    const auto loaded = load_samples(path);

    REQUIRE(loaded.draws.size() == samples.draws.size());
    for (std::size_t k = 0; k < samples.draws.size(); ++k) {
      CHECK(loaded.draws[k].iter == samples.draws[k].iter);
      CHECK(loaded.draws[k].c == samples.draws[k].c);          // %.17g round trips doubles
      CHECK(loaded.draws[k].p == samples.draws[k].p);
      CHECK(loaded.draws[k].m == samples.draws[k].m);
      CHECK(loaded.draws[k].shapes == samples.draws[k].shapes);
      if (mode == ShapeMode::lomax) {
        CHECK(loaded.draws[k].phi == samples.draws[k].phi);
        CHECK(loaded.draws[k].kappa == samples.draws[k].kappa);
      }
      CHECK(loaded.draws[k].alphas.size() == 0);  // not part of the persisted schema
    }
    CHECK(loaded.meta.shape_mode == mode);
    CHECK(loaded.meta.seed == 9);
    CHECK(loaded.meta.thinning == 2);
    CHECK(loaded.meta.config_hash == "0123456789abcdef");
    if (samples.meta.c_accept_rate) {
      CHECK(*loaded.meta.c_accept_rate == *samples.meta.c_accept_rate);
    }
    fs::remove_all(dir);
  }
}

TEST_CASE("samples header names the columns per schema") {
  auto config = PriorConfig::uniform(2);
  auto gen = PriorConfig::uniform(2, 0.5);
  gen.c_fixed = 1.0;
  const auto sim = forward_simulate(gen, {2, 3}, 1);
  auto samples = run_chain(sim.data, config, {30, 10, 1, 2});
  const fs::path dir = fresh_dir("betacorm_samples_header");
  save_samples(samples, dir / "s.csv");
  std::ifstream in(dir / "s.csv");
  std::string header;
  std::getline(in, header);
  CHECK(header == "iter,c,a,p_1,p_2,m_1_1,m_1_2,m_2_1,m_2_2");
  fs::remove_all(dir);
}

TEST_CASE("credible summaries use interpolated quantiles") {
  PosteriorSamples samples;
  samples.meta.shape_mode = ShapeMode::global_vague;
  for (int k = 1; k <= 100; ++k) {
    Draw draw;
    draw.iter = static_cast<std::uint64_t>(k);
    draw.c = k;
    draw.shapes = Vector::Constant(1, 7.0);
    draw.p = Vector::Constant(1, 0.5);
    draw.m = Matrix::Constant(1, 1, 0.5);
    samples.draws.push_back(draw);
  }
  const auto rows = summarize_credible(samples, 0.95);
  REQUIRE(rows.size() == 2);
  CHECK(rows[0].param == "c");
  CHECK(rows[0].median == doctest::Approx(50.5));
  CHECK(rows[0].lower == doctest::Approx(1.0 + 0.025 * 99.0));
  CHECK(rows[0].upper == doctest::Approx(1.0 + 0.975 * 99.0));
  CHECK(rows[1].param == "a");
  CHECK(rows[1].lower == rows[1].median);  // constant draws collapse the interval
  CHECK(rows[1].median == rows[1].upper);

  PosteriorSamples tiny;
  tiny.meta.shape_mode = ShapeMode::global_vague;
  tiny.draws.push_back(samples.draws[0]);
  CHECK_THROWS_AS(summarize_credible(tiny, 0.95), Error);
  CHECK_THROWS_AS(summarize_credible(samples, 1.5), Error);
}

TEST_CASE("credible interval for c covers the generating value across replications") {
  // 20 seeded replications; the 95% interval should bracket the truth in
  // at least 90% of them
  const double true_c = 3.0;
  int covered = 0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    auto gen = PriorConfig::uniform(30, 0.5);
    gen.c_fixed = true_c;
    gen.shapes_fixed = Vector::Constant(1, 1.0);
    const auto sim = forward_simulate(gen, {20, 20}, seed);

    auto infer = PriorConfig::uniform(30, 0.5);
    const auto samples = run_chain(sim.data, infer, {1500, 300, 2, seed + 1000});
    const auto rows = summarize_credible(samples, 0.95);
    if (rows[0].lower <= true_c && true_c <= rows[0].upper) ++covered;
  }
  CHECK(covered >= 18);
}

TEST_CASE("cli: unknown subcommand exits with usage error") {
  CHECK(run_cli("frobnicate") == 1);
  CHECK(run_cli("") == 1);
  CHECK(run_cli("--help") == 0);
  CHECK(run_cli("train --help") == 0);
}

TEST_CASE("cli: missing files map to the data exit code") {
  const fs::path dir = fresh_dir("betacorm_cli_err");
  CHECK(run_cli("train --data " + (dir / "nope.matrix").string() + " --out " +
                (dir / "s.csv").string()) == 2);
  CHECK(run_cli("select --samples nope.csv --train nope.matrix --validation train --out " +
                (dir / "sel").string()) == 2);
  // select with a bad validation policy is a usage error
  CHECK(run_cli("select --samples nope.csv --train nope.matrix --validation sometimes --out x") ==
        1);
  fs::remove_all(dir);
}

TEST_CASE("cli: full pipeline runs and reproduces byte-identical artifacts") {
  const fs::path dir1 = fresh_dir("betacorm_cli_run1");
  const fs::path dir2 = fresh_dir("betacorm_cli_run2");

  for (const fs::path& dir : {dir1, dir2}) {
    const std::string sim = "simulate --groups 8,6 --features 10 --seed 3 --mode local"
                            " --fix-c 3 --out " + (dir / "sim").string();
    REQUIRE(run_cli(sim) == 0);

    const std::string train = "train --data " + (dir / "sim" / "data.matrix").string() +
                              " --mode local --iters 400 --burnin 100 --thin 3 --seed 5 --out " +
                              (dir / "samples.csv").string();
    REQUIRE(run_cli(train) == 0);

    const std::string report = "report --samples " + (dir / "samples.csv").string() +
                               " --level 0.95 --out " + (dir / "report").string();
    REQUIRE(run_cli(report) == 0);

    const std::string select = "select --samples " + (dir / "samples.csv").string() +
                               " --train " + (dir / "sim" / "data.matrix").string() +
                               " --validation train --out " + (dir / "sel").string();
    REQUIRE(run_cli(select) == 0);

    const std::string classify = "classify --samples " + (dir / "samples.csv").string() +
                                 " --train " + (dir / "sim" / "data.matrix").string() +
                                 " --data " + (dir / "sim" / "data.matrix").string() +
                                 " --subset " + (dir / "sel.features.txt").string() +
                                 " --out " + (dir / "report.csv").string();
    REQUIRE(run_cli(classify) == 0);
  }

  for (const std::string rel :
       {"sim/data.matrix", "sim/truth.csv", "samples.csv", "samples.csv.meta.json",
        "report/credible_samples.csv", "sel.sweep.csv", "sel.features.txt", "report.csv",
        "report.csv.metrics.json"}) {
    CHECK(slurp(dir1 / rel) == slurp(dir2 / rel));
  }

  // draw count matches the schedule
  std::ifstream in(dir1 / "samples.csv");
  std::string line;
  int lines = 0;
  while (std::getline(in, line)) ++lines;
  CHECK(lines == 1 + 100);

  fs::remove_all(dir1);
  fs::remove_all(dir2);
}

TEST_CASE("cli: multi-chain training writes one file per chain") {
  const fs::path dir = fresh_dir("betacorm_cli_chains");
  REQUIRE(run_cli("simulate --groups 6,6 --features 6 --seed 1 --fix-c 2 --out " +
                  (dir / "sim").string()) == 0);
  REQUIRE(run_cli("train --data " + (dir / "sim" / "data.matrix").string() +
                  " --iters 60 --burnin 20 --thin 1 --seed 2 --chains 2 --out " +
                  (dir / "s.csv").string()) == 0);
  CHECK(fs::exists(dir / "s.chain1.csv"));
  CHECK(fs::exists(dir / "s.chain2.csv"));
  // distinct seeds give distinct chains
  CHECK(slurp(dir / "s.chain1.csv") != slurp(dir / "s.chain2.csv"));

  // two chains feed the profile-distance report
  REQUIRE(run_cli("report --samples " + (dir / "s.chain1.csv").string() + " " +
                  (dir / "s.chain2.csv").string() + " --data " +
                  (dir / "sim" / "data.matrix").string() + " --out " +
                  (dir / "rep").string()) == 0);
  CHECK(fs::exists(dir / "rep" / "profile_distances.csv"));
  const std::string distances = slurp(dir / "rep" / "profile_distances.csv");
  CHECK(distances.find("s.chain1") != std::string::npos);
  fs::remove_all(dir);
}

TEST_CASE("cli: ingest splits and builds matrices from hex dumps") {
  const fs::path dir = fresh_dir("betacorm_cli_ingest");
  const fs::path raw = dir / "raw";
  fs::create_directories(raw);
  Rng rng(2);
  std::ofstream labels(dir / "labels.csv");
  for (int f = 0; f < 2; ++f) {
    for (int k = 0; k < 4; ++k) {
      const std::string id = "doc" + std::to_string(f) + std::to_string(k);
      std::ofstream file(raw / (id + ".bytes"));
      file << "00401000";
      for (int t = 0; t < 150; ++t) {
        char buf[8];
        std::snprintf(buf, sizeof buf, " %02X", static_cast<unsigned>(rng.next() % 3));
        file << buf;
      }
      file << "\n";
      labels << id << "," << "fam" << f << "\n";
    }
  }
  labels.close();

  REQUIRE(run_cli("ingest --input " + raw.string() + " --labels " +
                  (dir / "labels.csv").string() + " --n 4 --filter all-families --split 0.5" +
                  " --seed 3 --out " + (dir / "out").string()) == 0);
  const auto train = load_matrix(dir / "out" / "train.matrix");
  const auto test = load_matrix(dir / "out" / "test.matrix");
  CHECK(train.rows() == 4);
  CHECK(test.rows() == 4);
  CHECK(train.num_features() == test.num_features());
  CHECK(train.feature_labels == test.feature_labels);
  fs::remove_all(dir);
}

TEST_CASE("cli: flat key=value config file feeds flags, flags win") {
  const fs::path dir = fresh_dir("betacorm_cli_config");
  REQUIRE(run_cli("simulate --groups 6,6 --features 5 --seed 2 --fix-c 2 --out " +
                  (dir / "sim").string()) == 0);
  std::ofstream cfg(dir / "run.cfg");
  cfg << "# schedule\n"
      << "iters=200\n"
      << "burnin=50\n"
      << "thin=3\n"
      << "mode=local\n"
      << "seed=4\n";
  cfg.close();

  REQUIRE(run_cli("train --config " + (dir / "run.cfg").string() + " --data " +
                  (dir / "sim" / "data.matrix").string() + " --out " +
                  (dir / "s.csv").string()) == 0);
  const auto samples = load_samples(dir / "s.csv");
  CHECK(samples.draws.size() == 50);  // (200 - 50) / 3
  CHECK(samples.meta.seed == 4);
  CHECK(samples.meta.shape_mode == ShapeMode::local_vague);

  // a command-line flag overrides the config file value
  REQUIRE(run_cli("train --config " + (dir / "run.cfg").string() + " --data " +
                  (dir / "sim" / "data.matrix").string() + " --thin 5 --out " +
                  (dir / "s2.csv").string()) == 0);
  CHECK(load_samples(dir / "s2.csv").draws.size() == 30);  // (200 - 50) / 5
  fs::remove_all(dir);
}

TEST_CASE("cli: heldout validation and retrain-classify paths") {
  const fs::path dir = fresh_dir("betacorm_cli_heldout");
  REQUIRE(run_cli("simulate --groups 8,8 --features 8 --seed 6 --mode local --fix-c 3 --out " +
                  (dir / "sim").string()) == 0);
  const std::string data = (dir / "sim" / "data.matrix").string();
  REQUIRE(run_cli("train --data " + data +
                  " --mode local --iters 300 --burnin 60 --thin 2 --seed 8 --out " +
                  (dir / "s.csv").string()) == 0);

  REQUIRE(run_cli("select --samples " + (dir / "s.csv").string() + " --train " + data +
                  " --validation heldout --heldout " + data + " --out " +
                  (dir / "sel").string()) == 0);
  CHECK(fs::exists(dir / "sel.features.txt"));

  // retrain on the restricted matrix instead of reusing the samples
  REQUIRE(run_cli("classify --train " + data + " --data " + data + " --subset " +
                  (dir / "sel.features.txt").string() +
                  " --retrain --mode local --iters 200 --burnin 40 --thin 2 --seed 9 --out " +
                  (dir / "retrained.csv").string()) == 0);
  CHECK(fs::exists(dir / "retrained.csv.metrics.json"));
  fs::remove_all(dir);
}
