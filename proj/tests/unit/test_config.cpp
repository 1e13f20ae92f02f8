#include <doctest.h>

#include <sstream>

#include "nnpart/config.hpp"
#include "nnpart/errors.hpp"
#include "nnpart/experiment.hpp"

using namespace nnpart;

namespace {

ExperimentConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_config(in);
}

}  // namespace

TEST_CASE("defaults and parsing") {
  const ExperimentConfig d = parse("");
  CHECK(d.dimension == 3);
  CHECK(d.labels == 2);
  CHECK(d.metric == Metric::InnerProduct);
  CHECK(d.mc_samples == 4096);
  CHECK_FALSE(d.i_max.has_value());
  d.validate();

  const ExperimentConfig c = parse(
      "# comment\n"
      "dimension = 2\n"
      "labels=4\n"
      "metric=lp\n"
      "p=2.5\n"
      "delta=0.2\n"
      "solver.mc_samples=512\n"
      "solver.i_max=20\n"
      "solver.c_scale=1\n"
      "centers=0.1,0;0,0.5;-0.5,0;0,-0.5\n");
  CHECK(c.dimension == 2);
  CHECK(c.labels == 4);
  CHECK(c.metric == Metric::Lp);
  CHECK(c.p == 2.5);
  CHECK(c.mc_samples == 512);
  CHECK(*c.i_max == 20);
  const auto centers = c.explicit_centers();
  REQUIRE(centers.has_value());
  CHECK(centers->size() == 4);
  CHECK((*centers)[1][1] == 0.5);
  c.validate();
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(parse("bogus=1\n"), ConfigError);
  CHECK_THROWS_AS(parse("dimension=abc\n"), ConfigError);
  CHECK_THROWS_AS(parse("no equals sign\n"), ConfigError);
  CHECK_THROWS_AS(parse("metric=cosine\n"), ConfigError);
  CHECK_THROWS_AS(parse("labels=1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("metric=lp\np=2.5\n").validate(), ConfigError);             // Δ unset
  CHECK_THROWS_AS(parse("metric=lp\np=2.5\ndelta=0.1\nsolver.c_scale=0.01\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("metric=l2\nalpha=0.5\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("adversary=replay\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("adversary=sideways\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("centers=0,0;1,1,1\n").validate(), ConfigError);
  CHECK_THROWS_AS(parse("grid.nothing=1,2\n"), ConfigError);
  CHECK_THROWS_AS(parse("grid.rounds=1,x\n"), ConfigError);
  parse("metric=lp\np=4\n").validate();
}

TEST_CASE("grid axes keep file order") {
  const ExperimentConfig c = parse("grid.rounds=10,20\ngrid.seed=1,2,3\ngrid.labels=\n");
  REQUIRE(c.grid.size() == 3);
  CHECK(c.grid[0].first == "rounds");
  CHECK(c.grid[1].second.size() == 3);
  CHECK(c.grid[2].second.empty());
}

TEST_CASE("effective config and summary") {
  ExperimentConfig c = parse("rounds=0\n");
  const auto eff = c.effective();
  CHECK(eff.front().first == "dimension");
  bool found = false;
  for (const auto& [k, v] : eff)
    if (k == "solver.i_max") found = v == "auto";
  CHECK(found);

  const RunResult r = run_experiment(c);
  CHECK(r.ledger.rounds() == 0);
  const auto kv = summary_entries(c, r);
  CHECK(kv[0].first == "total_loss");
  CHECK(kv[0].second == "0");
  CHECK(kv[5].first == "seed");
  CHECK(kv[6].first == "config.dimension");
}

TEST_CASE("seed override") {
  ExperimentConfig c = parse("seed=5\n");
  setenv("NNPART_SEED", "77", 1);
  apply_seed_override(c);
  unsetenv("NNPART_SEED");
  CHECK(c.seed == 77);
  apply_seed_override(c);
  CHECK(c.seed == 77);
}

TEST_CASE("experiments are reproducible") {
  const ExperimentConfig c = parse("rounds=150\nlabels=3\ndimension=2\nadversary=adaptive_width\n"
                                   "adversary.candidates=8\nsolver.mc_samples=256\nsolver.burn_in=32\n");
  const RunResult a = run_experiment(c);
  const RunResult b = run_experiment(c);
  REQUIRE(a.ledger.rounds() == 150);
  for (std::size_t i = 0; i < a.ledger.rounds(); ++i) {
    CHECK(a.ledger.records()[i].guess == b.ledger.records()[i].guess);
    CHECK(a.ledger.records()[i].loss == b.ledger.records()[i].loss);
  }
}

TEST_CASE("multiscale and lowerbound experiments") {
  const ExperimentConfig ms = parse("rounds=60\nmetric=lp\np=2.5\ndelta=0.3\ndimension=1\nsolver.c_scale=1\n"
                                    "solver.selection_constant=1\nsolver.mc_samples=256\nsolver.burn_in=32\n");
  const RunResult r = run_experiment(ms);
  CHECK(r.ledger.rounds() == 60);
  for (const auto& rec : r.ledger.records())
    if (rec.mistake) CHECK(rec.loss <= rec.loss_bound + 1e-9);

  const ExperimentConfig lb = parse("rounds=20\ndimension=6\nadversary=lowerbound\nlearner=random\n");
  CHECK(run_experiment(lb).ledger.rounds() == 20);
  CHECK_THROWS_AS(run_experiment(parse("rounds=5\ndimension=3\nadversary=lowerbound\n")), ConfigError);
}
