#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <omp.h>

#include <CLI11.hpp>
#include <json.hpp>

#include "shortseason/errors.hpp"
#include "shortseason/io.hpp"
#include "shortseason/pipeline.hpp"
#include "shortseason/random.hpp"
#include "shortseason/simulator.hpp"
#include "shortseason/strength.hpp"
#include "shortseason/synthetic.hpp"

namespace ss = shortseason;
using nlohmann::json;

namespace {

constexpr const char* kThreadsEnv = "SHORTSEASON_THREADS";

void applyThreadEnv() {
  const char* v = std::getenv(kThreadsEnv);
  if (v == nullptr || *v == '\0') return;
  char* end = nullptr;
  const long n = std::strtol(v, &end, 10);
  if (*end != '\0' || n < 1) throw ss::ConfigError(std::string(kThreadsEnv) + " must be a positive integer, got '" + v + "'");
  omp_set_num_threads(static_cast<int>(n));
}

void emit(const json& report, const std::string& format) {
  if (format == "csv") {
    std::cout << ss::jsonToCsv(report);
  } else {
    std::cout << report.dump(2) << '\n';
  }
}

struct Options {
  ss::RunConfig run;
  std::string targets = "auto";
  std::string policy = "reject";
  std::string solver = "pw-fw";
  std::string teamsPath, remainingPath, playedPath, probsPath, targetsPath;
  std::string trainPath, remainingFeaturesPath, simProbsPath, schedulePath, outcomesPath, manifestPath;
  std::uint64_t seed = 0;
  std::string format = "json";
};

std::optional<std::string> opt(const std::string& s) { return s.empty() ? std::nullopt : std::optional<std::string>(s); }

void addLeague(CLI::App* app, Options& o, bool required) {
  auto* teams = app->add_option("--teams", o.teamsPath, "teams.csv");
  auto* rem = app->add_option("--remaining", o.remainingPath, "remaining.csv");
  if (required) {
    teams->required();
    rem->required();
  }
  app->add_option("--played", o.playedPath, "played.csv cross-checked against teams.csv");
  app->add_option("--probs", o.probsPath, "probs.csv for the optimizer");
  app->add_option("--targets-file", o.targetsPath, "team_id,home_target,away_target");
  app->add_option("--targets", o.targets, "auto or explicit")->check(CLI::IsMember({"auto", "explicit"}));
  app->add_option("-m,--short-season-length", o.run.shortSeasonLength, "games per team in the shortened season");
  app->add_option("--probability-policy", o.policy, "reject or clamp probabilities on {0,1}")
      ->check(CLI::IsMember({"reject", "clamp"}));
  app->add_option("--sim-probs", o.simProbsPath, "evaluator probabilities");
  app->add_option("--seed", o.seed, "master seed for every random stage");
  app->add_option("-o,--out", o.run.outputDir, "output directory");
  app->add_option("--playoff-cutoff", o.run.cutoffs.playoff, "playoff teams per conference");
  app->add_option("--home-court-cutoff", o.run.cutoffs.homeCourt, "home-court teams per conference");
  app->add_option("--lottery-cutoff", o.run.cutoffs.lottery, "lottery teams overall");
}

void addSolver(CLI::App* app, Options& o) {
  app->add_option("--solver", o.solver, "pw-fw, pw-mmr, pw-sos, pc-mvp, pc-saa, greedy, status-quo")
      ->check(CLI::IsMember({"pw-fw", "pw-mmr", "pw-sos", "pc-mvp", "pc-saa", "greedy", "status-quo"}));
  app->add_option("--sos-epsilon", o.run.sosEpsilon, "strength-of-schedule tolerance for pw-sos");
  app->add_option("--saa-scenarios", o.run.saaScenarios, "scenarios for pc-saa");
  app->add_option("--search-budget", o.run.searchBudget, "local search move evaluations");
  app->add_option("--fw-iterations", o.run.fwIterations, "Frank-Wolfe iteration cap");
  app->add_option("--candidate-probs", o.run.candidateProbs, "extra probability files for pw-mmr");
}

void addPredict(CLI::App* app, Options& o) {
  app->add_option("--train", o.trainPath, "game_id,label,f1..fD of played games");
  app->add_option("--remaining-features", o.remainingFeaturesPath, "game_id,f1..fD of remaining games");
  app->add_option("--l2", o.run.predict.fit.l2, "ridge penalty");
  app->add_flag("--pca", o.run.predict.fit.usePca, "project features on principal components");
  app->add_option("--pca-variance", o.run.predict.fit.pcaVariance, "variance share kept by the projection");
  app->add_option("--holdout", o.run.predict.holdoutFraction, "share of rows held out of the optimizer's model");
  app->add_flag("--calibrate", o.run.predict.calibrate, "Platt-scale on the holdout rows");
  app->add_option("--cv-folds", o.run.predict.cvFolds, "cross-validation splits, 0 disables");
}

ss::RunConfig finish(Options& o) {
  ss::RunConfig& c = o.run;
  c.paths.teams = o.teamsPath;
  c.paths.remaining = o.remainingPath;
  c.paths.played = opt(o.playedPath);
  c.paths.probs = opt(o.probsPath);
  c.paths.targets = opt(o.targetsPath);
  c.trainFeatures = opt(o.trainPath);
  c.remainingFeatures = opt(o.remainingFeaturesPath);
  c.simProbs = opt(o.simProbsPath);
  c.schedule = opt(o.schedulePath);
  c.outcomes = opt(o.outcomesPath);
  c.targetMode = o.targets == "auto" ? ss::TargetMode::Auto : ss::TargetMode::Explicit;
  if (c.paths.targets && o.targets == "auto") c.targetMode = ss::TargetMode::Explicit;
  c.probabilityPolicy = o.policy == "clamp" ? ss::ProbabilityPolicy::Clamp : ss::ProbabilityPolicy::Reject;
  c.solver = ss::solverFromString(o.solver);
  c.seeds = ss::Seeds::fromMaster(o.seed);
  if (c.shortSeasonLength <= 0) throw ss::ConfigError("--short-season-length is required");
  return c;
}

// Synthetic league files plus predictor features: one signal column that
// tracks the latent strength gap and one noisier pre-suspension column.
void generate(const std::string& kind, std::uint64_t seed, int m, int remainingGames, const std::string& dir, int trainRows) {
  std::filesystem::create_directories(dir);
  const std::filesystem::path out(dir);
  if (kind == "round-robin") {
    ss::RoundRobinConfig cfg;
    const ss::LeagueState state = ss::generateRoundRobin(seed, cfg);
    ss::writeTeamsCsv(state, (out / "teams.csv").string());
    ss::writeRemainingCsv(state, (out / "remaining.csv").string());
    std::cout << "short season length " << state.shortSeasonLength() << '\n';
    return;
  }
  ss::NbaLikeConfig cfg;
  if (m > 0) cfg.shortSeasonLength = m;
  cfg.remainingGames = remainingGames;
  const ss::SyntheticLeague league = ss::generateNbaLike(seed, cfg);
  const ss::LeagueState& state = league.state;
  ss::writeTeamsCsv(state, (out / "teams.csv").string());
  ss::writeRemainingCsv(state, (out / "remaining.csv").string());
  ss::writeProbsCsv(state, league.trueProbs, (out / "sim-probs.csv").string());

  auto engine = ss::streamEngine(seed, 1);
  ss::Scenario actual{std::vector<std::uint8_t>(static_cast<std::size_t>(state.numGames()))};
  for (int g = 0; g < state.numGames(); ++g) {
    actual.hostWon[static_cast<std::size_t>(g)] = ss::bernoulli(engine, league.trueProbs[static_cast<std::size_t>(g)]);
  }
  ss::writeOutcomesCsv(state, actual, (out / "outcomes.csv").string());

  const std::vector<double> pct = ss::preWinPct(state);
  const auto features = [&](int host, int guest, std::mt19937_64& eng) {
    const double gap = league.strengths[static_cast<std::size_t>(host)] - league.strengths[static_cast<std::size_t>(guest)];
    return std::pair<double, double>{gap + 0.3 * ss::standardNormal(eng),
                                     pct[static_cast<std::size_t>(host)] - pct[static_cast<std::size_t>(guest)]};
  };
  std::ofstream train(out / "train-features.csv");
  train.precision(17);
  train << "game_id,label,strength_gap,win_pct_gap\n";
  const int n = state.numTeams();
  for (int r = 0; r < trainRows; ++r) {
    const int host = static_cast<int>(ss::uniformIndex(engine, static_cast<std::uint64_t>(n)));
    int guest = static_cast<int>(ss::uniformIndex(engine, static_cast<std::uint64_t>(n - 1)));
    if (guest >= host) ++guest;
    const double gap = league.strengths[static_cast<std::size_t>(host)] - league.strengths[static_cast<std::size_t>(guest)];
    const double p = 1.0 / (1.0 + std::exp(-(gap + cfg.homeAdvantage)));
    const auto [f1, f2] = features(host, guest, engine);
    train << r << ',' << int{ss::bernoulli(engine, p)} << ',' << f1 << ',' << f2 << '\n';
  }
  std::ofstream rem(out / "remaining-features.csv");
  rem.precision(17);
  rem << "game_id,strength_gap,win_pct_gap\n";
  for (const ss::Game& g : state.games()) {
    const auto [f1, f2] = features(g.host, g.guest, engine);
    rem << g.id << ',' << f1 << ',' << f2 << '\n';
  }
  std::cout << "wrote " << state.numTeams() << " teams, " << state.numGames() << " remaining games, m = "
            << state.shortSeasonLength() << " to " << dir << '\n';
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Concludes a suspended season by selecting the remaining games to play."};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", ss::versionString());
  Options o;
  app.add_option("--format", o.format, "stdout report format")->check(CLI::IsMember({"json", "csv"}));

  auto* gen = app.add_subcommand("generate", "write a synthetic league");
  std::string kind = "nba";
  int genM = 0;
  int genRemaining = 0;
  int trainRows = 1200;
  std::string genDir = ".";
  gen->add_option("--kind", kind, "nba or round-robin")->check(CLI::IsMember({"nba", "round-robin"}));
  gen->add_option("--seed", o.seed, "generator seed");
  gen->add_option("-m,--short-season-length", genM, "short season length");
  gen->add_option("--remaining-games", genRemaining, "exact number of remaining games");
  gen->add_option("--train-rows", trainRows, "labelled feature rows");
  gen->add_option("-o,--out", genDir, "output directory");

  auto* predict = app.add_subcommand("predict", "fit the win-probability model and write probs.csv");
  addPredict(predict, o);
  predict->add_option("--seed", o.seed, "master seed");
  predict->add_option("-o,--out", o.run.outputDir, "output directory");

  auto* optimize = app.add_subcommand("optimize", "select the games to play");
  addLeague(optimize, o, true);
  addSolver(optimize, o);
  addPredict(optimize, o);

  auto* simulate = app.add_subcommand("simulate", "Monte Carlo evaluation of a schedule");
  addLeague(simulate, o, true);
  addSolver(simulate, o);
  addPredict(simulate, o);
  simulate->add_option("--schedule", o.schedulePath, "schedule.csv to evaluate instead of optimizing");
  simulate->add_option("--replications", o.run.replications, "simulated seasons");

  auto* back = app.add_subcommand("backtest", "score a schedule against realized outcomes");
  addLeague(back, o, true);
  addSolver(back, o);
  addPredict(back, o);
  back->add_option("--schedule", o.schedulePath, "schedule.csv to evaluate instead of optimizing");
  back->add_option("--outcomes", o.outcomesPath, "game_id,host_won")->required();

  auto* pipe = app.add_subcommand("pipeline", "predict, optimize, simulate and write every artifact");
  addLeague(pipe, o, false);
  addSolver(pipe, o);
  addPredict(pipe, o);
  pipe->add_option("--replications", o.run.replications, "simulated seasons");
  pipe->add_option("--outcomes", o.outcomesPath, "realized outcomes for a backtest");
  pipe->add_option("--manifest", o.manifestPath, "replay a run-manifest.json");

  CLI11_PARSE(app, argc, argv);

  try {
    applyThreadEnv();
    if (gen->parsed()) {
      generate(kind, o.seed, genM, genRemaining, genDir, trainRows);
      return 0;
    }
    if (predict->parsed()) {
      if (o.trainPath.empty() || o.remainingFeaturesPath.empty()) {
        throw ss::ConfigError("predict needs --train and --remaining-features");
      }
      const ss::Seeds seeds = ss::Seeds::fromMaster(o.seed);
      const ss::PredictionResult r = ss::predictProbabilities(ss::readFeatures(o.trainPath, true),
                                                              ss::readFeatures(o.remainingFeaturesPath, false),
                                                              o.run.predict, seeds.predictor);
      const std::filesystem::path dir(o.run.outputDir);
      std::filesystem::create_directories(dir);
      ss::writeProbsCsv(r.gameIds, r.optimizerProbs, (dir / "probs.csv").string());
      ss::writeProbsCsv(r.gameIds, r.evaluatorProbs, (dir / "sim-probs.csv").string());
      emit(r.report, o.format);
      return 0;
    }
    if (pipe->parsed() && !o.manifestPath.empty()) {
      const auto outDir = pipe->count("--out") > 0 ? std::optional<std::string>(o.run.outputDir) : std::nullopt;
      emit(ss::replayManifest(o.manifestPath, outDir).report, o.format);
      return 0;
    }
    if (pipe->parsed() && (o.teamsPath.empty() || o.remainingPath.empty())) {
      throw ss::ConfigError("pipeline needs --teams and --remaining, or --manifest");
    }
    if (optimize->parsed()) o.run.replications = 0;
    if (back->parsed()) o.run.replications = 0;
    const ss::RunConfig config = finish(o);
    emit(ss::runPipeline(config).report, o.format);
    return 0;
  } catch (const ss::Error& e) {
    std::cerr << "error [" << e.module() << "]: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
}
