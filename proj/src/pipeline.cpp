#include "shortseason/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <Eigen/Core>

#include "shortseason/concordance.hpp"
#include "shortseason/errors.hpp"
#include "shortseason/frank_wolfe.hpp"
#include "shortseason/mmr.hpp"
#include "shortseason/objective.hpp"
#include "shortseason/random.hpp"
#include "shortseason/simulator.hpp"
#include "shortseason/strength.hpp"

#ifndef SHORTSEASON_VERSION
#define SHORTSEASON_VERSION "0.0.0"
#endif

namespace shortseason {

using nlohmann::json;

namespace {

const std::map<Solver, std::string>& solverNames() {
  static const std::map<Solver, std::string> names{
      {Solver::PwFw, "pw-fw"},   {Solver::PwMmr, "pw-mmr"},   {Solver::PwSos, "pw-sos"},
      {Solver::PcMvp, "pc-mvp"}, {Solver::PcSaa, "pc-saa"},   {Solver::Greedy, "greedy"},
      {Solver::StatusQuo, "status-quo"}};
  return names;
}

class Stopwatch {
 public:
  double lap() {
    const auto now = std::chrono::steady_clock::now();
    const double s = std::chrono::duration<double>(now - last_).count();
    last_ = now;
    return s;
  }

 private:
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

json optionalPath(const std::optional<std::string>& p) { return p ? json(*p) : json(nullptr); }

std::optional<std::string> pathFrom(const json& j, const char* key) {
  if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
  return j.at(key).get<std::string>();
}

std::string absolute(const std::string& p) { return std::filesystem::absolute(p).lexically_normal().string(); }

std::optional<std::string> absolute(const std::optional<std::string>& p) {
  return p ? std::optional<std::string>(absolute(*p)) : std::nullopt;
}

json agreementJson(const AgreementSummary& a) {
  return {{"playoff", a.playoff}, {"homeCourt", a.homeCourt}, {"lottery", a.lottery}};
}

json simulationJson(const SimulationReport& r) {
  json j{{"replications", r.replications},
         {"meanConcordance", r.meanConcordance},
         {"sdConcordance", r.sdConcordance},
         {"ciLow", r.ciLow},
         {"ciHigh", r.ciHigh},
         {"agreement", agreementJson(r.agreement)}};
  j["ssd"] = r.ssd ? json(*r.ssd) : json(nullptr);
  j["ssdUndefinedTeams"] = r.ssdUndefinedTeams;
  return j;
}

json boundsJson(const FwResult& r) {
  json j{{"upper", r.upperBound}, {"lower", r.lowerBound}, {"absGap", r.absGap},
         {"iterations", r.iterations}, {"atoms", r.atomsHarvested}};
  j["relGap"] = std::isfinite(r.relGap) ? json(r.relGap) : json("inf");
  return j;
}

std::vector<double> alignToGames(const LeagueState& state, const std::vector<int>& ids, const std::vector<double>& probs,
                                 const std::string& origin) {
  std::vector<double> out(static_cast<std::size_t>(state.numGames()), -1.0);
  for (std::size_t r = 0; r < ids.size(); ++r) {
    const int g = ids[r];
    if (g < 0 || g >= state.numGames()) {
      throw IngestError(origin + ": features for unknown game id " + std::to_string(g));
    }
    out[static_cast<std::size_t>(g)] = probs[r];
  }
  for (int g = 0; g < state.numGames(); ++g) {
    if (out[static_cast<std::size_t>(g)] < 0.0) throw IngestError(origin + ": no features for game id " + std::to_string(g));
  }
  return out;
}

void writeJson(const json& j, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

}  // namespace

std::string toString(Solver s) { return solverNames().at(s); }

Solver solverFromString(const std::string& s) {
  for (const auto& [solver, name] : solverNames()) {
    if (name == s) return solver;
  }
  throw ConfigError("unknown solver '" + s + "' (pw-fw, pw-mmr, pw-sos, pc-mvp, pc-saa, greedy, status-quo)");
}

Seeds Seeds::fromMaster(std::uint64_t master) {
  Seeds s;
  s.simulation = splitMix64(master ^ 1);
  s.scenarios = splitMix64(master ^ 2);
  s.search = splitMix64(master ^ 3);
  s.predictor = splitMix64(master ^ 4);
  return s;
}

std::string versionString() { return SHORTSEASON_VERSION; }

json toJson(const RunConfig& c) {
  json j;
  j["paths"] = {{"teams", c.paths.teams},
                {"remaining", c.paths.remaining},
                {"played", optionalPath(c.paths.played)},
                {"probs", optionalPath(c.paths.probs)},
                {"targets", optionalPath(c.paths.targets)},
                {"trainFeatures", optionalPath(c.trainFeatures)},
                {"remainingFeatures", optionalPath(c.remainingFeatures)},
                {"candidateProbs", c.candidateProbs},
                {"simProbs", optionalPath(c.simProbs)},
                {"schedule", optionalPath(c.schedule)},
                {"outcomes", optionalPath(c.outcomes)}};
  j["shortSeasonLength"] = c.shortSeasonLength;
  j["targets"] = c.targetMode == TargetMode::Auto ? "auto" : "explicit";
  j["probabilityPolicy"] = c.probabilityPolicy == ProbabilityPolicy::Reject ? "reject" : "clamp";
  j["solver"] = toString(c.solver);
  j["sosEpsilon"] = c.sosEpsilon;
  j["saaScenarios"] = c.saaScenarios;
  j["searchBudget"] = c.searchBudget;
  j["fwIterations"] = c.fwIterations;
  j["replications"] = c.replications;
  j["cutoffs"] = {{"playoff", c.cutoffs.playoff}, {"homeCourt", c.cutoffs.homeCourt}, {"lottery", c.cutoffs.lottery}};
  j["predict"] = {{"l2", c.predict.fit.l2},
                  {"usePca", c.predict.fit.usePca},
                  {"pcaVariance", c.predict.fit.pcaVariance},
                  {"holdoutFraction", c.predict.holdoutFraction},
                  {"calibrate", c.predict.calibrate},
                  {"cvFolds", c.predict.cvFolds}};
  j["seeds"] = {{"simulation", c.seeds.simulation},
                {"scenarios", c.seeds.scenarios},
                {"search", c.seeds.search},
                {"predictor", c.seeds.predictor}};
  j["outputDir"] = c.outputDir;
  return j;
}

RunConfig runConfigFromJson(const json& j) {
  try {
    RunConfig c;
    const json& p = j.at("paths");
    c.paths.teams = p.at("teams").get<std::string>();
    c.paths.remaining = p.at("remaining").get<std::string>();
    c.paths.played = pathFrom(p, "played");
    c.paths.probs = pathFrom(p, "probs");
    c.paths.targets = pathFrom(p, "targets");
    c.trainFeatures = pathFrom(p, "trainFeatures");
    c.remainingFeatures = pathFrom(p, "remainingFeatures");
    c.candidateProbs = p.value("candidateProbs", std::vector<std::string>{});
    c.simProbs = pathFrom(p, "simProbs");
    c.schedule = pathFrom(p, "schedule");
    c.outcomes = pathFrom(p, "outcomes");
    c.shortSeasonLength = j.at("shortSeasonLength").get<int>();
    const std::string targets = j.value("targets", std::string("auto"));
    if (targets != "auto" && targets != "explicit") throw ConfigError("targets must be auto or explicit");
    c.targetMode = targets == "auto" ? TargetMode::Auto : TargetMode::Explicit;
    const std::string policy = j.value("probabilityPolicy", std::string("reject"));
    if (policy != "reject" && policy != "clamp") throw ConfigError("probabilityPolicy must be reject or clamp");
    c.probabilityPolicy = policy == "reject" ? ProbabilityPolicy::Reject : ProbabilityPolicy::Clamp;
    c.solver = solverFromString(j.at("solver").get<std::string>());
    c.sosEpsilon = j.value("sosEpsilon", c.sosEpsilon);
    c.saaScenarios = j.value("saaScenarios", c.saaScenarios);
    c.searchBudget = j.value("searchBudget", c.searchBudget);
    c.fwIterations = j.value("fwIterations", c.fwIterations);
    c.replications = j.value("replications", c.replications);
    if (j.contains("cutoffs")) {
      const json& k = j.at("cutoffs");
      c.cutoffs.playoff = k.value("playoff", c.cutoffs.playoff);
      c.cutoffs.homeCourt = k.value("homeCourt", c.cutoffs.homeCourt);
      c.cutoffs.lottery = k.value("lottery", c.cutoffs.lottery);
    }
    if (j.contains("predict")) {
      const json& q = j.at("predict");
      c.predict.fit.l2 = q.value("l2", c.predict.fit.l2);
      c.predict.fit.usePca = q.value("usePca", c.predict.fit.usePca);
      c.predict.fit.pcaVariance = q.value("pcaVariance", c.predict.fit.pcaVariance);
      c.predict.holdoutFraction = q.value("holdoutFraction", c.predict.holdoutFraction);
      c.predict.calibrate = q.value("calibrate", c.predict.calibrate);
      c.predict.cvFolds = q.value("cvFolds", c.predict.cvFolds);
    }
    const json& s = j.at("seeds");
    c.seeds.simulation = s.at("simulation").get<std::uint64_t>();
    c.seeds.scenarios = s.at("scenarios").get<std::uint64_t>();
    c.seeds.search = s.at("search").get<std::uint64_t>();
    c.seeds.predictor = s.at("predictor").get<std::uint64_t>();
    c.outputDir = j.value("outputDir", c.outputDir);
    return c;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed run configuration: ") + e.what());
  }
}

PredictionResult predictProbabilities(const FeatureDataset& train, const FeatureDataset& remaining,
                                      const PredictConfig& config, std::uint64_t seed) {
  if (train.features.cols() != remaining.features.cols()) {
    throw DimensionError("training rows have " + std::to_string(train.features.cols()) + " features, remaining rows " +
                         std::to_string(remaining.features.cols()));
  }
  if (!(config.holdoutFraction >= 0.0 && config.holdoutFraction < 1.0)) {
    throw ConfigError("holdout fraction must lie in [0, 1)");
  }
  if (config.calibrate && config.holdoutFraction == 0.0) throw ConfigError("calibration needs holdout rows");

  PredictionResult out;
  out.gameIds = remaining.gameIds;
  const TrainedModel full = fitLogistic(train, config.fit);
  out.evaluatorProbs = predictProba(full, remaining.features);

  TrainedModel optimizer = full;
  int holdoutRows = 0;
  if (config.holdoutFraction > 0.0) {
    std::vector<int> order(static_cast<std::size_t>(train.rows()));
    std::iota(order.begin(), order.end(), 0);
    auto engine = streamEngine(seed, 0);
    for (std::size_t i = order.size(); i > 1; --i) {
      std::swap(order[i - 1], order[uniformIndex(engine, i)]);
    }
    holdoutRows = static_cast<int>(std::lround(config.holdoutFraction * train.rows()));
    const std::vector<int> held(order.begin(), order.begin() + holdoutRows);
    std::vector<int> kept(order.begin() + holdoutRows, order.end());
    std::sort(kept.begin(), kept.end());
    optimizer = fitLogistic(train.subset(kept), config.fit);
    if (config.calibrate) {
      std::vector<int> heldSorted = held;
      std::sort(heldSorted.begin(), heldSorted.end());
      optimizer = calibratePlatt(optimizer, train.subset(heldSorted), 5, splitMix64(seed ^ 5));
    }
  }
  out.optimizerProbs = predictProba(optimizer, remaining.features);

  json report{{"trainingRows", train.rows()},
              {"features", train.features.cols()},
              {"holdoutRows", holdoutRows},
              {"remainingRows", remaining.rows()}};
  const auto [w, b] = rawCoefficients(full);
  report["weights"] = std::vector<double>(w.data(), w.data() + w.size());
  report["intercept"] = b;
  report["pcaComponents"] = full.pca ? json(full.pca->components.cols()) : json(nullptr);
  if (optimizer.calibration) {
    report["calibration"] = {{"a", optimizer.calibration->a}, {"b", optimizer.calibration->b}};
  }
  if (config.cvFolds > 0) {
    const CvResult cv = crossValidate(train, config.fit, config.cvFolds, splitMix64(seed ^ 6));
    report["crossValidation"] = {{"folds", config.cvFolds},
                                 {"meanLogLoss", cv.meanLogLoss},
                                 {"meanAccuracy", cv.meanAccuracy},
                                 {"meanAuc", std::isfinite(cv.meanAuc) ? json(cv.meanAuc) : json(nullptr)}};
  }
  out.report = std::move(report);
  return out;
}

RunResult runPipeline(const RunConfig& config) {
  Stopwatch clock;
  json timings;
  json report;

  IngestOptions opts;
  opts.shortSeasonLength = config.shortSeasonLength;
  opts.targetMode = config.targetMode;
  opts.probabilityPolicy = config.probabilityPolicy;
  IngestResult ingested = ingest(config.paths, opts);
  LeagueState state = ingested.state;
  timings["ingest"] = clock.lap();

  // Probabilities: the optimizer's and the evaluator's.
  std::vector<double> evaluatorProbs;
  if (config.trainFeatures || config.remainingFeatures) {
    if (!config.trainFeatures || !config.remainingFeatures) {
      throw ConfigError("prediction needs both training and remaining-game features");
    }
    const FeatureDataset train = readFeatures(*config.trainFeatures, true);
    const FeatureDataset remaining = readFeatures(*config.remainingFeatures, false);
    const PredictionResult pred = predictProbabilities(train, remaining, config.predict, config.seeds.predictor);
    state = state.withProbabilities(alignToGames(state, pred.gameIds, pred.optimizerProbs, *config.remainingFeatures));
    evaluatorProbs = alignToGames(state, pred.gameIds, pred.evaluatorProbs, *config.remainingFeatures);
    report["prediction"] = pred.report;
    std::filesystem::create_directories(config.outputDir);
    writeProbsCsv(state, state.probabilities(), (std::filesystem::path(config.outputDir) / "probs.csv").string());
    writeProbsCsv(state, evaluatorProbs, (std::filesystem::path(config.outputDir) / "sim-probs.csv").string());
    timings["predict"] = clock.lap();
  } else if (!ingested.hasProbabilities && config.solver != Solver::Greedy && config.solver != Solver::StatusQuo &&
             !config.schedule) {
    throw ConfigError("no win probabilities: give a prob column, a probs file or features to train on");
  }
  if (config.simProbs) evaluatorProbs = readProbs(state, *config.simProbs, config.probabilityPolicy);
  if (evaluatorProbs.empty()) evaluatorProbs = state.probabilities();

  // Optimization.
  const bool statusQuo = config.solver == Solver::StatusQuo && !config.schedule;
  Schedule schedule = Schedule::none(state.numGames());
  FwConfig fw;
  fw.maxIterations = config.fwIterations;
  if (config.schedule) {
    schedule = readSchedule(state, *config.schedule);
    requireFeasible(state, schedule);
    report["solver"] = "given";
  } else {
    report["solver"] = toString(config.solver);
    const PwObjectiveModel model = PwObjectiveModel::build(state);
    switch (config.solver) {
      case Solver::PwFw: {
        const FwResult r = solve(model, fw);
        schedule = r.bestAtom;
        report["bounds"] = boundsJson(r);
        break;
      }
      case Solver::PwSos: {
        fw.sosEpsilon = config.sosEpsilon;
        const FwResult r = solveSoS(model, fw, preWinPct(state));
        schedule = r.bestAtom;
        report["bounds"] = boundsJson(r);
        report["sos"] = {{"epsilon", config.sosEpsilon}, {"violation", r.sosViolation.value_or(0.0)}};
        break;
      }
      case Solver::PwMmr: {
        std::vector<Candidate> candidates{{"base", state.probabilities()}};
        for (std::size_t k = 0; k < config.candidateProbs.size(); ++k) {
          const std::string& p = config.candidateProbs[k];
          candidates.push_back({"candidate" + std::to_string(k + 1) + ":" + std::filesystem::path(p).stem().string(),
                                readProbs(state, p, config.probabilityPolicy)});
        }
        const CandidateSet set = buildCandidateSet(state, candidates, fw);
        const MmrResult r = solveMmr(set, state);
        schedule = r.fw.bestAtom;
        json regretsJson = json::object();
        for (std::size_t l = 0; l < set.size(); ++l) regretsJson[set.candidates[l].label] = r.perCandidateRegrets[l];
        report["bounds"] = boundsJson(r.fw);
        report["mmr"] = {{"maxRegret", r.maxRegret}, {"regrets", regretsJson}, {"candidates", set.size()}};
        break;
      }
      case Solver::PcMvp:
      case Solver::PcSaa: {
        const PcInstance inst = config.solver == Solver::PcMvp
                                    ? makeMeanValueInstance(state)
                                    : makeSampledInstance(state, sampleScenarios(state, config.saaScenarios, config.seeds.scenarios));
        const Schedule start = solve(model, fw).bestAtom;
        LocalSearchConfig ls;
        ls.budget = config.searchBudget;
        ls.seed = config.seeds.search;
        const LocalSearchResult r = localSearch(inst, start, ls);
        schedule = r.best;
        const FixingReport fix = variableFixing(inst);
        report["pc"] = {{"objective", r.objective},
                        {"startObjective", pcObjective(inst, start)},
                        {"maxObjective", maxConcordance(state.numTeams())},
                        {"scenarios", inst.numScenarios()},
                        {"evaluations", r.evaluations},
                        {"restarts", r.restarts},
                        {"fixedPairsPct", fix.eliminationPct}};
        break;
      }
      case Solver::Greedy: {
        const GreedyResult r = greedySchedule(state);
        report["greedy"] = {{"stranded", r.stranded}, {"augmentations", r.augmentations}, {"feasible", r.feasible}};
        if (!r.feasible) throw FeasibilityError("greedy selection could not meet every target");
        schedule = r.schedule;
        break;
      }
      case Solver::StatusQuo:
        break;
    }
  }
  timings["optimize"] = clock.lap();

  report["league"] = {{"teams", state.numTeams()},
                      {"remainingGames", state.numGames()},
                      {"fullSeasonLength", state.fullSeasonLength()},
                      {"shortSeasonLength", state.shortSeasonLength()},
                      {"selectedGames", schedule.count()}};
  if (!statusQuo) {
    report["objective"] = PwObjectiveModel::build(state).evaluate(schedule);
    const StrengthOfSchedule sos = strengthOfSchedule(state, schedule);
    report["strengthOfSchedule"] = {{"ssd", sos.ssd}, {"maxExcess", sos.maxExcess}, {"undefinedTeams", sos.undefinedTeams}};
    const VarianceSharpness vs = varianceSharpnessDiagnostics(state, schedule);
    report["diagnostics"] = {{"meanVarianceSelected", vs.meanVarianceSelected},
                             {"meanVarianceExcluded", vs.meanVarianceExcluded},
                             {"meanSharpnessSelected", vs.meanSharpnessSelected},
                             {"meanSharpnessExcluded", vs.meanSharpnessExcluded},
                             {"varianceCoefficient", vs.varianceCoefficient}};
  }

  if (config.replications > 0) {
    EvalConfig eval;
    eval.replications = config.replications;
    eval.baseSeed = config.seeds.simulation;
    eval.simProbs = evaluatorProbs;
    eval.cutoffs = config.cutoffs;
    const SimulationReport sim = statusQuo ? simulateStatusQuo(state, eval) : simulate(state, schedule, eval);
    report["simulation"] = simulationJson(sim);
    report["simulation"]["maxConcordance"] = maxConcordance(state.numTeams());
    timings["simulate"] = clock.lap();
  }

  if (config.outcomes) {
    const Scenario actual = readOutcomes(state, *config.outcomes);
    const BacktestReport bt = statusQuo ? backtestStatusQuo(state, actual, config.cutoffs)
                                       : backtest(state, schedule, actual, config.cutoffs);
    report["backtest"] = {{"concordance", bt.concordance},
                          {"maxConcordance", maxConcordance(state.numTeams())},
                          {"agreement", agreementJson(bt.agreement)},
                          {"singlePath", bt.singlePath}};
    timings["backtest"] = clock.lap();
  }

  // Artifacts. Paths are recorded absolute so the manifest replays from anywhere.
  RunConfig recorded = config;
  recorded.paths.teams = absolute(config.paths.teams);
  recorded.paths.remaining = absolute(config.paths.remaining);
  recorded.paths.played = absolute(config.paths.played);
  recorded.paths.probs = absolute(config.paths.probs);
  recorded.paths.targets = absolute(config.paths.targets);
  recorded.trainFeatures = absolute(config.trainFeatures);
  recorded.remainingFeatures = absolute(config.remainingFeatures);
  for (auto& p : recorded.candidateProbs) p = absolute(p);
  recorded.simProbs = absolute(config.simProbs);
  recorded.schedule = absolute(config.schedule);
  recorded.outcomes = absolute(config.outcomes);
  recorded.outputDir = absolute(config.outputDir);

  const std::filesystem::path dir(config.outputDir);
  std::filesystem::create_directories(dir);
  writeScheduleCsv(state, schedule, (dir / "schedule.csv").string());
  timings["write"] = clock.lap();
  report["timings"] = timings;
  writeJson(report, dir / "report.json");

  json manifest{{"config", toJson(recorded)},
                {"seeds", toJson(recorded)["seeds"]},
                {"versions",
                 {{"shortseason", versionString()},
                  {"compiler", __VERSION__},
                  {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) + "." +
                                std::to_string(EIGEN_MINOR_VERSION)},
                  {"json", std::to_string(NLOHMANN_JSON_VERSION_MAJOR) + "." + std::to_string(NLOHMANN_JSON_VERSION_MINOR) +
                               "." + std::to_string(NLOHMANN_JSON_VERSION_PATCH)}}}};
  writeJson(manifest, dir / "run-manifest.json");

  return RunResult{state, schedule, report, manifest};
}

RunResult replayManifest(const std::string& manifestPath, const std::optional<std::string>& outputDir) {
  std::ifstream in(manifestPath);
  if (!in) throw IngestError("cannot open " + manifestPath);
  json manifest;
  try {
    in >> manifest;
  } catch (const json::exception& e) {
    throw ConfigError(manifestPath + ": " + e.what());
  }
  if (!manifest.contains("config")) throw ConfigError(manifestPath + ": no config object");
  RunConfig config = runConfigFromJson(manifest.at("config"));
  if (outputDir) config.outputDir = *outputDir;
  return runPipeline(config);
}

std::string jsonToCsv(const json& j) {
  std::ostringstream out;
  out << "key,value\n";
  const auto walk = [&](const auto& self, const json& node, const std::string& prefix) -> void {
    if (node.is_object()) {
      for (auto it = node.begin(); it != node.end(); ++it) {
        self(self, it.value(), prefix.empty() ? it.key() : prefix + "." + it.key());
      }
    } else if (node.is_array()) {
      for (std::size_t k = 0; k < node.size(); ++k) self(self, node[k], prefix + "." + std::to_string(k));
    } else {
      const std::string value = node.is_string() ? node.get<std::string>() : node.dump();
      const bool quote = value.find_first_of(",\"") != std::string::npos;
      out << prefix << ',' << (quote ? "\"" + value + "\"" : value) << '\n';
    }
  };
  walk(walk, j, "");
  return out.str();
}

}  // namespace shortseason
