#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "shortseason/io.hpp"
#include "shortseason/predictor.hpp"
#include "shortseason/simulator.hpp"

namespace shortseason {

enum class Solver { PwFw, PwMmr, PwSos, PcMvp, PcSaa, Greedy, StatusQuo };

std::string toString(Solver s);
Solver solverFromString(const std::string& s);  // ConfigError on an unknown name

// Every random choice in a run draws from one of these.
struct Seeds {
  std::uint64_t simulation = 0;
  std::uint64_t scenarios = 0;  // SAA scenario sampling
  std::uint64_t search = 0;     // local search order and restarts
  std::uint64_t predictor = 0;  // holdout split, cross-validation, calibration subsamples

  static Seeds fromMaster(std::uint64_t master);
};

struct PredictConfig {
  FitConfig fit{.l2 = 1e-3};
  double holdoutFraction = 0.2;  // rows kept out of the optimizer's model
  bool calibrate = false;        // Platt-scale the optimizer's model on the holdout rows
  int cvFolds = 5;
};

struct RunConfig {
  IngestPaths paths;
  std::optional<std::string> trainFeatures;      // game_id,label,f1..fD of played games
  std::optional<std::string> remainingFeatures;  // game_id,f1..fD of remaining games
  std::vector<std::string> candidateProbs;       // extra candidates for pw-mmr
  std::optional<std::string> simProbs;           // evaluator probabilities
  std::optional<std::string> schedule;           // evaluate this schedule instead of optimizing
  std::optional<std::string> outcomes;           // realized results for a backtest
  int shortSeasonLength = 0;
  TargetMode targetMode = TargetMode::Auto;
  ProbabilityPolicy probabilityPolicy = ProbabilityPolicy::Reject;
  Solver solver = Solver::PwFw;
  double sosEpsilon = 0.02;
  int saaScenarios = 50;
  std::int64_t searchBudget = 200000;
  int fwIterations = 500;
  std::int64_t replications = 10000;
  AgreementCutoffs cutoffs;
  PredictConfig predict;
  Seeds seeds;
  std::string outputDir = ".";
};

nlohmann::json toJson(const RunConfig& config);
RunConfig runConfigFromJson(const nlohmann::json& j);

struct PredictionResult {
  std::vector<int> gameIds;              // rows of the remaining-features file
  std::vector<double> optimizerProbs;    // model fit without the holdout rows
  std::vector<double> evaluatorProbs;    // model fit on every row
  nlohmann::json report;
};

PredictionResult predictProbabilities(const FeatureDataset& train, const FeatureDataset& remaining,
                                      const PredictConfig& config, std::uint64_t seed);

struct RunResult {
  LeagueState state;  // optimizer probabilities
  Schedule schedule;
  nlohmann::json report;
  nlohmann::json manifest;
};

// ingest, predict or load probabilities, optimize (or load a schedule),
// simulate, backtest; writes schedule.csv, report.json and run-manifest.json
// into the output directory. The "timings" object of the report is the only
// part that changes between identical runs.
RunResult runPipeline(const RunConfig& config);

// Replays the run recorded in a manifest, optionally into another directory.
RunResult replayManifest(const std::string& manifestPath, const std::optional<std::string>& outputDir = {});

// Flattens nested objects to dotted key,value lines.
std::string jsonToCsv(const nlohmann::json& j);

std::string versionString();

}  // namespace shortseason
