#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "shortseason/league.hpp"

namespace shortseason {

enum class AgreementCategory { Playoff, HomeCourt, Lottery };

struct AgreementCutoffs {
  int playoff = 8;    // top teams per conference
  int homeCourt = 4;  // top teams per conference
  int lottery = 5;    // bottom teams overall
};

// Share (in percent) of the category's teams under the shortened-season
// scores that also belong to it under the full-season scores. Rankings use
// the league tie-break.
double agreement(const LeagueState& state, const ScoreVector& shortScores, const ScoreVector& fullScores,
                 AgreementCategory category, const AgreementCutoffs& cutoffs = {});

struct EvalConfig {
  std::int64_t replications = 10000;
  std::uint64_t baseSeed = 0;
  std::vector<double> simProbs;  // evaluator host-win probabilities; empty = the league's own
  AgreementCutoffs cutoffs;
  bool keepPerReplication = false;
};

struct ReplicationRow {
  std::int64_t concordance = 0;
  double playoff = 0.0;
  double homeCourt = 0.0;
  double lottery = 0.0;
};

struct AgreementSummary {
  double playoff = 0.0;
  double homeCourt = 0.0;
  double lottery = 0.0;
};

struct SimulationReport {
  std::int64_t replications = 0;
  double meanConcordance = 0.0;
  double sdConcordance = 0.0;
  double ciLow = 0.0;  // normal-approximation 95% interval on the mean
  double ciHigh = 0.0;
  AgreementSummary agreement;
  std::optional<double> ssd;  // absent for the status-quo ranking
  std::vector<int> ssdUndefinedTeams;
  std::vector<ReplicationRow> perReplication;
};

// Replications are drawn in blocks of 64, block b from RNG stream b of
// baseSeed, and reduced in replication order, so the report does not depend
// on the thread count. simulateSerial is the single-threaded reference.
SimulationReport simulate(const LeagueState& state, const Schedule& schedule, const EvalConfig& config = {});
SimulationReport simulateSerial(const LeagueState& state, const Schedule& schedule, const EvalConfig& config = {});
// The ranking frozen at the suspension against simulated full seasons.
SimulationReport simulateStatusQuo(const LeagueState& state, const EvalConfig& config = {});

// Pre-suspension win percentages; a team with no games played is an error.
ScoreVector statusQuoScores(const LeagueState& state);

struct GreedyResult {
  Schedule schedule;
  std::vector<int> homeShortfall;  // unmet home slots after the greedy scan
  std::vector<int> awayShortfall;
  bool stranded = false;  // the scan alone missed some target
  int augmentations = 0;  // paths flipped by the repair
  bool feasible = false;
};

// Scans games by (scheduled day, id) and keeps a game when both its host's
// home target and its guest's away target still have room. The repair then
// flips alternating paths (unselected, selected, unselected, ...) from a
// team short of home games to one short of away games.
GreedyResult greedySchedule(const LeagueState& state, bool repair = true);

struct BacktestReport {
  std::int64_t concordance = 0;
  AgreementSummary agreement;
  bool singlePath = true;
};

BacktestReport backtest(const LeagueState& state, const Schedule& schedule, const Scenario& actual,
                        const AgreementCutoffs& cutoffs = {});
BacktestReport backtestStatusQuo(const LeagueState& state, const Scenario& actual, const AgreementCutoffs& cutoffs = {});

struct VarianceSharpness {
  double meanVarianceSelected = 0.0;
  double meanVarianceExcluded = 0.0;
  double meanSharpnessSelected = 0.0;  // max(p, 1 - p)
  double meanSharpnessExcluded = 0.0;
  int selectedGames = 0;
  int excludedGames = 0;
  // 2 (1 - 2m/m-hat) G1 / m^2, the weight of the mean selected-game variance
  // in the objective; G1 = number of selected games.
  double varianceCoefficient = 0.0;
};

VarianceSharpness varianceSharpnessDiagnostics(const LeagueState& state, const Schedule& schedule);

}  // namespace shortseason
