#pragma once

#include <cstdint>
#include <tuple>
#include <vector>

#include "shortseason/league.hpp"

namespace shortseason {

// Concordance-objective instance. Each scenario gives a value per game:
// the host-win probability for the mean-value problem, a sampled 0/1
// outcome for sample average approximation.
struct PcInstance {
  LeagueState state;
  bool meanValue = false;
  std::vector<std::vector<double>> outcomes;  // [scenario][game]
  std::vector<ScoreVector> fullScores;        // full-season scores per scenario
  std::vector<std::vector<std::uint8_t>> zHat;  // [scenario][i * n + j] = 1 when i ranks above j, i < j

  int numScenarios() const { return static_cast<int>(outcomes.size()); }
};

PcInstance makeMeanValueInstance(const LeagueState& state);
PcInstance makeSampledInstance(const LeagueState& state, const std::vector<Scenario>& scenarios);

// count i.i.d. scenarios, each game a Bernoulli draw of its host-win
// probability; scenario s uses its own RNG stream of `seed`.
std::vector<Scenario> sampleScenarios(const LeagueState& state, int count, std::uint64_t seed);

// Shortened-season wins of every team (before dividing by m) in one scenario.
std::vector<double> shortWins(const PcInstance& instance, int scenario, const Schedule& x);

// Pair credit: 1 when the strict order of a and b agrees with zHat, and also
// when a and b tie (the order variable is then free and takes zHat's value).
bool pairCredited(double a, double b, bool iAbove, bool meanValue);

// Credited pairs per scenario and their average.
std::vector<std::int64_t> pcScenarioCounts(const PcInstance& instance, const Schedule& x);
std::vector<std::int64_t> pcScenarioCountsSerial(const PcInstance& instance, const Schedule& x);  // reference
double pcObjective(const PcInstance& instance, const Schedule& x);

struct FixingReport {
  std::vector<std::tuple<int, int, int>> fixedOne;   // (scenario, i, j), i < j, i forced above j
  std::vector<std::tuple<int, int, int>> fixedZero;  // (scenario, i, j), j forced above i
  std::int64_t freePairs = 0;
  double eliminationPct = 0.0;
};

// Optimistic and pessimistic shortened-season wins of each team in one
// scenario: the best and worst outcome any selection meeting the targets
// can give.
struct WinBounds {
  std::vector<double> upper;
  std::vector<double> lower;
};
WinBounds winBounds(const PcInstance& instance, int scenario);

// Fixes the order of every pair whose bounds do not overlap.
FixingReport variableFixing(const PcInstance& instance, int scenario);
FixingReport variableFixing(const PcInstance& instance);  // all scenarios

struct LocalSearchConfig {
  std::int64_t budget = 200000;  // move evaluations
  std::uint64_t seed = 0;
  bool useFixing = true;
};

struct LocalSearchResult {
  Schedule best;
  double objective = 0.0;
  std::vector<std::vector<double>> climbs;  // accepted objectives, one list per start
  std::int64_t evaluations = 0;
  int restarts = 0;
};

// First-improvement hill climbing over target-preserving swaps in a seeded
// random order, restarting from a random transportation vertex at each
// local optimum until the budget is spent.
LocalSearchResult localSearch(const PcInstance& instance, const Schedule& start, const LocalSearchConfig& config = {});

struct PcOptimum {
  Schedule best;
  double objective = 0.0;
};
// Enumerates every feasible schedule (tiny instances only).
PcOptimum exhaustivePc(const PcInstance& instance);

}  // namespace shortseason
