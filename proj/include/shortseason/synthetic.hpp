#pragma once

#include <cstdint>
#include <vector>

#include "shortseason/league.hpp"
#include "shortseason/random.hpp"

namespace shortseason {

// A 30-team, 82-game league with NBA-style conferences and divisions,
// suspended part-way through. Pre-suspension results and the evaluator's
// probabilities come from latent team strengths; the optimizer sees noisy
// strength estimates, the way a fitted predictor would.
struct NbaLikeConfig {
  int shortSeasonLength = 66;
  double suspensionFraction = 0.593;  // share of the league's games played before the stop
  int remainingGames = 0;             // when positive, exact number of games left instead
  double strengthSd = 0.6;
  double homeAdvantage = 0.35;        // on the logit scale
  double estimateNoiseSd = 0.25;      // per-team strength error of the optimizer's model
  int maxAttempts = 50;               // resamples when the targets are infeasible
};

struct SyntheticLeague {
  LeagueState state;                // winProb = optimizer probabilities
  std::vector<double> trueProbs;    // evaluator probabilities
  std::vector<double> strengths;
  int suspensionDay = 0;
};

SyntheticLeague generateNbaLike(std::uint64_t seed, const NbaLikeConfig& config = {});

// Small round-robin league for oracle tests: `rounds` random perfect matchings
// with random orientation remain; the short season keeps `selectedRounds` of
// them, so the targets are always satisfiable. Every team has played
// `preGames` games, giving m-hat = preGames + rounds and m = preGames + selectedRounds.
struct RoundRobinConfig {
  int teams = 4;
  int rounds = 4;
  int selectedRounds = 2;
  int preGames = 6;
  double probLow = 0.1;
  double probHigh = 0.9;
  double preWinLow = 0.0;   // pre-suspension win share drawn from [preWinLow, preWinHigh]
  double preWinHigh = 1.0;
};

LeagueState generateRoundRobin(std::uint64_t seed, const RoundRobinConfig& config = {});

// Standard normal draw by Box-Muller on uniform01; portable across standard libraries.
double standardNormal(std::mt19937_64& engine);

}  // namespace shortseason
