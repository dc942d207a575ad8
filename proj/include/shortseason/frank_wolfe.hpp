#pragma once

#include <optional>
#include <span>
#include <vector>

#include "shortseason/league.hpp"
#include "shortseason/objective.hpp"
#include "shortseason/strength.hpp"

namespace shortseason {

struct FwConfig {
  int maxIterations = 500;
  double relGapTol = 1e-6;
  double stallTol = 1e-12;           // stop once f(x_t) - f(x_{t+1}) falls below this
  std::optional<double> sosEpsilon;  // strength-of-schedule tolerance for solveSoS
  int sosMaxDualIters = 100;
  double sosStep = 1.0;              // eta_0 in eta_k = eta_0 / sqrt(k)
  int sosInnerIterations = 25;       // warm-started FW iterations per multiplier update
  int sosPolishMoves = 200;          // swap moves for the integral repair, 0 disables it
  int sosPolishStarts = 10;          // least-violating atoms used as repair starts
};

struct FwTraceEntry {
  int iteration = 0;
  double objective = 0.0;  // f(x_t) before the step
  double atomObjective = 0.0;
  double lowerBound = 0.0;  // running max of the linearization bound
  double upperBound = 0.0;  // best atom so far
  double gamma = 0.0;
};

struct FwResult {
  Schedule bestAtom;    // best integral vertex harvested
  Schedule fractional;  // last continuous iterate
  double upperBound = 0.0;
  double lowerBound = 0.0;
  double relGap = 0.0;  // (UB - LB) / LB
  double absGap = 0.0;  // UB - LB
  int iterations = 0;
  int atomsHarvested = 0;
  std::optional<double> sosViolation;  // amount by which bestAtom exceeds eps (0 when it satisfies every team)
  std::vector<FwTraceEntry> trace;
};

// Exact minimizer over [0, 1] of f(x + gamma (atom - x)); f is quadratic
// along the segment, so the first-order condition gives it in closed form.
double lineSearch(const PwObjectiveModel& model, std::span<const double> x, std::span<const double> atom);

// Frank-Wolfe on the continuous relaxation of the deterministic equivalent.
// Every linear subproblem is a transportation problem whose solution is an
// integral schedule; the best of these atoms is returned with the
// linearization lower bound max_t f(x_t) - grad f(x_t)'(x_t - atom_t).
FwResult solve(const PwObjectiveModel& model, const FwConfig& config = {});

// Frank-Wolfe with the per-team constraints (OW_i - OW_full_i) / OW_full_i <= eps
// moved into the objective by Lagrange multipliers; multipliers follow a
// projected subgradient step eta_0 / sqrt(k). Returns the best atom that
// satisfies every constraint, else the least violating one, with
// sosViolation set. Requires config.sosEpsilon; eps = +inf reproduces solve().
FwResult solveSoS(const PwObjectiveModel& model, const FwConfig& config, std::span<const double> preWinPct);

}  // namespace shortseason
