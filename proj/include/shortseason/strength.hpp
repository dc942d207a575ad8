#pragma once

#include <span>
#include <vector>

#include "shortseason/league.hpp"

namespace shortseason {

// Opponent win-percentage strength of schedule (pre-suspension opponent win
// percentages averaged over remaining games) for a schedule and for the full
// remainder. Teams with no selected games, or whose full-remainder OW is
// zero, get a relative excess of 0 and are listed in undefinedTeams.
struct StrengthOfSchedule {
  std::vector<double> ow;
  std::vector<double> owFull;
  std::vector<double> relativeExcess;  // (OW - OW_full) / OW_full
  std::vector<int> undefinedTeams;     // zero remaining games in the schedule
  double ssd = 0.0;                    // mean of max(relativeExcess, 0)
  double maxExcess = 0.0;              // max of max(relativeExcess, 0)
};

StrengthOfSchedule strengthOfSchedule(const LeagueState& state, const Schedule& schedule);
// Pre-suspension win percentage per team (0 for a team with no games played).
std::vector<double> preWinPct(const LeagueState& state);

// Linear coefficients of OW_i in x: ow_i(x) = sum_g coeff(g, i) x_g with one
// host and one guest entry per game (denominator m - m0_i, the number of
// games team i plays after the suspension).
struct OwCoefficients {
  std::vector<double> host;   // coefficient of x_g in OW_{host(g)}
  std::vector<double> guest;  // coefficient of x_g in OW_{guest(g)}
};
OwCoefficients owCoefficients(const LeagueState& state, std::span<const double> preWinPct);

}  // namespace shortseason
