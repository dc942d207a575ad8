#pragma once

#include <functional>

#include "shortseason/league.hpp"

namespace shortseason {

// Depth-first enumeration of every integral schedule meeting the targets,
// pruning branches where a team can no longer reach its home or away target.
// Meant for oracle checks on tiny leagues; throws ConfigError above maxGames.
void forEachFeasibleSchedule(const LeagueState& state, const std::function<void(const Schedule&)>& visit,
                             int maxGames = 28);
std::vector<Schedule> enumerateFeasibleSchedules(const LeagueState& state, int maxGames = 28);

}  // namespace shortseason
