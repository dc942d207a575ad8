#pragma once

#include <vector>

#include "shortseason/league.hpp"

namespace shortseason {

// Exchange of selected games for unselected ones that keeps every team's
// home and away counts: an alternating cycle of length 2 (same host and
// guest) or 4 (drop a-b and c-d, add a-d and c-b) in the host/guest
// bipartite multigraph. out2/in2 are -1 for 2-cycles.
struct SwapMove {
  int out1 = -1;
  int in1 = -1;
  int out2 = -1;
  int in2 = -1;
};

// Every 2- and 4-cycle move available from an integral schedule, in a
// deterministic order.
std::vector<SwapMove> feasibleSwaps(const LeagueState& state, const Schedule& schedule);
void applySwap(Schedule& schedule, const SwapMove& move);

}  // namespace shortseason
