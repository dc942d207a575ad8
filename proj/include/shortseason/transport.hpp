#pragma once

#include <span>
#include <vector>

#include "shortseason/league.hpp"

namespace shortseason {

// Successive-shortest-path min-cost flow with Johnson potentials.
// Arc costs may be negative as long as the initial network has no negative
// cycle; potentials start from one Bellman-Ford pass, after which Dijkstra
// runs on reduced costs until the sink is settled. Among equal-cost paths,
// arcs added earlier win.
class MinCostFlow {
 public:
  explicit MinCostFlow(int nodes);

  // Returns the arc id; its reverse arc is id ^ 1.
  int addArc(int from, int to, int capacity, double cost);

  // Sends up to `amount` units from source to sink; returns the units sent.
  int solve(int source, int sink, int amount);

  int flow(int arc) const { return arcs_[static_cast<std::size_t>(arc ^ 1)].capacity; }
  int nodes() const { return static_cast<int>(adjacency_.size()); }

 private:
  struct Arc {
    int to;
    int capacity;  // residual
    double cost;
  };

  bool bellmanFord(int source);
  bool dijkstra(int source, int sink);

  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> adjacency_;
  std::vector<double> potential_;
  std::vector<double> distance_;
  std::vector<int> parentArc_;
};

// argmin sum_g costs[g] x_g over the transportation polytope
//   sum_{g in home(i)} x_g = homeTarget_i,  sum_{g in away(i)} x_g = awayTarget_i,
// solved as a flow on the bipartite multigraph (home copy of each team ->
// away copy of each team, one unit arc per game). Total unimodularity makes
// the returned vertex integral. Throws FeasibilityError listing the teams
// whose targets cannot be met.
Schedule transportationSubproblem(const LeagueState& state, std::span<const double> costs);

}  // namespace shortseason
