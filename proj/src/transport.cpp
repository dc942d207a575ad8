#include "shortseason/transport.hpp"

#include <algorithm>
#include <limits>
#include <queue>
#include <string>

#include "shortseason/errors.hpp"

namespace shortseason {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

MinCostFlow::MinCostFlow(int nodes) : adjacency_(static_cast<std::size_t>(nodes)) {}

int MinCostFlow::addArc(int from, int to, int capacity, double cost) {
  const int id = static_cast<int>(arcs_.size());
  arcs_.push_back({to, capacity, cost});
  arcs_.push_back({from, 0, -cost});
  adjacency_[static_cast<std::size_t>(from)].push_back(id);
  adjacency_[static_cast<std::size_t>(to)].push_back(id + 1);
  return id;
}

bool MinCostFlow::bellmanFord(int source) {
  const std::size_t n = adjacency_.size();
  potential_.assign(n, kInf);
  potential_[static_cast<std::size_t>(source)] = 0.0;
  for (std::size_t round = 0; round < n; ++round) {
    bool changed = false;
    for (std::size_t u = 0; u < n; ++u) {
      if (potential_[u] == kInf) continue;
      for (int a : adjacency_[u]) {
        const Arc& arc = arcs_[static_cast<std::size_t>(a)];
        if (arc.capacity <= 0) continue;
        const double nd = potential_[u] + arc.cost;
        if (nd < potential_[static_cast<std::size_t>(arc.to)]) {
          potential_[static_cast<std::size_t>(arc.to)] = nd;
          changed = true;
        }
      }
    }
    if (!changed) return true;
  }
  return false;
}

bool MinCostFlow::dijkstra(int source, int sink) {
  const std::size_t n = adjacency_.size();
  distance_.assign(n, kInf);
  parentArc_.assign(n, -1);
  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  distance_[static_cast<std::size_t>(source)] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    const auto [d, u] = heap.top();
    heap.pop();
    const auto uu = static_cast<std::size_t>(u);
    if (d > distance_[uu]) continue;
    if (u == sink) break;
    for (int a : adjacency_[uu]) {
      const Arc& arc = arcs_[static_cast<std::size_t>(a)];
      if (arc.capacity <= 0) continue;
      const auto v = static_cast<std::size_t>(arc.to);
      if (potential_[v] == kInf) continue;
      // Reduced costs are non-negative up to rounding.
      const double reduced = std::max(0.0, arc.cost + potential_[uu] - potential_[v]);
      const double nd = d + reduced;
      if (nd < distance_[v]) {
        distance_[v] = nd;
        parentArc_[v] = a;
        heap.emplace(nd, arc.to);
      }
    }
  }
  return distance_[static_cast<std::size_t>(sink)] < kInf;
}

int MinCostFlow::solve(int source, int sink, int amount) {
  if (!bellmanFord(source)) throw DomainError("min-cost flow network has a negative cycle");
  const std::size_t n = adjacency_.size();
  int sent = 0;
  while (sent < amount && dijkstra(source, sink)) {
    // Dijkstra stops once the sink is settled; capping every label at the
    // sink distance keeps all reduced costs non-negative.
    const double cap = distance_[static_cast<std::size_t>(sink)];
    for (std::size_t v = 0; v < n; ++v) potential_[v] += std::min(distance_[v], cap);
    int push = amount - sent;
    for (int v = sink; v != source;) {
      const int a = parentArc_[static_cast<std::size_t>(v)];
      push = std::min(push, arcs_[static_cast<std::size_t>(a)].capacity);
      v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
    }
    for (int v = sink; v != source;) {
      const int a = parentArc_[static_cast<std::size_t>(v)];
      arcs_[static_cast<std::size_t>(a)].capacity -= push;
      arcs_[static_cast<std::size_t>(a ^ 1)].capacity += push;
      v = arcs_[static_cast<std::size_t>(a ^ 1)].to;
    }
    sent += push;
  }
  return sent;
}

Schedule transportationSubproblem(const LeagueState& state, std::span<const double> costs) {
  const int n = state.numTeams();
  const int games = state.numGames();
  if (static_cast<int>(costs.size()) != games) {
    throw DimensionError("cost vector has " + std::to_string(costs.size()) + " entries for " + std::to_string(games) +
                         " games");
  }
  const int source = 0;
  const int sink = 2 * n + 1;
  auto homeNode = [](int i) { return 1 + i; };
  auto awayNode = [n](int i) { return 1 + n + i; };

  MinCostFlow flow(2 * n + 2);
  std::vector<int> supplyArc(static_cast<std::size_t>(n));
  std::vector<int> demandArc(static_cast<std::size_t>(n));
  int required = 0;
  for (int i = 0; i < n; ++i) {
    supplyArc[static_cast<std::size_t>(i)] = flow.addArc(source, homeNode(i), state.team(i).homeTarget, 0.0);
    required += state.team(i).homeTarget;
  }
  std::vector<int> gameArc(static_cast<std::size_t>(games));
  for (const Game& g : state.games()) {
    gameArc[static_cast<std::size_t>(g.id)] =
        flow.addArc(homeNode(g.host), awayNode(g.guest), 1, costs[static_cast<std::size_t>(g.id)]);
  }
  for (int i = 0; i < n; ++i) {
    demandArc[static_cast<std::size_t>(i)] = flow.addArc(awayNode(i), sink, state.team(i).awayTarget, 0.0);
  }

  const int sent = flow.solve(source, sink, required);
  if (sent < required) {
    std::string msg = "transportation problem infeasible (" + std::to_string(sent) + " of " +
                      std::to_string(required) + " games placed); unmet targets:";
    for (int i = 0; i < n; ++i) {
      const int home = flow.flow(supplyArc[static_cast<std::size_t>(i)]);
      const int away = flow.flow(demandArc[static_cast<std::size_t>(i)]);
      if (home < state.team(i).homeTarget || away < state.team(i).awayTarget) {
        msg += "\n  team " + std::to_string(i) + " (" + state.team(i).name + "): home " + std::to_string(home) + "/" +
               std::to_string(state.team(i).homeTarget) + ", away " + std::to_string(away) + "/" +
               std::to_string(state.team(i).awayTarget);
      }
    }
    throw FeasibilityError(msg);
  }

  Schedule out = Schedule::none(games);
  for (int g = 0; g < games; ++g) {
    out.selected[static_cast<std::size_t>(g)] = static_cast<std::uint8_t>(flow.flow(gameArc[static_cast<std::size_t>(g)]) > 0);
  }
  return out;
}

}  // namespace shortseason
