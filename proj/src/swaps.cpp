#include "shortseason/swaps.hpp"

#include <string>

#include "shortseason/errors.hpp"

namespace shortseason {

std::vector<SwapMove> feasibleSwaps(const LeagueState& state, const Schedule& schedule) {
  if (!schedule.isIntegral() || schedule.size() != state.numGames()) {
    throw DimensionError("swap moves need an integral schedule over every game");
  }
  const int n = state.numTeams();
  std::vector<std::vector<int>> unselected(static_cast<std::size_t>(n * n));
  std::vector<int> selected;
  for (const Game& g : state.games()) {
    if (schedule.selected[static_cast<std::size_t>(g.id)]) {
      selected.push_back(g.id);
    } else {
      unselected[static_cast<std::size_t>(g.host * n + g.guest)].push_back(g.id);
    }
  }
  auto bucket = [&](int host, int guest) -> const std::vector<int>& {
    return unselected[static_cast<std::size_t>(host * n + guest)];
  };
  std::vector<SwapMove> moves;
  for (int g : selected) {
    for (int h : bucket(state.game(g).host, state.game(g).guest)) moves.push_back({g, h, -1, -1});
  }
  for (std::size_t k1 = 0; k1 < selected.size(); ++k1) {
    const Game& g1 = state.game(selected[k1]);
    for (std::size_t k2 = k1 + 1; k2 < selected.size(); ++k2) {
      const Game& g2 = state.game(selected[k2]);
      if (g1.host == g2.host || g1.guest == g2.guest || g1.host == g2.guest || g2.host == g1.guest) continue;
      for (int in1 : bucket(g1.host, g2.guest)) {
        for (int in2 : bucket(g2.host, g1.guest)) moves.push_back({g1.id, in1, g2.id, in2});
      }
    }
  }
  return moves;
}

void applySwap(Schedule& schedule, const SwapMove& move) {
  auto& s = schedule.selected;
  auto check = [&](int g, std::uint8_t want) {
    if (g < 0 || static_cast<std::size_t>(g) >= s.size() || s[static_cast<std::size_t>(g)] != want) {
      throw ConfigError("swap move does not match the schedule at game " + std::to_string(g));
    }
  };
  check(move.out1, 1);
  check(move.in1, 0);
  if (move.out2 >= 0) {
    check(move.out2, 1);
    check(move.in2, 0);
  }
  s[static_cast<std::size_t>(move.out1)] = 0;
  s[static_cast<std::size_t>(move.in1)] = 1;
  if (move.out2 >= 0) {
    s[static_cast<std::size_t>(move.out2)] = 0;
    s[static_cast<std::size_t>(move.in2)] = 1;
  }
}

}  // namespace shortseason
