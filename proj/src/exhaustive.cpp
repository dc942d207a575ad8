#include "shortseason/exhaustive.hpp"

#include <string>

#include "shortseason/errors.hpp"

namespace shortseason {

namespace {

struct Enumerator {
  const LeagueState& state;
  const std::function<void(const Schedule&)>& visit;
  Schedule current;
  std::vector<int> homeNeed;
  std::vector<int> awayNeed;
  std::vector<int> homeLeft;  // undecided home games per team
  std::vector<int> awayLeft;

  void run(int g) {
    if (g == state.numGames()) {
      visit(current);
      return;
    }
    const Game& game = state.game(g);
    const auto h = static_cast<std::size_t>(game.host);
    const auto a = static_cast<std::size_t>(game.guest);
    --homeLeft[h];
    --awayLeft[a];
    if (homeNeed[h] > 0 && awayNeed[a] > 0) {
      --homeNeed[h];
      --awayNeed[a];
      current.selected[static_cast<std::size_t>(g)] = 1;
      run(g + 1);
      current.selected[static_cast<std::size_t>(g)] = 0;
      ++homeNeed[h];
      ++awayNeed[a];
    }
    if (homeNeed[h] <= homeLeft[h] && awayNeed[a] <= awayLeft[a]) run(g + 1);
    ++homeLeft[h];
    ++awayLeft[a];
  }
};

}  // namespace

void forEachFeasibleSchedule(const LeagueState& state, const std::function<void(const Schedule&)>& visit, int maxGames) {
  if (state.numGames() > maxGames) {
    throw ConfigError("exhaustive enumeration limited to " + std::to_string(maxGames) + " games, got " +
                      std::to_string(state.numGames()));
  }
  const auto n = static_cast<std::size_t>(state.numTeams());
  Enumerator e{state, visit, Schedule::none(state.numGames()), std::vector<int>(n), std::vector<int>(n),
               std::vector<int>(n), std::vector<int>(n)};
  for (int i = 0; i < state.numTeams(); ++i) {
    const auto ii = static_cast<std::size_t>(i);
    e.homeNeed[ii] = state.team(i).homeTarget;
    e.awayNeed[ii] = state.team(i).awayTarget;
    e.homeLeft[ii] = static_cast<int>(state.homeGames(i).size());
    e.awayLeft[ii] = static_cast<int>(state.awayGames(i).size());
  }
  e.run(0);
}

std::vector<Schedule> enumerateFeasibleSchedules(const LeagueState& state, int maxGames) {
  std::vector<Schedule> out;
  forEachFeasibleSchedule(state, [&](const Schedule& s) { out.push_back(s); }, maxGames);
  return out;
}

}  // namespace shortseason
