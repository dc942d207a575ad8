#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

#include "shortseason/league.hpp"

namespace testsupport {

using namespace shortseason;

// Builds a small league from per-team (preWins, preGames, preHome, homeTarget,
// awayTarget) rows and (host, guest, p) games.
struct TeamRow {
  int preWins, preGames, preHome, homeTarget, awayTarget;
};
struct GameRow {
  int host, guest;
  double p;
};

inline LeagueState makeLeague(const std::vector<TeamRow>& rows, const std::vector<GameRow>& games, int full, int shortLen) {
  std::vector<Team> teams;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    Team t;
    t.id = static_cast<int>(i);
    t.name = "t" + std::to_string(i);
    t.conference = i < rows.size() / 2 ? Conference::East : Conference::West;
    t.preWins = rows[i].preWins;
    t.preGames = rows[i].preGames;
    t.preHomeGames = rows[i].preHome;
    t.homeTarget = rows[i].homeTarget;
    t.awayTarget = rows[i].awayTarget;
    teams.push_back(t);
  }
  std::vector<Game> gs;
  for (std::size_t g = 0; g < games.size(); ++g) {
    Game gm;
    gm.id = static_cast<int>(g);
    gm.host = games[g].host;
    gm.guest = games[g].guest;
    gm.scheduledDay = static_cast<int>(g);
    gm.winProb = games[g].p;
    gs.push_back(gm);
  }
  return LeagueState::create(teams, gs, full, shortLen);
}

// E[sum_i (y_i - yhat_i)^2] by summing over all 2^G outcome vectors with
// their exact probabilities. Independent of the closed form.
inline double exactExpectedSquaredDistance(const LeagueState& s, const std::vector<std::uint8_t>& x) {
  const int G = s.numGames();
  const int n = s.numTeams();
  double total = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << G); ++mask) {
    double prob = 1.0;
    std::vector<double> shortW(n), fullW(n);
    for (int i = 0; i < n; ++i) shortW[i] = fullW[i] = s.team(i).preWins;
    for (int g = 0; g < G; ++g) {
      const Game& gm = s.game(g);
      const bool hostWon = (mask >> g) & 1U;
      prob *= hostWon ? gm.winProb : 1.0 - gm.winProb;
      const int w = hostWon ? gm.host : gm.guest;
      fullW[w] += 1;
      if (x[g]) shortW[w] += 1;
    }
    double d2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double d = shortW[i] / s.shortSeasonLength() - fullW[i] / s.fullSeasonLength();
      d2 += d * d;
    }
    total += prob * d2;
  }
  return total;
}

inline Scenario scenarioFromMask(int games, std::uint64_t mask) {
  Scenario sc;
  sc.hostWon.resize(static_cast<std::size_t>(games));
  for (int g = 0; g < games; ++g) sc.hostWon[static_cast<std::size_t>(g)] = (mask >> g) & 1U;
  return sc;
}

inline Ranking rankingOf(std::vector<int> r) {
  Ranking out;
  out.rank = std::move(r);
  return out;
}

}  // namespace testsupport
