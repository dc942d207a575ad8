#include "shortseason/strength.hpp"

#include <algorithm>
#include <cmath>

#include "shortseason/errors.hpp"

namespace shortseason {

std::vector<double> preWinPct(const LeagueState& state) {
  std::vector<double> out(static_cast<std::size_t>(state.numTeams()), 0.0);
  for (const Team& t : state.teams()) {
    if (t.preGames > 0) out[static_cast<std::size_t>(t.id)] = static_cast<double>(t.preWins) / t.preGames;
  }
  return out;
}

OwCoefficients owCoefficients(const LeagueState& state, std::span<const double> pct) {
  if (static_cast<int>(pct.size()) != state.numTeams()) throw DimensionError("win-percentage vector has the wrong length");
  OwCoefficients c;
  c.host.assign(static_cast<std::size_t>(state.numGames()), 0.0);
  c.guest.assign(static_cast<std::size_t>(state.numGames()), 0.0);
  for (const Game& g : state.games()) {
    const Team& h = state.team(g.host);
    const Team& a = state.team(g.guest);
    const int hn = h.homeTarget + h.awayTarget;
    const int an = a.homeTarget + a.awayTarget;
    const auto gi = static_cast<std::size_t>(g.id);
    if (hn > 0) c.host[gi] = pct[static_cast<std::size_t>(g.guest)] / hn;
    if (an > 0) c.guest[gi] = pct[static_cast<std::size_t>(g.host)] / an;
  }
  return c;
}

StrengthOfSchedule strengthOfSchedule(const LeagueState& state, const Schedule& schedule) {
  if (schedule.size() != state.numGames()) throw DimensionError("schedule length does not match the number of games");
  const int n = state.numTeams();
  const auto pct = preWinPct(state);
  const auto x = schedule.asReal();
  StrengthOfSchedule s;
  s.ow.assign(static_cast<std::size_t>(n), 0.0);
  s.owFull.assign(static_cast<std::size_t>(n), 0.0);
  s.relativeExcess.assign(static_cast<std::size_t>(n), 0.0);
  std::vector<double> selectedGames(static_cast<std::size_t>(n), 0.0);
  for (const Game& g : state.games()) {
    const auto gi = static_cast<std::size_t>(g.id);
    const auto h = static_cast<std::size_t>(g.host);
    const auto a = static_cast<std::size_t>(g.guest);
    s.ow[h] += x[gi] * pct[a];
    s.ow[a] += x[gi] * pct[h];
    s.owFull[h] += pct[a];
    s.owFull[a] += pct[h];
    selectedGames[h] += x[gi];
    selectedGames[a] += x[gi];
  }
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const Team& t = state.team(i);
    const int shortLeft = t.homeTarget + t.awayTarget;
    const int fullLeft = state.fullSeasonLength() - t.preGames;
    s.ow[ii] = shortLeft > 0 ? s.ow[ii] / shortLeft : 0.0;
    s.owFull[ii] = fullLeft > 0 ? s.owFull[ii] / fullLeft : 0.0;
    if (selectedGames[ii] == 0.0 || s.owFull[ii] == 0.0) {
      s.undefinedTeams.push_back(i);
      continue;
    }
    s.relativeExcess[ii] = (s.ow[ii] - s.owFull[ii]) / s.owFull[ii];
    const double pos = std::max(s.relativeExcess[ii], 0.0);
    s.ssd += pos;
    s.maxExcess = std::max(s.maxExcess, pos);
  }
  if (n > 0) s.ssd /= n;
  return s;
}

}  // namespace shortseason
