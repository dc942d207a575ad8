#include "shortseason/league.hpp"

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <numeric>
#include <sstream>

#include "shortseason/errors.hpp"

namespace shortseason {

std::string toString(Conference c) { return c == Conference::East ? "East" : "West"; }

Conference conferenceFromString(const std::string& s) {
  std::string lower(s);
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char ch) { return std::tolower(ch); });
  if (lower == "east" || lower == "e") return Conference::East;
  if (lower == "west" || lower == "w") return Conference::West;
  throw DataError("unknown conference '" + s + "'");
}

double admitProbability(double p, ProbabilityPolicy policy) {
  if (!(p >= 0.0 && p <= 1.0)) {
    throw DomainError("probability " + std::to_string(p) + " outside [0, 1]");
  }
  if (p > 0.0 && p < 1.0) {
    if (policy == ProbabilityPolicy::Clamp) {
      return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
    }
    return p;
  }
  if (policy == ProbabilityPolicy::Reject) {
    throw DomainError("probability " + std::to_string(p) + " on the {0,1} boundary (use clamping)");
  }
  return std::clamp(p, kProbabilityClamp, 1.0 - kProbabilityClamp);
}

LeagueState LeagueState::create(std::vector<Team> teams, std::vector<Game> games, int fullSeasonLength,
                                int shortSeasonLength) {
  LeagueState s;
  s.teams_ = std::move(teams);
  s.games_ = std::move(games);
  s.fullLength_ = fullSeasonLength;
  s.shortLength_ = shortSeasonLength;

  const int n = s.numTeams();
  if (n < 2) throw DataError("a league needs at least two teams");
  if (shortSeasonLength <= 0 || shortSeasonLength > fullSeasonLength) {
    throw ConfigError("short season length " + std::to_string(shortSeasonLength) +
                      " must lie in (0, " + std::to_string(fullSeasonLength) + "]");
  }
  for (int i = 0; i < n; ++i) {
    const Team& t = s.team(i);
    if (t.id != i) throw DataError("team ids must be 0..n-1 in order; found " + std::to_string(t.id) + " at " + std::to_string(i));
    if (t.preWins < 0 || t.preGames < 0 || t.preWins > t.preGames) {
      throw DataError("team " + std::to_string(i) + ": need 0 <= preWins <= preGames");
    }
    if (t.preHomeGames < 0 || t.preHomeGames > t.preGames) {
      throw DataError("team " + std::to_string(i) + ": need 0 <= preHomeGames <= preGames");
    }
    if (t.homeTarget < 0 || t.awayTarget < 0) {
      throw FeasibilityError("team " + std::to_string(i) + " (" + t.name + ") has a negative target");
    }
  }
  for (int g = 0; g < s.numGames(); ++g) {
    const Game& gm = s.game(g);
    if (gm.id != g) throw DataError("game ids must be 0..G-1 in order; found " + std::to_string(gm.id) + " at " + std::to_string(g));
    if (gm.host < 0 || gm.host >= n || gm.guest < 0 || gm.guest >= n) {
      throw DataError("game " + std::to_string(g) + " references an unknown team");
    }
    if (gm.host == gm.guest) throw DataError("game " + std::to_string(g) + ": host equals guest");
    if (!(gm.winProb > 0.0 && gm.winProb < 1.0)) {
      throw DomainError("game " + std::to_string(g) + ": win probability must lie strictly inside (0, 1)");
    }
  }
  s.index();

  long long homeSum = 0;
  long long awaySum = 0;
  for (int i = 0; i < n; ++i) {
    const Team& t = s.team(i);
    const int remaining = static_cast<int>(s.home_[i].size() + s.away_[i].size());
    if (t.preGames + remaining != fullSeasonLength) {
      throw DataError("team " + std::to_string(i) + " (" + t.name + "): " + std::to_string(t.preGames) +
                      " played + " + std::to_string(remaining) + " remaining != full season length " +
                      std::to_string(fullSeasonLength));
    }
    if (t.homeTarget > static_cast<int>(s.home_[i].size()) || t.awayTarget > static_cast<int>(s.away_[i].size())) {
      throw FeasibilityError("team " + std::to_string(i) + " (" + t.name + "): targets exceed remaining home/away games");
    }
    if (t.preGames + t.homeTarget + t.awayTarget != shortSeasonLength) {
      throw FeasibilityError("team " + std::to_string(i) + " (" + t.name + "): preGames + targets != short season length");
    }
    homeSum += t.homeTarget;
    awaySum += t.awayTarget;
  }
  if (homeSum != awaySum) {
    throw FeasibilityError("sum of home targets (" + std::to_string(homeSum) + ") != sum of away targets (" +
                           std::to_string(awaySum) + ")");
  }
  return s;
}

void LeagueState::index() {
  home_.assign(teams_.size(), {});
  away_.assign(teams_.size(), {});
  for (const Game& g : games_) {
    home_[static_cast<std::size_t>(g.host)].push_back(g.id);
    away_[static_cast<std::size_t>(g.guest)].push_back(g.id);
  }
}

std::vector<double> LeagueState::probabilities() const {
  std::vector<double> p(games_.size());
  for (std::size_t g = 0; g < games_.size(); ++g) p[g] = games_[g].winProb;
  return p;
}

LeagueState LeagueState::withProbabilities(std::span<const double> probs) const {
  if (probs.size() != games_.size()) {
    throw DimensionError("expected " + std::to_string(games_.size()) + " probabilities, got " + std::to_string(probs.size()));
  }
  LeagueState copy = *this;
  for (std::size_t g = 0; g < games_.size(); ++g) {
    if (!(probs[g] > 0.0 && probs[g] < 1.0)) {
      throw DomainError("game " + std::to_string(g) + ": win probability must lie strictly inside (0, 1)");
    }
    copy.games_[g].winProb = probs[g];
  }
  return copy;
}

LeagueState LeagueState::withTargets(std::span<const int> home, std::span<const int> away, int shortSeasonLength) const {
  if (home.size() != teams_.size() || away.size() != teams_.size()) {
    throw DimensionError("target vectors must have one entry per team");
  }
  std::vector<Team> teams = teams_;
  for (std::size_t i = 0; i < teams.size(); ++i) {
    teams[i].homeTarget = home[i];
    teams[i].awayTarget = away[i];
  }
  return create(std::move(teams), games_, fullLength_, shortSeasonLength);
}

int LeagueState::selectedGameCount() const {
  int total = 0;
  for (const Team& t : teams_) total += t.homeTarget;
  return total;
}

Schedule Schedule::fromReal(std::vector<double> x) {
  Schedule s;
  s.selected.resize(x.size());
  bool integral = true;
  for (std::size_t g = 0; g < x.size(); ++g) {
    if (x[g] == 0.0 || x[g] == 1.0) {
      s.selected[g] = static_cast<std::uint8_t>(x[g] == 1.0);
    } else {
      integral = false;
      s.selected[g] = static_cast<std::uint8_t>(x[g] >= 0.5);
    }
  }
  if (!integral) s.fractional = std::move(x);
  return s;
}

int Schedule::count() const {
  return static_cast<int>(std::count(selected.begin(), selected.end(), std::uint8_t{1}));
}

std::vector<double> Schedule::asReal() const {
  if (fractional) return *fractional;
  return {selected.begin(), selected.end()};
}

std::vector<std::string> scheduleViolations(const LeagueState& state, const Schedule& schedule) {
  std::vector<std::string> out;
  if (schedule.size() != state.numGames()) {
    out.push_back("schedule has " + std::to_string(schedule.size()) + " entries for " +
                  std::to_string(state.numGames()) + " games");
    return out;
  }
  if (!schedule.isIntegral()) {
    out.push_back("schedule is fractional");
    return out;
  }
  for (int i = 0; i < state.numTeams(); ++i) {
    int home = 0;
    int away = 0;
    for (int g : state.homeGames(i)) home += schedule.selected[static_cast<std::size_t>(g)] != 0;
    for (int g : state.awayGames(i)) away += schedule.selected[static_cast<std::size_t>(g)] != 0;
    const Team& t = state.team(i);
    if (home != t.homeTarget || away != t.awayTarget) {
      std::ostringstream os;
      os << "team " << i << " (" << t.name << "): home " << home << "/" << t.homeTarget << ", away " << away << "/"
         << t.awayTarget;
      out.push_back(os.str());
    }
  }
  return out;
}

bool isFeasible(const LeagueState& state, const Schedule& schedule) {
  return scheduleViolations(state, schedule).empty();
}

void requireFeasible(const LeagueState& state, const Schedule& schedule) {
  const auto v = scheduleViolations(state, schedule);
  if (v.empty()) return;
  std::string msg = "infeasible schedule:";
  for (const auto& s : v) msg += "\n  " + s;
  throw FeasibilityError(msg);
}

ScoreVector ScoreVector::exact(std::vector<std::int64_t> numerators, std::vector<std::int64_t> denominators) {
  if (numerators.size() != denominators.size()) throw DimensionError("numerator/denominator size mismatch");
  ScoreVector s;
  s.exact_ = true;
  s.values_.resize(numerators.size());
  for (std::size_t i = 0; i < numerators.size(); ++i) {
    if (denominators[i] <= 0) throw DomainError("score denominators must be positive");
    s.values_[i] = static_cast<double>(numerators[i]) / static_cast<double>(denominators[i]);
  }
  s.num_ = std::move(numerators);
  s.den_ = std::move(denominators);
  return s;
}

ScoreVector ScoreVector::exact(std::vector<std::int64_t> numerators, std::int64_t denominator) {
  std::vector<std::int64_t> den(numerators.size(), denominator);
  return exact(std::move(numerators), std::move(den));
}

ScoreVector ScoreVector::real(std::vector<double> values) {
  ScoreVector s;
  s.values_ = std::move(values);
  return s;
}

int ScoreVector::compare(int i, int j) const {
  const auto a = static_cast<std::size_t>(i);
  const auto b = static_cast<std::size_t>(j);
  if (exact_) {
    const std::int64_t lhs = num_[a] * den_[b];
    const std::int64_t rhs = num_[b] * den_[a];
    return (lhs > rhs) - (lhs < rhs);
  }
  return (values_[a] > values_[b]) - (values_[a] < values_[b]);
}

ScoreVector winPercentages(const LeagueState& state, const Schedule& schedule, const Scenario& scenario,
                           Horizon horizon) {
  if (scenario.size() != state.numGames()) {
    throw DimensionError("scenario has " + std::to_string(scenario.size()) + " outcomes for " +
                         std::to_string(state.numGames()) + " games");
  }
  const bool full = horizon == Horizon::Full;
  if (!full) {
    if (schedule.size() != state.numGames()) throw DimensionError("schedule length does not match game count");
    requireFeasible(state, schedule);
  }
  std::vector<std::int64_t> wins(static_cast<std::size_t>(state.numTeams()));
  for (int i = 0; i < state.numTeams(); ++i) wins[static_cast<std::size_t>(i)] = state.team(i).preWins;
  for (const Game& g : state.games()) {
    if (!full && !schedule.selected[static_cast<std::size_t>(g.id)]) continue;
    const int winner = scenario.hostWon[static_cast<std::size_t>(g.id)] ? g.host : g.guest;
    ++wins[static_cast<std::size_t>(winner)];
  }
  return ScoreVector::exact(std::move(wins), full ? state.fullSeasonLength() : state.shortSeasonLength());
}

ScoreVector preSuspensionScores(const LeagueState& state) {
  std::vector<std::int64_t> num;
  std::vector<std::int64_t> den;
  for (const Team& t : state.teams()) {
    num.push_back(t.preGames > 0 ? t.preWins : 0);
    den.push_back(t.preGames > 0 ? t.preGames : 1);
  }
  return ScoreVector::exact(std::move(num), std::move(den));
}

Ranking rankFromScores(const ScoreVector& scores, const ScoreVector& tieBreakScores) {
  if (scores.size() != tieBreakScores.size()) throw DimensionError("score and tie-break vectors differ in length");
  const int n = scores.size();
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (int c = scores.compare(a, b); c != 0) return c > 0;
    if (int c = tieBreakScores.compare(a, b); c != 0) return c > 0;
    return a < b;
  });
  Ranking r;
  r.rank.resize(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) r.rank[static_cast<std::size_t>(order[static_cast<std::size_t>(k)])] = k + 1;
  return r;
}

Ranking rankFromScores(const LeagueState& state, const ScoreVector& scores) {
  return rankFromScores(scores, preSuspensionScores(state));
}

namespace {

template <typename SignA, typename SignB>
std::int64_t countConcordant(int n, SignA signA, SignB signB) {
  std::int64_t c = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (signA(i, j) * signB(i, j) > 0) ++c;
    }
  }
  return c;
}

int rankSign(const Ranking& r, int i, int j) {
  // Positive when i is better placed, matching the score orientation.
  const int a = r.rank[static_cast<std::size_t>(i)];
  const int b = r.rank[static_cast<std::size_t>(j)];
  return (a < b) - (a > b);
}

void requireSameSize(int a, int b) {
  if (a != b) throw DimensionError("inputs differ in length (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
}

}  // namespace

std::int64_t concordance(const ScoreVector& a, const ScoreVector& b) {
  requireSameSize(a.size(), b.size());
  return countConcordant(
      a.size(), [&](int i, int j) { return a.compare(i, j); }, [&](int i, int j) { return b.compare(i, j); });
}

std::int64_t concordance(const Ranking& a, const Ranking& b) {
  requireSameSize(a.size(), b.size());
  return countConcordant(
      a.size(), [&](int i, int j) { return rankSign(a, i, j); }, [&](int i, int j) { return rankSign(b, i, j); });
}

std::int64_t concordance(const ScoreVector& a, const Ranking& b) {
  requireSameSize(a.size(), b.size());
  return countConcordant(
      a.size(), [&](int i, int j) { return a.compare(i, j); }, [&](int i, int j) { return rankSign(b, i, j); });
}

std::int64_t euclideanDistance(const Ranking& a, const Ranking& b) {
  requireSameSize(a.size(), b.size());
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.rank.size(); ++i) {
    const std::int64_t diff = a.rank[i] - b.rank[i];
    d += diff * diff;
  }
  return d;
}

std::int64_t manhattanDistance(const Ranking& a, const Ranking& b) {
  requireSameSize(a.size(), b.size());
  std::int64_t d = 0;
  for (std::size_t i = 0; i < a.rank.size(); ++i) d += std::abs(a.rank[i] - b.rank[i]);
  return d;
}

}  // namespace shortseason
