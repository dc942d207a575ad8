#include "shortseason/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <numeric>
#include <optional>
#include <string>

#include "shortseason/errors.hpp"
#include "shortseason/transport.hpp"

namespace shortseason {

double standardNormal(std::mt19937_64& engine) {
  const double u1 = 1.0 - uniform01(engine);  // (0, 1]
  const double u2 = uniform01(engine);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

namespace {

double logistic(double z) { return 1.0 / (1.0 + std::exp(-z)); }

struct Fixture {
  int host;
  int guest;
  int day = 0;
};

constexpr int kNbaTeams = 30;
constexpr int kNbaLength = 82;

// Full 82-game slate. Division rivals meet 4 times, the other conference
// twice, and the remaining conference opponents 3 or 4 times; the 3-game
// series are oriented so every team hosts exactly 41 games.
std::vector<Fixture> nbaSlate(const std::vector<int>& slot) {
  std::vector<Fixture> out;
  auto series = [&](int a, int b, int aHosts, int bHosts) {
    for (int k = 0; k < aHosts; ++k) out.push_back({slot[a], slot[b]});
    for (int k = 0; k < bHosts; ++k) out.push_back({slot[b], slot[a]});
  };
  for (int conf = 0; conf < 2; ++conf) {
    const int base = 15 * conf;
    for (int d = 0; d < 3; ++d) {
      for (int i = 0; i < 5; ++i) {
        for (int j = i + 1; j < 5; ++j) series(base + 5 * d + i, base + 5 * d + j, 2, 2);
      }
    }
    const int pairs[3][2] = {{0, 1}, {1, 2}, {2, 0}};
    for (const auto& pr : pairs) {
      const int da = base + 5 * pr[0];
      const int db = base + 5 * pr[1];
      for (int i = 0; i < 5; ++i) {
        for (int j = 0; j < 5; ++j) {
          if (j == i) {
            series(da + i, db + j, 2, 1);
          } else if (j == (i + 1) % 5) {
            series(da + i, db + j, 1, 2);
          } else {
            series(da + i, db + j, 2, 2);
          }
        }
      }
    }
  }
  for (int i = 0; i < 15; ++i) {
    for (int j = 15; j < 30; ++j) series(i, j, 1, 1);
  }
  return out;
}

// Assigns days so that games played stay balanced across teams: each day
// takes up to a random number of games, preferring teams that are behind.
void assignDays(std::vector<Fixture>& games, std::mt19937_64& engine) {
  portableShuffle(games.begin(), games.end(), engine);
  std::vector<int> order(games.size());
  std::iota(order.begin(), order.end(), 0);
  std::vector<int> played(kNbaTeams, 0);
  int day = 0;
  while (!order.empty()) {
    const int cap = 3 + static_cast<int>(uniformIndex(engine, 10));
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
      const auto& ga = games[static_cast<std::size_t>(a)];
      const auto& gb = games[static_cast<std::size_t>(b)];
      return played[ga.host] + played[ga.guest] < played[gb.host] + played[gb.guest];
    });
    std::vector<char> busy(kNbaTeams, 0);
    std::vector<int> rest;
    int taken = 0;
    for (int gi : order) {
      Fixture& g = games[static_cast<std::size_t>(gi)];
      if (taken < cap && !busy[g.host] && !busy[g.guest]) {
        g.day = day;
        busy[g.host] = busy[g.guest] = 1;
        ++taken;
      } else {
        rest.push_back(gi);
      }
    }
    for (int t = 0; t < kNbaTeams; ++t) played[t] += busy[t];
    order = std::move(rest);
    ++day;
  }
  std::stable_sort(games.begin(), games.end(), [](const Fixture& a, const Fixture& b) { return a.day < b.day; });
}

std::optional<SyntheticLeague> tryNbaLike(std::uint64_t seed, std::uint64_t attempt, const NbaLikeConfig& cfg) {
  auto engine = streamEngine(seed, attempt);
  std::vector<int> slot(kNbaTeams);
  std::iota(slot.begin(), slot.end(), 0);
  // Shuffle teams within each division block so the 3-game pattern varies.
  for (int d = 0; d < 6; ++d) portableShuffle(slot.begin() + 5 * d, slot.begin() + 5 * d + 5, engine);

  std::vector<double> strength(kNbaTeams);
  std::vector<double> estimate(kNbaTeams);
  for (int t = 0; t < kNbaTeams; ++t) strength[t] = cfg.strengthSd * standardNormal(engine);
  for (int t = 0; t < kNbaTeams; ++t) estimate[t] = strength[t] + cfg.estimateNoiseSd * standardNormal(engine);

  auto slate = nbaSlate(slot);
  assignDays(slate, engine);

  const int total = static_cast<int>(slate.size());
  int playedCount = cfg.remainingGames > 0 ? total - cfg.remainingGames
                                           : static_cast<int>(std::lround(cfg.suspensionFraction * total));
  if (playedCount < 0 || playedCount > total) throw ConfigError("suspension point outside the season");

  std::vector<Team> teams(kNbaTeams);
  for (int t = 0; t < kNbaTeams; ++t) {
    teams[t].id = t;
    teams[t].name = "T" + std::string(t < 10 ? "0" : "") + std::to_string(t);
    teams[t].conference = t < 15 ? Conference::East : Conference::West;
    teams[t].division = (t < 15 ? "E" : "W") + std::to_string((t % 15) / 5);
  }
  std::map<std::pair<int, int>, int> meetings;
  std::vector<Game> remaining;
  std::vector<double> trueProbs;
  for (int k = 0; k < total; ++k) {
    const Fixture& f = slate[static_cast<std::size_t>(k)];
    const int match = ++meetings[{std::min(f.host, f.guest), std::max(f.host, f.guest)}];
    const double p = logistic(strength[f.host] - strength[f.guest] + cfg.homeAdvantage);
    if (k < playedCount) {
      const bool hostWon = bernoulli(engine, p);
      ++teams[f.host].preGames;
      ++teams[f.host].preHomeGames;
      ++teams[f.guest].preGames;
      ++(hostWon ? teams[f.host] : teams[f.guest]).preWins;
    } else {
      Game g;
      g.id = static_cast<int>(remaining.size());
      g.host = f.host;
      g.guest = f.guest;
      g.matchIndex = match;
      g.scheduledDay = f.day;
      g.winProb = logistic(estimate[f.host] - estimate[f.guest] + cfg.homeAdvantage);
      remaining.push_back(g);
      trueProbs.push_back(p);
    }
  }

  const int half = cfg.shortSeasonLength / 2;
  for (Team& t : teams) {
    t.homeTarget = half - t.preHomeGames;
    t.awayTarget = half - (t.preGames - t.preHomeGames);
    if (t.homeTarget < 0 || t.awayTarget < 0 || t.homeTarget > 41 - t.preHomeGames ||
        t.awayTarget > 41 - (t.preGames - t.preHomeGames)) {
      return std::nullopt;
    }
  }
  SyntheticLeague out;
  out.state = LeagueState::create(std::move(teams), std::move(remaining), kNbaLength, cfg.shortSeasonLength);
  try {
    transportationSubproblem(out.state, std::vector<double>(static_cast<std::size_t>(out.state.numGames()), 0.0));
  } catch (const FeasibilityError&) {
    return std::nullopt;
  }
  out.trueProbs = std::move(trueProbs);
  out.strengths = std::move(strength);
  out.suspensionDay = playedCount < total ? slate[static_cast<std::size_t>(playedCount)].day : slate.back().day + 1;
  return out;
}

}  // namespace

SyntheticLeague generateNbaLike(std::uint64_t seed, const NbaLikeConfig& config) {
  if (config.shortSeasonLength % 2 != 0) throw ConfigError("short season length must be even to split home/away");
  if (config.shortSeasonLength > kNbaLength) throw ConfigError("short season longer than the full season");
  for (int attempt = 0; attempt < config.maxAttempts; ++attempt) {
    if (auto league = tryNbaLike(seed, static_cast<std::uint64_t>(attempt), config)) return *std::move(league);
  }
  throw FeasibilityError("no feasible synthetic league after " + std::to_string(config.maxAttempts) + " attempts");
}

LeagueState generateRoundRobin(std::uint64_t seed, const RoundRobinConfig& cfg) {
  if (cfg.teams < 2 || cfg.teams % 2 != 0) throw ConfigError("round-robin generator needs an even number of teams");
  if (cfg.rounds < 1 || cfg.selectedRounds < 1 || cfg.selectedRounds > cfg.rounds || cfg.preGames < 0) {
    throw ConfigError("invalid round counts");
  }
  auto engine = streamEngine(seed, 0);
  const int n = cfg.teams;
  std::vector<Team> teams(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Team& t = teams[static_cast<std::size_t>(i)];
    t.id = i;
    t.name = "team" + std::to_string(i);
    t.conference = i < n / 2 ? Conference::East : Conference::West;
    t.division = t.conference == Conference::East ? "E" : "W";
    t.preGames = cfg.preGames;
    t.preHomeGames = static_cast<int>(uniformIndex(engine, static_cast<std::uint64_t>(cfg.preGames) + 1));
    const int lo = static_cast<int>(std::ceil(cfg.preWinLow * cfg.preGames));
    const int hi = static_cast<int>(std::floor(cfg.preWinHigh * cfg.preGames));
    t.preWins = lo + static_cast<int>(uniformIndex(engine, static_cast<std::uint64_t>(std::max(hi - lo, 0)) + 1));
  }
  std::vector<int> chosen(static_cast<std::size_t>(cfg.rounds));
  std::iota(chosen.begin(), chosen.end(), 0);
  portableShuffle(chosen.begin(), chosen.end(), engine);
  std::vector<char> selectedRound(static_cast<std::size_t>(cfg.rounds), 0);
  for (int k = 0; k < cfg.selectedRounds; ++k) selectedRound[static_cast<std::size_t>(chosen[static_cast<std::size_t>(k)])] = 1;

  std::vector<Game> games;
  std::map<std::pair<int, int>, int> meetings;
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int r = 0; r < cfg.rounds; ++r) {
    std::iota(perm.begin(), perm.end(), 0);
    portableShuffle(perm.begin(), perm.end(), engine);
    for (int k = 0; k < n; k += 2) {
      int a = perm[static_cast<std::size_t>(k)];
      int b = perm[static_cast<std::size_t>(k) + 1];
      if (bernoulli(engine, 0.5)) std::swap(a, b);
      Game g;
      g.id = static_cast<int>(games.size());
      g.host = a;
      g.guest = b;
      g.matchIndex = ++meetings[{std::min(a, b), std::max(a, b)}];
      g.scheduledDay = r;
      g.winProb = cfg.probLow + (cfg.probHigh - cfg.probLow) * uniform01(engine);
      games.push_back(g);
      if (selectedRound[static_cast<std::size_t>(r)]) {
        ++teams[static_cast<std::size_t>(a)].homeTarget;
        ++teams[static_cast<std::size_t>(b)].awayTarget;
      }
    }
  }
  return LeagueState::create(std::move(teams), std::move(games), cfg.preGames + cfg.rounds,
                             cfg.preGames + cfg.selectedRounds);
}

}  // namespace shortseason
