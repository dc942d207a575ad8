#include "shortseason/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <string>

#include "shortseason/errors.hpp"
#include "shortseason/random.hpp"
#include "shortseason/strength.hpp"

namespace shortseason {

namespace {

constexpr std::int64_t kBlock = 64;

void checkCutoffs(const LeagueState& state, const AgreementCutoffs& c) {
  int east = 0;
  for (const Team& t : state.teams()) east += t.conference == Conference::East;
  const int west = state.numTeams() - east;
  for (int size : {east, west}) {
    if (size > 0 && (c.playoff > size || c.homeCourt > size)) {
      throw ConfigError("agreement cutoffs exceed a conference of " + std::to_string(size) + " teams");
    }
  }
  if (c.playoff < 1 || c.homeCourt < 1 || c.lottery < 1 || c.lottery > state.numTeams()) {
    throw ConfigError("agreement cutoffs must be between 1 and the league size");
  }
}

// Teams of the category under a ranking, as a membership mask.
std::vector<std::uint8_t> members(const LeagueState& state, const Ranking& r, AgreementCategory category,
                                  const AgreementCutoffs& c) {
  const int n = state.numTeams();
  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(r.rank[static_cast<std::size_t>(i)] - 1)] = i;
  std::vector<std::uint8_t> in(static_cast<std::size_t>(n), 0);
  if (category == AgreementCategory::Lottery) {
    for (int k = 0; k < c.lottery; ++k) in[static_cast<std::size_t>(order[static_cast<std::size_t>(n - 1 - k)])] = 1;
    return in;
  }
  const int top = category == AgreementCategory::Playoff ? c.playoff : c.homeCourt;
  int taken[2] = {0, 0};
  for (int i : order) {
    const int conf = state.team(i).conference == Conference::East ? 0 : 1;
    if (taken[conf] < top) {
      in[static_cast<std::size_t>(i)] = 1;
      ++taken[conf];
    }
  }
  return in;
}

double agreementFromRanks(const LeagueState& state, const Ranking& shortRank, const Ranking& fullRank,
                          AgreementCategory category, const AgreementCutoffs& c) {
  const auto a = members(state, shortRank, category, c);
  const auto b = members(state, fullRank, category, c);
  int both = 0;
  int size = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    both += a[i] && b[i];
    size += b[i];
  }
  return size > 0 ? 100.0 * both / size : 100.0;
}

ReplicationRow evaluate(const LeagueState& state, const ScoreVector& shortScores, const ScoreVector& fullScores,
                        const ScoreVector& tieBreak, const AgreementCutoffs& c) {
  ReplicationRow row;
  row.concordance = concordance(shortScores, fullScores);
  const Ranking rs = rankFromScores(shortScores, tieBreak);
  const Ranking rf = rankFromScores(fullScores, tieBreak);
  row.playoff = agreementFromRanks(state, rs, rf, AgreementCategory::Playoff, c);
  row.homeCourt = agreementFromRanks(state, rs, rf, AgreementCategory::HomeCourt, c);
  row.lottery = agreementFromRanks(state, rs, rf, AgreementCategory::Lottery, c);
  return row;
}

std::vector<double> evaluatorProbs(const LeagueState& state, const EvalConfig& config) {
  if (config.replications < 1) throw ConfigError("replications must be at least 1");
  if (config.simProbs.empty()) return state.probabilities();
  if (static_cast<int>(config.simProbs.size()) != state.numGames()) {
    throw DimensionError("evaluator probabilities have " + std::to_string(config.simProbs.size()) + " entries for " +
                         std::to_string(state.numGames()) + " games");
  }
  for (double p : config.simProbs) {
    if (!(p > 0.0 && p < 1.0)) throw DomainError("evaluator probability outside (0, 1)");
  }
  return config.simProbs;
}

// schedule == nullptr compares the status-quo ranking.
SimulationReport run(const LeagueState& state, const Schedule* schedule, const EvalConfig& config, bool parallel) {
  const auto probs = evaluatorProbs(state, config);
  checkCutoffs(state, config.cutoffs);
  if (schedule != nullptr) requireFeasible(state, *schedule);
  const ScoreVector tieBreak = preSuspensionScores(state);
  const ScoreVector frozen = schedule == nullptr ? statusQuoScores(state) : ScoreVector{};
  const int n = state.numTeams();
  const std::int64_t R = config.replications;
  const std::int64_t blocks = (R + kBlock - 1) / kBlock;
  std::vector<ReplicationRow> rows(static_cast<std::size_t>(R));

  auto runBlock = [&](std::int64_t b) {
    auto engine = streamEngine(config.baseSeed, static_cast<std::uint64_t>(b));
    std::vector<std::int64_t> shortWins(static_cast<std::size_t>(n));
    std::vector<std::int64_t> fullWins(static_cast<std::size_t>(n));
    const std::int64_t end = std::min(R, (b + 1) * kBlock);
    for (std::int64_t r = b * kBlock; r < end; ++r) {
      for (int i = 0; i < n; ++i) shortWins[static_cast<std::size_t>(i)] = fullWins[static_cast<std::size_t>(i)] = state.team(i).preWins;
      for (const Game& g : state.games()) {
        const auto gi = static_cast<std::size_t>(g.id);
        const int winner = bernoulli(engine, probs[gi]) ? g.host : g.guest;
        ++fullWins[static_cast<std::size_t>(winner)];
        if (schedule != nullptr && schedule->selected[gi]) ++shortWins[static_cast<std::size_t>(winner)];
      }
      const ScoreVector full = ScoreVector::exact(fullWins, state.fullSeasonLength());
      rows[static_cast<std::size_t>(r)] =
          schedule == nullptr ? evaluate(state, frozen, full, tieBreak, config.cutoffs)
                              : evaluate(state, ScoreVector::exact(shortWins, state.shortSeasonLength()), full, tieBreak,
                                         config.cutoffs);
    }
  };
  if (parallel) {
#pragma omp parallel for schedule(dynamic)
    for (std::int64_t b = 0; b < blocks; ++b) runBlock(b);
  } else {
    for (std::int64_t b = 0; b < blocks; ++b) runBlock(b);
  }

  SimulationReport rep;
  rep.replications = R;
  double sum = 0.0;
  double sumSq = 0.0;
  for (const ReplicationRow& row : rows) {
    const auto c = static_cast<double>(row.concordance);
    sum += c;
    sumSq += c * c;
    rep.agreement.playoff += row.playoff;
    rep.agreement.homeCourt += row.homeCourt;
    rep.agreement.lottery += row.lottery;
  }
  const auto Rd = static_cast<double>(R);
  rep.meanConcordance = sum / Rd;
  rep.sdConcordance = R > 1 ? std::sqrt(std::max(0.0, (sumSq - Rd * rep.meanConcordance * rep.meanConcordance) / (Rd - 1.0))) : 0.0;
  const double half = 1.959963984540054 * rep.sdConcordance / std::sqrt(Rd);
  rep.ciLow = rep.meanConcordance - half;
  rep.ciHigh = rep.meanConcordance + half;
  rep.agreement.playoff /= Rd;
  rep.agreement.homeCourt /= Rd;
  rep.agreement.lottery /= Rd;
  if (schedule != nullptr) {
    const StrengthOfSchedule sos = strengthOfSchedule(state, *schedule);
    rep.ssd = sos.ssd;
    rep.ssdUndefinedTeams = sos.undefinedTeams;
  }
  if (config.keepPerReplication) rep.perReplication = std::move(rows);
  return rep;
}

BacktestReport backtestScores(const LeagueState& state, const ScoreVector& shortScores, const Scenario& actual,
                              const AgreementCutoffs& cutoffs) {
  checkCutoffs(state, cutoffs);
  const ScoreVector full = winPercentages(state, Schedule::all(state.numGames()), actual, Horizon::Full);
  const ReplicationRow row = evaluate(state, shortScores, full, preSuspensionScores(state), cutoffs);
  BacktestReport rep;
  rep.concordance = row.concordance;
  rep.agreement = {row.playoff, row.homeCourt, row.lottery};
  return rep;
}

}  // namespace

double agreement(const LeagueState& state, const ScoreVector& shortScores, const ScoreVector& fullScores,
                 AgreementCategory category, const AgreementCutoffs& cutoffs) {
  if (shortScores.size() != state.numTeams() || fullScores.size() != state.numTeams()) {
    throw DimensionError("score vectors do not match the league size");
  }
  checkCutoffs(state, cutoffs);
  const ScoreVector tieBreak = preSuspensionScores(state);
  return agreementFromRanks(state, rankFromScores(shortScores, tieBreak), rankFromScores(fullScores, tieBreak), category,
                            cutoffs);
}

SimulationReport simulate(const LeagueState& state, const Schedule& schedule, const EvalConfig& config) {
  return run(state, &schedule, config, true);
}

SimulationReport simulateSerial(const LeagueState& state, const Schedule& schedule, const EvalConfig& config) {
  return run(state, &schedule, config, false);
}

SimulationReport simulateStatusQuo(const LeagueState& state, const EvalConfig& config) {
  return run(state, nullptr, config, true);
}

ScoreVector statusQuoScores(const LeagueState& state) {
  std::vector<std::int64_t> num;
  std::vector<std::int64_t> den;
  for (const Team& t : state.teams()) {
    if (t.preGames == 0) {
      throw DegenerateInstanceError("team " + std::to_string(t.id) + " (" + t.name + ") has played no games; status-quo score undefined");
    }
    num.push_back(t.preWins);
    den.push_back(t.preGames);
  }
  return ScoreVector::exact(std::move(num), std::move(den));
}

GreedyResult greedySchedule(const LeagueState& state, bool repair) {
  const int n = state.numTeams();
  const int G = state.numGames();
  GreedyResult out;
  out.schedule = Schedule::none(G);
  auto& sel = out.schedule.selected;
  std::vector<int> homeLeft(static_cast<std::size_t>(n));
  std::vector<int> awayLeft(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    homeLeft[static_cast<std::size_t>(i)] = state.team(i).homeTarget;
    awayLeft[static_cast<std::size_t>(i)] = state.team(i).awayTarget;
  }
  std::vector<int> order(static_cast<std::size_t>(G));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return state.game(a).scheduledDay < state.game(b).scheduledDay; });
  for (int g : order) {
    const Game& game = state.game(g);
    if (homeLeft[static_cast<std::size_t>(game.host)] > 0 && awayLeft[static_cast<std::size_t>(game.guest)] > 0) {
      sel[static_cast<std::size_t>(g)] = 1;
      --homeLeft[static_cast<std::size_t>(game.host)];
      --awayLeft[static_cast<std::size_t>(game.guest)];
    }
  }
  out.homeShortfall = homeLeft;
  out.awayShortfall = awayLeft;
  for (int i = 0; i < n; ++i) out.stranded = out.stranded || homeLeft[static_cast<std::size_t>(i)] > 0 || awayLeft[static_cast<std::size_t>(i)] > 0;

  if (repair && out.stranded) {
    // Breadth-first search from host slots with room: unselected games lead
    // from a host to a guest, selected games lead back from a guest to its
    // host. Reaching a guest with room gives a path whose flip adds one game.
    for (;;) {
      std::vector<int> hostVia(static_cast<std::size_t>(n), -2);   // game used to reach host side, -1 = source
      std::vector<int> guestVia(static_cast<std::size_t>(n), -2);  // game used to reach guest side
      std::deque<int> queue;
      for (int i = 0; i < n; ++i) {
        if (homeLeft[static_cast<std::size_t>(i)] > 0) {
          hostVia[static_cast<std::size_t>(i)] = -1;
          queue.push_back(i);
        }
      }
      int sink = -1;
      while (!queue.empty() && sink < 0) {
        const int h = queue.front();
        queue.pop_front();
        for (int g : state.homeGames(h)) {
          if (sel[static_cast<std::size_t>(g)]) continue;
          const int a = state.game(g).guest;
          if (guestVia[static_cast<std::size_t>(a)] != -2) continue;
          guestVia[static_cast<std::size_t>(a)] = g;
          if (awayLeft[static_cast<std::size_t>(a)] > 0) {
            sink = a;
            break;
          }
          for (int back : state.awayGames(a)) {
            if (!sel[static_cast<std::size_t>(back)]) continue;
            const int h2 = state.game(back).host;
            if (hostVia[static_cast<std::size_t>(h2)] != -2) continue;
            hostVia[static_cast<std::size_t>(h2)] = back;
            queue.push_back(h2);
          }
        }
      }
      if (sink < 0) break;
      int a = sink;
      --awayLeft[static_cast<std::size_t>(a)];
      for (;;) {
        const int g = guestVia[static_cast<std::size_t>(a)];
        sel[static_cast<std::size_t>(g)] = 1;
        const int h = state.game(g).host;
        const int back = hostVia[static_cast<std::size_t>(h)];
        if (back == -1) {
          --homeLeft[static_cast<std::size_t>(h)];
          break;
        }
        sel[static_cast<std::size_t>(back)] = 0;
        a = state.game(back).guest;
      }
      ++out.augmentations;
    }
  }
  out.feasible = isFeasible(state, out.schedule);
  return out;
}

BacktestReport backtest(const LeagueState& state, const Schedule& schedule, const Scenario& actual,
                        const AgreementCutoffs& cutoffs) {
  if (actual.size() != state.numGames()) throw DimensionError("actual outcomes do not cover every remaining game");
  return backtestScores(state, winPercentages(state, schedule, actual, Horizon::Short), actual, cutoffs);
}

BacktestReport backtestStatusQuo(const LeagueState& state, const Scenario& actual, const AgreementCutoffs& cutoffs) {
  if (actual.size() != state.numGames()) throw DimensionError("actual outcomes do not cover every remaining game");
  return backtestScores(state, statusQuoScores(state), actual, cutoffs);
}

VarianceSharpness varianceSharpnessDiagnostics(const LeagueState& state, const Schedule& schedule) {
  if (schedule.size() != state.numGames()) throw DimensionError("schedule length does not match game count");
  VarianceSharpness d;
  const auto p = state.probabilities();
  for (std::size_t g = 0; g < p.size(); ++g) {
    const double v = p[g] * (1.0 - p[g]);
    const double s = std::max(p[g], 1.0 - p[g]);
    if (schedule.selected[g]) {
      d.meanVarianceSelected += v;
      d.meanSharpnessSelected += s;
      ++d.selectedGames;
    } else {
      d.meanVarianceExcluded += v;
      d.meanSharpnessExcluded += s;
      ++d.excludedGames;
    }
  }
  if (d.selectedGames > 0) {
    d.meanVarianceSelected /= d.selectedGames;
    d.meanSharpnessSelected /= d.selectedGames;
  }
  if (d.excludedGames > 0) {
    d.meanVarianceExcluded /= d.excludedGames;
    d.meanSharpnessExcluded /= d.excludedGames;
  }
  const double m = state.shortSeasonLength();
  d.varianceCoefficient = 2.0 * (1.0 - 2.0 * m / state.fullSeasonLength()) * d.selectedGames / (m * m);
  return d;
}

}  // namespace shortseason
