#include "shortseason/concordance.hpp"

#include <algorithm>
#include <cmath>
#include <functional>

#include "shortseason/errors.hpp"
#include "shortseason/exhaustive.hpp"
#include "shortseason/random.hpp"
#include "shortseason/swaps.hpp"
#include "shortseason/transport.hpp"

namespace shortseason {

namespace {

// Mean-value win totals are sums of probabilities; differences below this
// are treated as ties.
constexpr double kMeanValueTie = 1e-9;

std::vector<std::uint8_t> orderBits(const Ranking& r) {
  const int n = r.size();
  std::vector<std::uint8_t> z(static_cast<std::size_t>(n * n), 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      z[static_cast<std::size_t>(i * n + j)] = r.rank[static_cast<std::size_t>(i)] < r.rank[static_cast<std::size_t>(j)];
    }
  }
  return z;
}

PcInstance makeInstance(const LeagueState& state, bool meanValue, std::vector<std::vector<double>> outcomes) {
  PcInstance inst;
  inst.state = state;
  inst.meanValue = meanValue;
  inst.outcomes = std::move(outcomes);
  const int n = state.numTeams();
  for (const auto& w : inst.outcomes) {
    if (static_cast<int>(w.size()) != state.numGames()) throw DimensionError("scenario length does not match game count");
    std::vector<double> full(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) full[static_cast<std::size_t>(i)] = state.team(i).preWins;
    for (const Game& g : state.games()) {
      const double v = w[static_cast<std::size_t>(g.id)];
      full[static_cast<std::size_t>(g.host)] += v;
      full[static_cast<std::size_t>(g.guest)] += 1.0 - v;
    }
    ScoreVector scores;
    if (meanValue) {
      for (double& f : full) f /= state.fullSeasonLength();
      scores = ScoreVector::real(std::move(full));
    } else {
      std::vector<std::int64_t> num(full.begin(), full.end());
      scores = ScoreVector::exact(std::move(num), state.fullSeasonLength());
    }
    inst.zHat.push_back(orderBits(rankFromScores(state, scores)));
    inst.fullScores.push_back(std::move(scores));
  }
  return inst;
}

// Sum of the k smallest (largest when `largest`) values.
double extremeSum(std::vector<double> v, int k, bool largest) {
  if (k <= 0) return 0.0;
  if (largest) {
    std::nth_element(v.begin(), v.begin() + (k - 1), v.end(), std::greater<>());
  } else {
    std::nth_element(v.begin(), v.begin() + (k - 1), v.end());
  }
  double s = 0.0;
  for (int t = 0; t < k; ++t) s += v[static_cast<std::size_t>(t)];
  return s;
}

}  // namespace

PcInstance makeMeanValueInstance(const LeagueState& state) {
  return makeInstance(state, true, {state.probabilities()});
}

PcInstance makeSampledInstance(const LeagueState& state, const std::vector<Scenario>& scenarios) {
  if (scenarios.empty()) throw ConfigError("sample average approximation needs at least one scenario");
  std::vector<std::vector<double>> outcomes;
  outcomes.reserve(scenarios.size());
  for (const Scenario& s : scenarios) outcomes.emplace_back(s.hostWon.begin(), s.hostWon.end());
  return makeInstance(state, false, std::move(outcomes));
}

std::vector<Scenario> sampleScenarios(const LeagueState& state, int count, std::uint64_t seed) {
  if (count < 1) throw ConfigError("scenario count must be positive");
  const auto p = state.probabilities();
  std::vector<Scenario> out(static_cast<std::size_t>(count));
  for (int s = 0; s < count; ++s) {
    auto engine = streamEngine(seed, static_cast<std::uint64_t>(s));
    auto& won = out[static_cast<std::size_t>(s)].hostWon;
    won.resize(p.size());
    for (std::size_t g = 0; g < p.size(); ++g) won[g] = bernoulli(engine, p[g]);
  }
  return out;
}

std::vector<double> shortWins(const PcInstance& instance, int scenario, const Schedule& x) {
  const LeagueState& state = instance.state;
  const auto& w = instance.outcomes.at(static_cast<std::size_t>(scenario));
  std::vector<double> wins(static_cast<std::size_t>(state.numTeams()));
  for (int i = 0; i < state.numTeams(); ++i) wins[static_cast<std::size_t>(i)] = state.team(i).preWins;
  for (const Game& g : state.games()) {
    if (!x.selected[static_cast<std::size_t>(g.id)]) continue;
    const double v = w[static_cast<std::size_t>(g.id)];
    wins[static_cast<std::size_t>(g.host)] += v;
    wins[static_cast<std::size_t>(g.guest)] += 1.0 - v;
  }
  return wins;
}

bool pairCredited(double a, double b, bool iAbove, bool meanValue) {
  const double d = a - b;
  if (meanValue ? std::abs(d) <= kMeanValueTie : d == 0.0) return true;
  return (d > 0.0) == iAbove;
}

namespace {

std::int64_t scenarioCount(const PcInstance& instance, int s, const Schedule& x) {
  const int n = instance.state.numTeams();
  const auto wins = shortWins(instance, s, x);
  const auto& z = instance.zHat[static_cast<std::size_t>(s)];
  std::int64_t c = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      c += pairCredited(wins[static_cast<std::size_t>(i)], wins[static_cast<std::size_t>(j)],
                        z[static_cast<std::size_t>(i * n + j)] != 0, instance.meanValue);
    }
  }
  return c;
}

}  // namespace

std::vector<std::int64_t> pcScenarioCounts(const PcInstance& instance, const Schedule& x) {
  requireFeasible(instance.state, x);
  const int S = instance.numScenarios();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(S), 0);
#pragma omp parallel for schedule(static)
  for (int s = 0; s < S; ++s) counts[static_cast<std::size_t>(s)] = scenarioCount(instance, s, x);
  return counts;
}

std::vector<std::int64_t> pcScenarioCountsSerial(const PcInstance& instance, const Schedule& x) {
  requireFeasible(instance.state, x);
  const int S = instance.numScenarios();
  std::vector<std::int64_t> counts(static_cast<std::size_t>(S), 0);
  for (int s = 0; s < S; ++s) counts[static_cast<std::size_t>(s)] = scenarioCount(instance, s, x);
  return counts;
}

double pcObjective(const PcInstance& instance, const Schedule& x) {
  const auto counts = pcScenarioCounts(instance, x);
  std::int64_t total = 0;
  for (auto c : counts) total += c;
  return static_cast<double>(total) / static_cast<double>(counts.size());
}

WinBounds winBounds(const PcInstance& instance, int scenario) {
  const LeagueState& state = instance.state;
  const auto& w = instance.outcomes.at(static_cast<std::size_t>(scenario));
  WinBounds b;
  for (int i = 0; i < state.numTeams(); ++i) {
    const Team& t = state.team(i);
    std::vector<double> home;
    std::vector<double> away;
    for (int g : state.homeGames(i)) home.push_back(w[static_cast<std::size_t>(g)]);
    for (int g : state.awayGames(i)) away.push_back(w[static_cast<std::size_t>(g)]);
    // Away games are won when the host loses: best case picks the smallest
    // host-win values.
    b.upper.push_back(t.preWins + extremeSum(home, t.homeTarget, true) + t.awayTarget -
                      extremeSum(away, t.awayTarget, false));
    b.lower.push_back(t.preWins + extremeSum(home, t.homeTarget, false) + t.awayTarget -
                      extremeSum(away, t.awayTarget, true));
  }
  return b;
}

FixingReport variableFixing(const PcInstance& instance, int scenario) {
  const int n = instance.state.numTeams();
  const WinBounds b = winBounds(instance, scenario);
  // Mean-value bounds carry rounding noise; require a clear separation.
  const double margin = instance.meanValue ? kMeanValueTie : 0.0;
  FixingReport r;
  std::int64_t total = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      ++total;
      const auto ii = static_cast<std::size_t>(i);
      const auto jj = static_cast<std::size_t>(j);
      if (b.lower[ii] - b.upper[jj] > margin) {
        r.fixedOne.emplace_back(scenario, i, j);
      } else if (b.lower[jj] - b.upper[ii] > margin) {
        r.fixedZero.emplace_back(scenario, i, j);
      } else {
        ++r.freePairs;
      }
    }
  }
  const auto fixed = static_cast<double>(r.fixedOne.size() + r.fixedZero.size());
  r.eliminationPct = total > 0 ? 100.0 * fixed / static_cast<double>(total) : 0.0;
  return r;
}

FixingReport variableFixing(const PcInstance& instance) {
  FixingReport all;
  std::int64_t total = 0;
  for (int s = 0; s < instance.numScenarios(); ++s) {
    FixingReport r = variableFixing(instance, s);
    all.fixedOne.insert(all.fixedOne.end(), r.fixedOne.begin(), r.fixedOne.end());
    all.fixedZero.insert(all.fixedZero.end(), r.fixedZero.begin(), r.fixedZero.end());
    all.freePairs += r.freePairs;
    total += r.freePairs + static_cast<std::int64_t>(r.fixedOne.size() + r.fixedZero.size());
  }
  const auto fixed = static_cast<double>(all.fixedOne.size() + all.fixedZero.size());
  all.eliminationPct = total > 0 ? 100.0 * fixed / static_cast<double>(total) : 0.0;
  return all;
}

namespace {

// Incremental credited-pair counts for the local search. Pairs fixed by the
// bounds keep their credit under every feasible schedule and are skipped.
class PcEvaluator {
 public:
  PcEvaluator(const PcInstance& inst, bool useFixing) : inst_(inst), n_(inst.state.numTeams()) {
    const int S = inst.numScenarios();
    skip_.assign(static_cast<std::size_t>(S), std::vector<std::uint8_t>(static_cast<std::size_t>(n_ * n_), 0));
    if (useFixing) {
      const FixingReport r = variableFixing(inst);
      for (const auto& list : {r.fixedOne, r.fixedZero}) {
        for (const auto& [s, i, j] : list) {
          skip_[static_cast<std::size_t>(s)][static_cast<std::size_t>(i * n_ + j)] = 1;
          skip_[static_cast<std::size_t>(s)][static_cast<std::size_t>(j * n_ + i)] = 1;
        }
      }
    }
  }

  void reset(const Schedule& x) {
    wins_.clear();
    for (int s = 0; s < inst_.numScenarios(); ++s) wins_.push_back(shortWins(inst_, s, x));
  }

  // Change in total credited pairs (summed over scenarios) from the move.
  std::int64_t delta(const SwapMove& mv) const {
    std::int64_t d = 0;
    const int S = inst_.numScenarios();
#pragma omp parallel for schedule(static) reduction(+ : d) if (S > 8)
    for (int s = 0; s < S; ++s) d += scenarioDelta(s, mv);
    return d;
  }

  void apply(const SwapMove& mv) {
    for (int s = 0; s < inst_.numScenarios(); ++s) {
      Touch t = touched(s, mv);
      for (int k = 0; k < t.count; ++k) wins_[static_cast<std::size_t>(s)][static_cast<std::size_t>(t.team[k])] += t.change[k];
    }
  }

 private:
  struct Touch {
    int team[8];
    double change[8];
    int count = 0;
  };

  Touch touched(int s, const SwapMove& mv) const {
    const auto& w = inst_.outcomes[static_cast<std::size_t>(s)];
    Touch t;
    auto add = [&](int team, double c) {
      for (int k = 0; k < t.count; ++k) {
        if (t.team[k] == team) {
          t.change[k] += c;
          return;
        }
      }
      t.team[t.count] = team;
      t.change[t.count++] = c;
    };
    auto toggle = [&](int g, double sign) {
      const Game& game = inst_.state.game(g);
      const double v = w[static_cast<std::size_t>(g)];
      add(game.host, sign * v);
      add(game.guest, sign * (1.0 - v));
    };
    toggle(mv.out1, -1.0);
    toggle(mv.in1, 1.0);
    if (mv.out2 >= 0) {
      toggle(mv.out2, -1.0);
      toggle(mv.in2, 1.0);
    }
    return t;
  }

  int credit(int s, int a, int b, double wa, double wb) const {
    const auto& z = inst_.zHat[static_cast<std::size_t>(s)];
    const int i = std::min(a, b);
    const int j = std::max(a, b);
    const bool above = z[static_cast<std::size_t>(i * n_ + j)] != 0;
    return a < b ? pairCredited(wa, wb, above, inst_.meanValue) : pairCredited(wb, wa, above, inst_.meanValue);
  }

  std::int64_t scenarioDelta(int s, const SwapMove& mv) const {
    const Touch t = touched(s, mv);
    const auto& wins = wins_[static_cast<std::size_t>(s)];
    const auto& skip = skip_[static_cast<std::size_t>(s)];
    auto changeOf = [&](int team) {
      for (int k = 0; k < t.count; ++k) {
        if (t.team[k] == team) return t.change[k];
      }
      return 0.0;
    };
    std::int64_t d = 0;
    for (int k = 0; k < t.count; ++k) {
      const int a = t.team[k];
      if (t.change[k] == 0.0) continue;
      const double oldA = wins[static_cast<std::size_t>(a)];
      const double newA = oldA + t.change[k];
      for (int b = 0; b < n_; ++b) {
        if (b == a || skip[static_cast<std::size_t>(a * n_ + b)]) continue;
        const double cb = changeOf(b);
        // Pairs of two touched teams are counted once, from the smaller index.
        if (cb != 0.0 && b < a) continue;
        const double oldB = wins[static_cast<std::size_t>(b)];
        d += credit(s, a, b, newA, oldB + cb) - credit(s, a, b, oldA, oldB);
      }
    }
    return d;
  }

  const PcInstance& inst_;
  int n_;
  std::vector<std::vector<std::uint8_t>> skip_;
  std::vector<std::vector<double>> wins_;
};

}  // namespace

LocalSearchResult localSearch(const PcInstance& instance, const Schedule& start, const LocalSearchConfig& config) {
  requireFeasible(instance.state, start);
  if (config.budget < 0) throw ConfigError("local search budget must be non-negative");
  const LeagueState& state = instance.state;
  const int S = instance.numScenarios();
  auto counts = pcScenarioCounts(instance, start);
  std::int64_t current = 0;
  for (auto c : counts) current += c;

  LocalSearchResult out;
  out.best = start;
  std::int64_t bestTotal = current;
  PcEvaluator eval(instance, config.useFixing);
  Schedule x = start;
  eval.reset(x);
  out.climbs.push_back({static_cast<double>(current) / S});
  auto engine = streamEngine(config.seed, 0);

  while (out.evaluations < config.budget) {
    auto moves = feasibleSwaps(state, x);
    portableShuffle(moves.begin(), moves.end(), engine);
    bool improved = false;
    for (const SwapMove& mv : moves) {
      if (out.evaluations >= config.budget) break;
      ++out.evaluations;
      const std::int64_t d = eval.delta(mv);
      if (d <= 0) continue;
      eval.apply(mv);
      applySwap(x, mv);
      current += d;
      out.climbs.back().push_back(static_cast<double>(current) / S);
      if (current > bestTotal) {
        bestTotal = current;
        out.best = x;
      }
      improved = true;
      break;
    }
    if (improved || out.evaluations >= config.budget) continue;
    // Local optimum: restart from a random vertex of the schedule polytope.
    // The restart itself is charged so that move-free leagues terminate.
    ++out.evaluations;
    std::vector<double> cost(static_cast<std::size_t>(state.numGames()));
    for (double& c : cost) c = uniform01(engine);
    x = transportationSubproblem(state, cost);
    eval.reset(x);
    counts = pcScenarioCounts(instance, x);
    current = 0;
    for (auto c : counts) current += c;
    if (current > bestTotal) {
      bestTotal = current;
      out.best = x;
    }
    out.climbs.push_back({static_cast<double>(current) / S});
    ++out.restarts;
  }
  out.objective = static_cast<double>(bestTotal) / S;
  return out;
}

PcOptimum exhaustivePc(const PcInstance& instance) {
  PcOptimum best;
  best.objective = -1.0;
  forEachFeasibleSchedule(instance.state, [&](const Schedule& x) {
    const double v = pcObjective(instance, x);
    if (v > best.objective) {
      best.objective = v;
      best.best = x;
    }
  });
  return best;
}

}  // namespace shortseason
