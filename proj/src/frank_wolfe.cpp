#include "shortseason/frank_wolfe.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>

#include "shortseason/errors.hpp"
#include "shortseason/swaps.hpp"
#include "shortseason/transport.hpp"

namespace shortseason {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// argmin over [0, 1] of g*gamma + c*gamma^2.
double stepFromSlope(double slope, double curvature) {
  if (curvature > 0.0) return std::clamp(-slope / (2.0 * curvature), 0.0, 1.0);
  return slope < 0.0 ? 1.0 : 0.0;
}

double relativeGap(double ub, double lb) {
  const double abs = ub - lb;
  if (abs <= 0.0) return 0.0;
  return lb > 0.0 ? abs / lb : kInf;
}

using AtomSink = std::function<void(const Schedule&)>;

// Frank-Wolfe on f(x) + linear'x (linear may be empty). Starts from `start`
// when given, otherwise from the transportation vertex minimizing the
// variance term. Every atom is reported to `sink`.
FwResult runFw(const PwObjectiveModel& model, std::span<const double> linear, int maxIterations,
               const FwConfig& config, const std::vector<double>* start, const AtomSink& sink) {
  const LeagueState& state = model.state();
  const auto games = static_cast<std::size_t>(model.numGames());
  auto phi = [&](std::span<const double> x) {
    double v = model.evaluate(x);
    if (!linear.empty()) v += dot(linear, x);
    return v;
  };

  FwResult r;
  r.upperBound = kInf;
  r.lowerBound = -kInf;
  auto consider = [&](const Schedule& atom, std::span<const double> xa) {
    const double v = phi(xa);
    ++r.atomsHarvested;
    if (sink) sink(atom);
    if (v < r.upperBound) {
      r.upperBound = v;
      r.bestAtom = atom;
    }
    return v;
  };

  std::vector<double> x;
  if (start != nullptr) {
    x = *start;
  } else {
    std::vector<double> c(games);
    const auto& var = model.gameVariance();
    for (std::size_t g = 0; g < games; ++g) c[g] = model.alpha() * var[g] + (linear.empty() ? 0.0 : linear[g]);
    const Schedule atom0 = transportationSubproblem(state, c);
    x = atom0.asReal();
    consider(atom0, x);
  }
  double fx = phi(x);

  std::vector<double> grad(games);
  std::vector<double> dir(games);
  int t = 0;
  for (; t < maxIterations; ++t) {
    model.gradient(x, grad);
    if (!linear.empty()) {
      for (std::size_t g = 0; g < games; ++g) grad[g] += linear[g];
    }
    const Schedule atom = transportationSubproblem(state, grad);
    const auto xa = atom.asReal();
    const double fa = consider(atom, xa);

    double slope = 0.0;
    for (std::size_t g = 0; g < games; ++g) {
      dir[g] = xa[g] - x[g];
      slope += grad[g] * dir[g];
    }
    r.lowerBound = std::max(r.lowerBound, fx + slope);

    FwTraceEntry e;
    e.iteration = t;
    e.objective = fx;
    e.atomObjective = fa;
    e.lowerBound = r.lowerBound;
    e.upperBound = r.upperBound;

    // Step before testing the gap so the returned iterate never trails the best atom.
    const double gamma = stepFromSlope(slope, model.directionalCurvature(dir));
    e.gamma = gamma;
    r.trace.push_back(e);
    std::vector<double> next(games);
    for (std::size_t g = 0; g < games; ++g) next[g] = std::clamp(x[g] + gamma * dir[g], 0.0, 1.0);
    const double fNext = phi(next);
    const double decrease = fx - fNext;
    if (fNext <= fx) {
      x = std::move(next);
      fx = fNext;
    }
    if (relativeGap(r.upperBound, r.lowerBound) <= config.relGapTol || decrease < config.stallTol) {
      ++t;
      break;
    }
  }
  r.iterations = t;
  r.fractional = Schedule::fromReal(x);
  r.absGap = r.upperBound - r.lowerBound;
  r.relGap = relativeGap(r.upperBound, r.lowerBound);
  return r;
}

// Integral local search for the SoS-constrained problem. First drives the
// total constraint excess to zero, then lowers the objective among moves
// that stay feasible. Per-team sums make each move O(1).
class SosPolisher {
 public:
  SosPolisher(const PwObjectiveModel& model, const OwCoefficients& coef, const std::vector<double>& owFull,
              const std::vector<bool>& constrained, double eps)
      : model_(model), p_(model.state().probabilities()), coef_(coef), owFull_(owFull), constrained_(constrained),
        eps_(eps) {}

  Schedule run(Schedule x, int maxMoves) const {
    const LeagueState& state = model_.state();
    const auto xr = x.asReal();
    std::vector<double> mu;
    std::vector<double> v;
    model_.moments(xr, mu, v);
    std::vector<double> ow(mu.size(), 0.0);
    for (const Game& g : state.games()) {
      const auto gi = static_cast<std::size_t>(g.id);
      if (!x.selected[gi]) continue;
      ow[static_cast<std::size_t>(g.host)] += coef_.host[gi];
      ow[static_cast<std::size_t>(g.guest)] += coef_.guest[gi];
    }
    double excess = 0.0;
    for (std::size_t i = 0; i < mu.size(); ++i) excess += teamExcess(i, ow[i]);

    for (int moves = 0; moves < maxMoves; ++moves) {
      bool accepted = false;
      for (const SwapMove& mv : feasibleSwaps(state, x)) {
        const Delta d = delta(mv, mu, v, ow);
        const bool take = excess > kFeasibleExcess ? d.excess < -1e-12
                                                   : excess + d.excess <= kFeasibleExcess && d.objective < -1e-13;
        if (!take) continue;
        commit(mv, mu, v, ow);
        applySwap(x, mv);
        excess = 0.0;
        for (std::size_t i = 0; i < mu.size(); ++i) excess += teamExcess(i, ow[i]);
        accepted = true;
        break;
      }
      if (!accepted) break;
    }
    return x;
  }

  static constexpr double kFeasibleExcess = 1e-9;

 private:
  struct Delta {
    double objective = 0.0;
    double excess = 0.0;
  };

  double teamExcess(std::size_t i, double ow) const {
    return constrained_[i] ? std::max(ow / owFull_[i] - 1.0 - eps_, 0.0) : 0.0;
  }
  double teamTerm(std::size_t i, double mu, double v) const {
    const double d = mu - model_.muHat()[i];
    return d * d + model_.alpha() * v;
  }

  // Signed game toggles of a move: +1 for games added, -1 for games dropped.
  static int toggles(const SwapMove& mv, int (&id)[4], int (&sign)[4]) {
    int k = 0;
    id[k] = mv.out1, sign[k++] = -1;
    id[k] = mv.in1, sign[k++] = 1;
    if (mv.out2 >= 0) {
      id[k] = mv.out2, sign[k++] = -1;
      id[k] = mv.in2, sign[k++] = 1;
    }
    return k;
  }

  template <class Fn>
  void forEachTouch(const SwapMove& mv, Fn&& fn) const {
    int id[4];
    int sign[4];
    const int k = toggles(mv, id, sign);
    const double m = model_.state().shortSeasonLength();
    for (int j = 0; j < k; ++j) {
      const Game& g = model_.state().game(id[j]);
      const auto gi = static_cast<std::size_t>(g.id);
      const double s = sign[j];
      const double p = p_[gi];
      const double var = model_.gameVariance()[gi];
      fn(static_cast<std::size_t>(g.host), s * p / m, s * var / (m * m), s * coef_.host[gi]);
      fn(static_cast<std::size_t>(g.guest), s * (1.0 - p) / m, s * var / (m * m), s * coef_.guest[gi]);
    }
  }

  Delta delta(const SwapMove& mv, const std::vector<double>& mu, const std::vector<double>& v,
              const std::vector<double>& ow) const {
    std::size_t team[8];
    double dMu[8];
    double dV[8];
    double dOw[8];
    int used = 0;
    forEachTouch(mv, [&](std::size_t t, double a, double b, double c) {
      int j = 0;
      while (j < used && team[j] != t) ++j;
      if (j == used) {
        team[j] = t;
        dMu[j] = dV[j] = dOw[j] = 0.0;
        ++used;
      }
      dMu[j] += a;
      dV[j] += b;
      dOw[j] += c;
    });
    Delta d;
    for (int j = 0; j < used; ++j) {
      const std::size_t t = team[j];
      d.objective += teamTerm(t, mu[t] + dMu[j], v[t] + dV[j]) - teamTerm(t, mu[t], v[t]);
      d.excess += teamExcess(t, ow[t] + dOw[j]) - teamExcess(t, ow[t]);
    }
    return d;
  }

  void commit(const SwapMove& mv, std::vector<double>& mu, std::vector<double>& v, std::vector<double>& ow) const {
    forEachTouch(mv, [&](std::size_t t, double a, double b, double c) {
      mu[t] += a;
      v[t] += b;
      ow[t] += c;
    });
  }

  const PwObjectiveModel& model_;
  std::vector<double> p_;
  const OwCoefficients& coef_;
  const std::vector<double>& owFull_;
  const std::vector<bool>& constrained_;
  double eps_;
};

}  // namespace

double lineSearch(const PwObjectiveModel& model, std::span<const double> x, std::span<const double> atom) {
  if (x.size() != atom.size() || static_cast<int>(x.size()) != model.numGames()) {
    throw DimensionError("line search vectors have the wrong length");
  }
  const auto grad = model.gradient(x);
  std::vector<double> dir(x.size());
  double slope = 0.0;
  for (std::size_t g = 0; g < x.size(); ++g) {
    dir[g] = atom[g] - x[g];
    slope += grad[g] * dir[g];
  }
  return stepFromSlope(slope, model.directionalCurvature(dir));
}

FwResult solve(const PwObjectiveModel& model, const FwConfig& config) {
  if (config.maxIterations < 1) throw ConfigError("maxIterations must be positive");
  return runFw(model, {}, config.maxIterations, config, nullptr, {});
}

FwResult solveSoS(const PwObjectiveModel& model, const FwConfig& config, std::span<const double> pct) {
  if (!config.sosEpsilon) throw ConfigError("solveSoS needs sosEpsilon");
  if (config.maxIterations < 1 || config.sosMaxDualIters < 1 || config.sosInnerIterations < 1) {
    throw ConfigError("iteration limits must be positive");
  }
  if (config.sosPolishMoves < 0 || config.sosPolishStarts < 0) throw ConfigError("polish limits must be non-negative");
  const double eps = *config.sosEpsilon;
  if (std::isnan(eps) || eps < 0.0) throw ConfigError("sosEpsilon must be non-negative");
  const LeagueState& state = model.state();
  const int n = state.numTeams();
  const auto games = static_cast<std::size_t>(state.numGames());
  if (static_cast<int>(pct.size()) != n) throw DimensionError("win-percentage vector has the wrong length");

  const OwCoefficients coef = owCoefficients(state, pct);
  std::vector<double> owFull(static_cast<std::size_t>(n), 0.0);
  for (const Game& g : state.games()) {
    owFull[static_cast<std::size_t>(g.host)] += pct[static_cast<std::size_t>(g.guest)];
    owFull[static_cast<std::size_t>(g.guest)] += pct[static_cast<std::size_t>(g.host)];
  }
  std::vector<bool> constrained(static_cast<std::size_t>(n), false);
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    const Team& t = state.team(i);
    if (t.homeTarget + t.awayTarget == 0) continue;
    owFull[ii] /= state.fullSeasonLength() - t.preGames;
    if (owFull[ii] <= 0.0) {
      throw DegenerateInstanceError("team " + std::to_string(i) + " (" + t.name +
                                    ") has zero full-remainder opponent win percentage; relative SoS is undefined");
    }
    constrained[ii] = true;
  }

  // Constraint values h_i(x) = OW_i(x) / OW_full_i - 1 - eps.
  auto constraints = [&](std::span<const double> x) {
    std::vector<double> ow(static_cast<std::size_t>(n), 0.0);
    for (const Game& g : state.games()) {
      const auto gi = static_cast<std::size_t>(g.id);
      ow[static_cast<std::size_t>(g.host)] += coef.host[gi] * x[gi];
      ow[static_cast<std::size_t>(g.guest)] += coef.guest[gi] * x[gi];
    }
    std::vector<double> h(static_cast<std::size_t>(n), -kInf);
    for (std::size_t i = 0; i < h.size(); ++i) {
      if (constrained[i]) h[i] = ow[i] / owFull[i] - 1.0 - eps;
    }
    return h;
  };
  auto violation = [&](std::span<const double> x) {
    double v = 0.0;
    for (double hi : constraints(x)) v = std::max(v, hi);
    return v;
  };

  constexpr double kFeasTol = 1e-9;
  Schedule bestFeasible;
  double bestFeasibleF = kInf;
  Schedule leastViolating;
  double leastViolation = kInf;
  double leastViolatingF = kInf;
  // Distinct infeasible atoms, kept as repair starting points.
  std::map<std::vector<std::uint8_t>, std::pair<double, double>> infeasibleAtoms;
  const AtomSink sink = [&](const Schedule& atom) {
    const auto xa = atom.asReal();
    const double v = violation(xa);
    const double f = model.evaluate(xa);
    if (v > kFeasTol) infeasibleAtoms.emplace(atom.selected, std::make_pair(v, f));
    if (v <= kFeasTol) {
      if (f < bestFeasibleF) {
        bestFeasibleF = f;
        bestFeasible = atom;
      }
    } else if (v < leastViolation || (v == leastViolation && f < leastViolatingF)) {
      leastViolation = v;
      leastViolatingF = f;
      leastViolating = atom;
    }
  };

  std::vector<double> lambda(static_cast<std::size_t>(n), 0.0);
  std::vector<double> linear(games, 0.0);
  FwResult first;
  std::vector<double> x;
  int totalIterations = 0;
  int totalAtoms = 0;
  std::vector<FwTraceEntry> trace;
  for (int k = 1; k <= config.sosMaxDualIters; ++k) {
    bool anyMultiplier = false;
    for (const Game& g : state.games()) {
      const auto gi = static_cast<std::size_t>(g.id);
      const auto h = static_cast<std::size_t>(g.host);
      const auto a = static_cast<std::size_t>(g.guest);
      linear[gi] = (constrained[h] ? lambda[h] * coef.host[gi] / owFull[h] : 0.0) +
                   (constrained[a] ? lambda[a] * coef.guest[gi] / owFull[a] : 0.0);
    }
    for (double l : lambda) anyMultiplier = anyMultiplier || l > 0.0;
    FwResult round = k == 1 ? runFw(model, {}, config.maxIterations, config, nullptr, sink)
                            : runFw(model, anyMultiplier ? std::span<const double>(linear) : std::span<const double>(),
                                    config.sosInnerIterations, config, &x, sink);
    if (k == 1) first = round;
    totalIterations += round.iterations;
    totalAtoms += round.atomsHarvested;
    for (auto e : round.trace) {
      e.iteration = static_cast<int>(trace.size());
      trace.push_back(e);
    }
    x = round.fractional.asReal();
    const auto h = constraints(x);
    double worst = 0.0;
    for (double hi : h) worst = std::max(worst, hi);
    if (worst <= 1e-6 && bestFeasibleF < kInf) break;
    const double eta = config.sosStep / std::sqrt(static_cast<double>(k));
    for (std::size_t i = 0; i < lambda.size(); ++i) {
      if (constrained[i]) lambda[i] = std::max(0.0, lambda[i] + eta * h[i]);
    }
  }

  // The relaxation can leave every harvested atom infeasible or far from the
  // constrained optimum; repair and refine the best candidate by swaps.
  if (config.sosPolishMoves > 0 && violation(first.bestAtom.asReal()) > kFeasTol) {
    const SosPolisher polisher(model, coef, owFull, constrained, eps);
    std::vector<std::pair<std::pair<double, double>, const std::vector<std::uint8_t>*>> starts;
    for (const auto& [sel, key] : infeasibleAtoms) starts.push_back({key, &sel});
    std::sort(starts.begin(), starts.end());
    if (starts.size() > static_cast<std::size_t>(config.sosPolishStarts)) starts.resize(static_cast<std::size_t>(config.sosPolishStarts));
    std::vector<Schedule> seeds;
    if (bestFeasibleF < kInf) seeds.push_back(bestFeasible);
    for (const auto& st : starts) {
      Schedule sch;
      sch.selected = *st.second;
      seeds.push_back(std::move(sch));
    }
    for (const Schedule& seed : seeds) sink(polisher.run(seed, config.sosPolishMoves));
  }

  FwResult r = first;
  r.iterations = totalIterations;
  r.atomsHarvested = totalAtoms;
  r.trace = std::move(trace);
  r.fractional = Schedule::fromReal(x);
  if (bestFeasibleF < kInf) {
    r.bestAtom = bestFeasible;
    r.upperBound = bestFeasibleF;
    r.sosViolation = 0.0;
  } else {
    r.bestAtom = leastViolating;
    r.upperBound = leastViolatingF;
    r.sosViolation = leastViolation;
  }
  // The unconstrained relaxation bound stays valid for the constrained problem.
  r.lowerBound = first.lowerBound;
  r.absGap = r.upperBound - r.lowerBound;
  r.relGap = relativeGap(r.upperBound, r.lowerBound);
  return r;
}

}  // namespace shortseason
