#include "shortseason/mmr.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "shortseason/errors.hpp"
#include "shortseason/transport.hpp"

namespace shortseason {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double relativeGap(double ub, double lb) {
  const double abs = ub - lb;
  if (abs <= 0.0) return 0.0;
  return lb > 0.0 ? abs / lb : kInf;
}

// Golden-section minimization of a unimodal function on [0, 1]; the
// endpoints are compared as well since the minimum often sits on one.
template <class Fn>
double goldenSection(Fn&& phi, double tol) {
  const double invPhi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = 0.0;
  double b = 1.0;
  double c = b - invPhi * (b - a);
  double d = a + invPhi * (b - a);
  double fc = phi(c);
  double fd = phi(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invPhi * (b - a);
      fc = phi(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invPhi * (b - a);
      fd = phi(d);
    }
  }
  double best = 0.5 * (a + b);
  double fBest = phi(best);
  for (double g : {0.0, 1.0}) {
    const double fg = phi(g);
    if (fg < fBest) {
      fBest = fg;
      best = g;
    }
  }
  return best;
}

}  // namespace

std::size_t CandidateSet::indexOf(const std::string& label) const {
  for (std::size_t l = 0; l < candidates.size(); ++l) {
    if (candidates[l].label == label) return l;
  }
  throw KeyError("unknown candidate '" + label + "'");
}

CandidateSet buildCandidateSet(const LeagueState& state, std::vector<Candidate> candidates, const FwConfig& fw) {
  CandidateSet set;
  std::set<std::string> labels;
  for (const Candidate& c : candidates) {
    if (!labels.insert(c.label).second) throw ConfigError("duplicate candidate label '" + c.label + "'");
    const LeagueState s = state.withProbabilities(c.probs);
    set.models.push_back(PwObjectiveModel::build(s));
    const FwResult r = solve(set.models.back(), fw);
    set.thetas.push_back(r.lowerBound);
    set.ownAtoms.push_back(r.bestAtom);
  }
  set.candidates = std::move(candidates);
  return set;
}

double regret(const CandidateSet& set, const std::string& label, std::span<const double> x) {
  const std::size_t l = set.indexOf(label);
  return set.models[l].evaluate(x) - set.thetas[l];
}

double regret(const CandidateSet& set, const std::string& label, const Schedule& x) {
  const auto xr = x.asReal();
  return regret(set, label, std::span<const double>(xr));
}

std::vector<double> regrets(const CandidateSet& set, std::span<const double> x) {
  std::vector<double> r(set.size());
  for (std::size_t l = 0; l < r.size(); ++l) r[l] = set.models[l].evaluate(x) - set.thetas[l];
  return r;
}

double smoothMax(std::span<const double> r, double tau) {
  if (r.empty()) throw ConfigError("smooth max of an empty set");
  if (!(tau > 0.0)) throw ConfigError("temperature must be positive");
  const double top = *std::max_element(r.begin(), r.end());
  double s = 0.0;
  for (double v : r) s += std::exp((v - top) / tau);
  return top + tau * std::log(s);
}

std::vector<double> softmaxWeights(std::span<const double> r, double tau) {
  if (r.empty()) throw ConfigError("softmax of an empty set");
  if (!(tau > 0.0)) throw ConfigError("temperature must be positive");
  const double top = *std::max_element(r.begin(), r.end());
  std::vector<double> w(r.size());
  double s = 0.0;
  for (std::size_t l = 0; l < r.size(); ++l) s += (w[l] = std::exp((r[l] - top) / tau));
  for (double& v : w) v /= s;
  return w;
}

MmrResult solveMmr(const CandidateSet& set, const LeagueState& state, const MmrConfig& config) {
  if (set.size() == 0) throw ConfigError("min-max regret needs at least one candidate");
  if (config.temperatures.empty() || config.iterationsPerTemperature < 1) {
    throw ConfigError("min-max regret needs temperatures and a positive iteration limit");
  }
  for (double tau : config.temperatures) {
    if (!(tau > 0.0)) throw ConfigError("temperatures must be positive");
  }
  const auto games = static_cast<std::size_t>(state.numGames());
  for (const auto& m : set.models) {
    if (static_cast<std::size_t>(m.numGames()) != games) throw DimensionError("candidate has the wrong number of games");
  }
  const std::size_t L = set.size();
  const double logL = std::log(static_cast<double>(L));

  MmrResult out;
  double bestMax = kInf;
  std::set<std::vector<std::uint8_t>> seen;
  auto harvest = [&](const Schedule& atom) {
    const auto xa = atom.asReal();
    const auto r = regrets(set, xa);
    const double mx = *std::max_element(r.begin(), r.end());
    ++out.fw.atomsHarvested;
    if (seen.insert(atom.selected).second) out.harvestedMaxRegrets.push_back(mx);
    if (mx < bestMax) {
      bestMax = mx;
      out.fw.bestAtom = atom;
      out.perCandidateRegrets = r;
    }
  };

  // Each candidate's own optimum is a natural starting vertex.
  for (const Schedule& atom : set.ownAtoms) harvest(atom);
  std::vector<double> x = out.fw.bestAtom.asReal();
  if (x.empty()) {
    const Schedule atom0 = transportationSubproblem(state, std::vector<double>(games, 0.0));
    harvest(atom0);
    x = atom0.asReal();
  }

  double lowerBound = 0.0;  // every regret is non-negative on the polytope
  std::vector<std::vector<double>> grads(L, std::vector<double>(games));
  std::vector<double> grad(games);
  std::vector<double> dir(games);
  std::vector<double> slope(L);
  std::vector<double> curv(L);
  int iterations = 0;
  for (double tau : config.temperatures) {
    double boundF = -kInf;
    auto r = regrets(set, x);
    double fx = smoothMax(r, tau);
    for (int t = 0; t < config.iterationsPerTemperature; ++t) {
      ++iterations;
      const auto w = softmaxWeights(r, tau);
#pragma omp parallel for schedule(static) if (L > 1)
      for (std::size_t l = 0; l < L; ++l) set.models[l].gradient(x, grads[l]);
      std::fill(grad.begin(), grad.end(), 0.0);
      for (std::size_t l = 0; l < L; ++l) {
        for (std::size_t g = 0; g < games; ++g) grad[g] += w[l] * grads[l][g];
      }
      const Schedule atom = transportationSubproblem(state, grad);
      harvest(atom);
      const auto xa = atom.asReal();
      double lin = 0.0;
      for (std::size_t g = 0; g < games; ++g) {
        dir[g] = xa[g] - x[g];
        lin += grad[g] * dir[g];
      }
      boundF = std::max(boundF, fx + lin);
      lowerBound = std::max(lowerBound, boundF - tau * logL);

      // Each f_l is quadratic along the segment, so F_tau(gamma) needs only
      // the per-candidate slope and curvature.
      for (std::size_t l = 0; l < L; ++l) {
        double s = 0.0;
        for (std::size_t g = 0; g < games; ++g) s += grads[l][g] * dir[g];
        slope[l] = s;
        curv[l] = set.models[l].directionalCurvature(dir);
      }
      std::vector<double> rg(L);
      auto phi = [&](double gamma) {
        for (std::size_t l = 0; l < L; ++l) rg[l] = r[l] + gamma * slope[l] + gamma * gamma * curv[l];
        return smoothMax(rg, tau);
      };
      const double gamma = goldenSection(phi, config.lineSearchTol);
      out.trace.push_back({tau, fx, *std::max_element(r.begin(), r.end()), gamma});

      std::vector<double> next(games);
      for (std::size_t g = 0; g < games; ++g) next[g] = std::clamp(x[g] + gamma * dir[g], 0.0, 1.0);
      auto rNext = regrets(set, next);
      const double fNext = smoothMax(rNext, tau);
      const double decrease = fx - fNext;
      if (fNext <= fx) {
        x = std::move(next);
        r = std::move(rNext);
        fx = fNext;
      }
      if (relativeGap(fx, boundF) <= config.relGapTol || decrease < config.stallTol) break;
    }
    out.trace.push_back({tau, fx, *std::max_element(r.begin(), r.end()), 0.0});
  }

  out.maxRegret = bestMax;
  out.fw.fractional = Schedule::fromReal(x);
  out.fw.upperBound = bestMax;
  out.fw.lowerBound = lowerBound;
  out.fw.absGap = out.fw.upperBound - out.fw.lowerBound;
  out.fw.relGap = relativeGap(out.fw.upperBound, out.fw.lowerBound);
  out.fw.iterations = iterations;
  return out;
}

}  // namespace shortseason
