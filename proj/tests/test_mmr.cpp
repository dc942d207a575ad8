#include <algorithm>
#include <cmath>
#include <limits>

#include "doctest.h"
#include "shortseason/errors.hpp"
#include "shortseason/exhaustive.hpp"
#include "shortseason/mmr.hpp"
#include "shortseason/random.hpp"
#include "shortseason/synthetic.hpp"

using namespace shortseason;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> perturbed(const LeagueState& s, std::uint64_t seed, double spread) {
  auto engine = streamEngine(seed, 7);
  auto p = s.probabilities();
  for (double& v : p) v = std::clamp(v + spread * (2.0 * uniform01(engine) - 1.0), 0.02, 0.98);
  return p;
}

double maxOf(const std::vector<double>& v) { return *std::max_element(v.begin(), v.end()); }

}  // namespace

TEST_CASE("regret is the objective minus the candidate's reference") {
  const LeagueState s = generateRoundRobin(3);
  const auto set = buildCandidateSet(s, {{"a", s.probabilities()}, {"b", perturbed(s, 3, 0.2)}});
  const Schedule x = set.ownAtoms[1];
  CHECK(regret(set, "b", x) == doctest::Approx(set.models[1].evaluate(x) - set.thetas[1]).epsilon(1e-15));
  CHECK_THROWS_AS(regret(set, "c", x), KeyError);

  // Regret at the candidate's own atom is the Frank-Wolfe absolute gap.
  const auto fw = solve(set.models[0]);
  CHECK(regret(set, "a", set.ownAtoms[0]) == doctest::Approx(fw.absGap).epsilon(1e-12));
  CHECK(regret(set, "a", set.ownAtoms[0]) >= 0.0);
}

TEST_CASE("identical candidates have identical regrets") {
  const LeagueState s = generateRoundRobin(5);
  const auto set = buildCandidateSet(s, {{"x", s.probabilities()}, {"y", s.probabilities()}});
  auto engine = streamEngine(5, 0);
  for (int k = 0; k < 20; ++k) {
    std::vector<double> x(static_cast<std::size_t>(s.numGames()));
    for (double& v : x) v = uniform01(engine);
    CHECK(regret(set, "x", x) == regret(set, "y", x));
  }
}

TEST_CASE("full-season selection has regret minus theta") {
  RoundRobinConfig rc;
  rc.selectedRounds = rc.rounds;
  const LeagueState s = generateRoundRobin(2, rc);
  const auto set = buildCandidateSet(s, {{"a", s.probabilities()}, {"b", perturbed(s, 2, 0.3)}});
  const Schedule all = Schedule::all(s.numGames());
  for (const auto& c : set.candidates) {
    CHECK(std::abs(regret(set, c.label, all) + set.thetas[set.indexOf(c.label)]) < 1e-15);
  }
}

TEST_CASE("log-sum-exp sandwich and softmax weights") {
  auto engine = streamEngine(11, 0);
  for (int k = 0; k < 1000; ++k) {
    const std::size_t L = 1 + uniformIndex(engine, 8);
    std::vector<double> r(L);
    for (double& v : r) v = 10.0 * (uniform01(engine) - 0.5);
    const double tau = std::pow(10.0, -3.0 * uniform01(engine));
    const double F = smoothMax(r, tau);
    CHECK(maxOf(r) <= F + 1e-12);
    CHECK(F <= maxOf(r) + tau * std::log(static_cast<double>(L)) + 1e-12);
    const auto w = softmaxWeights(r, tau);
    double sum = 0.0;
    for (double v : w) {
      CHECK(v >= 0.0);
      sum += v;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK_THROWS_AS(smoothMax(std::vector<double>{}, 1.0), ConfigError);
  CHECK_THROWS_AS(smoothMax(std::vector<double>{1.0}, 0.0), ConfigError);
}

TEST_CASE("smoothed solver invariants along its iterates") {
  const auto league = generateNbaLike(4, NbaLikeConfig{});
  const LeagueState& s = league.state;
  const auto set = buildCandidateSet(
      s, {{"est", s.probabilities()}, {"true", league.trueProbs}, {"noisy", perturbed(s, 4, 0.1)}});
  const auto r = solveMmr(set, s);
  MESSAGE("max regret " << r.maxRegret << ", lower bound " << r.fw.lowerBound << ", iterations " << r.fw.iterations);
  const double logL = std::log(3.0);
  REQUIRE(!r.trace.empty());
  for (const auto& e : r.trace) {
    CHECK(e.maxRegret <= e.smoothed + 1e-12);
    CHECK(e.smoothed <= e.maxRegret + e.tau * logL + 1e-12);
  }
  for (double h : r.harvestedMaxRegrets) CHECK(r.maxRegret <= h);
  CHECK(r.maxRegret == maxOf(r.perCandidateRegrets));
  CHECK(r.fw.lowerBound >= 0.0);
  CHECK(r.fw.lowerBound <= r.fw.upperBound);
  CHECK(isFeasible(s, r.fw.bestAtom));
  // No worse than any candidate's own optimum.
  for (const auto& own : set.ownAtoms) {
    const auto x = own.asReal();
    CHECK(r.maxRegret <= maxOf(regrets(set, x)) + 1e-15);
  }
}

TEST_CASE("a single candidate reduces to the plain solver") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const LeagueState s = generateRoundRobin(seed);
    const auto set = buildCandidateSet(s, {{"only", s.probabilities()}});
    const auto fw = solve(set.models[0]);
    const auto r = solveMmr(set, s);
    CHECK(r.maxRegret >= -1e-15);
    CHECK(r.maxRegret <= fw.absGap + 1e-12);
    CHECK(set.models[0].evaluate(r.fw.bestAtom) <= fw.upperBound + 1e-12);
  }
}

TEST_CASE("two candidates on tiny leagues against enumeration") {
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const LeagueState s = generateRoundRobin(seed);
    const auto set = buildCandidateSet(s, {{"a", s.probabilities()}, {"b", perturbed(s, seed, 0.3)}});
    std::vector<double> best(2, kInf);
    std::vector<Schedule> argBest(2);
    double minMax = kInf;
    forEachFeasibleSchedule(s, [&](const Schedule& x) {
      const auto xr = x.asReal();
      const auto rg = regrets(set, xr);
      minMax = std::min(minMax, maxOf(rg));
      for (std::size_t l = 0; l < 2; ++l) {
        const double f = set.models[l].evaluate(xr);
        if (f < best[l]) {
          best[l] = f;
          argBest[l] = x;
        }
      }
    });
    const auto r = solveMmr(set, s);
    for (const auto& x : argBest) {
      const auto xr = x.asReal();
      CHECK(r.maxRegret <= maxOf(regrets(set, xr)) + 1e-12);
    }
    CHECK(r.maxRegret >= minMax - 1e-12);
    CHECK(r.fw.lowerBound <= minMax + 1e-12);
  }
}

TEST_CASE("min-max regret input errors") {
  const LeagueState s = generateRoundRobin(1);
  CandidateSet empty;
  CHECK_THROWS_AS(solveMmr(empty, s), ConfigError);
  CHECK_THROWS_AS(buildCandidateSet(s, {{"a", s.probabilities()}, {"a", s.probabilities()}}), ConfigError);
  CHECK_THROWS_AS(buildCandidateSet(s, {{"a", std::vector<double>(3, 0.5)}}), DimensionError);
  const auto set = buildCandidateSet(s, {{"a", s.probabilities()}});
  MmrConfig bad;
  bad.temperatures = {1.0, -1.0};
  CHECK_THROWS_AS(solveMmr(set, s, bad), ConfigError);
}
