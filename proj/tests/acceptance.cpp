// End-to-end acceptance checks. Each criterion prints one PASS/FAIL line with
// the measured numbers; the exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <string>

#include <json.hpp>

#include "shortseason/concordance.hpp"
#include "shortseason/exhaustive.hpp"
#include "shortseason/frank_wolfe.hpp"
#include "shortseason/league.hpp"
#include "shortseason/mmr.hpp"
#include "shortseason/objective.hpp"
#include "shortseason/predictor.hpp"
#include "shortseason/random.hpp"
#include "shortseason/simulator.hpp"
#include "shortseason/strength.hpp"
#include "shortseason/synthetic.hpp"
#include "shortseason/transport.hpp"
#include "support.hpp"

using namespace shortseason;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double v, int digits = 4) {
  std::ostringstream o;
  o.precision(digits);
  o << v;
  return o.str();
}

Ranking randomPermutation(int n, std::mt19937_64& rng) {
  std::vector<int> r(static_cast<std::size_t>(n));
  std::iota(r.begin(), r.end(), 1);
  portableShuffle(r.begin(), r.end(), rng);
  return testsupport::rankingOf(r);
}

Schedule randomVertex(const LeagueState& s, std::mt19937_64& engine) {
  std::vector<double> c(static_cast<std::size_t>(s.numGames()));
  for (double& v : c) v = uniform01(engine);
  return transportationSubproblem(s, c);
}

Scenario randomScenario(const LeagueState& s, std::mt19937_64& engine) {
  Scenario sc{std::vector<std::uint8_t>(static_cast<std::size_t>(s.numGames()))};
  for (int g = 0; g < s.numGames(); ++g) sc.hostWon[static_cast<std::size_t>(g)] = bernoulli(engine, s.game(g).winProb);
  return sc;
}

double linearCost(const Schedule& x, const std::vector<double>& c) {
  double v = 0.0;
  for (std::size_t g = 0; g < c.size(); ++g) v += c[g] * x.selected[g];
  return v;
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

FeatureDataset wellSpecified(int n, std::uint64_t seed, const std::vector<double>& w, double b) {
  auto engine = streamEngine(seed, 0);
  FeatureDataset d;
  d.features.resize(n, static_cast<Eigen::Index>(w.size()));
  for (int i = 0; i < n; ++i) {
    double t = b;
    for (std::size_t j = 0; j < w.size(); ++j) {
      const double x = 4.0 * uniform01(engine) - 2.0;
      d.features(i, static_cast<Eigen::Index>(j)) = x;
      t += w[j] * x;
    }
    d.labels.push_back(bernoulli(engine, logistic(t)));
    d.gameIds.push_back(i);
  }
  return d;
}

// 1. Ranking metric fixture.
Outcome metricFixture() {
  const Ranking ref = testsupport::rankingOf({1, 2, 3, 4});
  const Ranking r1 = testsupport::rankingOf({1, 4, 2, 3});
  const Ranking r2 = testsupport::rankingOf({4, 1, 3, 2});
  const auto c1 = concordance(ref, r1);
  const auto c2 = concordance(ref, r2);
  const auto d1 = euclideanDistance(ref, r1);
  const auto d2 = euclideanDistance(ref, r2);
  return {c1 == 4 && c2 == 2 && d1 == 6 && d2 == 14,
          "concordance " + std::to_string(c1) + "/" + std::to_string(c2) + ", d_E " + std::to_string(d1) + "/" +
              std::to_string(d2)};
}

// 2. Distance inequalities, maximum distance, rank-versus-score bound.
Outcome propertySuites() {
  std::mt19937_64 rng(2024);
  int ineq = 0;
  int maxViol = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    const int n = 2 + static_cast<int>(uniformIndex(rng, 29));
    const Ranking a = randomPermutation(n, rng);
    const Ranking b = randomPermutation(n, rng);
    const auto dE = euclideanDistance(a, b);
    if (std::sqrt(2.0 * static_cast<double>(dE)) > static_cast<double>(n * (n - 1) - 2 * concordance(a, b)) + 1e-12) ++ineq;
    if (dE > maxEuclideanDistance(n)) ++maxViol;
  }

  bool lemmaExact = true;
  for (int n = 1; n <= 6; ++n) {
    std::vector<int> a(static_cast<std::size_t>(n));
    std::iota(a.begin(), a.end(), 1);
    std::int64_t best = 0;
    std::vector<int> b(a);
    do {
      best = std::max(best, euclideanDistance(testsupport::rankingOf(a), testsupport::rankingOf(b)));
    } while (std::next_permutation(b.begin(), b.end()));
    lemmaExact = lemmaExact && best == maxEuclideanDistance(n);
  }
  for (int n = 1; n <= 30; ++n) {
    std::vector<int> a(static_cast<std::size_t>(n));
    std::iota(a.begin(), a.end(), 1);
    const std::vector<int> rev(a.rbegin(), a.rend());
    lemmaExact = lemmaExact && euclideanDistance(testsupport::rankingOf(a), testsupport::rankingOf(rev)) == maxEuclideanDistance(n);
  }

  // Random leagues of 4 or 6 teams, random feasible schedules and outcomes.
  int boundViol = 0;
  for (int trial = 0; trial < 10000; ++trial) {
    RoundRobinConfig cfg;
    cfg.teams = trial % 2 == 0 ? 4 : 6;
    cfg.rounds = cfg.teams == 4 ? 3 : 5;
    cfg.selectedRounds = 1 + trial % (cfg.rounds - 1);
    cfg.preGames = 2 + trial % 9;
    const LeagueState s = generateRoundRobin(static_cast<std::uint64_t>(trial), cfg);
    auto engine = streamEngine(static_cast<std::uint64_t>(trial), 1);
    const Schedule x = randomVertex(s, engine);
    const Scenario sc = randomScenario(s, engine);
    const auto y = winPercentages(s, x, sc, Horizon::Short);
    const auto yHat = winPercentages(s, x, sc, Horizon::Full);
    double sq = 0.0;
    for (int i = 0; i < s.numTeams(); ++i) sq += (y[i] - yHat[i]) * (y[i] - yHat[i]);
    const double L = static_cast<double>(std::lcm(s.shortSeasonLength(), s.fullSeasonLength()));
    const auto dE = euclideanDistance(rankFromScores(s, y), rankFromScores(s, yHat));
    if (static_cast<double>(dE) > static_cast<double>(maxEuclideanDistance(s.numTeams())) * L * L * sq + 1e-9) ++boundViol;
  }
  return {ineq == 0 && maxViol == 0 && lemmaExact && boundViol == 0,
          "violations: inequality " + std::to_string(ineq) + ", max distance " + std::to_string(maxViol) +
              ", rank bound " + std::to_string(boundViol) + "; exhaustive/reversal maximum " + (lemmaExact ? "ok" : "wrong")};
}

// 3. Closed form against Monte Carlo.
Outcome closedFormVersusSimulation() {
  int within = 0;
  int total = 0;
  for (std::uint64_t inst = 0; inst < 10; ++inst) {
    RoundRobinConfig cfg;
    cfg.teams = 6;
    cfg.rounds = 5;
    cfg.selectedRounds = 3;
    cfg.preGames = 10;
    const LeagueState s = generateRoundRobin(1000 + inst, cfg);
    const PwObjectiveModel model = PwObjectiveModel::build(s);
    auto engine = streamEngine(inst, 2);
    for (int k = 0; k < 10; ++k) {
      const Schedule x = randomVertex(s, engine);
      const McEstimate est = mcEstimate(s, x, 200000, inst * 100 + static_cast<std::uint64_t>(k));
      within += std::abs(est.mean - model.evaluate(x)) <= 3.0 * est.stderr;
      ++total;
    }
  }
  return {within >= 95, std::to_string(within) + "/" + std::to_string(total) + " within 3 standard errors"};
}

// 4. Frank-Wolfe against enumeration; transportation against brute force.
Outcome tinyExactness() {
  int exact = 0;
  int lbViol = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LeagueState s = generateRoundRobin(seed);
    const PwObjectiveModel model = PwObjectiveModel::build(s);
    const FwResult r = solve(model);
    double opt = std::numeric_limits<double>::infinity();
    forEachFeasibleSchedule(s, [&](const Schedule& x) { opt = std::min(opt, model.evaluate(x)); });
    exact += std::abs(model.evaluate(r.bestAtom) - opt) <= 1e-12 * std::max(1.0, opt);
    lbViol += r.lowerBound > opt + 1e-12;
  }
  int transportOk = 0;
  std::mt19937_64 rng(42);
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const LeagueState s = generateRoundRobin(seed);
    std::vector<double> c(static_cast<std::size_t>(s.numGames()));
    for (auto& v : c) v = 2.0 * uniform01(rng) - 1.0;
    const Schedule x = transportationSubproblem(s, c);
    double best = std::numeric_limits<double>::infinity();
    forEachFeasibleSchedule(s, [&](const Schedule& y) { best = std::min(best, linearCost(y, c)); });
    transportOk += isFeasible(s, x) && std::abs(linearCost(x, c) - best) <= 1e-12;
  }
  return {exact >= 95 && lbViol == 0 && transportOk == 20,
          "optimal atom " + std::to_string(exact) + "/100, lower bound above optimum " + std::to_string(lbViol) +
              ", transportation " + std::to_string(transportOk) + "/20"};
}

// 5. Analytic gradients against central differences.
Outcome gradientChecks() {
  std::mt19937_64 rng(31);
  double worstObjective = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    RoundRobinConfig cfg;
    cfg.teams = trial % 2 == 0 ? 4 : 6;
    cfg.rounds = cfg.teams == 4 ? 4 : 5;
    const LeagueState s = generateRoundRobin(static_cast<std::uint64_t>(trial), cfg);
    const PwObjectiveModel model = PwObjectiveModel::build(s);
    std::vector<double> x(static_cast<std::size_t>(s.numGames()));
    for (auto& v : x) v = 0.05 + 0.9 * uniform01(rng);
    const auto grad = model.gradient(x);
    double num = 0.0;
    double den = 0.0;
    const double h = 1e-6;
    for (std::size_t g = 0; g < x.size(); ++g) {
      auto xp = x;
      auto xm = x;
      xp[g] += h;
      xm[g] -= h;
      const double fd = (model.evaluate(xp) - model.evaluate(xm)) / (2 * h);
      num += (fd - grad[g]) * (fd - grad[g]);
      den += grad[g] * grad[g];
    }
    worstObjective = std::max(worstObjective, std::sqrt(num / den));
  }

  const FeatureDataset d = wellSpecified(200, 3, {1.0, -2.0, 0.5}, 0.3);
  auto engine = streamEngine(3, 1);
  double worstLogistic = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    Eigen::VectorXd w(3);
    for (int j = 0; j < 3; ++j) w(j) = 2.0 * standardNormal(engine);
    const double b = standardNormal(engine);
    Eigen::VectorXd g;
    logisticObjective(d.features, d.labels, w, b, 0.7, &g);
    const double h = 1e-5;
    Eigen::VectorXd fd(4);
    for (int j = 0; j < 4; ++j) {
      Eigen::VectorXd wp = w, wm = w;
      double bp = b, bm = b;
      if (j < 3) {
        wp(j) += h;
        wm(j) -= h;
      } else {
        bp += h;
        bm -= h;
      }
      fd(j) = (logisticObjective(d.features, d.labels, wp, bp, 0.7) - logisticObjective(d.features, d.labels, wm, bm, 0.7)) /
              (2 * h);
    }
    worstLogistic = std::max(worstLogistic, (g - fd).norm() / g.norm());
  }
  return {worstObjective < 1e-6 && worstLogistic < 1e-6,
          "worst relative error: objective " + fmt(worstObjective, 3) + ", logistic loss " + fmt(worstLogistic, 3)};
}

// 6. Frank-Wolfe wall time on a 30-team league with 259 games left.
Outcome runtime() {
  NbaLikeConfig cfg;
  cfg.remainingGames = 259;
  cfg.shortSeasonLength = 72;
  const SyntheticLeague league = generateNbaLike(1, cfg);
  const auto start = std::chrono::steady_clock::now();
  const FwResult r = solve(PwObjectiveModel::build(league.state));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return {league.state.numGames() == 259 && secs < 1.0,
          fmt(secs, 3) + " s for " + std::to_string(league.state.numGames()) + " games, " + std::to_string(r.iterations) +
              " iterations, relative gap " + fmt(r.relGap, 3)};
}

// 7. Simulated concordance of PW-FW, Greedy and Status Quo.
Outcome benchmarkOrdering() {
  int pwBeatsGreedy = 0;
  double pwSum = 0.0;
  double greedySum = 0.0;
  double sqSum = 0.0;
  const int instances = 50;
  for (int k = 0; k < instances; ++k) {
    const SyntheticLeague league = generateNbaLike(static_cast<std::uint64_t>(k));
    EvalConfig eval;
    eval.replications = 4000;
    eval.baseSeed = 900 + static_cast<std::uint64_t>(k);  // common random numbers across methods
    eval.simProbs = league.trueProbs;
    const Schedule pw = solve(PwObjectiveModel::build(league.state)).bestAtom;
    const GreedyResult greedy = greedySchedule(league.state);
    const double pwC = simulate(league.state, pw, eval).meanConcordance;
    const double grC = simulate(league.state, greedy.schedule, eval).meanConcordance;
    const double sqC = simulateStatusQuo(league.state, eval).meanConcordance;
    pwBeatsGreedy += pwC > grC;
    pwSum += pwC;
    greedySum += grC;
    sqSum += sqC;
  }
  const double pw = pwSum / instances;
  const double gr = greedySum / instances;
  const double sq = sqSum / instances;
  return {pwBeatsGreedy >= 45 && pw >= gr && gr >= sq,
          "PW > Greedy on " + std::to_string(pwBeatsGreedy) + "/50; mean concordance PW " + fmt(pw, 6) + ", Greedy " +
              fmt(gr, 6) + ", Status Quo " + fmt(sq, 6)};
}

// 8. Min-max regret sanity.
Outcome mmrSanity() {
  int reproduced = 0;
  int sandwichViol = 0;
  int minimalViol = 0;
  int runs = 0;
  for (std::uint64_t seed = 0; seed < 30; ++seed) {
    const LeagueState s = generateRoundRobin(seed);
    const CandidateSet single = buildCandidateSet(s, {{"only", s.probabilities()}});
    const FwResult fw = solve(single.models[0]);
    const MmrResult r = solveMmr(single, s);
    reproduced += std::abs(single.models[0].evaluate(r.fw.bestAtom) - single.models[0].evaluate(fw.bestAtom)) <= fw.absGap + 1e-12;

    // Multi-candidate runs for the iterate and harvest invariants.
    std::vector<Candidate> cands{{"base", s.probabilities()}};
    auto engine = streamEngine(seed, 8);
    for (int l = 0; l < 2; ++l) {
      std::vector<double> p = s.probabilities();
      for (double& v : p) v = std::clamp(v + 0.2 * (uniform01(engine) - 0.5), 0.05, 0.95);
      cands.push_back({"alt" + std::to_string(l), p});
    }
    for (const MmrResult& res : {r, solveMmr(buildCandidateSet(s, cands), s)}) {
      ++runs;
      const double logL = std::log(static_cast<double>(res.perCandidateRegrets.size()));
      for (const auto& e : res.trace) {
        sandwichViol += e.maxRegret > e.smoothed + 1e-12 || e.smoothed > e.maxRegret + e.tau * logL + 1e-12;
      }
      for (double h : res.harvestedMaxRegrets) minimalViol += res.maxRegret > h;
    }
  }
  return {reproduced == 30 && sandwichViol == 0 && minimalViol == 0,
          "single-candidate match " + std::to_string(reproduced) + "/30; over " + std::to_string(runs) +
              " runs: sandwich violations " + std::to_string(sandwichViol) + ", non-minimal choices " +
              std::to_string(minimalViol)};
}

// 9. Variable fixing soundness and local search quality.
Outcome fixingAndSearch() {
  std::int64_t checked = 0;
  std::int64_t violations = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    RoundRobinConfig rc;
    rc.teams = 6;
    rc.rounds = 5;
    rc.selectedRounds = 3;
    rc.preGames = 10;
    const LeagueState s = generateRoundRobin(seed, rc);
    const PcInstance inst = seed % 2 == 0 ? makeMeanValueInstance(s) : makeSampledInstance(s, sampleScenarios(s, 5, seed));
    const FixingReport rep = variableFixing(inst);
    auto engine = streamEngine(seed, 3);
    for (int k = 0; k < 1000; ++k) {
      const Schedule x = randomVertex(s, engine);
      std::vector<std::vector<double>> wins;
      for (int sc = 0; sc < inst.numScenarios(); ++sc) wins.push_back(shortWins(inst, sc, x));
      for (const auto& [sc, i, j] : rep.fixedOne) {
        ++checked;
        violations += !(wins[static_cast<std::size_t>(sc)][static_cast<std::size_t>(i)] > wins[static_cast<std::size_t>(sc)][static_cast<std::size_t>(j)]);
      }
      for (const auto& [sc, i, j] : rep.fixedZero) {
        ++checked;
        violations += !(wins[static_cast<std::size_t>(sc)][static_cast<std::size_t>(i)] < wins[static_cast<std::size_t>(sc)][static_cast<std::size_t>(j)]);
      }
    }
  }
  int within = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const LeagueState s = generateRoundRobin(seed);
    const PcInstance inst = makeMeanValueInstance(s);
    const PcOptimum opt = exhaustivePc(inst);
    auto engine = streamEngine(seed, 5);
    const auto r = localSearch(inst, randomVertex(s, engine), {.budget = 2000, .seed = seed});
    within += r.objective >= opt.objective - 1.0;
  }
  return {checked > 0 && violations == 0 && within >= 90,
          std::to_string(violations) + " sign violations in " + std::to_string(checked) +
              " fixed-pair checks; local search within one pair on " + std::to_string(within) + "/100"};
}

// 10. Strength-of-schedule constrained solver.
Outcome sosConstraint() {
  const double eps = 0.02;
  int satisfied = 0;
  int reported = 0;
  int silent = 0;
  double ssdSos = 0.0;
  double ssdFw = 0.0;
  const int instances = 20;
  for (int k = 0; k < instances; ++k) {
    const SyntheticLeague league = generateNbaLike(static_cast<std::uint64_t>(k));
    const LeagueState& s = league.state;
    const PwObjectiveModel model = PwObjectiveModel::build(s);
    FwConfig cfg;
    cfg.sosEpsilon = eps;
    const FwResult sos = solveSoS(model, cfg, preWinPct(s));
    const FwResult fw = solve(model);
    const StrengthOfSchedule a = strengthOfSchedule(s, sos.bestAtom);
    const StrengthOfSchedule b = strengthOfSchedule(s, fw.bestAtom);
    if (a.maxExcess <= eps + 1e-6) {
      ++satisfied;
    } else if (sos.sosViolation && *sos.sosViolation > 0.0) {
      ++reported;
    } else {
      ++silent;
    }
    ssdSos += a.ssd;
    ssdFw += b.ssd;
  }
  ssdSos /= instances;
  ssdFw /= instances;
  return {silent == 0 && ssdSos <= ssdFw,
          "within tolerance " + std::to_string(satisfied) + "/20, reported violations " + std::to_string(reported) +
              ", unreported " + std::to_string(silent) + "; mean SSD " + fmt(ssdSos) + " vs plain " + fmt(ssdFw)};
}

// 11. Predictor metrics, weight recovery and calibration.
Outcome predictorChecks() {
  std::vector<int> labels(101);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 3 == 0);
  const bool ln2 = logLoss(std::vector<double>(101, 0.5), labels) == std::numbers::ln2;

  auto engine = streamEngine(2, 0);
  double worstAuc = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + uniformIndex(engine, 60);
    std::vector<double> p(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<double>(uniformIndex(engine, 10)) / 10.0;
      y[i] = bernoulli(engine, 0.5);
    }
    y[0] = 0;
    y[1] = 1;
    double wins = 0.0;
    double pairs = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (y[i] == 1 && y[j] == 0) {
          pairs += 1.0;
          wins += p[i] > p[j] ? 1.0 : (p[i] == p[j] ? 0.5 : 0.0);
        }
      }
    }
    worstAuc = std::max(worstAuc, std::abs(auc(p, y) - wins / pairs));
  }

  const FeatureDataset d = wellSpecified(50000, 4, {2.0, -1.0}, 0.5);
  const auto [w, b] = rawCoefficients(fitLogistic(d, {.l2 = 0.0}));
  const double worstWeight = std::max({std::abs(w(0) - 2.0) / 2.0, std::abs(w(1) + 1.0), std::abs(b - 0.5) / 0.5});

  auto cal = streamEngine(7, 0);
  std::vector<double> s(10000);
  std::vector<int> sy(10000);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = 1.5 * standardNormal(cal);
    sy[i] = bernoulli(cal, logistic(s[i]));
  }
  const Platt platt = fitPlatt(s, sy);
  const bool plattOk = std::abs(platt.a - 1.0) < 0.1 && std::abs(platt.b) < 0.1;
  return {ln2 && worstAuc < 1e-12 && worstWeight < 0.05 && plattOk,
          std::string("LogLoss(0.5) ") + (ln2 ? "= ln 2" : "!= ln 2") + ", AUC error " + fmt(worstAuc, 3) +
              ", worst weight error " + fmt(100.0 * worstWeight, 3) + "%, Platt A " + fmt(platt.a) + " B " + fmt(platt.b)};
}

// 12. Byte-reproducible runs from the manifest, across thread counts.
std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string reportWithoutTimings(const fs::path& p) {
  auto j = nlohmann::json::parse(slurp(p));
  j.erase("timings");
  return j.dump(2);
}

Outcome determinism() {
  const fs::path dir = fs::temp_directory_path() / "shortseason_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = SHORTSEASON_CLI;
  const auto run = [&](const std::string& env, const std::string& args) {
    const std::string cmd = env + " " + cli + " " + args + " > " + (dir / "log.txt").string() + " 2>&1";
    return std::system(cmd.c_str());
  };
  const fs::path data = dir / "league";
  if (run("", "generate --seed 17 -o " + data.string()) != 0) return {false, "generate failed"};
  const std::string league = " --teams " + (data / "teams.csv").string() + " --remaining " + (data / "remaining.csv").string() +
                             " --train " + (data / "train-features.csv").string() + " --remaining-features " +
                             (data / "remaining-features.csv").string() + " --sim-probs " + (data / "sim-probs.csv").string() +
                             " --outcomes " + (data / "outcomes.csv").string() + " -m 66 --seed 5 --replications 5000";
  int same = 0;
  int runs = 0;
  for (const std::string solver : {"pw-fw", "pc-saa", "greedy"}) {
    const fs::path a = dir / (solver + "_1");
    const fs::path b = dir / (solver + "_4");
    const fs::path c = dir / (solver + "_replay");
    if (run("SHORTSEASON_THREADS=1", "pipeline" + league + " --solver " + solver + " --search-budget 20000 -o " + a.string()) != 0 ||
        run("SHORTSEASON_THREADS=4", "pipeline" + league + " --solver " + solver + " --search-budget 20000 -o " + b.string()) != 0 ||
        run("SHORTSEASON_THREADS=3", "pipeline --manifest " + (a / "run-manifest.json").string() + " -o " + c.string()) != 0) {
      return {false, solver + " run failed: " + slurp(dir / "log.txt")};
    }
    for (const fs::path& other : {b, c}) {
      ++runs;
      same += reportWithoutTimings(a / "report.json") == reportWithoutTimings(other / "report.json") &&
              slurp(a / "schedule.csv") == slurp(other / "schedule.csv") && slurp(a / "probs.csv") == slurp(other / "probs.csv");
    }
  }
  return {same == runs, std::to_string(same) + "/" + std::to_string(runs) +
                            " reruns byte-identical apart from timings (threads 1 vs 4, manifest replay on 3)"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"ranking metric fixture", metricFixture},
      {"ranking property suites", propertySuites},
      {"closed form versus Monte Carlo", closedFormVersusSimulation},
      {"Frank-Wolfe exactness on tiny leagues", tinyExactness},
      {"gradient checks", gradientChecks},
      {"Frank-Wolfe runtime", runtime},
      {"benchmark ordering", benchmarkOrdering},
      {"min-max regret sanity", mmrSanity},
      {"variable fixing and local search", fixingAndSearch},
      {"strength-of-schedule constraint", sosConstraint},
      {"predictor", predictorChecks},
      {"determinism", determinism},
  };
  int failures = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    failures += !o.pass;
    std::printf("%s [%2zu] %s: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].first.c_str(), o.detail.c_str(),
                secs);
    std::fflush(stdout);
  }
  return failures;
}
