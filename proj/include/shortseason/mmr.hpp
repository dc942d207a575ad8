#pragma once

#include <span>
#include <string>
#include <vector>

#include "shortseason/frank_wolfe.hpp"
#include "shortseason/league.hpp"
#include "shortseason/objective.hpp"

namespace shortseason {

struct Candidate {
  std::string label;
  std::vector<double> probs;  // host-win probability per remaining game
};

// Candidate prediction vectors with their objective models and the
// reference value each regret is measured against (the candidate's own
// Frank-Wolfe lower bound).
struct CandidateSet {
  std::vector<Candidate> candidates;
  std::vector<double> thetas;
  std::vector<PwObjectiveModel> models;
  std::vector<Schedule> ownAtoms;  // each candidate's own best schedule

  std::size_t size() const { return candidates.size(); }
  std::size_t indexOf(const std::string& label) const;  // KeyError if absent
};

// Solves the single-candidate problem for every candidate to fix theta.
CandidateSet buildCandidateSet(const LeagueState& state, std::vector<Candidate> candidates,
                               const FwConfig& fw = {});

double regret(const CandidateSet& set, const std::string& label, std::span<const double> x);
double regret(const CandidateSet& set, const std::string& label, const Schedule& x);
std::vector<double> regrets(const CandidateSet& set, std::span<const double> x);

// tau * log sum_l exp(r_l / tau), evaluated stably.
double smoothMax(std::span<const double> r, double tau);
std::vector<double> softmaxWeights(std::span<const double> r, double tau);

struct MmrConfig {
  std::vector<double> temperatures{1.0, 0.1, 0.01, 0.001};
  int iterationsPerTemperature = 200;
  double lineSearchTol = 1e-8;
  double relGapTol = 1e-6;
  double stallTol = 1e-12;
};

struct MmrTraceEntry {
  double tau = 0.0;
  double smoothed = 0.0;   // F_tau at the iterate
  double maxRegret = 0.0;  // exact max regret at the iterate
  double gamma = 0.0;
};

struct MmrResult {
  FwResult fw;  // bounds are on the exact max regret
  std::vector<double> perCandidateRegrets;  // of fw.bestAtom
  double maxRegret = 0.0;
  std::vector<double> harvestedMaxRegrets;  // one per distinct atom considered
  std::vector<MmrTraceEntry> trace;
};

// Frank-Wolfe on the log-sum-exp smoothing of max_l regret_l over the
// relaxed schedule polytope, with the temperature lowered between rounds.
// Returns the harvested atom with the smallest exact max regret.
MmrResult solveMmr(const CandidateSet& set, const LeagueState& state, const MmrConfig& config = {});

}  // namespace shortseason
