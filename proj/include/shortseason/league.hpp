#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace shortseason {

enum class Conference { East, West };

std::string toString(Conference c);
Conference conferenceFromString(const std::string& s);

struct Team {
  int id = 0;
  std::string name;
  Conference conference = Conference::East;
  std::string division;
  int preWins = 0;        // games won before the suspension
  int preGames = 0;       // games played before the suspension
  int preHomeGames = 0;   // of preGames, played at home
  int homeTarget = 0;     // remaining home games to schedule
  int awayTarget = 0;     // remaining away games to schedule
};

struct Game {
  int id = 0;
  int host = 0;
  int guest = 0;
  int matchIndex = 1;
  int scheduledDay = 0;
  double winProb = 0.5;  // probability the host wins
};

// Policy for probabilities that sit on the {0, 1} boundary at ingest.
enum class ProbabilityPolicy { Reject, Clamp };

inline constexpr double kProbabilityClamp = 1e-6;

// Checks 0 < p < 1; under Clamp, boundary values move to [1e-6, 1 - 1e-6].
double admitProbability(double p, ProbabilityPolicy policy);

// The problem instance: teams, remaining games and the season lengths.
// Immutable after construction; create() enforces every structural invariant.
class LeagueState {
 public:
  LeagueState() = default;  // empty league; use create() for a real instance
  static LeagueState create(std::vector<Team> teams, std::vector<Game> games,
                            int fullSeasonLength, int shortSeasonLength);

  int numTeams() const { return static_cast<int>(teams_.size()); }
  int numGames() const { return static_cast<int>(games_.size()); }
  const std::vector<Team>& teams() const { return teams_; }
  const std::vector<Game>& games() const { return games_; }
  const Team& team(int i) const { return teams_[static_cast<std::size_t>(i)]; }
  const Game& game(int g) const { return games_[static_cast<std::size_t>(g)]; }
  int fullSeasonLength() const { return fullLength_; }
  int shortSeasonLength() const { return shortLength_; }

  // Remaining home / away game ids of team i, in increasing id order.
  const std::vector<int>& homeGames(int i) const { return home_[static_cast<std::size_t>(i)]; }
  const std::vector<int>& awayGames(int i) const { return away_[static_cast<std::size_t>(i)]; }

  std::vector<double> probabilities() const;
  // Same league with the host-win probabilities replaced (one per game).
  LeagueState withProbabilities(std::span<const double> probs) const;
  // Same league with different per-team targets and short-season length.
  LeagueState withTargets(std::span<const int> home, std::span<const int> away,
                          int shortSeasonLength) const;

  // Number of games selected by any feasible schedule (sum of home targets).
  int selectedGameCount() const;

 private:
  void index();

  std::vector<Team> teams_;
  std::vector<Game> games_;
  int fullLength_ = 0;
  int shortLength_ = 0;
  std::vector<std::vector<int>> home_;
  std::vector<std::vector<int>> away_;
};

// Decision vector over game ids. Integral schedules carry only `selected`;
// Frank-Wolfe iterates additionally carry a fractional point in [0,1]^G.
struct Schedule {
  std::vector<std::uint8_t> selected;
  std::optional<std::vector<double>> fractional;

  static Schedule none(int games) { return {std::vector<std::uint8_t>(static_cast<std::size_t>(games), 0), {}}; }
  static Schedule all(int games) { return {std::vector<std::uint8_t>(static_cast<std::size_t>(games), 1), {}}; }
  static Schedule fromReal(std::vector<double> x);

  int size() const { return static_cast<int>(selected.size()); }
  bool isIntegral() const { return !fractional.has_value(); }
  int count() const;
  std::vector<double> asReal() const;
  bool operator==(const Schedule& o) const { return selected == o.selected && fractional == o.fractional; }
};

// One realization of every remaining game; hostWon[g] = 1 when the host wins.
struct Scenario {
  std::vector<std::uint8_t> hostWon;
  int size() const { return static_cast<int>(hostWon.size()); }
};

// Per-team violation of the selection targets, empty when feasible.
std::vector<std::string> scheduleViolations(const LeagueState& state, const Schedule& schedule);
bool isFeasible(const LeagueState& state, const Schedule& schedule);
// Throws FeasibilityError naming the violated teams.
void requireFeasible(const LeagueState& state, const Schedule& schedule);

// Win percentages. Exact vectors keep integer numerators and per-entry
// denominators so that ties are detected without rounding; real vectors hold
// expected values (mean-value scenarios, status-quo fallbacks).
class ScoreVector {
 public:
  ScoreVector() = default;
  static ScoreVector exact(std::vector<std::int64_t> numerators, std::vector<std::int64_t> denominators);
  static ScoreVector exact(std::vector<std::int64_t> numerators, std::int64_t denominator);
  static ScoreVector real(std::vector<double> values);

  int size() const { return static_cast<int>(values_.size()); }
  bool isExact() const { return exact_; }
  double operator[](int i) const { return values_[static_cast<std::size_t>(i)]; }
  const std::vector<double>& values() const { return values_; }
  std::int64_t numerator(int i) const { return num_[static_cast<std::size_t>(i)]; }
  std::int64_t denominator(int i) const { return den_[static_cast<std::size_t>(i)]; }

  // Sign of (score_i - score_j): exact cross-multiplication for exact vectors.
  int compare(int i, int j) const;

 private:
  bool exact_ = false;
  std::vector<double> values_;
  std::vector<std::int64_t> num_;
  std::vector<std::int64_t> den_;
};

enum class TieBreak { ByPreWinPctThenIndex };

// rank[i] in 1..n, 1 = best. Always a permutation.
struct Ranking {
  std::vector<int> rank;
  TieBreak tieBreak = TieBreak::ByPreWinPctThenIndex;
  int size() const { return static_cast<int>(rank.size()); }
};

enum class Horizon { Short, Full };

// Short: (y0 + wins among selected games) / m, schedule must be feasible.
// Full: every remaining game played, divisor m-hat.
ScoreVector winPercentages(const LeagueState& state, const Schedule& schedule,
                           const Scenario& scenario, Horizon horizon);

// Pre-suspension win percentage y0 / m0 (0 for a team with no games played).
ScoreVector preSuspensionScores(const LeagueState& state);

// Competition order: higher score first; ties by higher tie-break score, then
// lower team index.
Ranking rankFromScores(const ScoreVector& scores, const ScoreVector& tieBreakScores);
Ranking rankFromScores(const LeagueState& state, const ScoreVector& scores);

// Number of pairs i<j ordered the same strict way in both inputs. Pairs tied
// in either input count as neither concordant nor discordant. Rankings are
// oriented so that a smaller rank means a better team.
std::int64_t concordance(const ScoreVector& a, const ScoreVector& b);
std::int64_t concordance(const Ranking& a, const Ranking& b);
std::int64_t concordance(const ScoreVector& a, const Ranking& b);

std::int64_t euclideanDistance(const Ranking& a, const Ranking& b);
std::int64_t manhattanDistance(const Ranking& a, const Ranking& b);

// n(n-1)/2 and n(n^2-1)/3.
inline std::int64_t maxConcordance(std::int64_t n) { return n * (n - 1) / 2; }
inline std::int64_t maxEuclideanDistance(std::int64_t n) { return n * (n * n - 1) / 3; }

}  // namespace shortseason
