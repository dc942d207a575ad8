#pragma once

#include <optional>
#include <string>
#include <vector>

#include "shortseason/league.hpp"
#include "shortseason/predictor.hpp"

namespace shortseason {

// A parsed CSV file. Row numbers are 1-based file lines (the header is line 1).
struct CsvTable {
  std::string path;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<int> lines;

  // Column position by name; -1 when absent.
  int column(const std::string& name) const;
  // Column position, IngestError when absent.
  int require(const std::string& name) const;
};

CsvTable readCsv(const std::string& path);
CsvTable parseCsv(const std::string& text, const std::string& origin);

enum class TargetMode { Auto, Explicit };

struct IngestPaths {
  std::string teams;
  std::string remaining;
  std::optional<std::string> played;   // game_id,day,host_id,guest_id,host_won; cross-checked with teams
  std::optional<std::string> probs;    // game_id,prob; overrides a prob column in remaining
  std::optional<std::string> targets;  // team_id,home_target,away_target
};

struct IngestOptions {
  int shortSeasonLength = 0;
  TargetMode targetMode = TargetMode::Auto;
  ProbabilityPolicy probabilityPolicy = ProbabilityPolicy::Reject;
};

struct IngestResult {
  LeagueState state;
  bool hasProbabilities = false;  // false: every winProb is the 0.5 placeholder
};

// Builds a validated league. The full-season length is pre-games plus
// remaining games, which must agree across teams. Auto targets are
// m/2 - home (away) games played.
IngestResult ingest(const IngestPaths& paths, const IngestOptions& options);

// Auto home/away targets for one team; ConfigError on odd m, IngestError on a
// negative target.
std::pair<int, int> autoTargets(const Team& team, int shortSeasonLength);

void writeTeamsCsv(const LeagueState& state, const std::string& path);
void writeRemainingCsv(const LeagueState& state, const std::string& path, bool withProbabilities = true);
void writeTargetsCsv(const LeagueState& state, const std::string& path);
void writeProbsCsv(const LeagueState& state, const std::vector<double>& probs, const std::string& path);
void writeProbsCsv(const std::vector<int>& gameIds, const std::vector<double>& probs, const std::string& path);
void writeScheduleCsv(const LeagueState& state, const Schedule& schedule, const std::string& path);
void writeOutcomesCsv(const LeagueState& state, const Scenario& scenario, const std::string& path);

// Per-game values keyed by game_id; every game must appear exactly once.
std::vector<double> readProbs(const LeagueState& state, const std::string& path, ProbabilityPolicy policy);
Schedule readSchedule(const LeagueState& state, const std::string& path);
Scenario readOutcomes(const LeagueState& state, const std::string& path);

// game_id,label,f1..fD when labelled, game_id,f1..fD otherwise.
FeatureDataset readFeatures(const std::string& path, bool labelled);

}  // namespace shortseason
