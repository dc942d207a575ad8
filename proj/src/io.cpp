#include "shortseason/io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include <boost/algorithm/string/trim.hpp>
#include <boost/tokenizer.hpp>

#include "shortseason/errors.hpp"

namespace shortseason {

namespace {

std::string where(const CsvTable& t, std::size_t r) {
  return t.path + " row " + std::to_string(t.lines[r]);
}

int toInt(const CsvTable& t, std::size_t r, int col) {
  const std::string s = boost::algorithm::trim_copy(t.rows[r][static_cast<std::size_t>(col)]);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw IngestError(where(t, r) + ": column '" + t.header[static_cast<std::size_t>(col)] + "' expects an integer, got '" + s + "'");
  }
  return v;
}

double toDouble(const CsvTable& t, std::size_t r, int col) {
  const std::string s = boost::algorithm::trim_copy(t.rows[r][static_cast<std::size_t>(col)]);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw IngestError(where(t, r) + ": column '" + t.header[static_cast<std::size_t>(col)] + "' expects a number, got '" + s + "'");
  }
  return v;
}

int toBit(const CsvTable& t, std::size_t r, int col) {
  const int v = toInt(t, r, col);
  if (v != 0 && v != 1) {
    throw IngestError(where(t, r) + ": column '" + t.header[static_cast<std::size_t>(col)] + "' must be 0 or 1");
  }
  return v;
}

// Maps ids 0..count-1 to rows; any order, each exactly once.
std::vector<std::size_t> denseIds(const CsvTable& t, int col, const std::string& what) {
  std::map<int, std::size_t> seen;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int id = toInt(t, r, col);
    if (id < 0) throw IngestError(where(t, r) + ": negative " + what + " id " + std::to_string(id));
    if (!seen.emplace(id, r).second) {
      throw IngestError(where(t, r) + ": duplicate " + what + " id " + std::to_string(id));
    }
  }
  std::vector<std::size_t> order(seen.size());
  for (const auto& [id, r] : seen) {
    if (id >= static_cast<int>(seen.size())) {
      throw IngestError(where(t, r) + ": " + what + " ids must be 0.." + std::to_string(seen.size() - 1) +
                        ", found " + std::to_string(id));
    }
    order[static_cast<std::size_t>(id)] = r;
  }
  return order;
}

// Per-game column keyed by game_id; every game exactly once.
template <typename F>
void perGame(const LeagueState& state, const CsvTable& t, const std::string& valueColumn, F&& assign) {
  const int idCol = t.require("game_id");
  const int valCol = t.require(valueColumn);
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(state.numGames()), 0);
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int g = toInt(t, r, idCol);
    if (g < 0 || g >= state.numGames()) throw IngestError(where(t, r) + ": unknown game id " + std::to_string(g));
    if (seen[static_cast<std::size_t>(g)]) throw IngestError(where(t, r) + ": duplicate game id " + std::to_string(g));
    seen[static_cast<std::size_t>(g)] = 1;
    assign(g, r, valCol);
  }
  for (int g = 0; g < state.numGames(); ++g) {
    if (!seen[static_cast<std::size_t>(g)]) throw IngestError(t.path + ": game id " + std::to_string(g) + " is missing");
  }
}

// Quotes a field that the reader would otherwise split.
std::string field(const std::string& s) {
  const bool plain = s.find_first_of(",\"\\") == std::string::npos;
  if (plain) return s;
  std::string q = "\"";
  for (char ch : s) {
    if (ch == '"' || ch == '\\') q += '\\';
    q += ch;
  }
  return q + '"';
}

std::ofstream openOut(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IngestError("cannot write " + path);
  out.precision(17);
  return out;
}

}  // namespace

int CsvTable::column(const std::string& name) const {
  const auto it = std::find(header.begin(), header.end(), name);
  return it == header.end() ? -1 : static_cast<int>(it - header.begin());
}

int CsvTable::require(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw IngestError(path + " row 1: missing column '" + name + "'");
  return c;
}

CsvTable parseCsv(const std::string& text, const std::string& origin) {
  using Tokenizer = boost::tokenizer<boost::escaped_list_separator<char>>;
  CsvTable t;
  t.path = origin;
  std::istringstream in(text);
  std::string line;
  int lineNo = 0;
  while (std::getline(in, line)) {
    ++lineNo;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (boost::algorithm::trim_copy(line).empty()) continue;
    std::vector<std::string> cells;
    try {
      Tokenizer tok(line, boost::escaped_list_separator<char>('\\', ',', '"'));
      for (const auto& cell : tok) cells.push_back(cell);
    } catch (const boost::escaped_list_error& e) {
      throw IngestError(origin + " row " + std::to_string(lineNo) + ": " + e.what());
    }
    if (t.header.empty()) {
      for (auto& c : cells) boost::algorithm::trim(c);
      t.header = std::move(cells);
      std::set<std::string> names(t.header.begin(), t.header.end());
      if (names.size() != t.header.size()) throw IngestError(origin + " row " + std::to_string(lineNo) + ": duplicate column name");
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw IngestError(origin + " row " + std::to_string(lineNo) + ": expected " + std::to_string(t.header.size()) +
                        " fields, found " + std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
    t.lines.push_back(lineNo);
  }
  if (t.header.empty()) throw IngestError(origin + ": empty file");
  return t;
}

CsvTable readCsv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IngestError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parseCsv(buf.str(), path);
}

std::pair<int, int> autoTargets(const Team& team, int shortSeasonLength) {
  if (shortSeasonLength % 2 != 0) {
    throw ConfigError("short season length " + std::to_string(shortSeasonLength) +
                      " is odd; supply explicit home/away targets");
  }
  const int half = shortSeasonLength / 2;
  const int home = half - team.preHomeGames;
  const int away = half - (team.preGames - team.preHomeGames);
  if (home < 0 || away < 0) {
    throw IngestError("team " + std::to_string(team.id) + " (" + team.name + "): " + std::to_string(team.preHomeGames) +
                      " home and " + std::to_string(team.preGames - team.preHomeGames) + " away games played exceed " +
                      std::to_string(half) + " per side; derived targets (" + std::to_string(home) + ", " +
                      std::to_string(away) + ") are negative");
  }
  return {home, away};
}

IngestResult ingest(const IngestPaths& paths, const IngestOptions& options) {
  const CsvTable teamsCsv = readCsv(paths.teams);
  const auto teamRows = denseIds(teamsCsv, teamsCsv.require("team_id"), "team");
  const int cName = teamsCsv.require("name");
  const int cConf = teamsCsv.require("conference");
  const int cDiv = teamsCsv.require("division");
  const int cWins = teamsCsv.require("pre_wins");
  const int cHome = teamsCsv.require("pre_home_played");
  const int cAway = teamsCsv.require("pre_away_played");
  const int n = static_cast<int>(teamRows.size());
  if (n < 2) throw IngestError(paths.teams + ": a league needs at least two teams");

  std::vector<Team> teams(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const std::size_t r = teamRows[static_cast<std::size_t>(i)];
    Team& t = teams[static_cast<std::size_t>(i)];
    t.id = i;
    t.name = teamsCsv.rows[r][static_cast<std::size_t>(cName)];
    try {
      t.conference = conferenceFromString(teamsCsv.rows[r][static_cast<std::size_t>(cConf)]);
    } catch (const DataError& e) {
      throw IngestError(where(teamsCsv, r) + ": " + e.what());
    }
    t.division = teamsCsv.rows[r][static_cast<std::size_t>(cDiv)];
    t.preWins = toInt(teamsCsv, r, cWins);
    const int home = toInt(teamsCsv, r, cHome);
    const int away = toInt(teamsCsv, r, cAway);
    if (home < 0 || away < 0) throw IngestError(where(teamsCsv, r) + ": negative games played");
    t.preHomeGames = home;
    t.preGames = home + away;
    if (t.preWins < 0 || t.preWins > t.preGames) {
      throw IngestError(where(teamsCsv, r) + ": pre_wins must lie in [0, games played]");
    }
  }

  const CsvTable remCsv = readCsv(paths.remaining);
  const auto gameRows = denseIds(remCsv, remCsv.require("game_id"), "game");
  const int cDay = remCsv.require("day");
  const int cHost = remCsv.require("host_id");
  const int cGuest = remCsv.require("guest_id");
  const int cMatch = remCsv.require("match_index");
  const int cProb = remCsv.column("prob");
  std::vector<Game> games(gameRows.size());
  for (std::size_t g = 0; g < gameRows.size(); ++g) {
    const std::size_t r = gameRows[g];
    Game& gm = games[g];
    gm.id = static_cast<int>(g);
    gm.scheduledDay = toInt(remCsv, r, cDay);
    gm.host = toInt(remCsv, r, cHost);
    gm.guest = toInt(remCsv, r, cGuest);
    gm.matchIndex = toInt(remCsv, r, cMatch);
    if (gm.host < 0 || gm.host >= n) throw IngestError(where(remCsv, r) + ": unknown host team " + std::to_string(gm.host));
    if (gm.guest < 0 || gm.guest >= n) throw IngestError(where(remCsv, r) + ": unknown guest team " + std::to_string(gm.guest));
    if (gm.host == gm.guest) throw IngestError(where(remCsv, r) + ": host equals guest");
    if (gm.matchIndex < 1) throw IngestError(where(remCsv, r) + ": match_index must be at least 1");
    if (cProb >= 0) {
      try {
        gm.winProb = admitProbability(toDouble(remCsv, r, cProb), options.probabilityPolicy);
      } catch (const DomainError& e) {
        throw IngestError(where(remCsv, r) + ": " + e.what());
      }
    }
  }

  if (paths.played) {
    const CsvTable played = readCsv(*paths.played);
    const int pHost = played.require("host_id");
    const int pGuest = played.require("guest_id");
    const int pWon = played.require("host_won");
    played.require("game_id");
    played.require("day");
    denseIds(played, played.require("game_id"), "played game");
    std::vector<int> wins(static_cast<std::size_t>(n), 0);
    std::vector<int> home(static_cast<std::size_t>(n), 0);
    std::vector<int> away(static_cast<std::size_t>(n), 0);
    for (std::size_t r = 0; r < played.rows.size(); ++r) {
      const int h = toInt(played, r, pHost);
      const int a = toInt(played, r, pGuest);
      if (h < 0 || h >= n || a < 0 || a >= n) throw IngestError(where(played, r) + ": unknown team reference");
      if (h == a) throw IngestError(where(played, r) + ": host equals guest");
      ++home[static_cast<std::size_t>(h)];
      ++away[static_cast<std::size_t>(a)];
      ++wins[static_cast<std::size_t>(toBit(played, r, pWon) ? h : a)];
    }
    for (int i = 0; i < n; ++i) {
      const Team& t = teams[static_cast<std::size_t>(i)];
      const auto ii = static_cast<std::size_t>(i);
      if (wins[ii] != t.preWins || home[ii] != t.preHomeGames || away[ii] != t.preGames - t.preHomeGames) {
        throw IngestError(where(teamsCsv, teamRows[ii]) + ": team " + std::to_string(i) + " disagrees with " +
                          *paths.played + " (" + std::to_string(wins[ii]) + " wins, " + std::to_string(home[ii]) +
                          " home, " + std::to_string(away[ii]) + " away played)");
      }
    }
  }

  // Full-season length from each team's played plus remaining games.
  std::vector<int> remainingCount(static_cast<std::size_t>(n), 0);
  for (const Game& g : games) {
    ++remainingCount[static_cast<std::size_t>(g.host)];
    ++remainingCount[static_cast<std::size_t>(g.guest)];
  }
  const int fullLength = teams[0].preGames + remainingCount[0];
  for (int i = 1; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    if (teams[ii].preGames + remainingCount[ii] != fullLength) {
      throw IngestError(where(teamsCsv, teamRows[ii]) + ": team " + std::to_string(i) + " has " +
                        std::to_string(teams[ii].preGames) + " played + " + std::to_string(remainingCount[ii]) +
                        " remaining games; team 0 has a season of " + std::to_string(fullLength));
    }
  }

  const int m = options.shortSeasonLength;
  if (m <= 0 || m > fullLength) {
    throw ConfigError("short season length " + std::to_string(m) + " must lie in (0, " + std::to_string(fullLength) + "]");
  }
  if (options.targetMode == TargetMode::Auto) {
    for (int i = 0; i < n; ++i) {
      Team& t = teams[static_cast<std::size_t>(i)];
      try {
        std::tie(t.homeTarget, t.awayTarget) = autoTargets(t, m);
      } catch (const IngestError& e) {
        throw IngestError(where(teamsCsv, teamRows[static_cast<std::size_t>(i)]) + ": " + e.what());
      }
    }
  } else {
    if (!paths.targets) throw ConfigError("explicit targets need a targets file");
    const CsvTable tg = readCsv(*paths.targets);
    const auto rows = denseIds(tg, tg.require("team_id"), "team");
    if (static_cast<int>(rows.size()) != n) {
      throw IngestError(*paths.targets + ": " + std::to_string(rows.size()) + " teams, expected " + std::to_string(n));
    }
    const int cH = tg.require("home_target");
    const int cA = tg.require("away_target");
    for (int i = 0; i < n; ++i) {
      const std::size_t r = rows[static_cast<std::size_t>(i)];
      Team& t = teams[static_cast<std::size_t>(i)];
      t.homeTarget = toInt(tg, r, cH);
      t.awayTarget = toInt(tg, r, cA);
      if (t.homeTarget < 0 || t.awayTarget < 0) throw IngestError(where(tg, r) + ": negative target for team " + std::to_string(i));
    }
  }

  IngestResult result;
  result.state = LeagueState::create(std::move(teams), std::move(games), fullLength, m);
  result.hasProbabilities = cProb >= 0;
  if (paths.probs) {
    result.state = result.state.withProbabilities(readProbs(result.state, *paths.probs, options.probabilityPolicy));
    result.hasProbabilities = true;
  }
  return result;
}

void writeTeamsCsv(const LeagueState& state, const std::string& path) {
  auto out = openOut(path);
  out << "team_id,name,conference,division,pre_wins,pre_home_played,pre_away_played\n";
  for (const Team& t : state.teams()) {
    out << t.id << ',' << field(t.name) << ',' << toString(t.conference) << ',' << field(t.division) << ',' << t.preWins << ','
        << t.preHomeGames << ',' << (t.preGames - t.preHomeGames) << '\n';
  }
}

void writeRemainingCsv(const LeagueState& state, const std::string& path, bool withProbabilities) {
  auto out = openOut(path);
  out << "game_id,day,host_id,guest_id,match_index" << (withProbabilities ? ",prob\n" : "\n");
  for (const Game& g : state.games()) {
    out << g.id << ',' << g.scheduledDay << ',' << g.host << ',' << g.guest << ',' << g.matchIndex;
    if (withProbabilities) out << ',' << g.winProb;
    out << '\n';
  }
}

void writeTargetsCsv(const LeagueState& state, const std::string& path) {
  auto out = openOut(path);
  out << "team_id,home_target,away_target\n";
  for (const Team& t : state.teams()) out << t.id << ',' << t.homeTarget << ',' << t.awayTarget << '\n';
}

void writeProbsCsv(const LeagueState& state, const std::vector<double>& probs, const std::string& path) {
  if (static_cast<int>(probs.size()) != state.numGames()) throw DimensionError("one probability per game expected");
  auto out = openOut(path);
  out << "game_id,prob\n";
  for (int g = 0; g < state.numGames(); ++g) out << g << ',' << probs[static_cast<std::size_t>(g)] << '\n';
}

void writeProbsCsv(const std::vector<int>& gameIds, const std::vector<double>& probs, const std::string& path) {
  if (gameIds.size() != probs.size()) throw DimensionError("one probability per game id expected");
  auto out = openOut(path);
  out << "game_id,prob\n";
  for (std::size_t r = 0; r < probs.size(); ++r) out << gameIds[r] << ',' << probs[r] << '\n';
}

void writeScheduleCsv(const LeagueState& state, const Schedule& schedule, const std::string& path) {
  if (schedule.size() != state.numGames()) throw DimensionError("schedule length differs from the game count");
  auto out = openOut(path);
  out << "game_id,selected\n";
  for (int g = 0; g < state.numGames(); ++g) out << g << ',' << int{schedule.selected[static_cast<std::size_t>(g)]} << '\n';
}

void writeOutcomesCsv(const LeagueState& state, const Scenario& scenario, const std::string& path) {
  if (scenario.size() != state.numGames()) throw DimensionError("scenario length differs from the game count");
  auto out = openOut(path);
  out << "game_id,host_won\n";
  for (int g = 0; g < state.numGames(); ++g) out << g << ',' << int{scenario.hostWon[static_cast<std::size_t>(g)]} << '\n';
}

std::vector<double> readProbs(const LeagueState& state, const std::string& path, ProbabilityPolicy policy) {
  const CsvTable t = readCsv(path);
  std::vector<double> probs(static_cast<std::size_t>(state.numGames()));
  perGame(state, t, "prob", [&](int g, std::size_t r, int col) {
    try {
      probs[static_cast<std::size_t>(g)] = admitProbability(toDouble(t, r, col), policy);
    } catch (const DomainError& e) {
      throw IngestError(where(t, r) + ": " + e.what());
    }
  });
  return probs;
}

Schedule readSchedule(const LeagueState& state, const std::string& path) {
  const CsvTable t = readCsv(path);
  Schedule s = Schedule::none(state.numGames());
  perGame(state, t, "selected", [&](int g, std::size_t r, int col) {
    s.selected[static_cast<std::size_t>(g)] = static_cast<std::uint8_t>(toBit(t, r, col));
  });
  return s;
}

Scenario readOutcomes(const LeagueState& state, const std::string& path) {
  const CsvTable t = readCsv(path);
  Scenario s{std::vector<std::uint8_t>(static_cast<std::size_t>(state.numGames()), 0)};
  perGame(state, t, "host_won", [&](int g, std::size_t r, int col) {
    s.hostWon[static_cast<std::size_t>(g)] = static_cast<std::uint8_t>(toBit(t, r, col));
  });
  return s;
}

FeatureDataset readFeatures(const std::string& path, bool labelled) {
  const CsvTable t = readCsv(path);
  const int cId = t.require("game_id");
  const int cLabel = labelled ? t.require("label") : t.column("label");
  std::vector<int> featureCols;
  for (int c = 0; c < static_cast<int>(t.header.size()); ++c) {
    if (c != cId && c != cLabel) featureCols.push_back(c);
  }
  if (featureCols.empty()) throw IngestError(path + " row 1: no feature columns");
  FeatureDataset d;
  d.features.resize(static_cast<Eigen::Index>(t.rows.size()), static_cast<Eigen::Index>(featureCols.size()));
  std::set<int> ids;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const int id = toInt(t, r, cId);
    if (!ids.insert(id).second) throw IngestError(where(t, r) + ": duplicate game id " + std::to_string(id));
    d.gameIds.push_back(id);
    if (labelled) d.labels.push_back(toBit(t, r, cLabel));
    for (std::size_t k = 0; k < featureCols.size(); ++k) {
      d.features(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(k)) = toDouble(t, r, featureCols[k]);
    }
  }
  return d;
}

}  // namespace shortseason
