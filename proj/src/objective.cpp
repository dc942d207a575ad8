#include "shortseason/objective.hpp"

#include <cmath>
#include <string>

#include "shortseason/errors.hpp"
#include "shortseason/random.hpp"

namespace shortseason {

PwObjectiveModel PwObjectiveModel::build(const LeagueState& state) {
  PwObjectiveModel model;
  model.state_ = state;
  const int n = state.numTeams();
  const double mHat = state.fullSeasonLength();
  model.m_ = state.shortSeasonLength();
  model.alpha_ = 1.0 - 2.0 * model.m_ / mHat;
  model.p_ = state.probabilities();
  model.gameVar_.resize(model.p_.size());
  for (std::size_t g = 0; g < model.p_.size(); ++g) model.gameVar_[g] = model.p_[g] * (1.0 - model.p_[g]);

  model.muHat_.assign(static_cast<std::size_t>(n), 0.0);
  model.vHat_.assign(static_cast<std::size_t>(n), 0.0);
  model.y0_.assign(static_cast<std::size_t>(n), 0.0);
  for (int i = 0; i < n; ++i) {
    const auto ii = static_cast<std::size_t>(i);
    model.y0_[ii] = state.team(i).preWins;
    double wins = model.y0_[ii];
    double var = 0.0;
    for (int g : state.homeGames(i)) {
      wins += model.p_[static_cast<std::size_t>(g)];
      var += model.gameVar_[static_cast<std::size_t>(g)];
    }
    for (int g : state.awayGames(i)) {
      wins += 1.0 - model.p_[static_cast<std::size_t>(g)];
      var += model.gameVar_[static_cast<std::size_t>(g)];
    }
    model.muHat_[ii] = wins / mHat;
    model.vHat_[ii] = var / (mHat * mHat);
  }
  return model;
}

void PwObjectiveModel::checkBox(std::span<const double> x) const {
  if (static_cast<int>(x.size()) != numGames()) {
    throw DimensionError("x has " + std::to_string(x.size()) + " entries for " + std::to_string(numGames()) + " games");
  }
  for (std::size_t g = 0; g < x.size(); ++g) {
    if (!(x[g] >= 0.0 && x[g] <= 1.0)) {
      throw DomainError("x[" + std::to_string(g) + "] = " + std::to_string(x[g]) + " outside [0, 1]");
    }
  }
}

void PwObjectiveModel::moments(std::span<const double> x, std::vector<double>& mu, std::vector<double>& v) const {
  checkBox(x);
  mu = y0_;
  v.assign(mu.size(), 0.0);
  for (const Game& g : state_.games()) {
    const auto gi = static_cast<std::size_t>(g.id);
    const double xg = x[gi];
    if (xg == 0.0) continue;
    mu[static_cast<std::size_t>(g.host)] += p_[gi] * xg;
    mu[static_cast<std::size_t>(g.guest)] += (1.0 - p_[gi]) * xg;
    v[static_cast<std::size_t>(g.host)] += gameVar_[gi] * xg;
    v[static_cast<std::size_t>(g.guest)] += gameVar_[gi] * xg;
  }
  const double m2 = m_ * m_;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    mu[i] /= m_;
    v[i] /= m2;
  }
}

double PwObjectiveModel::evaluate(std::span<const double> x) const {
  std::vector<double> mu;
  std::vector<double> v;
  moments(x, mu, v);
  double f = 0.0;
  for (std::size_t i = 0; i < mu.size(); ++i) {
    const double d = mu[i] - muHat_[i];
    f += d * d + alpha_ * v[i] + vHat_[i];
  }
  return f;
}

double PwObjectiveModel::evaluate(const Schedule& schedule) const {
  const auto x = schedule.asReal();
  return evaluate(std::span<const double>(x));
}

std::vector<double> PwObjectiveModel::gradient(std::span<const double> x) const {
  std::vector<double> out(x.size());
  gradient(x, out);
  return out;
}

void PwObjectiveModel::gradient(std::span<const double> x, std::span<double> out) const {
  if (out.size() != x.size()) throw DimensionError("gradient output has the wrong length");
  std::vector<double> mu;
  std::vector<double> v;
  moments(x, mu, v);
  const double scale = 2.0 / m_;
  const double varScale = alpha_ * 2.0 / (m_ * m_);
  for (const Game& g : state_.games()) {
    const auto gi = static_cast<std::size_t>(g.id);
    const double dh = mu[static_cast<std::size_t>(g.host)] - muHat_[static_cast<std::size_t>(g.host)];
    const double da = mu[static_cast<std::size_t>(g.guest)] - muHat_[static_cast<std::size_t>(g.guest)];
    out[gi] = scale * (dh * p_[gi] + da * (1.0 - p_[gi])) + varScale * gameVar_[gi];
  }
}

double PwObjectiveModel::directionalCurvature(std::span<const double> direction) const {
  if (static_cast<int>(direction.size()) != numGames()) throw DimensionError("direction has the wrong length");
  std::vector<double> a(static_cast<std::size_t>(state_.numTeams()), 0.0);
  for (const Game& g : state_.games()) {
    const auto gi = static_cast<std::size_t>(g.id);
    a[static_cast<std::size_t>(g.host)] += p_[gi] * direction[gi];
    a[static_cast<std::size_t>(g.guest)] += (1.0 - p_[gi]) * direction[gi];
  }
  double c = 0.0;
  for (double ai : a) c += (ai / m_) * (ai / m_);
  return c;
}

namespace {

struct McKernel {
  const LeagueState& state;
  std::vector<std::uint8_t> selected;
  std::vector<double> p;

  // Sum and sum of squares of the squared distance over one block.
  void block(std::uint64_t seed, std::int64_t b, std::int64_t count, double& sum, double& sumSq) const {
    auto engine = streamEngine(seed, static_cast<std::uint64_t>(b));
    const int n = state.numTeams();
    const double m = state.shortSeasonLength();
    const double mHat = state.fullSeasonLength();
    std::vector<int> shortWins(static_cast<std::size_t>(n));
    std::vector<int> fullWins(static_cast<std::size_t>(n));
    sum = 0.0;
    sumSq = 0.0;
    for (std::int64_t k = 0; k < count; ++k) {
      for (int i = 0; i < n; ++i) {
        shortWins[static_cast<std::size_t>(i)] = fullWins[static_cast<std::size_t>(i)] = state.team(i).preWins;
      }
      for (const Game& g : state.games()) {
        const auto gi = static_cast<std::size_t>(g.id);
        const auto winner = static_cast<std::size_t>(bernoulli(engine, p[gi]) ? g.host : g.guest);
        ++fullWins[winner];
        if (selected[gi]) ++shortWins[winner];
      }
      double d2 = 0.0;
      for (std::size_t i = 0; i < shortWins.size(); ++i) {
        const double d = shortWins[i] / m - fullWins[i] / mHat;
        d2 += d * d;
      }
      sum += d2;
      sumSq += d2 * d2;
    }
  }
};

McEstimate finish(const std::vector<double>& sums, const std::vector<double>& sumSqs, std::int64_t samples) {
  double sum = 0.0;
  double sumSq = 0.0;
  for (std::size_t b = 0; b < sums.size(); ++b) {
    sum += sums[b];
    sumSq += sumSqs[b];
  }
  McEstimate est;
  est.samples = samples;
  est.mean = sum / static_cast<double>(samples);
  if (samples > 1) {
    const double var = std::max(0.0, (sumSq - sum * est.mean) / static_cast<double>(samples - 1));
    est.stderr = std::sqrt(var / static_cast<double>(samples));
  }
  return est;
}

McKernel prepare(const LeagueState& state, const Schedule& x, std::int64_t samples) {
  if (samples < 1) throw ConfigError("mcEstimate needs at least one sample");
  requireFeasible(state, x);
  return McKernel{state, x.selected, state.probabilities()};
}

}  // namespace

McEstimate mcEstimate(const LeagueState& state, const Schedule& x, std::int64_t samples, std::uint64_t seed) {
  const McKernel kernel = prepare(state, x, samples);
  const std::int64_t blocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<double> sums(static_cast<std::size_t>(blocks));
  std::vector<double> sumSqs(static_cast<std::size_t>(blocks));
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::int64_t count = std::min(kMcBlock, samples - b * kMcBlock);
    kernel.block(seed, b, count, sums[static_cast<std::size_t>(b)], sumSqs[static_cast<std::size_t>(b)]);
  }
  return finish(sums, sumSqs, samples);
}

McEstimate mcEstimateSerial(const LeagueState& state, const Schedule& x, std::int64_t samples, std::uint64_t seed) {
  const McKernel kernel = prepare(state, x, samples);
  const std::int64_t blocks = (samples + kMcBlock - 1) / kMcBlock;
  std::vector<double> sums(static_cast<std::size_t>(blocks));
  std::vector<double> sumSqs(static_cast<std::size_t>(blocks));
  for (std::int64_t b = 0; b < blocks; ++b) {
    const std::int64_t count = std::min(kMcBlock, samples - b * kMcBlock);
    kernel.block(seed, b, count, sums[static_cast<std::size_t>(b)], sumSqs[static_cast<std::size_t>(b)]);
  }
  return finish(sums, sumSqs, samples);
}

}  // namespace shortseason
