#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "shortseason/league.hpp"

namespace shortseason {

// Deterministic equivalent of the expected squared win-percentage distance
//
//   f(x) = sum_i (mu_i(x) - muHat_i)^2 + alpha * v_i(x) + vHat_i,
//   mu_i(x) = (y0_i + sum_{home} p_g x_g + sum_{away} (1 - p_g) x_g) / m,
//   v_i(x)  = sum_{g of i} p_g (1 - p_g) x_g / m^2,     alpha = 1 - 2m / m-hat.
//
// For binary x this equals E[sum_i (y_i(x) - yHat_i)^2] exactly. Fractional x
// uses the same expression (v linear in x), which is the continuous
// relaxation the Frank-Wolfe solver works on.
class PwObjectiveModel {
 public:
  static PwObjectiveModel build(const LeagueState& state);

  const LeagueState& state() const { return state_; }
  const std::vector<double>& muHat() const { return muHat_; }
  const std::vector<double>& vHat() const { return vHat_; }
  const std::vector<double>& gameVariance() const { return gameVar_; }
  double alpha() const { return alpha_; }
  int numGames() const { return state_.numGames(); }

  // Per-team mean and variance of the shortened-season win percentage.
  void moments(std::span<const double> x, std::vector<double>& mu, std::vector<double>& v) const;

  double evaluate(std::span<const double> x) const;
  double evaluate(const Schedule& schedule) const;
  std::vector<double> gradient(std::span<const double> x) const;
  void gradient(std::span<const double> x, std::span<double> out) const;

  // c such that f(x + t d) = f(x) + t grad(x)'d + t^2 c for every x and t.
  double directionalCurvature(std::span<const double> direction) const;

 private:
  void checkBox(std::span<const double> x) const;

  LeagueState state_;
  std::vector<double> p_;
  std::vector<double> gameVar_;
  std::vector<double> muHat_;
  std::vector<double> vHat_;
  std::vector<double> y0_;
  double alpha_ = 0.0;
  double m_ = 1.0;
};

struct McEstimate {
  double mean = 0.0;
  double stderr = 0.0;
  std::int64_t samples = 0;
};

// Monte Carlo estimate of E[sum_i (y_i(x, xi) - yHat_i(xi))^2] for a feasible
// integral schedule. Samples are drawn in blocks of kMcBlock, each block from
// its own stream derived from (seed, block index); per-block partial sums are
// combined in block order, so the parallel and serial kernels agree bit for bit.
inline constexpr std::int64_t kMcBlock = 1024;

McEstimate mcEstimate(const LeagueState& state, const Schedule& x, std::int64_t samples, std::uint64_t seed);
McEstimate mcEstimateSerial(const LeagueState& state, const Schedule& x, std::int64_t samples, std::uint64_t seed);

}  // namespace shortseason
