#include <cmath>
#include <numbers>

#include "doctest.h"
#include "shortseason/errors.hpp"
#include "shortseason/predictor.hpp"
#include "shortseason/random.hpp"
#include "shortseason/synthetic.hpp"

using namespace shortseason;

namespace {

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

// Rows drawn from uniform [-2, 2] features with labels from a known logistic model.
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

}  // namespace

TEST_CASE("log loss") {
  const std::vector<double> half(101, 0.5);
  std::vector<int> labels(101);
  for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<int>(i % 3 == 0);
  CHECK(logLoss(half, labels) == std::numbers::ln2);

  const std::vector<double> perfect{1.0 - kProbFloor, kProbFloor, 1.0 - kProbFloor};
  CHECK(logLoss(perfect, std::vector<int>{1, 0, 1}) == doctest::Approx(1e-6).epsilon(1e-5));

  auto engine = streamEngine(1, 0);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> p(50);
    std::vector<int> y(50);
    double direct = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      p[i] = 0.001 + 0.998 * uniform01(engine);
      y[i] = bernoulli(engine, 0.5);
      direct -= y[i] * std::log(p[i]) + (1 - y[i]) * std::log(1.0 - p[i]);
    }
    CHECK(std::abs(logLoss(p, y) - direct / 50.0) < 1e-12);
  }
  CHECK_THROWS_AS(logLoss(std::vector<double>{1.0}, std::vector<int>{1}), DomainError);
  CHECK_THROWS_AS(logLoss(std::vector<double>{0.0}, std::vector<int>{0}), DomainError);
  CHECK_THROWS_AS(logLoss(std::vector<double>{0.5, 0.5}, std::vector<int>{1}), DimensionError);
}

TEST_CASE("AUC and accuracy") {
  CHECK(auc(std::vector<double>{0.1, 0.2, 0.8, 0.9}, std::vector<int>{0, 0, 1, 1}) == 1.0);
  CHECK(auc(std::vector<double>{0.3, 0.3, 0.3, 0.3}, std::vector<int>{0, 1, 0, 1}) == 0.5);
  CHECK(accuracy(std::vector<double>{0.1, 0.6, 0.5, 0.4}, std::vector<int>{0, 1, 0, 0}) == 0.75);
  CHECK_THROWS_AS(auc(std::vector<double>{0.1, 0.2}, std::vector<int>{1, 1}), DegenerateDataError);

  auto engine = streamEngine(2, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + uniformIndex(engine, 40);
    std::vector<double> p(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      p[i] = static_cast<double>(uniformIndex(engine, 10)) / 10.0;  // coarse grid forces ties
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
    CHECK(std::abs(auc(p, y) - wins / pairs) < 1e-12);
  }
}

TEST_CASE("logistic objective gradient against central differences") {
  const FeatureDataset d = wellSpecified(200, 3, {1.0, -2.0, 0.5}, 0.3);
  auto engine = streamEngine(3, 1);
  int worst = 0;
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
      fd(j) = (logisticObjective(d.features, d.labels, wp, bp, 0.7) - logisticObjective(d.features, d.labels, wm, bm, 0.7)) / (2 * h);
    }
    const double rel = (g - fd).norm() / std::max(g.norm(), 1e-12);
    worst += rel >= 1e-6;
  }
  CHECK(worst == 0);
}

TEST_CASE("fitting toy data") {
  FeatureDataset d;
  d.features.resize(20, 2);
  for (int i = 0; i < 20; ++i) {
    d.features(i, 0) = i < 10 ? 0.04 * i : 0.6 + 0.04 * (i - 10);
    d.features(i, 1) = 3.0;  // constant
    d.labels.push_back(i >= 10);
  }
  const TrainedModel m = fitLogistic(d, {.l2 = 1.0});
  const auto p = predictProba(m, d.features);
  CHECK(accuracy(p, d.labels) == 1.0);
  CHECK(m.weights.allFinite());
  CHECK(std::abs(m.weights(1)) < 1e-12);

  // Never worse than the base rate on its own training rows.
  const std::vector<double> base(20, 0.5);
  CHECK(logLoss(p, d.labels) <= logLoss(base, d.labels));

  FeatureDataset single = d;
  for (int& y : single.labels) y = 1;
  CHECK_THROWS_AS(fitLogistic(single), DegenerateDataError);
}

TEST_CASE("weights of a known generating model are recovered") {
  const FeatureDataset d = wellSpecified(50000, 4, {2.0, -1.0}, 0.5);
  const TrainedModel m = fitLogistic(d, {.l2 = 0.0});
  const auto [w, b] = rawCoefficients(m);
  MESSAGE("recovered w = (" << w(0) << ", " << w(1) << "), b = " << b);
  CHECK(std::abs(w(0) - 2.0) / 2.0 < 0.05);
  CHECK(std::abs(w(1) + 1.0) / 1.0 < 0.05);
  CHECK(std::abs(b - 0.5) / 0.5 < 0.05);
}

TEST_CASE("prediction behavior") {
  const FeatureDataset d = wellSpecified(500, 5, {1.5, -0.5}, 0.0);
  TrainedModel m = fitLogistic(d);
  TrainedModel zero = m;
  zero.weights.setZero();
  zero.intercept = 0.0;
  CHECK(predictProba(zero, std::vector<double>{0.3, -1.0}) == 0.5);

  double prev = 0.0;
  for (double x = -3.0; x <= 3.0; x += 0.5) {
    const double p = predictProba(m, std::vector<double>{x, 0.0});
    CHECK(p >= prev);
    prev = p;
  }
  TrainedModel id = m;
  id.calibration = Platt{1.0, 0.0};
  const auto a = predictProba(m, d.features);
  const auto c = predictProba(id, d.features);
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == c[i]);

  TrainedModel extreme = m;
  extreme.weights *= 1e6;
  for (double p : predictProba(extreme, d.features)) {
    CHECK(p >= kProbFloor);
    CHECK(p <= 1.0 - kProbFloor);
  }
  CHECK_THROWS_AS(predictProba(m, std::vector<double>{1.0}), DimensionError);
}

TEST_CASE("principal components") {
  auto engine = streamEngine(6, 0);
  FeatureDataset d;
  d.features.resize(400, 6);
  for (int i = 0; i < 400; ++i) {
    const double a = standardNormal(engine);
    const double b = standardNormal(engine);
    // Two latent factors plus small noise.
    for (int j = 0; j < 6; ++j) d.features(i, j) = (j % 2 ? a : b) * (1.0 + j) + 0.05 * standardNormal(engine);
    d.labels.push_back(bernoulli(engine, logistic(a - b)));
  }
  const TrainedModel m = fitLogistic(d, {.usePca = true});
  REQUIRE(m.pca.has_value());
  CHECK(m.pca->explained >= 0.90);
  CHECK(m.pca->components.cols() <= 3);
  // Columns are orthonormal.
  const Eigen::MatrixXd gram = m.pca->components.transpose() * m.pca->components;
  CHECK((gram - Eigen::MatrixXd::Identity(gram.rows(), gram.cols())).norm() < 1e-10);
  CHECK(auc(predictProba(m, d.features), d.labels) > 0.75);
  CHECK_THROWS_AS(fitPca(d.features, 0.0), ConfigError);
}

TEST_CASE("Platt scaling") {
  auto engine = streamEngine(7, 0);
  std::vector<double> s(10000);
  std::vector<double> doubled(10000);
  std::vector<int> y(10000);
  for (std::size_t i = 0; i < s.size(); ++i) {
    s[i] = 1.5 * standardNormal(engine);
    doubled[i] = 2.0 * s[i];
    y[i] = bernoulli(engine, logistic(s[i]));
  }
  const Platt cal = fitPlatt(s, y);
  MESSAGE("calibrated scores: A = " << cal.a << ", B = " << cal.b);
  CHECK(std::abs(cal.a - 1.0) < 0.1);
  CHECK(std::abs(cal.b) < 0.1);
  const Platt over = fitPlatt(doubled, y);
  MESSAGE("doubled scores: A = " << over.a);
  CHECK(std::abs(over.a - 0.5) < 0.05);

  const FeatureDataset train = wellSpecified(2000, 8, {1.0, 1.0}, 0.0);
  const FeatureDataset held = wellSpecified(1000, 9, {1.0, 1.0}, 0.0);
  const TrainedModel m = fitLogistic(train);
  const TrainedModel c = calibratePlatt(m, held, 5, 1);
  REQUIRE(c.calibration.has_value());
  CHECK(c.calibration->a > 0.0);
  CHECK(auc(predictProba(m, held.features), held.labels) == auc(predictProba(c, held.features), held.labels));
  CHECK_THROWS_AS(calibratePlatt(m, held, 0), ConfigError);
}

TEST_CASE("cross-validation") {
  const FeatureDataset d = wellSpecified(600, 10, {1.0, -1.0, 0.5}, 0.2);
  const auto a = crossValidate(d, {}, 5, 3);
  const auto b = crossValidate(d, {}, 5, 3);
  REQUIRE(a.folds.size() == 5);
  for (std::size_t f = 0; f < 5; ++f) CHECK(a.folds[f].logLoss == b.folds[f].logLoss);
  CHECK(a.meanLogLoss == b.meanLogLoss);
  CHECK(crossValidate(d, {}, 1, 3).folds.size() == 1);
  CHECK_THROWS_AS(crossValidate(d.subset(std::vector<int>{0, 1, 2, 3, 4}), {}, 5, 3), DataError);

  // Learning curve: more training rows, lower validation loss.
  std::vector<double> curve;
  for (int n : {30, 150, 1500}) {
    double total = 0.0;
    for (std::uint64_t rep = 0; rep < 100; ++rep) total += crossValidate(wellSpecified(n, 20 + rep, {2.0, -1.0, 0.5}, 0.2), {.l2 = 0.01}, 5, rep).meanLogLoss;
    curve.push_back(total / 100);
  }
  MESSAGE("learning curve " << curve[0] << " " << curve[1] << " " << curve[2]);
  CHECK(curve[0] > curve[1]);
  CHECK(curve[1] > curve[2]);
}
