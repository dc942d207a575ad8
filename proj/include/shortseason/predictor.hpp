#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

namespace shortseason {

struct FeatureDataset {
  Eigen::MatrixXd features;  // one row per game
  std::vector<int> labels;   // 1 = host won
  std::vector<int> gameIds;

  int rows() const { return static_cast<int>(features.rows()); }
  FeatureDataset subset(std::span<const int> rows) const;
};

struct Pca {
  Eigen::VectorXd mean;
  Eigen::MatrixXd components;  // columns, by decreasing variance
  double explained = 0.0;      // fraction of variance kept
};

struct Platt {
  double a = 1.0;
  double b = 0.0;
};

struct TrainedModel {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  Eigen::VectorXd featureMin;
  Eigen::VectorXd featureMax;
  std::optional<Pca> pca;
  std::optional<Platt> calibration;
};

struct FitConfig {
  double l2 = 1.0;
  bool usePca = false;
  double pcaVariance = 0.90;
  double gradientTol = 1e-8;
  int maxIterations = 10000;
};

// Mean log loss of sigma(Z w + b) plus l2 ||w||^2 / 2 and its gradient
// (weights first, intercept last).
double logisticObjective(const Eigen::MatrixXd& z, std::span<const int> labels, const Eigen::VectorXd& w, double b,
                         double l2, Eigen::VectorXd* gradient = nullptr);

// Scales to [0, 1] with the training min/max (clamping new rows), projects
// on the principal components when enabled and fits by gradient descent
// with Armijo backtracking.
TrainedModel fitLogistic(const FeatureDataset& data, const FitConfig& config = {});

// Model inputs after scaling and projection.
Eigen::MatrixXd transformFeatures(const TrainedModel& model, const Eigen::MatrixXd& raw);
// Linear score w'z + b before the sigmoid and calibration.
Eigen::VectorXd rawScores(const TrainedModel& model, const Eigen::MatrixXd& raw);
std::vector<double> predictProba(const TrainedModel& model, const Eigen::MatrixXd& raw);
double predictProba(const TrainedModel& model, std::span<const double> row);

// Weights and intercept in the units of the unscaled features (no PCA).
std::pair<Eigen::VectorXd, double> rawCoefficients(const TrainedModel& model);

Pca fitPca(const Eigen::MatrixXd& scaled, double varianceFraction);

double logLoss(std::span<const double> probs, std::span<const int> labels);
double auc(std::span<const double> probs, std::span<const int> labels);
double accuracy(std::span<const double> probs, std::span<const int> labels, double threshold = 0.5);

// Fits sigma(a s + b) on raw held-out scores by Newton's method.
Platt fitPlatt(std::span<const double> scores, std::span<const int> labels);
// Averages fitPlatt over `splits` random 70% subsamples of the held-out set.
TrainedModel calibratePlatt(const TrainedModel& model, const FeatureDataset& heldOut, int splits = 5,
                            std::uint64_t seed = 0);

struct FoldMetrics {
  double logLoss = 0.0;
  double accuracy = 0.0;
  double auc = 0.0;  // NaN when the validation rows hold one class
};

struct CvResult {
  std::vector<FoldMetrics> folds;
  double meanLogLoss = 0.0;
  double meanAccuracy = 0.0;
  double meanAuc = 0.0;  // over folds where it is defined
};

// k random train/validation splits, each validating on `validationFraction`
// of the rows.
CvResult crossValidate(const FeatureDataset& data, const FitConfig& config, int k = 5, std::uint64_t seed = 0,
                       double validationFraction = 0.30);

constexpr double kProbFloor = 1e-6;

}  // namespace shortseason
