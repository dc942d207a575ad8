#include "shortseason/predictor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "shortseason/errors.hpp"
#include "shortseason/random.hpp"

namespace shortseason {

namespace {

double sigmoid(double t) {
  if (t >= 0.0) return 1.0 / (1.0 + std::exp(-t));
  const double e = std::exp(t);
  return e / (1.0 + e);
}

// log(1 + e^t) without overflow.
double softplus(double t) { return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t)); }

double clampProb(double p) { return std::clamp(p, kProbFloor, 1.0 - kProbFloor); }

void requireAligned(std::size_t a, std::size_t b) {
  if (a != b) throw DimensionError("predictions and labels differ in length (" + std::to_string(a) + " vs " + std::to_string(b) + ")");
  if (a == 0) throw DataError("no predictions to score");
}

void requireBothClasses(std::span<const int> labels, int minEach, const std::string& what) {
  int pos = 0;
  for (int y : labels) {
    if (y != 0 && y != 1) throw DataError("labels must be 0 or 1");
    pos += y;
  }
  const int neg = static_cast<int>(labels.size()) - pos;
  if (pos < minEach || neg < minEach) {
    throw DegenerateDataError(what + " needs at least " + std::to_string(minEach) + " rows of each class (" +
                              std::to_string(pos) + " positive, " + std::to_string(neg) + " negative)");
  }
}

Eigen::MatrixXd scale(const TrainedModel& m, const Eigen::MatrixXd& raw) {
  if (raw.cols() != m.featureMin.size()) {
    throw DimensionError("expected " + std::to_string(m.featureMin.size()) + " features, got " + std::to_string(raw.cols()));
  }
  Eigen::MatrixXd out(raw.rows(), raw.cols());
  for (Eigen::Index j = 0; j < raw.cols(); ++j) {
    const double lo = m.featureMin(j);
    const double range = m.featureMax(j) - lo;
    for (Eigen::Index i = 0; i < raw.rows(); ++i) {
      out(i, j) = range > 0.0 ? std::clamp((raw(i, j) - lo) / range, 0.0, 1.0) : 0.0;
    }
  }
  return out;
}

}  // namespace

FeatureDataset FeatureDataset::subset(std::span<const int> rows) const {
  FeatureDataset out;
  out.features.resize(static_cast<Eigen::Index>(rows.size()), features.cols());
  for (std::size_t k = 0; k < rows.size(); ++k) {
    const int r = rows[k];
    out.features.row(static_cast<Eigen::Index>(k)) = features.row(r);
    out.labels.push_back(labels[static_cast<std::size_t>(r)]);
    if (!gameIds.empty()) out.gameIds.push_back(gameIds[static_cast<std::size_t>(r)]);
  }
  return out;
}

double logisticObjective(const Eigen::MatrixXd& z, std::span<const int> labels, const Eigen::VectorXd& w, double b,
                         double l2, Eigen::VectorXd* gradient) {
  const auto n = z.rows();
  if (static_cast<std::size_t>(n) != labels.size() || z.cols() != w.size()) throw DimensionError("logistic inputs disagree in size");
  const Eigen::VectorXd t = (z * w).array() + b;
  Eigen::VectorXd resid(n);
  double loss = 0.0;
  for (Eigen::Index i = 0; i < n; ++i) {
    const int y = labels[static_cast<std::size_t>(i)];
    loss += softplus(t(i)) - y * t(i);
    resid(i) = sigmoid(t(i)) - y;
  }
  loss = loss / static_cast<double>(n) + 0.5 * l2 * w.squaredNorm();
  if (gradient != nullptr) {
    gradient->resize(w.size() + 1);
    gradient->head(w.size()) = z.transpose() * resid / static_cast<double>(n) + l2 * w;
    (*gradient)(w.size()) = resid.mean();
  }
  return loss;
}

Pca fitPca(const Eigen::MatrixXd& scaled, double varianceFraction) {
  if (!(varianceFraction > 0.0 && varianceFraction <= 1.0)) throw ConfigError("PCA variance fraction must be in (0, 1]");
  if (scaled.rows() < 2) throw DataError("PCA needs at least two rows");
  Pca p;
  p.mean = scaled.colwise().mean();
  const Eigen::MatrixXd centered = scaled.rowwise() - p.mean.transpose();
  const Eigen::MatrixXd cov = centered.transpose() * centered / static_cast<double>(scaled.rows() - 1);
  // For a symmetric positive semi-definite matrix the singular vectors are
  // eigenvectors, with singular values sorted in decreasing order.
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(cov, Eigen::ComputeFullU);
  const Eigen::VectorXd ev = svd.singularValues();
  const double total = ev.sum();
  Eigen::Index keep = ev.size();
  double acc = 0.0;
  if (total > 0.0) {
    for (Eigen::Index k = 0; k < ev.size(); ++k) {
      acc += ev(k);
      if (acc / total >= varianceFraction - 1e-12) {
        keep = k + 1;
        break;
      }
    }
  }
  p.components = svd.matrixU().leftCols(keep);
  p.explained = total > 0.0 ? ev.head(keep).sum() / total : 1.0;
  return p;
}

Eigen::MatrixXd transformFeatures(const TrainedModel& model, const Eigen::MatrixXd& raw) {
  Eigen::MatrixXd z = scale(model, raw);
  if (model.pca) z = (z.rowwise() - model.pca->mean.transpose()) * model.pca->components;
  return z;
}

TrainedModel fitLogistic(const FeatureDataset& data, const FitConfig& config) {
  if (data.rows() != static_cast<int>(data.labels.size())) throw DimensionError("feature rows and labels differ in count");
  if (data.features.cols() < 1) throw DataError("no feature columns");
  if (!data.features.allFinite()) throw DataError("features contain missing or non-finite values");
  if (config.l2 < 0.0 || config.maxIterations < 1) throw ConfigError("invalid logistic regression settings");
  requireBothClasses(data.labels, 2, "logistic regression");

  TrainedModel m;
  m.featureMin = data.features.colwise().minCoeff();
  m.featureMax = data.features.colwise().maxCoeff();
  if (config.usePca) m.pca = fitPca(scale(m, data.features), config.pcaVariance);
  const Eigen::MatrixXd z = transformFeatures(m, data.features);

  Eigen::VectorXd w = Eigen::VectorXd::Zero(z.cols());
  double b = 0.0;
  Eigen::VectorXd g;
  double f = logisticObjective(z, data.labels, w, b, config.l2, &g);
  double step = 1.0;
  for (int it = 0; it < config.maxIterations; ++it) {
    const double gg = g.squaredNorm();
    if (std::sqrt(gg) <= config.gradientTol) break;
    step = std::min(step * 2.0, 1e6);
    Eigen::VectorXd wNext;
    double bNext = 0.0;
    double fNext = 0.0;
    for (;;) {
      wNext = w - step * g.head(w.size());
      bNext = b - step * g(w.size());
      fNext = logisticObjective(z, data.labels, wNext, bNext, config.l2);
      if (fNext <= f - 1e-4 * step * gg || step < 1e-16) break;
      step *= 0.5;
    }
    if (fNext >= f) break;
    w = std::move(wNext);
    b = bNext;
    f = logisticObjective(z, data.labels, w, b, config.l2, &g);
  }
  m.weights = w;
  m.intercept = b;
  return m;
}

Eigen::VectorXd rawScores(const TrainedModel& model, const Eigen::MatrixXd& raw) {
  return (transformFeatures(model, raw) * model.weights).array() + model.intercept;
}

std::vector<double> predictProba(const TrainedModel& model, const Eigen::MatrixXd& raw) {
  const Eigen::VectorXd s = rawScores(model, raw);
  std::vector<double> out(static_cast<std::size_t>(s.size()));
  for (Eigen::Index i = 0; i < s.size(); ++i) {
    const double t = model.calibration ? model.calibration->a * s(i) + model.calibration->b : s(i);
    out[static_cast<std::size_t>(i)] = clampProb(sigmoid(t));
  }
  return out;
}

double predictProba(const TrainedModel& model, std::span<const double> row) {
  Eigen::MatrixXd raw(1, static_cast<Eigen::Index>(row.size()));
  for (std::size_t j = 0; j < row.size(); ++j) raw(0, static_cast<Eigen::Index>(j)) = row[j];
  return predictProba(model, raw).front();
}

std::pair<Eigen::VectorXd, double> rawCoefficients(const TrainedModel& model) {
  if (model.pca) throw ConfigError("raw coefficients are only defined without PCA");
  Eigen::VectorXd w(model.weights.size());
  double b = model.intercept;
  for (Eigen::Index j = 0; j < w.size(); ++j) {
    const double range = model.featureMax(j) - model.featureMin(j);
    w(j) = range > 0.0 ? model.weights(j) / range : 0.0;
    b -= w(j) * model.featureMin(j);
  }
  return {w, b};
}

double logLoss(std::span<const double> probs, std::span<const int> labels) {
  requireAligned(probs.size(), labels.size());
  // Extended-precision sum so that a constant prediction scores exactly.
  long double s = 0.0L;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = probs[i];
    if (!(p > 0.0 && p < 1.0)) throw DomainError("probability " + std::to_string(p) + " outside (0, 1); clamp before scoring");
    s += labels[i] ? std::log(p) : std::log(1.0 - p);
  }
  return static_cast<double>(-s / static_cast<long double>(probs.size()));
}

double auc(std::span<const double> probs, std::span<const int> labels) {
  requireAligned(probs.size(), labels.size());
  requireBothClasses(labels, 1, "AUC");
  std::vector<std::size_t> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return probs[a] < probs[b]; });
  // Mid-ranks: tied scores share the average of their positions.
  double posRankSum = 0.0;
  double pos = 0.0;
  for (std::size_t k = 0; k < order.size();) {
    std::size_t e = k;
    while (e < order.size() && probs[order[e]] == probs[order[k]]) ++e;
    const double midRank = 0.5 * static_cast<double>(k + 1 + e);
    for (std::size_t t = k; t < e; ++t) {
      if (labels[order[t]]) {
        posRankSum += midRank;
        pos += 1.0;
      }
    }
    k = e;
  }
  const double neg = static_cast<double>(probs.size()) - pos;
  return (posRankSum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

double accuracy(std::span<const double> probs, std::span<const int> labels, double threshold) {
  requireAligned(probs.size(), labels.size());
  std::size_t right = 0;
  for (std::size_t i = 0; i < probs.size(); ++i) right += (probs[i] >= threshold) == (labels[i] == 1);
  return static_cast<double>(right) / static_cast<double>(probs.size());
}

Platt fitPlatt(std::span<const double> scores, std::span<const int> labels) {
  requireAligned(scores.size(), labels.size());
  requireBothClasses(labels, 1, "Platt scaling");
  const auto n = static_cast<double>(scores.size());
  auto objective = [&](double a, double b, double* ga, double* gb, double* haa, double* hab, double* hbb) {
    double f = 0.0;
    double g1 = 0.0, g2 = 0.0, h11 = 0.0, h12 = 0.0, h22 = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double s = scores[i];
      const double t = a * s + b;
      f += softplus(t) - labels[i] * t;
      const double p = sigmoid(t);
      const double r = p - labels[i];
      const double w = p * (1.0 - p);
      g1 += r * s;
      g2 += r;
      h11 += w * s * s;
      h12 += w * s;
      h22 += w;
    }
    if (ga != nullptr) {
      *ga = g1 / n, *gb = g2 / n, *haa = h11 / n, *hab = h12 / n, *hbb = h22 / n;
    }
    return f / n;
  };
  Platt p;
  double ga = 0.0, gb = 0.0, haa = 0.0, hab = 0.0, hbb = 0.0;
  double f = objective(p.a, p.b, &ga, &gb, &haa, &hab, &hbb);
  for (int it = 0; it < 100; ++it) {
    if (std::hypot(ga, gb) < 1e-12) break;
    // Newton direction with a small ridge for nearly separable data.
    const double r = 1e-12;
    const double det = (haa + r) * (hbb + r) - hab * hab;
    const double da = -((hbb + r) * ga - hab * gb) / det;
    const double db = -(-hab * ga + (haa + r) * gb) / det;
    double step = 1.0;
    double fNext = objective(p.a + da, p.b + db, nullptr, nullptr, nullptr, nullptr, nullptr);
    while (fNext > f + 1e-4 * step * (ga * da + gb * db) && step > 1e-10) {
      step *= 0.5;
      fNext = objective(p.a + step * da, p.b + step * db, nullptr, nullptr, nullptr, nullptr, nullptr);
    }
    if (fNext >= f) break;
    p.a += step * da;
    p.b += step * db;
    f = objective(p.a, p.b, &ga, &gb, &haa, &hab, &hbb);
  }
  return p;
}

TrainedModel calibratePlatt(const TrainedModel& model, const FeatureDataset& heldOut, int splits, std::uint64_t seed) {
  if (splits < 1) throw ConfigError("Platt scaling needs at least one split");
  requireBothClasses(heldOut.labels, 1, "Platt scaling");
  const Eigen::VectorXd s = rawScores(model, heldOut.features);
  const int n = heldOut.rows();
  const int take = std::max(2, static_cast<int>(std::lround(0.7 * n)));
  Platt avg{0.0, 0.0};
  int used = 0;
  for (int k = 0; k < splits; ++k) {
    auto engine = streamEngine(seed, static_cast<std::uint64_t>(k));
    std::vector<int> idx(static_cast<std::size_t>(n));
    std::iota(idx.begin(), idx.end(), 0);
    portableShuffle(idx.begin(), idx.end(), engine);
    idx.resize(static_cast<std::size_t>(std::min(take, n)));
    std::vector<double> sc;
    std::vector<int> lab;
    for (int i : idx) {
      sc.push_back(s(i));
      lab.push_back(heldOut.labels[static_cast<std::size_t>(i)]);
    }
    try {
      const Platt p = fitPlatt(sc, lab);
      avg.a += p.a;
      avg.b += p.b;
      ++used;
    } catch (const DegenerateDataError&) {
      // A subsample holding one class has no fit; it is skipped.
    }
  }
  if (used == 0) throw DegenerateDataError("every Platt subsample held a single class");
  TrainedModel out = model;
  out.calibration = Platt{avg.a / used, avg.b / used};
  return out;
}

CvResult crossValidate(const FeatureDataset& data, const FitConfig& config, int k, std::uint64_t seed,
                       double validationFraction) {
  if (k < 1) throw ConfigError("cross-validation needs at least one fold");
  if (!(validationFraction > 0.0 && validationFraction < 1.0)) throw ConfigError("validation fraction must be in (0, 1)");
  const int n = data.rows();
  const int nVal = static_cast<int>(std::lround(validationFraction * n));
  if (nVal < 2 || n - nVal < 4) throw DataError("too few rows (" + std::to_string(n) + ") for cross-validation");
  CvResult r;
  r.folds.resize(static_cast<std::size_t>(k));
  std::vector<std::string> errors(static_cast<std::size_t>(k));
#pragma omp parallel for schedule(static)
  for (int f = 0; f < k; ++f) {
    try {
      auto engine = streamEngine(seed, static_cast<std::uint64_t>(f));
      std::vector<int> idx(static_cast<std::size_t>(n));
      std::iota(idx.begin(), idx.end(), 0);
      portableShuffle(idx.begin(), idx.end(), engine);
      const std::vector<int> val(idx.begin(), idx.begin() + nVal);
      const std::vector<int> train(idx.begin() + nVal, idx.end());
      const FeatureDataset v = data.subset(val);
      const TrainedModel m = fitLogistic(data.subset(train), config);
      const auto p = predictProba(m, v.features);
      FoldMetrics& fm = r.folds[static_cast<std::size_t>(f)];
      fm.logLoss = logLoss(p, v.labels);
      fm.accuracy = accuracy(p, v.labels);
      const auto pos = std::count(v.labels.begin(), v.labels.end(), 1);
      const bool both = pos > 0 && pos < nVal;
      fm.auc = both ? auc(p, v.labels) : std::numeric_limits<double>::quiet_NaN();
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(f)] = e.what();
    }
  }
  for (int f = 0; f < k; ++f) {
    if (!errors[static_cast<std::size_t>(f)].empty()) {
      throw DataError("fold " + std::to_string(f) + ": " + errors[static_cast<std::size_t>(f)]);
    }
  }
  int aucFolds = 0;
  for (const auto& fm : r.folds) {
    r.meanLogLoss += fm.logLoss / k;
    r.meanAccuracy += fm.accuracy / k;
    if (!std::isnan(fm.auc)) {
      r.meanAuc += fm.auc;
      ++aucFolds;
    }
  }
  r.meanAuc = aucFolds > 0 ? r.meanAuc / aucFolds : std::numeric_limits<double>::quiet_NaN();
  return r;
}

}  // namespace shortseason
