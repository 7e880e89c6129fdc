#include <algorithm>
#include <cmath>
#include <numeric>

#include <Eigen/SVD>

#include "gdn/error.hpp"
#include "gdn/imputation.hpp"

namespace gdn {

FeatureData fully_defined(Matrix values) {
  Mask defined = Mask::Constant(values.rows(), values.cols(), true);
  return {std::move(values), std::move(defined)};
}

Matrix MaskedFeatures::observed_input() const { return train.select(x, 0.0); }

MaskedFeatures generate_mask(const FeatureData& data, double missing_rate, Rng& rng) {
  if (!(missing_rate > 0.0 && missing_rate < 1.0)) {
    throw UsageError("missing rate must lie strictly between 0 and 1");
  }
  const Index n = data.values.rows();
  const Index d = data.values.cols();
  MaskedFeatures mf{data.values, Mask::Constant(n, d, false), Mask::Constant(n, d, false),
                    missing_rate};
  // Row-major traversal keeps the draw order independent of storage order.
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) {
      if (!data.defined(i, j)) continue;
      if (uniform01(rng) < missing_rate) {
        mf.test(i, j) = true;
      } else {
        mf.train(i, j) = true;
      }
    }
  }
  if (!mf.train.any() || !mf.test.any()) {
    throw UsageError("missing rate leaves the train or test split empty");
  }
  return mf;
}

MaskedFeatures masked_from_test(const FeatureData& data, const Mask& test) {
  if (test.rows() != data.values.rows() || test.cols() != data.values.cols()) {
    throw UsageError("test mask shape does not match the feature matrix");
  }
  if ((test && !data.defined).any()) throw UsageError("test mask selects undefined cells");
  MaskedFeatures mf{data.values, data.defined && !test, test, 0.0};
  if (!mf.train.any() || !mf.test.any()) throw UsageError("test mask leaves a split empty");
  mf.missing_rate =
      static_cast<double>(test.count()) / static_cast<double>(data.defined.count());
  return mf;
}

Matrix restore_observed(const MaskedFeatures& mf, Matrix prediction) {
  return mf.train.select(mf.x, prediction);
}

namespace {

double observed_mean(const MaskedFeatures& mf) {
  const Index count = mf.train.count();
  if (count == 0) throw UsageError("no observed entries");
  return mf.train.select(mf.x, 0.0).sum() / static_cast<double>(count);
}

}  // namespace

Matrix mean_impute(const MaskedFeatures& mf, bool per_column) {
  const double global = observed_mean(mf);
  Matrix out = Matrix::Constant(mf.x.rows(), mf.x.cols(), global);
  if (per_column) {
    for (Index j = 0; j < mf.x.cols(); ++j) {
      const Index count = mf.train.col(j).count();
      if (count == 0) continue;
      out.col(j).setConstant(mf.train.col(j).select(mf.x.col(j), 0.0).sum() /
                             static_cast<double>(count));
    }
  }
  return restore_observed(mf, std::move(out));
}

Matrix knn_impute(const MaskedFeatures& mf, int k) {
  if (k < 1) throw UsageError("knn: k must be >= 1");
  const double fallback = observed_mean(mf);
  const Index n = mf.x.rows();
  const Index d = mf.x.cols();
  const Matrix values = mf.observed_input();
  const Matrix squares = values.cwiseAbs2();
  const Matrix observed = mf.train.cast<double>();

  Matrix out = restore_observed(mf, Matrix::Constant(n, d, fallback));
  std::vector<Index> missing_rows;
  for (Index i = 0; i < n; ++i) {
    if (!mf.train.row(i).all()) missing_rows.push_back(i);
  }

  constexpr Index kBlock = 256;
  std::vector<std::pair<double, Index>> ranked;
  for (std::size_t start = 0; start < missing_rows.size(); start += kBlock) {
    const std::size_t stop = std::min(missing_rows.size(), start + kBlock);
    const Index rows = static_cast<Index>(stop - start);
    Matrix block_values(rows, d);
    Matrix block_squares(rows, d);
    Matrix block_observed(rows, d);
    for (Index r = 0; r < rows; ++r) {
      const Index i = missing_rows[start + static_cast<std::size_t>(r)];
      block_values.row(r) = values.row(i);
      block_squares.row(r) = squares.row(i);
      block_observed.row(r) = observed.row(i);
    }
    // Sums restricted to co-observed columns: dot(i,j) = sum x_i x_j,
    // norm_i(j) = sum x_i^2 over columns j observes, and vice versa.
    const Matrix dot = block_values * values.transpose();
    const Matrix norm_self = block_squares * observed.transpose();
    const Matrix norm_other = block_observed * squares.transpose();

    for (Index r = 0; r < rows; ++r) {
      const Index i = missing_rows[start + static_cast<std::size_t>(r)];
      ranked.clear();
      for (Index j = 0; j < n; ++j) {
        if (j == i) continue;
        const double denom = norm_self(r, j) * norm_other(r, j);
        if (!(denom > 0.0)) continue;
        ranked.emplace_back(dot(r, j) / std::sqrt(denom), j);
      }
      std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
        return a.first != b.first ? a.first > b.first : a.second < b.second;
      });
      for (Index c = 0; c < d; ++c) {
        if (mf.train(i, c)) continue;
        double sum = 0.0;
        int found = 0;
        for (const auto& [sim, j] : ranked) {
          if (!mf.train(j, c)) continue;
          sum += mf.x(j, c);
          if (++found == k) break;
        }
        out(i, c) = found > 0 ? sum / found : fallback;
      }
    }
  }
  return out;
}

Matrix low_rank_approximation(const Matrix& a, Index rank, Rng& rng) {
  if (rank < 1) throw UsageError("rank must be >= 1");
  const Index small = std::min(a.rows(), a.cols());
  if (rank >= small) return a;
  constexpr Index kOversample = 10;
  constexpr int kPowerIterations = 3;
  if (small <= 200 || rank + kOversample >= small) {
    Eigen::BDCSVD<Matrix> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
    return svd.matrixU().leftCols(rank) * svd.singularValues().head(rank).asDiagonal() *
           svd.matrixV().leftCols(rank).transpose();
  }
  // Randomized range finder with subspace (power) iterations.
  const Index width = rank + kOversample;
  Matrix omega = standard_normal_matrix(a.cols(), width, rng);
  Matrix q = Eigen::HouseholderQR<Matrix>(a * omega).householderQ() * Matrix::Identity(a.rows(), width);
  for (int it = 0; it < kPowerIterations; ++it) {
    Matrix w = Eigen::HouseholderQR<Matrix>(a.transpose() * q).householderQ() *
               Matrix::Identity(a.cols(), width);
    q = Eigen::HouseholderQR<Matrix>(a * w).householderQ() * Matrix::Identity(a.rows(), width);
  }
  const Matrix b = q.transpose() * a;
  Eigen::BDCSVD<Matrix> svd(b, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return (q * svd.matrixU().leftCols(rank)) * svd.singularValues().head(rank).asDiagonal() *
         svd.matrixV().leftCols(rank).transpose();
}

Matrix svd_impute(const MaskedFeatures& mf, Index rank, int iters, std::uint64_t seed) {
  if (rank < 1) throw UsageError("svd: rank must be >= 1");
  Rng rng = make_rng(seed, 31);
  Matrix estimate = mean_impute(mf);
  for (int it = 0; it < iters; ++it) {
    estimate = restore_observed(mf, low_rank_approximation(estimate, rank, rng));
  }
  return estimate;
}

double evaluate_rmse(const Matrix& truth, const Matrix& prediction, const Mask& mask) {
  if (truth.rows() != prediction.rows() || truth.cols() != prediction.cols() ||
      mask.rows() != truth.rows() || mask.cols() != truth.cols()) {
    throw UsageError("evaluate_rmse: shape mismatch");
  }
  const Index count = mask.count();
  if (count == 0) throw UsageError("evaluate_rmse: empty mask");
  return std::sqrt(mask.select(truth - prediction, 0.0).squaredNorm() /
                   static_cast<double>(count));
}

}  // namespace gdn
