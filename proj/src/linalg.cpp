#include "formguard/linalg.hpp"

#include <string>

#include "formguard/errors.hpp"

namespace formguard {

void require_dim(long actual, long expected, const char* what) {
  if (actual != expected) {
    throw ConfigError(std::string("dimension mismatch for ") + what + ": got " +
                      std::to_string(actual) + ", expected " + std::to_string(expected));
  }
}

Mat kron_identity(const Mat& a, int n) {
  Mat out = Mat::Zero(a.rows() * n, a.cols() * n);
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * n, j * n, n, n).diagonal().setConstant(a(i, j));
    }
  }
  return out;
}

double max_singular_value(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  return svd.singularValues()(0);
}

double min_singular_value(const Mat& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat> svd(m);
  const auto& s = svd.singularValues();
  return s(s.size() - 1);
}

Vec stack(const std::vector<Vec>& parts) {
  if (parts.empty()) return Vec();
  const auto n = parts.front().size();
  Vec out(n * static_cast<Eigen::Index>(parts.size()));
  for (std::size_t i = 0; i < parts.size(); ++i) {
    require_dim(parts[i].size(), n, "stacked block");
    out.segment(static_cast<Eigen::Index>(i) * n, n) = parts[i];
  }
  return out;
}

std::vector<Vec> unstack(const Vec& stacked, int n) {
  if (n <= 0 || stacked.size() % n != 0) {
    throw ConfigError("cannot split vector of size " + std::to_string(stacked.size()) +
                      " into blocks of " + std::to_string(n));
  }
  std::vector<Vec> out;
  for (Eigen::Index i = 0; i < stacked.size() / n; ++i) out.emplace_back(stacked.segment(i * n, n));
  return out;
}

}  // namespace formguard
