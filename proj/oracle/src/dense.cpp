#include "cpdsss/oracle/dense.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace cpdsss::oracle {

Vector to_eigen(CSpan v) {
  Vector out(static_cast<Eigen::Index>(v.size()));
  for (std::size_t i = 0; i < v.size(); ++i) out(static_cast<Eigen::Index>(i)) = v[i];
  return out;
}

CVec from_eigen(const Vector& v) { return CVec(v.data(), v.data() + v.size()); }

Matrix circulant(CSpan first_col, std::size_t n) {
  if (first_col.size() > n) throw std::invalid_argument("column longer than n");
  const auto N = static_cast<Eigen::Index>(n);
  Matrix c = Matrix::Zero(N, N);
  for (Eigen::Index col = 0; col < N; ++col)
    for (std::size_t r = 0; r < first_col.size(); ++r)
      c((static_cast<Eigen::Index>(r) + col) % N, col) = first_col[r];
  return c;
}

Matrix expander(std::size_t n, std::size_t l) {
  const auto rows = static_cast<Eigen::Index>(n);
  const auto cols = static_cast<Eigen::Index>(n / l);
  Matrix e = Matrix::Zero(rows, cols);
  for (Eigen::Index i = 0; i < cols; ++i) e(i * static_cast<Eigen::Index>(l), i) = 1.0;
  return e;
}

Matrix stack_vertical(std::span<const Matrix> blocks) {
  Eigen::Index rows = 0;
  for (const auto& b : blocks) rows += b.rows();
  Matrix out(rows, blocks.front().cols());
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleRows(at, b.rows()) = b;
    at += b.rows();
  }
  return out;
}

Matrix stack_horizontal(std::span<const Matrix> blocks) {
  Eigen::Index cols = 0;
  for (const auto& b : blocks) cols += b.cols();
  Matrix out(blocks.front().rows(), cols);
  Eigen::Index at = 0;
  for (const auto& b : blocks) {
    out.middleCols(at, b.cols()) = b;
    at += b.cols();
  }
  return out;
}

double log_det_capacity(const Matrix& effective, std::size_t l, double snr) {
  const auto n = effective.cols();
  const Matrix e = expander(static_cast<std::size_t>(n), l);
  const Matrix ae = effective * e;
  Matrix arg = Matrix::Identity(effective.rows(), effective.rows()) +
               static_cast<double>(l) * snr * ae * ae.adjoint();
  Eigen::LLT<Matrix> llt(arg);
  if (llt.info() != Eigen::Success) throw std::runtime_error("log-det argument not positive definite");
  const Matrix& lower = llt.matrixL();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < lower.rows(); ++i) log_det += 2.0 * std::log(std::abs(lower(i, i)));
  return log_det / std::numbers::ln2 / static_cast<double>(n);
}

double max_rel_error(const Matrix& a, const Matrix& b) {
  const double scale = std::max(1.0, b.cwiseAbs().maxCoeff());
  return (a - b).cwiseAbs().maxCoeff() / scale;
}

double rel_error(CSpan got, CSpan want) {
  if (got.size() != want.size()) return INFINITY;
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < got.size(); ++i) {
    num += std::norm(got[i] - want[i]);
    den += std::norm(want[i]);
  }
  return den > 0.0 ? std::sqrt(num / den) : std::sqrt(num);
}

}  // namespace cpdsss::oracle
