#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <Eigen/Core>
#include <Eigen/SparseCore>

namespace asgat {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using SparseMatrix = Eigen::SparseMatrix<double>;

/// Dense symmetric matrix storing a single (lower) triangle, so that
/// entry(i, j) == entry(j, i) holds exactly by construction.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int order) : order_(order), tri_(size_t(order) * (order + 1) / 2, 0.0) {
    if (order < 0) throw std::invalid_argument("SymMatrix: negative order");
  }

  int order() const { return order_; }

  double operator()(int i, int j) const { return tri_[index(i, j)]; }
  void set(int i, int j, double v) { tri_[index(i, j)] = v; }
  void add(int i, int j, double v) { tri_[index(i, j)] += v; }

  const std::vector<double>& packed() const { return tri_; }

  Matrix dense() const {
    Matrix m(order_, order_);
    for (int i = 0; i < order_; ++i)
      for (int j = 0; j <= i; ++j) m(i, j) = m(j, i) = tri_[index(i, j)];
    return m;
  }

  /// Sparse view with exact zeros dropped; used by the polynomial backends.
  SparseMatrix sparse() const {
    std::vector<Eigen::Triplet<double>> trip;
    for (int i = 0; i < order_; ++i)
      for (int j = 0; j <= i; ++j) {
        double v = tri_[index(i, j)];
        if (v != 0.0) {
          trip.emplace_back(i, j, v);
          if (i != j) trip.emplace_back(j, i, v);
        }
      }
    SparseMatrix s(order_, order_);
    s.setFromTriplets(trip.begin(), trip.end());
    s.makeCompressed();
    return s;
  }

  /// Symmetrizes an (approximately symmetric) dense matrix into packed storage.
  static SymMatrix from_dense(const Matrix& m) {
    if (m.rows() != m.cols()) throw std::invalid_argument("SymMatrix: matrix not square");
    SymMatrix s(int(m.rows()));
    for (int i = 0; i < s.order_; ++i)
      for (int j = 0; j <= i; ++j) s.tri_[index(i, j)] = 0.5 * (m(i, j) + m(j, i));
    return s;
  }

  /// FNV-1a over the packed triangle's raw bytes; keys the spectrum cache.
  uint64_t content_hash() const {
    uint64_t h = 1469598103934665603ull;
    auto mix = [&h](const unsigned char* p, size_t n) {
      for (size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ull;
      }
    };
    uint64_t n = uint64_t(order_);
    mix(reinterpret_cast<const unsigned char*>(&n), sizeof(n));
    if (!tri_.empty())
      mix(reinterpret_cast<const unsigned char*>(tri_.data()), tri_.size() * sizeof(double));
    return h;
  }

 private:
  static size_t index(int i, int j) {
    if (j > i) std::swap(i, j);
    return size_t(i) * (i + 1) / 2 + j;
  }

  int order_ = 0;
  std::vector<double> tri_;
};

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace asgat
