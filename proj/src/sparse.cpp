#include "igaplate/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "igaplate/error.hpp"

namespace igaplate {

SpMat assemble_sorted(int rows, int cols, std::vector<Triplet> triplets) {
  std::stable_sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    if (a.row() != b.row()) return a.row() < b.row();
    if (a.col() != b.col()) return a.col() < b.col();
    return a.value() < b.value();
  });
  std::vector<Triplet> merged;
  merged.reserve(triplets.size());
  for (const auto& t : triplets) {
    if (!merged.empty() && merged.back().row() == t.row() && merged.back().col() == t.col())
      merged.back() = Triplet(t.row(), t.col(), merged.back().value() + t.value());
    else
      merged.push_back(t);
  }
  SpMat A(rows, cols);
  A.setFromTriplets(merged.begin(), merged.end());
  return A;
}

SpMat pruned(const SpMat& A, double tol) {
  SpMat B = A;
  B.prune([tol](Eigen::Index, Eigen::Index, double v) { return std::abs(v) >= tol; });
  return B;
}

BandInfo nnz_and_bandwidth(const SpMat& A) {
  BandInfo info;
  const SpMat B = pruned(A);
  info.nnz = B.nonZeros();
  for (int k = 0; k < B.outerSize(); ++k)
    for (SpMat::InnerIterator it(B, k); it; ++it)
      info.bandwidth = std::max(info.bandwidth, static_cast<int>(std::abs(it.row() - it.col())));
  return info;
}

double norm_inf(const SpMat& A) {
  double best = 0.0;
  for (int k = 0; k < A.outerSize(); ++k) {
    double s = 0.0;
    for (SpMat::InnerIterator it(A, k); it; ++it) s += std::abs(it.value());
    best = std::max(best, s);
  }
  return best;
}

DirectSolver::DirectSolver(const SpMat& A) : A_(A) {
  if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionMismatch, "matrix is not square");
  norm_inf_ = norm_inf(A);
  A_.makeCompressed();
  lu_ = std::make_unique<Eigen::SparseLU<ColSpMat, Eigen::COLAMDOrdering<int>>>();
  lu_->analyzePattern(A_);
  lu_->factorize(A_);
  if (lu_->info() != Eigen::Success)
    throw Error(ErrorCode::SingularMatrix, "sparse LU failed: " + lu_->lastErrorMessage());
}

Eigen::VectorXd DirectSolver::solve(const Eigen::VectorXd& b) const {
  if (b.size() != A_.rows()) throw Error(ErrorCode::DimensionMismatch, "right-hand side length");
  Eigen::VectorXd x = lu_->solve(b);
  const double res = (A_ * x - b).lpNorm<Eigen::Infinity>();
  const double bound = 1e-10 * (norm_inf_ * x.lpNorm<Eigen::Infinity>() + b.lpNorm<Eigen::Infinity>());
  if (!std::isfinite(res) || res > bound)
    throw Error(ErrorCode::SingularMatrix,
                "residual " + std::to_string(res) + " above bound " + std::to_string(bound));
  return x;
}

Eigen::MatrixXd DirectSolver::solve(const Eigen::MatrixXd& B) const {
  Eigen::MatrixXd X(A_.cols(), B.cols());
  for (Eigen::Index c = 0; c < B.cols(); ++c) X.col(c) = solve(Eigen::VectorXd(B.col(c)));
  return X;
}

Eigen::VectorXd solve_direct(const SpMat& A, const Eigen::VectorXd& b) {
  return DirectSolver(A).solve(b);
}

SpMat submatrix(const SpMat& A, const std::vector<int>& rows, const std::vector<int>& cols) {
  std::vector<int> colmap(static_cast<std::size_t>(A.cols()), -1);
  for (std::size_t k = 0; k < cols.size(); ++k) colmap[static_cast<std::size_t>(cols[k])] = static_cast<int>(k);
  std::vector<Triplet> trip;
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (SpMat::InnerIterator it(A, rows[r]); it; ++it) {
      const int c = colmap[static_cast<std::size_t>(it.col())];
      if (c >= 0) trip.emplace_back(static_cast<int>(r), c, it.value());
    }
  SpMat B(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
  B.setFromTriplets(trip.begin(), trip.end());
  return B;
}

}  // namespace igaplate
