#pragma once

#include <memory>
#include <vector>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace igaplate {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;
using ColSpMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// Duplicates are summed after sorting by (row, col, value), so equal
// triplet multisets in any insertion order give bit-identical matrices.
SpMat assemble_sorted(int rows, int cols, std::vector<Triplet> triplets);

// Drops stored entries with magnitude below tol.
SpMat pruned(const SpMat& A, double tol = 1e-14);

struct BandInfo {
  long nnz = 0;
  int bandwidth = 0;
};

BandInfo nnz_and_bandwidth(const SpMat& A);

/// Sparse LU with COLAMD ordering; factor once, solve many times.
class DirectSolver {
 public:
  explicit DirectSolver(const SpMat& A);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& B) const;
  int size() const { return static_cast<int>(A_.rows()); }

 private:
  ColSpMat A_;
  double norm_inf_ = 0.0;
  std::unique_ptr<Eigen::SparseLU<ColSpMat, Eigen::COLAMDOrdering<int>>> lu_;
};

Eigen::VectorXd solve_direct(const SpMat& A, const Eigen::VectorXd& b);

// Max absolute row sum.
double norm_inf(const SpMat& A);

// Rows/columns of A picked by index lists.
SpMat submatrix(const SpMat& A, const std::vector<int>& rows, const std::vector<int>& cols);

}  // namespace igaplate
