#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "diracsea/grid.hpp"

namespace diracsea {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class Energy { Plus, Minus };

// Operator on the grid Hilbert space, either stored densely or given by an
// applier acting on blocks of column vectors.
class GridOperator {
 public:
  using Applier = std::function<Matrix(const Matrix&)>;

  static GridOperator dense(GridPtr grid, Matrix m);
  static GridOperator matrix_free(GridPtr grid, Applier apply, Applier apply_adjoint);

  bool is_dense() const { return dense_.has_value(); }
  const Matrix& matrix() const;
  const Grid& grid() const { return *grid_; }
  const GridPtr& grid_ptr() const { return grid_; }
  Eigen::Index dimension() const { return static_cast<Eigen::Index>(grid_->dimension()); }

  Matrix apply(const Matrix& x) const;
  Matrix apply_adjoint(const Matrix& x) const;
  GridOperator adjoint() const;
  // Dense copy, subject to the memory budget.
  GridOperator densified(std::size_t budget = kDefaultDenseBudget) const;

  // Set once parity_split has produced this operator as a block part.
  bool parity_known() const { return parity_known_; }

 private:
  GridOperator() = default;
  friend std::pair<GridOperator, GridOperator> parity_split(const GridOperator&);

  GridPtr grid_;
  std::optional<Matrix> dense_;
  Applier apply_;
  Applier apply_adjoint_;
  bool parity_known_ = false;
};

// P_sigma(p) applied to every 4-block row (left) or column (right).
Matrix project_rows(const Grid& grid, const Matrix& m, Energy sign);
Matrix project_cols(const Grid& grid, const Matrix& m, Energy sign);
// P_sigma * m * P_tau
Matrix block(const Grid& grid, const Matrix& m, Energy sigma, Energy tau);

// ev = P+ op P+ + P- op P-, odd = op - ev.
std::pair<GridOperator, GridOperator> parity_split(const GridOperator& op);

struct HsEstimate {
  double value = 0.0;
  double std_error = 0.0;
  bool exact = true;
};

struct HsOptions {
  int probes = 64;
  std::uint64_t seed = 0;
};

// Hilbert-Schmidt norm of op or of the (sigma, tau) block. Dense operators are
// evaluated exactly; matrix-free ones by complex Gaussian probes.
HsEstimate hs_norm(const GridOperator& op, std::optional<std::pair<Energy, Energy>> blk = std::nullopt,
                   const HsOptions& opts = {});

// exp(Q) for skew-Hermitian Q via the eigendecomposition of iQ.
Matrix exp_skew(const Matrix& q, double tolerance = 1e-10);
GridOperator exp_skew(const GridOperator& q, double tolerance = 1e-10);

double unitarity_defect(const Matrix& u);

// Binary container: "DSMX", uint32 version, uint64 rows, uint64 cols, then
// row-major (re, im) doubles, all little-endian.
void write_matrix_binary(const std::string& path, const Matrix& m);
Matrix read_matrix_binary(const std::string& path);
// CSV with header row,col,re,im; entries with |z| <= drop are skipped.
void write_matrix_csv(const std::string& path, const Matrix& m, double drop = 0.0);
Matrix read_matrix_csv(const std::string& path, Eigen::Index rows, Eigen::Index cols);

// Deterministic 64-bit mixer used to derive per-item seeds.
std::uint64_t splitmix64(std::uint64_t x);

}  // namespace diracsea
