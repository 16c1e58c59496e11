#pragma once

#include <vector>

#include "diracsea/operator.hpp"
#include "diracsea/potential.hpp"

namespace diracsea {

// How a lattice momentum difference p - q is fed to the potential transform.
// Aperiodic evaluates A^(p - q) exactly for every difference up to 2 Lambda.
// Periodic folds the difference back into the lattice, which makes the
// operator a multiplication in position space (used by split-step dynamics).
enum class KernelWrap { Aperiodic, Periodic };

struct FieldOptions {
  KernelWrap wrap = KernelWrap::Aperiodic;
  bool matrix_free = false;
  // Over-budget dense requests become matrix-free instead of failing.
  bool fallback_matrix_free = false;
  std::size_t dense_budget = kDefaultDenseBudget;
};

// Potential transform at the lattice momentum with coordinates w, Nyquist
// components symmetrized. Periodic kernels use it for every folded difference.
FourVector folded_fourier(const Grid& grid, const PotentialSpec& pot, double t, const std::array<int, 3>& w,
                          int time_order = 0);

// Interaction blocks Z(p, q) * dp^dim = -i e sum_mu alpha^mu A^_mu(p - q) dp^dim,
// tabulated by lattice difference.
class KernelTable {
 public:
  KernelTable(const Grid& grid, const PotentialSpec& pot, double t, int time_order, KernelWrap wrap);

  const Mat4& block(std::size_t row_site, std::size_t col_site) const;
  const FourVector& coefficients(std::size_t row_site, std::size_t col_site) const;
  bool zero() const { return zero_; }

 private:
  std::size_t index(std::size_t row_site, std::size_t col_site) const;

  const Grid* grid_;
  int span_;
  std::vector<FourVector> coeffs_;
  std::vector<Mat4> blocks_;
  bool zero_ = true;
};

// (h(p) Z - Z h(q)) / (2 i (E(p) + E(q))) with h = H0 / E; equals the
// (Z_{+-} - Z_{-+}) / (i (E(p) + E(q))) block.
Mat4 dressing_block(const Grid& grid, std::size_t row_site, std::size_t col_site, const Mat4& z);

GridOperator z_operator(const PotentialSpec& pot, double t, const GridPtr& grid, const FieldOptions& opts = {});
GridOperator q_operator(const PotentialSpec& pot, double t, const GridPtr& grid, const FieldOptions& opts = {});
// Time derivative of Q, built from the time derivative of the potential.
GridOperator q_prime(const PotentialSpec& pot, double t, const GridPtr& grid, const FieldOptions& opts = {});

// Sum over all lattice pairs of ||Q(p, q)||_F^2 without storing the operator.
double q_frobenius_squared(const PotentialSpec& pot, double t, const Grid& grid,
                           KernelWrap wrap = KernelWrap::Aperiodic);

}  // namespace diracsea
