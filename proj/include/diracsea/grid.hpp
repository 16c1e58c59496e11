#pragma once

#include <array>
#include <cstddef>
#include <memory>
#include <span>
#include <stdexcept>
#include <vector>

#include "diracsea/spinor.hpp"

namespace diracsea {

// Thrown when a dense N x N complex matrix would exceed the memory budget.
struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kDefaultDenseBudget = std::size_t{1} << 30;

struct GridSpec {
  int dim = 1;
  int n = 64;
  double box_length = 20.0;
  void validate() const;
};

// Momentum lattice p_j = 2 pi j / L, j in [-n/2, n/2), per active axis.
// Sites are ordered lexicographically (first axis slowest) with ascending j;
// the state vector index is 4 * site + spinor.
//
// Sampled transforms follow
//   f^(p_j) = (dx / 2pi)^dim sum_l exp(-i p_j x_l) f(x_l),
//   f(x_l)  = dp^dim sum_j exp(i p_j x_l) f^(p_j),
// with x_l = l dx on the same index range, i.e. Riemann sums of the continuum
// transform with prefactor (2 pi)^-dim.
class Grid {
 public:
  Grid(const GridSpec& spec, const PhysicsParams& params);

  const GridSpec& spec() const { return spec_; }
  const PhysicsParams& params() const { return params_; }
  int dim() const { return spec_.dim; }
  int n() const { return spec_.n; }
  std::size_t sites() const { return sites_; }
  std::size_t dimension() const { return 4 * sites_; }
  double dp() const;
  double dx() const;
  double cutoff() const;
  // dp^dim, the momentum-space volume element.
  double cell() const;

  std::array<int, 3> coords(std::size_t site) const;
  std::size_t site_of(const std::array<int, 3>& coords) const;
  Vec3 momentum(std::size_t site) const { return momenta_[site]; }
  Vec3 position(std::size_t site) const;
  double energy(std::size_t site) const { return energies_[site]; }
  const Mat4& hamiltonian(std::size_t site) const { return hamiltonians_[site]; }
  const Projectors& projectors(std::size_t site) const { return projectors_[site]; }

  // In-place transforms of one scalar field sampled on the sites.
  // Unitary versions act on state coordinates; sampled versions use the
  // Riemann-sum normalization above.
  void unitary_to_position(std::span<cplx> field) const;
  void unitary_to_momentum(std::span<cplx> field) const;
  void sampled_to_momentum(std::span<cplx> field) const;
  void sampled_to_position(std::span<cplx> field) const;
  // Unitary transforms of a full spinor state (index 4 * site + spinor).
  void state_to_position(std::span<cplx> state) const;
  void state_to_momentum(std::span<cplx> state) const;

 private:
  void transform(std::span<cplx> field, int sign) const;
  void transform_state(std::span<cplx> state, int sign) const;

  GridSpec spec_;
  PhysicsParams params_;
  std::size_t sites_ = 0;
  std::vector<Vec3> momenta_;
  std::vector<double> energies_;
  std::vector<Mat4> hamiltonians_;
  std::vector<Projectors> projectors_;
  std::vector<std::size_t> fft_order_;
  struct Plan;
  std::shared_ptr<Plan> plan_;
};

using GridPtr = std::shared_ptr<const Grid>;

GridPtr build_grid(const GridSpec& spec, const PhysicsParams& params);

// Refuses dense storage of a dim x dim complex matrix above `budget` bytes.
void check_dense_budget(std::size_t dim, std::size_t budget);

}  // namespace diracsea
