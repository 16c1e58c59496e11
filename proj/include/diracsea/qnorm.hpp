#pragma once

#include <cstdint>

#include "diracsea/field.hpp"

namespace diracsea {

// Importance density for the (p, q) integral of ||Q||_2^2.
//   EnergyWeighted: p and q independent, each with density ~ 1 / E^2.
//   DifferenceWeighted: p ~ 1 / E^2, k = p - q Gaussian at the potential scale.
enum class QnormSampling { EnergyWeighted, DifferenceWeighted };

struct QnormQuadrature {
  double radius = 10.0;           // p and q range over the box [-radius, radius]^dim
  int samples = 1 << 15;          // Halton points per replicate
  int replicates = 8;             // independent random shifts
  std::uint64_t seed = 0;
  QnormSampling sampling = QnormSampling::EnergyWeighted;
};

struct QnormEstimate {
  double value = 0.0;
  double std_error = 0.0;
};

// 2 tr[Q_{+-}(p, q) Q_{+-}(p, q)^*] from the four-vector trace formula, given
// a = A^(p - q) and b = A^(q - p) (covariant components).
double q_trace_density(const Vec3& p, const Vec3& q, const FourVector& a, const FourVector& b,
                       const PhysicsParams& params);

// ||Q(t)||_2^2 on the momentum box, randomized quasi-Monte Carlo.
QnormEstimate q_norm_analytic(const PotentialSpec& pot, double t, int dim, const PhysicsParams& params,
                              const QnormQuadrature& quad = {});

// int d^dim p / E(p)^4 in closed form.
double inverse_energy_fourth_integral(int dim, double mass);

// (2 e^2 / m^2) int dp / E^4  int |k|^2 E(k)^2 |A^_0(k)|^2 dk for a purely
// electric potential; k_nodes = 0 picks a default per dimension.
double electric_qnorm_bound(const PotentialSpec& pot, double t, int dim, const PhysicsParams& params,
                            int k_nodes = 0);

// Complex Gaussian c exp(-|k - k0|^2 / (2 w^2)) on momentum space.
struct MomentumProfile {
  cplx amplitude{0.0, 0.0};
  Vec3 center = Vec3::Zero();
  double width = 1.0;

  cplx operator()(const Vec3& k, int dim) const;
  double l1_norm(int dim) const;
  double l2_norm(int dim) const;
};

enum class ConvolutionBound { I, II, III, IV };

struct IntegralEstimate {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

// Left side by lattice quadrature over the grid, right side c9 times the
// exact profile norms, c9 = ||E^-2||_2. Profiles not used by the chosen bound
// are ignored ((i) uses only the second one).
IntegralEstimate integral_estimate_check(ConvolutionBound which, const MomentumProfile& a1,
                                         const MomentumProfile& a2, const MomentumProfile& a3, const Grid& grid);

}  // namespace diracsea
