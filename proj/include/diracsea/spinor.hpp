#pragma once

#include <array>
#include <complex>

#include <Eigen/Dense>

namespace diracsea {

using cplx = std::complex<double>;
using Mat4 = Eigen::Matrix<cplx, 4, 4>;
using Vec4 = Eigen::Matrix<cplx, 4, 1>;
using Vec3 = Eigen::Vector3d;

inline constexpr cplx I{0.0, 1.0};

struct PhysicsParams {
  double mass = 1.0;
  double charge = 1.0;
  void validate() const;
};

enum class Representation { DiracStandard };

struct DiracMatrices {
  std::array<Mat4, 3> alpha;
  Mat4 beta;
};
DiracMatrices dirac_matrices(Representation rep = Representation::DiracStandard);

// Minkowski metric diag(1,-1,-1,-1).
double metric(int mu, int nu);

// Standard (Dirac) representation.
const Mat4& beta();
// alpha(0) is the identity, alpha(1..3) the velocity matrices.
const Mat4& alpha(int mu);
// gamma(mu) = beta * alpha(mu)
const Mat4& gamma(int mu);

// alpha . p + beta m
Mat4 free_hamiltonian(const Vec3& p, double mass);
double energy(const Vec3& p, double mass);

struct Projectors {
  Mat4 plus;
  Mat4 minus;
};
Projectors energy_projectors(const Vec3& p, double mass);

// Largest deviation from the two-, three- and four-gamma trace identities.
double gamma_trace_check();

// Closed-form exponential of -i t (a0 + sum_i a_i alpha_i) for real a.
Mat4 exp_alpha_combination(double t, double a0, const Vec3& a);

}  // namespace diracsea
