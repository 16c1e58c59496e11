#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "diracsea/grid.hpp"

namespace diracsea {

enum class EnvelopeKind { SinSquared, SmoothBump, SmoothStep, Constant };

// Time envelope on [t_a, t_b]. SmoothStep rises from 0 at t_a to 1 at t_b
// (septic polynomial, three vanishing derivatives at both ends) and stays 1
// afterwards; the other kinds vanish outside the support.
struct Envelope {
  EnvelopeKind kind = EnvelopeKind::SinSquared;
  double t_a = 0.0;
  double t_b = 1.0;

  // order-th time derivative, order in [0, 4].
  double derivative(double t, int order) const;
  double value(double t) const { return derivative(t, 0); }
  void validate() const;
};

enum class ProfileKind { Gaussian, GaussianGradient, GaussianCosine };

// One separable contribution amplitude * g^(derivative_order)(t) * S(x) to the
// covariant component A_mu (lower index, A = (A_0, -A_vec)).
struct PotentialTerm {
  int component = 0;
  double amplitude = 0.0;
  double sigma = 1.0;
  Vec3 center = Vec3::Zero();
  ProfileKind profile = ProfileKind::Gaussian;
  int axis = 0;                        // GaussianGradient: derivative axis
  Vec3 wavevector = Vec3::Zero();      // GaussianCosine: modulation
  Envelope envelope;
  int derivative_order = 0;            // time factor is the envelope derivative of this order
};

struct PotentialSpec {
  std::vector<PotentialTerm> terms;

  void validate(int dim) const;
  bool empty() const;
  bool has_magnetic() const;
  // Union of envelope supports.
  std::pair<double, double> support() const;
};

using FourVector = std::array<cplx, 4>;

// Spatial Fourier transform of the profile only (no envelope, no amplitude).
cplx profile_fourier(const PotentialTerm& term, const Vec3& k, int dim);
// Real-space profile value.
double profile_value(const PotentialTerm& term, const Vec3& x, int dim);

// time_order-th time derivative of A^_mu(t, k).
FourVector potential_fourier(const PotentialSpec& pot, double t, const Vec3& k, int dim, int time_order = 0);
FourVector potential_value(const PotentialSpec& pot, double t, const Vec3& x, int dim, int time_order = 0);

// norms(mu, m, p) = int || d^m/dt^m A^_mu(t) ||_p dt, p in {1,2}.
struct ClassAReport {
  std::array<std::array<std::array<double, 2>, 3>, 4> norms{};
  bool all_finite = true;
  bool converged = true;
  std::string diagnostic;
};

struct TimeQuadrature {
  int nodes = 400;
  double tolerance = 1e-4;
  int k_nodes = 0;  // 0 picks a default per dimension
};

ClassAReport class_a_norms(const PotentialSpec& pot, int dim, const TimeQuadrature& quad = {});

void to_json(nlohmann::json& j, const Envelope& e);
void from_json(const nlohmann::json& j, Envelope& e);
void to_json(nlohmann::json& j, const PotentialTerm& t);
void from_json(const nlohmann::json& j, PotentialTerm& t);
void to_json(nlohmann::json& j, const PotentialSpec& p);
void from_json(const nlohmann::json& j, PotentialSpec& p);
void to_json(nlohmann::json& j, const GridSpec& g);
void from_json(const nlohmann::json& j, GridSpec& g);
void to_json(nlohmann::json& j, const PhysicsParams& p);
void from_json(const nlohmann::json& j, PhysicsParams& p);

}  // namespace diracsea
