#include "diracsea/spinor.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace diracsea {

namespace {

struct Tables {
  Mat4 beta;
  std::array<Mat4, 4> alpha;
  std::array<Mat4, 4> gamma;

  Tables() {
    using M2 = Eigen::Matrix<cplx, 2, 2>;
    const std::array<M2, 3> pauli = {
        (M2() << 0, 1, 1, 0).finished(),
        (M2() << 0, -I, I, 0).finished(),
        (M2() << 1, 0, 0, -1).finished(),
    };
    beta.setZero();
    beta.diagonal() << 1, 1, -1, -1;
    alpha[0] = Mat4::Identity();
    for (int i = 0; i < 3; ++i) {
      alpha[i + 1].setZero();
      alpha[i + 1].block<2, 2>(0, 2) = pauli[i];
      alpha[i + 1].block<2, 2>(2, 0) = pauli[i];
    }
    for (int mu = 0; mu < 4; ++mu) gamma[mu] = beta * alpha[mu];
  }
};

const Tables& tables() {
  static const Tables t;
  return t;
}

}  // namespace

void PhysicsParams::validate() const {
  if (!(mass > 0.0) || !std::isfinite(mass)) throw std::invalid_argument("mass must be positive and finite");
  if (!std::isfinite(charge)) throw std::invalid_argument("charge must be finite");
}

DiracMatrices dirac_matrices(Representation rep) {
  if (rep != Representation::DiracStandard) throw std::invalid_argument("unsupported Dirac representation");
  const auto& t = tables();
  return {{t.alpha[1], t.alpha[2], t.alpha[3]}, t.beta};
}

double gamma_trace_check() {
  const auto& g = tables().gamma;
  double worst = 0.0;
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b) {
      const Mat4 ab = g[a] * g[b];
      worst = std::max(worst, std::abs(ab.trace() - 4.0 * metric(a, b)));
      for (int c = 0; c < 4; ++c) {
        const Mat4 abc = ab * g[c];
        worst = std::max(worst, std::abs(abc.trace()));
        for (int d = 0; d < 4; ++d) {
          const double expect =
              4.0 * (metric(a, b) * metric(c, d) + metric(a, d) * metric(c, b) - metric(a, c) * metric(b, d));
          worst = std::max(worst, std::abs((abc * g[d]).trace() - expect));
        }
      }
    }
  return worst;
}

double metric(int mu, int nu) {
  if (mu != nu) return 0.0;
  return mu == 0 ? 1.0 : -1.0;
}

const Mat4& beta() { return tables().beta; }
const Mat4& alpha(int mu) { return tables().alpha.at(mu); }
const Mat4& gamma(int mu) { return tables().gamma.at(mu); }

Mat4 free_hamiltonian(const Vec3& p, double mass) {
  const auto& t = tables();
  return p[0] * t.alpha[1] + p[1] * t.alpha[2] + p[2] * t.alpha[3] + mass * t.beta;
}

double energy(const Vec3& p, double mass) { return std::sqrt(p.squaredNorm() + mass * mass); }

Projectors energy_projectors(const Vec3& p, double mass) {
  const Mat4 h = free_hamiltonian(p, mass) / energy(p, mass);
  return {0.5 * (Mat4::Identity() + h), 0.5 * (Mat4::Identity() - h)};
}

Mat4 exp_alpha_combination(double t, double a0, const Vec3& a) {
  // (a . alpha)^2 = |a|^2, so the exponential is a rotation in a 2-plane.
  const double r = a.norm();
  const cplx phase = std::exp(-I * t * a0);
  if (r == 0.0) return phase * Mat4::Identity();
  const auto& tb = tables();
  const Mat4 unit = (a[0] * tb.alpha[1] + a[1] * tb.alpha[2] + a[2] * tb.alpha[3]) / r;
  return phase * (std::cos(t * r) * Mat4::Identity() - I * std::sin(t * r) * unit);
}

}  // namespace diracsea
