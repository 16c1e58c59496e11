#include "diracsea/qnorm.hpp"

#include <cmath>
#include <numbers>
#include <random>

#include "diracsea/parallel.hpp"

namespace diracsea {

namespace {

constexpr double kPi = std::numbers::pi;

// Covariant contraction x . y = x0 y0 - sum_i xi yi, no conjugation.
cplx dot(const FourVector& x, const FourVector& y) {
  return x[0] * y[0] - x[1] * y[1] - x[2] * y[2] - x[3] * y[3];
}

FourVector lower(double e0, const Vec3& p) { return {e0, -p[0], -p[1], -p[2]}; }

double radical_inverse(std::uint64_t i, unsigned base) {
  double inv = 1.0 / base, f = inv, r = 0.0;
  while (i > 0) {
    r += f * static_cast<double>(i % base);
    i /= base;
    f *= inv;
  }
  return r;
}

constexpr unsigned kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19};

// Momentum distributed with density ~ 1 / E(p)^2 on the ball (dim 3, radius
// `reach`) or the interval (dim 1), drawn from uniforms u.
struct EnergySampler {
  int dim;
  double mass;
  double reach;
  double norm;  // integral of 1 / E^2 over the support

  EnergySampler(int d, double m, double r) : dim(d), mass(m), reach(r) {
    if (dim == 1)
      norm = 2.0 * std::atan(reach / mass) / mass;
    else
      norm = 4.0 * kPi * (reach - mass * std::atan(reach / mass));
  }

  int uniforms() const { return dim == 1 ? 1 : 3; }

  Vec3 draw(const double* u) const {
    Vec3 p = Vec3::Zero();
    if (dim == 1) {
      const double span = std::atan(reach / mass);
      p[0] = mass * std::tan((2.0 * u[0] - 1.0) * span);
      return p;
    }
    // Radial CDF ~ r - m atan(r / m), inverted by bisection.
    const double target = u[0] * (reach - mass * std::atan(reach / mass));
    double lo = 0.0, hi = reach;
    for (int it = 0; it < 60; ++it) {
      const double mid = 0.5 * (lo + hi);
      (mid - mass * std::atan(mid / mass) < target ? lo : hi) = mid;
    }
    const double r = 0.5 * (lo + hi);
    const double c = 2.0 * u[1] - 1.0;
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));
    const double phi = 2.0 * kPi * u[2];
    p << r * s * std::cos(phi), r * s * std::sin(phi), r * c;
    return p;
  }

  double density(const Vec3& p) const { return 1.0 / ((p.squaredNorm() + mass * mass) * norm); }
};

bool in_box(const Vec3& p, int dim, double radius) {
  for (int a = 0; a < dim; ++a)
    if (std::abs(p[a]) > radius) return false;
  return true;
}

double potential_scale(const PotentialSpec& pot) {
  double s = 0.0;
  for (const auto& t : pot.terms) {
    if (t.amplitude == 0.0) continue;
    s = std::max(s, 1.0 / t.sigma + t.wavevector.norm());
  }
  return s;
}

}  // namespace

double q_trace_density(const Vec3& p, const Vec3& q, const FourVector& a, const FourVector& b,
                       const PhysicsParams& params) {
  const double m = params.mass;
  const double ep = energy(p, m);
  const double eq = energy(q, m);
  const FourVector pp = lower(ep, p);
  const FourVector qm = lower(-eq, q);
  const double p0 = ep, q0 = -eq;
  const cplx bracket = (m * m - dot(pp, qm)) * dot(a, b) + dot(pp, a) * dot(qm, b) + dot(pp, b) * dot(qm, a);
  const double e = params.charge;
  return (2.0 * e * e / (p0 * q0 * (p0 - q0) * (p0 - q0)) * bracket).real();
}

QnormEstimate q_norm_analytic(const PotentialSpec& pot, double t, int dim, const PhysicsParams& params,
                              const QnormQuadrature& quad) {
  pot.validate(dim);
  params.validate();
  if (!(quad.radius > 0.0) || quad.samples < 1 || quad.replicates < 2)
    throw std::invalid_argument("qnorm quadrature needs radius > 0, samples >= 1, replicates >= 2");
  if (pot.empty()) return {};
  const double reach = dim == 1 ? quad.radius : quad.radius * std::sqrt(3.0);
  const EnergySampler sampler(dim, params.mass, reach);
  const double kscale = potential_scale(pot);
  const bool energy_weighted = quad.sampling == QnormSampling::EnergyWeighted;
  const int pu = sampler.uniforms();
  const int ku = energy_weighted ? pu : (dim == 1 ? 2 : 4);
  const int dims = pu + ku;

  std::vector<double> estimates(static_cast<std::size_t>(quad.replicates));
  parallel_for(estimates.size(), [&](std::size_t rep) {
    std::mt19937_64 rng(splitmix64(quad.seed ^ splitmix64(rep)));
    std::uniform_real_distribution<double> uni(0.0, 1.0);
    double shift[8];
    for (int d = 0; d < dims; ++d) shift[d] = uni(rng);
    double acc = 0.0;
    for (int i = 0; i < quad.samples; ++i) {
      double u[8];
      for (int d = 0; d < dims; ++d) {
        u[d] = radical_inverse(static_cast<std::uint64_t>(i) + 1, kPrimes[d]) + shift[d];
        u[d] -= std::floor(u[d]);
      }
      const Vec3 p = sampler.draw(u);
      Vec3 q;
      double density = sampler.density(p);
      if (energy_weighted) {
        q = sampler.draw(u + pu);
        density *= sampler.density(q);
      } else {
        // Box-Muller pairs give the Gaussian difference k = p - q.
        Vec3 k = Vec3::Zero();
        const double* w = u + pu;
        const int normals = dim == 1 ? 1 : 3;
        for (int a = 0; a < normals; ++a) {
          const int pair = a / 2;
          const double r = std::sqrt(-2.0 * std::log(std::max(w[2 * pair], 1e-300)));
          const double ang = 2.0 * kPi * w[2 * pair + 1];
          k[a] = kscale * r * (a % 2 == 0 ? std::cos(ang) : std::sin(ang));
          density *= std::exp(-0.5 * k[a] * k[a] / (kscale * kscale)) / (std::sqrt(2.0 * kPi) * kscale);
        }
        q = p - k;
      }
      if (!in_box(p, dim, quad.radius) || !in_box(q, dim, quad.radius) || density <= 0.0) continue;
      const auto a = potential_fourier(pot, t, p - q, dim);
      const auto b = potential_fourier(pot, t, q - p, dim);
      acc += q_trace_density(p, q, a, b, params) / density;
    }
    estimates[rep] = acc / quad.samples;
  });
  double mean = 0.0;
  for (double v : estimates) mean += v;
  mean /= estimates.size();
  double var = 0.0;
  for (double v : estimates) var += (v - mean) * (v - mean);
  var /= (estimates.size() - 1);
  const double se = std::sqrt(var / estimates.size());
  if (mean < -3.0 * se - 1e-300)
    throw std::runtime_error("negative Hilbert-Schmidt estimate: integrand sign error");
  return {std::max(mean, 0.0), se};
}

double inverse_energy_fourth_integral(int dim, double mass) {
  if (dim == 1) return kPi / (2.0 * mass * mass * mass);
  if (dim == 3) return kPi * kPi / mass;
  throw std::invalid_argument("dimension must be 1 or 3");
}

double electric_qnorm_bound(const PotentialSpec& pot, double t, int dim, const PhysicsParams& params, int k_nodes) {
  pot.validate(dim);
  if (pot.has_magnetic()) throw std::invalid_argument("electric bound requires vanishing magnetic components");
  if (pot.empty()) return 0.0;
  const double m = params.mass;
  const double half = 12.0 * potential_scale(pot);
  int nodes = k_nodes > 0 ? k_nodes : (dim == 1 ? 4096 : 96);
  if (nodes % 2) ++nodes;
  const double h = 2.0 * half / nodes;
  auto simpson = [nodes](int i) { return (i == 0 || i == nodes) ? 1.0 : (i % 2 ? 4.0 : 2.0); };
  auto integrand = [&](const Vec3& k) {
    const double k2 = k.squaredNorm();
    return k2 * (k2 + m * m) * std::norm(potential_fourier(pot, t, k, dim)[0]);
  };
  double total = 0.0;
  if (dim == 1) {
    for (int i = 0; i <= nodes; ++i) total += simpson(i) * integrand(Vec3(-half + i * h, 0.0, 0.0));
    total *= h / 3.0;
  } else {
    std::vector<double> planes(static_cast<std::size_t>(nodes) + 1);
    parallel_for(planes.size(), [&](std::size_t i) {
      double acc = 0.0;
      for (int j = 0; j <= nodes; ++j)
        for (int l = 0; l <= nodes; ++l)
          acc += simpson(j) * simpson(l) * integrand(Vec3(-half + i * h, -half + j * h, -half + l * h));
      planes[i] = simpson(static_cast<int>(i)) * acc;
    });
    for (double v : planes) total += v;
    total *= std::pow(h / 3.0, 3);
  }
  const double e = params.charge;
  return 2.0 * e * e / (m * m) * inverse_energy_fourth_integral(dim, m) * total;
}

cplx MomentumProfile::operator()(const Vec3& k, int dim) const {
  double r2 = 0.0;
  for (int a = 0; a < dim; ++a) r2 += (k[a] - center[a]) * (k[a] - center[a]);
  return amplitude * std::exp(-r2 / (2.0 * width * width));
}

double MomentumProfile::l1_norm(int dim) const {
  return std::abs(amplitude) * std::pow(2.0 * kPi * width * width, 0.5 * dim);
}

double MomentumProfile::l2_norm(int dim) const {
  return std::abs(amplitude) * std::pow(kPi * width * width, 0.25 * dim);
}

IntegralEstimate integral_estimate_check(ConvolutionBound which, const MomentumProfile& a1,
                                         const MomentumProfile& a2, const MomentumProfile& a3, const Grid& grid) {
  const auto sites = static_cast<Eigen::Index>(grid.sites());
  const int dim = grid.dim();
  const double cell = grid.cell();
  auto kernel = [&](const MomentumProfile& f, bool divide) {
    Matrix m(sites, sites);
    parallel_for(static_cast<std::size_t>(sites), [&](std::size_t i) {
      const auto a = static_cast<Eigen::Index>(i);
      for (Eigen::Index b = 0; b < sites; ++b) {
        const cplx v = f(grid.momentum(i) - grid.momentum(b), dim);
        m(a, b) = divide ? v / (grid.energy(i) + grid.energy(b)) : v;
      }
    });
    return m;
  };
  Matrix lhs_kernel;
  double rhs = 0.0;
  const double c9 = std::sqrt(inverse_energy_fourth_integral(dim, grid.params().mass));
  switch (which) {
    case ConvolutionBound::I: {
      lhs_kernel = kernel(a2, true);
      for (Eigen::Index a = 0; a < sites; ++a)
        for (Eigen::Index b = 0; b < sites; ++b) lhs_kernel(a, b) /= grid.energy(a) + grid.energy(b);
      rhs = c9 * a2.l2_norm(dim);
      break;
    }
    case ConvolutionBound::II: {
      lhs_kernel = cell * kernel(a1, false) * kernel(a2, true);
      for (Eigen::Index a = 0; a < sites; ++a)
        for (Eigen::Index b = 0; b < sites; ++b) lhs_kernel(a, b) /= grid.energy(a) + grid.energy(b);
      rhs = c9 * a1.l1_norm(dim) * a2.l2_norm(dim);
      break;
    }
    case ConvolutionBound::III:
      lhs_kernel = cell * kernel(a1, true) * kernel(a2, true);
      rhs = c9 * a1.l1_norm(dim) * a2.l2_norm(dim);
      break;
    case ConvolutionBound::IV:
      lhs_kernel = cell * cell * kernel(a1, true) * kernel(a2, false) * kernel(a3, true);
      rhs = c9 * a1.l1_norm(dim) * a2.l2_norm(dim) * a3.l1_norm(dim);
      break;
  }
  IntegralEstimate out;
  out.lhs = cell * lhs_kernel.norm();
  out.rhs = rhs;
  out.pass = out.lhs <= out.rhs * (1.0 + 1e-6);
  return out;
}

}  // namespace diracsea
