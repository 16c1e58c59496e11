#include "diracsea/potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace diracsea {

namespace {

constexpr double kPi = std::numbers::pi;

// Truncated Taylor series in t, enough for fourth derivatives.
struct Jet {
  static constexpr int N = 5;
  std::array<double, N> c{};

  static Jet constant(double v) {
    Jet j;
    j.c[0] = v;
    return j;
  }
  static Jet variable(double v, double slope) {
    Jet j;
    j.c[0] = v;
    j.c[1] = slope;
    return j;
  }
  double derivative(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f * c[k];
  }
};

Jet operator+(Jet a, const Jet& b) {
  for (int i = 0; i < Jet::N; ++i) a.c[i] += b.c[i];
  return a;
}
Jet operator-(Jet a, const Jet& b) {
  for (int i = 0; i < Jet::N; ++i) a.c[i] -= b.c[i];
  return a;
}
Jet operator*(double s, Jet a) {
  for (auto& v : a.c) v *= s;
  return a;
}
Jet operator*(const Jet& a, const Jet& b) {
  Jet r;
  for (int i = 0; i < Jet::N; ++i)
    for (int k = 0; k <= i; ++k) r.c[i] += a.c[k] * b.c[i - k];
  return r;
}
Jet reciprocal(const Jet& a) {
  Jet r;
  r.c[0] = 1.0 / a.c[0];
  for (int i = 1; i < Jet::N; ++i) {
    double s = 0.0;
    for (int k = 1; k <= i; ++k) s += a.c[k] * r.c[i - k];
    r.c[i] = -s / a.c[0];
  }
  return r;
}
Jet exp(const Jet& a) {
  // r' = a' r, coefficientwise.
  Jet r;
  r.c[0] = std::exp(a.c[0]);
  for (int i = 1; i < Jet::N; ++i) {
    double s = 0.0;
    for (int k = 1; k <= i; ++k) s += k * a.c[k] * r.c[i - k];
    r.c[i] = s / i;
  }
  return r;
}

const char* envelope_name(EnvelopeKind k) {
  switch (k) {
    case EnvelopeKind::SinSquared: return "sin_squared";
    case EnvelopeKind::SmoothBump: return "smooth_bump";
    case EnvelopeKind::SmoothStep: return "smooth_step";
    case EnvelopeKind::Constant: return "constant";
  }
  return "?";
}

const char* profile_name(ProfileKind k) {
  switch (k) {
    case ProfileKind::Gaussian: return "gaussian";
    case ProfileKind::GaussianGradient: return "gaussian_gradient";
    case ProfileKind::GaussianCosine: return "gaussian_cosine";
  }
  return "?";
}

double dot_dim(const Vec3& a, const Vec3& b, int dim) {
  double s = 0.0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

cplx gaussian_fourier(double sigma, const Vec3& center, const Vec3& k, int dim) {
  const double norm = std::pow(2.0 * kPi, -dim) * std::pow(2.0 * kPi * sigma * sigma, 0.5 * dim);
  const double k2 = dot_dim(k, k, dim);
  return norm * std::exp(-0.5 * sigma * sigma * k2) * std::exp(-I * dot_dim(k, center, dim));
}

Vec3 vec3_from_json(const nlohmann::json& j) {
  Vec3 v = Vec3::Zero();
  if (j.is_number()) {
    v[0] = j.get<double>();
    return v;
  }
  if (!j.is_array() || j.size() > 3) throw std::invalid_argument("expected a number or an array of up to 3 numbers");
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j.at(i).get<double>();
  return v;
}

}  // namespace

double Envelope::derivative(double t, int order) const {
  if (order < 0 || order >= Jet::N) throw std::invalid_argument("envelope derivative order out of range");
  const double T = t_b - t_a;
  switch (kind) {
    case EnvelopeKind::Constant:
      if (t < t_a || t > t_b) return 0.0;
      return order == 0 ? 1.0 : 0.0;
    case EnvelopeKind::SinSquared: {
      if (t <= t_a || t >= t_b) return 0.0;
      const double w = 2.0 * kPi / T;
      const double theta = w * (t - t_a);
      if (order == 0) return 0.5 * (1.0 - std::cos(theta));
      return -0.5 * std::pow(w, order) * std::cos(theta + order * 0.5 * kPi);
    }
    case EnvelopeKind::SmoothBump: {
      if (t <= t_a || t >= t_b) return 0.0;
      const Jet u = Jet::variable((2.0 * t - t_a - t_b) / T, 2.0 / T);
      const Jet w = Jet::constant(1.0) - u * u;
      return exp(Jet::constant(1.0) - reciprocal(w)).derivative(order);
    }
    case EnvelopeKind::SmoothStep: {
      if (t <= t_a) return 0.0;
      if (t >= t_b) return order == 0 ? 1.0 : 0.0;
      const Jet u = Jet::variable((t - t_a) / T, 1.0 / T);
      const Jet u2 = u * u;
      const Jet u4 = u2 * u2;
      // 35u^4 - 84u^5 + 70u^6 - 20u^7
      const Jet poly = Jet::constant(35.0) - 84.0 * u + 70.0 * u2 - 20.0 * (u2 * u);
      return (u4 * poly).derivative(order);
    }
  }
  return 0.0;
}

void Envelope::validate() const {
  if (!(t_b > t_a)) throw std::invalid_argument("envelope requires t_b > t_a");
}

void PotentialSpec::validate(int dim) const {
  for (std::size_t i = 0; i < terms.size(); ++i) {
    const auto& t = terms[i];
    const std::string where = "potential.terms[" + std::to_string(i) + "]";
    if (t.component < 0 || t.component > 3) throw std::invalid_argument(where + ".component must be in 0..3");
    if (!(t.sigma > 0.0)) throw std::invalid_argument(where + ".sigma must be positive");
    if (!std::isfinite(t.amplitude)) throw std::invalid_argument(where + ".amplitude must be finite");
    if (t.profile == ProfileKind::GaussianGradient && (t.axis < 0 || t.axis >= dim))
      throw std::invalid_argument(where + ".axis must be an active axis");
    if (t.derivative_order < 0 || t.derivative_order > 2)
      throw std::invalid_argument(where + ".derivative_order must be 0, 1 or 2");
    t.envelope.validate();
  }
}

bool PotentialSpec::empty() const {
  return std::all_of(terms.begin(), terms.end(), [](const PotentialTerm& t) { return t.amplitude == 0.0; });
}

bool PotentialSpec::has_magnetic() const {
  return std::any_of(terms.begin(), terms.end(),
                     [](const PotentialTerm& t) { return t.component != 0 && t.amplitude != 0.0; });
}

std::pair<double, double> PotentialSpec::support() const {
  if (terms.empty()) return {0.0, 0.0};
  double a = terms.front().envelope.t_a;
  double b = terms.front().envelope.t_b;
  for (const auto& t : terms) {
    a = std::min(a, t.envelope.t_a);
    b = std::max(b, t.envelope.t_b);
  }
  return {a, b};
}

cplx profile_fourier(const PotentialTerm& term, const Vec3& k, int dim) {
  switch (term.profile) {
    case ProfileKind::Gaussian:
      return gaussian_fourier(term.sigma, term.center, k, dim);
    case ProfileKind::GaussianGradient:
      if (term.axis >= dim) return 0.0;
      return I * k[term.axis] * gaussian_fourier(term.sigma, term.center, k, dim);
    case ProfileKind::GaussianCosine:
      return 0.5 * (gaussian_fourier(term.sigma, term.center, k - term.wavevector, dim) +
                    gaussian_fourier(term.sigma, term.center, k + term.wavevector, dim));
  }
  return 0.0;
}

double profile_value(const PotentialTerm& term, const Vec3& x, int dim) {
  Vec3 d = Vec3::Zero();
  for (int i = 0; i < dim; ++i) d[i] = x[i] - term.center[i];
  const double g = std::exp(-0.5 * d.squaredNorm() / (term.sigma * term.sigma));
  switch (term.profile) {
    case ProfileKind::Gaussian: return g;
    case ProfileKind::GaussianGradient:
      return term.axis < dim ? -d[term.axis] / (term.sigma * term.sigma) * g : 0.0;
    case ProfileKind::GaussianCosine: return g * std::cos(dot_dim(term.wavevector, x, dim));
  }
  return 0.0;
}

FourVector potential_fourier(const PotentialSpec& pot, double t, const Vec3& k, int dim, int time_order) {
  FourVector a{};
  for (const auto& term : pot.terms) {
    if (term.amplitude == 0.0) continue;
    const double g = term.envelope.derivative(t, term.derivative_order + time_order);
    if (g == 0.0) continue;
    a[term.component] += term.amplitude * g * profile_fourier(term, k, dim);
  }
  return a;
}

FourVector potential_value(const PotentialSpec& pot, double t, const Vec3& x, int dim, int time_order) {
  FourVector a{};
  for (const auto& term : pot.terms) {
    if (term.amplitude == 0.0) continue;
    const double g = term.envelope.derivative(t, term.derivative_order + time_order);
    a[term.component] += term.amplitude * g * profile_value(term, x, dim);
  }
  return a;
}

ClassAReport class_a_norms(const PotentialSpec& pot, int dim, const TimeQuadrature& quad) {
  ClassAReport report;
  if (pot.empty()) return report;
  if (quad.nodes < 2) throw std::invalid_argument("time quadrature needs at least 2 nodes");

  // Uniform momentum box wide enough for every Gaussian factor.
  double sigma_min = pot.terms.front().sigma;
  double shift = 0.0;
  for (const auto& t : pot.terms) {
    sigma_min = std::min(sigma_min, t.sigma);
    shift = std::max(shift, t.wavevector.norm());
  }
  const double half = 12.0 / sigma_min + shift;
  const int per_axis = quad.k_nodes > 0 ? quad.k_nodes : (dim == 1 ? 2048 : 48);
  const double h = 2.0 * half / per_axis;
  std::size_t count = 1;
  for (int a = 0; a < dim; ++a) count *= per_axis;
  const double weight = std::pow(h, dim);

  std::vector<std::vector<cplx>> profiles(pot.terms.size(), std::vector<cplx>(count));
  for (std::size_t idx = 0; idx < count; ++idx) {
    Vec3 k = Vec3::Zero();
    std::size_t rest = idx;
    for (int a = 0; a < dim; ++a) {
      k[a] = -half + (static_cast<double>(rest % per_axis) + 0.5) * h;
      rest /= per_axis;
    }
    for (std::size_t j = 0; j < pot.terms.size(); ++j)
      profiles[j][idx] = pot.terms[j].amplitude * profile_fourier(pot.terms[j], k, dim);
  }

  const auto [ta, tb] = pot.support();
  auto integrate = [&](int nodes) {
    std::array<std::array<std::array<double, 2>, 3>, 4> out{};
    if (nodes % 2) ++nodes;
    const double dt = (tb - ta) / nodes;
    std::vector<cplx> field(count);
    for (int mu = 0; mu < 4; ++mu)
      for (int m = 0; m < 3; ++m) {
        double acc1 = 0.0, acc2 = 0.0;
        for (int i = 0; i <= nodes; ++i) {
          const double t = ta + i * dt;
          const double simpson = (i == 0 || i == nodes) ? 1.0 : (i % 2 ? 4.0 : 2.0);
          std::fill(field.begin(), field.end(), cplx{});
          bool any = false;
          for (std::size_t j = 0; j < pot.terms.size(); ++j) {
            const auto& term = pot.terms[j];
            if (term.component != mu) continue;
            const double g = term.envelope.derivative(t, term.derivative_order + m);
            if (g == 0.0) continue;
            any = true;
            for (std::size_t idx = 0; idx < count; ++idx) field[idx] += g * profiles[j][idx];
          }
          if (!any) continue;
          double n1 = 0.0, n2 = 0.0;
          for (const auto& v : field) {
            n1 += std::abs(v);
            n2 += std::norm(v);
          }
          acc1 += simpson * n1 * weight;
          acc2 += simpson * std::sqrt(n2 * weight);
        }
        out[mu][m][0] = acc1 * dt / 3.0;
        out[mu][m][1] = acc2 * dt / 3.0;
      }
    return out;
  };

  const auto coarse = integrate(quad.nodes);
  const auto fine = integrate(2 * quad.nodes);
  report.norms = fine;
  std::ostringstream diag;
  for (int mu = 0; mu < 4; ++mu)
    for (int m = 0; m < 3; ++m)
      for (int p = 0; p < 2; ++p) {
        const double v = fine[mu][m][p];
        if (!std::isfinite(v)) report.all_finite = false;
        const double diff = std::abs(v - coarse[mu][m][p]);
        if (diff > quad.tolerance * std::max(1.0, std::abs(v))) {
          report.converged = false;
          diag << "mu=" << mu << " m=" << m << " p=" << (p + 1) << " changed by " << diff << "; ";
        }
      }
  report.diagnostic = diag.str();
  return report;
}

void to_json(nlohmann::json& j, const Envelope& e) {
  j = {{"kind", envelope_name(e.kind)}, {"t_a", e.t_a}, {"t_b", e.t_b}};
}

void from_json(const nlohmann::json& j, Envelope& e) {
  const auto kind = j.value("kind", std::string("sin_squared"));
  if (kind == "sin_squared") e.kind = EnvelopeKind::SinSquared;
  else if (kind == "smooth_bump") e.kind = EnvelopeKind::SmoothBump;
  else if (kind == "smooth_step") e.kind = EnvelopeKind::SmoothStep;
  else if (kind == "constant") e.kind = EnvelopeKind::Constant;
  else throw std::invalid_argument("unknown envelope kind '" + kind + "'");
  e.t_a = j.value("t_a", 0.0);
  e.t_b = j.value("t_b", 1.0);
}

void to_json(nlohmann::json& j, const PotentialTerm& t) {
  j = {{"component", t.component},
       {"amplitude", t.amplitude},
       {"sigma", t.sigma},
       {"center", {t.center[0], t.center[1], t.center[2]}},
       {"profile", profile_name(t.profile)},
       {"envelope", t.envelope}};
  if (t.profile == ProfileKind::GaussianGradient) j["axis"] = t.axis;
  if (t.profile == ProfileKind::GaussianCosine) j["wavevector"] = {t.wavevector[0], t.wavevector[1], t.wavevector[2]};
  if (t.derivative_order != 0) j["derivative_order"] = t.derivative_order;
}

void from_json(const nlohmann::json& j, PotentialTerm& t) {
  t.component = j.at("component").get<int>();
  t.amplitude = j.at("amplitude").get<double>();
  t.sigma = j.value("sigma", 1.0);
  if (j.contains("center")) t.center = vec3_from_json(j.at("center"));
  const auto profile = j.value("profile", std::string("gaussian"));
  if (profile == "gaussian") t.profile = ProfileKind::Gaussian;
  else if (profile == "gaussian_gradient") t.profile = ProfileKind::GaussianGradient;
  else if (profile == "gaussian_cosine") t.profile = ProfileKind::GaussianCosine;
  else throw std::invalid_argument("unknown profile '" + profile + "'");
  t.axis = j.value("axis", 0);
  if (j.contains("wavevector")) t.wavevector = vec3_from_json(j.at("wavevector"));
  if (j.contains("envelope")) t.envelope = j.at("envelope").get<Envelope>();
  t.derivative_order = j.value("derivative_order", 0);
}

void to_json(nlohmann::json& j, const PotentialSpec& p) { j = {{"terms", p.terms}}; }

void from_json(const nlohmann::json& j, PotentialSpec& p) {
  p.terms.clear();
  // A top-level envelope applies to every term that does not carry its own.
  Envelope shared;
  const bool has_shared = j.contains("envelope");
  if (has_shared) shared = j.at("envelope").get<Envelope>();
  for (const auto& item : j.value("terms", nlohmann::json::array())) {
    PotentialTerm t = item.get<PotentialTerm>();
    if (has_shared && !item.contains("envelope")) t.envelope = shared;
    p.terms.push_back(t);
  }
}

void to_json(nlohmann::json& j, const GridSpec& g) {
  j = {{"dim", g.dim}, {"n", g.n}, {"box_length", g.box_length}};
}

void from_json(const nlohmann::json& j, GridSpec& g) {
  g.dim = j.value("dim", g.dim);
  g.n = j.value("n", g.n);
  g.box_length = j.value("box_length", g.box_length);
}

void to_json(nlohmann::json& j, const PhysicsParams& p) { j = {{"mass", p.mass}, {"charge", p.charge}}; }

void from_json(const nlohmann::json& j, PhysicsParams& p) {
  p.mass = j.value("mass", p.mass);
  p.charge = j.value("charge", p.charge);
}

}  // namespace diracsea
