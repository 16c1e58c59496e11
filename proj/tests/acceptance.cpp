// Acceptance run: one PASS/FAIL line per criterion. Pass criterion numbers as
// arguments to run a subset.
#include <chrono>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>

#include "diracsea/fock.hpp"
#include "diracsea/parallel.hpp"
#include "diracsea/qnorm.hpp"
#include "diracsea/runner.hpp"
#include "reference_operators.hpp"

using namespace diracsea;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

bool within(double x, double lo, double hi) { return x >= lo && x <= hi; }

PotentialSpec mixed_pulse() {
  PotentialTerm a;
  a.component = 0;
  a.amplitude = 0.3;
  a.sigma = 1.5;
  a.envelope = {EnvelopeKind::SinSquared, 0.0, 2.0};
  PotentialTerm b = a;
  b.component = 2;
  b.amplitude = 0.2;
  b.sigma = 2.0;
  b.center = Vec3(0.5, 0, 0);
  return {{a, b}};
}

EvolutionConfig span(double t0, double t1, int steps, Method m = Method::StrangSplit) {
  EvolutionConfig c;
  c.t0 = t0;
  c.t1 = t1;
  c.steps = steps;
  c.method = m;
  return c;
}

// Narrow magnetic pulse on a long box; shared by criteria 4 and 10.
struct MagneticScenario {
  PotentialSpec pot;
  GridSpec grid{1, 128, 321.7};
  EvolutionConfig cfg = span(0.0, 10.0, 400);
  MagneticScenario() {
    PotentialTerm t;
    t.component = 2;
    t.amplitude = 0.05;
    t.sigma = 0.005;
    t.envelope = {EnvelopeKind::SinSquared, 0.0, 20.0};
    pot.terms = {t};
  }
};

Outcome algebra() {
  constexpr double tol = 1e-12;
  double worst = 0.0;
  auto track = [&](double v) { worst = std::max(worst, v); };
  const Mat4 one = Mat4::Identity();
  for (int mu = 0; mu < 4; ++mu) {
    track((gamma(mu) - oracle::gamma(mu)).cwiseAbs().maxCoeff());
    for (int nu = 0; nu < 4; ++nu)
      track((gamma(mu) * gamma(nu) + gamma(nu) * gamma(mu) - 2.0 * metric(mu, nu) * one).cwiseAbs().maxCoeff());
  }
  for (int i = 1; i <= 3; ++i) {
    track((alpha(i) * beta() + beta() * alpha(i)).cwiseAbs().maxCoeff());
    for (int j = 1; j <= 3; ++j)
      track((alpha(i) * alpha(j) + alpha(j) * alpha(i) - (i == j ? 2.0 : 0.0) * one).cwiseAbs().maxCoeff());
  }
  track((beta() * beta() - one).cwiseAbs().maxCoeff());
  track(gamma_trace_check());
  // four-gamma traces against the oracle products
  for (int a = 0; a < 4; ++a)
    for (int b = 0; b < 4; ++b)
      for (int c = 0; c < 4; ++c)
        for (int d = 0; d < 4; ++d) {
          const cplx lib = (gamma(a) * gamma(b) * gamma(c) * gamma(d)).trace();
          const double expect =
              4.0 * (metric(a, b) * metric(c, d) - metric(a, c) * metric(b, d) + metric(a, d) * metric(b, c));
          track(std::abs(lib - expect));
        }
  const Grid g({3, 12, 9.0}, {0.8, 1.0});
  for (std::size_t s = 0; s < g.sites(); ++s) {
    const Vec3 p = g.momentum(s);
    const double e = g.energy(s);
    const auto& pr = g.projectors(s);
    track((pr.plus * pr.plus - pr.plus).cwiseAbs().maxCoeff());
    track((pr.minus * pr.minus - pr.minus).cwiseAbs().maxCoeff());
    track((pr.plus + pr.minus - one).cwiseAbs().maxCoeff());
    track((g.hamiltonian(s) * pr.plus - e * pr.plus).cwiseAbs().maxCoeff() / e);
    track((g.hamiltonian(s) * pr.minus + e * pr.minus).cwiseAbs().maxCoeff() / e);
    track((pr.plus - oracle::projector(p, 0.8, +1)).cwiseAbs().maxCoeff());
  }
  return {worst <= tol, "max deviation " + fmt("%.2e", worst) + " over " + std::to_string(g.sites()) + " momenta"};
}

Outcome oddness() {
  std::mt19937_64 rng(2024);
  const auto grid = build_grid({1, 128, 40.0}, {});
  double worst = 0.0;
  for (int k = 0; k < 10; ++k) {
    const auto pot = reference::random_potential(rng, 1, true);
    const auto q = q_operator(pot, 1.0, grid);
    const auto [ev, odd] = parity_split(q);
    worst = std::max(worst, ev.matrix().norm() / q.matrix().norm());
  }
  return {worst <= 1e-10, "max ||Q_ev||/||Q|| = " + fmt("%.2e", worst)};
}

Outcome dichotomy() {
  const PhysicsParams pp{0.5, 1.0};
  auto series = [&](int component) {
    PotentialTerm t;
    t.component = component;
    t.amplitude = 1.0;
    t.sigma = 0.5;
    t.envelope = {EnvelopeKind::Constant, 0.0, 1.0};
    std::vector<double> v;
    for (int n : {8, 12, 16}) v.push_back(q_frobenius_squared(PotentialSpec{{t}}, 0.5, Grid({3, n, 3.0}, pp)));
    return std::pair{PotentialSpec{{t}}, v};
  };
  const auto [electric, e] = series(0);
  const auto [magnetic, m] = series(2);
  const double e_last = e[2] / e[1] - 1.0;
  const double bound = electric_qnorm_bound(electric, 0.5, 3, pp);
  const double bound_fine = electric_qnorm_bound(electric, 0.5, 3, pp, 2 * 96);
  const double quad_err = std::abs(bound - bound_fine);
  const double m1 = m[1] / m[0] - 1.0, m2 = m[2] / m[1] - 1.0;
  const bool pass = std::abs(e_last) < 0.05 && e[2] <= bound + quad_err && m1 > 0.25 && m2 > 0.25;
  std::ostringstream s;
  s << "electric " << fmt("%+.1f%%", 100 * e_last) << " (||Q||^2 " << fmt("%.4g", e[2]) << " <= bound "
    << fmt("%.4g", bound) << "), magnetic " << fmt("%+.0f%%", 100 * m1) << ", " << fmt("%+.0f%%", 100 * m2);
  return {pass, s.str()};
}

Outcome dressing() {
  const MagneticScenario sc;
  const auto scan = cutoff_scan(sc.pot, sc.grid, {}, {128, 256, 512}, sc.cfg, 0.05);
  const auto& r = scan.rows;
  const double raw1 = r[1].raw_offdiag_hs / r[0].raw_offdiag_hs - 1, raw2 = r[2].raw_offdiag_hs / r[1].raw_offdiag_hs - 1;
  const double dressed = r[2].dressed_offdiag_hs / r[1].dressed_offdiag_hs - 1;
  std::ostringstream s;
  s << "raw " << fmt("%+.1f%%", 100 * raw1) << ", " << fmt("%+.1f%%", 100 * raw2) << "; dressed last "
    << fmt("%+.1f%%", 100 * dressed);
  return {raw1 > 0.20 && raw2 > 0.20 && std::abs(dressed) < 0.05, s.str()};
}

Outcome partial_integration() {
  const auto grid = build_grid({1, 64, 40.0}, {});
  std::vector<double> res;
  for (int nodes : {32, 64, 128, 256}) res.push_back(partial_integration_residual(mixed_pulse(), 0.0, 2.0, grid, nodes).residual);
  bool pass = true;
  std::ostringstream s;
  s << "ratios";
  for (std::size_t k = 1; k < res.size(); ++k) {
    const double ratio = res[k - 1] / res[k];
    pass = pass && within(ratio, 3.5, 4.5);
    s << " " << fmt("%.3f", ratio);
  }
  return {pass, s.str()};
}

Outcome integral_estimates() {
  std::mt19937_64 rng(66);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto profile = [&](int dim) {
    return MomentumProfile{cplx(u(rng), u(rng)), Vec3(u(rng), dim == 3 ? u(rng) : 0.0, dim == 3 ? u(rng) : 0.0),
                           0.4 + 1.5 * std::abs(u(rng))};
  };
  const Grid g1({1, 256, 60.0}, {});
  const Grid g3({3, 12, 8.0}, {});
  int checks = 0, violations = 0;
  double tightest = 0.0;
  for (int set = 0; set < 20; ++set) {
    const int dim = set % 2 ? 3 : 1;
    const Grid& g = dim == 1 ? g1 : g3;
    const auto a1 = profile(dim), a2 = profile(dim), a3 = profile(dim);
    for (auto which : {ConvolutionBound::I, ConvolutionBound::II, ConvolutionBound::III, ConvolutionBound::IV}) {
      const auto r = integral_estimate_check(which, a1, a2, a3, g);
      ++checks;
      violations += !r.pass;
      if (r.rhs > 0) tightest = std::max(tightest, r.lhs / r.rhs);
    }
  }
  return {violations == 0,
          std::to_string(checks) + " checks, " + std::to_string(violations) + " violations, max lhs/rhs " +
              fmt("%.3f", tightest)};
}

Outcome propagators() {
  const auto pot = mixed_pulse();
  double worst_unitarity = 0.0;
  bool pass = true;
  std::ostringstream s;
  {
    const auto grid = build_grid({1, 64, 40.0}, {});
    double prev = 0.0;
    s << "strang/midpoint";
    for (int steps : {25, 50, 100, 200}) {
      const auto a = evolve(pot, span(0, 2, steps), grid).u;
      const auto b = evolve(pot, span(0, 2, steps, Method::DenseMidpointExp), grid).u;
      worst_unitarity = std::max({worst_unitarity, unitarity_defect(a), unitarity_defect(b)});
      const double d = (a - b).norm();
      if (prev > 0) {
        pass = pass && within(prev / d, 3.5, 4.5);
        s << " " << fmt("%.3f", prev / d);
      }
      prev = d;
    }
  }
  {
    double prev = 0.0;
    s << "; born(e)";
    for (double e : {0.4, 0.2, 0.1, 0.05}) {
      const auto grid = build_grid({1, 16, 40.0}, {1.0, e});
      const auto exact = evolve(pot, span(0, 2, 400, Method::DenseMidpointExp), grid).u;
      auto c = span(0, 2, 400, Method::BornSeries);
      c.quadrature_points = 400;
      const auto born = born_series(pot, c, grid).u;
      worst_unitarity = std::max(worst_unitarity, unitarity_defect(exact));
      const double d = (born - exact).norm();
      if (prev > 0) {
        pass = pass && within(prev / d, 3.5, 4.5);
        s << " " << fmt("%.3f", prev / d);
      }
      prev = d;
    }
  }
  s << "; unitarity " << fmt("%.1e", worst_unitarity);
  return {pass && worst_unitarity <= 1e-9, s.str()};
}

Outcome gauge() {
  const auto grid = build_grid({1, 128, 40.0}, {});
  PotentialTerm y;
  y.amplitude = 0.3;
  y.sigma = 2.0;
  const Envelope switching{EnvelopeKind::SmoothStep, 0.2, 1.8};
  bool pass = true;
  double prev = 0.0;
  GaugeCheck last;
  std::ostringstream s;
  s << "ratios";
  for (int steps : {64, 128, 256, 512}) {
    last = gauge_covariance_check(mixed_pulse(), y, switching, span(0, 2, steps), grid, 1e-6);
    if (prev > 0) {
      pass = pass && within(prev / last.defect, 3.5, 4.5);
      s << " " << fmt("%.3f", prev / last.defect);
    }
    prev = last.defect;
  }
  s << "; defect at 512 steps " << fmt("%.2e", last.defect);
  return {pass && last.pass, s.str()};
}

Outcome wedge_oracle() {
  std::mt19937_64 rng(909);
  double worst = 0.0;
  for (int trial = 0; trial < 200; ++trial) {
    const int m = 1 + static_cast<int>(rng() % 4);
    const int n = m + static_cast<int>(rng() % (11 - m));
    const Matrix phi = oracle::random_matrix(n, m, rng), psi = oracle::random_matrix(n, m, rng);
    const Matrix r = oracle::random_matrix(m, m, rng);
    const DiracSea a{phi, {}}, b{psi, {}};
    auto rel = [](cplx x, cplx ref) { return std::abs(x - ref) / std::abs(ref); };
    worst = std::max(worst, rel(sea_inner(a, b), oracle::tensor_inner(phi, psi)));
    worst = std::max(worst, rel(sea_inner(a, right_op(r, b)), oracle::tensor_inner(phi, psi * r)));
    // transition probability with a unitary U and the lift rotation
    const Matrix u = oracle::random_unitary(n, rng);
    const Matrix in = oracle::random_unitary(n, rng).leftCols(m), out = oracle::random_unitary(n, rng).leftCols(m);
    const DiracSea sin{in, {}}, sout{out, {}};
    const auto lift = lift_rotation(u, sin, sout, 0.0);
    const double expect = std::norm(oracle::tensor_inner(out, u * in * lift.rotation));
    worst = std::max(worst, std::abs(transition_probability(sout, u, lift, sin) - expect) / expect);
  }
  return {worst <= 1e-10, "200 trials, max relative deviation " + fmt("%.2e", worst)};
}

Outcome lift() {
  const MagneticScenario sc;
  const auto grid = build_grid(sc.grid, {});
  const auto d = dressed_propagator(sc.pot, sc.cfg, grid);
  const auto l = dressed_lift(d.raw, d.q_start, d.q_end, *grid, 77);
  double phase_worst = l.phase_change_defect;
  for (std::uint64_t seed : {1, 2, 3, 4}) {
    LiftRotation other = l.lift;
    other.rotation = l.lift.rotation * random_unitary(other.rotation.rows(), seed, true);
    phase_worst = std::max(phase_worst, std::abs(transition_probability(l.out, d.raw, other, l.in) - l.vacuum_probability));
  }
  const double hf = std::abs(l.hartree_fock - l.vacuum_probability);
  std::ostringstream s;
  s << "index " << l.in.index_dimension() << "/" << l.out.index_dimension() << ", charge " << l.relative_charge
    << ", 1 - min eig(B) " << fmt("%.2e", 1.0 - l.b_min_eigenvalue) << ", 1 - P_vac "
    << fmt("%.2e", 1.0 - l.vacuum_probability)
    << ", phase change " << fmt("%.1e", phase_worst) << ", |HF - det| " << fmt("%.1e", hf);
  const bool pass = l.in.index_dimension() == l.out.index_dimension() && l.relative_charge == 0 &&
                    l.b_min_eigenvalue > 0.0 && phase_worst <= 1e-12 && hf <= 1e-9;
  return {pass, s.str()};
}

Outcome car() {
  const FockWindow fock({-4, 3});
  const Eigen::Index dim = static_cast<Eigen::Index>(fock.size());
  const Matrix one = Matrix::Identity(dim, dim);
  double exact_worst = 0.0, float_worst = 0.0;
  std::vector<Matrix> create, annihilate;
  for (int j = 0; j < 8; ++j) {
    Vector e = Vector::Zero(8);
    e[j] = 1.0;
    create.push_back(creation_matrix(fock, e));
    annihilate.push_back(annihilation_matrix(fock, e));
  }
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j) {
      exact_worst = std::max(exact_worst, (annihilate[i] * create[j] + create[j] * annihilate[i] -
                                           (i == j ? 1.0 : 0.0) * one).cwiseAbs().maxCoeff());
      exact_worst = std::max(exact_worst, (create[i] * create[j] + create[j] * create[i]).cwiseAbs().maxCoeff());
    }
  std::mt19937_64 rng(11);
  for (int k = 0; k < 10; ++k) {
    const Vector chi = oracle::random_matrix(8, 1, rng), eta = oracle::random_matrix(8, 1, rng);
    const Matrix a = annihilation_matrix(fock, chi), c = creation_matrix(fock, eta);
    float_worst = std::max(float_worst, (a * c + c * a - chi.dot(eta) * one).cwiseAbs().maxCoeff());
  }
  // charge shifts on every basis state that a mode operator does not kill
  bool shifts = true;
  for (std::uint32_t occ = 0; occ < fock.size(); ++occ) {
    const Vector state = fock.basis_state(occ);
    const int q = fock.charge(occ);
    for (int j = 0; j < 8; ++j) {
      const Vector up = create[j] * state, down = annihilate[j] * state;
      if (up.norm() > 0) shifts = shifts && state_charge(fock, up) == q + 1;
      if (down.norm() > 0) shifts = shifts && state_charge(fock, down) == q - 1;
    }
  }
  std::ostringstream s;
  s << "basis anticommutators max " << fmt("%.1e", exact_worst) << ", random " << fmt("%.1e", float_worst)
    << ", charge shifts " << (shifts ? "ok" : "wrong");
  return {exact_worst == 0.0 && float_worst <= 1e-12 && shifts, s.str()};
}

Outcome determinism() {
  const auto config = load_scenario(std::string(DIRACSEA_SCENARIO_DIR) + "/electric_scan.json", {"seed=42"});
  std::vector<std::string> csv;
  for (unsigned threads : {1u, 2u, 8u}) {
    set_default_threads(threads);
    csv.push_back(run_experiment(config).csv);
  }
  set_default_threads(1);
  const bool same = csv[0] == csv[1] && csv[1] == csv[2];
  return {same, std::string("threads 1, 2, 8: ") + (same ? "byte-identical" : "differ") + " (" +
                    std::to_string(csv[0].size()) + " bytes)"};
}

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {1, "algebra suite", 1, algebra},
      {2, "oddness of Q", 10, oddness},
      {3, "electric/magnetic Q norm dichotomy", 600, dichotomy},
      {4, "dressed evolution saturates", 300, dressing},
      {5, "partial integration identity", 60, partial_integration},
      {6, "convolution estimates", 120, integral_estimates},
      {7, "propagator cross-validation", 120, propagators},
      {8, "gauge covariance", 60, gauge},
      {9, "wedge determinant oracle", 60, wedge_oracle},
      {10, "lift and phase freedom", 300, lift},
      {11, "CAR suite", 10, car},
      {12, "scan determinism", 300, determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));
  set_default_threads(1);
  int failures = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("threw: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += !pass;
    std::printf("[%s] criterion %2d %s: %s (%.1f s%s)\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                in_time ? "" : ", over time budget");
    std::fflush(stdout);
  }
  return failures == 0 ? 0 : 1;
}
