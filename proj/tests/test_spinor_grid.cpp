#include <doctest.h>

#include "diracsea/grid.hpp"
#include "diracsea/potential.hpp"
#include "oracles.hpp"

using namespace diracsea;

TEST_CASE("dirac matrices match the Pauli-block construction") {
  CHECK((beta() - oracle::beta()).norm() == 0.0);
  CHECK((alpha(0) - Mat4::Identity()).norm() == 0.0);
  for (int i = 1; i <= 3; ++i) CHECK((alpha(i) - oracle::alpha(i)).norm() == 0.0);
  for (int mu = 0; mu < 4; ++mu) CHECK((gamma(mu) - oracle::gamma(mu)).norm() < 1e-15);
}

TEST_CASE("anticommutation relations") {
  const Mat4 one = Mat4::Identity();
  CHECK((beta() * beta() - one).cwiseAbs().maxCoeff() <= 1e-14);
  for (int i = 1; i <= 3; ++i) {
    CHECK((alpha(i) * beta() + beta() * alpha(i)).cwiseAbs().maxCoeff() <= 1e-14);
    CHECK(std::abs(alpha(i).trace()) == 0.0);
    for (int j = 1; j <= 3; ++j) {
      const Mat4 expect = (i == j ? 2.0 : 0.0) * one;
      CHECK((alpha(i) * alpha(j) + alpha(j) * alpha(i) - expect).cwiseAbs().maxCoeff() <= 1e-14);
    }
  }
  for (int mu = 0; mu < 4; ++mu)
    for (int nu = 0; nu < 4; ++nu) {
      const Mat4 ac = gamma(mu) * gamma(nu) + gamma(nu) * gamma(mu);
      CHECK((ac - 2.0 * metric(mu, nu) * one).cwiseAbs().maxCoeff() <= 1e-14);
    }
}

TEST_CASE("gamma traces") {
  CHECK(std::abs((gamma(0) * gamma(0)).trace() - 4.0) < 1e-14);
  CHECK(std::abs((gamma(0) * gamma(1) * gamma(2)).trace()) < 1e-14);
  // tr(g1 g1 g2 g2) = 4 g11 g22 computed from the oracle matrices
  const auto g = [](int mu) { return oracle::gamma(mu); };
  CHECK(std::abs((g(1) * g(1) * g(2) * g(2)).trace() - 4.0) < 1e-14);
  CHECK(std::abs((gamma(1) * gamma(1) * gamma(2) * gamma(2)).trace() - 4.0) < 1e-14);
  CHECK(gamma_trace_check() < 1e-13);
}

TEST_CASE("energy and free hamiltonian") {
  CHECK(energy(Vec3::Zero(), 1.0) == 1.0);
  CHECK(energy(Vec3(1, 1, 1), 1.0) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK((free_hamiltonian(Vec3::Zero(), 1.0) - beta()).norm() == 0.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> n(0.0, 2.0);
  for (int k = 0; k < 20; ++k) {
    const Vec3 p(n(rng), n(rng), n(rng));
    const double m = 0.3 + std::abs(n(rng));
    const Mat4 h = free_hamiltonian(p, m);
    CHECK((h - oracle::hamiltonian(p, m)).norm() < 1e-14);
    const double e = energy(p, m);
    CHECK((h * h - e * e * Mat4::Identity()).cwiseAbs().maxCoeff() < 1e-12 * e * e);
    Eigen::SelfAdjointEigenSolver<Mat4> es(h);
    CHECK(es.eigenvalues()[0] == doctest::Approx(-e).epsilon(1e-13));
    CHECK(es.eigenvalues()[1] == doctest::Approx(-e).epsilon(1e-13));
    CHECK(es.eigenvalues()[2] == doctest::Approx(e).epsilon(1e-13));
    CHECK(es.eigenvalues()[3] == doctest::Approx(e).epsilon(1e-13));
  }
}

TEST_CASE("spectral projectors") {
  const auto zero = energy_projectors(Vec3::Zero(), 1.0);
  CHECK((zero.plus - 0.5 * (Mat4::Identity() + beta())).norm() < 1e-15);
  CHECK((zero.minus - 0.5 * (Mat4::Identity() - beta())).norm() < 1e-15);
  std::mt19937_64 rng(9);
  std::normal_distribution<double> n(0.0, 3.0);
  for (int k = 0; k < 50; ++k) {
    const Vec3 p(n(rng), n(rng), n(rng));
    const double m = 0.5;
    const auto pr = energy_projectors(p, m);
    const double e = energy(p, m);
    CHECK((pr.plus - oracle::projector(p, m, +1)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK((pr.plus * pr.plus - pr.plus).norm() <= 1e-12);
    CHECK((pr.minus * pr.minus - pr.minus).norm() <= 1e-12);
    CHECK((pr.plus + pr.minus - Mat4::Identity()).norm() <= 1e-14);
    const Mat4 h = free_hamiltonian(p, m);
    CHECK((h * pr.plus - e * pr.plus).norm() <= 1e-12 * e);
    CHECK((h * pr.minus + e * pr.minus).norm() <= 1e-12 * e);
    CHECK(std::abs(pr.plus.trace() - 2.0) < 1e-13);
  }
}

TEST_CASE("closed-form exponential of alpha combinations") {
  std::mt19937_64 rng(2);
  std::normal_distribution<double> n(0.0, 1.0);
  for (int k = 0; k < 10; ++k) {
    const double t = n(rng), a0 = n(rng);
    const Vec3 a(n(rng), n(rng), n(rng));
    Mat4 gen = a0 * Mat4::Identity();
    for (int i = 0; i < 3; ++i) gen += a[i] * oracle::alpha(i + 1);
    Eigen::SelfAdjointEigenSolver<Mat4> es(gen);
    const Mat4 expect = es.eigenvectors() * (es.eigenvalues() * (-t)).unaryExpr([](double x) {
                          return std::polar(1.0, x);
                        }).asDiagonal() * es.eigenvectors().adjoint();
    CHECK((exp_alpha_combination(t, a0, a) - expect).norm() < 1e-13);
  }
}

TEST_CASE("momentum lattice") {
  const Grid g({1, 4, 2 * M_PI}, {});
  REQUIRE(g.sites() == 4);
  CHECK(g.momentum(0)[0] == doctest::Approx(-2.0));
  CHECK(g.momentum(1)[0] == doctest::Approx(-1.0));
  CHECK(g.momentum(2)[0] == doctest::Approx(0.0));
  CHECK(g.momentum(3)[0] == doctest::Approx(1.0));
  const Grid g3({3, 6, 5.0}, {});
  for (std::size_t s = 0; s < g3.sites(); ++s) CHECK(g3.site_of(g3.coords(s)) == s);
}

TEST_CASE("dense budget refusal") {
  CHECK_THROWS_AS(check_dense_budget(4 * 32 * 32 * 32, std::size_t{1} << 30), BudgetError);
  CHECK_NOTHROW(check_dense_budget(4 * 64, std::size_t{1} << 30));
}

TEST_CASE("sampled transform matches a direct Riemann sum") {
  for (int dim : {1, 3}) {
    const Grid g({dim, dim == 1 ? 8 : 4, 7.0}, {});
    std::mt19937_64 rng(dim);
    std::normal_distribution<double> n(0.0, 1.0);
    std::vector<cplx> f(g.sites());
    for (auto& v : f) v = cplx(n(rng), n(rng));
    std::vector<cplx> work = f;
    g.sampled_to_momentum(work);
    const double scale = std::pow(g.dx() / (2 * M_PI), dim);
    double worst = 0.0;
    for (std::size_t j = 0; j < g.sites(); ++j) {
      cplx s = 0.0;
      for (std::size_t l = 0; l < g.sites(); ++l) s += std::exp(-oracle::kI * g.momentum(j).dot(g.position(l))) * f[l];
      worst = std::max(worst, std::abs(scale * s - work[j]));
    }
    CHECK(worst < 1e-13);
    g.sampled_to_position(work);
    for (std::size_t l = 0; l < g.sites(); ++l) CHECK(std::abs(work[l] - f[l]) < 1e-13);
  }
}

TEST_CASE("unitary transforms agree with a naive DFT and round-trip") {
  const Grid g({1, 16, 9.0}, {});
  std::mt19937_64 rng(4);
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<cplx> f(16);
  for (auto& v : f) v = cplx(n(rng), n(rng));
  std::vector<cplx> w = f;
  g.unitary_to_momentum(w);
  double norm_f = 0, norm_w = 0;
  for (int i = 0; i < 16; ++i) norm_f += std::norm(f[i]), norm_w += std::norm(w[i]);
  CHECK(norm_w == doctest::Approx(norm_f).epsilon(1e-13));
  // Shifted index ranges only change phases, so magnitudes match the naive DFT.
  const auto ref = oracle::naive_dft(f, -1);
  std::vector<double> a, b;
  for (int i = 0; i < 16; ++i) a.push_back(std::abs(w[i])), b.push_back(std::abs(ref[i]) / 4.0);
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  for (int i = 0; i < 16; ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12));
  g.unitary_to_position(w);
  for (int i = 0; i < 16; ++i) CHECK(std::abs(w[i] - f[i]) < 1e-12);

  std::vector<cplx> state(4 * 16);
  for (auto& v : state) v = cplx(n(rng), n(rng));
  auto copy = state;
  g.state_to_position(copy);
  // Each spinor component transforms like a scalar field.
  for (int c = 0; c < 4; ++c) {
    std::vector<cplx> comp(16);
    for (int s = 0; s < 16; ++s) comp[s] = state[4 * s + c];
    g.unitary_to_position(comp);
    for (int s = 0; s < 16; ++s) CHECK(std::abs(copy[4 * s + c] - comp[s]) < 1e-13);
  }
  g.state_to_momentum(copy);
  for (std::size_t i = 0; i < state.size(); ++i) CHECK(std::abs(copy[i] - state[i]) < 1e-12);
}

TEST_CASE("closed-form profile transforms match the sampled transform") {
  for (int dim : {1, 3}) {
    const int n = dim == 1 ? 128 : 36;
    const Grid g({dim, n, 28.0}, {});
    for (auto profile : {ProfileKind::Gaussian, ProfileKind::GaussianGradient, ProfileKind::GaussianCosine}) {
      PotentialTerm t;
      t.amplitude = 1.0;
      t.sigma = 2.0;
      t.center = Vec3(0.4, -0.3, 0.2);
      t.profile = profile;
      t.axis = 0;
      t.wavevector = Vec3(0.6, 0.0, 0.3);
      std::vector<cplx> f(g.sites());
      for (std::size_t s = 0; s < g.sites(); ++s) f[s] = profile_value(t, g.position(s), dim);
      g.sampled_to_momentum(f);
      double worst = 0.0, parseval_x = 0.0, parseval_p = 0.0;
      for (std::size_t s = 0; s < g.sites(); ++s) {
        worst = std::max(worst, std::abs(f[s] - profile_fourier(t, g.momentum(s), dim)));
        parseval_p += std::norm(f[s]);
        parseval_x += std::norm(profile_value(t, g.position(s), dim));
      }
      INFO("dim ", dim, " profile ", int(profile));
      CHECK(worst < 1e-8);
      // sum |f(x)|^2 dx^d = (2 pi)^d sum |f^(p)|^2 dp^d
      CHECK(parseval_x * std::pow(g.dx(), dim) ==
            doctest::Approx(std::pow(2 * M_PI, dim) * parseval_p * std::pow(g.dp(), dim)).epsilon(1e-8));
    }
  }
}

TEST_CASE("envelopes") {
  const Envelope sin2{EnvelopeKind::SinSquared, 0.0, 2.0};
  CHECK(sin2.value(-0.1) == 0.0);
  CHECK(sin2.value(1.0) == doctest::Approx(1.0));
  CHECK(sin2.value(2.5) == 0.0);
  const Envelope step{EnvelopeKind::SmoothStep, 0.2, 1.8};
  CHECK(step.value(0.1) == 0.0);
  CHECK(step.value(1.0) == doctest::Approx(0.5));
  CHECK(step.value(3.0) == 1.0);
  // derivatives against central differences
  for (const Envelope& e : {sin2, step, Envelope{EnvelopeKind::SmoothBump, -1.0, 1.5}}) {
    for (double t : {0.3, 0.7, 1.1}) {
      for (int order = 1; order <= 2; ++order) {
        const double h = 1e-4;
        const double fd = (e.derivative(t + h, order - 1) - e.derivative(t - h, order - 1)) / (2 * h);
        CHECK(e.derivative(t, order) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("class-A norms") {
  PotentialSpec zero;
  const auto z = class_a_norms(zero, 1);
  for (const auto& mu : z.norms)
    for (const auto& m : mu)
      for (double v : m) CHECK(v == 0.0);

  PotentialTerm t;
  t.component = 0;
  t.amplitude = 0.5;
  t.sigma = 1.0;
  t.envelope = {EnvelopeKind::SinSquared, 0.0, 2.0};
  const auto r = class_a_norms(PotentialSpec{{t}}, 1);
  CHECK(r.all_finite);
  CHECK(r.norms[0][0][0] > 0.0);
  CHECK(r.norms[1][0][0] == 0.0);
}
