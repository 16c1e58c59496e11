#include "diracsea/runner.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <random>

#include "diracsea/parallel.hpp"

namespace diracsea {

using nlohmann::json;

namespace {

// Fixed-format number so identical inputs give identical bytes.
std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::initializer_list<std::string> header) {
    bool first = true;
    for (const auto& h : header) {
      text_ += (first ? "" : ",") + h;
      first = false;
    }
    text_ += '\n';
  }
  template <class... Ts>
  void row(const Ts&... cells) {
    bool first = true;
    ((text_ += (first ? "" : ","), text_ += cell(cells), first = false), ...);
    text_ += '\n';
  }
  std::string str() const { return text_; }

 private:
  static std::string cell(double v) { return num(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(long v) { return std::to_string(v); }
  static std::string cell(std::size_t v) { return std::to_string(v); }
  static std::string cell(const std::string& v) { return v; }
  static std::string cell(const char* v) { return v; }
  std::string text_;
};

GridPtr make_grid(const ScenarioConfig& c, int n = 0) {
  GridSpec spec = c.grid;
  if (n > 0) spec.n = n;
  return build_grid(spec, c.physics);
}

RunOutput run_spectrum(const ScenarioConfig& c) {
  const auto grid = make_grid(c);
  Csv csv({"site", "p_x", "p_y", "p_z", "energy", "eig_1", "eig_2", "eig_3", "eig_4"});
  double min_abs = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < grid->sites(); ++s) {
    Eigen::SelfAdjointEigenSolver<Mat4> es(grid->hamiltonian(s), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    min_abs = std::min(min_abs, ev.cwiseAbs().minCoeff());
    const Vec3 p = grid->momentum(s);
    csv.row(s, p[0], p[1], p[2], grid->energy(s), ev[0], ev[1], ev[2], ev[3]);
  }
  RunOutput out;
  out.csv = csv.str();
  out.summary["min_abs_eigenvalue"] = min_abs;
  out.summary["mass"] = c.physics.mass;
  return out;
}

RunOutput run_evolve(const ScenarioConfig& c) {
  const auto grid = make_grid(c);
  EvolutionConfig cfg = c.evolution;
  const auto d = dressed_propagator(c.potential, cfg, grid);
  Csv csv({"quantity", "value"});
  csv.row("unitarity_defect", unitarity_defect(d.raw));
  csv.row("pair_probability", pair_creation_probability(*grid, d.raw));
  csv.row("pair_probability_columns", pair_creation_probability_columns(*grid, d.raw));
  csv.row("raw_offdiag_hs", odd_hs_norm(*grid, d.raw));
  csv.row("dressed_offdiag_hs", odd_hs_norm(*grid, d.dressed));
  csv.row("dressed_unitarity_defect", unitarity_defect(d.dressed));
  RunOutput out;
  out.csv = csv.str();
  return out;
}

RunOutput run_scan(const ScenarioConfig& c) {
  const auto res = cutoff_scan(c.potential, c.grid, c.physics, c.scan.sizes, c.evolution, c.scan.threshold);
  Csv csv({"n", "cutoff", "raw_offdiag_hs", "dressed_offdiag_hs", "pair_probability", "unitarity_defect",
           "raw_class", "dressed_class"});
  for (const auto& r : res.rows)
    csv.row(r.n, r.cutoff, r.raw_offdiag_hs, r.dressed_offdiag_hs, r.pair_probability, r.unitarity_defect,
            res.raw_class, res.dressed_class);
  RunOutput out;
  out.csv = csv.str();
  out.summary["raw_class"] = res.raw_class;
  out.summary["dressed_class"] = res.dressed_class;
  out.summary["raw_last_increment"] = res.raw_last_increment;
  out.summary["dressed_last_increment"] = res.dressed_last_increment;
  json times = json::array();
  for (const auto& r : res.rows) times.push_back({{"n", r.n}, {"wall_time", r.wall_time}});
  out.summary["row_wall_times"] = times;
  return out;
}

RunOutput run_qnorm(const ScenarioConfig& c) {
  const bool electric = !c.potential.has_magnetic();
  const double bound =
      electric ? electric_qnorm_bound(c.potential, c.qnorm.time, c.grid.dim, c.physics) : std::nan("");
  Csv csv({"n", "cutoff", "grid_q2", "analytic_q2", "analytic_std_error", "electric_bound"});
  std::vector<double> grid_values;
  for (int n : c.scan.sizes) {
    const auto grid = make_grid(c, n);
    const double g2 = q_frobenius_squared(c.potential, c.qnorm.time, *grid);
    QnormQuadrature quad = c.qnorm.quadrature;
    if (quad.radius <= 0.0) quad.radius = grid->cutoff();
    const auto est = q_norm_analytic(c.potential, c.qnorm.time, c.grid.dim, c.physics, quad);
    csv.row(n, grid->cutoff(), g2, est.value, est.std_error, electric ? num(bound) : std::string("nan"));
    grid_values.push_back(g2);
  }
  RunOutput out;
  out.csv = csv.str();
  if (grid_values.size() >= 2) {
    const double a = grid_values[grid_values.size() - 2], b = grid_values.back();
    out.summary["grid_last_increment"] = a > 0 ? (b - a) / a : 0.0;
  }
  out.summary["electric"] = electric;
  return out;
}

RunOutput run_gauge(const ScenarioConfig& c) {
  const auto grid = make_grid(c);
  Csv csv({"steps", "defect", "relative_defect", "ratio", "pass"});
  RunOutput out;
  double prev = 0.0;
  bool last_pass = false;
  for (int k = 0; k <= c.gauge.refinements; ++k) {
    EvolutionConfig cfg = c.evolution;
    cfg.steps = c.evolution.steps << k;
    const auto r =
        gauge_covariance_check(c.potential, c.gauge.profile, c.gauge.switching, cfg, grid, c.gauge.tolerance,
                               c.gauge.band);
    csv.row(cfg.steps, r.defect, r.relative_defect, k == 0 ? std::string("nan") : num(prev / r.defect),
            r.pass ? "true" : "false");
    prev = r.defect;
    last_pass = r.pass;
  }
  out.csv = csv.str();
  out.summary["pass"] = last_pass;
  return out;
}

RunOutput run_lift(const ScenarioConfig& c) {
  const auto grid = make_grid(c);
  const auto d = dressed_propagator(c.potential, c.evolution, grid);
  const auto lift = dressed_lift(d.raw, d.q_start, d.q_end, *grid, c.seed);
  Csv csv({"quantity", "value"});
  csv.row("index_dimension", static_cast<long>(lift.in.index_dimension()));
  csv.row("relative_charge", lift.relative_charge);
  csv.row("min_singular", lift.lift.min_singular);
  csv.row("b_min_eigenvalue", lift.b_min_eigenvalue);
  csv.row("vacuum_probability", lift.vacuum_probability);
  csv.row("hartree_fock_probability", lift.hartree_fock);
  csv.row("phase_change_defect", lift.phase_change_defect);
  RunOutput out;
  out.csv = csv.str();
  return out;
}

RunOutput run_wedge_suite(const ScenarioConfig& c) {
  Csv csv({"trial", "space", "index", "inner_re", "inner_im", "expansion_re", "expansion_im", "relative_error",
           "right_scaling_error"});
  const auto trials = static_cast<std::size_t>(c.wedge.trials);
  std::vector<std::array<double, 8>> rows(trials);
  parallel_for(trials, [&](std::size_t t) {
    std::mt19937_64 rng(splitmix64(c.seed ^ splitmix64(t)));
    const int m = 1 + static_cast<int>(rng() % c.wedge.max_index);
    const int n = m + 1 + static_cast<int>(rng() % (c.wedge.max_space - m));
    std::normal_distribution<double> g(0.0, 1.0);
    auto gauss = [&](int r, int k) {
      Matrix a(r, k);
      for (int i = 0; i < r; ++i)
        for (int j = 0; j < k; ++j) a(i, j) = cplx(g(rng), g(rng));
      return a;
    };
    const DiracSea phi{gauss(n, m), {}};
    const DiracSea psi{gauss(n, m), {}};
    const Matrix r = gauss(m, m);
    const cplx inner = sea_inner(phi, psi);
    const cplx expansion = minor_expansion_inner(phi, psi);
    const double rel = std::abs(inner - expansion) / std::max(std::abs(expansion), 1e-300);
    const cplx scaled = sea_inner(right_op(r, phi), right_op(r, psi));
    const cplx expected = std::norm(r.determinant()) * inner;
    const double scaling = std::abs(scaled - expected) / std::max(std::abs(expected), 1e-300);
    rows[t] = {double(n), double(m), inner.real(), inner.imag(), expansion.real(), expansion.imag(), rel, scaling};
  });
  double worst = 0.0;
  for (std::size_t t = 0; t < trials; ++t) {
    const auto& r = rows[t];
    csv.row(t, static_cast<int>(r[0]), static_cast<int>(r[1]), r[2], r[3], r[4], r[5], r[6], r[7]);
    worst = std::max({worst, r[6], r[7]});
  }
  RunOutput out;
  out.csv = csv.str();
  out.summary["worst_relative_error"] = worst;
  return out;
}

}  // namespace

Matrix energy_basis(const Grid& grid, Energy sign) {
  const auto n = static_cast<Eigen::Index>(grid.dimension());
  Matrix out = Matrix::Zero(n, n / 2);
  for (std::size_t s = 0; s < grid.sites(); ++s) {
    const auto& pr = grid.projectors(s);
    Eigen::SelfAdjointEigenSolver<Mat4> es(sign == Energy::Plus ? pr.plus : pr.minus);
    // Eigenvalue 1 eigenvectors are the last two in ascending order.
    out.block(static_cast<Eigen::Index>(4 * s), static_cast<Eigen::Index>(2 * s), 4, 2) =
        es.eigenvectors().rightCols(2);
  }
  return out;
}

Matrix random_unitary(Eigen::Index n, std::uint64_t seed, bool unit_determinant) {
  std::mt19937_64 rng(splitmix64(seed));
  std::normal_distribution<double> g(0.0, 1.0);
  Matrix a(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) a(i, j) = cplx(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index j = 0; j < n; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  if (unit_determinant) q *= std::pow(q.determinant(), -1.0 / static_cast<double>(n));
  return q;
}

DressedLift dressed_lift(const Matrix& u, const Matrix& q_start, const Matrix& q_end, const Grid& grid,
                         std::uint64_t s_seed) {
  const Matrix neg = energy_basis(grid, Energy::Minus);
  auto unitary = [](const Matrix& q) -> Matrix {
    if (q.isZero(0.0)) return Matrix::Identity(q.rows(), q.cols());
    return exp_skew(q, 1e-9);
  };
  DressedLift out;
  out.in = {unitary(q_start) * neg, {}};
  out.out = {unitary(q_end) * neg, {}};
  out.relative_charge = relative_charge(left_op(u, out.in), out.out);
  out.lift = lift_rotation(u, out.in, out.out);
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (out.lift.positive + out.lift.positive.adjoint()),
                                           Eigen::EigenvaluesOnly);
  out.b_min_eigenvalue = es.eigenvalues().minCoeff();
  out.vacuum_probability = transition_probability(out.out, u, out.lift, out.in);
  out.hartree_fock = hartree_fock_probability(out.out, u, out.in);
  LiftRotation turned = out.lift;
  turned.rotation = out.lift.rotation * random_unitary(out.lift.rotation.rows(), s_seed, true);
  out.phase_change_defect = std::abs(transition_probability(out.out, u, turned, out.in) - out.vacuum_probability);
  return out;
}

RunOutput run_experiment(const ScenarioConfig& config) {
  switch (config.experiment) {
    case Experiment::Spectrum: return run_spectrum(config);
    case Experiment::Evolve: return run_evolve(config);
    case Experiment::Scan: return run_scan(config);
    case Experiment::Qnorm: return run_qnorm(config);
    case Experiment::Lift: return run_lift(config);
    case Experiment::Gauge: return run_gauge(config);
    case Experiment::WedgeSuite: return run_wedge_suite(config);
  }
  throw std::logic_error("unhandled experiment");
}

void write_artifacts(const ScenarioConfig& config, const RunOutput& out, const std::string& out_dir,
                     double wall_time, unsigned threads) {
  std::filesystem::create_directories(out_dir);
  const auto dir = std::filesystem::path(out_dir);
  {
    std::ofstream csv(dir / "results.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write " + (dir / "results.csv").string());
    csv << out.csv;
  }
  json meta;
  meta["tool"] = "diracsea";
  meta["version"] = kToolVersion;
  meta["format"] = kFormatVersion;
  meta["experiment"] = experiment_name(config.experiment);
  meta["config_hash"] = config_hash(config.source);
  meta["config"] = config.source;
  meta["seed"] = config.seed;
  meta["threads"] = threads;
  meta["dense_budget_bytes"] = config.evolution.dense_budget;
  meta["thresholds"] = {{"scan_saturation", config.scan.threshold},
                        {"gauge_tolerance", config.gauge.tolerance},
                        {"gauge_band", config.gauge.band},
                        {"born_tolerance", config.evolution.born_tolerance},
                        {"gray_zone", {GrayZone{}.low, GrayZone{}.high}}};
  meta["tolerances"] = {{"skew_hermitian_exp", 1e-9},
                        {"left_op_unitarity", 1e-9},
                        {"lift_min_singular", 1e-8},
                        {"polar_rank", 1e-12},
                        {"window_span", 1e-10}};
  meta["summary"] = out.summary;
  meta["warnings"] = out.warnings;
  meta["wall_time_seconds"] = wall_time;
  std::ofstream m(dir / "metadata.json");
  if (!m) throw std::runtime_error("cannot write " + (dir / "metadata.json").string());
  m << meta.dump(2) << '\n';
}

}  // namespace diracsea
