#pragma once

#include <string>
#include <vector>

#include "diracsea/field.hpp"

namespace diracsea {

enum class Method { StrangSplit, DenseMidpointExp, BornSeries };

struct EvolutionConfig {
  double t0 = 0.0;
  double t1 = 1.0;
  int steps = 100;
  Method method = Method::StrangSplit;
  int born_order = 1;
  int quadrature_points = 200;
  // Relative change tolerated when the Born quadrature is halved.
  double born_tolerance = 1e-3;
  KernelWrap wrap = KernelWrap::Periodic;
  std::size_t dense_budget = kDefaultDenseBudget;

  void validate() const;
};

// exp(-i dt H0(p)) per site, from the spectral projectors.
std::vector<Mat4> free_blocks(const Grid& grid, double dt);
GridOperator free_propagator(const GridPtr& grid, double dt);
// Multiplies a dense matrix from the left by the block-diagonal free propagator.
Matrix apply_free(const std::vector<Mat4>& blocks, const Matrix& m);
Matrix apply_free_right(const Matrix& m, const std::vector<Mat4>& blocks);

// Interaction exp(-i dt V(x)) at every lattice position, V(x) = e sum_mu alpha^mu a_mu(x)
// with a_mu the band-limited interpolant of the potential on the lattice.
std::vector<Mat4> position_propagators(const PotentialSpec& pot, double t, const Grid& grid, double dt);

struct Evolution {
  Matrix u;
  std::vector<std::string> warnings;
};

// U(t1, t0) applied to `initial` (identity when empty).
Evolution evolve(const PotentialSpec& pot, const EvolutionConfig& cfg, const GridPtr& grid,
                 const Matrix& initial = Matrix());

// Born iterate of the requested order on a uniform time grid of
// cfg.quadrature_points panels, trapezoid rule.
Evolution born_series(const PotentialSpec& pot, const EvolutionConfig& cfg, const GridPtr& grid);

struct Dressed {
  Matrix raw;
  Matrix dressed;
  Matrix q_start;
  Matrix q_end;
};
// e^{-Q(t1)} U e^{Q(t0)} with Q built from the same kernel convention as U.
Dressed dressed_propagator(const PotentialSpec& pot, const EvolutionConfig& cfg, const GridPtr& grid);

// ||U_{+-}||_2^2
double pair_creation_probability(const Grid& grid, const Matrix& u);
// Same quantity by summing ||P+ U phi_n||^2 over an eigenbasis phi_n of the
// negative-energy subspace.
double pair_creation_probability_columns(const Grid& grid, const Matrix& u);
// sqrt(||U_{+-}||^2 + ||U_{-+}||^2)
double odd_hs_norm(const Grid& grid, const Matrix& u);

struct PartialIntegration {
  double residual = 0.0;
  double lhs_norm = 0.0;
};
// || U0 Z U0 - (Q U0 - U0 Q - U0 Q' U0 + U0 Z_ev U0) ||_F with every time
// integral taken by the composite trapezoid rule on `nodes` panels.
PartialIntegration partial_integration_residual(const PotentialSpec& pot, double t0, double t1, const GridPtr& grid,
                                                int nodes, KernelWrap wrap = KernelWrap::Aperiodic);

struct GronwallResult {
  std::vector<double> defects;       // ||R^(n)(t1) - (1 - Q(t1)) U (1 + Q(t0))||_F, n = 1..iters
  std::vector<double> odd_norms;     // odd-block HS norm of R^(n)(t1)
  double reference_odd_norm = 0.0;   // odd-block HS norm of the dense reference
  bool diverged = false;
};
GronwallResult gronwall_fixed_point(const PotentialSpec& pot, const EvolutionConfig& cfg, const GridPtr& grid,
                                    int iterations);

struct GaugeCheck {
  double defect = 0.0;           // Frobenius norm on the momentum band
  double relative_defect = 0.0;  // defect / sqrt(band_states)
  std::size_t band_states = 0;
  bool pass = false;
};
// Compares exp(i e Y(t1)) U^A with U^{A~} exp(i e Y(t0)) for Y(t, x) = f(t) y(x),
// A~ = A - dY, f the smooth step over the switching window. The difference is
// measured on momenta with |p_a| <= band * cutoff.
GaugeCheck gauge_covariance_check(const PotentialSpec& pot, const PotentialTerm& gauge_profile,
                                  const Envelope& switching, const EvolutionConfig& cfg, const GridPtr& grid,
                                  double tolerance, double band = 0.5);
PotentialSpec gauge_transformed(const PotentialSpec& pot, const PotentialTerm& gauge_profile,
                                const Envelope& switching, int dim);
// exp(i e f(t) y(x)) as a dense operator in momentum coordinates.
Matrix gauge_phase(const PotentialTerm& gauge_profile, const Envelope& switching, double t, const Grid& grid);

struct ScanRow {
  int n = 0;
  double cutoff = 0.0;
  double raw_offdiag_hs = 0.0;
  double dressed_offdiag_hs = 0.0;
  double pair_probability = 0.0;
  double unitarity_defect = 0.0;
  double wall_time = 0.0;
};

struct ScanResult {
  std::vector<ScanRow> rows;
  std::string raw_class;
  std::string dressed_class;
  double raw_last_increment = 0.0;
  double dressed_last_increment = 0.0;
  double threshold = 0.02;
};

// One dense evolution per lattice size at fixed box length.
ScanResult cutoff_scan(const PotentialSpec& pot, const GridSpec& base, const PhysicsParams& params,
                       const std::vector<int>& sizes, const EvolutionConfig& cfg, double threshold = 0.02);

}  // namespace diracsea
