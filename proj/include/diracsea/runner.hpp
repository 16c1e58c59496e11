#pragma once

#include <string>
#include <vector>

#include "diracsea/scenario.hpp"
#include "diracsea/wedge.hpp"

namespace diracsea {

inline constexpr const char* kToolVersion = "0.1.0";
// Bumped whenever any CSV header changes.
inline constexpr int kFormatVersion = 1;

struct RunOutput {
  std::string csv;
  nlohmann::json summary = nlohmann::json::object();
  std::vector<std::string> warnings;
};

// Runs the configured experiment; the CSV text depends only on the config.
RunOutput run_experiment(const ScenarioConfig& config);

// results.csv and metadata.json under out_dir (created if missing).
void write_artifacts(const ScenarioConfig& config, const RunOutput& out, const std::string& out_dir,
                     double wall_time, unsigned threads);

// Columns of the free negative (or positive) energy eigenvectors, two per site.
Matrix energy_basis(const Grid& grid, Energy sign);

struct DressedLift {
  DiracSea in;             // e^{Q(t0)} times the negative-energy basis
  DiracSea out;            // e^{Q(t1)} times the negative-energy basis
  LiftRotation lift;
  double b_min_eigenvalue = 0.0;
  double vacuum_probability = 0.0;     // |det(out^* U in R)|^2
  double hartree_fock = 0.0;           // det(1 - |P_{out perp} U P_in|^2)
  double phase_change_defect = 0.0;    // probability change under R -> R S, det S = 1
  int relative_charge = 0;
};

// Lift of U between the dressed seas at t0 and t1; s_seed draws the det-1 unitary S.
DressedLift dressed_lift(const Matrix& u, const Matrix& q_start, const Matrix& q_end, const Grid& grid,
                         std::uint64_t s_seed);

// Haar-distributed unitary of size n, optionally rescaled to determinant 1.
Matrix random_unitary(Eigen::Index n, std::uint64_t seed, bool unit_determinant);

}  // namespace diracsea
