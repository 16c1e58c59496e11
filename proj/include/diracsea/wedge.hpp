#pragma once

#include <stdexcept>
#include <vector>

#include "diracsea/operator.hpp"

namespace diracsea {

// A singular value fell between the rank thresholds, so the truncation cannot
// decide the relative charge.
struct IllConditionedTruncation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Lifting needs equal index dimensions; unequal ones mean nonzero relative charge.
struct ChargeObstruction : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Mode labels lowest..highest; labels below zero form the reference sea.
struct TruncationWindow {
  int lowest = 0;
  int highest = -1;
  int modes() const { return highest - lowest + 1; }
};

// Columns are the occupied one-particle states, in ascending mode order when
// built from a basis.
struct DiracSea {
  Matrix columns;
  TruncationWindow window;

  Eigen::Index index_dimension() const { return columns.cols(); }
  Eigen::Index space_dimension() const { return columns.rows(); }
  double isometry_defect() const;
};

// Sea spanned by basis columns for labels lowest..upper-1 of the window,
// i.e. the shifted sea with `shift` = -upper. shifted_sea(basis, w, 0) is the
// reference sea of all negative labels.
DiracSea shifted_sea(const Matrix& basis, const TruncationWindow& window, int shift);

// det(Phi^* Psi)
cplx sea_inner(const DiracSea& phi, const DiracSea& psi);
// Same pairing expanded over M x M row minors, sum_S conj(det Phi_S) det Psi_S.
// Exponential cost; meant for small cross-checks.
cplx minor_expansion_inner(const DiracSea& phi, const DiracSea& psi);

struct Polar {
  DiracSea isometry;
  Matrix positive;
};
// Psi = Upsilon R with Upsilon isometric and R = sqrt(Psi^* Psi).
Polar polar_sea(const DiracSea& psi, double rank_tolerance = 1e-12);

struct GrayZone {
  double low = 1e-8;
  double high = 1e-2;
};

// Index of the overlap map V -> W, i.e. dim ker - dim coker of W^* V, which
// at finite truncation equals M_V - M_W. Throws IllConditionedTruncation when
// a singular value of W^* V lies inside the gray zone.
int relative_charge(const DiracSea& v, const DiracSea& w, const GrayZone& gray = {});

struct ApproxDiagnostics {
  double hs_offdiag = 0.0;          // ||P_{W perp} P_V||_2
  double hs_offdiag_reverse = 0.0;  // ||P_W P_{V perp}||_2
  cplx det_vwv{0.0, 0.0};           // det of P_V P_W P_V restricted to V
  cplx det_wvw{0.0, 0.0};           // det of P_W P_V P_W restricted to W
};
ApproxDiagnostics approx_class_diagnostics(const DiracSea& v, const DiracSea& w);

struct WedgeVector {
  std::vector<std::pair<cplx, DiracSea>> terms;
};

cplx wedge_inner(const WedgeVector& a, const WedgeVector& b);
// Pairwise sea_inner of the terms of v.
Matrix gram_matrix(const WedgeVector& v);

// Applies the unitary to every column of every sea.
WedgeVector left_op(const Matrix& u, const WedgeVector& v, double tolerance = 1e-9);
DiracSea left_op(const Matrix& u, const DiracSea& phi, double tolerance = 1e-9);
// Phi -> Phi R for invertible R.
WedgeVector right_op(const Matrix& r, const WedgeVector& v);
DiracSea right_op(const Matrix& r, const DiracSea& phi);

struct LiftRotation {
  Matrix rotation;               // R, unitary
  Matrix positive;               // B = Phi'^* U Phi R, Hermitian psd
  double min_singular = 0.0;     // smallest singular value of Phi'^* U Phi
};

// Polar decomposition Phi'^* U Phi = B Q, R = Q^{-1}. The overall phase of R
// is a free choice; any R S with |det S| = 1 unitary gives the same
// transition probabilities.
LiftRotation lift_rotation(const Matrix& u, const DiracSea& phi, const DiracSea& phi_target,
                           double min_singular = 1e-8);

// |det(Psi_out^* U Psi_in R)|^2
double transition_probability(const DiracSea& out, const Matrix& u, const LiftRotation& lift, const DiracSea& in);
// det(1 - |P_{W perp} U P_V|^2) restricted to V, W = out, V = in.
double hartree_fock_probability(const DiracSea& out, const Matrix& u, const DiracSea& in);

}  // namespace diracsea
