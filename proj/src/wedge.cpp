#include "diracsea/wedge.hpp"

#include <bit>
#include <cstdint>
#include <sstream>

namespace diracsea {

namespace {

Matrix identity(Eigen::Index n) { return Matrix::Identity(n, n); }

cplx det(const Matrix& m) {
  if (m.rows() == 0) return 1.0;
  return m.partialPivLu().determinant();
}

void require_same_index(const DiracSea& a, const DiracSea& b) {
  if (a.index_dimension() != b.index_dimension() || a.space_dimension() != b.space_dimension())
    throw std::invalid_argument("seas differ in index or space dimension");
}

}  // namespace

double DiracSea::isometry_defect() const {
  return (columns.adjoint() * columns - identity(columns.cols())).norm();
}

DiracSea shifted_sea(const Matrix& basis, const TruncationWindow& window, int shift) {
  if (basis.cols() != window.modes()) throw std::invalid_argument("basis does not match window");
  const int upper = -shift;
  if (upper < window.lowest || upper > window.highest + 1) throw std::out_of_range("shift leaves the window");
  const auto count = static_cast<Eigen::Index>(upper - window.lowest);
  return {basis.leftCols(count), window};
}

cplx sea_inner(const DiracSea& phi, const DiracSea& psi) {
  require_same_index(phi, psi);
  return det(phi.columns.adjoint() * psi.columns);
}

cplx minor_expansion_inner(const DiracSea& phi, const DiracSea& psi) {
  require_same_index(phi, psi);
  const auto n = phi.space_dimension();
  const auto m = phi.index_dimension();
  if (n > 24) throw std::invalid_argument("minor expansion limited to 24 rows");
  cplx total{};
  for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
    if (std::popcount(mask) != m) continue;
    Matrix a(m, m), b(m, m);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n; ++i)
      if (mask >> i & 1) {
        a.row(r) = phi.columns.row(i);
        b.row(r) = psi.columns.row(i);
        ++r;
      }
    total += std::conj(det(a)) * det(b);
  }
  return total;
}

Polar polar_sea(const DiracSea& psi, double rank_tolerance) {
  Eigen::JacobiSVD<Matrix> svd(psi.columns, Eigen::ComputeThinU | Eigen::ComputeThinV);
  const auto& s = svd.singularValues();
  if (s.size() > 0 && s.minCoeff() <= rank_tolerance * std::max(1.0, s.maxCoeff()))
    throw std::invalid_argument("polar_sea: sea is rank deficient");
  Polar out;
  out.isometry = {svd.matrixU() * svd.matrixV().adjoint(), psi.window};
  out.positive = svd.matrixV() * s.cast<cplx>().asDiagonal() * svd.matrixV().adjoint();
  return out;
}

int relative_charge(const DiracSea& v, const DiracSea& w, const GrayZone& gray) {
  if (v.space_dimension() != w.space_dimension()) throw std::invalid_argument("seas live in different spaces");
  const Matrix overlap = w.columns.adjoint() * v.columns;
  if (overlap.size() > 0) {
    Eigen::JacobiSVD<Matrix> svd(overlap);
    for (Eigen::Index k = 0; k < svd.singularValues().size(); ++k) {
      const double s = svd.singularValues()[k];
      if (s >= gray.low && s <= gray.high) {
        std::ostringstream msg;
        msg << "ill-conditioned truncation: overlap singular value " << s << " inside gray zone [" << gray.low
            << ", " << gray.high << "]";
        throw IllConditionedTruncation(msg.str());
      }
    }
  }
  return static_cast<int>(v.index_dimension() - w.index_dimension());
}

ApproxDiagnostics approx_class_diagnostics(const DiracSea& v, const DiracSea& w) {
  const Matrix& V = v.columns;
  const Matrix& W = w.columns;
  const Matrix wv = W.adjoint() * V;
  ApproxDiagnostics d;
  d.hs_offdiag = (V - W * wv).norm();
  d.hs_offdiag_reverse = (W - V * wv.adjoint()).norm();
  d.det_vwv = det(wv.adjoint() * wv);
  d.det_wvw = det(wv * wv.adjoint());
  return d;
}

cplx wedge_inner(const WedgeVector& a, const WedgeVector& b) {
  cplx total{};
  for (const auto& [ca, sa] : a.terms)
    for (const auto& [cb, sb] : b.terms) total += std::conj(ca) * cb * sea_inner(sa, sb);
  return total;
}

Matrix gram_matrix(const WedgeVector& v) {
  const auto n = static_cast<Eigen::Index>(v.terms.size());
  Matrix g(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) g(i, j) = sea_inner(v.terms[i].second, v.terms[j].second);
  return g;
}

DiracSea left_op(const Matrix& u, const DiracSea& phi, double tolerance) {
  if (u.cols() != phi.space_dimension()) throw std::invalid_argument("left_op: dimension mismatch");
  if (unitarity_defect(u) > tolerance) throw std::invalid_argument("left_op: operator is not unitary");
  return {u * phi.columns, phi.window};
}

WedgeVector left_op(const Matrix& u, const WedgeVector& v, double tolerance) {
  if (unitarity_defect(u) > tolerance) throw std::invalid_argument("left_op: operator is not unitary");
  WedgeVector out;
  for (const auto& [c, s] : v.terms) {
    if (u.cols() != s.space_dimension()) throw std::invalid_argument("left_op: dimension mismatch");
    out.terms.emplace_back(c, DiracSea{u * s.columns, s.window});
  }
  return out;
}

DiracSea right_op(const Matrix& r, const DiracSea& phi) {
  if (r.rows() != phi.index_dimension() || r.cols() != r.rows())
    throw std::invalid_argument("right_op: dimension mismatch");
  Eigen::FullPivLU<Matrix> lu(r);
  if (!lu.isInvertible()) throw std::invalid_argument("right_op: matrix is singular");
  return {phi.columns * r, phi.window};
}

WedgeVector right_op(const Matrix& r, const WedgeVector& v) {
  WedgeVector out;
  for (const auto& [c, s] : v.terms) out.terms.emplace_back(c, right_op(r, s));
  return out;
}

LiftRotation lift_rotation(const Matrix& u, const DiracSea& phi, const DiracSea& phi_target, double min_singular) {
  if (phi.index_dimension() != phi_target.index_dimension()) {
    std::ostringstream msg;
    msg << "relative charge nonzero: index dimensions " << phi.index_dimension() << " and "
        << phi_target.index_dimension();
    throw ChargeObstruction(msg.str());
  }
  const Matrix overlap = phi_target.columns.adjoint() * u * phi.columns;
  Eigen::JacobiSVD<Matrix> svd(overlap, Eigen::ComputeFullU | Eigen::ComputeFullV);
  LiftRotation lift;
  lift.min_singular = svd.singularValues().size() ? svd.singularValues().minCoeff() : 1.0;
  if (lift.min_singular < min_singular) {
    std::ostringstream msg;
    msg << "lift_rotation: overlap is near singular (smallest singular value " << lift.min_singular << ")";
    throw IllConditionedTruncation(msg.str());
  }
  // overlap = W S V^* = (W S W^*) (W V^*)
  lift.rotation = svd.matrixV() * svd.matrixU().adjoint();
  lift.positive = svd.matrixU() * svd.singularValues().cast<cplx>().asDiagonal() * svd.matrixU().adjoint();
  return lift;
}

double transition_probability(const DiracSea& out, const Matrix& u, const LiftRotation& lift, const DiracSea& in) {
  require_same_index(out, in);
  if (lift.rotation.rows() != in.index_dimension()) throw std::invalid_argument("lift does not match sea");
  return std::norm(det(out.columns.adjoint() * u * in.columns * lift.rotation));
}

double hartree_fock_probability(const DiracSea& out, const Matrix& u, const DiracSea& in) {
  require_same_index(out, in);
  const Matrix& W = out.columns;
  const Matrix uv = u * in.columns;
  const Matrix x = uv - W * (W.adjoint() * uv);
  return det(identity(in.index_dimension()) - x.adjoint() * x).real();
}

}  // namespace diracsea
