#include "diracsea/fock.hpp"

#include <bit>

namespace diracsea {

FockWindow::FockWindow(TruncationWindow window) : window_(window) {
  if (window_.modes() < 1 || window_.modes() > 24) throw std::invalid_argument("Fock window needs 1..24 modes");
}

std::uint32_t FockWindow::bit(int label) const {
  if (label < window_.lowest || label > window_.highest) throw std::out_of_range("mode label outside window");
  return std::uint32_t{1} << (label - window_.lowest);
}

std::uint32_t FockWindow::vacuum() const {
  std::uint32_t s = 0;
  for (int j = window_.lowest; j < 0 && j <= window_.highest; ++j) s |= bit(j);
  return s;
}

int FockWindow::charge(std::uint32_t occupation) const {
  int c = 0;
  for (int j = window_.lowest; j <= window_.highest; ++j) {
    const bool occupied = occupation & bit(j);
    if (j >= 0 && occupied) ++c;
    if (j < 0 && !occupied) --c;
  }
  return c;
}

Vector FockWindow::basis_state(std::uint32_t occupation) const {
  Vector v = Vector::Zero(static_cast<Eigen::Index>(size()));
  v(occupation) = 1.0;
  return v;
}

HoleParticle hole_particle(const FockWindow& fock, std::uint32_t occupation) {
  HoleParticle hp;
  const auto& w = fock.window();
  for (int j = w.lowest; j <= w.highest; ++j) {
    const bool occupied = occupation & fock.bit(j);
    if (j >= 0 && occupied) hp.particles.push_back(j);
    if (j < 0 && !occupied) hp.holes.push_back(j);
  }
  hp.charge = static_cast<int>(hp.particles.size()) - static_cast<int>(hp.holes.size());
  return hp;
}

std::uint32_t occupation_from(const FockWindow& fock, const HoleParticle& hp) {
  std::uint32_t s = fock.vacuum();
  for (int j : hp.particles) {
    if (j < 0) throw std::invalid_argument("particle label must be >= 0");
    s |= fock.bit(j);
  }
  for (int j : hp.holes) {
    if (j >= 0) throw std::invalid_argument("hole label must be < 0");
    s &= ~fock.bit(j);
  }
  return s;
}

Vector window_coefficients(const Matrix& basis, const Vector& chi, double tolerance) {
  const Vector c = basis.adjoint() * chi;
  if ((chi - basis * c).norm() > tolerance * std::max(1.0, chi.norm()))
    throw std::invalid_argument("one-particle vector lies outside the window span");
  return c;
}

namespace {

// Sign (-1)^{#{i in S, i < j}} for bit position j.
double ordering_sign(std::uint32_t s, int pos) {
  const std::uint32_t below = s & ((std::uint32_t{1} << pos) - 1);
  return std::popcount(below) % 2 ? -1.0 : 1.0;
}

void require_sizes(const FockWindow& fock, const Vector& chi, const Vector* state) {
  if (chi.size() != fock.modes()) throw std::invalid_argument("mode vector does not match window");
  if (state && state->size() != static_cast<Eigen::Index>(fock.size()))
    throw std::invalid_argument("Fock vector does not match window");
}

}  // namespace

Vector car_create(const FockWindow& fock, const Vector& chi, const Vector& state) {
  require_sizes(fock, chi, &state);
  Vector out = Vector::Zero(state.size());
  for (std::uint32_t s = 0; s < fock.size(); ++s) {
    if (state(s) == cplx{}) continue;
    for (int pos = 0; pos < fock.modes(); ++pos) {
      const std::uint32_t b = std::uint32_t{1} << pos;
      if (s & b || chi(pos) == cplx{}) continue;
      out(s | b) += ordering_sign(s, pos) * chi(pos) * state(s);
    }
  }
  return out;
}

Vector car_annihilate(const FockWindow& fock, const Vector& chi, const Vector& state) {
  require_sizes(fock, chi, &state);
  Vector out = Vector::Zero(state.size());
  for (std::uint32_t s = 0; s < fock.size(); ++s) {
    if (state(s) == cplx{}) continue;
    for (int pos = 0; pos < fock.modes(); ++pos) {
      const std::uint32_t b = std::uint32_t{1} << pos;
      if (!(s & b) || chi(pos) == cplx{}) continue;
      out(s & ~b) += ordering_sign(s, pos) * std::conj(chi(pos)) * state(s);
    }
  }
  return out;
}

Matrix creation_matrix(const FockWindow& fock, const Vector& chi) {
  require_sizes(fock, chi, nullptr);
  const auto n = static_cast<Eigen::Index>(fock.size());
  Matrix m = Matrix::Zero(n, n);
  for (std::uint32_t s = 0; s < fock.size(); ++s)
    for (int pos = 0; pos < fock.modes(); ++pos) {
      const std::uint32_t b = std::uint32_t{1} << pos;
      if (!(s & b)) m(s | b, s) += ordering_sign(s, pos) * chi(pos);
    }
  return m;
}

Matrix annihilation_matrix(const FockWindow& fock, const Vector& chi) {
  return creation_matrix(fock, chi).adjoint();
}

int state_charge(const FockWindow& fock, const Vector& state, double tolerance) {
  if (state.size() != static_cast<Eigen::Index>(fock.size())) throw std::invalid_argument("Fock vector size");
  bool found = false;
  int charge = 0;
  for (std::uint32_t s = 0; s < fock.size(); ++s) {
    if (std::abs(state(s)) <= tolerance) continue;
    const int c = fock.charge(s);
    if (found && c != charge) throw std::invalid_argument("state mixes charge sectors");
    found = true;
    charge = c;
  }
  if (!found) throw std::invalid_argument("state is zero");
  return charge;
}

}  // namespace diracsea
