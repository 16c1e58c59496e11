#pragma once

#include <cstdint>
#include <vector>

#include "diracsea/wedge.hpp"

namespace diracsea {

// Fock space of a finite mode window. Basis elements are occupation sets,
// stored as bit masks with bit (j - lowest) for mode label j. Modes with
// negative labels are filled in the vacuum.
class FockWindow {
 public:
  explicit FockWindow(TruncationWindow window);

  const TruncationWindow& window() const { return window_; }
  int modes() const { return window_.modes(); }
  std::size_t size() const { return std::size_t{1} << modes(); }

  std::uint32_t bit(int label) const;
  std::uint32_t vacuum() const;
  // Number of occupied particle modes minus number of empty sea modes.
  int charge(std::uint32_t occupation) const;
  Vector basis_state(std::uint32_t occupation) const;

 private:
  TruncationWindow window_;
};

struct HoleParticle {
  std::vector<int> particles;  // occupied labels >= 0
  std::vector<int> holes;      // empty labels < 0
  int charge = 0;
};
HoleParticle hole_particle(const FockWindow& fock, std::uint32_t occupation);
std::uint32_t occupation_from(const FockWindow& fock, const HoleParticle& hp);

// Coefficients of a one-particle vector in the window basis; throws when the
// vector leaves the span by more than `tolerance`.
Vector window_coefficients(const Matrix& basis, const Vector& chi, double tolerance = 1e-10);

// a^*_chi = sum_j chi_j a^*_j with a^*_j |S> = (-1)^{#{i in S, i < j}} |S + j>.
Vector car_create(const FockWindow& fock, const Vector& chi, const Vector& state);
// a_chi = sum_j conj(chi_j) a_j, the adjoint of car_create.
Vector car_annihilate(const FockWindow& fock, const Vector& chi, const Vector& state);
// Dense matrices of the same maps.
Matrix creation_matrix(const FockWindow& fock, const Vector& chi);
Matrix annihilation_matrix(const FockWindow& fock, const Vector& chi);

// Charge of a state supported in a single sector; throws on mixed support.
int state_charge(const FockWindow& fock, const Vector& state, double tolerance = 1e-12);

}  // namespace diracsea
