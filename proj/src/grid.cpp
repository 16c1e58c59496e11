#include "diracsea/grid.hpp"

#include <cmath>
#include <mutex>
#include <numbers>
#include <string>

#include <fftw3.h>

namespace diracsea {

namespace {
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}
}  // namespace

void GridSpec::validate() const {
  if (dim != 1 && dim != 3) throw std::invalid_argument("grid.dim must be 1 or 3");
  if (n < 4 || n % 2 != 0) throw std::invalid_argument("grid.n must be even and >= 4");
  if (!(box_length > 0.0) || !std::isfinite(box_length))
    throw std::invalid_argument("grid.box_length must be positive");
}

struct Grid::Plan {
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;
  // Four interleaved spinor components at once.
  fftw_plan state_forward = nullptr;
  fftw_plan state_backward = nullptr;
  std::size_t size = 0;
  ~Plan() {
    std::lock_guard lock(planner_mutex());
    for (auto p : {forward, backward, state_forward, state_backward})
      if (p) fftw_destroy_plan(p);
  }
};

Grid::Grid(const GridSpec& spec, const PhysicsParams& params) : spec_(spec), params_(params) {
  spec_.validate();
  params_.validate();
  sites_ = 1;
  for (int a = 0; a < spec_.dim; ++a) {
    if (sites_ > (std::size_t{1} << 40) / static_cast<std::size_t>(spec_.n))
      throw BudgetError("grid size overflow");
    sites_ *= static_cast<std::size_t>(spec_.n);
  }
  momenta_.resize(sites_);
  energies_.resize(sites_);
  hamiltonians_.resize(sites_);
  projectors_.resize(sites_);
  for (std::size_t s = 0; s < sites_; ++s) {
    const auto c = coords(s);
    Vec3 p = Vec3::Zero();
    for (int a = 0; a < spec_.dim; ++a) p[a] = c[a] * dp();
    momenta_[s] = p;
    energies_[s] = diracsea::energy(p, params_.mass);
    hamiltonians_[s] = free_hamiltonian(p, params_.mass);
    projectors_[s] = energy_projectors(p, params_.mass);
  }
  fft_order_.resize(sites_);
  for (std::size_t s = 0; s < sites_; ++s) {
    const auto c = coords(s);
    std::size_t k = 0;
    for (int a = 0; a < spec_.dim; ++a) k = k * spec_.n + static_cast<std::size_t>((c[a] + spec_.n) % spec_.n);
    fft_order_[s] = k;
  }

  plan_ = std::make_shared<Plan>();
  plan_->size = sites_;
  std::vector<int> shape(spec_.dim, spec_.n);
  std::vector<cplx> scratch(sites_);
  auto* buf = reinterpret_cast<fftw_complex*>(scratch.data());
  std::lock_guard lock(planner_mutex());
  const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
  plan_->forward = fftw_plan_dft(spec_.dim, shape.data(), buf, buf, FFTW_FORWARD, flags);
  plan_->backward = fftw_plan_dft(spec_.dim, shape.data(), buf, buf, FFTW_BACKWARD, flags);
  std::vector<cplx> state_scratch(4 * sites_);
  auto* sbuf = reinterpret_cast<fftw_complex*>(state_scratch.data());
  for (int sign : {FFTW_FORWARD, FFTW_BACKWARD}) {
    auto p = fftw_plan_many_dft(spec_.dim, shape.data(), 4, sbuf, nullptr, 4, 1, sbuf, nullptr, 4, 1, sign, flags);
    (sign == FFTW_FORWARD ? plan_->state_forward : plan_->state_backward) = p;
  }
}

double Grid::dp() const { return 2.0 * std::numbers::pi / spec_.box_length; }
double Grid::dx() const { return spec_.box_length / spec_.n; }
double Grid::cutoff() const { return std::numbers::pi * spec_.n / spec_.box_length; }
double Grid::cell() const { return std::pow(dp(), spec_.dim); }

std::array<int, 3> Grid::coords(std::size_t site) const {
  std::array<int, 3> c{0, 0, 0};
  const auto n = static_cast<std::size_t>(spec_.n);
  for (int a = spec_.dim - 1; a >= 0; --a) {
    c[a] = static_cast<int>(site % n) - spec_.n / 2;
    site /= n;
  }
  return c;
}

std::size_t Grid::site_of(const std::array<int, 3>& c) const {
  std::size_t s = 0;
  for (int a = 0; a < spec_.dim; ++a) {
    if (c[a] < -spec_.n / 2 || c[a] >= spec_.n / 2) throw std::out_of_range("lattice coordinate");
    s = s * spec_.n + static_cast<std::size_t>(c[a] + spec_.n / 2);
  }
  return s;
}

Vec3 Grid::position(std::size_t site) const {
  const auto c = coords(site);
  Vec3 x = Vec3::Zero();
  for (int a = 0; a < spec_.dim; ++a) x[a] = c[a] * dx();
  return x;
}

// Site order is the FFT order shifted by n/2 along every axis. Since
// exp(-2 pi i j l / n) only depends on j, l mod n, the shift commutes with the
// transform up to relabeling, so we rotate into FFTW order and back.
void Grid::transform(std::span<cplx> field, int sign) const {
  if (field.size() != sites_) throw std::invalid_argument("field size does not match grid");
  std::vector<cplx> buf(sites_);
  for (std::size_t s = 0; s < sites_; ++s) buf[fft_order_[s]] = field[s];
  auto* b = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(sign < 0 ? plan_->forward : plan_->backward, b, b);
  for (std::size_t s = 0; s < sites_; ++s) field[s] = buf[fft_order_[s]];
}

void Grid::transform_state(std::span<cplx> state, int sign) const {
  if (state.size() != 4 * sites_) throw std::invalid_argument("state size does not match grid");
  thread_local std::vector<cplx> buf;
  buf.resize(4 * sites_);
  for (std::size_t s = 0; s < sites_; ++s)
    for (std::size_t a = 0; a < 4; ++a) buf[4 * fft_order_[s] + a] = state[4 * s + a];
  auto* b = reinterpret_cast<fftw_complex*>(buf.data());
  fftw_execute_dft(sign < 0 ? plan_->state_forward : plan_->state_backward, b, b);
  const double scale = 1.0 / std::sqrt(static_cast<double>(sites_));
  for (std::size_t s = 0; s < sites_; ++s)
    for (std::size_t a = 0; a < 4; ++a) state[4 * s + a] = scale * buf[4 * fft_order_[s] + a];
}

void Grid::state_to_position(std::span<cplx> state) const { transform_state(state, +1); }
void Grid::state_to_momentum(std::span<cplx> state) const { transform_state(state, -1); }

void Grid::unitary_to_position(std::span<cplx> field) const {
  transform(field, +1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(sites_));
  for (auto& v : field) v *= scale;
}

void Grid::unitary_to_momentum(std::span<cplx> field) const {
  transform(field, -1);
  const double scale = 1.0 / std::sqrt(static_cast<double>(sites_));
  for (auto& v : field) v *= scale;
}

void Grid::sampled_to_momentum(std::span<cplx> field) const {
  transform(field, -1);
  const double scale = std::pow(dx() / (2.0 * std::numbers::pi), spec_.dim);
  for (auto& v : field) v *= scale;
}

void Grid::sampled_to_position(std::span<cplx> field) const {
  transform(field, +1);
  const double scale = cell();
  for (auto& v : field) v *= scale;
}

GridPtr build_grid(const GridSpec& spec, const PhysicsParams& params) {
  return std::make_shared<const Grid>(spec, params);
}

void check_dense_budget(std::size_t dim, std::size_t budget) {
  const long double bytes = static_cast<long double>(dim) * dim * sizeof(cplx);
  if (bytes > static_cast<long double>(budget))
    throw BudgetError("dense operator of dimension " + std::to_string(dim) + " needs " +
                      std::to_string(static_cast<unsigned long long>(bytes)) + " bytes, budget is " +
                      std::to_string(budget));
}

}  // namespace diracsea
