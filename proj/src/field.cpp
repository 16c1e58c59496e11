#include "diracsea/field.hpp"

#include "diracsea/parallel.hpp"

namespace diracsea {

namespace {

int wrap_difference(int d, int n) {
  int w = ((d % n) + n) % n;
  return w >= n / 2 ? w - n : w;
}

}  // namespace

// The unpaired -n/2 component is averaged with +n/2 so the folded kernel
// stays Hermitian and its position-space image stays real.
FourVector folded_fourier(const Grid& grid, const PotentialSpec& pot, double t, const std::array<int, 3>& w,
                          int time_order) {
  const int dim = grid.dim();
  const int n = grid.n();
  int nyquist_axes = 0;
  for (int a = 0; a < dim; ++a)
    if (w[a] == -n / 2) ++nyquist_axes;
  const int variants = 1 << nyquist_axes;
  FourVector c{};
  for (int v = 0; v < variants; ++v) {
    Vec3 k = Vec3::Zero();
    int bit = 0;
    for (int a = 0; a < dim; ++a) {
      int comp = w[a];
      if (comp == -n / 2 && ((v >> bit++) & 1)) comp = n / 2;
      k[a] = comp * grid.dp();
    }
    const auto term = potential_fourier(pot, t, k, dim, time_order);
    for (int mu = 0; mu < 4; ++mu) c[mu] += term[mu] / static_cast<double>(variants);
  }
  return c;
}

KernelTable::KernelTable(const Grid& grid, const PotentialSpec& pot, double t, int time_order, KernelWrap wrap)
    : grid_(&grid), span_(2 * grid.n() - 1) {
  const int dim = grid.dim();
  const int n = grid.n();
  std::size_t count = 1;
  for (int a = 0; a < dim; ++a) count *= static_cast<std::size_t>(span_);
  coeffs_.assign(count, FourVector{});
  blocks_.assign(count, Mat4::Zero());
  if (pot.empty()) return;

  const double scale = grid.params().charge * grid.cell();
  const double dp = grid.dp();
  for (std::size_t idx = 0; idx < count; ++idx) {
    std::array<int, 3> d{0, 0, 0};
    std::size_t rest = idx;
    for (int a = dim - 1; a >= 0; --a) {
      d[a] = static_cast<int>(rest % span_) - (n - 1);
      rest /= span_;
    }
    FourVector c{};
    if (wrap == KernelWrap::Aperiodic) {
      Vec3 k = Vec3::Zero();
      for (int a = 0; a < dim; ++a) k[a] = d[a] * dp;
      c = potential_fourier(pot, t, k, dim, time_order);
    } else {
      std::array<int, 3> w{0, 0, 0};
      for (int a = 0; a < dim; ++a) w[a] = wrap_difference(d[a], n);
      c = folded_fourier(grid, pot, t, w, time_order);
    }
    coeffs_[idx] = c;
    Mat4 m = Mat4::Zero();
    for (int mu = 0; mu < 4; ++mu)
      if (c[mu] != cplx{}) m += c[mu] * alpha(mu);
    blocks_[idx] = -I * scale * m;
    if (!m.isZero(0.0)) zero_ = false;
  }
}

std::size_t KernelTable::index(std::size_t row_site, std::size_t col_site) const {
  const auto a = grid_->coords(row_site);
  const auto b = grid_->coords(col_site);
  const int n = grid_->n();
  std::size_t idx = 0;
  for (int ax = 0; ax < grid_->dim(); ++ax) idx = idx * span_ + static_cast<std::size_t>(a[ax] - b[ax] + n - 1);
  return idx;
}

const Mat4& KernelTable::block(std::size_t row_site, std::size_t col_site) const {
  return blocks_[index(row_site, col_site)];
}

const FourVector& KernelTable::coefficients(std::size_t row_site, std::size_t col_site) const {
  return coeffs_[index(row_site, col_site)];
}

Mat4 dressing_block(const Grid& grid, std::size_t row_site, std::size_t col_site, const Mat4& z) {
  const double ep = grid.energy(row_site);
  const double eq = grid.energy(col_site);
  const Mat4 lhs = (grid.hamiltonian(row_site) / ep) * z;
  const Mat4 rhs = z * (grid.hamiltonian(col_site) / eq);
  return (lhs - rhs) / (2.0 * I * (ep + eq));
}

namespace {

enum class Kind { Interaction, Dressing };

GridOperator assemble(const PotentialSpec& pot, double t, int time_order, const GridPtr& grid,
                      const FieldOptions& opts, Kind kind) {
  const Grid& g = *grid;
  auto table = std::make_shared<const KernelTable>(g, pot, t, time_order, opts.wrap);
  auto entry = [grid, table, kind](std::size_t a, std::size_t b) -> Mat4 {
    const Mat4& z = table->block(a, b);
    return kind == Kind::Interaction ? z : dressing_block(*grid, a, b, z);
  };
  const std::size_t sites = g.sites();

  bool go_dense = !opts.matrix_free;
  if (go_dense) {
    try {
      check_dense_budget(g.dimension(), opts.dense_budget);
    } catch (const BudgetError&) {
      if (!opts.fallback_matrix_free) throw;
      go_dense = false;
    }
  }
  if (go_dense) {
    const auto dim = static_cast<Eigen::Index>(g.dimension());
    Matrix m = Matrix::Zero(dim, dim);
    if (!table->zero()) {
      parallel_for(sites, [&](std::size_t a) {
        for (std::size_t b = 0; b < sites; ++b)
          m.block<4, 4>(static_cast<Eigen::Index>(4 * a), static_cast<Eigen::Index>(4 * b)) = entry(a, b);
      });
    }
    return GridOperator::dense(grid, std::move(m));
  }

  auto apply = [grid, entry, sites](const Matrix& x, bool adjoint) -> Matrix {
    Matrix y = Matrix::Zero(x.rows(), x.cols());
    parallel_for(sites, [&](std::size_t a) {
      const auto ra = static_cast<Eigen::Index>(4 * a);
      for (std::size_t b = 0; b < sites; ++b) {
        const auto rb = static_cast<Eigen::Index>(4 * b);
        if (adjoint)
          y.middleRows(ra, 4).noalias() += entry(b, a).adjoint() * x.middleRows(rb, 4);
        else
          y.middleRows(ra, 4).noalias() += entry(a, b) * x.middleRows(rb, 4);
      }
    });
    return y;
  };
  return GridOperator::matrix_free(
      grid, [apply](const Matrix& x) { return apply(x, false); }, [apply](const Matrix& x) { return apply(x, true); });
}

}  // namespace

GridOperator z_operator(const PotentialSpec& pot, double t, const GridPtr& grid, const FieldOptions& opts) {
  return assemble(pot, t, 0, grid, opts, Kind::Interaction);
}

GridOperator q_operator(const PotentialSpec& pot, double t, const GridPtr& grid, const FieldOptions& opts) {
  return assemble(pot, t, 0, grid, opts, Kind::Dressing);
}

GridOperator q_prime(const PotentialSpec& pot, double t, const GridPtr& grid, const FieldOptions& opts) {
  return assemble(pot, t, 1, grid, opts, Kind::Dressing);
}

double q_frobenius_squared(const PotentialSpec& pot, double t, const Grid& grid, KernelWrap wrap) {
  const KernelTable table(grid, pot, t, 0, wrap);
  if (table.zero()) return 0.0;
  const std::size_t sites = grid.sites();
  std::vector<double> rows(sites, 0.0);
  parallel_for(sites, [&](std::size_t a) {
    double acc = 0.0;
    for (std::size_t b = 0; b < sites; ++b) acc += dressing_block(grid, a, b, table.block(a, b)).squaredNorm();
    rows[a] = acc;
  });
  double total = 0.0;
  for (double r : rows) total += r;
  return total;
}

}  // namespace diracsea
