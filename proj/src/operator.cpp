#include "diracsea/operator.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <random>
#include <sstream>

#include "diracsea/parallel.hpp"

namespace diracsea {

GridOperator GridOperator::dense(GridPtr grid, Matrix m) {
  if (m.rows() != static_cast<Eigen::Index>(grid->dimension()) || m.cols() != m.rows())
    throw std::invalid_argument("dense operator shape does not match grid dimension");
  GridOperator op;
  op.grid_ = std::move(grid);
  op.dense_ = std::move(m);
  return op;
}

GridOperator GridOperator::matrix_free(GridPtr grid, Applier apply, Applier apply_adjoint) {
  GridOperator op;
  op.grid_ = std::move(grid);
  op.apply_ = std::move(apply);
  op.apply_adjoint_ = std::move(apply_adjoint);
  return op;
}

const Matrix& GridOperator::matrix() const {
  if (!dense_) throw std::logic_error("operator is matrix-free");
  return *dense_;
}

Matrix GridOperator::apply(const Matrix& x) const {
  if (dense_) return *dense_ * x;
  return apply_(x);
}

Matrix GridOperator::apply_adjoint(const Matrix& x) const {
  if (dense_) return dense_->adjoint() * x;
  return apply_adjoint_(x);
}

GridOperator GridOperator::adjoint() const {
  if (dense_) return dense(grid_, dense_->adjoint());
  auto op = matrix_free(grid_, apply_adjoint_, apply_);
  op.parity_known_ = parity_known_;
  return op;
}

GridOperator GridOperator::densified(std::size_t budget) const {
  if (dense_) return *this;
  check_dense_budget(grid_->dimension(), budget);
  const auto n = dimension();
  return dense(grid_, apply_(Matrix::Identity(n, n)));
}

namespace {
const Mat4& projector(const Grid& g, std::size_t site, Energy s) {
  return s == Energy::Plus ? g.projectors(site).plus : g.projectors(site).minus;
}
}  // namespace

Matrix project_rows(const Grid& grid, const Matrix& m, Energy sign) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t s = 0; s < grid.sites(); ++s) {
    const auto r = static_cast<Eigen::Index>(4 * s);
    out.middleRows(r, 4).noalias() = projector(grid, s, sign) * m.middleRows(r, 4);
  }
  return out;
}

Matrix project_cols(const Grid& grid, const Matrix& m, Energy sign) {
  Matrix out(m.rows(), m.cols());
  for (std::size_t s = 0; s < grid.sites(); ++s) {
    const auto c = static_cast<Eigen::Index>(4 * s);
    out.middleCols(c, 4).noalias() = m.middleCols(c, 4) * projector(grid, s, sign);
  }
  return out;
}

Matrix block(const Grid& grid, const Matrix& m, Energy sigma, Energy tau) {
  return project_cols(grid, project_rows(grid, m, sigma), tau);
}

std::pair<GridOperator, GridOperator> parity_split(const GridOperator& op) {
  const GridPtr& g = op.grid_ptr();
  if (op.is_dense()) {
    const Matrix& m = op.matrix();
    Matrix ev = block(*g, m, Energy::Plus, Energy::Plus) + block(*g, m, Energy::Minus, Energy::Minus);
    Matrix odd = m - ev;
    auto e = GridOperator::dense(g, std::move(ev));
    auto o = GridOperator::dense(g, std::move(odd));
    e.parity_known_ = o.parity_known_ = true;
    return {std::move(e), std::move(o)};
  }
  auto even_part = [g](const GridOperator::Applier& f) {
    return [g, f](const Matrix& x) -> Matrix {
      const Matrix xp = project_rows(*g, x, Energy::Plus);
      const Matrix xm = x - xp;
      return project_rows(*g, f(xp), Energy::Plus) + project_rows(*g, f(xm), Energy::Minus);
    };
  };
  auto e = GridOperator::matrix_free(g, even_part(op.apply_), even_part(op.apply_adjoint_));
  auto o = GridOperator::matrix_free(
      g, [op, e](const Matrix& x) -> Matrix { return op.apply(x) - e.apply(x); },
      [op, e](const Matrix& x) -> Matrix { return op.apply_adjoint(x) - e.apply_adjoint(x); });
  e.parity_known_ = o.parity_known_ = true;
  return {std::move(e), std::move(o)};
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

HsEstimate hs_norm(const GridOperator& op, std::optional<std::pair<Energy, Energy>> blk, const HsOptions& opts) {
  const Grid& g = op.grid();
  if (op.is_dense()) {
    if (!blk) return {op.matrix().norm(), 0.0, true};
    return {block(g, op.matrix(), blk->first, blk->second).norm(), 0.0, true};
  }
  if (opts.probes < 2) throw std::invalid_argument("stochastic Hilbert-Schmidt estimate needs at least 2 probes");
  const auto n = op.dimension();
  std::vector<double> samples(static_cast<std::size_t>(opts.probes));
  parallel_for(samples.size(), [&](std::size_t k) {
    std::mt19937_64 rng(splitmix64(opts.seed ^ splitmix64(k)));
    std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
    Matrix z(n, 1);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, 0) = cplx(re, im);
    }
    if (blk) z = project_rows(g, z, blk->second);
    Matrix y = op.apply(z);
    if (blk) y = project_rows(g, y, blk->first);
    samples[k] = y.squaredNorm();
  });
  double mean = 0.0;
  for (double s : samples) mean += s;
  mean /= samples.size();
  double var = 0.0;
  for (double s : samples) var += (s - mean) * (s - mean);
  var /= (samples.size() - 1);
  const double se_sq = std::sqrt(var / samples.size());
  const double value = std::sqrt(std::max(mean, 0.0));
  // Delta method: d sqrt(x) = dx / (2 sqrt x).
  const double se = value > 0.0 ? se_sq / (2.0 * value) : std::sqrt(se_sq);
  return {value, se, false};
}

Matrix exp_skew(const Matrix& q, double tolerance) {
  const double scale = std::max(1.0, q.norm());
  if ((q + q.adjoint()).norm() > tolerance * scale)
    throw std::invalid_argument("exp_skew: operator is not skew-Hermitian within tolerance");
  const Matrix h = I * q;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (h + h.adjoint()));
  if (es.info() != Eigen::Success) throw std::runtime_error("exp_skew: eigensolver failed");
  const Eigen::VectorXcd phases = (-I * es.eigenvalues().cast<cplx>()).array().exp();
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

GridOperator exp_skew(const GridOperator& q, double tolerance) {
  return GridOperator::dense(q.grid_ptr(), exp_skew(q.matrix(), tolerance));
}

double unitarity_defect(const Matrix& u) {
  return (u.adjoint() * u - Matrix::Identity(u.cols(), u.cols())).norm();
}

namespace {
constexpr char kMagic[4] = {'D', 'S', 'M', 'X'};
constexpr std::uint32_t kVersion = 1;

void require_little_endian() {
  if constexpr (std::endian::native != std::endian::little)
    throw std::runtime_error("binary matrix container requires a little-endian host");
}
}  // namespace

void write_matrix_binary(const std::string& path, const Matrix& m) {
  require_little_endian();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  const std::uint64_t rows = m.rows(), cols = m.cols();
  out.write(kMagic, 4);
  out.write(reinterpret_cast<const char*>(&kVersion), sizeof kVersion);
  out.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  out.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const double v[2] = {m(r, c).real(), m(r, c).imag()};
      out.write(reinterpret_cast<const char*>(v), sizeof v);
    }
  if (!out) throw std::runtime_error("write failed for " + path);
}

Matrix read_matrix_binary(const std::string& path) {
  require_little_endian();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  char magic[4];
  std::uint32_t version = 0;
  std::uint64_t rows = 0, cols = 0;
  in.read(magic, 4);
  in.read(reinterpret_cast<char*>(&version), sizeof version);
  in.read(reinterpret_cast<char*>(&rows), sizeof rows);
  in.read(reinterpret_cast<char*>(&cols), sizeof cols);
  if (!in || std::memcmp(magic, kMagic, 4) != 0 || version != kVersion)
    throw std::runtime_error(path + ": not a matrix container");
  Matrix m(static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      double v[2];
      in.read(reinterpret_cast<char*>(v), sizeof v);
      m(r, c) = cplx(v[0], v[1]);
    }
  if (!in) throw std::runtime_error(path + ": truncated matrix container");
  return m;
}

void write_matrix_csv(const std::string& path, const Matrix& m, double drop) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out.precision(17);
  out << "row,col,re,im\n";
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) > drop || drop == 0.0)
        out << r << ',' << c << ',' << m(r, c).real() << ',' << m(r, c).imag() << '\n';
}

Matrix read_matrix_csv(const std::string& path, Eigen::Index rows, Eigen::Index cols) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::string line;
  std::getline(in, line);
  if (line != "row,col,re,im") throw std::runtime_error(path + ": unexpected CSV header");
  Matrix m = Matrix::Zero(rows, cols);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ss(line);
    long r = 0, c = 0;
    double re = 0, im = 0;
    char comma;
    ss >> r >> comma >> c >> comma >> re >> comma >> im;
    if (!ss || r < 0 || c < 0 || r >= rows || c >= cols) throw std::runtime_error(path + ": bad CSV row '" + line + "'");
    m(r, c) = cplx(re, im);
  }
  return m;
}

}  // namespace diracsea
