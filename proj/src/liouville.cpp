#include "gpt/liouville.hpp"

#include <cmath>
#include <cstdio>
#include <vector>

#include <unsupported/Eigen/MatrixFunctions>

#include "gpt/error.hpp"

namespace gpt::liouville {

namespace {

constexpr int kMaxExpmSize = 4096;

void check_size(const LiouvilleMatrix& l, const DensityField& rho) {
  if (rho.values.size() != l.grid.size()) {
    throw Error(ErrorKind::DimensionMismatch, "density does not match the grid");
  }
}

}  // namespace

void PhaseSpaceGrid::validate() const {
  if (nx < 4 || np < 4 || nx % 2 != 0 || np % 2 != 0) {
    throw Error(ErrorKind::InvalidDimension, "grid sizes must be even and at least 4");
  }
  if (!(lx > 0.0) || !(p_max > 0.0) || !(mass > 0.0)) {
    throw Error(ErrorKind::InvalidDimension, "grid extents and mass must be positive");
  }
}

Potential free_potential() {
  return {"free", [](double) { return 0.0; }};
}

Potential harmonic_potential(double k, double center) {
  return {"harmonic", [k, center](double x) { return k * (x - center); }};
}

Potential potential_by_name(const std::string& name, const PhaseSpaceGrid& grid) {
  if (name == "free") return free_potential();
  if (name == "harmonic") return harmonic_potential(1.0, 0.5 * grid.lx);
  throw Error(ErrorKind::UnknownTheory, "unknown potential '" + name + "'");
}

kernels::CsrView LiouvilleMatrix::csr() const {
  kernels::CsrView v;
  v.rows = static_cast<int>(matrix.rows());
  v.row_ptr = {matrix.outerIndexPtr(), static_cast<size_t>(matrix.rows() + 1)};
  v.cols = {matrix.innerIndexPtr(), static_cast<size_t>(matrix.nonZeros())};
  v.values = {matrix.valuePtr(), static_cast<size_t>(matrix.nonZeros())};
  return v;
}

LiouvilleMatrix liouville_matrix(const PhaseSpaceGrid& grid, const Potential& potential) {
  grid.validate();
  const double cx = 1.0 / (2.0 * grid.dx());
  const double cp = 1.0 / (2.0 * grid.dp());
  std::vector<double> vprime(static_cast<size_t>(grid.nx));
  for (int i = 0; i < grid.nx; ++i) {
    vprime[static_cast<size_t>(i)] = potential.gradient(grid.x(i));
    if (!std::isfinite(vprime[static_cast<size_t>(i)])) {
      throw Error(ErrorKind::NonFinite, "potential gradient is not finite on the grid");
    }
  }
  std::vector<Eigen::Triplet<double, int>> triplets;
  triplets.reserve(static_cast<size_t>(4 * grid.size()));
  for (int i = 0; i < grid.nx; ++i) {
    const int ip = (i + 1) % grid.nx;
    const int im = (i + grid.nx - 1) % grid.nx;
    for (int j = 0; j < grid.np; ++j) {
      const int jp = (j + 1) % grid.np;
      const int jm = (j + grid.np - 1) % grid.np;
      const int row = grid.index(i, j);
      // Each value appears once with each sign, so L + L^T vanishes exactly.
      const double a = cx * grid.p(j) / grid.mass;
      triplets.emplace_back(row, grid.index(ip, j), a);
      triplets.emplace_back(row, grid.index(im, j), -a);
      const double b = cp * vprime[static_cast<size_t>(i)];
      triplets.emplace_back(row, grid.index(i, jp), -b);
      triplets.emplace_back(row, grid.index(i, jm), b);
    }
  }
  LiouvilleMatrix l;
  l.grid = grid;
  l.potential = potential.name;
  l.matrix.resize(grid.size(), grid.size());
  l.matrix.setFromTriplets(triplets.begin(), triplets.end());
  l.matrix.prune(0.0);
  l.matrix.makeCompressed();
  return l;
}

double antisymmetry_defect(const LiouvilleMatrix& l) {
  const SparseRowMatrix t = l.matrix.transpose();
  const SparseRowMatrix sum = l.matrix + t;
  double worst = 0.0;
  for (int k = 0; k < sum.outerSize(); ++k) {
    for (SparseRowMatrix::InnerIterator it(sum, k); it; ++it) worst = std::max(worst, std::abs(it.value()));
  }
  return worst;
}

Eigen::MatrixXd propagator(const LiouvilleMatrix& l, double t) {
  if (l.grid.size() > kMaxExpmSize) {
    throw Error(ErrorKind::Oversize, "grid has " + std::to_string(l.grid.size()) +
                                         " cells; the dense exponential is limited to " +
                                         std::to_string(kMaxExpmSize) + ", use rk4");
  }
  const Eigen::MatrixXd dense = Eigen::MatrixXd(l.matrix) * (-t);
  return dense.exp();
}

double orthogonality_defect(const Eigen::MatrixXd& m) {
  return (m.transpose() * m - Eigen::MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff();
}

DensityField make_density(Eigen::VectorXd values) {
  if (!values.allFinite()) throw Error(ErrorKind::NonFinite, "density is not finite");
  if ((values.array() < 0.0).any()) throw Error(ErrorKind::NotAState, "density must be nonnegative");
  if (!(values.norm() > 0.0)) throw Error(ErrorKind::NotAState, "density must not vanish");
  return DensityField{std::move(values)};
}

DensityField point_density(const PhaseSpaceGrid& grid, int i, int j) {
  grid.validate();
  if (i < 0 || i >= grid.nx || j < 0 || j >= grid.np) {
    throw Error(ErrorKind::DimensionMismatch, "cell index outside the grid");
  }
  Eigen::VectorXd v = Eigen::VectorXd::Zero(grid.size());
  v(grid.index(i, j)) = 1.0;
  return make_density(std::move(v));
}

DensityField gaussian_density(const PhaseSpaceGrid& grid, double x0, double p0, double sigma) {
  grid.validate();
  Eigen::VectorXd v(grid.size());
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.np; ++j) {
      const double dx = grid.x(i) - x0;
      const double dp = grid.p(j) - p0;
      v(grid.index(i, j)) = std::exp(-(dx * dx + dp * dp) / (2.0 * sigma * sigma));
    }
  }
  return make_density(std::move(v));
}

DensityField liouville_evolve(const LiouvilleMatrix& l, const DensityField& rho0, double t,
                              Method method, double step) {
  check_size(l, rho0);
  if (!std::isfinite(t) || t < 0.0) throw Error(ErrorKind::InvalidTime, "time must be finite and >= 0");
  if (t == 0.0) return rho0;
  DensityField out;
  if (method == Method::Expm) {
    out.values = propagator(l, t) * rho0.values;
    return out;
  }
  if (!(step > 0.0)) throw Error(ErrorKind::InvalidTime, "rk4 step must be positive");
  out.values = rho0.values;
  kernels::rk4_linear(l.csr(), -1.0, {out.values.data(), static_cast<size_t>(out.values.size())}, t, step);
  return out;
}

std::string density_csv(const PhaseSpaceGrid& grid, const DensityField& rho) {
  std::string out = "x,p,value\n";
  char line[96];
  for (int i = 0; i < grid.nx; ++i) {
    for (int j = 0; j < grid.np; ++j) {
      std::snprintf(line, sizeof line, "%.12g,%.12g,%.12g\n", grid.x(i), grid.p(j),
                    rho.values(grid.index(i, j)));
      out += line;
    }
  }
  return out;
}

}  // namespace gpt::liouville
