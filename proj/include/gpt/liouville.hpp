#pragma once

// Classical Liouville dynamics on a periodic (x, p) grid. The discretized
// operator is exactly antisymmetric, so exp(-L t) is orthogonal.

#include <functional>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "gpt/kernels.hpp"

namespace gpt::liouville {

struct PhaseSpaceGrid {
  int nx = 16;
  int np = 16;
  double lx = 2.0 * 3.14159265358979323846;  // x in [0, lx)
  double p_max = 3.14159265358979323846;     // p in [-p_max, p_max)
  double mass = 1.0;

  /// Throws InvalidDimension unless nx, np >= 4 and even with positive extents.
  void validate() const;
  double dx() const { return lx / nx; }
  double dp() const { return 2.0 * p_max / np; }
  double x(int i) const { return i * dx(); }
  double p(int j) const { return -p_max + j * dp(); }
  int size() const { return nx * np; }
  /// Row-major cell index over (x, p).
  int index(int i, int j) const { return i * np + j; }
};

struct Potential {
  std::string name;
  std::function<double(double)> gradient;  // V'(x)
};

Potential free_potential();
/// V(x) = k (x - center)^2 / 2.
Potential harmonic_potential(double k, double center);
/// "free" or "harmonic" (k = 1 centred at lx / 2). Throws UnknownTheory.
Potential potential_by_name(const std::string& name, const PhaseSpaceGrid& grid);

using SparseRowMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

struct LiouvilleMatrix {
  PhaseSpaceGrid grid;
  std::string potential;
  SparseRowMatrix matrix;

  kernels::CsrView csr() const;
};

/// L = Dx (x) diag(p/m) - diag(V'(x)) (x) Dp with periodic central differences.
/// Throws NonFinite when V' is not finite on the grid.
LiouvilleMatrix liouville_matrix(const PhaseSpaceGrid& grid, const Potential& potential);

/// max |L + L^T| over all entries.
double antisymmetry_defect(const LiouvilleMatrix& l);

/// Dense exp(-L t) by scaling and squaring. Throws Oversize above 4096 cells.
Eigen::MatrixXd propagator(const LiouvilleMatrix& l, double t);

/// max |M^T M - 1|.
double orthogonality_defect(const Eigen::MatrixXd& m);

struct DensityField {
  Eigen::VectorXd values;
};

/// Validates finiteness, nonnegativity and a positive norm.
DensityField make_density(Eigen::VectorXd values);
DensityField point_density(const PhaseSpaceGrid& grid, int i, int j);
DensityField gaussian_density(const PhaseSpaceGrid& grid, double x0, double p0, double sigma);

enum class Method { Expm, Rk4 };

/// d rho / dt = -L rho. Evolved densities are not required to stay nonnegative.
DensityField liouville_evolve(const LiouvilleMatrix& l, const DensityField& rho0, double t,
                              Method method, double step = 1e-3);

/// Rows "x,p,value" with a header line.
std::string density_csv(const PhaseSpaceGrid& grid, const DensityField& rho);

}  // namespace gpt::liouville
