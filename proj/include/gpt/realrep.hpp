#pragma once

// Quantum bridge: generalized Gell-Mann bases, su(d) structure constants,
// density matrix <-> Bloch vector maps and the two evolution routes
// (matrix von Neumann and real-vector ODE). hbar = 1 throughout.

#include <vector>

#include <Eigen/Dense>

namespace gpt::realrep {

using CMatrix = Eigen::MatrixXcd;
using RVector = Eigen::VectorXd;

struct HermitianBasis {
  int d = 0;
  /// d^2 - 1 traceless Hermitian matrices with Tr(l_i l_j) = 2 delta_ij.
  /// Order: symmetric off-diagonal, antisymmetric off-diagonal, diagonal;
  /// each family in lexicographic (row, column) order.
  std::vector<CMatrix> elements;

  int size() const { return static_cast<int>(elements.size()); }
};

/// Totally antisymmetric f_jkl with [l_j, l_k] = 2i f_jkl l_l (0-based indices).
class StructureTensor {
 public:
  StructureTensor(int d, int n) : d_(d), n_(n), data_(static_cast<size_t>(n) * n * n, 0.0) {}

  int d() const { return d_; }
  int n() const { return n_; }
  double operator()(int i, int j, int k) const { return data_[index(i, j, k)]; }
  double& operator()(int i, int j, int k) { return data_[index(i, j, k)]; }

  /// Largest |f_ijk + f_jik| or |f_ijk + f_ikj| over all index triples.
  double antisymmetry_defect() const;

 private:
  size_t index(int i, int j, int k) const {
    return (static_cast<size_t>(i) * n_ + j) * n_ + k;
  }
  int d_;
  int n_;
  std::vector<double> data_;
};

HermitianBasis gellmann_basis(int d);

/// Largest deviation from Hermiticity, tracelessness and Tr(l_i l_j) = 2 delta_ij.
double basis_defect(const HermitianBasis& basis);

StructureTensor structure_constants(const HermitianBasis& basis);

RVector bloch_from_density(const CMatrix& rho, const HermitianBasis& basis);

/// rho = 1/d + (1/2) sum u_j l_j. Throws NotAStateError when the smallest
/// eigenvalue is below -1e-10.
CMatrix density_from_bloch(const RVector& u, const HermitianBasis& basis);

/// Unchecked reconstruction; used where positivity is not the question.
CMatrix operator_from_bloch(const RVector& u, const HermitianBasis& basis);

/// H = (v0/2) 1 + (1/2) sum v_k l_k.
CMatrix hamiltonian_matrix(double v0, const RVector& v, const HermitianBasis& basis);

/// rho(t) = exp(-iHt) rho exp(iHt).
CMatrix von_neumann_evolve(const CMatrix& rho, const CMatrix& hamiltonian, double t);

/// du_l/dt = f_jkl v_j u_k, integrated with fixed-step RK4. Each grid
/// interval is split into equal substeps no longer than `step`.
std::vector<RVector> bloch_ode_evolve(const RVector& u0, const RVector& v,
                                      const StructureTensor& tensor,
                                      const std::vector<double>& grid,
                                      double step = 1e-3);

/// Right-hand side of the Bloch ODE; exposed for tests.
RVector bloch_rhs(const RVector& u, const RVector& v, const StructureTensor& tensor);

}  // namespace gpt::realrep
