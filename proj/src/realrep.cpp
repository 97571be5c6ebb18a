#include "gpt/realrep.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

#include "gpt/error.hpp"

namespace gpt {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidDimension: return "invalid-dimension";
    case ErrorKind::InvalidBasis: return "invalid-basis";
    case ErrorKind::DimensionMismatch: return "dimension-mismatch";
    case ErrorKind::NotAState: return "not-a-state";
    case ErrorKind::NotHermitian: return "not-hermitian";
    case ErrorKind::NonMonotoneGrid: return "non-monotone-grid";
    case ErrorKind::NotAntisymmetric: return "not-antisymmetric";
    case ErrorKind::DegenerateVertices: return "degenerate-vertices";
    case ErrorKind::CentroidNotAtOrigin: return "centroid-not-at-origin";
    case ErrorKind::UnknownTheory: return "unknown-theory";
    case ErrorKind::Unsupported: return "unsupported";
    case ErrorKind::InvalidTime: return "invalid-time";
    case ErrorKind::InadmissibleDynamics: return "inadmissible-dynamics";
    case ErrorKind::StateOutsideSpace: return "state-outside-space";
    case ErrorKind::DisconnectedGraph: return "disconnected-graph";
    case ErrorKind::InconsistentCycle: return "inconsistent-cycle";
    case ErrorKind::NonpositivePeriod: return "nonpositive-period";
    case ErrorKind::NonFinite: return "non-finite";
    case ErrorKind::Oversize: return "oversize";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

namespace {
std::string not_a_state_message(double ev) {
  std::ostringstream os;
  os << "not a state: minimum eigenvalue " << ev;
  return os.str();
}
}  // namespace

NotAStateError::NotAStateError(double min_eigenvalue)
    : Error(ErrorKind::NotAState, not_a_state_message(min_eigenvalue)),
      min_eigenvalue_(min_eigenvalue) {}

}  // namespace gpt

namespace gpt::realrep {

using cd = std::complex<double>;

namespace {

constexpr double kBasisTol = 1e-10;
constexpr double kPositivityTol = 1e-10;
constexpr double kHermitianTol = 1e-10;

void require_dimension(const HermitianBasis& basis, Eigen::Index rows, Eigen::Index cols) {
  if (rows != basis.d || cols != basis.d) {
    throw Error(ErrorKind::DimensionMismatch, "matrix dimension does not match basis");
  }
}

void require_length(const HermitianBasis& basis, Eigen::Index length) {
  if (length != basis.size()) {
    throw Error(ErrorKind::DimensionMismatch, "vector length does not match d^2 - 1");
  }
}

}  // namespace

double StructureTensor::antisymmetry_defect() const {
  double worst = 0.0;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int k = 0; k < n_; ++k) {
        const double f = (*this)(i, j, k);
        worst = std::max({worst, std::abs(f + (*this)(j, i, k)), std::abs(f + (*this)(i, k, j))});
      }
  return worst;
}

HermitianBasis gellmann_basis(int d) {
  if (d < 2) {
    throw Error(ErrorKind::InvalidDimension, "Gell-Mann basis needs d >= 2");
  }
  HermitianBasis basis;
  basis.d = d;
  basis.elements.reserve(static_cast<size_t>(d) * d - 1);

  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix s = CMatrix::Zero(d, d);
      s(j, k) = s(k, j) = 1.0;
      basis.elements.push_back(std::move(s));
    }
  for (int j = 0; j < d; ++j)
    for (int k = j + 1; k < d; ++k) {
      CMatrix a = CMatrix::Zero(d, d);
      a(j, k) = cd(0.0, -1.0);
      a(k, j) = cd(0.0, 1.0);
      basis.elements.push_back(std::move(a));
    }
  for (int l = 1; l < d; ++l) {
    CMatrix diag = CMatrix::Zero(d, d);
    const double scale = std::sqrt(2.0 / (l * (l + 1.0)));
    for (int k = 0; k < l; ++k) diag(k, k) = scale;
    diag(l, l) = -l * scale;
    basis.elements.push_back(std::move(diag));
  }
  return basis;
}

double basis_defect(const HermitianBasis& basis) {
  double worst = 0.0;
  for (const auto& m : basis.elements) {
    worst = std::max(worst, (m - m.adjoint()).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(m.trace()));
  }
  for (int i = 0; i < basis.size(); ++i)
    for (int j = 0; j < basis.size(); ++j) {
      const cd tr = (basis.elements[i] * basis.elements[j]).trace();
      worst = std::max(worst, std::abs(tr - cd(i == j ? 2.0 : 0.0, 0.0)));
    }
  return worst;
}

StructureTensor structure_constants(const HermitianBasis& basis) {
  if (basis.size() != basis.d * basis.d - 1 || basis_defect(basis) > kBasisTol) {
    throw Error(ErrorKind::InvalidBasis, "basis is not trace-orthonormal traceless Hermitian");
  }
  const int n = basis.size();
  StructureTensor f(basis.d, n);
  const cd four_i(0.0, 4.0);
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) {
      const CMatrix comm = basis.elements[j] * basis.elements[k] -
                           basis.elements[k] * basis.elements[j];
      for (int l = 0; l < n; ++l) {
        const double value = ((comm * basis.elements[l]).trace() / four_i).real();
        f(j, k, l) = value;
        f(k, j, l) = -value;
      }
    }
  return f;
}

RVector bloch_from_density(const CMatrix& rho, const HermitianBasis& basis) {
  require_dimension(basis, rho.rows(), rho.cols());
  RVector u(basis.size());
  for (int i = 0; i < basis.size(); ++i) {
    u(i) = (rho * basis.elements[i]).trace().real();
  }
  return u;
}

CMatrix operator_from_bloch(const RVector& u, const HermitianBasis& basis) {
  require_length(basis, u.size());
  CMatrix rho = CMatrix::Identity(basis.d, basis.d) / static_cast<double>(basis.d);
  for (int i = 0; i < basis.size(); ++i) {
    rho += 0.5 * u(i) * basis.elements[i];
  }
  return rho;
}

CMatrix density_from_bloch(const RVector& u, const HermitianBasis& basis) {
  CMatrix rho = operator_from_bloch(u, basis);
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(rho, Eigen::EigenvaluesOnly);
  const double min_ev = solver.eigenvalues().minCoeff();
  if (min_ev < -kPositivityTol) {
    throw NotAStateError(min_ev);
  }
  return rho;
}

CMatrix hamiltonian_matrix(double v0, const RVector& v, const HermitianBasis& basis) {
  require_length(basis, v.size());
  CMatrix h = CMatrix::Identity(basis.d, basis.d) * (0.5 * v0);
  for (int i = 0; i < basis.size(); ++i) {
    h += 0.5 * v(i) * basis.elements[i];
  }
  return h;
}

CMatrix von_neumann_evolve(const CMatrix& rho, const CMatrix& hamiltonian, double t) {
  if (rho.rows() != hamiltonian.rows() || rho.cols() != hamiltonian.cols()) {
    throw Error(ErrorKind::DimensionMismatch, "state and Hamiltonian sizes differ");
  }
  if ((hamiltonian - hamiltonian.adjoint()).cwiseAbs().maxCoeff() > kHermitianTol) {
    throw Error(ErrorKind::NotHermitian, "Hamiltonian is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(hamiltonian);
  const auto& vecs = solver.eigenvectors();
  Eigen::VectorXcd phases(hamiltonian.rows());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases(i) = std::exp(cd(0.0, -solver.eigenvalues()(i) * t));
  }
  const CMatrix u = vecs * phases.asDiagonal() * vecs.adjoint();
  return u * rho * u.adjoint();
}

RVector bloch_rhs(const RVector& u, const RVector& v, const StructureTensor& tensor) {
  const int n = tensor.n();
  RVector du = RVector::Zero(n);
  for (int j = 0; j < n; ++j) {
    if (v(j) == 0.0) continue;
    for (int k = 0; k < n; ++k) {
      if (u(k) == 0.0) continue;
      for (int l = 0; l < n; ++l) du(l) += tensor(j, k, l) * v(j) * u(k);
    }
  }
  return du;
}

std::vector<RVector> bloch_ode_evolve(const RVector& u0, const RVector& v,
                                      const StructureTensor& tensor,
                                      const std::vector<double>& grid, double step) {
  const int n = tensor.n();
  if (u0.size() != n || v.size() != n) {
    throw Error(ErrorKind::DimensionMismatch, "Bloch vectors must have length d^2 - 1");
  }
  if (grid.empty() || grid.front() != 0.0) {
    throw Error(ErrorKind::NonMonotoneGrid, "time grid must start at 0");
  }
  for (size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw Error(ErrorKind::NonMonotoneGrid, "time grid must be strictly increasing");
    }
  }
  if (!(step > 0.0)) {
    throw Error(ErrorKind::InvalidTime, "RK4 step must be positive");
  }

  // The ODE is linear, du/dt = B u with B_lk = sum_j f_jkl v_j.
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      for (int l = 0; l < n; ++l) b(l, k) += tensor(j, k, l) * v(j);

  std::vector<RVector> out;
  out.reserve(grid.size());
  RVector u = u0;
  out.push_back(u);
  for (size_t i = 1; i < grid.size(); ++i) {
    const double span = grid[i] - grid[i - 1];
    const auto substeps = static_cast<long>(std::ceil(span / step - 1e-12));
    const double h = span / static_cast<double>(std::max(1L, substeps));
    for (long s = 0; s < std::max(1L, substeps); ++s) {
      const RVector k1 = b * u;
      const RVector k2 = b * (u + 0.5 * h * k1);
      const RVector k3 = b * (u + 0.5 * h * k2);
      const RVector k4 = b * (u + h * k3);
      u += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    out.push_back(u);
  }
  return out;
}

}  // namespace gpt::realrep
