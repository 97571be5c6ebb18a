#include <doctest.h>

#include <cmath>
#include <complex>
#include <random>

#include "gpt/error.hpp"
#include "gpt/realrep.hpp"

using namespace gpt;
using namespace gpt::realrep;
using cd = std::complex<double>;

namespace {

// Textbook Gell-Mann matrices lambda_1..lambda_8, written out by hand.
std::vector<CMatrix> textbook_su3() {
  const cd i(0, 1);
  std::vector<CMatrix> l(8, CMatrix::Zero(3, 3));
  l[0](0, 1) = l[0](1, 0) = 1;
  l[1](0, 1) = -i; l[1](1, 0) = i;
  l[2](0, 0) = 1; l[2](1, 1) = -1;
  l[3](0, 2) = l[3](2, 0) = 1;
  l[4](0, 2) = -i; l[4](2, 0) = i;
  l[5](1, 2) = l[5](2, 1) = 1;
  l[6](1, 2) = -i; l[6](2, 1) = i;
  const double r = 1.0 / std::sqrt(3.0);
  l[7](0, 0) = r; l[7](1, 1) = r; l[7](2, 2) = -2 * r;
  return l;
}

// Position of textbook lambda_{k+1} in the library ordering
// (symmetric, antisymmetric, diagonal).
constexpr int kTextbookToLibrary[8] = {0, 3, 6, 1, 4, 2, 5, 7};

int levi_civita(int i, int j, int k) {
  if (i == j || j == k || i == k) return 0;
  return ((j - i + 3) % 3 == 1) ? 1 : -1;
}

CMatrix random_density(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = cd(g(rng), g(rng));
  CMatrix rho = a * a.adjoint();
  return rho / rho.trace();
}

CMatrix random_hermitian(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  CMatrix a(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) a(r, c) = cd(g(rng), g(rng));
  return 0.5 * (a + a.adjoint());
}

// exp(-iHt) by a long Taylor series with scaling and squaring.
CMatrix taylor_unitary(const CMatrix& h, double t) {
  const int squarings = 8;
  const CMatrix x = h * cd(0, -t / std::pow(2.0, squarings));
  CMatrix term = CMatrix::Identity(h.rows(), h.cols());
  CMatrix sum = term;
  for (int k = 1; k < 30; ++k) {
    term = term * x / static_cast<double>(k);
    sum += term;
  }
  for (int s = 0; s < squarings; ++s) sum = sum * sum;
  return sum;
}

}  // namespace

TEST_CASE("Gell-Mann bases are trace orthonormal for d = 2..5") {
  for (int d = 2; d <= 5; ++d) {
    const auto b = gellmann_basis(d);
    REQUIRE(b.size() == d * d - 1);
    for (int i = 0; i < b.size(); ++i) {
      CHECK((b.elements[i] - b.elements[i].adjoint()).cwiseAbs().maxCoeff() == 0.0);
      CHECK(std::abs(b.elements[i].trace()) < 1e-12);
      for (int j = 0; j < b.size(); ++j) {
        const cd tr = (b.elements[i] * b.elements[j]).trace();
        CHECK(std::abs(tr - cd(i == j ? 2.0 : 0.0)) < 1e-12);
      }
    }
    CHECK(basis_defect(b) < 1e-12);
  }
}

TEST_CASE("d = 2 basis is the Pauli set and f is Levi-Civita") {
  const auto b = gellmann_basis(2);
  CMatrix sx(2, 2), sy(2, 2), sz(2, 2);
  sx << 0, 1, 1, 0;
  sy << 0, cd(0, -1), cd(0, 1), 0;
  sz << 1, 0, 0, -1;
  CHECK((b.elements[0] - sx).norm() == 0.0);
  CHECK((b.elements[1] - sy).norm() == 0.0);
  CHECK((b.elements[2] - sz).norm() == 0.0);
  const auto f = structure_constants(b);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      for (int k = 0; k < 3; ++k) CHECK(std::abs(f(i, j, k) - levi_civita(i, j, k)) < 1e-12);
}

TEST_CASE("d = 3 basis matches the textbook matrices and structure constants") {
  const auto b = gellmann_basis(3);
  const auto textbook = textbook_su3();
  for (int k = 0; k < 8; ++k) {
    CHECK((b.elements[kTextbookToLibrary[k]] - textbook[k]).norm() < 1e-15);
  }
  const auto f = structure_constants(b);
  auto ft = [&](int i, int j, int k) {
    return f(kTextbookToLibrary[i - 1], kTextbookToLibrary[j - 1], kTextbookToLibrary[k - 1]);
  };
  const double h = 0.5, s = std::sqrt(3.0) / 2.0;
  CHECK(ft(1, 2, 3) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(ft(1, 4, 7) == doctest::Approx(h).epsilon(1e-12));
  CHECK(ft(1, 5, 6) == doctest::Approx(-h).epsilon(1e-12));
  CHECK(ft(2, 4, 6) == doctest::Approx(h).epsilon(1e-12));
  CHECK(ft(2, 5, 7) == doctest::Approx(h).epsilon(1e-12));
  CHECK(ft(3, 4, 5) == doctest::Approx(h).epsilon(1e-12));
  CHECK(ft(3, 6, 7) == doctest::Approx(-h).epsilon(1e-12));
  CHECK(ft(4, 5, 8) == doctest::Approx(s).epsilon(1e-12));
  CHECK(ft(6, 7, 8) == doctest::Approx(s).epsilon(1e-12));
  // No other triple is nonzero: each listed one appears in 6 orderings.
  double total = 0.0;
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 8; ++j)
      for (int k = 0; k < 8; ++k) total += f(i, j, k) * f(i, j, k);
  CHECK(total == doctest::Approx(6.0 * (1.0 + 6 * 0.25 + 2 * 0.75)).epsilon(1e-12));
}

TEST_CASE("structure constants are totally antisymmetric for d = 2..5") {
  for (int d = 2; d <= 5; ++d) {
    CHECK(structure_constants(gellmann_basis(d)).antisymmetry_defect() < 1e-12);
  }
}

TEST_CASE("structure constants reproduce the commutators") {
  const auto b = gellmann_basis(4);
  const auto f = structure_constants(b);
  const int n = b.size();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      CMatrix rhs = CMatrix::Zero(4, 4);
      for (int l = 0; l < n; ++l) rhs += cd(0, 2) * f(j, k, l) * b.elements[l];
      const CMatrix lhs = b.elements[j] * b.elements[k] - b.elements[k] * b.elements[j];
      CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("invalid inputs are rejected") {
  CHECK_THROWS_AS(gellmann_basis(1), Error);
  auto b = gellmann_basis(2);
  b.elements[0] *= 2.0;
  CHECK_THROWS_AS(structure_constants(b), Error);
  const auto good = gellmann_basis(2);
  RVector outside(3);
  outside << 0, 0, 1.5;
  try {
    density_from_bloch(outside, good);
    FAIL("expected NotAStateError");
  } catch (const NotAStateError& e) {
    CHECK(e.min_eigenvalue() == doctest::Approx(-0.25));
    CHECK(e.kind() == ErrorKind::NotAState);
  }
  CHECK_THROWS_AS(bloch_from_density(CMatrix::Identity(3, 3), good), Error);
  CMatrix nh = CMatrix::Zero(2, 2);
  nh(0, 1) = 1.0;
  CHECK_THROWS_AS(von_neumann_evolve(CMatrix::Identity(2, 2) / 2.0, nh, 1.0), Error);
  const auto f = structure_constants(good);
  CHECK_THROWS_AS(bloch_ode_evolve(RVector::Zero(3), RVector::Zero(3), f, {0.0, 1.0, 0.5}), Error);
  CHECK_THROWS_AS(bloch_ode_evolve(RVector::Zero(3), RVector::Zero(3), f, {0.5, 1.0}), Error);
  CHECK_THROWS_AS(bloch_ode_evolve(RVector::Zero(8), RVector::Zero(3), f, {0.0, 1.0}), Error);
}

TEST_CASE("density <-> Bloch round trip") {
  std::mt19937_64 rng(5);
  for (int d = 2; d <= 4; ++d) {
    const auto b = gellmann_basis(d);
    for (int trial = 0; trial < 20; ++trial) {
      const CMatrix rho = random_density(d, rng);
      const RVector u = bloch_from_density(rho, b);
      CHECK((density_from_bloch(u, b) - rho).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
  const auto b2 = gellmann_basis(2);
  RVector up(3);
  up << 0, 0, 1;
  CMatrix expect = CMatrix::Zero(2, 2);
  expect(0, 0) = 1.0;
  CHECK((density_from_bloch(up, b2) - expect).norm() < 1e-15);
}

TEST_CASE("von Neumann evolution matches a Taylor-series propagator") {
  std::mt19937_64 rng(9);
  for (int d : {2, 3, 4}) {
    const CMatrix rho = random_density(d, rng);
    const CMatrix h = random_hermitian(d, rng);
    const CMatrix u = taylor_unitary(h, 0.7);
    CHECK((von_neumann_evolve(rho, h, 0.7) - u * rho * u.adjoint()).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("qubit precession sense: H = sigma_z / 2 turns x towards +y") {
  const auto b = gellmann_basis(2);
  RVector v(3), u0(3);
  v << 0, 0, 1;
  u0 << 1, 0, 0;
  const CMatrix h = hamiltonian_matrix(0.0, v, b);
  for (double t : {0.3, 1.0, 2.5}) {
    const RVector u = bloch_from_density(von_neumann_evolve(density_from_bloch(u0, b), h, t), b);
    CHECK(u(0) == doctest::Approx(std::cos(t)).epsilon(1e-12));
    CHECK(u(1) == doctest::Approx(std::sin(t)).epsilon(1e-12));
    CHECK(std::abs(u(2)) < 1e-12);
  }
  const auto f = structure_constants(b);
  const RVector rhs = bloch_rhs(u0, v, f);
  CHECK(rhs(1) == doctest::Approx(1.0));
}

TEST_CASE("d = 3 Bloch ODE agrees with matrix evolution at t = 1") {
  std::mt19937_64 rng(2024);
  const auto b = gellmann_basis(3);
  const auto f = structure_constants(b);
  double worst = 0.0;
  for (int trial = 0; trial < 50; ++trial) {
    const CMatrix rho = random_density(3, rng);
    const CMatrix h = random_hermitian(3, rng);
    RVector v(8);
    for (int k = 0; k < 8; ++k) v(k) = (h * b.elements[k]).trace().real();
    const double v0 = 2.0 * h.trace().real() / 3.0;
    CHECK((hamiltonian_matrix(v0, v, b) - h).cwiseAbs().maxCoeff() < 1e-12);
    const RVector u0 = bloch_from_density(rho, b);
    const auto path = bloch_ode_evolve(u0, v, f, {0.0, 1.0}, 1e-3);
    const RVector exact = bloch_from_density(von_neumann_evolve(rho, h, 1.0), b);
    worst = std::max(worst, (path.back() - exact).cwiseAbs().maxCoeff());
  }
  CHECK(worst < 1e-6);
}

TEST_CASE("the identity part of H does not affect the dynamics") {
  std::mt19937_64 rng(17);
  const auto b = gellmann_basis(2);
  const CMatrix rho = random_density(2, rng);
  RVector v(3);
  v << 0.4, -0.2, 0.9;
  const CMatrix a = von_neumann_evolve(rho, hamiltonian_matrix(0.0, v, b), 2.0);
  const CMatrix c = von_neumann_evolve(rho, hamiltonian_matrix(5.0, v, b), 2.0);
  CHECK((a - c).cwiseAbs().maxCoeff() < 1e-12);
}
