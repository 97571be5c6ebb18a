#include <doctest.h>

#include <random>
#include <vector>

#include <Eigen/Geometry>

#include "gpt/kernels.hpp"
#include "gpt/liouville.hpp"

using namespace gpt;

namespace {

Eigen::VectorXd random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

std::span<const double> cspan(const Eigen::VectorXd& v) { return {v.data(), static_cast<size_t>(v.size())}; }
std::span<double> mspan(Eigen::VectorXd& v) { return {v.data(), static_cast<size_t>(v.size())}; }

liouville::LiouvilleMatrix sample_operator() {
  liouville::PhaseSpaceGrid g;
  g.nx = 12;
  g.np = 10;
  return liouville::liouville_matrix(g, liouville::harmonic_potential(0.7, 2.0));
}

}  // namespace

TEST_CASE("csr_matvec matches a dense product and the serial reference") {
  const auto l = sample_operator();
  std::mt19937_64 rng(11);
  const Eigen::VectorXd x = random_vector(l.grid.size(), rng);
  Eigen::VectorXd y(x.size()), ys(x.size());
  kernels::csr_matvec(l.csr(), cspan(x), mspan(y));
  kernels::serial::csr_matvec(l.csr(), cspan(x), mspan(ys));
  const Eigen::VectorXd dense = Eigen::MatrixXd(l.matrix) * x;
  CHECK((y - dense).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(y == ys);
}

TEST_CASE("axpy") {
  std::mt19937_64 rng(5);
  const Eigen::VectorXd x = random_vector(1000, rng);
  Eigen::VectorXd y = random_vector(1000, rng);
  Eigen::VectorXd ys = y;
  const Eigen::VectorXd expected = y + 0.3 * x;
  kernels::axpy(0.3, cspan(x), mspan(y));
  kernels::serial::axpy(0.3, cspan(x), mspan(ys));
  CHECK(y == ys);
  CHECK((y - expected).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("rk4_linear matches the serial reference and a closed form") {
  const auto l = sample_operator();
  std::mt19937_64 rng(3);
  const Eigen::VectorXd x0 = random_vector(l.grid.size(), rng);
  Eigen::VectorXd a = x0, b = x0;
  const long na = kernels::rk4_linear(l.csr(), -1.0, mspan(a), 0.75, 1e-2);
  const long nb = kernels::serial::rk4_linear(l.csr(), -1.0, mspan(b), 0.75, 1e-2);
  CHECK(na == nb);
  CHECK(na == 75);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-13);
  const Eigen::VectorXd exact = liouville::propagator(l, 0.75) * x0;
  CHECK((a - exact).cwiseAbs().maxCoeff() < 1e-6);

  // Scalar case: dx/dt = 2x on a 1x1 matrix.
  const std::vector<int> rp{0, 1}, cols{0};
  const std::vector<double> vals{1.0};
  const kernels::CsrView one{1, rp, cols, vals};
  Eigen::VectorXd s(1);
  s(0) = 1.0;
  kernels::rk4_linear(one, 2.0, mspan(s), 1.0, 1e-3);
  CHECK(std::abs(s(0) - std::exp(2.0)) < 1e-10);
}

TEST_CASE("apply_map and max_energy_drift agree with the serial versions") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> states(500);
  for (auto& s : states) s = Vec3(u(rng), u(rng), u(rng));
  const Mat3 m = Eigen::AngleAxisd(0.4, Vec3(1, 2, 3).normalized()).toRotationMatrix();
  std::vector<Vec3> out(states.size()), outs(states.size());
  kernels::apply_map(m, states, out);
  kernels::serial::apply_map(m, states, outs);
  for (size_t i = 0; i < states.size(); ++i) {
    CHECK(out[i] == outs[i]);
    CHECK((out[i] - m * states[i]).norm() < 1e-15);
  }

  const Vec3 h(0.2, -0.5, 0.9);
  std::vector<Mat3> maps;
  for (int k = 0; k < 6; ++k) maps.push_back(Eigen::AngleAxisd(0.3 * k, h.normalized()).toRotationMatrix());
  CHECK(kernels::max_energy_drift(h, maps, states) < 1e-14);
  maps.push_back(m);
  const double d = kernels::max_energy_drift(h, maps, states);
  CHECK(d == kernels::serial::max_energy_drift(h, maps, states));
  double oracle = 0.0;
  for (const auto& s : states) oracle = std::max(oracle, std::abs(h.dot(m * s) - h.dot(s)));
  CHECK(d == doctest::Approx(oracle).epsilon(1e-12));
  CHECK(kernels::max_energy_drift(h, {}, states) == 0.0);
}
