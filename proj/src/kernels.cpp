#include "gpt/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gpt::kernels {

namespace {

long step_count(double t, double step) {
  if (t <= 0.0) return 0;
  return std::max(1L, static_cast<long>(std::ceil(t / step - 1e-12)));
}

// Shared RK4 driver; Matvec and Axpy pick the parallel or serial kernels.
template <class Matvec, class Axpy>
long rk4_impl(const CsrView& a, double scale, std::span<double> x, double t, double step,
              Matvec matvec, Axpy axpy_fn) {
  const long steps = step_count(t, step);
  if (steps == 0) return 0;
  const double h = t / static_cast<double>(steps);
  const size_t n = x.size();
  std::vector<double> k1(n), k2(n), k3(n), k4(n), tmp(n);
  auto rhs = [&](std::span<const double> in, std::span<double> out) {
    matvec(a, in, out);
    for (double& v : out) v *= scale;
  };
  for (long s = 0; s < steps; ++s) {
    rhs(x, k1);
    std::copy(x.begin(), x.end(), tmp.begin());
    axpy_fn(0.5 * h, k1, tmp);
    rhs(tmp, k2);
    std::copy(x.begin(), x.end(), tmp.begin());
    axpy_fn(0.5 * h, k2, tmp);
    rhs(tmp, k3);
    std::copy(x.begin(), x.end(), tmp.begin());
    axpy_fn(h, k3, tmp);
    rhs(tmp, k4);
    axpy_fn(h / 6.0, k1, x);
    axpy_fn(h / 3.0, k2, x);
    axpy_fn(h / 3.0, k3, x);
    axpy_fn(h / 6.0, k4, x);
  }
  return steps;
}

}  // namespace

void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y) {
#pragma omp parallel for schedule(static)
  for (int r = 0; r < a.rows; ++r) {
    double sum = 0.0;
    for (int p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) sum += a.values[p] * x[a.cols[p]];
    y[r] = sum;
  }
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  const auto n = static_cast<long>(y.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) y[i] += alpha * x[i];
}

long rk4_linear(const CsrView& a, double scale, std::span<double> x, double t, double step) {
  return rk4_impl(a, scale, x, t, step, &kernels::csr_matvec, &kernels::axpy);
}

void apply_map(const Mat3& m, std::span<const Vec3> in, std::span<Vec3> out) {
  const auto n = static_cast<long>(in.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) out[i] = m * in[i];
}

double max_energy_drift(const Vec3& h, std::span<const Mat3> maps, std::span<const Vec3> states) {
  const auto n = static_cast<long>(states.size());
  double worst = 0.0;
#pragma omp parallel for reduction(max : worst) schedule(static)
  for (long s = 0; s < n; ++s) {
    const double e0 = h.dot(states[s]);
    for (const auto& m : maps) worst = std::max(worst, std::abs(h.dot(m * states[s]) - e0));
  }
  return worst;
}

namespace serial {

void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y) {
  for (int r = 0; r < a.rows; ++r) {
    double sum = 0.0;
    for (int p = a.row_ptr[r]; p < a.row_ptr[r + 1]; ++p) sum += a.values[p] * x[a.cols[p]];
    y[r] = sum;
  }
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  for (size_t i = 0; i < y.size(); ++i) y[i] += alpha * x[i];
}

long rk4_linear(const CsrView& a, double scale, std::span<double> x, double t, double step) {
  return rk4_impl(a, scale, x, t, step, &serial::csr_matvec, &serial::axpy);
}

void apply_map(const Mat3& m, std::span<const Vec3> in, std::span<Vec3> out) {
  for (size_t i = 0; i < in.size(); ++i) out[i] = m * in[i];
}

double max_energy_drift(const Vec3& h, std::span<const Mat3> maps, std::span<const Vec3> states) {
  double worst = 0.0;
  for (const auto& rho : states) {
    const double e0 = h.dot(rho);
    for (const auto& m : maps) worst = std::max(worst, std::abs(h.dot(m * rho) - e0));
  }
  return worst;
}

}  // namespace serial

}  // namespace gpt::kernels
