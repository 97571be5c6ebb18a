#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP version (the one the
// library calls) and a single-threaded reference under `serial` that tests
// and the benchmark compare against.

#include <span>

#include "gpt/types.hpp"

namespace gpt::kernels {

/// Compressed-row view of a sparse square matrix.
struct CsrView {
  int rows = 0;
  std::span<const int> row_ptr;
  std::span<const int> cols;
  std::span<const double> values;
};

void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y);

/// y <- y + alpha * x
void axpy(double alpha, std::span<const double> x, std::span<double> y);

/// Fixed-step RK4 for dx/dt = scale * A x over [0, t]. Returns the number of
/// steps taken.
long rk4_linear(const CsrView& a, double scale, std::span<double> x, double t, double step);

void apply_map(const Mat3& m, std::span<const Vec3> in, std::span<Vec3> out);

/// max over maps k and states s of |h.(M_k rho_s) - h.rho_s|.
double max_energy_drift(const Vec3& h, std::span<const Mat3> maps, std::span<const Vec3> states);

namespace serial {
void csr_matvec(const CsrView& a, std::span<const double> x, std::span<double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
long rk4_linear(const CsrView& a, double scale, std::span<double> x, double t, double step);
void apply_map(const Mat3& m, std::span<const Vec3> in, std::span<Vec3> out);
double max_energy_drift(const Vec3& h, std::span<const Mat3> maps, std::span<const Vec3> states);
}  // namespace serial

}  // namespace gpt::kernels
