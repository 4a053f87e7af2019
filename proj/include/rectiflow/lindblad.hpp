// Dense complex operator algebra, Liouvillian construction with
// column-stacking vectorization, and the steady-state solve.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "rectiflow/errors.hpp"

namespace rectiflow {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

// Library-wide state-validity tolerances.
inline constexpr double kTraceTol = 1e-12;       // |tr(rho) - 1|
inline constexpr double kHermTol = 1e-12;        // max elementwise |rho - rho^dag|
inline constexpr double kEigFloor = -1e-10;      // smallest eigenvalue of rho
inline constexpr double kResidualTol = 1e-10;    // ||L vec(rho)||_inf
inline constexpr double kRankGapTol = 1e-9;      // SVD rank test, relative

/// True when max elementwise |M - M^dag| <= tol.
bool is_hermitian(const Matrix& m, double tol);

/// True when M is Hermitian within tol and its smallest eigenvalue is
/// >= -tol.
bool is_psd(const Matrix& m, double tol);

/// Kronecker product a (x) b.
Matrix kron(const Matrix& a, const Matrix& b);

/// A density matrix that passed the validity checks (unit trace, Hermitian,
/// no significantly negative eigenvalue).
struct DensityMatrix {
  Matrix rho;

  /// Validates and wraps. Throws NumericError when the invariants fail.
  static DensityMatrix validated(Matrix candidate);

  Eigen::Index dim() const { return rho.rows(); }
};

/// Lindblad generator acting on column-stacked density matrices:
/// L vec(rho) = vec(-i [H, rho] + sum_k rate_k D[op_k] rho).
struct Liouvillian {
  Matrix generator;   // dim^2 x dim^2
  Eigen::Index dim = 0;
};

/// One dissipative channel: a nonnegative rate and its jump operator.
struct RateChannel {
  double rate = 0.0;
  Matrix op;
};

/// D[X] rho = X rho X^dag - (1/2){X^dag X, rho}.
/// Throws InvalidSpec on dimension mismatch.
Matrix dissipator_apply(const Matrix& x, const Matrix& rho);

/// Builds the vectorized generator. Throws InvalidSpec on a negative rate or
/// dimension mismatch. The result is trace-preserving: vec(I)^T L = 0.
Liouvillian build_liouvillian(const Matrix& hamiltonian,
                              const std::vector<RateChannel>& channels);

/// Raw-solution quality measures, captured before the Hermitize/renormalize
/// cleanup so genuine solver trouble is not masked by it.
struct SteadySolveInfo {
  double residual = 0.0;        // ||L vec(rho)||_inf of the raw solution
  double trace_error = 0.0;     // |tr(rho) - 1| of the raw solution
  double herm_error = 0.0;      // max elementwise |rho - rho^dag|, raw
  double min_eigenvalue = 0.0;  // smallest eigenvalue of the returned state
};

/// Unique steady state of L, solved as a linear system: one of the d
/// diagonal-entry rows of L (the rows trace preservation makes linearly
/// dependent; the one with smallest infinity-norm is replaced to preserve
/// conditioning) is overwritten with the vectorized trace constraint,
/// right-hand side 1, then dense partial-pivot LU. The raw solution must
/// satisfy ||L vec(rho)||_inf < 1e-10; the returned state is Hermitized as
/// (rho + rho^dag)/2 and trace-renormalized before validation.
///
/// A well-conditioned solve certifies uniqueness outright (the unreplaced
/// rows being independent forces rank(L) = dim^2 - 1); only when it is
/// singular or ill-conditioned is the generator's rank tested by SVD.
/// Throws DegenerateSteadyState when the null space of L has dimension > 1
/// (the two smallest singular values of L both below 1e-9 x largest);
/// NumericError when the solve fails on a non-degenerate generator.
DensityMatrix steady_state(const Liouvillian& liouvillian,
                           SteadySolveInfo* info = nullptr);

/// Tr(obs * rho). Real within 1e-12 when obs is Hermitian.
Complex expectation(const Matrix& obs, const DensityMatrix& rho);

}  // namespace rectiflow
