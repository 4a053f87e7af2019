#include "rectiflow/lindblad.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/LU>
#include <Eigen/SVD>
#include <cmath>
#include <limits>
#include <sstream>

namespace rectiflow {

namespace {

// Smallest reciprocal condition number the trace-replaced solve is trusted
// at; below this the generator's rank is examined directly.
constexpr double kRcondFloor = 1e-12;

// Smallest LU pivot, relative to the largest, before the factorization is
// treated as rank-deficient and the generator's rank is examined directly.
constexpr double kPivotFloor = 1e-12;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream msg;
    msg << what << " must be square, got " << m.rows() << "x" << m.cols();
    throw err::invalid_spec(msg.str());
  }
}

void require_same_dim(const Matrix& a, const Matrix& b, const char* what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    std::ostringstream msg;
    msg << what << ": dimension mismatch (" << a.rows() << "x" << a.cols()
        << " vs " << b.rows() << "x" << b.cols() << ")";
    throw err::invalid_spec(msg.str());
  }
}

}  // namespace

bool is_hermitian(const Matrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_psd(const Matrix& m, double tol) {
  if (!is_hermitian(m, tol)) return false;
  Eigen::SelfAdjointEigenSolver<Matrix> es(0.5 * (m + m.adjoint()),
                                           Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -tol;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityMatrix DensityMatrix::validated(Matrix candidate) {
  require_square(candidate, "density matrix");
  const double trace_err = std::abs(candidate.trace() - Complex(1.0, 0.0));
  if (trace_err > kTraceTol) {
    std::ostringstream msg;
    msg << "density matrix trace deviates from 1 by " << trace_err;
    throw NumericError(msg.str());
  }
  const double herm_err = (candidate - candidate.adjoint()).cwiseAbs().maxCoeff();
  if (herm_err > kHermTol) {
    std::ostringstream msg;
    msg << "density matrix Hermiticity deviation " << herm_err;
    throw NumericError(msg.str());
  }
  Eigen::SelfAdjointEigenSolver<Matrix> es(candidate, Eigen::EigenvaluesOnly);
  const double min_eig = es.eigenvalues().minCoeff();
  if (min_eig < kEigFloor) {
    std::ostringstream msg;
    msg << "density matrix has negative eigenvalue " << min_eig;
    throw NumericError(msg.str());
  }
  return DensityMatrix{std::move(candidate)};
}

Matrix dissipator_apply(const Matrix& x, const Matrix& rho) {
  require_square(x, "jump operator");
  require_same_dim(x, rho, "dissipator");
  const Matrix xdx = x.adjoint() * x;
  return x * rho * x.adjoint() - 0.5 * (xdx * rho + rho * xdx);
}

Liouvillian build_liouvillian(const Matrix& hamiltonian,
                              const std::vector<RateChannel>& channels) {
  require_square(hamiltonian, "Hamiltonian");
  const Eigen::Index d = hamiltonian.rows();
  const Matrix id = Matrix::Identity(d, d);
  const Complex minus_i(0.0, -1.0);

  // Column-stacking: vec(A rho B) = (B^T kron A) vec(rho).
  Matrix gen = minus_i * (kron(id, hamiltonian) -
                          kron(hamiltonian.transpose(), id));
  for (const RateChannel& ch : channels) {
    if (ch.rate < 0.0) {
      throw err::invalid_spec("channel rate must be nonnegative");
    }
    require_same_dim(ch.op, hamiltonian, "channel operator");
    if (ch.rate == 0.0) continue;
    const Matrix ada = ch.op.adjoint() * ch.op;
    gen += ch.rate * (kron(ch.op.conjugate(), ch.op) -
                      0.5 * kron(id, ada) -
                      0.5 * kron(ada.transpose(), id));
  }
  return Liouvillian{std::move(gen), d};
}

namespace {

/// True when the generator's null space has dimension > 1 under the
/// singular-value gap rule: the two smallest singular values both vanish
/// relative to the largest.
bool kernel_is_degenerate(const Matrix& generator) {
  Eigen::JacobiSVD<Matrix> svd(generator);
  const auto& sv = svd.singularValues();  // sorted descending
  const Eigen::Index n = sv.size();
  const double largest = sv(0);
  return largest <= 0.0 ||
         (n >= 2 && sv(n - 1) < kRankGapTol * largest &&
          sv(n - 2) < kRankGapTol * largest);
}

[[noreturn]] void throw_degenerate() {
  throw err::degenerate_steady_state(
      "generator null space has dimension > 1; the steady state is not "
      "unique (ill-posed model)");
}

/// Classifies a failed trace-replaced solve by examining the generator's
/// rank directly.
[[noreturn]] void classify_singular(const Matrix& generator,
                                    const char* context) {
  if (kernel_is_degenerate(generator)) {
    throw_degenerate();
  }
  std::ostringstream msg;
  msg << "steady-state solve failed (" << context
      << ") on a generator with a unique null vector";
  throw NumericError(msg.str());
}

}  // namespace

DensityMatrix steady_state(const Liouvillian& liouvillian,
                           SteadySolveInfo* info) {
  const Eigen::Index d = liouvillian.dim;
  const Eigen::Index n = d * d;
  if (liouvillian.generator.rows() != n ||
      liouvillian.generator.cols() != n) {
    throw err::invalid_spec("generator size does not match dim^2");
  }

  // Replace the weakest of the d diagonal-entry rows (k = i*(d+1), the rows
  // trace preservation makes linearly dependent) with the trace constraint.
  Matrix m = liouvillian.generator;
  Eigen::Index replace_row = 0;
  double best_norm = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < d; ++i) {
    const Eigen::Index row = i * (d + 1);
    const double row_norm = m.row(row).cwiseAbs().maxCoeff();
    if (row_norm < best_norm) {
      best_norm = row_norm;
      replace_row = row;
    }
  }
  m.row(replace_row).setZero();
  for (Eigen::Index i = 0; i < d; ++i) {
    m(replace_row, i * (d + 1)) = Complex(1.0, 0.0);
  }
  Vector rhs = Vector::Zero(n);
  rhs(replace_row) = Complex(1.0, 0.0);

  Eigen::PartialPivLU<Matrix> lu(m);
  // rcond alone cannot certify the factorization: when an exactly zero pivot
  // meets a consistent right-hand side, the estimate can come back healthy
  // while the solve silently picks one vector out of a multi-dimensional
  // kernel (with zero residual).  A collapsed pivot exposes that case.
  const auto pivots = lu.matrixLU().diagonal().cwiseAbs().eval();
  const bool pivot_collapse =
      !(pivots.minCoeff() > kPivotFloor * pivots.maxCoeff());
  if (pivot_collapse || !(lu.rcond() > kRcondFloor)) {
    if (kernel_is_degenerate(liouvillian.generator)) {
      throw_degenerate();
    }
    // Unique kernel after all: the factorization is stressed, not broken.
    // Fall through and let the residual gate judge the solution.
  }
  const Vector v = lu.solve(rhs);
  const double residual =
      (liouvillian.generator * v).cwiseAbs().maxCoeff();
  if (!(residual < kResidualTol)) {
    classify_singular(liouvillian.generator, "residual beyond tolerance");
  }

  // v is the column-stacked steady state; Eigen's column-major storage means
  // the un-vectorization is a straight reshape.
  Matrix rho = Eigen::Map<const Matrix>(v.data(), d, d);
  const double trace_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  const double herm_err = (rho - rho.adjoint()).cwiseAbs().maxCoeff();

  // Absorb roundoff; the raw residual above already vouched for the solve.
  rho = 0.5 * (rho + rho.adjoint()).eval();
  const double trace_real = rho.trace().real();
  if (!(std::abs(trace_real) > 0.0)) {
    throw NumericError("steady-state trace vanished after Hermitization");
  }
  rho /= trace_real;

  DensityMatrix state = DensityMatrix::validated(std::move(rho));
  if (info) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(state.rho,
                                             Eigen::EigenvaluesOnly);
    info->residual = residual;
    info->trace_error = trace_err;
    info->herm_error = herm_err;
    info->min_eigenvalue = es.eigenvalues().minCoeff();
  }
  return state;
}

Complex expectation(const Matrix& obs, const DensityMatrix& rho) {
  require_same_dim(obs, rho.rho, "expectation");
  return (obs * rho.rho).trace();
}

}  // namespace rectiflow
