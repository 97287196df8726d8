#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace entdist {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Tolerance for structural identities: entrywise assembly checks, traces,
/// conjugation round trips.
inline constexpr double kStructuralTol = 1e-12;
/// Tolerance for spectral decisions: PSD tests, trace norms, closed-form
/// versus oracle values.
inline constexpr double kSpectralTol = 1e-10;
/// Classification margin for strict inequalities; points closer than this to
/// an inequality boundary are flagged rather than classified.
inline constexpr double kBoundaryMargin = 1e-9;
/// Measurement branches below this probability are flagged degenerate
/// instead of being normalized.
inline constexpr double kDegenerateProb = 1e-14;

/// Caller broke a routine's contract (non-Hermitian input to a
/// Hermitian-only routine, non-unitary conjugation, bad qubit indices).
struct contract_error : std::logic_error {
  using std::logic_error::logic_error;
};

/// Domain data failed validation; the message names the violated invariant.
struct validation_error : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Number of qubits for a matrix dimension; throws unless dim is a power
/// of two.
inline int qubit_count(Eigen::Index dim) {
  if (dim < 2 || (dim & (dim - 1)) != 0) {
    throw contract_error("matrix dimension " + std::to_string(dim) +
                         " is not a power of two");
  }
  int n = 0;
  while ((Eigen::Index{1} << n) < dim) ++n;
  return n;
}

template <typename DerivedA, typename DerivedB>
double max_abs_diff(const Eigen::MatrixBase<DerivedA>& a,
                    const Eigen::MatrixBase<DerivedB>& b) {
  return (a.derived() - b.derived()).cwiseAbs().maxCoeff();
}

/// Entrywise equality with an explicit absolute tolerance.
template <typename DerivedA, typename DerivedB>
bool approx_equal(const Eigen::MatrixBase<DerivedA>& a,
                  const Eigen::MatrixBase<DerivedB>& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return max_abs_diff(a, b) <= tol;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& m,
                  double tol = kStructuralTol) {
  if (m.rows() != m.cols()) return false;
  return (m.derived() - m.derived().adjoint()).cwiseAbs().maxCoeff() <= tol;
}

/// Kronecker product, row-major qubit composition: entry
/// ((i*rows(b)+k),(j*cols(b)+l)) = a(i,j)*b(k,l).
template <typename DerivedA, typename DerivedB>
auto kron(const Eigen::MatrixBase<DerivedA>& a,
          const Eigen::MatrixBase<DerivedB>& b) {
  using Scalar =
      typename Eigen::ScalarBinaryOpTraits<typename DerivedA::Scalar,
                                           typename DerivedB::Scalar>::ReturnType;
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out(
      a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) =
          a(i, j) * b.derived();
  return out;
}

/// Computational basis column |index> of the given dimension.
inline Vector basis_ket(Eigen::Index index, Eigen::Index dim) {
  if (index < 0 || index >= dim) {
    throw contract_error("basis index " + std::to_string(index) +
                         " out of range for dimension " + std::to_string(dim));
  }
  Vector v = Vector::Zero(dim);
  v(index) = Complex(1, 0);
  return v;
}

namespace detail {

/// Validates a qubit index set: unique, each in [0, n).
inline void check_qubit_set(const std::vector<int>& qubits, int n,
                            const char* what) {
  for (std::size_t i = 0; i < qubits.size(); ++i) {
    if (qubits[i] < 0 || qubits[i] >= n) {
      throw contract_error(std::string(what) + ": qubit index " +
                           std::to_string(qubits[i]) + " out of range [0," +
                           std::to_string(n) + ")");
    }
    for (std::size_t j = i + 1; j < qubits.size(); ++j) {
      if (qubits[i] == qubits[j]) {
        throw contract_error(std::string(what) + ": duplicate qubit index " +
                             std::to_string(qubits[i]));
      }
    }
  }
}

/// Scatters the bits of `sub` onto the basis-index bits of the listed qubits.
/// Qubit 0 is the most significant bit of a basis index; `qubits` must be
/// ascending and bit (size-1-i) of `sub` lands on qubits[i].
inline Eigen::Index expand_bits(Eigen::Index sub, const std::vector<int>& qubits,
                                int n) {
  Eigen::Index full = 0;
  const int m = static_cast<int>(qubits.size());
  for (int i = 0; i < m; ++i) {
    const Eigen::Index bit = (sub >> (m - 1 - i)) & 1;
    full |= bit << (n - 1 - qubits[i]);
  }
  return full;
}

/// Inverse of expand_bits: collects the basis-index bits of the listed
/// qubits into a compact sub-index.
inline Eigen::Index gather_bits(Eigen::Index full, const std::vector<int>& qubits,
                                int n) {
  Eigen::Index sub = 0;
  const int m = static_cast<int>(qubits.size());
  for (int i = 0; i < m; ++i) {
    sub |= ((full >> (n - 1 - qubits[i])) & 1) << (m - 1 - i);
  }
  return sub;
}

inline Eigen::Index qubit_mask(const std::vector<int>& qubits, int n) {
  Eigen::Index mask = 0;
  for (int q : qubits) mask |= Eigen::Index{1} << (n - 1 - q);
  return mask;
}

}  // namespace detail

/// Traces out the listed qubits; the kept qubits retain their relative order.
inline Matrix partial_trace(const Matrix& m, const std::vector<int>& discard) {
  if (m.rows() != m.cols()) throw contract_error("partial_trace: non-square input");
  const int n = qubit_count(m.rows());
  detail::check_qubit_set(discard, n, "partial_trace");
  if (discard.empty() || static_cast<int>(discard.size()) >= n) {
    throw contract_error("partial_trace: discard set must be a nonempty proper subset");
  }
  std::vector<int> keep;
  for (int q = 0; q < n; ++q) {
    bool discarded = false;
    for (int d : discard) discarded = discarded || (d == q);
    if (!discarded) keep.push_back(q);
  }
  const Eigen::Index kept_dim = Eigen::Index{1} << keep.size();
  const Eigen::Index sum_dim = Eigen::Index{1} << discard.size();
  std::vector<int> discard_sorted = discard;
  std::sort(discard_sorted.begin(), discard_sorted.end());

  Matrix out = Matrix::Zero(kept_dim, kept_dim);
  for (Eigen::Index r = 0; r < kept_dim; ++r) {
    for (Eigen::Index c = 0; c < kept_dim; ++c) {
      const Eigen::Index base_r = detail::expand_bits(r, keep, n);
      const Eigen::Index base_c = detail::expand_bits(c, keep, n);
      Complex acc(0, 0);
      for (Eigen::Index d = 0; d < sum_dim; ++d) {
        const Eigen::Index off = detail::expand_bits(d, discard_sorted, n);
        acc += m(base_r | off, base_c | off);
      }
      out(r, c) = acc;
    }
  }
  return out;
}

/// Transposes the indices of the listed qubits only. Involutive on the same
/// subset; the full set gives the plain transpose.
inline Matrix partial_transpose(const Matrix& m,
                                const std::vector<int>& subsystem) {
  if (m.rows() != m.cols())
    throw contract_error("partial_transpose: non-square input");
  const int n = qubit_count(m.rows());
  detail::check_qubit_set(subsystem, n, "partial_transpose");
  const Eigen::Index mask = detail::qubit_mask(subsystem, n);
  Matrix out(m.rows(), m.cols());
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      const Eigen::Index tr = (r & ~mask) | (c & mask);
      const Eigen::Index tc = (c & ~mask) | (r & mask);
      out(tr, tc) = m(r, c);
    }
  }
  return out;
}

/// Ascending real eigenvalues of a Hermitian matrix.
inline Eigen::VectorXd hermitian_eigenvalues(const Matrix& m) {
  if (!is_hermitian(m, kSpectralTol)) {
    throw contract_error("hermitian_eigenvalues: input is not Hermitian");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues();
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
inline double trace_norm(const Matrix& m) {
  if (!is_hermitian(m, kSpectralTol)) {
    throw contract_error("trace_norm: input is not Hermitian");
  }
  return hermitian_eigenvalues(m).cwiseAbs().sum();
}

/// True iff the minimum eigenvalue is >= -tol. Input is assumed Hermitian;
/// only the lower triangle is read.
inline bool is_psd(const Matrix& m, double tol) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff() >= -tol;
}

/// Dense Hermitian unit-trace PSD matrix on a register of qubits, validated
/// at construction. Unnormalized blocks (measurement branches, channel
/// outputs) are handled as plain Matrix values carrying their own weight.
class DensityMatrix {
 public:
  explicit DensityMatrix(Matrix m) : mat_(std::move(m)) {
    if (mat_.rows() != mat_.cols()) {
      throw validation_error("density matrix must be square");
    }
    qubits_ = qubit_count(mat_.rows());
    if (!is_hermitian(mat_, kStructuralTol)) {
      throw validation_error("density matrix is not Hermitian within 1e-12");
    }
    if (std::abs(mat_.trace().real() - 1.0) > kStructuralTol ||
        std::abs(mat_.trace().imag()) > kStructuralTol) {
      throw validation_error("density matrix trace differs from 1 by more than 1e-12");
    }
    if (!is_psd(mat_, kSpectralTol)) {
      throw validation_error("density matrix has an eigenvalue below -1e-10");
    }
  }

  const Matrix& matrix() const { return mat_; }
  int qubits() const { return qubits_; }
  Eigen::Index dim() const { return mat_.rows(); }

 private:
  Matrix mat_;
  int qubits_ = 0;
};

inline DensityMatrix partial_trace(const DensityMatrix& rho,
                                   const std::vector<int>& discard) {
  return DensityMatrix(partial_trace(rho.matrix(), discard));
}

inline Matrix partial_transpose(const DensityMatrix& rho,
                                const std::vector<int>& subsystem) {
  return partial_transpose(rho.matrix(), subsystem);
}

}  // namespace entdist
