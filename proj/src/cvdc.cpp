#include "entdist/cvdc.hpp"

namespace entdist {

KrausChannel KrausChannel::validated(std::vector<Matrix> ops) {
  if (ops.empty()) {
    throw contract_error("KrausChannel: operator list must be nonempty");
  }
  const Eigen::Index dim = ops.front().rows();
  Matrix completeness = Matrix::Zero(dim, dim);
  for (const Matrix& op : ops) {
    if (op.rows() != dim || op.cols() != dim) {
      throw contract_error("KrausChannel: operators must share one square dimension");
    }
    completeness += op.adjoint() * op;
  }
  if (!approx_equal(completeness, Matrix::Identity(dim, dim), kStructuralTol)) {
    throw contract_error("KrausChannel: completeness relation violated");
  }
  return KrausChannel{std::move(ops)};
}

Matrix cnot(int control, int target, int num_qubits) {
  if (control == target) {
    throw contract_error("cnot: control and target must differ");
  }
  if (control < 0 || control >= num_qubits || target < 0 ||
      target >= num_qubits) {
    throw contract_error("cnot: qubit index out of range");
  }
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  const Eigen::Index cbit = Eigen::Index{1} << (num_qubits - 1 - control);
  const Eigen::Index tbit = Eigen::Index{1} << (num_qubits - 1 - target);
  Matrix u = Matrix::Zero(dim, dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const Eigen::Index j = (i & cbit) ? (i ^ tbit) : i;
    u(j, i) = Complex(1, 0);
  }
  return u;
}

DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u) {
  if (u.rows() != u.cols() || u.rows() != rho.dim()) {
    throw contract_error("apply_unitary: dimension mismatch");
  }
  if (!approx_equal(Matrix(u.adjoint() * u),
                    Matrix::Identity(u.rows(), u.cols()), kSpectralTol)) {
    throw contract_error("apply_unitary: matrix is not unitary within 1e-10");
  }
  return DensityMatrix(u * rho.matrix() * u.adjoint());
}

std::pair<MeasurementResult, MeasurementResult> measure_qubit(
    const DensityMatrix& rho, int q) {
  const int n = rho.qubits();
  if (q < 0 || q >= n) {
    throw contract_error("measure_qubit: qubit index out of range");
  }
  if (n < 2) {
    throw contract_error("measure_qubit: register must keep at least one qubit");
  }
  const Eigen::Index bit = Eigen::Index{1} << (n - 1 - q);

  auto branch = [&](int outcome) {
    const Eigen::Index want = outcome ? bit : 0;
    Matrix projected = rho.matrix();
    for (Eigen::Index r = 0; r < projected.rows(); ++r) {
      for (Eigen::Index c = 0; c < projected.cols(); ++c) {
        if ((r & bit) != want || (c & bit) != want) projected(r, c) = 0;
      }
    }
    MeasurementResult res;
    res.outcome = outcome;
    res.weighted_state = partial_trace(projected, std::vector<int>{q});
    res.probability = res.weighted_state.trace().real();
    if (res.probability < kDegenerateProb) {
      res.degenerate = true;
    } else {
      res.post_state = DensityMatrix(res.weighted_state / res.probability);
    }
    return res;
  };

  return {branch(0), branch(1)};
}

KrausChannel deterministic_channel() {
  const Matrix eye2 = Matrix::Identity(2, 2);
  const Matrix keep0 = basis_ket(0, 2) * basis_ket(0, 2).adjoint();
  const Matrix keep1 = basis_ket(1, 2) * basis_ket(1, 2).adjoint();
  const Matrix lower = basis_ket(0, 2) * basis_ket(1, 2).adjoint();
  return KrausChannel::validated(
      {kron(eye2, keep0), kron(keep0, keep1), kron(lower, keep1)});
}

Matrix embed_operator(const Matrix& op, const std::vector<int>& on,
                      int num_qubits) {
  detail::check_qubit_set(on, num_qubits, "embed_operator");
  for (std::size_t i = 1; i < on.size(); ++i) {
    if (on[i - 1] >= on[i]) {
      throw contract_error("embed_operator: qubit list must be ascending");
    }
  }
  if (op.rows() != op.cols() ||
      op.rows() != (Eigen::Index{1} << on.size())) {
    throw contract_error("embed_operator: operator dimension mismatch");
  }
  const Eigen::Index dim = Eigen::Index{1} << num_qubits;
  const Eigen::Index mask = detail::qubit_mask(on, num_qubits);
  Matrix out = Matrix::Zero(dim, dim);
  for (Eigen::Index r = 0; r < dim; ++r) {
    for (Eigen::Index c = 0; c < dim; ++c) {
      if ((r & ~mask) != (c & ~mask)) continue;
      out(r, c) = op(detail::gather_bits(r, on, num_qubits),
                     detail::gather_bits(c, on, num_qubits));
    }
  }
  return out;
}

DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch,
                            const std::vector<int>& on) {
  if (ch.dim() != (Eigen::Index{1} << on.size())) {
    throw contract_error("apply_channel: channel dimension does not match qubit set");
  }
  Matrix out = Matrix::Zero(rho.dim(), rho.dim());
  for (const Matrix& op : ch.operators) {
    const Matrix full = embed_operator(op, on, rho.qubits());
    out += full * rho.matrix() * full.adjoint();
  }
  return DensityMatrix(out);
}

ProcedureTrace run_probabilistic(const DurParams& p) {
  const DensityMatrix sigma = build_sigma(p);
  const Matrix cnot_ac = cnot(0, 2, 3);
  const Matrix cnot_bc = cnot(1, 2, 3);
  const DensityMatrix rho = apply_unitary(sigma, cnot_ac);
  const DensityMatrix tau = apply_unitary(rho, cnot_bc);
  auto [kept, dropped] = measure_qubit(tau, 2);

  ProcedureTrace trace;
  trace.stages.push_back({"prepared", sigma});
  trace.stages.push_back({"after-cnot-ac", rho});
  trace.stages.push_back({"after-cnot-bc", tau});
  if (kept.post_state) {
    trace.stages.push_back({"kept-branch", *kept.post_state});
  }
  trace.p_e = kept.probability;
  trace.kept = std::move(kept);
  trace.dropped = std::move(dropped);
  return trace;
}

DensityMatrix run_deterministic(const DurParams& p) {
  const DensityMatrix tau =
      apply_unitary(build_rho(p), cnot(1, 2, 3));
  const DensityMatrix mapped =
      apply_channel(tau, deterministic_channel(), {1, 2});
  return partial_trace(mapped, std::vector<int>{2});
}

}  // namespace entdist
