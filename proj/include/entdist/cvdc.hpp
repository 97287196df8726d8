#pragma once

#include "entdist/dur_states.hpp"

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace entdist {

/// Ordered Kraus operators of a CPTP map. Completeness
/// sum_j K_j^dag K_j = I is checked at construction.
struct KrausChannel {
  std::vector<Matrix> operators;

  static KrausChannel validated(std::vector<Matrix> ops);
  Eigen::Index dim() const { return operators.front().rows(); }
};

/// One branch of a computational-basis measurement of a single qubit.
struct MeasurementResult {
  int outcome = 0;
  double probability = 0.0;
  /// Normalized state on the remaining qubits; absent when the branch is
  /// degenerate (probability below kDegenerateProb).
  std::optional<DensityMatrix> post_state;
  /// probability * post_state on the remaining qubits; well-defined for
  /// degenerate branches too.
  Matrix weighted_state;
  bool degenerate = false;
};

struct Stage {
  std::string label;
  DensityMatrix state;
};

/// Record of one probabilistic distribution run: prepared state, both CNOT
/// stages, the kept measurement branch, and the extraction probability.
struct ProcedureTrace {
  std::vector<Stage> stages;
  double p_e = 0.0;
  MeasurementResult kept;
  MeasurementResult dropped;
};

/// Controlled-NOT permutation matrix on an n-qubit register.
Matrix cnot(int control, int target, int num_qubits);

/// u * rho * u^dag; u must be unitary within kSpectralTol.
DensityMatrix apply_unitary(const DensityMatrix& rho, const Matrix& u);

/// Projects qubit q onto |0> and |1> and returns both branches with the
/// measured qubit traced out. Degenerate branches are flagged, not thrown.
std::pair<MeasurementResult, MeasurementResult> measure_qubit(
    const DensityMatrix& rho, int q);

/// The two-qubit CPTP map replacing the measurement in the deterministic
/// variant: identity on the c = 0 sector, reset of b to |0> on the c = 1
/// sector. Operator order: b most significant, c least significant.
KrausChannel deterministic_channel();

/// Embeds an operator acting on the listed qubits (ascending) into the full
/// register via identity padding on the others.
Matrix embed_operator(const Matrix& op, const std::vector<int>& on,
                      int num_qubits);

/// sum_j K_j rho K_j^dag with the channel embedded on the listed qubits.
DensityMatrix apply_channel(const DensityMatrix& rho, const KrausChannel& ch,
                            const std::vector<int>& on);

/// Full probabilistic run: prepared state -> CNOT(a->c) -> CNOT(b->c) ->
/// measurement of c. p_e is the probability of the entanglement-carrying
/// outcome 0.
ProcedureTrace run_probabilistic(const DurParams& p);

/// Deterministic variant: applies the two-qubit CPTP map to qubits b,c of
/// the post-CNOT state and traces out c. Returns the final two-qubit state.
DensityMatrix run_deterministic(const DurParams& p);

}  // namespace entdist
