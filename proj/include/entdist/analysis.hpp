#pragma once

#include "entdist/cvdc.hpp"

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace entdist {

struct InequalityRecord {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Verdict on the four procedure conditions for one parameter point. Every
/// condition is evaluated twice: from the closed-form inequalities and from
/// the matrix oracle; the two routes must agree away from the boundary band.
struct ConditionReport {
  bool cond_a = false;  // prepared state fully separable
  bool cond_b = false;  // two-qubit marginal separable
  bool cond_c = false;  // carrier qubit never entangled with the pair
  bool cond_d = false;  // branches separable, kept branch entangled
  bool oracle_a = false;
  bool oracle_b = false;
  bool oracle_c = false;
  bool oracle_d = false;
  /// Conjunction of the three closed-form inequalities with margin.
  bool can_distribute = false;
  /// Within kBoundaryMargin of some inequality boundary; excluded from
  /// iff-equivalence checks.
  bool near_boundary = false;
  std::vector<InequalityRecord> violated_inequalities;
};

/// Negativity of a 4x4 Hermitian PSD matrix, trace norm of the partial
/// transpose minus the trace. Accepts unnormalized blocks carrying their
/// own weight.
double negativity(const Matrix& m);

/// PPT test, exact for two qubits.
bool is_two_qubit_separable(const DensityMatrix& rho);

ConditionReport check_conditions(const DurParams& p);

/// Membership in the distributing family: 2*lam1 >= delta, 2*lam2 < delta,
/// 2*lam3 >= delta, each classified with the margin.
bool can_distribute(const DurParams& p);

/// True when some membership inequality sits within `margin` of equality.
bool near_class_boundary(const DurParams& p, double margin = kBoundaryMargin);

/// Average entanglement yield of the probabilistic run, closed form
/// delta - 2*lam2 (may be negative outside the distributing family).
double avg_entanglement_closed(const DurParams& p);

/// Same quantity from the matrix oracle: extraction probability times the
/// negativity of the normalized kept branch.
double avg_entanglement_oracle(const DurParams& p);

/// Negativity of the deterministic final state, closed form
/// max(sqrt((lam1+lam3)^2 + delta^2) - (lam1 + 2*lam2 + lam3), 0).
double deterministic_negativity_closed(const DurParams& p);

/// Same quantity from the full matrix route.
double deterministic_negativity_oracle(const DurParams& p);

/// Envelope sqrt(x^2 + delta^2) - x bounding the deterministic negativity;
/// strictly decreasing on its domain [delta, (1-delta)/2].
double negativity_envelope(double x, double delta);

struct Counterexample {
  long long index = 0;
  DurParams params;
  std::string detail;
};

/// Outcome of one named verification check; serialized per check as
/// {name, passed, counterexamples, worst_residual}.
struct CheckResult {
  CheckResult() = default;
  explicit CheckResult(std::string check_name) : name(std::move(check_name)) {}

  std::string name;
  bool passed = true;
  long long checked = 0;
  long long excluded_boundary = 0;
  long long failures = 0;
  double worst_residual = 0.0;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<Counterexample> counterexamples;

  void fail(long long index, const DurParams& p, std::string detail);
  void residual(double r);
};

/// Inequality membership versus the matrix-oracle characterization, plus
/// per-condition route agreement, over the given samples. Boundary-band
/// samples are counted and excluded.
std::vector<CheckResult> verify_membership_iff(
    const std::vector<DurParams>& samples);

/// Gap bound 0 < delta <= 1/3 over distributing samples, tightness of the
/// bound on a grid of extremal points, and the per-sample intermediate
/// bound 3*delta <= lam0p + 2*lam1 + 2*lam3.
std::vector<CheckResult> verify_gap_bound(const std::vector<DurParams>& samples,
                                          int grid_points);

/// Probabilistic optimality over fixed-gap slices: the yield never exceeds
/// the slice gap and the extremal point attains it.
std::vector<CheckResult> verify_probabilistic_optimality(
    const std::vector<double>& grid, int per_delta, std::uint64_t seed);

/// Deterministic optimality over fixed-gap slices: the final negativity
/// never exceeds (sqrt(2)-1)*delta, the extremal point attains it, the
/// slice samples satisfy delta <= lam1+lam3 <= (1-delta)/2, and the
/// headline value at delta = 1/3 matches (sqrt(2)-1)/3.
std::vector<CheckResult> verify_deterministic_optimality(
    const std::vector<double>& grid, int per_delta, std::uint64_t seed);

/// Exact-arithmetic uniqueness of the gap-1/3 point plus grid shrinkage of
/// the feasible set as the gap approaches 1/3.
std::vector<CheckResult> verify_uniqueness(const std::vector<double>& margins,
                                           double step);

/// Closed form of the probabilistic yield against the measurement oracle
/// over the samples (clamped everywhere, unclamped inside the family).
CheckResult verify_avg_closed_form(const std::vector<DurParams>& samples);

/// Closed form of the deterministic negativity against the matrix oracle,
/// and the sign of the final negativity against the entanglement predicate
/// 4*lam2*(lam1+lam2+lam3) < delta^2.
std::vector<CheckResult> verify_final_closed_form(
    const std::vector<DurParams>& samples);

/// Monotonicity and maximum of the negativity envelope.
std::vector<CheckResult> verify_envelope();

/// Structural suite: dual-construction equality, exact Kraus completeness,
/// the PPT sign flip at 2*lam3 = delta with its closed 2x2 eigenvalues,
/// partial-transpose involution, measurement normalization.
std::vector<CheckResult> verify_structural(std::uint64_t seed, int count);

/// Seed-deterministic samples of the fixed-gap slice of the distributing
/// family; empty when count is zero. The slice degenerates to a single
/// point as delta approaches 1/3.
std::vector<DurParams> conditioned_samples(double delta, int count,
                                           std::uint64_t seed);

struct UniquePoint {
  bool unique = false;
  DurParams params;
};

/// Exact-rational derivation: at gap 1/3 the coordinate minima forced by
/// the membership inequalities already exhaust the trace constraint, so the
/// feasible point is unique.
UniquePoint unique_max_gap_point();

/// One record of a gap sweep: closed-form versus oracle values for both
/// procedure variants.
struct SweepRow {
  DurParams params;
  double delta = 0.0;
  double p_e = 0.0;
  double neg_closed = 0.0;
  double neg_oracle = 0.0;
  double det_neg_closed = 0.0;
  double det_neg_oracle = 0.0;
  double residual_prob = 0.0;
  double residual_det = 0.0;
  bool extremal = false;
};

std::vector<double> delta_grid(double delta_min, double delta_max, int steps);

/// Grid of n points i*(1/3)/n covering (0, 1/3].
std::vector<double> tightness_grid(int n);

std::vector<SweepRow> run_sweep(double delta_min, double delta_max, int steps,
                                int samples_per_delta, std::uint64_t seed);

}  // namespace entdist
