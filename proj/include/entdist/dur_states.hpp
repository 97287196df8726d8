#pragma once

#include "entdist/qlinalg.hpp"

#include <cstdint>
#include <vector>

namespace entdist {

/// Point in the four-parameter family of three-qubit mixed states: weights
/// lam0p/lam0m on the two GHZ-like basis states and lam1..lam3 on the
/// remaining basis pairs, constrained to lam0p + lam0m + 2*(lam1+lam2+lam3)
/// = 1 with lam0p the maximal weight.
struct DurParams {
  double lam0p = 0;
  double lam0m = 0;
  double lam1 = 0;
  double lam2 = 0;
  double lam3 = 0;

  /// Gap between the two GHZ weights; controls the coherence available for
  /// distribution. Reported as "delta" in all external formats.
  double delta() const { return lam0p - lam0m; }
  /// Combined weight of the two GHZ-like terms.
  double delta_sum() const { return lam0p + lam0m; }
  double trace_sum() const { return lam0p + lam0m + 2 * (lam1 + lam2 + lam3); }

  /// Validates the point and returns it with the trace constraint made
  /// exact by adjusting lam0m. Inputs off by more than trace_tol are
  /// rejected with the violated invariant named.
  static DurParams validated(double lam0p, double lam0m, double lam1,
                             double lam2, double lam3,
                             double trace_tol = kStructuralTol);
};

/// Parameter point of the original distribution procedure:
/// (1/3, 0, 1/6, 0, 1/6).
DurParams rho_prime_params();

/// Rank-1 projector onto (|j>_ab|0>_c + sign*|3-j>_ab|1>_c)/sqrt(2) under
/// the fixed ordering qubit 0 = a (most significant), 1 = b, 2 = c.
DensityMatrix ghz_basis_state(int j, int sign);

/// The four-parameter mixture, diagonal in the GHZ-like basis.
DensityMatrix build_rho(const DurParams& p);

/// State prepared by the distributing parties, assembled from its two
/// c-sector blocks. Equals build_rho conjugated by CNOT(a -> c).
DensityMatrix build_sigma(const DurParams& p);

/// State after the receiver's CNOT(b -> c), assembled from its two
/// c-sector blocks. Equals build_rho conjugated by CNOT(b -> c).
DensityMatrix build_tau(const DurParams& p);

/// Unnormalized 4x4 block of build_sigma / build_tau on the c = sector
/// subspace; the block carries its own weight.
Matrix sigma_block(const DurParams& p, int sector);
Matrix tau_block(const DurParams& p, int sector);

/// One-parameter family saturating both entanglement bounds at each gap:
/// lam0p = (1-delta)/2, lam0m = lam0p - delta, lam1 = lam3 = delta/2,
/// lam2 = 0. Requires 0 < delta <= 1/3.
DurParams extremal_params(double delta);

/// Seed-deterministic samples covering the constrained simplex interior:
/// five unit-exponential draws, normalized with the pair weights halved,
/// with the lam0p-maximality constraint enforced by rejection.
std::vector<DurParams> sample_params(std::uint64_t seed, int count);

}  // namespace entdist
