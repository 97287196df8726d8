#include "entdist/dur_states.hpp"

#include "rng_util.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace entdist {

namespace {

std::string num_str(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

DurParams DurParams::validated(double lam0p, double lam0m, double lam1,
                               double lam2, double lam3, double trace_tol) {
  const double vals[5] = {lam0p, lam0m, lam1, lam2, lam3};
  const char* names[5] = {"lam0p", "lam0m", "lam1", "lam2", "lam3"};
  for (int i = 0; i < 5; ++i) {
    if (!(vals[i] >= 0.0 && vals[i] <= 1.0)) {
      throw validation_error(std::string(names[i]) + " must lie in [0,1], got " +
                             num_str(vals[i]));
    }
  }
  const double sum = lam0p + lam0m + 2 * (lam1 + lam2 + lam3);
  if (!(std::abs(sum - 1.0) <= trace_tol)) {
    throw validation_error(
        "weights must satisfy lam0p + lam0m + 2*(lam1+lam2+lam3) = 1, got " +
        num_str(sum));
  }
  // Make the trace constraint exact through lam0m; the shift is at most
  // trace_tol, so a slightly negative result is clamped. When the clamp
  // leaves a residual (possible only under a loosened trace_tol), rescale
  // all weights; scaling preserves every remaining invariant.
  double adjusted = 1.0 - (lam0p + 2 * (lam1 + lam2 + lam3));
  if (adjusted < 0.0) adjusted = 0.0;
  const double residual = lam0p + adjusted + 2 * (lam1 + lam2 + lam3) - 1.0;
  if (std::abs(residual) > 1e-13) {
    const double scale = 1.0 / (1.0 + residual);
    lam0p *= scale;
    adjusted *= scale;
    lam1 *= scale;
    lam2 *= scale;
    lam3 *= scale;
    adjusted = std::max(0.0, adjusted + (1.0 - (lam0p + adjusted + 2 * (lam1 + lam2 + lam3))));
  }
  const double max_rest = std::max({adjusted, lam1, lam2, lam3});
  if (lam0p < max_rest - trace_tol) {
    throw validation_error("lam0p must be the maximal weight");
  }
  return DurParams{lam0p, adjusted, lam1, lam2, lam3};
}

DurParams rho_prime_params() {
  return DurParams::validated(1.0 / 3.0, 0.0, 1.0 / 6.0, 0.0, 1.0 / 6.0);
}

DensityMatrix ghz_basis_state(int j, int sign) {
  if (j < 0 || j > 3) {
    throw contract_error("ghz_basis_state: j must lie in [0,3], got " +
                         std::to_string(j));
  }
  if (sign != 1 && sign != -1) {
    throw contract_error("ghz_basis_state: sign must be +1 or -1");
  }
  // |j>_ab|0>_c has basis index 2j, |3-j>_ab|1>_c has index 7-2j.
  const Vector v = (basis_ket(2 * j, 8) +
                    static_cast<double>(sign) * basis_ket(7 - 2 * j, 8)) /
                   std::sqrt(2.0);
  return DensityMatrix(v * v.adjoint());
}

DensityMatrix build_rho(const DurParams& p) {
  Matrix m = p.lam0p * ghz_basis_state(0, +1).matrix() +
             p.lam0m * ghz_basis_state(0, -1).matrix();
  const double pair_weight[4] = {0.0, p.lam1, p.lam2, p.lam3};
  for (int j = 1; j <= 3; ++j) {
    m += pair_weight[j] * (ghz_basis_state(j, +1).matrix() +
                           ghz_basis_state(j, -1).matrix());
  }
  return DensityMatrix(m);
}

Matrix sigma_block(const DurParams& p, int sector) {
  if (sector != 0 && sector != 1) {
    throw contract_error("sigma_block: sector must be 0 or 1");
  }
  Matrix b = Matrix::Zero(4, 4);
  if (sector == 0) {
    const double half_sum = p.delta_sum() / 2;
    const double half_gap = p.delta() / 2;
    b(0, 0) = b(3, 3) = half_sum;
    b(0, 3) = b(3, 0) = half_gap;
    b(1, 1) = b(2, 2) = p.lam1;
  } else {
    b(0, 0) = b(3, 3) = p.lam3;
    b(1, 1) = b(2, 2) = p.lam2;
  }
  return b;
}

Matrix tau_block(const DurParams& p, int sector) {
  if (sector != 0 && sector != 1) {
    throw contract_error("tau_block: sector must be 0 or 1");
  }
  Matrix b = Matrix::Zero(4, 4);
  if (sector == 0) {
    const double half_sum = p.delta_sum() / 2;
    const double half_gap = p.delta() / 2;
    b(0, 0) = b(3, 3) = half_sum;
    b(0, 3) = b(3, 0) = half_gap;
    b(1, 1) = b(2, 2) = p.lam2;
  } else {
    b(0, 0) = b(3, 3) = p.lam3;
    b(1, 1) = b(2, 2) = p.lam1;
  }
  return b;
}

namespace {

DensityMatrix from_c_blocks(const Matrix& block0, const Matrix& block1) {
  Matrix p0 = Matrix::Zero(2, 2);
  p0(0, 0) = 1;
  Matrix p1 = Matrix::Zero(2, 2);
  p1(1, 1) = 1;
  return DensityMatrix(kron(block0, p0) + kron(block1, p1));
}

}  // namespace

DensityMatrix build_sigma(const DurParams& p) {
  return from_c_blocks(sigma_block(p, 0), sigma_block(p, 1));
}

DensityMatrix build_tau(const DurParams& p) {
  return from_c_blocks(tau_block(p, 0), tau_block(p, 1));
}

DurParams extremal_params(double delta) {
  if (!(delta > 0.0 && delta <= 1.0 / 3.0)) {
    throw std::domain_error("extremal_params: delta must lie in (0, 1/3], got " +
                            std::to_string(delta));
  }
  const double lam0p = (1.0 - delta) / 2;
  const double lam0m = lam0p - delta;
  return DurParams::validated(lam0p, lam0m, delta / 2, 0.0, delta / 2);
}

std::vector<DurParams> sample_params(std::uint64_t seed, int count) {
  if (count < 1) {
    throw contract_error("sample_params: count must be >= 1");
  }
  std::mt19937_64 eng(seed);
  std::vector<DurParams> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    double draws[5];
    double total = 0.0;
    for (double& d : draws) {
      d = detail::exp_variate(eng);
      total += d;
    }
    const double l0p = draws[0] / total;
    const double l0m = draws[1] / total;
    const double l1 = draws[2] / (2 * total);
    const double l2 = draws[3] / (2 * total);
    const double l3 = draws[4] / (2 * total);
    if (l0p < l0m || l0p < l1 || l0p < l2 || l0p < l3) continue;
    out.push_back(DurParams::validated(l0p, l0m, l1, l2, l3));
  }
  return out;
}

}  // namespace entdist
