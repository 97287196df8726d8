#include "entdist/analysis.hpp"

#include "rng_util.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <random>

namespace entdist {

namespace {

constexpr std::size_t kMaxCounterexamples = 12;

// 4x4 sub-block of an 8x8 three-qubit matrix with qubit c fixed to `sector`
// on both sides.
Matrix c_sector(const Matrix& m, int sector) {
  Matrix out(4, 4);
  for (Eigen::Index r = 0; r < 4; ++r)
    for (Eigen::Index c = 0; c < 4; ++c)
      out(r, c) = m(2 * r + sector, 2 * c + sector);
  return out;
}

// Largest matrix element coupling the c = 0 and c = 1 sectors.
double c_coupling_max(const Matrix& m) {
  double worst = 0.0;
  for (Eigen::Index r = 0; r < 8; ++r)
    for (Eigen::Index c = 0; c < 8; ++c)
      if ((r & 1) != (c & 1)) worst = std::max(worst, std::abs(m(r, c)));
  return worst;
}

bool ppt4(const Matrix& m) {
  return is_psd(partial_transpose(m, std::vector<int>{0}), kSpectralTol);
}

// Separability of one measurement branch; degenerate branches carry no
// weight and count as separable.
bool branch_separable(const MeasurementResult& branch) {
  if (branch.degenerate) return true;
  return is_two_qubit_separable(*branch.post_state);
}

std::string describe(const char* what, double lhs, double rhs) {
  return std::string(what) + ": " + std::to_string(lhs) + " vs " +
         std::to_string(rhs);
}

}  // namespace

double negativity(const Matrix& m) {
  if (m.rows() != 4 || m.cols() != 4) {
    throw contract_error("negativity: input must be 4x4");
  }
  if (!is_hermitian(m, kSpectralTol)) {
    throw contract_error("negativity: input is not Hermitian");
  }
  if (!is_psd(m, kSpectralTol)) {
    throw contract_error("negativity: input is not PSD within 1e-10");
  }
  const double norm = trace_norm(partial_transpose(m, std::vector<int>{0}));
  return std::max(norm - m.trace().real(), 0.0);
}

bool is_two_qubit_separable(const DensityMatrix& rho) {
  if (rho.qubits() != 2) {
    throw contract_error("is_two_qubit_separable: input must be a two-qubit state");
  }
  return ppt4(rho.matrix());
}

bool can_distribute(const DurParams& p) {
  const double gap = p.delta();
  return 2 * p.lam1 - gap >= -kBoundaryMargin &&
         2 * p.lam3 - gap >= -kBoundaryMargin &&
         gap - 2 * p.lam2 > kBoundaryMargin;
}

bool near_class_boundary(const DurParams& p, double margin) {
  const double gap = p.delta();
  return std::abs(2 * p.lam1 - gap) <= margin ||
         std::abs(2 * p.lam2 - gap) <= margin ||
         std::abs(2 * p.lam3 - gap) <= margin;
}

ConditionReport check_conditions(const DurParams& p) {
  const double gap = p.delta();
  ConditionReport rep;

  // Closed-form routes. Condition (b) holds identically: the two-qubit
  // marginal of the family is diagonal.
  const bool block0_sep = 2 * p.lam1 - gap >= -kBoundaryMargin;
  const bool carrier_ppt = 2 * p.lam3 - gap >= -kBoundaryMargin;
  const bool kept_entangled = gap - 2 * p.lam2 > kBoundaryMargin;
  rep.cond_a = block0_sep;
  rep.cond_b = true;
  rep.cond_c = carrier_ppt;
  rep.cond_d = block0_sep && kept_entangled;
  rep.can_distribute = block0_sep && carrier_ppt && kept_entangled;
  rep.near_boundary = near_class_boundary(p);

  if (!block0_sep) {
    rep.violated_inequalities.push_back({"2lam1-ge-delta", 2 * p.lam1, gap});
  }
  if (!kept_entangled) {
    rep.violated_inequalities.push_back({"2lam2-lt-delta", 2 * p.lam2, gap});
  }
  if (!carrier_ppt) {
    rep.violated_inequalities.push_back({"2lam3-ge-delta", 2 * p.lam3, gap});
  }

  // Matrix-oracle routes.
  const DensityMatrix sigma = build_sigma(p);
  const DensityMatrix rho = build_rho(p);
  const DensityMatrix tau = build_tau(p);

  rep.oracle_a = c_coupling_max(sigma.matrix()) <= 1e-14 &&
                 ppt4(c_sector(sigma.matrix(), 0)) &&
                 ppt4(c_sector(sigma.matrix(), 1));
  rep.oracle_b = ppt4(partial_trace(rho.matrix(), std::vector<int>{2}));
  rep.oracle_c =
      is_psd(partial_transpose(rho.matrix(), std::vector<int>{2}), kSpectralTol) &&
      c_coupling_max(tau.matrix()) <= 1e-14;

  const auto [sigma0, sigma1] = measure_qubit(sigma, 2);
  const auto [rho0, rho1] = measure_qubit(rho, 2);
  const auto [tau0, tau1] = measure_qubit(tau, 2);
  const bool sep_half = branch_separable(sigma0) && branch_separable(sigma1) &&
                        branch_separable(rho0) && branch_separable(rho1);
  const bool ent_half =
      !tau0.degenerate && negativity(tau0.weighted_state) > kBoundaryMargin / 2;
  rep.oracle_d = sep_half && ent_half;

  return rep;
}

double avg_entanglement_closed(const DurParams& p) {
  return p.delta() - 2 * p.lam2;
}

double avg_entanglement_oracle(const DurParams& p) {
  const ProcedureTrace trace = run_probabilistic(p);
  if (trace.kept.degenerate) return 0.0;
  return trace.p_e * negativity(trace.kept.post_state->matrix());
}

double deterministic_negativity_closed(const DurParams& p) {
  const double pair_sum = p.lam1 + p.lam3;
  const double value =
      std::hypot(pair_sum, p.delta()) - (p.lam1 + 2 * p.lam2 + p.lam3);
  return std::max(value, 0.0);
}

double deterministic_negativity_oracle(const DurParams& p) {
  return negativity(run_deterministic(p).matrix());
}

double negativity_envelope(double x, double delta) {
  if (!(delta > 0.0 && delta <= 1.0 / 3.0)) {
    throw std::domain_error("negativity_envelope: delta must lie in (0, 1/3]");
  }
  const double hi = (1.0 - delta) / 2;
  if (!(x >= delta - 1e-12 && x <= hi + 1e-12)) {
    throw std::domain_error("negativity_envelope: x must lie in [delta, (1-delta)/2]");
  }
  return std::hypot(x, delta) - x;
}

void CheckResult::fail(long long index, const DurParams& p, std::string detail) {
  passed = false;
  ++failures;
  if (counterexamples.size() < kMaxCounterexamples) {
    counterexamples.push_back({index, p, std::move(detail)});
  }
}

void CheckResult::residual(double r) {
  worst_residual = std::max(worst_residual, r);
}

std::vector<CheckResult> verify_membership_iff(
    const std::vector<DurParams>& samples) {
  CheckResult iff{"membership-iff"};
  CheckResult routes{"condition-routes-agree"};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const DurParams& p = samples[i];
    const ConditionReport rep = check_conditions(p);
    if (rep.near_boundary) {
      ++iff.excluded_boundary;
      ++routes.excluded_boundary;
      continue;
    }
    ++iff.checked;
    ++routes.checked;
    const bool oracle_member =
        rep.oracle_a && rep.oracle_b && rep.oracle_c && rep.oracle_d;
    if (rep.can_distribute != oracle_member) {
      iff.fail(static_cast<long long>(i), p,
               rep.can_distribute ? "inequalities admit, oracle rejects"
                                  : "oracle admits, inequalities reject");
    }
    if (rep.cond_a != rep.oracle_a || rep.cond_b != rep.oracle_b ||
        rep.cond_c != rep.oracle_c || rep.cond_d != rep.oracle_d) {
      routes.fail(static_cast<long long>(i), p, "closed-form and oracle condition verdicts differ");
    }
  }
  return {iff, routes};
}

std::vector<CheckResult> verify_gap_bound(const std::vector<DurParams>& samples,
                                          int grid_points) {
  CheckResult bound{"gap-bound"};
  CheckResult tightness{"gap-tightness"};
  CheckResult intermediate{"gap-intermediate-bound"};

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const DurParams& p = samples[i];
    if (near_class_boundary(p)) {
      ++bound.excluded_boundary;
      continue;
    }
    if (!can_distribute(p)) continue;
    ++bound.checked;
    ++intermediate.checked;
    const double gap = p.delta();
    if (!(gap > 0.0 && gap <= 1.0 / 3.0 + kStructuralTol)) {
      bound.fail(static_cast<long long>(i), p,
                 describe("gap outside (0, 1/3]", gap, 1.0 / 3.0));
    }
    bound.residual(std::max(0.0, gap - 1.0 / 3.0));
    const double budget = p.lam0p + 2 * p.lam1 + 2 * p.lam3;
    if (!(3 * gap <= budget + kStructuralTol)) {
      intermediate.fail(static_cast<long long>(i), p,
                        describe("3*delta exceeds lam0p+2*lam1+2*lam3", 3 * gap,
                                 budget));
    }
  }

  for (double d : tightness_grid(grid_points)) {
    const DurParams e = extremal_params(d);
    ++tightness.checked;
    if (!can_distribute(e)) {
      tightness.fail(tightness.checked, e,
                     describe("extremal point not in distributing family", d, 0));
    }
  }
  return {bound, tightness, intermediate};
}

std::vector<DurParams> conditioned_samples(double delta, int count,
                                           std::uint64_t seed) {
  if (!(delta > 0.0 && delta <= 1.0 / 3.0)) {
    throw std::domain_error("conditioned_samples: delta must lie in (0, 1/3]");
  }
  if (count < 0) {
    throw contract_error("conditioned_samples: count must be >= 0");
  }
  std::mt19937_64 eng(seed);
  // Slack above the coordinate minima (0, delta/2, 0, delta/2) left by the
  // trace constraint; zero exactly at delta = 1/3 where the slice is a
  // single point.
  const double slack = std::max(0.0, (1.0 - 3.0 * delta) / 2);
  const double lam2_cap = std::min(delta / 2, slack);

  std::vector<DurParams> out;
  out.reserve(static_cast<std::size_t>(count));
  while (static_cast<int>(out.size()) < count) {
    const double lam2 = detail::canonical_open(eng) * lam2_cap * (1.0 - 1e-12);
    const double rest = slack - lam2;
    double u[3];
    double total = 0.0;
    for (double& x : u) {
      x = detail::exp_variate(eng);
      total += x;
    }
    const double lam0m = rest * u[0] / total;
    const double lam1 = delta / 2 + rest * u[1] / total;
    const double lam3 = delta / 2 + rest * u[2] / total;
    const double lam0p = delta + lam0m;
    if (lam0p < lam1 || lam0p < lam3) continue;
    out.push_back(DurParams::validated(lam0p, lam0m, lam1, lam2, lam3));
  }
  return out;
}

std::vector<CheckResult> verify_probabilistic_optimality(
    const std::vector<double>& grid, int per_delta, std::uint64_t seed) {
  CheckResult bound{"yield-bound"};
  CheckResult attained{"yield-attained"};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = grid[k];
    const auto slice = conditioned_samples(d, per_delta, detail::mix_seed(seed, k));
    for (std::size_t i = 0; i < slice.size(); ++i) {
      ++bound.checked;
      const double yield = avg_entanglement_closed(slice[i]);
      bound.residual(std::max(0.0, yield - d));
      if (!(yield <= d + kStructuralTol)) {
        bound.fail(static_cast<long long>(i), slice[i],
                   describe("yield exceeds slice gap", yield, d));
      }
    }
    const DurParams e = extremal_params(d);
    ++attained.checked;
    const double closed = avg_entanglement_closed(e);
    const double oracle = avg_entanglement_oracle(e);
    attained.residual(std::abs(oracle - d));
    if (closed != e.delta() || std::abs(e.delta() - d) > kStructuralTol) {
      attained.fail(static_cast<long long>(k), e,
                    describe("extremal yield does not equal its gap", closed, d));
    }
    if (std::abs(oracle - d) > kSpectralTol) {
      attained.fail(static_cast<long long>(k), e,
                    describe("oracle yield misses slice gap", oracle, d));
    }
  }
  return {bound, attained};
}

std::vector<CheckResult> verify_deterministic_optimality(
    const std::vector<double>& grid, int per_delta, std::uint64_t seed) {
  const double scale = std::sqrt(2.0) - 1.0;
  CheckResult bound{"final-bound"};
  CheckResult domain{"slice-domain-bound"};
  CheckResult attained{"final-attained"};
  CheckResult headline{"final-headline"};

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = grid[k];
    const auto slice = conditioned_samples(d, per_delta, detail::mix_seed(seed, k));
    for (std::size_t i = 0; i < slice.size(); ++i) {
      const DurParams& p = slice[i];
      ++bound.checked;
      ++domain.checked;
      const double value = deterministic_negativity_closed(p);
      bound.residual(std::max(0.0, value - scale * d));
      if (!(value <= scale * d + kStructuralTol)) {
        bound.fail(static_cast<long long>(i), p,
                   describe("final negativity exceeds envelope", value, scale * d));
      }
      const double pair_sum = p.lam1 + p.lam3;
      const double gap = p.delta();
      if (!(gap - kStructuralTol <= pair_sum &&
            pair_sum <= (1.0 - gap) / 2 + kStructuralTol)) {
        domain.fail(static_cast<long long>(i), p,
                    describe("lam1+lam3 outside [delta, (1-delta)/2]", pair_sum, gap));
      }
    }
    const DurParams e = extremal_params(d);
    ++attained.checked;
    const double closed = deterministic_negativity_closed(e);
    const double oracle = deterministic_negativity_oracle(e);
    attained.residual(std::abs(oracle - scale * d));
    if (std::abs(closed - scale * d) > kStructuralTol) {
      attained.fail(static_cast<long long>(k), e,
                    describe("extremal closed value misses envelope", closed,
                             scale * d));
    }
    if (std::abs(oracle - scale * d) > kSpectralTol) {
      attained.fail(static_cast<long long>(k), e,
                    describe("extremal oracle value misses envelope", oracle,
                             scale * d));
    }
  }

  const DurParams top = extremal_params(1.0 / 3.0);
  const double target = (std::sqrt(2.0) - 1.0) / 3;
  headline.checked = 1;
  const double closed_top = deterministic_negativity_closed(top);
  const double oracle_top = deterministic_negativity_oracle(top);
  headline.residual(std::abs(closed_top - target));
  headline.residual(std::abs(oracle_top - target));
  if (std::abs(closed_top - target) > kSpectralTol ||
      std::abs(oracle_top - target) > kSpectralTol) {
    headline.fail(0, top, describe("headline value at gap 1/3", closed_top, target));
  }
  return {bound, domain, attained, headline};
}

CheckResult verify_avg_closed_form(const std::vector<DurParams>& samples) {
  CheckResult check{"avg-closed-vs-oracle"};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const DurParams& p = samples[i];
    ++check.checked;
    const double closed = avg_entanglement_closed(p);
    const double oracle = avg_entanglement_oracle(p);
    // The identity holds unclamped inside the distributing family; outside,
    // the oracle value is zero and the clamped form applies.
    double resid = std::abs(std::max(closed, 0.0) - oracle);
    if (can_distribute(p) && !near_class_boundary(p)) {
      resid = std::max(resid, std::abs(closed - oracle));
    }
    check.residual(resid);
    if (resid > kSpectralTol) {
      check.fail(static_cast<long long>(i), p,
                 describe("probabilistic closed form vs oracle", closed, oracle));
    }
  }
  return check;
}

std::vector<CheckResult> verify_final_closed_form(
    const std::vector<DurParams>& samples) {
  CheckResult match{"final-closed-vs-oracle"};
  CheckResult sign{"final-sign-predicate"};
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const DurParams& p = samples[i];
    ++match.checked;
    const double closed = deterministic_negativity_closed(p);
    const double oracle = deterministic_negativity_oracle(p);
    const double resid = std::abs(closed - oracle);
    match.residual(resid);
    if (resid > kSpectralTol) {
      match.fail(static_cast<long long>(i), p,
                 describe("deterministic closed form vs oracle", closed, oracle));
    }

    const double gap = p.delta();
    const double unclamped =
        std::hypot(p.lam1 + p.lam3, gap) - (p.lam1 + 2 * p.lam2 + p.lam3);
    if (std::abs(unclamped) <= kBoundaryMargin) {
      ++sign.excluded_boundary;
      continue;
    }
    ++sign.checked;
    const bool predicate =
        4 * p.lam2 * (p.lam1 + p.lam2 + p.lam3) < gap * gap;
    const bool entangled = oracle > kBoundaryMargin / 2;
    if (predicate != entangled) {
      sign.fail(static_cast<long long>(i), p,
                describe("entanglement sign vs predicate", oracle, unclamped));
    }
  }
  return {match, sign};
}

std::vector<CheckResult> verify_envelope() {
  const double scale = std::sqrt(2.0) - 1.0;
  CheckResult maximum{"envelope-max"};
  CheckResult monotone{"envelope-monotone"};
  const double gaps[] = {0.01, 0.05, 1.0 / 6.0, 0.25, 1.0 / 3.0};
  for (double d : gaps) {
    ++maximum.checked;
    const double left = negativity_envelope(d, d);
    const double right = negativity_envelope((1.0 - d) / 2, d);
    maximum.residual(std::abs(left - scale * d));
    if (std::abs(left - scale * d) > kStructuralTol || left < right) {
      maximum.fail(0, extremal_params(d),
                   describe("envelope maximum at left endpoint", left, scale * d));
    }
    // At d = 1/3 the domain collapses to one point; strict decrease needs a
    // resolvable interval.
    if ((1.0 - d) / 2 - d < 1e-9) continue;
    const int steps = 1000;
    double prev = left;
    for (int i = 1; i <= steps; ++i) {
      const double x = d + (static_cast<double>(i) / steps) * ((1.0 - d) / 2 - d);
      const double value = negativity_envelope(x, d);
      ++monotone.checked;
      if (!(value < prev)) {
        monotone.fail(i, extremal_params(d),
                      describe("envelope not strictly decreasing", value, prev));
      }
      prev = value;
    }
  }
  return {maximum, monotone};
}

std::vector<CheckResult> verify_structural(std::uint64_t seed, int count) {
  CheckResult dual{"dual-construction"};
  CheckResult kraus{"kraus-completeness"};
  CheckResult threshold{"ppt-threshold"};
  CheckResult involution{"pt-involution"};
  CheckResult normalization{"measurement-normalization"};

  // The channel operators are 0/1-valued, so the completeness sum is exact.
  const KrausChannel channel = deterministic_channel();
  Matrix completeness = Matrix::Zero(4, 4);
  for (const Matrix& op : channel.operators) completeness += op.adjoint() * op;
  kraus.checked = 1;
  const double kraus_resid = max_abs_diff(completeness, Matrix::Identity(4, 4));
  kraus.residual(kraus_resid);
  if (kraus_resid != 0.0) {
    kraus.fail(0, rho_prime_params(), "completeness sum differs from identity");
  }

  const Matrix cnot_ac = cnot(0, 2, 3);
  const Matrix cnot_bc = cnot(1, 2, 3);
  const auto samples = sample_params(seed, count);
  const std::vector<std::vector<int>> subsets = {{0}, {1}, {2}, {0, 2}, {0, 1, 2}};

  for (std::size_t i = 0; i < samples.size(); ++i) {
    const DurParams& p = samples[i];
    const DensityMatrix rho = build_rho(p);

    ++dual.checked;
    const double sigma_resid = max_abs_diff(
        build_sigma(p).matrix(), Matrix(cnot_ac * rho.matrix() * cnot_ac.adjoint()));
    const double tau_resid = max_abs_diff(
        build_tau(p).matrix(), Matrix(cnot_bc * rho.matrix() * cnot_bc.adjoint()));
    dual.residual(std::max(sigma_resid, tau_resid));
    if (sigma_resid > kStructuralTol || tau_resid > kStructuralTol) {
      dual.fail(static_cast<long long>(i), p,
                describe("block builders vs conjugation", sigma_resid, tau_resid));
    }

    ++threshold.checked;
    const Matrix transposed = partial_transpose(rho.matrix(), std::vector<int>{2});
    const double min_eig = hermitian_eigenvalues(transposed).minCoeff();
    const double closed_min =
        std::min({p.lam3 - p.delta() / 2, p.lam1, p.lam2, p.delta_sum() / 2});
    threshold.residual(std::abs(min_eig - closed_min));
    if (std::abs(min_eig - closed_min) > kStructuralTol) {
      threshold.fail(static_cast<long long>(i), p,
                     describe("spectrum vs closed 2x2 block eigenvalues", min_eig,
                              closed_min));
    }
    if (std::abs(2 * p.lam3 - p.delta()) > kBoundaryMargin) {
      const bool psd = is_psd(transposed, kSpectralTol);
      const bool closed_psd = 2 * p.lam3 >= p.delta();
      if (psd != closed_psd) {
        threshold.fail(static_cast<long long>(i), p,
                       "PPT sign flip disagrees with 2*lam3 >= delta");
      }
    }

    ++involution.checked;
    const auto& subset = subsets[i % subsets.size()];
    const double inv_resid = max_abs_diff(
        partial_transpose(partial_transpose(rho.matrix(), subset), subset),
        rho.matrix());
    const double full_resid = max_abs_diff(
        partial_transpose(rho.matrix(), std::vector<int>{0, 1, 2}),
        rho.matrix().transpose());
    involution.residual(std::max(inv_resid, full_resid));
    if (inv_resid != 0.0 || full_resid != 0.0) {
      involution.fail(static_cast<long long>(i), p, "partial transpose not involutive");
    }

    ++normalization.checked;
    for (const DensityMatrix& state : {rho, build_sigma(p), build_tau(p)}) {
      const auto [b0, b1] = measure_qubit(state, 2);
      const double total = b0.probability + b1.probability;
      normalization.residual(std::abs(total - 1.0));
      if (std::abs(total - 1.0) > kStructuralTol) {
        normalization.fail(static_cast<long long>(i), p,
                           describe("branch probabilities", total, 1.0));
      }
    }
  }
  return {dual, kraus, threshold, involution, normalization};
}

namespace {

// Exact rational arithmetic for the gap-1/3 constraint chain; values stay
// tiny so long long never overflows.
struct Rat {
  long long num = 0;
  long long den = 1;
};

Rat rat(long long num, long long den) {
  if (den == 0) throw contract_error("rational with zero denominator");
  if (den < 0) {
    num = -num;
    den = -den;
  }
  const long long g = std::gcd(num < 0 ? -num : num, den);
  return {num / g, den / g};
}

Rat operator+(Rat a, Rat b) { return rat(a.num * b.den + b.num * a.den, a.den * b.den); }
Rat operator-(Rat a, Rat b) { return rat(a.num * b.den - b.num * a.den, a.den * b.den); }
Rat operator*(Rat a, Rat b) { return rat(a.num * b.num, a.den * b.den); }
bool operator==(Rat a, Rat b) { return a.num * b.den == b.num * a.den; }
bool operator<(Rat a, Rat b) { return a.num * b.den < b.num * a.den; }
bool operator<=(Rat a, Rat b) { return a.num * b.den <= b.num * a.den; }
double to_double(Rat a) { return static_cast<double>(a.num) / static_cast<double>(a.den); }

// Worst max-norm distance of a feasible slice point from the unique point,
// scanned on a grid at gap = 1/3 - margin.
double feasible_spread(double margin, double step, long long& feasible_count) {
  const double gap = 1.0 / 3.0 - margin;
  const double target = (1.0 - gap) / 2;  // lam0m + lam1 + lam2 + lam3
  const double s = std::min(step, margin / 4);
  const double hi = 2 * margin;
  double worst = 0.0;
  feasible_count = 0;
  for (double lam0m = 0.0; lam0m <= hi; lam0m += s) {
    for (double lam1 = gap / 2; lam1 <= gap / 2 + hi; lam1 += s) {
      for (double lam2 = 0.0; lam2 <= std::min(gap / 2, hi); lam2 += s) {
        const double lam3 = target - lam0m - lam1 - lam2;
        if (2 * lam3 < gap) continue;
        if (2 * lam2 >= gap) continue;
        const double lam0p = gap + lam0m;
        if (lam0p < lam1 || lam0p < lam3) continue;
        ++feasible_count;
        const double dist = std::max(
            {std::abs(lam0p - 1.0 / 3.0), lam0m, std::abs(lam1 - 1.0 / 6.0),
             lam2, std::abs(lam3 - 1.0 / 6.0)});
        worst = std::max(worst, dist);
      }
    }
  }
  return worst;
}

}  // namespace

UniquePoint unique_max_gap_point() {
  const Rat gap = rat(1, 3);
  const Rat one = rat(1, 1);
  const Rat half = rat(1, 2);
  // Coordinate minima forced by membership at this gap.
  const Rat min_lam0m = rat(0, 1);
  const Rat min_lam1 = gap * half;
  const Rat min_lam2 = rat(0, 1);
  const Rat min_lam3 = gap * half;
  // Trace constraint with lam0p = gap + lam0m eliminated:
  // lam0m + lam1 + lam2 + lam3 = (1 - gap)/2.
  const Rat target = (one - gap) * half;
  const Rat mins_total = min_lam0m + min_lam1 + min_lam2 + min_lam3;
  const Rat lam0p = gap + min_lam0m;

  UniquePoint out;
  // Zero slack pins every coordinate at its minimum; the remaining
  // membership constraints must hold at that point.
  const bool pinned = mins_total == target;
  const bool strict_ok = min_lam2 + min_lam2 < gap;
  const bool maximal =
      min_lam0m <= lam0p && min_lam1 <= lam0p && min_lam2 <= lam0p && min_lam3 <= lam0p;
  out.unique = pinned && strict_ok && maximal;
  out.params = DurParams::validated(to_double(lam0p), to_double(min_lam0m),
                                    to_double(min_lam1), to_double(min_lam2),
                                    to_double(min_lam3));
  return out;
}

std::vector<CheckResult> verify_uniqueness(const std::vector<double>& margins,
                                           double step) {
  CheckResult exact{"unique-point-exact"};
  CheckResult shrink{"feasible-set-shrinkage"};

  exact.checked = 1;
  const UniquePoint unique = unique_max_gap_point();
  const DurParams expected = rho_prime_params();
  const double point_dist = std::max(
      {std::abs(unique.params.lam0p - expected.lam0p),
       std::abs(unique.params.lam0m - expected.lam0m),
       std::abs(unique.params.lam1 - expected.lam1),
       std::abs(unique.params.lam2 - expected.lam2),
       std::abs(unique.params.lam3 - expected.lam3)});
  exact.residual(point_dist);
  const double sigma_dist =
      max_abs_diff(build_sigma(unique.params).matrix(), build_sigma(expected).matrix());
  exact.residual(sigma_dist);
  if (!unique.unique || point_dist > 1e-15 || sigma_dist > 1e-15) {
    exact.fail(0, unique.params, "constraint chain did not pin the original point");
  }

  double prev = std::numeric_limits<double>::infinity();
  for (double margin : margins) {
    ++shrink.checked;
    long long feasible = 0;
    const double spread = feasible_spread(margin, step, feasible);
    char label[48];
    std::snprintf(label, sizeof(label), "spread-at-margin-%.0e", margin);
    shrink.metrics.emplace_back(label, spread);
    if (feasible < 1) {
      shrink.fail(shrink.checked, extremal_params(1.0 / 3.0 - margin),
                  "no feasible grid points found");
    }
    if (spread > 5 * margin || spread > prev + 1e-15) {
      shrink.fail(shrink.checked, extremal_params(1.0 / 3.0 - margin),
                  describe("spread fails 5*margin bound or grows", spread, 5 * margin));
    }
    prev = spread;
  }
  return {exact, shrink};
}

std::vector<double> delta_grid(double delta_min, double delta_max, int steps) {
  if (!(delta_min > 0.0 && delta_min <= delta_max &&
        delta_max <= 1.0 / 3.0)) {
    throw std::domain_error("delta grid must satisfy 0 < min <= max <= 1/3");
  }
  if (steps < 1) throw std::domain_error("delta grid needs at least one step");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(steps));
  if (steps == 1) {
    grid.push_back(delta_min);
    return grid;
  }
  for (int i = 0; i < steps; ++i) {
    grid.push_back(delta_min +
                   (delta_max - delta_min) * static_cast<double>(i) / (steps - 1));
  }
  grid.back() = delta_max;
  return grid;
}

std::vector<double> tightness_grid(int n) {
  if (n < 1) throw std::domain_error("tightness grid needs at least one point");
  std::vector<double> grid;
  grid.reserve(static_cast<std::size_t>(n));
  for (int i = 1; i <= n; ++i) {
    grid.push_back((1.0 / 3.0) * (static_cast<double>(i) / n));
  }
  return grid;
}

std::vector<SweepRow> run_sweep(double delta_min, double delta_max, int steps,
                                int samples_per_delta, std::uint64_t seed) {
  if (samples_per_delta < 0) {
    throw std::domain_error("samples per delta must be >= 0");
  }
  const std::vector<double> grid = delta_grid(delta_min, delta_max, steps);
  std::vector<SweepRow> rows;
  rows.reserve(grid.size() * (static_cast<std::size_t>(samples_per_delta) + 1));

  auto make_row = [](const DurParams& p, double slice, bool extremal) {
    SweepRow row;
    row.params = p;
    row.delta = slice;
    row.extremal = extremal;
    const ProcedureTrace trace = run_probabilistic(p);
    row.p_e = trace.p_e;
    row.neg_closed = avg_entanglement_closed(p);
    row.neg_oracle = trace.kept.degenerate
                         ? 0.0
                         : trace.p_e * negativity(trace.kept.post_state->matrix());
    row.det_neg_closed = deterministic_negativity_closed(p);
    row.det_neg_oracle = deterministic_negativity_oracle(p);
    row.residual_prob = std::abs(row.neg_closed - row.neg_oracle);
    row.residual_det = std::abs(row.det_neg_closed - row.det_neg_oracle);
    return row;
  };

  for (std::size_t k = 0; k < grid.size(); ++k) {
    const double d = grid[k];
    rows.push_back(make_row(extremal_params(d), d, true));
    for (const DurParams& p :
         conditioned_samples(d, samples_per_delta, detail::mix_seed(seed, k))) {
      rows.push_back(make_row(p, d, false));
    }
  }
  return rows;
}

}  // namespace entdist
