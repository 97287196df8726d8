#pragma once

#include "entdist/analysis.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace entdist {

/// Insertion-ordered JSON keeps report output byte-deterministic.
using Json = nlohmann::ordered_json;

/// Formats with 15 significant digits, the precision contract of every
/// number in reports and CSV output.
std::string format_sig15(double x);

/// Rounds through the 15-significant-digit text form so JSON documents
/// carry the same precision as formatted output.
double round_sig15(double x);

Json params_to_json(const DurParams& p);
DurParams params_from_json(const Json& j, double trace_tol = kStructuralTol);
DurParams load_params_file(const std::string& path,
                           double trace_tol = kStructuralTol);

Json condition_report_to_json(const ConditionReport& rep);
Json check_to_json(const CheckResult& check);
Json report_to_json(const std::string& suite, std::uint64_t seed,
                    long long count, const std::vector<CheckResult>& checks);

/// CSV with the fixed header delta,p_e,neg_closed,neg_oracle,
/// det_neg_closed,det_neg_oracle,residual_prob,residual_det.
std::string sweep_csv(const std::vector<SweepRow>& rows);
Json sweep_json(const std::vector<SweepRow>& rows, std::uint64_t seed);

/// Writes to the path, or to stdout when the path is empty.
void write_text(const std::string& path, const std::string& content);

}  // namespace entdist
