#include "entdist/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

namespace entdist {

std::string format_sig15(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.15g", x);
  return buf;
}

double round_sig15(double x) {
  return std::strtod(format_sig15(x).c_str(), nullptr);
}

Json params_to_json(const DurParams& p) {
  // Full-precision fields: the record must reconstruct the exact point, and
  // the validator re-derives lam0m from the others on load.
  return Json{{"lam0p", p.lam0p},
              {"lam0m", p.lam0m},
              {"lam1", p.lam1},
              {"lam2", p.lam2},
              {"lam3", p.lam3}};
}

DurParams params_from_json(const Json& j, double trace_tol) {
  for (const char* key : {"lam0p", "lam0m", "lam1", "lam2", "lam3"}) {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw validation_error(std::string("params record is missing numeric field ") +
                             key);
    }
  }
  return DurParams::validated(j.at("lam0p").get<double>(),
                              j.at("lam0m").get<double>(),
                              j.at("lam1").get<double>(),
                              j.at("lam2").get<double>(),
                              j.at("lam3").get<double>(), trace_tol);
}

DurParams load_params_file(const std::string& path, double trace_tol) {
  std::ifstream in(path);
  if (!in) {
    throw validation_error("cannot open params file: " + path);
  }
  Json j;
  try {
    in >> j;
  } catch (const nlohmann::json::parse_error& e) {
    throw validation_error("params file is not valid JSON: " + std::string(e.what()));
  }
  return params_from_json(j, trace_tol);
}

Json condition_report_to_json(const ConditionReport& rep) {
  Json violated = Json::array();
  for (const InequalityRecord& v : rep.violated_inequalities) {
    violated.push_back(Json{{"name", v.name},
                            {"lhs", round_sig15(v.lhs)},
                            {"rhs", round_sig15(v.rhs)}});
  }
  return Json{{"cond_a", Json{{"closed", rep.cond_a}, {"oracle", rep.oracle_a}}},
              {"cond_b", Json{{"closed", rep.cond_b}, {"oracle", rep.oracle_b}}},
              {"cond_c", Json{{"closed", rep.cond_c}, {"oracle", rep.oracle_c}}},
              {"cond_d", Json{{"closed", rep.cond_d}, {"oracle", rep.oracle_d}}},
              {"can_distribute", rep.can_distribute},
              {"near_boundary", rep.near_boundary},
              {"violated_inequalities", violated}};
}

Json check_to_json(const CheckResult& check) {
  Json counterexamples = Json::array();
  for (const Counterexample& ce : check.counterexamples) {
    counterexamples.push_back(Json{{"index", ce.index},
                                   {"params", params_to_json(ce.params)},
                                   {"detail", ce.detail}});
  }
  Json j{{"name", check.name},
         {"passed", check.passed},
         {"checked", check.checked},
         {"excluded_boundary", check.excluded_boundary},
         {"failures", check.failures},
         {"worst_residual", round_sig15(check.worst_residual)},
         {"counterexamples", counterexamples}};
  if (!check.metrics.empty()) {
    Json metrics = Json::object();
    for (const auto& [key, value] : check.metrics) {
      metrics[key] = round_sig15(value);
    }
    j["metrics"] = metrics;
  }
  return j;
}

Json report_to_json(const std::string& suite, std::uint64_t seed,
                    long long count, const std::vector<CheckResult>& checks) {
  bool all_passed = true;
  Json list = Json::array();
  for (const CheckResult& c : checks) {
    all_passed = all_passed && c.passed;
    list.push_back(check_to_json(c));
  }
  return Json{{"suite", suite},
              {"seed", seed},
              {"count", count},
              {"assumptions", Json::array({"ppt-implies-separability-within-family"})},
              {"checks", list},
              {"all_passed", all_passed}};
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::ostringstream out;
  out << "delta,p_e,neg_closed,neg_oracle,det_neg_closed,det_neg_oracle,"
         "residual_prob,residual_det\n";
  for (const SweepRow& row : rows) {
    out << format_sig15(row.delta) << ',' << format_sig15(row.p_e) << ','
        << format_sig15(row.neg_closed) << ',' << format_sig15(row.neg_oracle)
        << ',' << format_sig15(row.det_neg_closed) << ','
        << format_sig15(row.det_neg_oracle) << ','
        << format_sig15(row.residual_prob) << ','
        << format_sig15(row.residual_det) << '\n';
  }
  return out.str();
}

Json sweep_json(const std::vector<SweepRow>& rows, std::uint64_t seed) {
  Json list = Json::array();
  for (const SweepRow& row : rows) {
    list.push_back(Json{{"delta", round_sig15(row.delta)},
                        {"params", params_to_json(row.params)},
                        {"extremal", row.extremal},
                        {"p_e", round_sig15(row.p_e)},
                        {"neg_closed", round_sig15(row.neg_closed)},
                        {"neg_oracle", round_sig15(row.neg_oracle)},
                        {"det_neg_closed", round_sig15(row.det_neg_closed)},
                        {"det_neg_oracle", round_sig15(row.det_neg_oracle)},
                        {"residual_prob", round_sig15(row.residual_prob)},
                        {"residual_det", round_sig15(row.residual_det)}});
  }
  return Json{{"seed", seed}, {"rows", list}};
}

void write_text(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw validation_error("cannot open output file: " + path);
  }
  out << content;
}

}  // namespace entdist
