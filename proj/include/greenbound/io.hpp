#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "greenbound/driver.hpp"
#include "greenbound/lambda_model.hpp"
#include "greenbound/oracle.hpp"

namespace greenbound::io {

/// Locale-independent, 17 significant digits.
std::string format_number(double value);

/// Header `epsilon,lambda,iterations,residual`.
void write_sweep_csv(std::ostream& out, const SweepResult& result);
/// Parses a sweep CSV. Throws ConfigError on malformed input.
std::vector<SweepRow> read_sweep_csv(std::istream& in);
std::vector<SweepRow> read_sweep_csv_file(const std::string& path);

/// Flat object {a1, a2, a3, x_ref, symmetric_reduced, eps_min, eps_max}.
nlohmann::json model_to_json(const LambdaEpsilonModel& model);
LambdaEpsilonModel model_from_json(const nlohmann::json& j);

nlohmann::json report_to_json(const SolveReport& report);
nlohmann::json oracle_to_json(const OracleResult& result, const std::string& potential, double lambda);

/// Header `target_lambda,strategy,final_epsilon,final_lambda,full_solves,total_inner_iterations,converged`.
void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkCell>& table);
nlohmann::json benchmark_to_json(const std::vector<BenchmarkCell>& table);

/// "start:stop:count" → count evenly spaced values (count = 1 requires start == stop).
std::vector<double> parse_range(const std::string& spec);
/// "a,b,c" → values; the empty string gives an empty list.
std::vector<double> parse_list(const std::string& spec);

/// Flat key=value lines; '#' comments and blank lines ignored.
std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path);

}  // namespace greenbound::io
