#include "greenbound/io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace greenbound::io {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(s);
  while (std::getline(in, field, sep)) out.push_back(trim(field));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& text, const std::string& context) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (!text.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) throw ConfigError(context + ": cannot parse number '" + text + "'");
  return value;
}

nlohmann::json number(double v) {
  if (!std::isfinite(v)) return nullptr;
  return v;
}

}  // namespace

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value, std::chars_format::general, 17);
  return std::string(buf, ptr);
}

void write_sweep_csv(std::ostream& out, const SweepResult& result) {
  out << "epsilon,lambda,iterations,residual\n";
  for (const auto& row : result.rows) {
    out << format_number(row.sample.epsilon) << ',' << format_number(row.sample.lambda) << ',' << row.iterations
        << ',' << format_number(row.sample.residual) << '\n';
  }
}

std::vector<SweepRow> read_sweep_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("sweep CSV is empty");
  const auto header = split(trim(line), ',');
  if (header != std::vector<std::string>{"epsilon", "lambda", "iterations", "residual"}) {
    throw ConfigError("sweep CSV header must be 'epsilon,lambda,iterations,residual'");
  }
  std::vector<SweepRow> rows;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    const std::string where = "sweep CSV line " + std::to_string(line_no);
    if (fields.size() != 4) throw ConfigError(where + ": expected 4 fields");
    SweepRow row;
    row.sample.epsilon = parse_double(fields[0], where);
    row.sample.lambda = parse_double(fields[1], where);
    row.iterations = static_cast<int>(parse_double(fields[2], where));
    row.sample.residual = parse_double(fields[3], where);
    rows.push_back(row);
  }
  return rows;
}

std::vector<SweepRow> read_sweep_csv_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open sweep CSV '" + path + "'");
  return read_sweep_csv(in);
}

nlohmann::json model_to_json(const LambdaEpsilonModel& model) {
  nlohmann::json j;
  j["a1"] = model.a1;
  j["a2"] = model.a2;
  j["a3"] = model.a3;
  j["x_ref"] = model.x_ref;
  j["symmetric_reduced"] = model.symmetric_reduced;
  j["eps_min"] = model.eps_min;
  j["eps_max"] = model.eps_max;
  return j;
}

LambdaEpsilonModel model_from_json(const nlohmann::json& j) {
  try {
    LambdaEpsilonModel m;
    m.a1 = j.at("a1").get<double>();
    m.a2 = j.at("a2").get<double>();
    m.a3 = j.at("a3").get<double>();
    m.x_ref = j.at("x_ref").get<double>();
    m.symmetric_reduced = j.at("symmetric_reduced").get<bool>();
    m.eps_min = j.at("eps_min").get<double>();
    m.eps_max = j.at("eps_max").get<double>();
    if (m.symmetric_reduced && m.a2 != 0.0) throw ConfigError("symmetric_reduced model must have a2 = 0");
    return m;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("malformed model JSON: ") + e.what());
  }
}

nlohmann::json report_to_json(const SolveReport& report) {
  nlohmann::json j;
  j["target_lambda"] = number(report.target_lambda);
  j["final_epsilon"] = number(report.final_epsilon);
  j["final_lambda_achieved"] = number(report.final_lambda_achieved);
  j["full_solves_used"] = report.full_solves_used;
  j["total_inner_iterations"] = report.total_inner_iterations;
  j["strategy"] = std::string(to_string(report.strategy));
  j["converged"] = report.converged;
  auto samples = nlohmann::json::array();
  for (const auto& s : report.samples) {
    samples.push_back({{"epsilon", number(s.epsilon)}, {"lambda", number(s.lambda)}, {"residual", number(s.residual)}});
  }
  j["samples"] = std::move(samples);
  j["model"] = report.model ? model_to_json(*report.model) : nlohmann::json(nullptr);
  return j;
}

nlohmann::json oracle_to_json(const OracleResult& result, const std::string& potential, double lambda) {
  nlohmann::json j;
  j["potential"] = potential;
  j["lambda"] = lambda;
  j["epsilon"] = result.epsilon;
  j["L"] = result.half_width;
  j["N"] = result.point_count;
  return j;
}

void write_benchmark_csv(std::ostream& out, const std::vector<BenchmarkCell>& table) {
  out << "target_lambda,strategy,final_epsilon,final_lambda,full_solves,total_inner_iterations,converged\n";
  for (const auto& cell : table) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    out << format_number(cell.target_lambda) << ',' << to_string(cell.strategy) << ','
        << format_number(cell.report ? cell.report->final_epsilon : nan) << ','
        << format_number(cell.report ? cell.report->final_lambda_achieved : nan) << ','
        << (cell.report ? cell.report->full_solves_used : 0) << ','
        << (cell.report ? cell.report->total_inner_iterations : 0) << ',' << (cell.converged() ? "true" : "false")
        << '\n';
  }
}

nlohmann::json benchmark_to_json(const std::vector<BenchmarkCell>& table) {
  auto arr = nlohmann::json::array();
  for (const auto& cell : table) {
    nlohmann::json j;
    j["target_lambda"] = number(cell.target_lambda);
    j["strategy"] = std::string(to_string(cell.strategy));
    j["final_epsilon"] = cell.report ? number(cell.report->final_epsilon) : nlohmann::json(nullptr);
    j["final_lambda"] = cell.report ? number(cell.report->final_lambda_achieved) : nlohmann::json(nullptr);
    j["full_solves"] = cell.report ? cell.report->full_solves_used : 0;
    j["total_inner_iterations"] = cell.report ? cell.report->total_inner_iterations : 0;
    j["converged"] = cell.converged();
    if (!cell.error.empty()) j["error"] = cell.error;
    arr.push_back(std::move(j));
  }
  return arr;
}

std::vector<double> parse_range(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (parts.size() != 3) throw ConfigError("range '" + spec + "' must be start:stop:count");
  const double start = parse_double(parts[0], "range start");
  const double stop = parse_double(parts[1], "range stop");
  const double count_d = parse_double(parts[2], "range count");
  if (count_d < 1 || std::floor(count_d) != count_d) throw ConfigError("range count must be a positive integer");
  const auto count = static_cast<std::size_t>(count_d);
  if (count == 1) {
    if (start != stop) throw ConfigError("range with count 1 needs start == stop");
    return {start};
  }
  if (!(stop > start)) throw ConfigError("range needs stop > start");
  std::vector<double> out(count);
  for (std::size_t i = 0; i < count; ++i) {
    out[i] = start + (stop - start) * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  out.back() = stop;
  return out;
}

std::vector<double> parse_list(const std::string& spec) {
  std::vector<double> out;
  if (trim(spec).empty()) return out;
  for (const auto& field : split(spec, ',')) out.push_back(parse_double(field, "list"));
  return out;
}

std::vector<std::pair<std::string, std::string>> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::vector<std::pair<std::string, std::string>> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ConfigError("config file '" + path + "' line " + std::to_string(line_no) + ": expected key=value");
    }
    out.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return out;
}

}  // namespace greenbound::io
