#include <fstream>
#include <sstream>

#include "greenbound/potential.hpp"

namespace greenbound {

Potential load_tabulated_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open potential table '" + path + "'");
  std::vector<std::pair<double, double>> rows;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    fields.imbue(std::locale::classic());
    double x = 0.0;
    double v = 0.0;
    if (!(fields >> x)) {
      if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
      throw ConfigError("potential table '" + path + "' line " + std::to_string(line_no) + ": expected 'x V'");
    }
    std::string rest;
    if (!(fields >> v) || (fields >> rest)) {
      throw ConfigError("potential table '" + path + "' line " + std::to_string(line_no) + ": expected 'x V'");
    }
    rows.emplace_back(x, v);
  }
  try {
    return tabulated<double>(std::move(rows), path);
  } catch (const ConfigError& e) {
    throw ConfigError("potential table '" + path + "': " + e.what());
  }
}

}  // namespace greenbound
