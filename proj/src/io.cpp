#include "gridopt/io.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <json.hpp>
#include <ostream>
#include <sstream>

namespace gridopt {

using nlohmann::json;

void write_design_csv(std::ostream& os, const Design& design) {
  const std::size_t k = design.point(0).size();
  os << "i";
  for (std::size_t j = 1; j <= k; ++j) os << ",x" << j;
  os << ",weight\n";
  os << std::setprecision(17);
  for (int i = 0; i < design.support_size(); ++i) {
    os << (i + 1);
    for (double c : design.point(i)) os << ',' << c;
    os << ',' << design.weight(i) << '\n';
  }
}

Design read_design_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("design CSV: empty input");
  // Header: i,x1,...,xk,weight
  std::size_t columns = 1 + std::count(line.begin(), line.end(), ',');
  if (columns < 3 || line.rfind("i,", 0) != 0)
    throw std::runtime_error("design CSV: malformed header (expected i,x1,...,weight)");
  const std::size_t k = columns - 2;

  std::vector<DesignPoint> points;
  std::vector<double> weights;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> row;
    while (std::getline(ss, cell, ',')) {
      try {
        row.push_back(std::stod(cell));
      } catch (const std::exception&) {
        throw std::runtime_error("design CSV: non-numeric cell '" + cell + "'");
      }
    }
    if (row.size() != columns)
      throw std::runtime_error("design CSV: row with wrong number of columns");
    points.emplace_back(row.begin() + 1, row.begin() + 1 + k);
    weights.push_back(row.back());
  }
  return Design(std::move(points), std::move(weights));
}

void write_design_table(std::ostream& os, const Design& design) {
  const std::size_t k = design.point(0).size();
  os << std::setw(4) << "i";
  for (std::size_t j = 1; j <= k; ++j) os << std::setw(10) << ("x" + std::to_string(j));
  os << std::setw(12) << "weight" << '\n';
  for (int i = 0; i < design.support_size(); ++i) {
    os << std::setw(4) << (i + 1);
    for (double c : design.point(i)) os << std::setw(10) << std::setprecision(4) << c;
    os << std::setw(12) << std::fixed << std::setprecision(6) << design.weight(i) << '\n';
    os.unsetf(std::ios::fixed);
  }
}

namespace {

json design_to_json(const Design& design, double criterion, int m) {
  json pts = json::array();
  for (const auto& p : design.points()) pts.push_back(p);
  return json{{"points", pts}, {"weights", design.weights()}, {"criterion", criterion}, {"m", m}};
}

}  // namespace

std::string design_json(const Design& design, double criterion, int m) {
  return design_to_json(design, criterion, m).dump(2);
}

std::string report_json(const RunReport& report, const Design& design, int m) {
  json rounds = json::array();
  for (const auto& r : report.rounds) {
    rounds.push_back({{"phi", r.phi},
                      {"support_size", r.support_size},
                      {"exploration_size", r.exploration_size},
                      {"elapsed_ms", r.elapsed_ms}});
  }
  json final = {{"phi", report.phi},
                {"certificate_bound", report.certificate_bound},
                {"certified", report.certified},
                {"design", design_to_json(design, report.phi, m)}};
  return json{{"rounds", rounds}, {"final", final}, {"round_cap_hit", report.round_cap_hit}}
      .dump(2);
}

}  // namespace gridopt
