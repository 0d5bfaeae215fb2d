#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "json.hpp"
#include "phasebell/cli/run.hpp"

namespace phasebell::cli {
namespace {

// 12 significant digits, as fixed by the output schema.
std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double parse_double(const std::string& field) {
  if (field == "nan") return std::numeric_limits<double>::quiet_NaN();
  std::size_t used = 0;
  const double v = std::stod(field, &used);
  if (used != field.size()) throw IoError("malformed number '" + field + "'");
  return v;
}

}  // namespace

void emit_csv(std::ostream& out, std::span<const Row> rows) {
  out << kCsvHeader << '\n';
  for (const auto& r : rows) {
    out << r.state << ',' << fmt(r.param) << ',' << fmt(r.s) << ',' << fmt(r.eta) << ','
        << fmt(r.gamma_tau) << ',' << fmt(r.nbar) << ',' << r.sign << ',' << fmt(r.mk) << ','
        << fmt(r.svet);
    for (double v : r.settings.to_reals()) out << ',' << fmt(v);
    out << '\n';
  }
  if (!out) throw IoError("write failed");
}

void emit_json(std::ostream& out, std::span<const Row> rows) {
  nlohmann::ordered_json doc;
  doc["columns"] = kCsvHeader;
  auto& arr = doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["state"] = r.state;
    j["param"] = r.param;
    j["s"] = r.s;
    j["eta"] = r.eta;
    j["gamma_tau"] = r.gamma_tau;
    j["nbar"] = r.nbar;
    j["sign"] = r.sign;
    j["mk"] = r.mk;
    j["svet"] = r.svet;
    j["settings"] = r.settings.to_reals();
    arr.push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
  if (!out) throw IoError("write failed");
}

std::vector<Row> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kCsvHeader) throw IoError("missing or unexpected CSV header");
  std::vector<Row> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    if (f.size() != 21) throw IoError("expected 21 fields, got " + std::to_string(f.size()));
    Row r;
    r.state = f[0];
    r.param = parse_double(f[1]);
    r.s = parse_double(f[2]);
    r.eta = parse_double(f[3]);
    r.gamma_tau = parse_double(f[4]);
    r.nbar = parse_double(f[5]);
    r.sign = std::stoi(f[6]);
    r.mk = parse_double(f[7]);
    r.svet = parse_double(f[8]);
    std::array<double, 12> x{};
    for (std::size_t k = 0; k < 12; ++k) x[k] = parse_double(f[9 + k]);
    r.settings = bell::MeasurementSettings::from_reals(x);
    rows.push_back(r);
  }
  return rows;
}

}  // namespace phasebell::cli
