#include "bswap/serialize.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bswap/errors.hpp"
#include "bswap/pauli.hpp"

namespace bswap {

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string Table::to_csv() const {
  std::ostringstream os;
  for (std::size_t c = 0; c < header.size(); ++c) os << (c ? "," : "") << header[c];
  os << '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) os << (c ? "," : "") << format_number(row[c]);
    os << '\n';
  }
  return os.str();
}

nlohmann::json Table::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (std::size_t c = 0; c < header.size(); ++c) {
    nlohmann::json col = nlohmann::json::array();
    for (const auto& row : rows) col.push_back(row[c]);
    j[header[c]] = col;
  }
  return j;
}

Table trace_table(const Trace& trace) {
  Table t;
  t.header.push_back("time_ns");
  for (const auto& [name, _] : trace.columns) t.header.push_back(name);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    std::vector<double> row{trace.time[i] * 1e9};
    for (const auto& [name, col] : trace.columns) row.push_back(col[i]);
    t.rows.push_back(row);
  }
  return t;
}

Table ptm_table(const PauliTransferMatrix& r) {
  Table t;
  t.header.push_back("row");
  for (int j = 0; j < 16; ++j) t.header.push_back(pauli_label(j));
  for (int i = 0; i < 16; ++i) {
    std::vector<double> row{static_cast<double>(i)};
    for (int j = 0; j < 16; ++j) row.push_back(r(i, j));
    t.rows.push_back(row);
  }
  return t;
}

nlohmann::json ptm_to_json(const PauliTransferMatrix& r) {
  nlohmann::json j;
  nlohmann::json basis = nlohmann::json::array();
  for (int k = 0; k < 16; ++k) basis.push_back(pauli_label(k));
  j["basis"] = basis;
  nlohmann::json data = nlohmann::json::array();
  for (int i = 0; i < 16; ++i)
    for (int k = 0; k < 16; ++k) data.push_back(r(i, k));
  j["row_major"] = data;
  return j;
}

nlohmann::json records_to_json(const std::vector<MeasurementRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records)
    arr.push_back({{"setting", rotation_label(r.setting)}, {"mean", r.mean}, {"shots", r.shots}});
  return arr;
}

namespace {

nlohmann::json rounded(const nlohmann::json& j) {
  if (j.is_number_float()) return std::stod(format_number(j.get<double>()));
  if (j.is_array()) {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& e : j) out.push_back(rounded(e));
    return out;
  }
  if (j.is_object()) {
    nlohmann::json out = nlohmann::json::object();
    for (auto it = j.begin(); it != j.end(); ++it) out[it.key()] = rounded(it.value());
    return out;
  }
  return j;
}

}  // namespace

std::string dump_json(const nlohmann::json& j) { return rounded(j).dump(2) + "\n"; }

void write_file_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.string() + ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot write '" + tmp.string() + "'");
    f << content;
    if (!f) throw Error("write failed for '" + tmp.string() + "'");
  }
  fs::rename(tmp, target);
}

}  // namespace bswap
