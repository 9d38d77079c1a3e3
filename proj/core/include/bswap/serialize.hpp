#pragma once

#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "bswap/dynamics.hpp"
#include "bswap/tomography.hpp"

namespace bswap {

/// 12 significant digits, the fixed output precision of every data file.
std::string format_number(double x);

/// Rows of named numeric columns, written as CSV or as a JSON object of arrays.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

Table trace_table(const Trace& trace);
Table ptm_table(const PauliTransferMatrix& r);

nlohmann::json ptm_to_json(const PauliTransferMatrix& r);
nlohmann::json records_to_json(const std::vector<MeasurementRecord>& records);
/// Numbers rounded to 12 significant digits so dumps are reproducible.
std::string dump_json(const nlohmann::json& j);

/// Writes via a temporary file and rename.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace bswap
