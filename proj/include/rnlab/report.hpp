#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "rnlab/characters.hpp"
#include "rnlab/moments.hpp"
#include "rnlab/nonvanish.hpp"

namespace rnlab {

inline constexpr const char* kVersion = "0.1.0";

std::uint64_t fnv1a(const std::string& bytes);
std::string hex64(std::uint64_t v);

/// %.17g, so doubles survive a text round trip.
std::string format_real(double x);

/// A column-ordered table written as CSV (with `#` header lines) or as a JSON document.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

struct OutputHeader {
  std::string config_json;     ///< effective config with defaults resolved
  std::uint64_t smoothing_hash = 0;
};

void write_csv(std::ostream& out, const OutputHeader& header, const Table& table);
void write_json(std::ostream& out, const OutputHeader& header, const Table& table);

Table central_table(const std::vector<CentralRecord>& records);
Table angle_table(const std::vector<CentralRecord>& records);
Table moment_table(const std::vector<MomentReport>& reports);
Table nonvanish_table(const std::vector<NonvanishReport>& reports);

}  // namespace rnlab
