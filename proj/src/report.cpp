#include "rnlab/report.hpp"

#include <cstdio>
#include <ostream>

#include "json.hpp"
#include "rnlab/errors.hpp"

namespace rnlab {

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw PreconditionError("Table: row width does not match the columns");
  rows.push_back(std::move(row));
}

namespace {

void header_lines(std::ostream& out, const OutputHeader& header) {
  out << "# rnlab " << kVersion << '\n';
  out << "# config_hash " << hex64(fnv1a(header.config_json)) << '\n';
  out << "# smoothing_hash " << hex64(header.smoothing_hash) << '\n';
  out << "# config " << header.config_json << '\n';
}

std::string real_or_int(i64 v) { return std::to_string(v); }

std::string quoted(const std::string& s) {
  if (s.find_first_of(",\"") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

void write_csv(std::ostream& out, const OutputHeader& header, const Table& table) {
  header_lines(out, header);
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& row : table.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << quoted(row[i]);
    out << '\n';
  }
}

void write_json(std::ostream& out, const OutputHeader& header, const Table& table) {
  nlohmann::ordered_json doc;
  doc["version"] = kVersion;
  doc["config_hash"] = hex64(fnv1a(header.config_json));
  doc["smoothing_hash"] = hex64(header.smoothing_hash);
  doc["config"] = nlohmann::ordered_json::parse(header.config_json);
  doc["columns"] = table.columns;
  doc["rows"] = table.rows;
  out << doc.dump(1) << '\n';
}

Table central_table(const std::vector<CentralRecord>& records) {
  Table t;
  t.columns = {"a", "eps_re", "eps_im", "theta", "L_re", "L_im"};
  for (const auto& r : records) {
    t.add_row({real_or_int(r.a), format_real(r.eps.real()), format_real(r.eps.imag()), format_real(r.theta),
               format_real(r.lval.real()), format_real(r.lval.imag())});
  }
  return t;
}

Table angle_table(const std::vector<CentralRecord>& records) {
  Table t;
  t.columns = {"a", "theta", "eps_re", "eps_im"};
  for (const auto& r : records) {
    t.add_row({real_or_int(r.a), format_real(r.theta), format_real(r.eps.real()), format_real(r.eps.imag())});
  }
  return t;
}

Table moment_table(const std::vector<MomentReport>& reports) {
  Table t;
  t.columns = {"q", "kind", "m1", "m2", "k", "alpha", "theta_exp", "bump", "computed_re", "computed_im",
               "predicted_re", "predicted_im", "residual_re", "residual_im", "normalizer", "envelope_formula",
               "envelope", "envelope_ratio", "alternate_re", "alternate_im"};
  for (const auto& r : reports) {
    t.add_row({real_or_int(r.q), to_string(r.kind), real_or_int(r.m1), real_or_int(r.m2), std::to_string(r.k),
               format_real(r.alpha), format_real(r.theta_exp), r.bump_id, format_real(r.computed.real()),
               format_real(r.computed.imag()), format_real(r.predicted_main.real()),
               format_real(r.predicted_main.imag()), format_real(r.residual.real()), format_real(r.residual.imag()),
               format_real(r.normalizer), r.envelope_formula, format_real(r.envelope),
               format_real(r.envelope_ratio), format_real(r.alternate.real()), format_real(r.alternate.imag())});
  }
  return t;
}

Table nonvanish_table(const std::vector<NonvanishReport>& reports) {
  Table t;
  t.columns = {"q", "a", "b", "mu", "epsilon", "threshold", "N", "family_in_window", "proportion", "c_eta_bound"};
  for (const auto& r : reports) {
    double b = r.interval.start + r.interval.length;
    if (b > 1) b -= 1;
    t.add_row({real_or_int(r.q), format_real(r.interval.start), format_real(b), format_real(r.interval.length),
               format_real(r.epsilon), format_real(r.threshold), real_or_int(r.count),
               real_or_int(r.family_in_window), format_real(r.proportion), format_real(r.c_eta_bound)});
  }
  return t;
}

}  // namespace rnlab
