#include <array>
#include <fstream>
#include <ostream>

#include <nlohmann/json.hpp>

#include "fmfqkd/engine.hpp"
#include "fmfqkd/error.hpp"
#include "text_util.hpp"

namespace fmfqkd {

namespace {

constexpr const char* kFields[] = {"distance_km", "launch_power_dbm", "quantum_loss_db", "classical_loss_db",
                                   "srs_rate_cps", "y0",             "q_mu",            "e_mu",
                                   "y1_lower",     "e1_upper",       "key_rate_bps"};

std::array<double*, 11> numeric_fields(ResultRow& r) {
  return {&r.distance_km, &r.launch_power_dbm, &r.quantum_loss_db, &r.classical_loss_db,
          &r.srs_rate_cps, &r.y0, &r.q_mu, &r.e_mu, &r.y1_lower, &r.e1_upper, &r.key_rate_bps};
}

}  // namespace

void write_results(const std::vector<ResultRow>& rows, OutputFormat format, std::ostream& out) {
  if (format == OutputFormat::Csv) {
    out << kResultCsvHeader << '\n';
    for (ResultRow r : rows) {
      for (double* v : numeric_fields(r)) out << detail::format_double(*v) << ',';
      out << (r.classical_feasible ? "true" : "false") << '\n';
    }
    return;
  }
  // JSON numbers are written with round-trip precision by nlohmann.
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (ResultRow r : rows) {
    nlohmann::ordered_json obj;
    const auto vals = numeric_fields(r);
    for (std::size_t i = 0; i < vals.size(); ++i) obj[kFields[i]] = *vals[i];
    obj["classical_feasible"] = r.classical_feasible;
    arr.push_back(std::move(obj));
  }
  out << arr.dump(2) << '\n';
}

void emit_results(const std::vector<ResultRow>& rows, OutputFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  write_results(rows, format, out);
  out.flush();
  if (!out) throw IoError("failed writing results to '" + path + "'");
}

std::vector<ResultRow> read_results_csv(std::istream& in) {
  std::string line;
  int lineno = 1;
  if (!std::getline(in, line) || detail::trim(line) != kResultCsvHeader) {
    throw ParseError(lineno, "missing or unexpected results header");
  }
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto fields = detail::split(detail::trim(line), ',');
    if (fields.size() != 12) throw ParseError(lineno, "expected 12 fields, got " + std::to_string(fields.size()));
    ResultRow r;
    const auto vals = numeric_fields(r);
    for (std::size_t i = 0; i < vals.size(); ++i) *vals[i] = detail::parse_double(fields[i], lineno, kFields[i]);
    const auto feasible = detail::trim(fields[11]);
    if (feasible != "true" && feasible != "false") throw ParseError(lineno, "classical_feasible must be true/false");
    r.classical_feasible = feasible == "true";
    rows.push_back(r);
  }
  return rows;
}

std::vector<ResultRow> read_results_json(std::istream& in) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(0, e.what());
  }
  if (!doc.is_array()) throw ParseError(0, "results JSON must be an array");
  std::vector<ResultRow> rows;
  for (const auto& obj : doc) {
    ResultRow r;
    const auto vals = numeric_fields(r);
    try {
      for (std::size_t i = 0; i < vals.size(); ++i) *vals[i] = obj.at(kFields[i]).get<double>();
      r.classical_feasible = obj.at("classical_feasible").get<bool>();
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(0, e.what());
    }
    rows.push_back(r);
  }
  return rows;
}

}  // namespace fmfqkd
