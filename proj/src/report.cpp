#include "qcorr/report.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <limits>
#include <ostream>
#include <string_view>

namespace qcorr {

namespace {

constexpr std::size_t kInputColumns = 4;
constexpr std::array<std::string_view, kInputColumns> kHeader = {"p11", "p12",
                                                                 "p21", "p22"};

std::string_view trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) {
    s.remove_prefix(1);
  }
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) {
    s.remove_suffix(1);
  }
  return s;
}

std::vector<std::string_view> split_csv_line(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

double parse_double_field(std::string_view field, std::size_t row,
                          std::size_t column) {
  const std::string_view text = trimmed(field);
  double value = 0.0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  const auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw SchemaError("expected a decimal number, got \"" +
                          std::string(field) + "\"",
                      row, column);
  }
  if (!std::isfinite(value)) {
    throw SchemaError("non-finite value \"" + std::string(field) + "\"", row,
                      column);
  }
  return value;
}

nlohmann::ordered_json json_or_null(double v) {
  if (std::isnan(v)) {
    return nullptr;
  }
  return v;
}

void append_double(std::string& out, double v) {
  out += format_double(v);
}

void append_bool(std::string& out, bool v) {
  out += v ? "true" : "false";
}

}  // namespace

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string facet_token(const FacetId& facet) {
  std::string s;
  s += facet.sign > 0 ? '+' : '-';
  s += facet.kind == FacetKind::kChsh ? 'f' : 't';
  s += static_cast<char>('0' + facet.i);
  s += static_cast<char>('0' + facet.j);
  return s;
}

VectorReport build_report(const CorrelationVector& q, double tol) {
  VectorReport r{.input = q,
                 .in_L = in_local(q, tol),
                 .in_P = in_nosignaling(q, tol),
                 .in_Q = quantum_membership_analytic(q, tol),
                 .chsh = chsh_values(q),
                 .quadric = 0.0,
                 .iterated = {},
                 .iterated_within_bounds = false,
                 .pr_rate = std::nullopt,
                 .decomposition = std::nullopt};
  const QuadricReport quad = iterated_chsh(q, tol);
  r.quadric = quad.quadric_value;
  r.iterated = quad.iterated;
  r.iterated_within_bounds = quad.within_bounds;
  const double max_chsh = *std::max_element(r.chsh.begin(), r.chsh.end());
  if (max_chsh >= 1.0 - tol) {
    r.pr_rate = max_chsh - 1.0;
    try {
      r.decomposition = decompose(q);
    } catch (const InsideLocalPolytope&) {
    } catch (const NotDecomposable&) {
    }
  }
  return r;
}

bool fails_quantum_bounds(const VectorReport& r) {
  return !r.in_Q || !r.iterated_within_bounds;
}

BatchResult verify_batch(const std::vector<CorrelationVector>& inputs,
                         double tol) {
  BatchResult result;
  result.rows.reserve(inputs.size());
  const double nan = std::numeric_limits<double>::quiet_NaN();
  BatchSummary& s = result.summary;
  s.rows = inputs.size();
  s.max_chsh = nan;
  s.max_quadric = nan;
  s.min_quadric = nan;
  std::size_t index = 0;
  for (const CorrelationVector& q : inputs) {
    ++index;
    VectorReport report = build_report(q, tol);
    const bool fails = fails_quantum_bounds(report);
    if (q.max_abs() > 1.0 + tol) {
      ++s.violations.trivial;
    }
    const double max_chsh =
        *std::max_element(report.chsh.begin(), report.chsh.end());
    if (max_chsh > 1.0 + tol) {
      ++s.violations.chsh;
    }
    if (!report.in_Q) {
      ++s.violations.pairing;
    }
    const auto [it_min, it_max] =
        std::minmax_element(report.iterated.begin(), report.iterated.end());
    if (*it_min < -1.0 - tol) {
      ++s.violations.iterated_lower;
    }
    if (*it_max > 1.0 + tol) {
      ++s.violations.iterated_upper;
    }
    if (fails) {
      ++s.failures;
    }
    if (index == 1 || max_chsh > s.max_chsh) {
      s.max_chsh = max_chsh;
    }
    if (index == 1 || report.quadric > s.max_quadric) {
      s.max_quadric = report.quadric;
    }
    if (index == 1 || report.quadric < s.min_quadric) {
      s.min_quadric = report.quadric;
    }
    result.rows.push_back(RowReport{index, std::move(report), fails});
  }
  return result;
}

std::vector<CorrelationVector> read_correlation_csv(std::istream& in,
                                                    std::ostream& warnings) {
  std::vector<CorrelationVector> rows;
  std::string line;
  std::size_t lineno = 0;
  bool header_seen = false;
  bool warned_extra = false;
  bool first_line = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') {
      line.pop_back();
    }
    std::string_view view = line;
    if (first_line) {
      first_line = false;
      if (view.substr(0, 3) == "\xEF\xBB\xBF") {
        view.remove_prefix(3);
      }
    }
    if (trimmed(view).empty()) {
      continue;
    }
    const std::vector<std::string_view> fields = split_csv_line(view);
    if (fields.size() < kInputColumns) {
      throw SchemaError("expected at least 4 columns, got " +
                            std::to_string(fields.size()),
                        lineno, fields.size() + 1);
    }
    if (!header_seen) {
      for (std::size_t k = 0; k < kInputColumns; ++k) {
        if (trimmed(fields[k]) != kHeader[k]) {
          throw SchemaError("header column must be \"" +
                                std::string(kHeader[k]) + "\", got \"" +
                                std::string(fields[k]) + "\"",
                            lineno, k + 1);
        }
      }
      header_seen = true;
    } else {
      std::array<double, kInputColumns> values{};
      for (std::size_t k = 0; k < kInputColumns; ++k) {
        values[k] = parse_double_field(fields[k], lineno, k + 1);
      }
      rows.emplace_back(values[0], values[1], values[2], values[3]);
    }
    if (fields.size() > kInputColumns && !warned_extra) {
      warnings << "warning: line " << lineno << ": ignoring "
               << fields.size() - kInputColumns << " trailing column(s)\n";
      warned_extra = true;
    }
  }
  if (!header_seen) {
    throw SchemaError("missing header row \"p11,p12,p21,p22\"", 1, 1);
  }
  return rows;
}

void write_correlation_csv(std::ostream& out,
                           const std::vector<CorrelationVector>& rows) {
  out << "p11,p12,p21,p22\n";
  for (const CorrelationVector& q : rows) {
    out << format_double(q[0]) << ',' << format_double(q[1]) << ','
        << format_double(q[2]) << ',' << format_double(q[3]) << '\n';
  }
}

nlohmann::ordered_json to_json(const Decomposition& d) {
  nlohmann::ordered_json j;
  j["facet"] = {{"kind", d.facet.kind == FacetKind::kChsh ? "chsh" : "trivial"},
                {"i", d.facet.i},
                {"j", d.facet.j},
                {"sign", d.facet.sign}};
  j["eta_local"] = d.eta_local;
  j["eta_nl"] = d.eta_nl;
  return j;
}

nlohmann::ordered_json to_json(const VectorReport& r) {
  nlohmann::ordered_json j;
  j["input"] = {r.input[0], r.input[1], r.input[2], r.input[3]};
  j["in_L"] = r.in_L;
  j["in_P"] = r.in_P;
  j["in_Q"] = r.in_Q;
  j["chsh"] = r.chsh;
  j["quadric"] = r.quadric;
  j["iterated"] = r.iterated;
  j["iterated_within_bounds"] = r.iterated_within_bounds;
  if (r.pr_rate) {
    j["pr_rate"] = *r.pr_rate;
  }
  if (r.decomposition) {
    j["decomposition"] = to_json(*r.decomposition);
  }
  return j;
}

nlohmann::ordered_json to_json(const BatchResult& b) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const RowReport& row : b.rows) {
    nlohmann::ordered_json entry;
    entry["row"] = row.row;
    entry.update(to_json(row.report));
    entry["fails"] = row.fails;
    rows.push_back(std::move(entry));
  }
  nlohmann::ordered_json summary;
  const BatchSummary& s = b.summary;
  summary["rows"] = s.rows;
  summary["violations"] = {{"trivial", s.violations.trivial},
                           {"chsh", s.violations.chsh},
                           {"pairing", s.violations.pairing},
                           {"iterated_lower", s.violations.iterated_lower},
                           {"iterated_upper", s.violations.iterated_upper}};
  summary["max_chsh"] = json_or_null(s.max_chsh);
  summary["max_quadric"] = json_or_null(s.max_quadric);
  summary["min_quadric"] = json_or_null(s.min_quadric);
  summary["failures"] = s.failures;
  nlohmann::ordered_json j;
  j["rows"] = std::move(rows);
  j["summary"] = std::move(summary);
  return j;
}

std::string report_csv_header() {
  return "p11,p12,p21,p22,in_L,in_P,in_Q,"
         "chsh_pos_11,chsh_pos_12,chsh_pos_21,chsh_pos_22,"
         "chsh_neg_11,chsh_neg_12,chsh_neg_21,chsh_neg_22,"
         "quadric,iterated_1,iterated_2,iterated_3,iterated_4,"
         "iterated_within_bounds,pr_rate,facet,eta_1,eta_2,eta_3,eta_4,"
         "eta_nl";
}

std::string report_csv_row(const VectorReport& r) {
  std::string out;
  for (int k = 0; k < 4; ++k) {
    append_double(out, r.input[k]);
    out += ',';
  }
  append_bool(out, r.in_L);
  out += ',';
  append_bool(out, r.in_P);
  out += ',';
  append_bool(out, r.in_Q);
  for (double v : r.chsh) {
    out += ',';
    append_double(out, v);
  }
  out += ',';
  append_double(out, r.quadric);
  for (double v : r.iterated) {
    out += ',';
    append_double(out, v);
  }
  out += ',';
  append_bool(out, r.iterated_within_bounds);
  out += ',';
  if (r.pr_rate) {
    append_double(out, *r.pr_rate);
  }
  if (r.decomposition) {
    const Decomposition& d = *r.decomposition;
    out += ',';
    out += facet_token(d.facet);
    for (double v : d.eta_local) {
      out += ',';
      append_double(out, v);
    }
    out += ',';
    append_double(out, d.eta_nl);
  } else {
    out += ",,,,,,";
  }
  return out;
}

std::string batch_csv_header() {
  return "row," + report_csv_header() + ",fails";
}

std::string batch_csv_row(const RowReport& r) {
  std::string out = std::to_string(r.row);
  out += ',';
  out += report_csv_row(r.report);
  out += ',';
  append_bool(out, r.fails);
  return out;
}

}  // namespace qcorr
