#pragma once

/**
 * Report assembly and serialization for the command-line front end:
 * single-vector membership reports, batch verification of correlation
 * data against the quantum bounds, and the CSV/JSON codecs.
 *
 * CSV data files use the schema
 *
 *   p11,p12,p21,p22
 *
 * (UTF-8, comma-separated, decimal values); trailing extra columns are
 * ignored with a warning.  Numbers are written with 17 significant
 * digits so files round-trip double precision exactly.
 */

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "qcorr/correlation.hpp"
#include "qcorr/decomposition.hpp"

namespace qcorr {

/// Malformed CSV input; carries the 1-based line and column of the
/// offending field.
struct SchemaError : std::runtime_error {
  SchemaError(const std::string& what, std::size_t row_arg,
              std::size_t column_arg)
      : std::runtime_error(what), row(row_arg), column(column_arg) {}
  std::size_t row;
  std::size_t column;
};

/// Filesystem-level failure (unreadable input, unwritable output).
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/**
 * Everything the toolkit knows about one correlation vector: membership
 * in the three convex bodies, the eight signed CHSH values, the quadric
 * form with the four iterated bounds, and (when the vector reaches a
 * CHSH facet) the PR rate and the facet decomposition.
 */
struct VectorReport {
  CorrelationVector input;
  bool in_L;
  bool in_P;
  bool in_Q;
  std::array<double, 8> chsh;
  double quadric;
  std::array<double, 4> iterated;
  bool iterated_within_bounds;
  std::optional<double> pr_rate;
  std::optional<Decomposition> decomposition;
};

/**
 * Builds the full report at the given tolerance.  pr_rate is present
 * iff the maximal signed CHSH value reaches 1 - tol; decomposition is
 * present iff additionally decompose succeeds.
 */
VectorReport build_report(const CorrelationVector& q, double tol);

/// A report fails the quantum bounds when the analytic membership test
/// or the iterated CHSH bounds reject the vector.
bool fails_quantum_bounds(const VectorReport& r);

/// Aggregate statistics of a verification batch.  The violation counts
/// say how many rows break each inequality family: the trivial cube
/// bounds, the CHSH (local) bounds, the pairing inequalities of the
/// analytic quantum test, and the iterated CHSH lower/upper bounds.
struct BatchSummary {
  std::size_t rows = 0;
  struct Violations {
    std::size_t trivial = 0;
    std::size_t chsh = 0;
    std::size_t pairing = 0;
    std::size_t iterated_lower = 0;
    std::size_t iterated_upper = 0;
  } violations;
  double max_chsh = 0.0;
  double max_quadric = 0.0;
  double min_quadric = 0.0;
  std::size_t failures = 0;
};

/// One verified row: its 1-based data-row index, the full report, and
/// whether the row fails the quantum bounds.
struct RowReport {
  std::size_t row;
  VectorReport report;
  bool fails;
};

struct BatchResult {
  std::vector<RowReport> rows;
  BatchSummary summary;
};

/// Verifies a batch of vectors in input order.  With no rows the
/// summary extrema are NaN (serialized as null).
BatchResult verify_batch(const std::vector<CorrelationVector>& inputs,
                         double tol);

/**
 * Reads correlation vectors from CSV.  The first non-empty line must be
 * the header `p11,p12,p21,p22`; a warning is printed to `warnings` once
 * if extra trailing columns are present (they are ignored).  Throws
 * SchemaError on malformed content and propagates stream failures.
 */
std::vector<CorrelationVector> read_correlation_csv(std::istream& in,
                                                    std::ostream& warnings);

/// Writes the standard 4-column CSV with 17-significant-digit values.
void write_correlation_csv(std::ostream& out,
                           const std::vector<CorrelationVector>& rows);

/// Shortest text for v that parses back to exactly v (17 significant
/// digits).
std::string format_double(double v);

/// Compact facet token for CSV cells, e.g. "+f22" or "-t11".
std::string facet_token(const FacetId& facet);

nlohmann::ordered_json to_json(const Decomposition& d);
nlohmann::ordered_json to_json(const VectorReport& r);
nlohmann::ordered_json to_json(const BatchResult& b);

/// Flat CSV form of a report; columns given by report_csv_header().
std::string report_csv_header();
std::string report_csv_row(const VectorReport& r);

/// Batch rows add a leading 1-based row index and a trailing fails flag.
std::string batch_csv_header();
std::string batch_csv_row(const RowReport& r);

}  // namespace qcorr
