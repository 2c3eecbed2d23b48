// qcorr: command-line front end for two-party binary correlation
// geometry.  Subcommands:
//
//   check      full membership/bounds report for one vector
//   decompose  local-plus-PR decomposition report for one vector
//   verify     batch-check a CSV file of correlation vectors
//   boundary   sample the quantum boundary manifold onto CSV
//   sample     generate seeded random quantum correlations as CSV
//
// Exit codes: 0 = all checks pass, 1 = quantum-bound violation found,
// 2 = usage/schema error, 3 = I/O error.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qcorr/correlation.hpp"
#include "qcorr/decomposition.hpp"
#include "qcorr/quantum.hpp"
#include "qcorr/report.hpp"

namespace {

using qcorr::CorrelationVector;

/// Stdout by default, or a file when --out was given.
class OutputTarget {
 public:
  explicit OutputTarget(const std::string& path) : path_(path) {
    if (!path_.empty()) {
      file_.open(path_);
      if (!file_) {
        throw qcorr::IoError("cannot open output file: " + path_);
      }
    }
  }

  std::ostream& out() { return path_.empty() ? std::cout : file_; }

  void finish() {
    out().flush();
    if (!out()) {
      throw qcorr::IoError(path_.empty() ? "failed writing to stdout"
                                         : "failed writing output file: " +
                                               path_);
    }
  }

 private:
  std::string path_;
  std::ofstream file_;
};

CorrelationVector vector_from(const std::vector<double>& values) {
  return CorrelationVector(values[0], values[1], values[2], values[3]);
}

int run_check(const std::vector<double>& values, double tol,
              const std::string& format, const std::string& out_path) {
  const CorrelationVector q = vector_from(values);
  const qcorr::VectorReport report = qcorr::build_report(q, tol);
  OutputTarget target(out_path);
  if (format == "csv") {
    target.out() << qcorr::report_csv_header() << '\n'
                 << qcorr::report_csv_row(report) << '\n';
  } else {
    target.out() << qcorr::to_json(report).dump(2) << '\n';
  }
  target.finish();
  return qcorr::fails_quantum_bounds(report) ? 1 : 0;
}

int run_decompose(const std::vector<double>& values, double tol,
                  const std::string& format, const std::string& out_path) {
  const CorrelationVector q = vector_from(values);
  const qcorr::VectorReport report = qcorr::build_report(q, tol);
  if (!report.decomposition) {
    try {
      qcorr::decompose(q);
      // Reachable only when --tol is tighter than the decomposition
      // gate: the vector decomposes but misses the facet within tol.
      std::cerr << "error: vector does not reach a CHSH facet within "
                   "tolerance, nothing to decompose\n";
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << '\n';
    }
    return 2;
  }
  const qcorr::Decomposition& d = *report.decomposition;
  OutputTarget target(out_path);
  if (format == "csv") {
    target.out() << "p11,p12,p21,p22,facet,eta_1,eta_2,eta_3,eta_4,eta_nl\n";
    std::string row;
    for (int k = 0; k < 4; ++k) {
      row += qcorr::format_double(q[k]);
      row += ',';
    }
    row += qcorr::facet_token(d.facet);
    for (double eta : d.eta_local) {
      row += ',';
      row += qcorr::format_double(eta);
    }
    row += ',';
    row += qcorr::format_double(d.eta_nl);
    target.out() << row << '\n';
  } else {
    nlohmann::ordered_json j;
    j["input"] = {q[0], q[1], q[2], q[3]};
    j["decomposition"] = qcorr::to_json(d);
    target.out() << j.dump(2) << '\n';
  }
  target.finish();
  return 0;
}

int run_verify(const std::string& input_path, double tol,
               const std::string& format, const std::string& out_path) {
  std::ifstream in(input_path);
  if (!in) {
    throw qcorr::IoError("cannot open input file: " + input_path);
  }
  const std::vector<CorrelationVector> inputs =
      qcorr::read_correlation_csv(in, std::cerr);
  if (in.bad()) {
    throw qcorr::IoError("failed reading input file: " + input_path);
  }
  const qcorr::BatchResult result = qcorr::verify_batch(inputs, tol);
  OutputTarget target(out_path);
  if (format == "json") {
    target.out() << qcorr::to_json(result).dump(2) << '\n';
  } else {
    target.out() << qcorr::batch_csv_header() << '\n';
    for (const qcorr::RowReport& row : result.rows) {
      target.out() << qcorr::batch_csv_row(row) << '\n';
    }
  }
  target.finish();
  const qcorr::BatchSummary& s = result.summary;
  std::cerr << "verified " << s.rows << " row(s): " << s.failures
            << " failure(s); violations: trivial " << s.violations.trivial
            << ", chsh " << s.violations.chsh << ", pairing "
            << s.violations.pairing << ", iterated_lower "
            << s.violations.iterated_lower << ", iterated_upper "
            << s.violations.iterated_upper << '\n';
  return s.failures > 0 ? 1 : 0;
}

int run_boundary(std::uint64_t alpha_steps, std::uint64_t beta_steps,
                 const std::string& out_path) {
  if (alpha_steps < 2 || beta_steps < 2) {
    std::cerr << "error: boundary grids need at least 2 steps per axis\n";
    return 2;
  }
  OutputTarget target(out_path);
  target.out() << "alpha,beta,theta,q11,q12,q21,q22,chsh,quadric\n";
  const double half_pi = std::numbers::pi / 2.0;
  std::uint64_t rows = 0;
  for (std::uint64_t a = 0; a < alpha_steps; ++a) {
    const double alpha =
        static_cast<double>(a + 1) * half_pi / static_cast<double>(alpha_steps + 1);
    for (std::uint64_t b = 0; b < beta_steps; ++b) {
      const double beta =
          static_cast<double>(b + 1) * half_pi / static_cast<double>(beta_steps + 1);
      const double theta =
          std::atan2(std::sin(alpha + beta), std::cos(alpha - beta));
      const CorrelationVector q = qcorr::boundary_point(alpha, beta);
      std::string row = qcorr::format_double(alpha);
      row += ',';
      row += qcorr::format_double(beta);
      row += ',';
      row += qcorr::format_double(theta);
      for (int k = 0; k < 4; ++k) {
        row += ',';
        row += qcorr::format_double(q[k]);
      }
      row += ',';
      row += qcorr::format_double(qcorr::chsh_functional(q, 2, 2));
      row += ',';
      row += qcorr::format_double(qcorr::quadric_form(q));
      target.out() << row << '\n';
      ++rows;
    }
  }
  target.finish();
  std::cerr << "wrote " << rows << " row(s)\n";
  return 0;
}

int run_sample(std::uint64_t count, std::uint64_t seed,
               const std::string& source_name, const std::string& out_path) {
  if (count < 1) {
    std::cerr << "error: count must be at least 1\n";
    return 2;
  }
  const std::optional<qcorr::RandomSource> source =
      qcorr::parse_random_source(source_name);
  if (!source) {
    std::cerr << "error: unknown source \"" << source_name
              << "\" (expected pure-state, mixed-state, or "
                 "tsirelson-vectors)\n";
    return 2;
  }
  const std::vector<CorrelationVector> rows =
      qcorr::sample_correlations(count, seed, *source);
  OutputTarget target(out_path);
  qcorr::write_correlation_csv(target.out(), rows);
  target.finish();
  std::cerr << "wrote " << rows.size() << " row(s)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Geometry of two-party binary correlation vectors: membership "
      "reports, quantum-bound verification, boundary sampling, and "
      "seeded random correlations."};
  app.require_subcommand(1);

  std::vector<double> check_values;
  double check_tol = qcorr::kDefaultTol;
  std::string check_format = "json";
  std::string check_out;
  CLI::App* check = app.add_subcommand(
      "check", "Report membership and quantum bounds for one vector");
  check->add_option("values", check_values, "p11 p12 p21 p22")
      ->expected(4)
      ->required();
  check->add_option("--tol", check_tol, "Membership tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  check->add_option("--format", check_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  check->add_option("--out", check_out, "Output path (default: stdout)");

  std::vector<double> dec_values;
  double dec_tol = qcorr::kDefaultTol;
  std::string dec_format = "json";
  std::string dec_out;
  CLI::App* dec = app.add_subcommand(
      "decompose",
      "Decompose an above-facet vector into local boxes plus a PR box");
  dec->add_option("values", dec_values, "p11 p12 p21 p22")
      ->expected(4)
      ->required();
  dec->add_option("--tol", dec_tol, "Facet-reach tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  dec->add_option("--format", dec_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  dec->add_option("--out", dec_out, "Output path (default: stdout)");

  std::string verify_input;
  double verify_tol = qcorr::kDefaultTol;
  std::string verify_format = "csv";
  std::string verify_out;
  CLI::App* verify = app.add_subcommand(
      "verify", "Check every row of a correlation CSV against the "
                "quantum bounds");
  verify->add_option("input", verify_input, "CSV file with header p11,p12,p21,p22")
      ->required();
  verify->add_option("--tol", verify_tol, "Membership tolerance")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  verify->add_option("--format", verify_format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  verify->add_option("--out", verify_out, "Output path (default: stdout)");

  std::uint64_t alpha_steps = 0;
  std::uint64_t beta_steps = 0;
  std::string boundary_out;
  CLI::App* boundary = app.add_subcommand(
      "boundary", "Sample the quantum boundary manifold over an "
                  "(alpha, beta) grid");
  boundary->add_option("alpha_steps", alpha_steps, "Grid steps in alpha (>= 2)")
      ->required();
  boundary->add_option("beta_steps", beta_steps, "Grid steps in beta (>= 2)")
      ->required();
  boundary->add_option("--out", boundary_out, "Output path (default: stdout)");

  std::uint64_t sample_count = 0;
  std::uint64_t sample_seed = 0;
  std::string sample_source;
  std::string sample_out;
  CLI::App* sample = app.add_subcommand(
      "sample", "Generate seeded random quantum correlations");
  sample->add_option("count", sample_count, "Number of rows (>= 1)")
      ->required();
  sample
      ->add_option("--source", sample_source,
                   "pure-state | mixed-state | tsirelson-vectors")
      ->required();
  sample->add_option("--seed", sample_seed, "Random seed")
      ->capture_default_str();
  sample->add_option("--out", sample_out, "Output path (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (check->parsed()) {
      return run_check(check_values, check_tol, check_format, check_out);
    }
    if (dec->parsed()) {
      return run_decompose(dec_values, dec_tol, dec_format, dec_out);
    }
    if (verify->parsed()) {
      return run_verify(verify_input, verify_tol, verify_format, verify_out);
    }
    if (boundary->parsed()) {
      return run_boundary(alpha_steps, beta_steps, boundary_out);
    }
    if (sample->parsed()) {
      return run_sample(sample_count, sample_seed, sample_source, sample_out);
    }
  } catch (const qcorr::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const qcorr::SchemaError& e) {
    std::cerr << "error: line " << e.row << ", column " << e.column << ": "
              << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 2;
}
