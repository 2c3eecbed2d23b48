#include "qcorr/correlation.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qcorr {

namespace {

double checked(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("correlation component ") + name +
                                " is not finite");
  }
  return v;
}

void check_index(int k) {
  if (k < 1 || k > 4) {
    throw std::out_of_range("vertex index must be in 1..4");
  }
}

}  // namespace

CorrelationVector::CorrelationVector(double q11, double q12, double q21,
                                     double q22)
    : c_{checked(q11, "q11"), checked(q12, "q12"), checked(q21, "q21"),
         checked(q22, "q22")} {}

double CorrelationVector::max_abs() const {
  double m = 0.0;
  for (double v : c_) m = std::max(m, std::abs(v));
  return m;
}

bool operator==(const CorrelationVector& a, const CorrelationVector& b) {
  return a[0] == b[0] && a[1] == b[1] && a[2] == b[2] && a[3] == b[3];
}

CorrelationVector operator+(const CorrelationVector& a,
                            const CorrelationVector& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

CorrelationVector operator-(const CorrelationVector& a,
                            const CorrelationVector& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

CorrelationVector operator-(const CorrelationVector& a) {
  return {-a[0], -a[1], -a[2], -a[3]};
}

CorrelationVector operator*(double s, const CorrelationVector& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

CorrelationVector local_box(int k) {
  check_index(k);
  static const std::array<CorrelationVector, 4> l = {
      CorrelationVector{1, 1, 1, 1},
      CorrelationVector{1, 1, -1, -1},
      CorrelationVector{1, -1, 1, -1},
      CorrelationVector{1, -1, -1, 1},
  };
  return l[k - 1];
}

CorrelationVector pr_box(int k) {
  check_index(k);
  static const std::array<CorrelationVector, 4> n = {
      CorrelationVector{-1, 1, 1, 1},
      CorrelationVector{1, -1, 1, 1},
      CorrelationVector{1, 1, -1, 1},
      CorrelationVector{1, 1, 1, -1},
  };
  return n[k - 1];
}

CorrelationVector canonical_vertex(int k) {
  check_index(k);
  static const std::array<CorrelationVector, 4> e = {
      CorrelationVector{1, 0, 0, 0},
      CorrelationVector{0, 1, 0, 0},
      CorrelationVector{0, 0, 1, 0},
      CorrelationVector{0, 0, 0, 1},
  };
  return e[k - 1];
}

const VertexCatalog& vertex_catalog() {
  static const VertexCatalog catalog = [] {
    VertexCatalog c{{local_box(1), local_box(2), local_box(3), local_box(4),
                     -local_box(1), -local_box(2), -local_box(3),
                     -local_box(4)},
                    {pr_box(1), pr_box(2), pr_box(3), pr_box(4), -pr_box(1),
                     -pr_box(2), -pr_box(3), -pr_box(4)},
                    {canonical_vertex(1), canonical_vertex(2),
                     canonical_vertex(3), canonical_vertex(4),
                     -canonical_vertex(1), -canonical_vertex(2),
                     -canonical_vertex(3), -canonical_vertex(4)}};
    return c;
  }();
  return catalog;
}

CorrelationVector hadamard_transform(const CorrelationVector& q) {
  constexpr auto h4 = hadamard_times4();
  std::array<double, 4> r{};
  for (int i = 0; i < 4; ++i) {
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += h4[i][j] * q[j];
    r[i] = s / 4.0;
  }
  return {r[0], r[1], r[2], r[3]};
}

double quadric_form(const CorrelationVector& q) {
  const double s = q[0] + q[1] + q[2] - q[3];
  return 0.25 * s * s + (q[0] * q[3] - q[1] * q[2]);
}

double chsh_functional(const CorrelationVector& q, int i, int j) {
  if (i < 1 || i > 2 || j < 1 || j > 2) {
    throw std::out_of_range("CHSH setting indices must be in {1, 2}");
  }
  const double half_sum = 0.5 * (q[0] + q[1] + q[2] + q[3]);
  return half_sum - q.component(i, j);
}

std::array<double, 8> chsh_values(const CorrelationVector& q) {
  const double half_sum = 0.5 * (q[0] + q[1] + q[2] + q[3]);
  std::array<double, 8> v{};
  for (int k = 0; k < 4; ++k) {
    v[k] = half_sum - q[k];
    v[k + 4] = -v[k];
  }
  return v;
}

bool operator==(const FacetId& a, const FacetId& b) {
  return a.kind == b.kind && a.i == b.i && a.j == b.j && a.sign == b.sign;
}

const std::array<FacetId, 16>& all_facets() {
  static const std::array<FacetId, 16> facets = [] {
    std::array<FacetId, 16> f{};
    std::size_t pos = 0;
    for (FacetKind kind : {FacetKind::kTrivial, FacetKind::kChsh}) {
      for (int sign : {+1, -1}) {
        for (int i : {1, 2}) {
          for (int j : {1, 2}) {
            f[pos++] = FacetId{kind, i, j, sign};
          }
        }
      }
    }
    return f;
  }();
  return facets;
}

double facet_value(const CorrelationVector& q, const FacetId& f) {
  if (f.kind == FacetKind::kTrivial) {
    return f.sign * q.component(f.i, f.j);
  }
  return f.sign * chsh_functional(q, f.i, f.j);
}

bool in_local(const CorrelationVector& q, double tol) {
  for (const FacetId& f : all_facets()) {
    if (facet_value(q, f) > 1.0 + tol) return false;
  }
  return true;
}

bool in_nosignaling(const CorrelationVector& q, double tol) {
  return q.max_abs() <= 1.0 + tol;
}

bool quantum_membership_analytic(const CorrelationVector& q, double tol) {
  if (!in_nosignaling(q, tol)) return false;

  std::array<double, 4> c{};
  std::array<double, 4> s{};
  for (int k = 0; k < 4; ++k) {
    c[k] = std::clamp(q[k], -1.0, 1.0);
    s[k] = std::sqrt(1.0 - c[k] * c[k]);
  }

  // The three ways of pairing the components (indices into c/s order
  // q11, q12, q21, q22); each pairing yields one inequality.
  constexpr std::array<std::array<int, 4>, 3> pairings = {{
      {0, 1, 2, 3},  // |q11 q12 - q21 q22| <= s11 s12 + s21 s22
      {0, 2, 1, 3},  // |q11 q21 - q12 q22| <= s11 s21 + s12 s22
      {0, 3, 1, 2},  // |q11 q22 - q12 q21| <= s11 s22 + s12 s21
  }};
  for (const auto& p : pairings) {
    const double lhs =
        std::abs(c[p[0]] * c[p[1]] - c[p[2]] * c[p[3]]);
    const double rhs = s[p[0]] * s[p[1]] + s[p[2]] * s[p[3]];
    if (lhs > rhs + tol) return false;
  }
  return true;
}

QuadricReport iterated_chsh(const CorrelationVector& q, double tol) {
  std::array<double, 4> proj{};
  double total = 0.0;
  for (int k = 1; k <= 4; ++k) {
    const CorrelationVector n = pr_box(k);
    double d = 0.0;
    for (int m = 0; m < 4; ++m) d += n[m] * q[m];
    proj[k - 1] = d;
    total += d * d;
  }

  QuadricReport report{};
  report.quadric_value = quadric_form(q);
  bool ok = true;
  for (int k = 0; k < 4; ++k) {
    report.iterated[k] = total / 8.0 - proj[k] * proj[k] / 4.0;
    if (std::abs(report.iterated[k]) > 1.0 + tol) ok = false;
  }
  report.within_bounds = ok;
  return report;
}

CorrelationVector boundary_point_raw(double alpha, double beta, double theta) {
  return {std::cos(alpha + beta - theta), std::cos(alpha - beta - theta),
          std::cos(alpha - beta + theta), std::cos(alpha + beta + theta)};
}

CorrelationVector boundary_point(double alpha, double beta) {
  if (std::abs(std::cos(alpha - beta)) <= 1e-12) {
    throw DegenerateAngles(
        "cos(alpha - beta) vanishes; boundary angle is undetermined");
  }
  const double theta = std::atan2(std::sin(alpha + beta), std::cos(alpha - beta));
  return boundary_point_raw(alpha, beta, theta);
}

}  // namespace qcorr
