#include "qcorr/quantum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace qcorr {

namespace {

using Eigen::Matrix2cd;
using Eigen::Matrix4cd;
using Eigen::Matrix4d;
using Eigen::Vector4cd;
using Eigen::Vector4d;

constexpr std::complex<double> kI{0.0, 1.0};

const Matrix2cd& pauli_x() {
  static const Matrix2cd m = (Matrix2cd() << 0, 1, 1, 0).finished();
  return m;
}

const Matrix2cd& pauli_y() {
  static const Matrix2cd m = (Matrix2cd() << 0, -kI, kI, 0).finished();
  return m;
}

const Matrix2cd& pauli_z() {
  static const Matrix2cd m = (Matrix2cd() << 1, 0, 0, -1).finished();
  return m;
}

/// Tensor product of two one-qubit operators, row-major qubit order.
Matrix4cd kron2(const Matrix2cd& a, const Matrix2cd& b) {
  Matrix4cd k;
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      k.block<2, 2>(2 * i, 2 * j) = a(i, j) * b;
    }
  }
  return k;
}

double max_abs_entry(const Matrix4cd& m) {
  return m.cwiseAbs().maxCoeff();
}

/// Lower bound on all eigenvalues (Gershgorin).
double gershgorin_lower(const Matrix4d& m) {
  double lo = std::numeric_limits<double>::infinity();
  for (int i = 0; i < 4; ++i) {
    double radius = 0.0;
    for (int j = 0; j < 4; ++j) {
      if (j != i) radius += std::abs(m(i, j));
    }
    lo = std::min(lo, m(i, i) - radius);
  }
  return lo;
}

/**
 * Fast estimate of the minimum eigenvalue of a symmetric 4x4 matrix:
 * Newton's method on the characteristic polynomial started from the
 * Gershgorin lower bound.  Below the smallest root the polynomial is
 * positive, decreasing and convex, so the iteration increases
 * monotonically to the smallest root.  Accuracy is ~1e-12 for simple
 * roots and ~1e-7 near a double root; callers must budget for that.
 */
double lambda_min_estimate(const Matrix4d& m) {
  const double c1 = m.trace();
  double c2 = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      c2 += m(i, i) * m(j, j) - m(i, j) * m(i, j);
    }
  }
  double c3 = 0.0;
  for (int drop = 0; drop < 4; ++drop) {
    int idx[3], pos = 0;
    for (int i = 0; i < 4; ++i) {
      if (i != drop) idx[pos++] = i;
    }
    const double a = m(idx[0], idx[0]), b = m(idx[1], idx[1]),
                 c = m(idx[2], idx[2]);
    const double d = m(idx[0], idx[1]), e = m(idx[0], idx[2]),
                 f = m(idx[1], idx[2]);
    c3 += a * (b * c - f * f) - d * (d * c - f * e) + e * (d * f - b * e);
  }
  const double c4 = m.determinant();

  double x = gershgorin_lower(m);
  for (int it = 0; it < 64; ++it) {
    const double p = (((x - c1) * x + c2) * x - c3) * x + c4;
    const double dp = ((4 * x - 3 * c1) * x + 2 * c2) * x - c3;
    if (!(dp < 0.0)) break;  // at or past the root (or roundoff noise)
    const double step = -p / dp;
    x += step;
    if (std::abs(step) <= 1e-14 * (1.0 + std::abs(x))) break;
  }
  return x;
}

double lambda_min_exact(const Matrix4d& m) {
  Eigen::SelfAdjointEigenSolver<Matrix4d> solver(m, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

/// Nelder-Mead maximization of f over [-1,1]^2 (proposals are clamped).
template <typename F>
void nelder_mead_max(const F& f, double& s, double& t, double spread,
                     int max_iter) {
  struct Point {
    double s, t, val;
  };
  auto clamp1 = [](double v) { return std::clamp(v, -1.0, 1.0); };
  auto eval = [&](double ps, double pt) {
    return Point{clamp1(ps), clamp1(pt), f(clamp1(ps), clamp1(pt))};
  };
  std::array<Point, 3> simplex = {eval(s, t), eval(s + spread, t),
                                  eval(s, t + spread)};
  auto by_val = [](const Point& a, const Point& b) { return a.val > b.val; };
  for (int it = 0; it < max_iter; ++it) {
    std::sort(simplex.begin(), simplex.end(), by_val);
    const Point& best = simplex[0];
    Point& worst = simplex[2];
    const double cs = 0.5 * (simplex[0].s + simplex[1].s);
    const double ct = 0.5 * (simplex[0].t + simplex[1].t);

    const Point refl = eval(cs + (cs - worst.s), ct + (ct - worst.t));
    if (refl.val > best.val) {
      const Point expd = eval(cs + 2 * (cs - worst.s), ct + 2 * (ct - worst.t));
      worst = expd.val > refl.val ? expd : refl;
    } else if (refl.val > simplex[1].val) {
      worst = refl;
    } else {
      const Point ctr = eval(cs + 0.5 * (worst.s - cs), ct + 0.5 * (worst.t - ct));
      if (ctr.val > worst.val) {
        worst = ctr;
      } else {
        for (int k = 1; k < 3; ++k) {
          simplex[k] = eval(0.5 * (simplex[k].s + best.s),
                            0.5 * (simplex[k].t + best.t));
        }
      }
    }
    const double size = std::abs(simplex[0].s - simplex[2].s) +
                        std::abs(simplex[0].t - simplex[2].t) +
                        std::abs(simplex[1].s - simplex[0].s) +
                        std::abs(simplex[1].t - simplex[0].t);
    if (size < 1e-13) break;
  }
  std::sort(simplex.begin(), simplex.end(), by_val);
  s = simplex[0].s;
  t = simplex[0].t;
}

/// Golden-section maximization of the 1-D slice g over [lo, hi].
template <typename G>
double golden_max(const G& g, double lo, double hi) {
  constexpr double kInvPhi = 0.6180339887498949;
  double a = lo, b = hi;
  double x1 = b - kInvPhi * (b - a);
  double x2 = a + kInvPhi * (b - a);
  double f1 = g(x1), f2 = g(x2);
  for (int it = 0; it < 60 && (b - a) > 1e-12; ++it) {
    if (f1 < f2) {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + kInvPhi * (b - a);
      f2 = g(x2);
    } else {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - kInvPhi * (b - a);
      f1 = g(x1);
    }
  }
  return f1 > f2 ? x1 : x2;
}

std::mt19937_64 seeded_generator(std::uint64_t seed) {
  return std::mt19937_64(seed);
}

/// SplitMix64 step, used to derive independent per-row seeds.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + (index + 1) * 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

Direction random_direction(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    const double x = gauss(rng), y = gauss(rng), z = gauss(rng);
    if (std::sqrt(x * x + y * y + z * z) > 1e-9) {
      return Direction::normalized(x, y, z);
    }
  }
}

Vector4d random_unit4(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vector4d v;
    for (int k = 0; k < 4; ++k) v(k) = gauss(rng);
    const double n = v.norm();
    if (n > 1e-9) return v / n;
  }
}

Vector4cd random_ket(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    Vector4cd psi;
    for (int k = 0; k < 4; ++k) {
      const double re = gauss(rng);
      const double im = gauss(rng);
      psi(k) = std::complex<double>(re, im);
    }
    if (psi.norm() > 1e-9) return psi / psi.norm();
  }
}

CorrelationVector correlation_of_ket(const Vector4cd& psi, const Direction& u1,
                                     const Direction& u2, const Direction& v1,
                                     const Direction& v2) {
  const Matrix2cd a1 = spin_operator(u1).matrix();
  const Matrix2cd a2 = spin_operator(u2).matrix();
  const Matrix2cd b1 = spin_operator(v1).matrix();
  const Matrix2cd b2 = spin_operator(v2).matrix();
  auto expect = [&](const Matrix2cd& a, const Matrix2cd& b) {
    return std::real((psi.adjoint() * (kron2(a, b) * psi))(0));
  };
  return {expect(a1, b1), expect(a1, b2), expect(a2, b1), expect(a2, b2)};
}

}  // namespace

Direction::Direction(double ux, double uy, double uz) : u_{ux, uy, uz} {
  for (double v : u_) {
    if (!std::isfinite(v)) {
      throw std::invalid_argument("direction component is not finite");
    }
  }
  const double n = std::sqrt(ux * ux + uy * uy + uz * uz);
  if (std::abs(n - 1.0) > 1e-9) {
    throw NonUnitDirection("direction norm deviates from 1 beyond 1e-9");
  }
}

Direction Direction::normalized(double x, double y, double z) {
  const double n = std::sqrt(x * x + y * y + z * z);
  if (!(n > 1e-12) || !std::isfinite(n)) {
    throw std::invalid_argument("cannot normalize a near-zero vector");
  }
  return Direction(x / n, y / n, z / n);
}

SpinObservable::SpinObservable(const Eigen::Matrix2cd& m) : m_(m) {
  if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("spin observable must be Hermitian");
  }
  if (std::abs(m.trace()) > 1e-12) {
    throw std::invalid_argument("spin observable must be traceless");
  }
  const Matrix2cd sq = m * m;
  if ((sq - Matrix2cd::Identity()).cwiseAbs().maxCoeff() > 1e-12) {
    throw std::invalid_argument("spin observable must square to identity");
  }
}

SpinObservable spin_operator(const Direction& u) {
  return SpinObservable(u.ux() * pauli_x() + u.uy() * pauli_y() +
                        u.uz() * pauli_z());
}

DensityMatrix::DensityMatrix(const Eigen::Matrix4cd& rho) : rho_(rho) {
  if (max_abs_entry(rho - rho.adjoint()) > 1e-12) {
    throw InvalidState("density matrix must be Hermitian");
  }
  if (std::abs(rho.trace() - 1.0) > 1e-12) {
    throw InvalidState("density matrix must have trace 1");
  }
  Eigen::SelfAdjointEigenSolver<Matrix4cd> solver(rho, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues()(0) < -1e-10) {
    throw InvalidState("density matrix must be positive semidefinite");
  }
}

DensityMatrix DensityMatrix::maximally_mixed() {
  return DensityMatrix(Matrix4cd::Identity() / 4.0);
}

DensityMatrix DensityMatrix::pure(const Eigen::Vector4cd& ket) {
  const double n = ket.norm();
  if (!(n > 1e-12) || !std::isfinite(n)) {
    throw InvalidState("pure state requires a nonzero ket");
  }
  const Vector4cd psi = ket / n;
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix DensityMatrix::singlet() {
  Vector4cd psi;
  psi << 0.0, 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  return DensityMatrix(psi * psi.adjoint());
}

CorrelationVector correlation(const DensityMatrix& rho, const Direction& u1,
                              const Direction& u2, const Direction& v1,
                              const Direction& v2) {
  const Matrix2cd a1 = spin_operator(u1).matrix();
  const Matrix2cd a2 = spin_operator(u2).matrix();
  const Matrix2cd b1 = spin_operator(v1).matrix();
  const Matrix2cd b2 = spin_operator(v2).matrix();
  auto expect = [&](const Matrix2cd& a, const Matrix2cd& b) {
    return std::real((rho.matrix() * kron2(a, b)).trace());
  };
  return {expect(a1, b1), expect(a1, b2), expect(a2, b1), expect(a2, b2)};
}

TsirelsonQuadruple::TsirelsonQuadruple(const Eigen::Vector4d& x1,
                                       const Eigen::Vector4d& x2,
                                       const Eigen::Vector4d& y1,
                                       const Eigen::Vector4d& y2)
    : x1_(x1), x2_(x2), y1_(y1), y2_(y2) {
  for (const Vector4d* v : {&x1_, &x2_, &y1_, &y2_}) {
    if (std::abs(v->norm() - 1.0) > 1e-9) {
      throw NonUnitDirection("quadruple vectors must be unit length");
    }
  }
}

CorrelationVector tsirelson_correlation(const TsirelsonQuadruple& quad) {
  return {quad.x1().dot(quad.y1()), quad.x1().dot(quad.y2()),
          quad.x2().dot(quad.y1()), quad.x2().dot(quad.y2())};
}

HalfSumFrame half_sum_frame(const TsirelsonQuadruple& quad) {
  HalfSumFrame frame;
  frame.a = 0.5 * (quad.x1() + quad.x2());
  frame.a_perp = 0.5 * (quad.x1() - quad.x2());
  frame.b = 0.5 * (quad.y1() + quad.y2());
  frame.b_perp = 0.5 * (quad.y1() - quad.y2());
  return frame;
}

bool gram_feasible(const CorrelationVector& q, int grid_resolution) {
  if (grid_resolution < 100) {
    throw std::invalid_argument("grid_resolution must be at least 100");
  }
  constexpr double kPsdTol = 1e-9;
  // A PSD Gram matrix forces |q_ij| <= 1, so anything beyond the cube
  // (past roundoff) is infeasible outright.
  if (q.max_abs() > 1.0 + kPsdTol) return false;

  std::array<double, 4> c{};
  for (int k = 0; k < 4; ++k) c[k] = std::clamp(q[k], -1.0, 1.0);

  auto gram = [&](double s, double t) {
    Matrix4d m;
    m << 1, s, c[0], c[1],
         s, 1, c[2], c[3],
         c[0], c[2], 1, t,
         c[1], c[3], t, 1;
    return m;
  };
  auto exact_at = [&](double s, double t) {
    return lambda_min_exact(gram(s, t));
  };

  // Stage 1: grid scan.  The cheap Newton estimate decides which cells
  // are worth an exact eigenvalue check and tracks the best cell; its
  // worst-case error (double roots) is ~1e-7, covered by kScreenSlack.
  constexpr double kScreenSlack = 3e-6;
  const int r = grid_resolution;
  const double h = 2.0 / (r - 1);
  double best_est = -std::numeric_limits<double>::infinity();
  double best_s = 0.0, best_t = 0.0;
  for (int i = 0; i < r; ++i) {
    const double s = -1.0 + h * i;
    for (int j = 0; j < r; ++j) {
      const double t = -1.0 + h * j;
      const double est = lambda_min_estimate(gram(s, t));
      if (est > best_est) {
        best_est = est;
        best_s = s;
        best_t = t;
      }
      if (est >= -kPsdTol - kScreenSlack && exact_at(s, t) >= -kPsdTol) {
        return true;
      }
    }
  }

  // The minimum eigenvalue is 1-Lipschitz in each of s and t, so the
  // true optimum cannot exceed the best cell by more than one spacing
  // per coordinate; far-infeasible points need no refinement.
  if (best_est + 2.0 * h + kScreenSlack < -kPsdTol) return false;

  // Stage 2: local refinement from the best cell, on exact eigenvalues.
  // Two Nelder-Mead runs (the second restarted tight around the first
  // optimum) followed by shrinking coordinate-wise golden sections; the
  // optimum can sit on a conical double-eigenvalue point, which plain
  // simplex steps approach only geometrically.
  double s = best_s, t = best_t;
  nelder_mead_max(exact_at, s, t, h, 300);
  nelder_mead_max(exact_at, s, t, 1e-5, 200);
  for (double radius : {1e-2, 1e-4, 1e-6, 1e-8}) {
    s = golden_max(
        [&](double v) { return exact_at(v, t); },
        std::max(-1.0, s - radius), std::min(1.0, s + radius));
    t = golden_max(
        [&](double v) { return exact_at(s, v); },
        std::max(-1.0, t - radius), std::min(1.0, t + radius));
  }
  return exact_at(s, t) >= -kPsdTol;
}

std::string_view random_source_name(RandomSource source) {
  switch (source) {
    case RandomSource::kPureState:
      return "pure-state";
    case RandomSource::kMixedState:
      return "mixed-state";
    case RandomSource::kTsirelsonVectors:
      return "tsirelson-vectors";
  }
  throw std::invalid_argument("unknown random source");
}

std::optional<RandomSource> parse_random_source(std::string_view name) {
  if (name == "pure-state") return RandomSource::kPureState;
  if (name == "mixed-state") return RandomSource::kMixedState;
  if (name == "tsirelson-vectors") return RandomSource::kTsirelsonVectors;
  return std::nullopt;
}

CorrelationVector random_correlation(std::uint64_t seed, RandomSource source) {
  std::mt19937_64 rng = seeded_generator(seed);
  switch (source) {
    case RandomSource::kPureState: {
      const Vector4cd psi = random_ket(rng);
      const Direction u1 = random_direction(rng);
      const Direction u2 = random_direction(rng);
      const Direction v1 = random_direction(rng);
      const Direction v2 = random_direction(rng);
      return correlation_of_ket(psi, u1, u2, v1, v2);
    }
    case RandomSource::kMixedState: {
      std::normal_distribution<double> gauss(0.0, 1.0);
      Matrix4cd g;
      for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
          const double re = gauss(rng);
          const double im = gauss(rng);
          g(i, j) = std::complex<double>(re, im);
        }
      }
      Matrix4cd rho = g * g.adjoint();
      rho /= rho.trace();
      const DensityMatrix state(rho);
      const Direction u1 = random_direction(rng);
      const Direction u2 = random_direction(rng);
      const Direction v1 = random_direction(rng);
      const Direction v2 = random_direction(rng);
      return correlation(state, u1, u2, v1, v2);
    }
    case RandomSource::kTsirelsonVectors: {
      const Vector4d x1 = random_unit4(rng);
      const Vector4d x2 = random_unit4(rng);
      const Vector4d y1 = random_unit4(rng);
      const Vector4d y2 = random_unit4(rng);
      return tsirelson_correlation(TsirelsonQuadruple(x1, x2, y1, y2));
    }
  }
  throw std::invalid_argument("unknown random source");
}

std::vector<CorrelationVector> sample_correlations(std::size_t count,
                                                   std::uint64_t seed,
                                                   RandomSource source) {
  std::vector<CorrelationVector> rows;
  rows.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    rows.push_back(random_correlation(mix_seed(seed, k), source));
  }
  return rows;
}

double maximize_chsh(double alpha, double beta) {
  return std::hypot(std::cos(alpha - beta), std::sin(alpha + beta));
}

}  // namespace qcorr
