#pragma once

/**
 * Quantum-mechanical generation of correlation vectors and an independent
 * membership oracle for the quantum body Q.
 *
 * Correlations arise from a two-qubit state rho and four measurement
 * directions via q_ij = tr(rho (sigma_{u_i} x sigma_{v_j})).  Equivalently
 * (and exhaustively for Q) q_ij = x_i . y_j for unit vectors x_i, y_j in
 * R^4; gram_feasible searches for such vectors directly by scanning the
 * two free inner products s = x1.x2 and t = y1.y2 and testing the 4x4
 * Gram matrix for positive semidefiniteness.
 */

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "qcorr/correlation.hpp"

namespace qcorr {

/// Thrown when a vector that must be unit length is not (beyond 1e-9).
struct NonUnitDirection : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown when a density matrix violates Hermiticity, unit trace, or
/// positive semidefiniteness beyond tolerance.
struct InvalidState : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Unit vector in physical 3-space selecting a spin measurement axis.
class Direction {
 public:
  /// Requires ux^2 + uy^2 + uz^2 = 1 within 1e-9; throws NonUnitDirection.
  Direction(double ux, double uy, double uz);

  /// Scales an arbitrary nonzero vector to unit length.
  static Direction normalized(double x, double y, double z);

  double ux() const { return u_[0]; }
  double uy() const { return u_[1]; }
  double uz() const { return u_[2]; }

 private:
  std::array<double, 3> u_;
};

/**
 * A 2x2 Hermitian observable with eigenvalues +/-1 (a spin operator):
 * trace 0 and M^2 = I within 1e-12, checked on construction.
 */
class SpinObservable {
 public:
  explicit SpinObservable(const Eigen::Matrix2cd& m);
  const Eigen::Matrix2cd& matrix() const { return m_; }

 private:
  Eigen::Matrix2cd m_;
};

/// The spin operator u_x sigma_x + u_y sigma_y + u_z sigma_z.
SpinObservable spin_operator(const Direction& u);

/**
 * A two-qubit state: 4x4 complex matrix that is Hermitian within 1e-12,
 * has trace 1 within 1e-12, and eigenvalues >= -1e-10.  Violations throw
 * InvalidState.
 */
class DensityMatrix {
 public:
  explicit DensityMatrix(const Eigen::Matrix4cd& rho);

  /// I/4, the maximally mixed two-qubit state.
  static DensityMatrix maximally_mixed();

  /// Projector onto the given ket (normalized internally).
  static DensityMatrix pure(const Eigen::Vector4cd& ket);

  /// Projector onto the singlet state (|01> - |10>)/sqrt(2).
  static DensityMatrix singlet();

  const Eigen::Matrix4cd& matrix() const { return rho_; }

 private:
  Eigen::Matrix4cd rho_;
};

/**
 * The four correlations q_ij = tr(rho (sigma_{u_i} x sigma_{v_j})) of the
 * two-setting experiment with Alice directions u1, u2 and Bob directions
 * v1, v2.  The result always passes quantum_membership_analytic.
 */
CorrelationVector correlation(const DensityMatrix& rho, const Direction& u1,
                              const Direction& u2, const Direction& v1,
                              const Direction& v2);

/**
 * Four unit vectors x1, x2, y1, y2 in R^4 realizing a quantum correlation
 * vector as q_ij = x_i . y_j.  Each norm must be 1 within 1e-9
 * (NonUnitDirection otherwise).
 */
class TsirelsonQuadruple {
 public:
  TsirelsonQuadruple(const Eigen::Vector4d& x1, const Eigen::Vector4d& x2,
                     const Eigen::Vector4d& y1, const Eigen::Vector4d& y2);

  const Eigen::Vector4d& x1() const { return x1_; }
  const Eigen::Vector4d& x2() const { return x2_; }
  const Eigen::Vector4d& y1() const { return y1_; }
  const Eigen::Vector4d& y2() const { return y2_; }

 private:
  Eigen::Vector4d x1_, x2_, y1_, y2_;
};

/// q_ij = x_i . y_j; this map is onto the quantum body Q.
CorrelationVector tsirelson_correlation(const TsirelsonQuadruple& quad);

/**
 * Half-sum / half-difference frame of a quadruple:
 *   a = (x1 + x2)/2,  a_perp = (x1 - x2)/2,
 *   b = (y1 + y2)/2,  b_perp = (y1 - y2)/2.
 * a . a_perp = 0 and |a|^2 + |a_perp|^2 = 1 (same for b), and the
 * Hadamard transform of tsirelson_correlation(quad) equals
 * (a.b, a_perp.b, a.b_perp, a_perp.b_perp).
 */
struct HalfSumFrame {
  Eigen::Vector4d a;
  Eigen::Vector4d a_perp;
  Eigen::Vector4d b;
  Eigen::Vector4d b_perp;
};

HalfSumFrame half_sum_frame(const TsirelsonQuadruple& quad);

/**
 * Brute-force membership oracle for Q.
 *
 * q lies in Q iff some choice of the free inner products s = x1.x2,
 * t = y1.y2 in [-1, 1] makes the Gram matrix
 *
 *       | 1    s    q11  q12 |
 *   M = | s    1    q21  q22 |
 *       | q11  q21  1    t   |
 *       | q12  q22  t    1   |
 *
 * positive semidefinite (minimum eigenvalue >= -1e-9).  The search scans
 * a grid_resolution^2 grid over (s, t) and runs a local refinement from
 * the best cell; the minimum eigenvalue is concave in (s, t), so the
 * scan plus refinement cannot miss a feasible region wider than the grid
 * spacing.
 *
 * grid_resolution must be at least 100 (std::invalid_argument otherwise).
 */
bool gram_feasible(const CorrelationVector& q, int grid_resolution = 200);

/// Families of random quantum correlations.
enum class RandomSource {
  kPureState,         // Haar-random two-qubit pure state, random directions
  kMixedState,        // normalized positive random matrix, random directions
  kTsirelsonVectors,  // four independent uniform points on the 3-sphere
};

/// Canonical names: "pure-state", "mixed-state", "tsirelson-vectors".
std::string_view random_source_name(RandomSource source);
std::optional<RandomSource> parse_random_source(std::string_view name);

/**
 * One random quantum correlation vector.  Deterministic given the seed;
 * each call owns a private generator, so calls are independent and
 * thread-safe.  Every output passes quantum_membership_analytic.
 */
CorrelationVector random_correlation(std::uint64_t seed, RandomSource source);

/**
 * A batch of random quantum correlations.  Row k uses a private seed
 * derived from (seed, k), so the batch is reproducible and independent
 * of evaluation order.
 */
std::vector<CorrelationVector> sample_correlations(std::size_t count,
                                                   std::uint64_t seed,
                                                   RandomSource source);

/**
 * The maximal CHSH value attainable on the boundary family with
 * parameters (alpha, beta):
 *
 *   max over theta = sqrt(cos^2(alpha - beta) + sin^2(alpha + beta)),
 *
 * reaching the absolute maximum sqrt(2) at alpha = beta = pi/4.
 */
double maximize_chsh(double alpha, double beta);

}  // namespace qcorr
