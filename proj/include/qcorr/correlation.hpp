#pragma once

/**
 * Core geometry of two-party correlation vectors.
 *
 * A correlation vector collects the four expectations q_ij = E(a_i * b_j)
 * of a bipartite experiment in which each party chooses between two
 * binary (+/-1) measurements.  Vectors are written in the fixed component
 * order (q11, q12, q21, q22).
 *
 * Three nested convex bodies in R^4 are handled here:
 *
 *   L  - the local polytope: vectors explainable by shared randomness.
 *        Its 16 facets are the trivial bounds |q_ij| <= 1 and the eight
 *        CHSH inequalities.
 *   Q  - the closed convex body of quantum-realizable vectors.
 *   P  - the no-signaling polytope, the unit cube [-1,1]^4 in this
 *        correlation-only setting.
 *
 * The scaled Hadamard matrix H (entries +/-1/4) diagonalizes this
 * geometry: H maps the deterministic vertices l_k of L onto the unit
 * vectors e_k, and the quadratic form q^T H q drives both the analytic
 * membership test for Q and the iterated CHSH bounds.
 */

#include <array>
#include <cstddef>
#include <stdexcept>

namespace qcorr {

/// Default numerical tolerance for membership predicates.
inline constexpr double kDefaultTol = 1e-9;

/// Thrown by boundary_point when cos(alpha - beta) vanishes and the
/// boundary direction is not determined by the closed-form angle.
struct DegenerateAngles : std::domain_error {
  using std::domain_error::domain_error;
};

/**
 * Immutable vector of four two-party correlations (q11, q12, q21, q22).
 *
 * Construction only checks finiteness; membership in any of the convex
 * bodies is a separate query.  Component getters use the (i, j) naming of
 * the measurement settings, with i, j in {1, 2}.
 */
class CorrelationVector {
 public:
  CorrelationVector(double q11, double q12, double q21, double q22);

  double q11() const { return c_[0]; }
  double q12() const { return c_[1]; }
  double q21() const { return c_[2]; }
  double q22() const { return c_[3]; }

  /// Component by setting pair, i, j in {1, 2}.
  double component(int i, int j) const { return c_[2 * (i - 1) + (j - 1)]; }

  /// Flat access in (q11, q12, q21, q22) order, k in [0, 4).
  double operator[](std::size_t k) const { return c_[k]; }

  /// Largest |q_ij|.
  double max_abs() const;

 private:
  std::array<double, 4> c_;
};

bool operator==(const CorrelationVector& a, const CorrelationVector& b);
CorrelationVector operator+(const CorrelationVector& a, const CorrelationVector& b);
CorrelationVector operator-(const CorrelationVector& a, const CorrelationVector& b);
CorrelationVector operator-(const CorrelationVector& a);
CorrelationVector operator*(double s, const CorrelationVector& a);

/**
 * Deterministic local vertex l_k, k in 1..4:
 *   l1 = ( 1,  1,  1,  1)    l2 = ( 1,  1, -1, -1)
 *   l3 = ( 1, -1,  1, -1)    l4 = ( 1, -1, -1,  1)
 * Together with their negatives these are the 8 vertices of L.
 */
CorrelationVector local_box(int k);

/**
 * PR-box vertex n_k, k in 1..4:
 *   n1 = (-1,  1,  1,  1)    n2 = ( 1, -1,  1,  1)
 *   n3 = ( 1,  1, -1,  1)    n4 = ( 1,  1,  1, -1)
 * Together with +/-l_k these are the 16 vertices of P.
 */
CorrelationVector pr_box(int k);

/// Standard basis vector e_k of R^4, k in 1..4.
CorrelationVector canonical_vertex(int k);

/**
 * All signed vertices of the three polytopes, in the fixed order
 * (+v1, +v2, +v3, +v4, -v1, -v2, -v3, -v4).
 */
struct VertexCatalog {
  std::array<CorrelationVector, 8> local;      // +/- l_k
  std::array<CorrelationVector, 8> pr;         // +/- n_k
  std::array<CorrelationVector, 8> canonical;  // +/- e_k
};

const VertexCatalog& vertex_catalog();

/**
 * The scaled Hadamard matrix times 4, i.e. integer entries +/-1:
 *
 *       | 1  1  1  1 |
 *   4H =| 1  1 -1 -1 |
 *       | 1 -1  1 -1 |
 *       | 1 -1 -1  1 |
 *
 * H itself satisfies H^2 = I/4, so (4H)^2 = 4I in exact integers.
 */
constexpr std::array<std::array<int, 4>, 4> hadamard_times4() {
  return {{{1, 1, 1, 1}, {1, 1, -1, -1}, {1, -1, 1, -1}, {1, -1, -1, 1}}};
}

/// Matrix-vector product H q with H = hadamard_times4() / 4.
CorrelationVector hadamard_transform(const CorrelationVector& q);

/**
 * The quadratic form q^T H q, expanded as
 *
 *   (q11 + q12 + q21 - q22)^2 / 4 + (q11 q22 - q12 q21).
 *
 * On the quantum body Q this form is bounded by [-1, 1]; local boxes
 * +/-l_k attain exactly 1 and PR boxes +/-n_k attain +/-2.
 */
double quadric_form(const CorrelationVector& q);

/**
 * The CHSH functional for the distinguished setting pair (i, j):
 *
 *   f_ij(q) = (q11 + q12 + q21 + q22) / 2 - q_ij.
 *
 * Equivalently the inner product n_k . q / 2 where n_k is the PR box
 * associated with (i, j).
 */
double chsh_functional(const CorrelationVector& q, int i, int j);

/**
 * The eight signed CHSH values in the fixed order
 *   (+f11, +f12, +f21, +f22, -f11, -f12, -f21, -f22).
 * Local vectors satisfy all eight <= 1; the maximum over the eight,
 * together with the trivial bounds, decides membership in L.
 */
std::array<double, 8> chsh_values(const CorrelationVector& q);

/// The two families of facets of the local polytope L.
enum class FacetKind { kTrivial, kChsh };

/**
 * One of the 16 facets of L: sign * q_ij <= 1 (trivial) or
 * sign * f_ij(q) <= 1 (CHSH), with i, j in {1, 2} and sign in {-1, +1}.
 */
struct FacetId {
  FacetKind kind;
  int i;
  int j;
  int sign;
};

bool operator==(const FacetId& a, const FacetId& b);

/// All 16 facets: trivial then CHSH, each (+ then -), (i, j) row-major.
const std::array<FacetId, 16>& all_facets();

/// Value of the facet functional, so that membership in L reads <= 1.
double facet_value(const CorrelationVector& q, const FacetId& f);

/// Membership in the local polytope L (all 16 facet values <= 1 + tol).
bool in_local(const CorrelationVector& q, double tol = kDefaultTol);

/// Membership in the no-signaling polytope P (all |q_ij| <= 1 + tol).
bool in_nosignaling(const CorrelationVector& q, double tol = kDefaultTol);

/**
 * Analytic membership test for the quantum body Q.
 *
 * A vector inside the unit cube lies in Q iff
 *
 *   |q_ab q_cd - q_ab' q_cd'| <=   sqrt(1 - q_ab^2)  sqrt(1 - q_cd^2)
 *                                + sqrt(1 - q_ab'^2) sqrt(1 - q_cd'^2)
 *
 * holds for the three ways of splitting the four components into two
 * pairs.  Components are clamped to [-1, 1] before the square roots so
 * that roundoff at the cube boundary cannot produce NaNs; each inequality
 * is tested with slack tol.
 */
bool quantum_membership_analytic(const CorrelationVector& q,
                                 double tol = kDefaultTol);

/**
 * Result of evaluating the quadratic bounds on a vector: the value of
 * q^T H q together with the four iterated CHSH expressions
 *
 *   I_k(q) = sum_m (n_m q)^2 / 8 - (n_k q)^2 / 4 ,
 *
 * of which I_1 equals quadric_form(q).  Membership in Q forces every
 * I_k into [-1, 1]; within_bounds reports that check at tolerance tol.
 */
struct QuadricReport {
  double quadric_value;
  std::array<double, 4> iterated;
  bool within_bounds;
};

QuadricReport iterated_chsh(const CorrelationVector& q,
                            double tol = kDefaultTol);

/**
 * The two-parameter family covering the nonlocal part of the boundary
 * of Q:
 *
 *   q(alpha, beta, theta) = ( cos(alpha + beta - theta),
 *                             cos(alpha - beta - theta),
 *                             cos(alpha - beta + theta),
 *                             cos(alpha + beta + theta) ).
 */
CorrelationVector boundary_point_raw(double alpha, double beta, double theta);

/**
 * Boundary point at the angle theta* = atan2(sin(alpha + beta),
 * cos(alpha - beta)) that places q(alpha, beta, theta*) on the quadric
 * q^T H q = 1, i.e. on the curved boundary of Q.
 *
 * Throws DegenerateAngles when |cos(alpha - beta)| <= 1e-12, where the
 * closed form for theta* loses meaning.
 */
CorrelationVector boundary_point(double alpha, double beta);

}  // namespace qcorr
