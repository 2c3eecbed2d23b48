#pragma once

/**
 * Convex decomposition of a correlation vector lying on or above a CHSH
 * facet of the local polytope.
 *
 * The slab of the no-signaling cube above a CHSH facet is a 4-simplex:
 * its vertices are the facet's four local boxes plus the PR box sitting
 * above the facet.  Every such vector therefore has a unique convex
 * representation
 *
 *   q = eta1 v1 + eta2 v2 + eta3 v3 + eta4 v4 + eta n,
 *
 * where the PR weight eta = (CHSH value of q) - 1 measures the nonlocal
 * content; quantum vectors obey eta <= sqrt(2) - 1.
 */

#include <array>
#include <stdexcept>

#include "qcorr/correlation.hpp"

namespace qcorr {

/// Thrown when an operation needs a CHSH facet but got a trivial one.
struct NotChshFacet : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Thrown by decompose for vectors strictly below every CHSH facet,
/// where the 5-point decomposition is not unique.
struct InsideLocalPolytope : std::domain_error {
  using std::domain_error::domain_error;
};

/// Thrown by decompose when the vector is not a convex combination of
/// the chosen facet's vertices and PR box (barycentric coordinate below
/// -1e-8); reachable only for inputs outside the no-signaling cube.
struct NotDecomposable : std::domain_error {
  using std::domain_error::domain_error;
};

/// Thrown by symmetric_rate_bound when the four local weights are not
/// equal within the given tolerance.
struct NotSymmetric : std::domain_error {
  using std::domain_error::domain_error;
};

/**
 * A convex decomposition over a CHSH facet: weights of the facet's four
 * local vertices (in the order of facet_vertices) plus the weight of
 * the PR box above the facet.  Valid decompositions have nonnegative
 * weights summing to 1 within 1e-10 and reconstruct the decomposed
 * vector within 1e-10 componentwise.
 */
struct Decomposition {
  FacetId facet;
  std::array<double, 4> eta_local;
  double eta_nl;
};

/**
 * The four local boxes lying on the given CHSH facet, in catalog order:
 * position k holds whichever of +/-l_k satisfies the facet equality.
 * Throws NotChshFacet for trivial facets.
 */
std::array<CorrelationVector, 4> facet_vertices(const FacetId& facet);

/// The PR box above the given CHSH facet (facet value 2).
CorrelationVector facet_pr_box(const FacetId& facet);

/**
 * The PR rate of q relative to a CHSH facet: (signed CHSH value) - 1.
 * Affine in q; negative below the facet; at most sqrt(2) - 1 on the
 * quantum body.  Throws NotChshFacet for trivial facets.
 */
double pr_rate(const CorrelationVector& q, const FacetId& facet);

/**
 * The CHSH facet with maximal signed value on q.  Ties are broken by
 * picking the lexicographically largest (sign, i, j) with +1 ordered
 * above -1, so e.g. the all-ones box selects the (2,2) facet.
 */
FacetId max_chsh_facet(const CorrelationVector& q);

/**
 * Decomposes q over the CHSH facet selected by max_chsh_facet.
 *
 * The PR weight is eta = pr_rate(q, facet); for eta < 1 the residual
 * point r = (q - eta n)/(1 - eta) lies on the facet's affine hull and
 * its barycentric coordinates over the four vertices give the local
 * weights; eta = 1 is the pure PR box.  Barycentric coordinates in
 * [-1e-8, 0) are clamped to 0.
 *
 * Throws InsideLocalPolytope when the maximal CHSH value is below
 * 1 - 1e-9, and NotDecomposable when q is not in the facet's simplex
 * beyond that clamp (in particular for q outside the no-signaling cube).
 */
Decomposition decompose(const CorrelationVector& q);

/// The convex combination described by d.
CorrelationVector reconstruct(const Decomposition& d);

/**
 * Residual of the local-rate inequality
 *
 *   eta1+eta2+eta3+eta4 >= 1 - 2 sqrt(eta1 eta4 + eta2 eta3),
 *
 * i.e. (sum of local weights) - (1 - 2 sqrt(eta1 eta4 + eta2 eta3)).
 * Nonnegative (within 1e-9) for decompositions of quantum vectors and
 * zero exactly on the curved boundary family.
 */
double local_rate_check(const Decomposition& d);

/**
 * The symmetric-case bound: with all four local weights equal to eta0,
 * quantum vectors force eta0 >= (1 - 1/sqrt(2))/2.  Returns whether the
 * bound holds within tol; throws NotSymmetric when the weights differ
 * from each other beyond tol.
 */
bool symmetric_rate_bound(const Decomposition& d, double tol);

}  // namespace qcorr
