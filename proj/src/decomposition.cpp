#include "qcorr/decomposition.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

namespace qcorr {

namespace {

void require_chsh(const FacetId& facet) {
  if (facet.kind != FacetKind::kChsh) {
    throw NotChshFacet("operation requires a CHSH facet");
  }
}

int pr_index(const FacetId& facet) {
  return 2 * (facet.i - 1) + facet.j;  // (1,1)->1 ... (2,2)->4
}

}  // namespace

std::array<CorrelationVector, 4> facet_vertices(const FacetId& facet) {
  require_chsh(facet);
  // Exactly one of +/-l_k lies on each CHSH facet (its value there is
  // +/-1 in exact arithmetic), so position k holds the signed copy of
  // l_k satisfying the facet equality.
  auto signed_vertex = [&](int k) {
    const CorrelationVector v = local_box(k);
    return facet_value(v, facet) > 0.0 ? v : -v;
  };
  return {signed_vertex(1), signed_vertex(2), signed_vertex(3),
          signed_vertex(4)};
}

CorrelationVector facet_pr_box(const FacetId& facet) {
  require_chsh(facet);
  const CorrelationVector n = pr_box(pr_index(facet));
  return facet.sign > 0 ? n : -n;
}

double pr_rate(const CorrelationVector& q, const FacetId& facet) {
  require_chsh(facet);
  return facet_value(q, facet) - 1.0;
}

FacetId max_chsh_facet(const CorrelationVector& q) {
  const FacetId* best = nullptr;
  double best_value = 0.0;
  for (const FacetId& f : all_facets()) {
    if (f.kind != FacetKind::kChsh) continue;
    const double value = facet_value(q, f);
    if (best == nullptr || value > best_value) {
      best = &f;
      best_value = value;
      continue;
    }
    if (value == best_value) {
      const auto key = [](const FacetId& g) {
        return std::array<int, 3>{g.sign, g.i, g.j};
      };
      if (key(f) > key(*best)) best = &f;
    }
  }
  return *best;
}

Decomposition decompose(const CorrelationVector& q) {
  if (!in_nosignaling(q, 1e-9)) {
    throw NotDecomposable(
        "vector lies outside the no-signaling cube and cannot be a convex "
        "combination of its vertices");
  }
  const FacetId facet = max_chsh_facet(q);
  const double value = facet_value(q, facet);
  if (value < 1.0 - 1e-9) {
    throw InsideLocalPolytope(
        "maximal CHSH value below 1; the 5-point decomposition is not "
        "unique inside the local polytope");
  }

  const double eta = value - 1.0;
  const CorrelationVector n = facet_pr_box(facet);
  const std::array<CorrelationVector, 4> vertices = facet_vertices(facet);

  Decomposition d{facet, {0.0, 0.0, 0.0, 0.0}, eta};
  if (1.0 - eta <= 1e-12) {
    // Pure PR box (CHSH value 2): no local content.
    d.eta_nl = std::min(eta, 1.0);
    return d;
  }

  // Residual point on the facet's affine hull; its barycentric
  // coordinates over the four vertices are the local weights up to the
  // factor 1 - eta.
  const CorrelationVector r = (1.0 / (1.0 - eta)) * (q - eta * n);
  Eigen::Matrix4d basis;
  Eigen::Vector4d rhs;
  for (int row = 0; row < 4; ++row) {
    for (int col = 0; col < 4; ++col) basis(row, col) = vertices[col][row];
    rhs(row) = r[row];
  }
  const Eigen::Vector4d w = basis.partialPivLu().solve(rhs);

  for (int k = 0; k < 4; ++k) {
    if (w(k) < -1e-8) {
      throw NotDecomposable(
          "vector is not a convex combination over the selected facet");
    }
    // + 0.0 turns a clamped -0.0 into +0.0 for clean reports.
    d.eta_local[k] = (1.0 - eta) * std::max(w(k), 0.0) + 0.0;
  }
  return d;
}

CorrelationVector reconstruct(const Decomposition& d) {
  const std::array<CorrelationVector, 4> vertices = facet_vertices(d.facet);
  CorrelationVector sum = d.eta_nl * facet_pr_box(d.facet);
  for (int k = 0; k < 4; ++k) sum = sum + d.eta_local[k] * vertices[k];
  return sum;
}

double local_rate_check(const Decomposition& d) {
  const auto& e = d.eta_local;
  const double total = e[0] + e[1] + e[2] + e[3];
  const double cross = std::max(e[0] * e[3] + e[1] * e[2], 0.0);
  return total - (1.0 - 2.0 * std::sqrt(cross));
}

bool symmetric_rate_bound(const Decomposition& d, double tol) {
  const auto [lo, hi] =
      std::minmax_element(d.eta_local.begin(), d.eta_local.end());
  if (*hi - *lo > tol) {
    throw NotSymmetric("local weights are not equal within tolerance");
  }
  const double eta0 =
      (d.eta_local[0] + d.eta_local[1] + d.eta_local[2] + d.eta_local[3]) /
      4.0;
  return eta0 >= 0.5 * (1.0 - 1.0 / std::sqrt(2.0)) - tol;
}

}  // namespace qcorr
