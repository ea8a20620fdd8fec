#pragma once

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "mvk/linalg.hpp"
#include "mvk/ring.hpp"

namespace mvk {

inline constexpr int kConeMaxRank = 8;
inline constexpr int kConeMaxRays = 16;

/// Integral polyhedral cone, strictly convex, spanned by primitive pairwise
/// distinct generators. May sit in an ambient lattice of larger rank.
struct Cone {
  int ambient_rank = 0;
  IntMat rays;
};

/// Does 0 admit a non-trivial non-negative combination of the generators?
/// Equivalent to the cone containing a line.
inline bool cone_is_pointed(int ambient_rank, const IntMat& rays) {
  if (rays.empty()) return true;
  std::size_t n = rays.size();
  RatMat eq(ambient_rank + 1, std::vector<Rat>(n, 0));
  std::vector<Rat> rhs(ambient_rank + 1, 0);
  for (std::size_t j = 0; j < n; ++j)
    for (int i = 0; i < ambient_rank; ++i) eq[i][j] = Rat(rays[j][i]);
  for (std::size_t j = 0; j < n; ++j) eq[ambient_rank][j] = 1;
  rhs[ambient_rank] = 1;
  return !lp_feasible(eq, rhs);
}

inline Cone cone_from_rays(int ambient_rank, IntMat rays) {
  if (ambient_rank < 1) fail(Errc::InvalidRay, "ambient rank must be positive");
  std::set<IntVec> seen;
  IntMat normalized;
  for (auto& r : rays) {
    if (static_cast<int>(r.size()) != ambient_rank)
      fail(Errc::InvalidRay, "ray length does not match the ambient rank");
    IntVec p = primitive(std::move(r));
    if (vec_gcd(p) == 0) fail(Errc::InvalidRay, "zero ray");
    if (seen.insert(p).second) normalized.push_back(std::move(p));
  }
  if (!cone_is_pointed(ambient_rank, normalized))
    fail(Errc::NotSharp, "cone contains a line");
  return Cone{ambient_rank, std::move(normalized)};
}

struct Face {
  std::vector<int> ray_indices;  // sorted indices into Cone::rays
  int dim = 0;
};

/// All faces of the cone, ordered by dimension then by ray set. Containment
/// of faces is containment of their ray sets.
struct FaceLattice {
  int cone_dim = 0;
  std::vector<Face> faces;

  std::vector<int> counts_by_dim() const {
    std::vector<int> counts(cone_dim + 1, 0);
    for (const auto& f : faces) counts[f.dim]++;
    return counts;
  }
};

/// Face enumeration by exact supporting-hyperplane search: candidate normals
/// come from kernels of (dim-1)-element generator subsets; proper faces are
/// then closed under intersection.
inline FaceLattice face_lattice(const Cone& cone) {
  if (cone.ambient_rank > kConeMaxRank)
    fail(Errc::SizeBudget, "ambient rank exceeds " + std::to_string(kConeMaxRank));
  if (static_cast<int>(cone.rays.size()) > kConeMaxRays)
    fail(Errc::SizeBudget, "ray count exceeds " + std::to_string(kConeMaxRays));

  const std::size_t nrays = cone.rays.size();
  const std::size_t cols = static_cast<std::size_t>(cone.ambient_rank);
  const int cone_dim = static_cast<int>(rank(cone.rays, cols));

  auto subset_rank = [&](const std::vector<int>& idx) {
    IntMat m;
    for (int i : idx) m.push_back(cone.rays[i]);
    return static_cast<int>(rank(m, cols));
  };

  FaceLattice fl;
  fl.cone_dim = cone_dim;
  if (cone_dim == 0) {
    fl.faces.push_back(Face{{}, 0});
    return fl;
  }

  // facets
  std::set<std::vector<int>> facet_sets;
  std::vector<int> subset;
  auto try_subset = [&](const std::vector<int>& s) {
    IntMat m;
    for (int i : s) m.push_back(cone.rays[i]);
    if (static_cast<int>(rank(m, cols)) != cone_dim - 1) return;
    for (const IntVec& v : kernel_basis(m, cols)) {
      IntVec evals(nrays);
      bool nonzero = false;
      for (std::size_t j = 0; j < nrays; ++j) {
        evals[j] = dot(v, cone.rays[j]);
        if (evals[j] != 0) nonzero = true;
      }
      if (!nonzero) continue;
      bool has_pos = false, has_neg = false;
      for (const Int& e : evals) {
        if (e > 0) has_pos = true;
        if (e < 0) has_neg = true;
      }
      if (has_pos && has_neg) break;  // not supporting; all kernel vectors agree
      std::vector<int> zero_set;
      for (std::size_t j = 0; j < nrays; ++j)
        if (evals[j] == 0) zero_set.push_back(static_cast<int>(j));
      facet_sets.insert(zero_set);
      break;
    }
  };
  // iterate over all (cone_dim-1)-subsets of ray indices
  std::vector<int> comb(cone_dim - 1);
  auto next_comb = [&](std::vector<int>& c) {
    int k = static_cast<int>(c.size());
    for (int i = k - 1; i >= 0; --i) {
      if (c[i] < static_cast<int>(nrays) - (k - i)) {
        ++c[i];
        for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
        return true;
      }
    }
    return false;
  };
  if (cone_dim == 1) {
    try_subset({});
  } else {
    for (int i = 0; i < cone_dim - 1; ++i) comb[i] = i;
    do {
      try_subset(comb);
    } while (next_comb(comb));
  }

  // close the facets under intersection; every proper face arises
  std::vector<int> all(nrays);
  for (std::size_t i = 0; i < nrays; ++i) all[i] = static_cast<int>(i);
  std::set<std::vector<int>> face_sets;
  face_sets.insert(all);
  std::vector<std::vector<int>> work(facet_sets.begin(), facet_sets.end());
  for (const auto& f : work) face_sets.insert(f);
  while (!work.empty()) {
    std::vector<int> f = std::move(work.back());
    work.pop_back();
    for (const auto& g : facet_sets) {
      std::vector<int> h;
      std::set_intersection(f.begin(), f.end(), g.begin(), g.end(), std::back_inserter(h));
      if (face_sets.insert(h).second) work.push_back(h);
    }
  }

  for (const auto& s : face_sets) fl.faces.push_back(Face{s, subset_rank(s)});
  std::sort(fl.faces.begin(), fl.faces.end(), [](const Face& a, const Face& b) {
    if (a.dim != b.dim) return a.dim < b.dim;
    return a.ray_indices < b.ray_indices;
  });
  if (fl.faces.empty() || fl.faces.front().dim != 0 || fl.faces.back().dim != cone_dim)
    fail(Errc::InvariantViolation, "face lattice misses the zero face or the cone");
  return fl;
}

/// Sum of (-1)^dim over all faces: the compactly supported Euler
/// characteristic of the cone. 1 for the zero cone, 0 otherwise.
inline long euler_number(const FaceLattice& fl) {
  long e = 0;
  for (const auto& f : fl.faces) e += f.dim % 2 == 0 ? 1 : -1;
  return e;
}

/// Toric boundary class attached to a local cone: positive-dimensional faces
/// contribute torus orbits. Homogeneous of grade dim(cone) - 1, then shifted.
inline GradedClass p_class_from_cone(const FaceLattice& fl, int grade) {
  if (fl.cone_dim == 0) fail(Errc::NoStratumCone, "the zero cone carries no stratum");
  if (grade < fl.cone_dim - 1)
    fail(Errc::GradeBelowDimension, "grade below cone dimension - 1");
  GradedClass sum;
  for (const auto& f : fl.faces) {
    if (f.dim < 1) continue;
    sum += GradedClass::tau_power(fl.cone_dim - f.dim) * torus_class(f.dim - 1, f.dim - 1);
  }
  return GradedClass::tau_power(grade - (fl.cone_dim - 1)) * sum;
}

inline GradedClass p_class_from_cone(const Cone& cone, int grade) {
  return p_class_from_cone(face_lattice(cone), grade);
}

}  // namespace mvk
