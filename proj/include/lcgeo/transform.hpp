#pragma once

#include "lcgeo/potential.hpp"

namespace lcgeo {

/// Closed-form convex conjugate for the catalog forms; nullopt otherwise.
std::optional<Potential> legendre_transform_closed(const Potential& phi);

/// Convex conjugate: closed form when the catalog admits one, otherwise
/// sampled on `query` by factorized per-axis discrete conjugation.
/// sample_n overrides the per-axis source sampling density (0 = default).
Potential legendre_transform(const Potential& phi, const GridSpec& query, int sample_n = 0);

/// Support function of a log-concave function, h_g = (-log g)^*.
class SupportFn {
 public:
  enum class Provenance { closed_form, grid_conjugate };

  SupportFn() = default;

  double operator()(const Vec& y) const;
  Provenance provenance() const { return prov_; }
  const Potential& conjugate() const { return conj_; }

  static SupportFn closed(Potential conj);
  static SupportFn gridded(Potential conj_grid, std::shared_ptr<const GridPotentialData> source);

 private:
  Potential conj_;
  Provenance prov_ = Provenance::closed_form;
  std::shared_ptr<const GridPotentialData> source_;  // for out-of-window queries
};

/// Closed-form route; throws if the catalog has no conjugate for g's potential.
SupportFn support_function_of(const LogConcaveFn& g);

/// Grid fallback: the conjugate is tabulated on `query` (closed forms ignore it).
SupportFn support_function_of(const LogConcaveFn& g, const GridSpec& query, int sample_n = 0);

}  // namespace lcgeo
