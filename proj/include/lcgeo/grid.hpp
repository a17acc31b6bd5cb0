#pragma once

#include <array>
#include <cstddef>

#include "lcgeo/vec.hpp"

namespace lcgeo {

/// Uniform node lattice: node (i0,..) sits at origin + i * spacing per axis.
struct GridSpec {
  int dim = 1;
  Vec origin;
  Vec spacing;
  std::array<int, 3> counts{1, 1, 1};

  static GridSpec over(const Vec& lo, const Vec& hi, std::array<int, 3> n) {
    GridSpec g;
    g.dim = lo.dim;
    g.origin = lo;
    g.spacing = Vec(lo.dim);
    g.counts = n;
    for (int i = 0; i < lo.dim; ++i) {
      require(n[static_cast<size_t>(i)] >= 2, "GridSpec: needs >= 2 nodes per axis");
      g.spacing[i] = (hi[i] - lo[i]) / (n[static_cast<size_t>(i)] - 1);
    }
    return g;
  }

  std::size_t size() const {
    std::size_t s = 1;
    for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(counts[static_cast<size_t>(i)]);
    return s;
  }

  double coord(int axis, int idx) const { return origin[axis] + spacing[axis] * idx; }

  Vec node(std::size_t flat) const {
    Vec x(dim);
    for (int i = 0; i < dim; ++i) {
      std::size_t n = static_cast<std::size_t>(counts[static_cast<size_t>(i)]);
      x[i] = coord(i, static_cast<int>(flat % n));
      flat /= n;
    }
    return x;
  }

  std::size_t flatten(std::array<int, 3> idx) const {
    std::size_t f = 0, stride = 1;
    for (int i = 0; i < dim; ++i) {
      f += static_cast<std::size_t>(idx[static_cast<size_t>(i)]) * stride;
      stride *= static_cast<std::size_t>(counts[static_cast<size_t>(i)]);
    }
    return f;
  }
};

}  // namespace lcgeo
