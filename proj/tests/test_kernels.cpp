#include <doctest.h>

#include <cmath>
#include <vector>

#include "lcgeo/kernels.hpp"
#include "lcgeo/vec.hpp"

using namespace lcgeo;
using kernels::Exec;

TEST_CASE("indexed_sum is bit-identical across execution modes") {
  for (size_t n : {0ul, 1ul, 5ul, 1024ul, 1025ul, 100000ul}) {
    std::vector<double> data(n);
    for (size_t i = 0; i < n; ++i) data[i] = seeded_unit(7, i) * std::exp(seeded_unit(11, i));
    auto term = [&](size_t i) { return data[i]; };
    double s = kernels::indexed_sum(n, term, Exec::serial);
    double p = kernels::indexed_sum(n, term, Exec::parallel);
    CHECK(s == p);  // exact, not approximate
  }
}

TEST_CASE("indexed_min matches serial scan with first-index tie break") {
  const size_t n = 50000;
  std::vector<double> data(n);
  for (size_t i = 0; i < n; ++i) data[i] = std::floor(10 * std::abs(seeded_unit(3, i)));
  auto term = [&](size_t i) { return data[i]; };
  auto s = kernels::indexed_min(n, term, Exec::serial);
  auto p = kernels::indexed_min(n, term, Exec::parallel);
  CHECK(s.first == p.first);
  CHECK(s.second == p.second);
  double best = 1e300;
  size_t arg = 0;
  for (size_t i = 0; i < n; ++i)
    if (data[i] < best) best = data[i], arg = i;
  CHECK(s.first == best);
  CHECK(s.second == arg);
}

TEST_CASE("indexed_for covers every index in both modes") {
  for (Exec mode : {Exec::serial, Exec::parallel}) {
    const size_t n = 4096;
    std::vector<int> hits(n, 0);
    kernels::indexed_for(n, [&](size_t i) { hits[i] += 1; }, mode);
    for (size_t i = 0; i < n; ++i) CHECK(hits[i] == 1);
  }
}
