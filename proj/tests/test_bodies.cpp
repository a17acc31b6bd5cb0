#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "lcgeo/body.hpp"
#include "lcgeo/measure.hpp"

using namespace lcgeo;

namespace {

ConvexBody unit_disk() { return make_ball(Vec{0, 0}, 1); }
ConvexBody square2() { return make_box(Vec{-1, -1}, Vec{1, 1}); }

Vec angle_dir(double a) { return Vec{std::cos(a), std::sin(a)}; }

}  // namespace

TEST_CASE("support function examples") {
  CHECK(support_function(unit_disk(), Vec{3, 4}) == doctest::Approx(5).epsilon(1e-14));
  ConvexBody seg = make_interval(-1, 2);
  CHECK(support_function(seg, Vec{1}) == 2);
  CHECK(support_function(seg, Vec{-1}) == 1);
  CHECK(support_function(square2(), Vec{1, 1}) == 2);
  // positive homogeneity
  CHECK(support_function(square2(), Vec{2.5, 2.5}) == doctest::Approx(5).epsilon(1e-14));
}

TEST_CASE("support function of unbounded boxes") {
  ConvexBody half = make_box(Vec{0}, Vec{kInf});
  CHECK(support_function(half, Vec{-1}) == 0);
  CHECK(support_function(half, Vec{1}) == kInf);
  ConvexBody orthant = make_box(Vec{0, 0}, Vec{kInf, kInf});
  CHECK(support_function(orthant, Vec{-1, 0}) == 0);
  CHECK(support_function(orthant, Vec{-1, -2}) == 0);
  CHECK(support_function(orthant, Vec{0.5, -1}) == kInf);
}

TEST_CASE("gauge norm examples") {
  CHECK(gauge_norm(unit_disk(), Vec{0.3, -0.4}) == doctest::Approx(0.5).epsilon(1e-14));
  ConvexBody seg = make_interval(-1, 2);
  CHECK(gauge_norm(seg, Vec{4}) == doctest::Approx(2).epsilon(1e-14));
  CHECK(gauge_norm(seg, Vec{-4}) == doctest::Approx(4).epsilon(1e-14));
  // membership characterization
  CHECK(gauge_norm(square2(), Vec{1, 1}) == doctest::Approx(1).epsilon(1e-14));
  CHECK(gauge_norm(square2(), Vec{0.999, 0.2}) < 1);
}

TEST_CASE("gauge-support duality on random directions") {
  ConvexBody L = make_polytope(2, {Vec{-1, -0.5}, Vec{2, -0.5}, Vec{0.5, 1.5}, Vec{-0.8, 0.9}});
  for (int k = 0; k < 64; ++k) {
    Vec th = angle_dir(0.1 + 2 * M_PI * k / 64.0);
    // h_L(th) = sup over boundary samples of <x, th> / max(gauge, tiny)
    double sup = -kInf;
    for (int j = 0; j < 3000; ++j) {
      Vec dir = angle_dir(2 * M_PI * j / 3000.0);
      Vec x = dir * (1.0 / gauge_norm(L, dir));  // boundary point
      sup = std::max(sup, x.dot(th));
    }
    CHECK(sup == doctest::Approx(support_function(L, th)).epsilon(2e-5));
  }
}

TEST_CASE("minkowski sums") {
  ConvexBody s = minkowski_sum(make_interval(0, 1), make_interval(0, 1));
  CHECK(support_function(s, Vec{1}) == doctest::Approx(2));
  CHECK(support_function(s, Vec{-1}) == doctest::Approx(0));

  ConvexBody sq_disk = minkowski_sum(square2(), unit_disk());
  for (int k = 0; k < 100; ++k) {
    Vec th = angle_dir(2 * M_PI * k / 100.0);
    CHECK(support_function(sq_disk, th) ==
          doctest::Approx(support_function(square2(), th) + 1.0).epsilon(1e-13));
  }

  ConvexBody tri = make_polytope(2, {Vec{0, 0}, Vec{1, 0}, Vec{0, 1}});
  ConvexBody dbl = minkowski_sum(tri, tri);
  const auto* p = std::get_if<Polytope>(&dbl.form());
  REQUIRE(p != nullptr);
  CHECK(p->vertices.size() == 3);
  CHECK(volume(dbl) == doctest::Approx(4 * volume(tri)).epsilon(1e-13));

  CHECK(std::get_if<Ball>(&minkowski_sum(unit_disk(), make_ball(Vec{1, 0}, 2)).form()) != nullptr);
}

TEST_CASE("support additivity, 1000 random directions, exact") {
  ConvexBody K = make_polytope(2, {Vec{0, 0}, Vec{2, 0.3}, Vec{1, 2}, Vec{-0.5, 1}});
  ConvexBody L = unit_disk();
  ConvexBody S = minkowski_sum(K, L);
  for (int k = 0; k < 1000; ++k) {
    Vec th = angle_dir(2 * M_PI * (k + 0.37) / 1000.0) * (0.5 + (k % 7));
    double lhs = support_function(S, th);
    double rhs = support_function(K, th) + support_function(L, th);
    CHECK(std::abs(lhs - rhs) <= 1e-12 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_CASE("volumes") {
  CHECK(volume(make_box(Vec{0, 0}, Vec{1, 1})) == 1);
  CHECK(volume(unit_disk()) == doctest::Approx(M_PI).epsilon(1e-9));
  // Steiner: |[-1,1]^2 + t disk| = 4 + 8t + pi t^2 at t = 1
  ConvexBody sum = minkowski_sum(square2(), unit_disk());
  CHECK(volume(sum) == doctest::Approx(12 + M_PI).epsilon(1e-9));
  // ellipse
  Mat A(2);
  A.at(0, 0) = 4;
  A.at(1, 1) = 1;
  CHECK(volume(make_ellipsoid(Vec{0.5, -2}, A)) == doctest::Approx(2 * M_PI).epsilon(1e-12));
  // ellipse + disk via the mixed-area route against the 2D Steiner formula
  ConvexBody es = minkowski_sum(make_ellipsoid(Vec{0, 0}, A), scale_body(unit_disk(), 0.5));
  double per_e = surface_measure_total(make_ellipsoid(Vec{0, 0}, A));
  CHECK(volume(es) == doctest::Approx(2 * M_PI + 0.5 * per_e + M_PI * 0.25).epsilon(1e-8));
}

TEST_CASE("surface area measures of polytopes") {
  DiscreteMeasure m1 = surface_area_measure(make_interval(0, 1));
  REQUIRE(m1.atoms.size() == 2);
  CHECK(m1.total_mass() == 2.0);

  DiscreteMeasure m2 = surface_area_measure(make_box(Vec{-1, -1}, Vec{1, 1}));
  REQUIRE(m2.atoms.size() == 4);
  for (const auto& a : m2.atoms) CHECK(a.weight == doctest::Approx(2).epsilon(1e-13));

  ConvexBody cube = make_box(Vec{0, 0, 0}, Vec{1, 1, 1});
  DiscreteMeasure m3 = surface_area_measure(cube);
  REQUIRE(m3.atoms.size() == 6);
  for (const auto& a : m3.atoms) {
    CHECK(a.weight == doctest::Approx(1).epsilon(1e-12));
    CHECK(a.point.norm() == doctest::Approx(1).epsilon(1e-12));
  }
}

TEST_CASE("surface area measure closure: weighted normals cancel") {
  ConvexBody tri = make_polytope(2, {Vec{0, 0}, Vec{3, 0.5}, Vec{1, 2}});
  Vec s = measure_moment(surface_area_measure(tri));
  CHECK(s.norm() <= 1e-10);
  ConvexBody cube = make_polytope(
      3, {Vec{0, 0, 0}, Vec{1, 0, 0}, Vec{0, 1, 0}, Vec{0, 0, 1}, Vec{1, 1, 0}, Vec{1, 0, 1},
          Vec{0, 1, 1}, Vec{1, 1, 1}});
  CHECK(measure_moment(surface_area_measure(cube)).norm() <= 1e-10);
}

TEST_CASE("quermassintegrals") {
  SUBCASE("K = L gives W_k = |K|") {
    ConvexBody K = make_polytope(2, {Vec{0, 0}, Vec{2, 0}, Vec{2, 1}, Vec{0, 1}});
    QuermassVector q = quermassintegrals(K, K);
    for (double w : q.w) CHECK(w == doctest::Approx(2).epsilon(1e-9));
  }
  SUBCASE("square-disk Steiner coefficients") {
    QuermassVector q = quermassintegrals(square2(), unit_disk());
    CHECK(q.w[0] == doctest::Approx(4).epsilon(1e-9));
    CHECK(q.w[1] == doctest::Approx(4).epsilon(1e-9));
    CHECK(q.w[2] == doctest::Approx(M_PI).epsilon(1e-9));
    CHECK(q.fit_residual <= 1e-8);
    CHECK(q.heldout_residual <= 1e-8);
  }
  SUBCASE("1D intervals") {
    QuermassVector q = quermassintegrals(make_interval(0, 1), make_interval(-1, 1));
    CHECK(q.w[0] == doctest::Approx(1).epsilon(1e-12));
    CHECK(q.w[1] == doctest::Approx(2).epsilon(1e-12));
  }
  SUBCASE("3D cube and ball") {
    ConvexBody cube = make_box(Vec{0, 0, 0}, Vec{1, 1, 1});
    ConvexBody ball = make_ball(Vec{0, 0, 0}, 1);
    QuermassVector q = quermassintegrals(cube, ball);
    CHECK(q.w[0] == doctest::Approx(1).epsilon(1e-8));
    CHECK(q.w[1] == doctest::Approx(2).epsilon(1e-8));          // area 6 / binom(3,1)... 6/3
    CHECK(q.w[2] == doctest::Approx(M_PI).epsilon(1e-8));       // 3 pi / binom(3,2)
    CHECK(q.w[3] == doctest::Approx(4 * M_PI / 3).epsilon(1e-8));
  }
}

TEST_CASE("steiner consistency at a held-out node") {
  ConvexBody K = make_polytope(2, {Vec{0, 0}, Vec{1.5, 0.2}, Vec{1.1, 1.3}, Vec{-0.2, 0.8}});
  QuermassVector q = quermassintegrals(K, unit_disk());
  double direct = volume(minkowski_sum(K, scale_body(unit_disk(), 0.5)));
  double poly = 0;
  for (size_t k = 0; k < q.w.size(); ++k)
    poly += binomial(2, static_cast<int>(k)) * q.w[k] * std::pow(0.5, static_cast<double>(k));
  CHECK(std::abs(poly - direct) <= 1e-8 * std::max(1.0, direct));
}

TEST_CASE("anisotropic perimeter examples") {
  CHECK(anisotropic_perimeter(make_interval(0, 1), make_interval(-1, 1)) == doctest::Approx(2));
  CHECK(anisotropic_perimeter(make_interval(0, 1), make_interval(-1, 2)) == doctest::Approx(3));
  ConvexBody sq = make_box(Vec{-1, -1}, Vec{1, 1});
  CHECK(anisotropic_perimeter(sq, unit_disk()) == doctest::Approx(8).epsilon(1e-12));
  // disk against an asymmetric box: smooth measure body route
  ConvexBody Lbox = make_box(Vec{-1, -1}, Vec{2, 1});
  double per = anisotropic_perimeter(unit_disk(), Lbox);
  CHECK(per == doctest::Approx(10).epsilon(1e-8));
}

TEST_CASE("minkowski first variation quotients decrease to n W_1") {
  ConvexBody K = make_polytope(2, {Vec{0, 0}, Vec{2, 0}, Vec{2, 1}, Vec{0, 1}});
  ConvexBody L = unit_disk();
  double target = anisotropic_perimeter(K, L);
  CHECK(target == doctest::Approx(2 * quermassintegrals(K, L).w[1]).epsilon(1e-10));
  double prev = kInf;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    double quot = (volume(minkowski_sum(K, scale_body(L, t))) - volume(K)) / t;
    CHECK(quot >= target - 1e-9);
    CHECK(quot <= prev + 1e-12);  // one-sided, monotone from above
    prev = quot;
  }
  CHECK(prev == doctest::Approx(target).epsilon(1e-3));
}

TEST_CASE("hull canonicalization is input-order independent") {
  std::vector<Vec> pts{Vec{0, 0}, Vec{1, 0}, Vec{1, 1}, Vec{0, 1}, Vec{0.5, 0.5}, Vec{0.2, 0.9}};
  ConvexBody a = make_polytope(2, pts);
  std::reverse(pts.begin(), pts.end());
  ConvexBody b = make_polytope(2, pts);
  const auto* pa = std::get_if<Polytope>(&a.form());
  const auto* pb = std::get_if<Polytope>(&b.form());
  REQUIRE(pa->vertices.size() == 4);
  REQUIRE(pb->vertices.size() == 4);
  for (size_t i = 0; i < 4; ++i) CHECK(dist(pa->vertices[i], pb->vertices[i]) == 0);
}

TEST_CASE("degenerate bodies") {
  ConvexBody pt = make_point(Vec{0.5, -1});
  CHECK(support_function(pt, Vec{2, 1}) == doctest::Approx(0));
  CHECK(volume(pt) == 0);
  ConvexBody seg = make_polytope(2, {Vec{0, 0}, Vec{1, 1}, Vec{0.5, 0.5}});
  const auto* p = std::get_if<Polytope>(&seg.form());
  CHECK(p->vertices.size() == 2);
  CHECK_THROWS(body_facets(seg));
  CHECK_THROWS(quermassintegrals(make_box(Vec{0}, Vec{kInf}), make_interval(0, 1)));
}

TEST_CASE("project_onto") {
  CHECK(project_onto(make_interval(0, 1), Vec{3})[0] == 1);
  Vec p = project_onto(make_box(Vec{-1, -1}, Vec{1, 1}), Vec{3, 0.5});
  CHECK(p[0] == 1);
  CHECK(p[1] == 0.5);
  Vec q = project_onto(unit_disk(), Vec{0, -4});
  CHECK(q[1] == doctest::Approx(-1));
  Vec r = project_onto(make_polytope(2, {Vec{0, 0}, Vec{2, 0}, Vec{0, 2}}), Vec{2, 2});
  CHECK(r[0] == doctest::Approx(1).epsilon(1e-12));
  CHECK(r[1] == doctest::Approx(1).epsilon(1e-12));
}

TEST_CASE("mixed surface integral symmetry") {
  ConvexBody K = make_polytope(2, {Vec{0, 0}, Vec{2, 0}, Vec{1, 1.5}});
  ConvexBody E = make_ellipsoid(Vec{0, 0}, Mat::scaled_identity(2, 2.25));
  double a = mixed_surface_integral(K, E);
  double b = mixed_surface_integral(E, K);
  CHECK(a == doctest::Approx(b).epsilon(1e-7));
}
