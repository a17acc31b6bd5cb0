#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace lcgeo {

inline constexpr int kMaxDim = 3;
inline constexpr double kInf = std::numeric_limits<double>::infinity();

[[noreturn]] inline void fail(const std::string& msg) { throw std::runtime_error(msg); }

inline void require(bool ok, const char* msg) {
  if (!ok) throw std::invalid_argument(msg);
}

/// Point or direction in R^n, n <= 3. The dimension travels with the value.
struct Vec {
  std::array<double, 3> c{0.0, 0.0, 0.0};
  int dim = 0;

  Vec() = default;
  explicit Vec(int n) : dim(n) { require(n >= 0 && n <= kMaxDim, "Vec: bad dimension"); }
  Vec(std::initializer_list<double> xs) {
    require(static_cast<int>(xs.size()) <= kMaxDim, "Vec: too many entries");
    dim = static_cast<int>(xs.size());
    int i = 0;
    for (double v : xs) c[i++] = v;
  }

  static Vec zero(int n) { return Vec(n); }

  double& operator[](int i) { return c[static_cast<size_t>(i)]; }
  double operator[](int i) const { return c[static_cast<size_t>(i)]; }

  Vec operator+(const Vec& o) const {
    Vec r(dim);
    for (int i = 0; i < dim; ++i) r[i] = c[i] + o[i];
    return r;
  }
  Vec operator-(const Vec& o) const {
    Vec r(dim);
    for (int i = 0; i < dim; ++i) r[i] = c[i] - o[i];
    return r;
  }
  Vec operator*(double s) const {
    Vec r(dim);
    for (int i = 0; i < dim; ++i) r[i] = c[i] * s;
    return r;
  }
  Vec operator-() const { return (*this) * -1.0; }
  Vec& operator+=(const Vec& o) {
    for (int i = 0; i < dim; ++i) c[i] += o[i];
    return *this;
  }

  double dot(const Vec& o) const {
    double s = 0;
    for (int i = 0; i < dim; ++i) s += c[i] * o[i];
    return s;
  }
  double norm2() const { return dot(*this); }
  double norm() const { return std::sqrt(norm2()); }

  bool finite() const {
    for (int i = 0; i < dim; ++i)
      if (!std::isfinite(c[i])) return false;
    return true;
  }
};

inline Vec operator*(double s, const Vec& v) { return v * s; }

inline double dist(const Vec& a, const Vec& b) { return (a - b).norm(); }

/// Dense n x n matrix, n <= 3; mostly used for SPD quadratic forms.
struct Mat {
  std::array<double, 9> a{};
  int dim = 0;

  Mat() = default;
  explicit Mat(int n) : dim(n) { require(n >= 0 && n <= kMaxDim, "Mat: bad dimension"); }

  static Mat identity(int n) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }
  static Mat scaled_identity(int n, double s) {
    Mat m(n);
    for (int i = 0; i < n; ++i) m.at(i, i) = s;
    return m;
  }

  double& at(int i, int j) { return a[static_cast<size_t>(i * dim + j)]; }
  double at(int i, int j) const { return a[static_cast<size_t>(i * dim + j)]; }

  Vec mul(const Vec& x) const {
    Vec r(dim);
    for (int i = 0; i < dim; ++i) {
      double s = 0;
      for (int j = 0; j < dim; ++j) s += at(i, j) * x[j];
      r[i] = s;
    }
    return r;
  }

  Mat times(double s) const {
    Mat r = *this;
    for (int i = 0; i < dim * dim; ++i) r.a[static_cast<size_t>(i)] *= s;
    return r;
  }

  Mat plus(const Mat& o) const {
    Mat r = *this;
    for (int i = 0; i < dim * dim; ++i) r.a[static_cast<size_t>(i)] += o.a[static_cast<size_t>(i)];
    return r;
  }

  double quad(const Vec& x) const { return x.dot(mul(x)); }

  double det() const {
    if (dim == 1) return at(0, 0);
    if (dim == 2) return at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0);
    return at(0, 0) * (at(1, 1) * at(2, 2) - at(1, 2) * at(2, 1)) -
           at(0, 1) * (at(1, 0) * at(2, 2) - at(1, 2) * at(2, 0)) +
           at(0, 2) * (at(1, 0) * at(2, 1) - at(1, 1) * at(2, 0));
  }

  Mat inverse() const {
    double d = det();
    require(std::abs(d) > 0, "Mat: singular");
    Mat r(dim);
    if (dim == 1) {
      r.at(0, 0) = 1.0 / d;
    } else if (dim == 2) {
      r.at(0, 0) = at(1, 1) / d;
      r.at(1, 1) = at(0, 0) / d;
      r.at(0, 1) = -at(0, 1) / d;
      r.at(1, 0) = -at(1, 0) / d;
    } else {
      auto cof = [&](int i, int j) {
        int i1 = (i + 1) % 3, i2 = (i + 2) % 3, j1 = (j + 1) % 3, j2 = (j + 2) % 3;
        return at(i1, j1) * at(i2, j2) - at(i1, j2) * at(i2, j1);
      };
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) r.at(i, j) = cof(j, i) / d;
    }
    return r;
  }

  bool symmetric(double tol = 1e-12) const {
    for (int i = 0; i < dim; ++i)
      for (int j = i + 1; j < dim; ++j)
        if (std::abs(at(i, j) - at(j, i)) > tol) return false;
    return true;
  }

  // Sylvester criterion; strict positive definiteness.
  bool positive_definite(double tol = 0.0) const {
    if (dim >= 1 && at(0, 0) <= tol) return false;
    if (dim >= 2 && at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0) <= tol) return false;
    if (dim >= 3 && det() <= tol) return false;
    return true;
  }

  bool positive_semidefinite(double tol = 1e-12) const {
    if (dim >= 1 && at(0, 0) < -tol) return false;
    if (dim >= 2 && at(0, 0) * at(1, 1) - at(0, 1) * at(1, 0) < -tol) return false;
    if (dim >= 3 && det() < -tol) return false;
    return true;
  }
};

/// Eigen-decomposition of a symmetric matrix: closed form for n <= 2,
/// Jacobi sweeps for n = 3. Columns of vecs are the eigenvectors.
inline void sym_eigen(const Mat& H, std::array<double, 3>& vals, Mat& vecs) {
  const int n = H.dim;
  vecs = Mat::identity(n);
  if (n == 1) {
    vals[0] = H.at(0, 0);
    return;
  }
  if (n == 2) {
    double a = H.at(0, 0), b = H.at(0, 1), c = H.at(1, 1);
    double th = 0.5 * std::atan2(2 * b, a - c);
    double cs = std::cos(th), sn = std::sin(th);
    vals[0] = cs * cs * a + 2 * sn * cs * b + sn * sn * c;
    vals[1] = sn * sn * a - 2 * sn * cs * b + cs * cs * c;
    vecs.at(0, 0) = cs;
    vecs.at(1, 0) = sn;
    vecs.at(0, 1) = -sn;
    vecs.at(1, 1) = cs;
    return;
  }
  Mat A = H;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) off += A.at(i, j) * A.at(i, j);
    if (off < 1e-30) break;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (std::abs(A.at(i, j)) < 1e-300) continue;
        double th = 0.5 * std::atan2(2 * A.at(i, j), A.at(i, i) - A.at(j, j));
        double cs = std::cos(th), sn = std::sin(th);
        Mat R = Mat::identity(n);
        R.at(i, i) = cs;
        R.at(j, j) = cs;
        R.at(i, j) = -sn;
        R.at(j, i) = sn;
        Mat B(n), C(n), V(n);
        for (int r = 0; r < n; ++r)
          for (int cc = 0; cc < n; ++cc) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += A.at(r, k) * R.at(k, cc);
            B.at(r, cc) = s;
          }
        for (int r = 0; r < n; ++r)
          for (int cc = 0; cc < n; ++cc) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += R.at(k, r) * B.at(k, cc);
            C.at(r, cc) = s;
          }
        A = C;
        for (int r = 0; r < n; ++r)
          for (int cc = 0; cc < n; ++cc) {
            double s = 0;
            for (int k = 0; k < n; ++k) s += vecs.at(r, k) * R.at(k, cc);
            V.at(r, cc) = s;
          }
        vecs = V;
      }
  }
  for (int i = 0; i < n; ++i) vals[static_cast<size_t>(i)] = A.at(i, i);
}

/// Gaussian elimination with partial pivoting; A is row-major n x n.
inline std::vector<double> solve_dense(std::vector<double> A, std::vector<double> b) {
  const int n = static_cast<int>(b.size());
  require(static_cast<int>(A.size()) == n * n, "solve_dense: shape mismatch");
  for (int k = 0; k < n; ++k) {
    int piv = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(A[static_cast<size_t>(i * n + k)]) > std::abs(A[static_cast<size_t>(piv * n + k)])) piv = i;
    if (piv != k) {
      for (int j = 0; j < n; ++j) std::swap(A[static_cast<size_t>(k * n + j)], A[static_cast<size_t>(piv * n + j)]);
      std::swap(b[static_cast<size_t>(k)], b[static_cast<size_t>(piv)]);
    }
    double d = A[static_cast<size_t>(k * n + k)];
    require(std::abs(d) > 1e-300, "solve_dense: singular system");
    for (int i = k + 1; i < n; ++i) {
      double m = A[static_cast<size_t>(i * n + k)] / d;
      if (m == 0) continue;
      for (int j = k; j < n; ++j) A[static_cast<size_t>(i * n + j)] -= m * A[static_cast<size_t>(k * n + j)];
      b[static_cast<size_t>(i)] -= m * b[static_cast<size_t>(k)];
    }
  }
  std::vector<double> x(static_cast<size_t>(n));
  for (int i = n - 1; i >= 0; --i) {
    double s = b[static_cast<size_t>(i)];
    for (int j = i + 1; j < n; ++j) s -= A[static_cast<size_t>(i * n + j)] * x[static_cast<size_t>(j)];
    x[static_cast<size_t>(i)] = s / A[static_cast<size_t>(i * n + i)];
  }
  return x;
}

/// splitmix64; used for index-keyed deterministic jitter.
inline uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Uniform in [-1, 1], keyed by (seed, index); stable under threading.
inline double seeded_unit(uint64_t seed, uint64_t index) {
  uint64_t h = splitmix64(seed ^ splitmix64(index + 0x51ed270b0f4aULL));
  return 2.0 * (static_cast<double>(h >> 11) * 0x1.0p-53) - 1.0;
}

inline double binomial(int n, int k) {
  double r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace lcgeo
