#pragma once

#include <array>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace qaff {

// Fixed-capacity real tuple; every group, dual and vector element is stored as one.
struct Coords {
  static constexpr int kMax = 4;
  std::array<double, kMax> c{};
  int n = 0;

  Coords() = default;
  Coords(std::initializer_list<double> xs) {
    if (xs.size() > kMax) throw std::invalid_argument("Coords: too many coordinates");
    for (double x : xs) c[n++] = x;
  }
  static Coords zeros(int dim) {
    Coords r;
    r.n = dim;
    return r;
  }

  int size() const { return n; }
  double& operator[](int i) { return c[i]; }
  double operator[](int i) const { return c[i]; }

  bool finite() const {
    for (int i = 0; i < n; ++i)
      if (!std::isfinite(c[i])) return false;
    return true;
  }
  std::string str() const;
};

inline Coords operator+(const Coords& a, const Coords& b) {
  Coords r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] += b.c[i];
  return r;
}
inline Coords operator-(const Coords& a, const Coords& b) {
  Coords r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] -= b.c[i];
  return r;
}
inline Coords operator-(const Coords& a) {
  Coords r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] = -r.c[i];
  return r;
}
inline Coords operator*(double s, const Coords& a) {
  Coords r = a;
  for (int i = 0; i < a.n; ++i) r.c[i] *= s;
  return r;
}

// max_i |a_i - b_i| / (1 + |a_i| + |b_i|)
inline double coord_distance(const Coords& a, const Coords& b) {
  if (a.n != b.n) return INFINITY;
  double d = 0.0;
  for (int i = 0; i < a.n; ++i) {
    double e = std::abs(a.c[i] - b.c[i]) / (1.0 + std::abs(a.c[i]) + std::abs(b.c[i]));
    if (!(e <= d)) d = e;  // propagates NaN as a maximal error
  }
  return d;
}

inline double dot(const Coords& a, const Coords& b) {
  double s = 0.0;
  for (int i = 0; i < a.n; ++i) s += a.c[i] * b.c[i];
  return s;
}

// Strongly typed wrappers so a dual vector cannot be passed where a Q element is expected.
template <class Tag>
struct Tagged {
  Coords c;

  Tagged() = default;
  explicit Tagged(Coords x) : c(x) {}
  Tagged(std::initializer_list<double> xs) : c(xs) {}

  int size() const { return c.n; }
  double operator[](int i) const { return c[i]; }
  double& operator[](int i) { return c[i]; }
  bool finite() const { return c.finite(); }
  std::string str() const { return c.str(); }
};

struct QTag;
struct VTag;
struct DualTag;
using QElem = Tagged<QTag>;
using VElem = Tagged<VTag>;
using DualElem = Tagged<DualTag>;

template <class T>
concept LinearElem = std::same_as<T, VElem> || std::same_as<T, DualElem>;

template <LinearElem T>
T operator+(const T& a, const T& b) { return T(a.c + b.c); }
template <LinearElem T>
T operator-(const T& a, const T& b) { return T(a.c - b.c); }
template <LinearElem T>
T operator-(const T& a) { return T(-a.c); }
template <LinearElem T>
T operator*(double s, const T& a) { return T(s * a.c); }

template <class Tag>
double distance(const Tagged<Tag>& a, const Tagged<Tag>& b) { return coord_distance(a.c, b.c); }

}  // namespace qaff
