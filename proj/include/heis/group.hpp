#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "heis/errors.hpp"
#include "heis/scalar.hpp"

namespace heis {

/// Point (x, y, t) of H^n. S is double for numeric points, Scalar for exact
/// rational points and RationalFn for symbolic points.
template <class S>
struct Point {
  std::vector<S> x;
  std::vector<S> y;
  S t{};

  Point() = default;
  Point(std::vector<S> xs, std::vector<S> ys, S tv) : x(std::move(xs)), y(std::move(ys)), t(std::move(tv)) {
    if (x.size() != y.size() || x.empty()) throw DimensionMismatch("point needs n >= 1 x and y coordinates");
  }
  static Point origin(int n) { return Point(std::vector<S>(static_cast<std::size_t>(n)), std::vector<S>(static_cast<std::size_t>(n)), S{}); }
  /// From the flat coordinate list (x1..xn, y1..yn, t).
  static Point from_coords(std::span<const S> coords) {
    if (coords.size() % 2 == 0) throw DimensionMismatch("coordinate list must have odd length 2n+1");
    std::size_t n = coords.size() / 2;
    return Point(std::vector<S>(coords.begin(), coords.begin() + static_cast<std::ptrdiff_t>(n)),
                 std::vector<S>(coords.begin() + static_cast<std::ptrdiff_t>(n), coords.end() - 1), coords.back());
  }

  int n() const { return static_cast<int>(x.size()); }
  std::vector<S> coords() const {
    std::vector<S> out(x);
    out.insert(out.end(), y.begin(), y.end());
    out.push_back(t);
    return out;
  }

  friend bool operator==(const Point&, const Point&) = default;
};

/// Coefficients of W = sum a_j X_j + b_j Y_j + c T in the Lie algebra basis at the origin.
template <class S>
struct LieVector {
  std::vector<S> a;
  std::vector<S> b;
  S c{};

  int n() const { return static_cast<int>(a.size()); }
  friend bool operator==(const LieVector&, const LieVector&) = default;
};

/// (x,y,t)*(x',y',t') = (x+x', y+y', t+t' - 2x.y' + 2x'.y).
template <class S>
Point<S> group_mul(const Point<S>& p, const Point<S>& q) {
  if (p.n() != q.n()) throw DimensionMismatch("group_mul: points of different dimension");
  Point<S> r = p;
  S cross{};
  for (std::size_t j = 0; j < p.x.size(); ++j) {
    r.x[j] = p.x[j] + q.x[j];
    r.y[j] = p.y[j] + q.y[j];
    cross = cross + (q.x[j] * p.y[j] - p.x[j] * q.y[j]);
  }
  r.t = p.t + q.t + cross + cross;
  return r;
}

template <class S>
Point<S> group_inv(const Point<S>& p) {
  Point<S> r = p;
  for (auto& v : r.x) v = -v;
  for (auto& v : r.y) v = -v;
  r.t = -r.t;
  return r;
}

/// Exponential coordinates coincide with the model coordinates.
template <class S>
Point<S> exp(const LieVector<S>& w) {
  if (w.a.size() != w.b.size()) throw DimensionMismatch("Lie vector a/b size mismatch");
  return Point<S>(w.a, w.b, w.c);
}

/// omega(z, z') = Im(sum_j z_j conj(z'_j)).
double symplectic_form(std::span<const std::complex<double>> z, std::span<const std::complex<double>> w);
Scalar symplectic_form(std::span<const Scalar> z, std::span<const Scalar> w);

/// Complex model of a point: (z, t) with z_j = x_j + i y_j.
struct ComplexPoint {
  std::vector<Scalar> z;
  Scalar t;
  friend bool operator==(const ComplexPoint&, const ComplexPoint&) = default;
};

ComplexPoint to_complex(const Point<Scalar>& p);
Point<Scalar> from_complex(const ComplexPoint& p);
/// (z,t)*(z',t') = (z+z', t+t'+2 omega(z,z')).
ComplexPoint group_mul(const ComplexPoint& p, const ComplexPoint& q);

}  // namespace heis
