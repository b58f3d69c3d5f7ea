// Forward-mode dual numbers used to assemble exact constraint Jacobians and
// Lagrangian Hessians for the collocation NLP.  Dual<N> carries a gradient of
// fixed size N; Dual2<N> additionally carries a dense symmetric Hessian.
#pragma once

#include <Eigen/Core>
#include <cmath>

namespace ares {

template <int N>
struct Dual {
  using Grad = Eigen::Matrix<double, N, 1>;

  double v{0.0};
  Grad d{Grad::Zero()};

  Dual() = default;
  Dual(double value) : v(value) {}  // NOLINT: implicit by design
  static Dual seed(double value, int slot) {
    Dual x(value);
    x.d[slot] = 1.0;
    return x;
  }
};

template <int N>
Dual<N> operator+(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v + b.v);
  r.d = a.d + b.d;
  return r;
}
template <int N>
Dual<N> operator-(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v - b.v);
  r.d = a.d - b.d;
  return r;
}
template <int N>
Dual<N> operator-(const Dual<N>& a) {
  Dual<N> r(-a.v);
  r.d = -a.d;
  return r;
}
template <int N>
Dual<N> operator*(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v * b.v);
  r.d = a.d * b.v + b.d * a.v;
  return r;
}
template <int N>
Dual<N> operator/(const Dual<N>& a, const Dual<N>& b) {
  Dual<N> r(a.v / b.v);
  r.d = (a.d - b.d * r.v) / b.v;
  return r;
}
template <int N> Dual<N> operator+(double a, const Dual<N>& b) { return Dual<N>(a) + b; }
template <int N> Dual<N> operator+(const Dual<N>& a, double b) { return a + Dual<N>(b); }
template <int N> Dual<N> operator-(double a, const Dual<N>& b) { return Dual<N>(a) - b; }
template <int N> Dual<N> operator-(const Dual<N>& a, double b) { return a - Dual<N>(b); }
template <int N> Dual<N> operator*(double a, const Dual<N>& b) { return Dual<N>(a) * b; }
template <int N> Dual<N> operator*(const Dual<N>& a, double b) { return a * Dual<N>(b); }
template <int N> Dual<N> operator/(double a, const Dual<N>& b) { return Dual<N>(a) / b; }
template <int N> Dual<N> operator/(const Dual<N>& a, double b) { return a / Dual<N>(b); }

template <int N>
Dual<N> sin(const Dual<N>& a) {
  Dual<N> r(std::sin(a.v));
  r.d = std::cos(a.v) * a.d;
  return r;
}
template <int N>
Dual<N> cos(const Dual<N>& a) {
  Dual<N> r(std::cos(a.v));
  r.d = -std::sin(a.v) * a.d;
  return r;
}
template <int N>
Dual<N> sqrt(const Dual<N>& a) {
  const double s = std::sqrt(a.v);
  Dual<N> r(s);
  r.d = a.d / (2.0 * s);
  return r;
}
template <int N>
double value(const Dual<N>& a) { return a.v; }
inline double value(double a) { return a; }

// Second-order dual: value, gradient, Hessian.
template <int N>
struct Dual2 {
  using Grad = Eigen::Matrix<double, N, 1>;
  using Hess = Eigen::Matrix<double, N, N>;

  double v{0.0};
  Grad g{Grad::Zero()};
  Hess h{Hess::Zero()};

  Dual2() = default;
  Dual2(double value) : v(value) {}  // NOLINT: implicit by design
  static Dual2 seed(double value, int slot) {
    Dual2 x(value);
    x.g[slot] = 1.0;
    return x;
  }
};

template <int N>
Dual2<N> operator+(const Dual2<N>& a, const Dual2<N>& b) {
  Dual2<N> r(a.v + b.v);
  r.g = a.g + b.g;
  r.h = a.h + b.h;
  return r;
}
template <int N>
Dual2<N> operator-(const Dual2<N>& a, const Dual2<N>& b) {
  Dual2<N> r(a.v - b.v);
  r.g = a.g - b.g;
  r.h = a.h - b.h;
  return r;
}
template <int N>
Dual2<N> operator-(const Dual2<N>& a) {
  Dual2<N> r(-a.v);
  r.g = -a.g;
  r.h = -a.h;
  return r;
}
template <int N>
Dual2<N> operator*(const Dual2<N>& a, const Dual2<N>& b) {
  Dual2<N> r(a.v * b.v);
  r.g = a.g * b.v + b.g * a.v;
  r.h = a.h * b.v + b.h * a.v + a.g * b.g.transpose() + b.g * a.g.transpose();
  return r;
}
template <int N>
Dual2<N> inverse(const Dual2<N>& b) {
  const double iv = 1.0 / b.v;
  Dual2<N> r(iv);
  r.g = -b.g * (iv * iv);
  r.h = -b.h * (iv * iv) + (2.0 * iv * iv * iv) * (b.g * b.g.transpose());
  return r;
}
template <int N>
Dual2<N> operator/(const Dual2<N>& a, const Dual2<N>& b) { return a * inverse(b); }
template <int N> Dual2<N> operator+(double a, const Dual2<N>& b) { return Dual2<N>(a) + b; }
template <int N> Dual2<N> operator+(const Dual2<N>& a, double b) { return a + Dual2<N>(b); }
template <int N> Dual2<N> operator-(double a, const Dual2<N>& b) { return Dual2<N>(a) - b; }
template <int N> Dual2<N> operator-(const Dual2<N>& a, double b) { return a - Dual2<N>(b); }
template <int N> Dual2<N> operator*(double a, const Dual2<N>& b) { return Dual2<N>(a) * b; }
template <int N> Dual2<N> operator*(const Dual2<N>& a, double b) { return a * Dual2<N>(b); }
template <int N> Dual2<N> operator/(double a, const Dual2<N>& b) { return Dual2<N>(a) / b; }
template <int N> Dual2<N> operator/(const Dual2<N>& a, double b) { return a / Dual2<N>(b); }

template <int N>
Dual2<N> sin(const Dual2<N>& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  Dual2<N> r(s);
  r.g = c * a.g;
  r.h = c * a.h - s * (a.g * a.g.transpose());
  return r;
}
template <int N>
Dual2<N> cos(const Dual2<N>& a) {
  const double s = std::sin(a.v), c = std::cos(a.v);
  Dual2<N> r(c);
  r.g = -s * a.g;
  r.h = -s * a.h - c * (a.g * a.g.transpose());
  return r;
}
template <int N>
Dual2<N> sqrt(const Dual2<N>& a) {
  const double s = std::sqrt(a.v);
  Dual2<N> r(s);
  r.g = a.g / (2.0 * s);
  r.h = a.h / (2.0 * s) - (a.g * a.g.transpose()) / (4.0 * s * s * s);
  return r;
}
template <int N>
double value(const Dual2<N>& a) { return a.v; }

}  // namespace ares
