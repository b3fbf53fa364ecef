#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <cmath>

namespace wkb {

// Truncated Taylor expansion c[0] + c[1] s + ... + c[n-1] s^(n-1) about a
// fixed point. Arithmetic on jets propagates derivatives exactly (up to
// rounding), which is how every chain-rule expansion in this library is done.
class Jet {
 public:
  static constexpr int kMaxTerms = 6;

  Jet() = default;
  explicit Jet(int terms) : n_(terms) { assert(terms >= 1 && terms <= kMaxTerms); }

  static Jet constant(double v, int terms) {
    Jet j(terms);
    j.c_[0] = v;
    return j;
  }

  int terms() const { return n_; }
  double operator[](int k) const { return c_[k]; }
  double& operator[](int k) { return c_[k]; }

  double value() const { return c_[0]; }

  // k-th derivative at the expansion point.
  double derivative_at(int k) const {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return c_[k] * f;
  }

  // Jet of d/dx; loses one term.
  Jet derivative() const {
    assert(n_ >= 2);
    Jet d(n_ - 1);
    for (int k = 0; k + 1 < n_; ++k) d.c_[k] = (k + 1) * c_[k + 1];
    return d;
  }

  Jet truncated(int terms) const {
    assert(terms <= n_);
    Jet t(terms);
    std::copy_n(c_.begin(), terms, t.c_.begin());
    return t;
  }

  friend Jet operator+(const Jet& a, const Jet& b) {
    Jet r(std::min(a.n_, b.n_));
    for (int k = 0; k < r.n_; ++k) r.c_[k] = a.c_[k] + b.c_[k];
    return r;
  }
  friend Jet operator-(const Jet& a, const Jet& b) {
    Jet r(std::min(a.n_, b.n_));
    for (int k = 0; k < r.n_; ++k) r.c_[k] = a.c_[k] - b.c_[k];
    return r;
  }
  friend Jet operator*(double s, const Jet& a) {
    Jet r = a;
    for (int k = 0; k < r.n_; ++k) r.c_[k] *= s;
    return r;
  }
  friend Jet operator*(const Jet& a, double s) { return s * a; }
  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r(std::min(a.n_, b.n_));
    for (int k = 0; k < r.n_; ++k) {
      double acc = 0.0;
      for (int j = 0; j <= k; ++j) acc += a.c_[j] * b.c_[k - j];
      r.c_[k] = acc;
    }
    return r;
  }
  friend Jet operator/(const Jet& u, const Jet& v) {
    Jet q(std::min(u.n_, v.n_));
    for (int k = 0; k < q.n_; ++k) {
      double acc = u.c_[k];
      for (int j = 1; j <= k; ++j) acc -= v.c_[j] * q.c_[k - j];
      q.c_[k] = acc / v.c_[0];
    }
    return q;
  }

  // g^r for g(0) > 0.
  friend Jet pow(const Jet& g, double r) {
    Jet f(g.n_);
    f.c_[0] = std::pow(g.c_[0], r);
    for (int k = 1; k < g.n_; ++k) {
      double acc = 0.0;
      for (int j = 1; j <= k; ++j) acc += (r * j - (k - j)) * g.c_[j] * f.c_[k - j];
      f.c_[k] = acc / (k * g.c_[0]);
    }
    return f;
  }

  friend Jet exp(const Jet& g) {
    Jet f(g.n_);
    f.c_[0] = std::exp(g.c_[0]);
    for (int k = 1; k < g.n_; ++k) {
      double acc = 0.0;
      for (int j = 1; j <= k; ++j) acc += j * g.c_[j] * f.c_[k - j];
      f.c_[k] = acc / k;
    }
    return f;
  }

 private:
  std::array<double, kMaxTerms> c_{};
  int n_ = 1;
};

}  // namespace wkb
