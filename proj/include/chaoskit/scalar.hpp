#pragma once

#include <gmpxx.h>

#include <complex>
#include <stdexcept>
#include <string>

#include "chaoskit/numeric.hpp"

namespace chaoskit {

/// Arithmetic mode of a scalar (and, by extension, of every kernel built
/// from scalars).  Exact scalars are Gaussian rationals (re + im*i with
/// arbitrary-precision rational parts); floating scalars are complex doubles.
enum class Mode { exact, floating };

inline const char* mode_name(Mode m) { return m == Mode::exact ? "exact" : "float"; }

/// A complex number in one of the two arithmetic modes.
///
/// Mixed-mode arithmetic is rejected with std::invalid_argument rather than
/// silently coerced: an exact computation that absorbed a double would report
/// results as exact while no longer being so.
class Scalar {
 public:
  Scalar() : mode_(Mode::exact) {}
  explicit Scalar(Mode m) : mode_(m) {}

  static Scalar zero(Mode m) { return Scalar(m); }

  static Scalar from_exact(mpq_class re, mpq_class im = 0) {
    Scalar s(Mode::exact);
    s.re_ = std::move(re);
    s.im_ = std::move(im);
    s.re_.canonicalize();
    s.im_.canonicalize();
    return s;
  }

  static Scalar from_double(double re, double im = 0.0) {
    Scalar s(Mode::floating);
    s.f_ = {re, im};
    return s;
  }

  static Scalar integer(long v, Mode m = Mode::exact) {
    return m == Mode::exact ? from_exact(mpq_class(v)) : from_double(static_cast<double>(v));
  }

  static Scalar rational(long num, long den, Mode m = Mode::exact) {
    if (den == 0) throw std::invalid_argument("Scalar: zero denominator");
    if (m == Mode::exact) {
      mpq_class q(num, den);
      q.canonicalize();
      return from_exact(std::move(q));
    }
    return from_double(static_cast<double>(num) / static_cast<double>(den));
  }

  static Scalar one(Mode m) { return integer(1, m); }

  /// The imaginary unit.
  static Scalar i_unit(Mode m) {
    return m == Mode::exact ? from_exact(0, 1) : from_double(0.0, 1.0);
  }

  /// i^k for any integer k (k may be negative).
  static Scalar i_power(long k, Mode m) {
    switch (((k % 4) + 4) % 4) {
      case 0: return integer(1, m);
      case 1: return i_unit(m);
      case 2: return integer(-1, m);
      default: return m == Mode::exact ? from_exact(0, -1) : from_double(0.0, -1.0);
    }
  }

  Mode mode() const { return mode_; }

  bool is_zero() const {
    return mode_ == Mode::exact ? (re_ == 0 && im_ == 0) : (f_.real() == 0.0 && f_.imag() == 0.0);
  }

  Scalar operator-() const {
    Scalar s(mode_);
    if (mode_ == Mode::exact) {
      s.re_ = -re_;
      s.im_ = -im_;
    } else {
      s.f_ = -f_;
    }
    return s;
  }

  Scalar& operator+=(const Scalar& o) {
    check_same_mode(o);
    if (mode_ == Mode::exact) {
      re_ += o.re_;
      im_ += o.im_;
    } else {
      f_ += o.f_;
    }
    return *this;
  }

  Scalar& operator-=(const Scalar& o) {
    check_same_mode(o);
    if (mode_ == Mode::exact) {
      re_ -= o.re_;
      im_ -= o.im_;
    } else {
      f_ -= o.f_;
    }
    return *this;
  }

  Scalar& operator*=(const Scalar& o) {
    check_same_mode(o);
    if (mode_ == Mode::exact) {
      mpq_class re = re_ * o.re_ - im_ * o.im_;
      mpq_class im = re_ * o.im_ + im_ * o.re_;
      re.canonicalize();
      im.canonicalize();
      re_ = std::move(re);
      im_ = std::move(im);
    } else {
      f_ *= o.f_;
    }
    return *this;
  }

  friend Scalar operator+(Scalar a, const Scalar& b) { return a += b; }
  friend Scalar operator-(Scalar a, const Scalar& b) { return a -= b; }
  friend Scalar operator*(Scalar a, const Scalar& b) { return a *= b; }

  /// Multiply by an exact rational weight.  Weights arise from combinatorics
  /// (factorials, binomials, symmetrization counts) and are mode-agnostic:
  /// in floating mode the weight is converted to double.
  Scalar scaled(const mpq_class& w) const {
    if (mode_ == Mode::exact) {
      mpq_class re = re_ * w, im = im_ * w;
      re.canonicalize();
      im.canonicalize();
      return from_exact(std::move(re), std::move(im));
    }
    return from_double(f_.real() * w.get_d(), f_.imag() * w.get_d());
  }

  Scalar conj() const {
    return mode_ == Mode::exact ? from_exact(re_, -im_) : from_double(f_.real(), -f_.imag());
  }

  Scalar times_i() const {
    return mode_ == Mode::exact ? from_exact(-im_, re_) : from_double(-f_.imag(), f_.real());
  }

  /// Real part as a scalar of the same mode.
  Scalar real_part() const {
    return mode_ == Mode::exact ? from_exact(re_) : from_double(f_.real());
  }

  /// Imaginary part as a scalar of the same mode.
  Scalar imag_part() const {
    return mode_ == Mode::exact ? from_exact(im_) : from_double(f_.imag());
  }

  /// Exact accessors; throw when the scalar is floating.
  const mpq_class& re_exact() const {
    require_exact();
    return re_;
  }
  const mpq_class& im_exact() const {
    require_exact();
    return im_;
  }

  std::complex<double> to_complex_double() const {
    return mode_ == Mode::exact ? std::complex<double>(re_.get_d(), im_.get_d()) : f_;
  }

  bool operator==(const Scalar& o) const {
    check_same_mode(o);
    return mode_ == Mode::exact ? (re_ == o.re_ && im_ == o.im_) : f_ == o.f_;
  }
  bool operator!=(const Scalar& o) const { return !(*this == o); }

  /// Human-readable form, e.g. "3/4", "-1/2*i", "1+2*i", "0".
  std::string str() const {
    if (mode_ == Mode::floating) {
      std::string s = std::to_string(f_.real());
      if (f_.imag() != 0.0) s += (f_.imag() > 0 ? "+" : "") + std::to_string(f_.imag()) + "*i";
      return s;
    }
    if (im_ == 0) return re_.get_str();
    std::string s;
    if (re_ != 0) s = re_.get_str();
    if (im_ > 0 && re_ != 0) s += "+";
    s += im_.get_str() + "*i";
    return s;
  }

 private:
  void check_same_mode(const Scalar& o) const {
    if (mode_ != o.mode_)
      throw std::invalid_argument("Scalar: mixed exact/floating-point arithmetic is not allowed");
  }
  void require_exact() const {
    if (mode_ != Mode::exact)
      throw std::invalid_argument("Scalar: exact accessor used on a floating-point value");
  }

  Mode mode_;
  mpq_class re_, im_;        // exact payload (mode_ == exact)
  std::complex<double> f_{};  // floating payload (mode_ == floating)
};

}  // namespace chaoskit
