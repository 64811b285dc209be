#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <ostream>
#include <stdexcept>

namespace starsolve {

/// Double-precision complex scalar. Non-finite components are rejected
/// at construction.
class ComplexFloat {
public:
  ComplexFloat() = default;
  ComplexFloat(double re) : ComplexFloat(re, 0.0) {}  // NOLINT(google-explicit-constructor)
  ComplexFloat(double re, double im) : z_(re, im) {
    if (!std::isfinite(re) || !std::isfinite(im))
      throw std::domain_error("ComplexFloat: non-finite component");
  }

  static ComplexFloat i() { return {0.0, 1.0}; }

  double re() const { return z_.real(); }
  double im() const { return z_.imag(); }
  const std::complex<double>& value() const { return z_; }

  bool is_zero() const { return z_ == std::complex<double>{}; }
  bool is_real() const { return z_.imag() == 0.0; }

  ComplexFloat conj() const { return wrap(std::conj(z_)); }
  ComplexFloat half() const { return wrap(z_ * 0.5); }
  double norm2() const { return std::norm(z_); }
  ComplexFloat inverse() const {
    if (is_zero()) throw std::domain_error("ComplexFloat: inverse of zero");
    return wrap(1.0 / z_);
  }
  double magnitude() const { return std::max(std::abs(z_.real()), std::abs(z_.imag())); }

  ComplexFloat operator-() const { return wrap(-z_); }
  ComplexFloat& operator+=(const ComplexFloat& o) { z_ += o.z_; return *this; }
  ComplexFloat& operator-=(const ComplexFloat& o) { z_ -= o.z_; return *this; }
  ComplexFloat& operator*=(const ComplexFloat& o) { z_ *= o.z_; return *this; }
  ComplexFloat& operator/=(const ComplexFloat& o) { return *this *= o.inverse(); }

  friend ComplexFloat operator+(ComplexFloat a, const ComplexFloat& b) { return a += b; }
  friend ComplexFloat operator-(ComplexFloat a, const ComplexFloat& b) { return a -= b; }
  friend ComplexFloat operator*(ComplexFloat a, const ComplexFloat& b) { return a *= b; }
  friend ComplexFloat operator/(ComplexFloat a, const ComplexFloat& b) { return a /= b; }
  friend bool operator==(const ComplexFloat& a, const ComplexFloat& b) { return a.z_ == b.z_; }

  friend std::ostream& operator<<(std::ostream& os, const ComplexFloat& z) { return os << z.z_; }

private:
  static ComplexFloat wrap(std::complex<double> z) {
    ComplexFloat r;
    r.z_ = z;
    return r;
  }
  std::complex<double> z_;
};

}  // namespace starsolve
