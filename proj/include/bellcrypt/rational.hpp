#pragma once

#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>

namespace bellcrypt {

/// Non-negative exact fraction. Enumerated probabilities in this library are all
/// dyadic (products of 1/4 Born weights and 1/2 coin flips), so 64-bit parts suffice.
class Rational {
 public:
  constexpr Rational() = default;
  Rational(std::uint64_t num, std::uint64_t den) : num_(num), den_(den) {
    if (den == 0) throw std::invalid_argument("Rational with zero denominator");
    reduce();
  }

  /// Exact conversion of a double that is k / 2^m for m <= 40, or nullopt.
  static std::optional<Rational> from_dyadic(double p, double tol = 1e-12) {
    if (!(p >= -tol) || p > 1.0 + tol) return std::nullopt;
    for (int m = 0; m <= 40; ++m) {
      const double scaled = std::ldexp(p, m);
      const double rounded = std::round(scaled);
      if (std::abs(scaled - rounded) <= tol * std::ldexp(1.0, m))
        return Rational(static_cast<std::uint64_t>(rounded), std::uint64_t{1} << m);
    }
    return std::nullopt;
  }

  std::uint64_t num() const { return num_; }
  std::uint64_t den() const { return den_; }
  double value() const { return static_cast<double>(num_) / static_cast<double>(den_); }
  std::string str() const { return std::to_string(num_) + "/" + std::to_string(den_); }

  Rational operator+(const Rational& o) const {
    const std::uint64_t l = std::lcm(den_, o.den_);
    return Rational(num_ * (l / den_) + o.num_ * (l / o.den_), l);
  }
  Rational operator*(const Rational& o) const {
    // Cross-reduce first to keep the parts small.
    const std::uint64_t g1 = std::gcd(num_, o.den_), g2 = std::gcd(o.num_, den_);
    std::uint64_t n = 0, d = 0;
    if (__builtin_mul_overflow(num_ / g1, o.num_ / g2, &n) || __builtin_mul_overflow(den_ / g2, o.den_ / g1, &d))
      throw std::overflow_error("Rational product exceeds 64 bits");
    return Rational(n, d);
  }
  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw std::domain_error("Rational division by zero");
    return *this * Rational(o.den_, o.num_);
  }
  bool operator==(const Rational& o) const { return num_ == o.num_ && den_ == o.den_; }

 private:
  void reduce() {
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    const std::uint64_t g = std::gcd(num_, den_);
    num_ /= g;
    den_ /= g;
  }

  std::uint64_t num_ = 0;
  std::uint64_t den_ = 1;
};

}  // namespace bellcrypt
