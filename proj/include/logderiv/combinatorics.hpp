#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>

#include <gmpxx.h>

namespace logderiv {

using BigInt = mpz_class;

// Exact rational number, always kept in lowest terms with a positive
// denominator.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long value) : value_(value) {}
  ExactRational(int value) : value_(static_cast<long>(value)) {}
  explicit ExactRational(const BigInt& value) : value_(value) {}
  ExactRational(const BigInt& num, const BigInt& den);

  BigInt numerator() const { return value_.get_num(); }
  BigInt denominator() const { return value_.get_den(); }

  bool is_zero() const { return sgn(value_) == 0; }
  bool is_integer() const { return value_.get_den() == 1; }
  int sign() const { return sgn(value_); }

  double to_double() const { return value_.get_d(); }
  std::string str() const { return value_.get_str(); }

  ExactRational operator-() const;
  ExactRational& operator+=(const ExactRational& rhs);
  ExactRational& operator-=(const ExactRational& rhs);
  ExactRational& operator*=(const ExactRational& rhs);
  // Throws std::domain_error on division by zero.
  ExactRational& operator/=(const ExactRational& rhs);

  friend ExactRational operator+(ExactRational lhs, const ExactRational& rhs) { return lhs += rhs; }
  friend ExactRational operator-(ExactRational lhs, const ExactRational& rhs) { return lhs -= rhs; }
  friend ExactRational operator*(ExactRational lhs, const ExactRational& rhs) { return lhs *= rhs; }
  friend ExactRational operator/(ExactRational lhs, const ExactRational& rhs) { return lhs /= rhs; }

  friend bool operator==(const ExactRational& lhs, const ExactRational& rhs) {
    return lhs.value_ == rhs.value_;
  }
  friend std::strong_ordering operator<=>(const ExactRational& lhs, const ExactRational& rhs) {
    int c = cmp(lhs.value_, rhs.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

  friend std::ostream& operator<<(std::ostream& os, const ExactRational& q) { return os << q.str(); }

 private:
  mpq_class value_;
};

// n! for n >= 0. Throws std::invalid_argument for negative n.
BigInt factorial(int n);

// n!! with (-1)!! = 0!! = 1. Throws std::invalid_argument for n < -1.
BigInt double_factorial(int n);

// C(n, k), with C(n, k) = 0 whenever n < k or n < 0.
// Throws std::invalid_argument for negative k.
ExactRational binomial(long n, long k);

// Integer power of an exact rational; negative exponents invert.
ExactRational pow(const ExactRational& base, int exponent);

// d! / prod(parts_j!) where d = sum(parts).
BigInt multinomial(std::span<const int> parts);

}  // namespace logderiv
