#include "logderiv/combinatorics.hpp"

#include <stdexcept>

namespace logderiv {

ExactRational::ExactRational(const BigInt& num, const BigInt& den) : value_(num, den) {
  if (den == 0) throw std::domain_error("ExactRational: zero denominator");
  value_.canonicalize();
}

ExactRational ExactRational::operator-() const {
  ExactRational out;
  out.value_ = -value_;
  return out;
}

ExactRational& ExactRational::operator+=(const ExactRational& rhs) {
  value_ += rhs.value_;
  return *this;
}

ExactRational& ExactRational::operator-=(const ExactRational& rhs) {
  value_ -= rhs.value_;
  return *this;
}

ExactRational& ExactRational::operator*=(const ExactRational& rhs) {
  value_ *= rhs.value_;
  return *this;
}

ExactRational& ExactRational::operator/=(const ExactRational& rhs) {
  if (rhs.is_zero()) throw std::domain_error("ExactRational: division by zero");
  value_ /= rhs.value_;
  return *this;
}

BigInt factorial(int n) {
  if (n < 0) throw std::invalid_argument("factorial: negative argument");
  BigInt out;
  mpz_fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

BigInt double_factorial(int n) {
  if (n < -1) throw std::invalid_argument("double_factorial: argument below -1");
  if (n <= 0) return 1;
  BigInt out;
  mpz_2fac_ui(out.get_mpz_t(), static_cast<unsigned long>(n));
  return out;
}

ExactRational binomial(long n, long k) {
  if (k < 0) throw std::invalid_argument("binomial: negative lower index");
  if (n < 0 || n < k) return ExactRational(0);
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), static_cast<unsigned long>(n), static_cast<unsigned long>(k));
  return ExactRational(out);
}

ExactRational pow(const ExactRational& base, int exponent) {
  if (exponent < 0) return ExactRational(1) / pow(base, -exponent);
  BigInt num, den;
  mpz_pow_ui(num.get_mpz_t(), base.numerator().get_mpz_t(), static_cast<unsigned long>(exponent));
  mpz_pow_ui(den.get_mpz_t(), base.denominator().get_mpz_t(), static_cast<unsigned long>(exponent));
  return ExactRational(num, den);
}

BigInt multinomial(std::span<const int> parts) {
  int total = 0;
  for (int p : parts) {
    if (p < 0) throw std::invalid_argument("multinomial: negative part");
    total += p;
  }
  BigInt out = factorial(total);
  for (int p : parts) out /= factorial(p);
  return out;
}

}  // namespace logderiv
