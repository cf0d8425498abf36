#include "logderiv/residue.hpp"

#include <cstdint>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace logderiv {
namespace {

// Expanding at infinity with w = 1/u,
//   u^r (u-1)^{-(K+E)} (u+1)^{-E} = u^{deg} (1-w)^{-(K+E)} (1+w)^{-E},
// so the sum of the finite residues is the coefficient of w^{deg+1}.
ExactRational evaluate(const IntegralSpec& spec) {
  const int m = degree(spec) + 1;
  if (m < 0) return ExactRational(0);
  const int p = spec.K + spec.E;
  ExactRational sum(0);
  for (int b = 0; b <= m; ++b) {
    const int a = m - b;
    ExactRational term = binomial(p - 1 + a, a);
    if (spec.E == 0) {
      if (b != 0) continue;
    } else {
      term *= binomial(spec.E - 1 + b, b);
      if (b % 2 == 1) term = -term;
    }
    sum += term;
  }
  return sum * pow(ExactRational(2), spec.E);
}

std::uint64_t memo_key(const IntegralSpec& spec) {
  auto r = static_cast<std::uint64_t>(static_cast<std::uint32_t>(spec.r));
  auto e = static_cast<std::uint64_t>(static_cast<std::uint16_t>(spec.E));
  auto k = static_cast<std::uint64_t>(static_cast<std::uint16_t>(spec.K));
  return (r << 32) | (e << 16) | k;
}

}  // namespace

void IntegralSpec::validate() const {
  if (E < 0) throw std::invalid_argument("IntegralSpec: E must be nonnegative");
  if (K < 1) throw std::invalid_argument("IntegralSpec: K must be positive");
  if (E > 0xffff || K > 0xffff) throw std::invalid_argument("IntegralSpec: E or K too large");
}

int degree(const IntegralSpec& spec) { return spec.r - spec.K - 2 * spec.E; }

ExactRational integral_value_t0(const IntegralSpec& spec) {
  spec.validate();
  if (degree(spec) <= -2) return ExactRational(0);

  static std::mutex mutex;
  static std::unordered_map<std::uint64_t, ExactRational> memo;
  const auto key = memo_key(spec);
  {
    std::lock_guard<std::mutex> lock(mutex);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
  }
  ExactRational value = evaluate(spec);
  std::lock_guard<std::mutex> lock(mutex);
  memo.emplace(key, value);
  return value;
}

std::pair<IntegralSpec, IntegralSpec> recursion_split(const IntegralSpec& spec) {
  spec.validate();
  if (spec.E == 0) throw std::invalid_argument("recursion_split: requires E >= 1");
  return {IntegralSpec{spec.r - 2, spec.E - 1, spec.K}, IntegralSpec{spec.r - 2, spec.E, spec.K}};
}

IntegralSpec t_derivative(const IntegralSpec& spec) {
  spec.validate();
  return IntegralSpec{spec.r, spec.E + 1, spec.K};
}

}  // namespace logderiv
