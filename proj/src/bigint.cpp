#include "cslab/bigint.hpp"

#include "cslab/error.hpp"

#include <algorithm>
#include <mutex>
#include <vector>

namespace cslab {

BigInt factorial(std::uint64_t n) {
  static std::mutex mutex;
  static std::vector<BigInt> memo{1};
  std::lock_guard lock(mutex);
  while (memo.size() <= n) memo.push_back(memo.back() * memo.size());
  return memo[n];
}

BigInt binomial(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  BigInt result = 1;
  for (std::uint64_t i = 1; i <= k; ++i) {
    result *= n - k + i;
    result /= i;
  }
  return result;
}

BigInt power(const BigInt& base, std::uint64_t exp) {
  BigInt result = 1;
  BigInt b = base;
  while (exp) {
    if (exp & 1) result *= b;
    exp >>= 1;
    if (exp) b *= b;
  }
  return result;
}

std::string to_string(const BigInt& value) { return value.str(); }

std::string to_string(const Rational& value) {
  const BigInt num = boost::multiprecision::numerator(value);
  const BigInt den = boost::multiprecision::denominator(value);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

double to_double(const Rational& value) { return value.convert_to<double>(); }

}  // namespace cslab
