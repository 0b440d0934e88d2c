#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <string>

namespace cslab {

using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

BigInt factorial(std::uint64_t n);
BigInt binomial(std::uint64_t n, std::uint64_t k);
BigInt power(const BigInt& base, std::uint64_t exp);

// Fractions print as "p/q" in lowest terms, integers as "p".
std::string to_string(const BigInt& value);
std::string to_string(const Rational& value);

double to_double(const Rational& value);

}  // namespace cslab
