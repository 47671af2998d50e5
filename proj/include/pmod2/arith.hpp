#pragma once

// Small exact-arithmetic helpers shared by the eta-quotient, Radu and
// certifier modules. Every quantity handled here is bounded by a few
// thousand, so 64-bit integers are ample.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <boost/rational.hpp>

namespace pmod2 {

using Rational = boost::rational<std::int64_t>;

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A documented precondition was violated by the caller.
class ContractViolation : public Error {
 public:
  using Error::Error;
};

std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t lcm(std::int64_t a, std::int64_t b);

/// Floor division and the matching nonnegative remainder.
std::int64_t floor_div(std::int64_t a, std::int64_t b);
std::int64_t mod(std::int64_t a, std::int64_t m);

/// Positive divisors of n in ascending order. n must be >= 1.
std::vector<std::int64_t> divisors(std::int64_t n);

/// Prime factorization as prime -> exponent. n must be >= 1.
std::map<std::int64_t, int> factorize(std::int64_t n);

std::vector<std::int64_t> prime_divisors(std::int64_t n);

std::int64_t euler_phi(std::int64_t n);

/// Product of the primes dividing |n| to an odd power, carrying the sign of
/// n. squarefree_kernel(-12) == -3.
std::int64_t squarefree_kernel(std::int64_t n);

/// Kronecker symbol (a/n), the extension of the Jacobi symbol to all
/// integers n. Returns -1, 0 or 1.
int kronecker(std::int64_t a, std::int64_t n);

/// Smallest integer >= r.
std::int64_t ceil(const Rational& r);
std::int64_t floor(const Rational& r);

/// "p/q", or "p" when the denominator is 1.
std::string to_string(const Rational& r);

}  // namespace pmod2
