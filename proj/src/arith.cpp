#include "pmod2/arith.hpp"

#include <cstdlib>
#include <numeric>

namespace pmod2 {

std::int64_t gcd(std::int64_t a, std::int64_t b) { return std::gcd(a, b); }

std::int64_t lcm(std::int64_t a, std::int64_t b) { return std::lcm(a, b); }

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + (m < 0 ? -m : m) : r;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  if (n < 1) throw ContractViolation("divisors: n must be positive");
  std::vector<std::int64_t> small, large;
  for (std::int64_t d = 1; d * d <= n; ++d) {
    if (n % d != 0) continue;
    small.push_back(d);
    if (d != n / d) large.push_back(n / d);
  }
  small.insert(small.end(), large.rbegin(), large.rend());
  return small;
}

std::map<std::int64_t, int> factorize(std::int64_t n) {
  if (n < 1) throw ContractViolation("factorize: n must be positive");
  std::map<std::int64_t, int> f;
  for (std::int64_t p = 2; p * p <= n; ++p) {
    while (n % p == 0) {
      ++f[p];
      n /= p;
    }
  }
  if (n > 1) ++f[n];
  return f;
}

std::vector<std::int64_t> prime_divisors(std::int64_t n) {
  std::vector<std::int64_t> out;
  for (const auto& [p, e] : factorize(n)) out.push_back(p);
  return out;
}

std::int64_t euler_phi(std::int64_t n) {
  std::int64_t phi = n;
  for (std::int64_t p : prime_divisors(n)) phi = phi / p * (p - 1);
  return phi;
}

std::int64_t squarefree_kernel(std::int64_t n) {
  if (n == 0) return 0;
  std::int64_t k = 1;
  for (const auto& [p, e] : factorize(std::llabs(n))) {
    if (e % 2 != 0) k *= p;
  }
  return n < 0 ? -k : k;
}

int kronecker(std::int64_t a, std::int64_t n) {
  if (n == 0) return (a == 1 || a == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    n = -n;
    if (a < 0) result = -result;
  }
  // Factor out powers of two using (a/2) = 0 for even a, otherwise
  // +1 for a = +-1 mod 8 and -1 for a = +-3 mod 8.
  int twos = 0;
  while (n % 2 == 0) {
    n /= 2;
    ++twos;
  }
  if (twos > 0) {
    if (a % 2 == 0) return 0;
    const std::int64_t r8 = mod(a, 8);
    if ((twos % 2 == 1) && (r8 == 3 || r8 == 5)) result = -result;
  }
  // Jacobi symbol for odd positive n.
  a = mod(a, n);
  while (a != 0) {
    while (a % 2 == 0) {
      a /= 2;
      const std::int64_t r8 = n % 8;
      if (r8 == 3 || r8 == 5) result = -result;
    }
    std::swap(a, n);
    if (a % 4 == 3 && n % 4 == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

std::int64_t floor(const Rational& r) {
  return floor_div(r.numerator(), r.denominator());
}

std::int64_t ceil(const Rational& r) {
  return -floor_div(-r.numerator(), r.denominator());
}

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

}  // namespace pmod2
