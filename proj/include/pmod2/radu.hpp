#pragma once

// Radu's construction for arithmetic-progression dissections of eta
// products: the admissible set Delta*, the orbit P_{m,r}(t), the character
// exponent nu, the four weight-zero/trivial-character conditions on an
// eta-quotient multiplier s, and the lower bound on cusp orders.

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pmod2/arith.hpp"
#include "pmod2/etaquot.hpp"

namespace pmod2 {

class NonIntegralNu : public Error {
 public:
  using Error::Error;
};

/// (m, M, N, t, r): dissect prod_{delta | M} (q^delta)_inf^{r_delta} along
/// m n + t, aiming for a modular function on Gamma_0(N).
struct RaduTuple {
  std::int64_t m = 1;
  std::int64_t M = 1;
  std::int64_t N = 1;
  std::int64_t t = 0;
  /// Indexed by every divisor of M (missing divisors are filled with 0).
  ExponentMap r;

  RaduTuple() = default;
  RaduTuple(std::int64_t m, std::int64_t M, std::int64_t N, std::int64_t t, ExponentMap r);

  std::int64_t weight() const;      // w(r)
  std::int64_t sigma_inf() const;   // sum delta r_delta
  std::int64_t sigma_0() const;     // sum (M / delta) r_delta
  std::string to_string() const;
};

/// Multiplier exponents s_delta for every divisor delta of N.
using SVector = ExponentMap;

SVector make_svector(std::int64_t N, const std::vector<std::int64_t>& values);

struct DeltaStarReport {
  bool prime_support = false;  // p | m implies p | N
  bool r_support = false;      // r_delta != 0 implies delta | m N
  bool t_in_range = false;
  std::int64_t kappa = 0;      // gcd(1 - m^2, 24)
  bool sigma0_clause = false;  // 24 | kappa m N^2 sigma_0(r) / M
  bool weight_clause = false;  // 8 | kappa N w(r)
  bool level_clause = false;   // 24m / gcd(kappa(-24t - sigma_inf), 24m) | N
  bool even_m_applies = false;
  bool even_m_clause = true;

  bool passed() const {
    return prime_support && r_support && t_in_range && sigma0_clause && weight_clause &&
           level_clause && even_m_clause;
  }
  /// Names of the failing clauses, empty when passed.
  std::vector<std::string> failures() const;
};

DeltaStarReport delta_star_check(const RaduTuple& T);

std::set<std::int64_t> p_set(const RaduTuple& T);

/// nu in [0, 24) with chi_{m,r}(t) = exp(nu / 24).
std::int64_t nu(const RaduTuple& T);

struct MultiplierReport {
  std::int64_t p_size = 0;
  std::int64_t nu = 0;
  bool weight_sum = false;      // |P| w(r) + w(s) = 0
  bool sigma_inf_sum = false;   // nu + |P| m sigma_inf(r) + sigma_inf(s) == 0 mod 24
  bool sigma_0_sum = false;     // |P| m N sigma_0(r) / M + sigma_0(s) == 0 mod 24
  bool square = false;          // (prod (m delta)^{|r|})^{|P|} Pi(s) is a square
  /// Raw values behind the four checks.
  std::int64_t weight_value = 0;
  std::int64_t sigma_inf_value = 0;
  Rational sigma_0_value{0};

  bool passed() const { return weight_sum && sigma_inf_sum && sigma_0_sum && square; }
};

MultiplierReport multiplier_conditions(const RaduTuple& T, const SVector& s);

/// First s in [-bound, bound]^{d(N)} passing multiplier_conditions, scanning the
/// coordinates lexicographically (divisors ascending, values ascending). The
/// last coordinate is forced by the weight condition.
std::optional<SVector> search_s_vector(const RaduTuple& T, std::int64_t bound);

/// The lower bound on the order of F(s, r, m, t) at cusps with denominator
/// c, regarded on Gamma_0(level) with level a multiple of T.N. Keys of s must
/// divide level.
Rational order_lower_bound_at(const RaduTuple& T, const SVector& s, std::int64_t c,
                         std::int64_t level);

/// min over c | N of order_lower_bound_at(T, s, c, N).
Rational order_lower_bound(const RaduTuple& T, const SVector& s);

}  // namespace pmod2
