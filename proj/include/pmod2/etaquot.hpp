#pragma once

// Eta quotients f(z) = prod_{delta | N} eta(delta z)^{r_delta}: the
// Gordon-Hughes-Newman modularity test, weight and character, cusps of
// Gamma_0(N), Ligozat's orders at cusps, and expansion mod 2.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pmod2/arith.hpp"
#include "pmod2/f2series.hpp"

namespace pmod2 {

class ParseError : public Error {
 public:
  using Error::Error;
};

using ExponentMap = std::map<std::int64_t, std::int64_t>;

class EtaQuotient {
 public:
  /// Every key must divide level and at least one exponent must be nonzero.
  /// Zero exponents are dropped.
  EtaQuotient(std::int64_t level, ExponentMap exps);

  /// Parses "eta(1)^10 * eta(2)^2 * eta(11)^11 * eta(22)^-22 @ N=44".
  /// Factors may also be joined with '/', exponents may be parenthesized,
  /// and "@ N=..." defaults to the lcm of the arguments.
  static EtaQuotient parse(const std::string& text);

  std::int64_t level() const { return level_; }
  const ExponentMap& exps() const { return exps_; }
  std::int64_t exponent(std::int64_t delta) const;

  /// Sum of the exponents: twice the weight.
  std::int64_t weight2() const;
  /// sum delta r_delta; also the q-offset of the expansion in 24ths.
  std::int64_t sigma_inf() const;
  /// sum (N / delta) r_delta at the current level.
  std::int64_t sigma_0() const;

  /// The same quotient regarded at a multiple of its level.
  EtaQuotient at_level(std::int64_t multiple) const;

  std::string to_string() const;

  friend EtaQuotient operator*(const EtaQuotient& a, const EtaQuotient& b);
  friend bool operator==(const EtaQuotient& a, const EtaQuotient& b) {
    return a.level_ == b.level_ && a.exps_ == b.exps_;
  }

 private:
  std::int64_t level_;
  ExponentMap exps_;
};

struct Cusp {
  std::int64_t c = 0;
  std::int64_t d = 1;
  friend bool operator==(const Cusp&, const Cusp&) = default;
};

/// A Jacobi-symbol character chi(d) = ((-1)^k s / d) is determined by the
/// parity of k and the squarefree kernel of (-1)^k s.
struct CharacterKey {
  int k_parity = 0;
  std::int64_t kernel = 1;
  bool trivial() const { return kernel == 1; }
  friend bool operator==(const CharacterKey&, const CharacterKey&) = default;
};

struct ModularityReport {
  bool is_form = false;
  std::int64_t weight2 = 0;
  /// k mod 2; meaningful when weight2 is even.
  int char_k = 0;
  /// Squarefree kernel of (-1)^k s, s = prod delta^{r_delta}.
  std::int64_t char_s_kernel = 1;
  /// sum delta r_delta mod 24 and sum (N/delta) r_delta mod 24.
  std::int64_t cond_A = 0;
  std::int64_t cond_B = 0;

  CharacterKey character() const { return {char_k, char_s_kernel}; }
};

ModularityReport ghn_check(const EtaQuotient& e);

/// One representative c/d per Gamma_0(N)-class of cusps: d runs over the
/// divisors of N ascending, c over units mod gcd(d, N/d), each lifted to the
/// smallest nonnegative integer coprime to d.
std::vector<Cusp> cusp_set(std::int64_t level);

/// Ligozat's order of e at the cusp c/d, computed at e.level(). Requires e
/// to pass ghn_check.
Rational ligozat_order(const EtaQuotient& e, const Cusp& cusp);

/// Width of the cusp c/d on Gamma_0(N): N / gcd(d^2, N).
std::int64_t cusp_width(std::int64_t level, const Cusp& cusp);

/// Expansion mod 2 with relative horizon trunc and offset24 = sigma_inf.
F2Series expand(const EtaQuotient& e, std::size_t trunc);

/// Expansion mod 2 of prod (q^delta)_inf^{e_delta} without the q^(1/24)
/// prefactors (offset 0).
F2Series expand_product(const ExponentMap& exps, std::size_t trunc);

/// True when a and b differ by a combination of the substitutions
/// eta(delta z)^2 <-> eta(2 delta z), i.e. they are equal as series mod 2 by
/// the Frobenius rule alone.
bool frobenius_equivalent(const ExponentMap& a, const ExponentMap& b);

std::string exponent_map_to_string(const ExponentMap& exps);

}  // namespace pmod2
