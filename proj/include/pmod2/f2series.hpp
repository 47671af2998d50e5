#pragma once

// Truncated power series over GF(2) with an exact offset in units of q^(1/24).
//
// An F2Series value represents
//
//     q^(offset24 / 24) * sum_{n < trunc} bits[n] q^n
//
// where the coefficients are packed 64 per word, bit n living in word n / 64
// at position n % 64. Coefficients at relative index >= trunc are unknown;
// the stored words keep them cleared. Every eta product in this project has
// its exponents in (1/24)Z, so the offset carries the q^(delta/24) prefactor
// of eta(delta z) without expanding in q^(1/24).

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "pmod2/arith.hpp"

namespace pmod2 {

class ConstantTermZero : public Error {
 public:
  using Error::Error;
};

class BadResidue : public Error {
 public:
  using Error::Error;
};

class F2Series {
 public:
  using Word = std::uint64_t;
  static constexpr std::size_t kWordBits = 64;

  F2Series() = default;
  /// The zero series known up to relative index trunc.
  explicit F2Series(std::size_t trunc, std::int64_t offset24 = 0);

  static F2Series one(std::size_t trunc);
  /// Series with a 1 at each listed relative index below trunc.
  static F2Series from_indices(std::span<const std::int64_t> indices,
                               std::size_t trunc, std::int64_t offset24 = 0);
  /// Series from a string of '0'/'1' characters, lowest index first.
  static F2Series from_string(const std::string& bits,
                              std::int64_t offset24 = 0);

  std::size_t trunc() const { return trunc_; }
  std::int64_t offset24() const { return offset24_; }
  std::span<const Word> words() const { return words_; }

  bool bit(std::size_t n) const {
    return (words_[n / kWordBits] >> (n % kWordBits)) & 1U;
  }
  void set_bit(std::size_t n, bool value = true);
  void flip_bit(std::size_t n);

  /// True when the offset is a whole power of q.
  bool integral_offset() const { return mod(offset24_, 24) == 0; }
  /// Exponent of q carried by relative index 0; requires integral_offset().
  std::int64_t base_exponent() const;

  /// Coefficient of q^e for an integral exponent e. Exponents below the
  /// offset read as zero; exponents at or beyond the horizon are a
  /// contract violation.
  bool coeff(std::int64_t e) const;
  /// First exponent whose coefficient is unknown.
  std::int64_t horizon() const { return base_exponent() + static_cast<std::int64_t>(trunc_); }

  std::size_t popcount() const;
  /// Relative indices of the set bits, ascending.
  std::vector<std::int64_t> support() const;
  /// Relative index of the lowest set bit, if any.
  std::optional<std::size_t> valuation() const;
  bool is_zero() const { return !valuation().has_value(); }

  /// Restrict to relative indices below new_trunc (must not grow).
  F2Series truncated(std::size_t new_trunc) const;
  /// Multiply by q^k: only the offset moves.
  F2Series shifted(std::int64_t k) const;
  /// Same coefficients, different offset.
  F2Series with_offset(std::int64_t offset24) const;
  /// Rewrite relative to a lower offset (same fractional part), padding with
  /// known zeros; the absolute horizon is unchanged.
  F2Series rebased(std::int64_t new_offset24) const;

  std::string to_string(std::size_t max_terms = 64) const;

  /// Bitwise equality: same offset, same horizon, same coefficients.
  /// Mismatched fractional offsets are a contract violation.
  friend bool operator==(const F2Series& f, const F2Series& g);

  /// Addition over GF(2); the result is known on the common horizon.
  friend F2Series operator+(const F2Series& f, const F2Series& g);
  friend F2Series operator*(const F2Series& f, const F2Series& g);

 private:
  void clear_tail();

  std::vector<Word> words_;
  std::size_t trunc_ = 0;
  std::int64_t offset24_ = 0;
};

F2Series mul(const F2Series& f, const F2Series& g);
F2Series add(const F2Series& f, const F2Series& g);

/// Multiplicative inverse; the constant term must be 1.
F2Series inv(const F2Series& f);

/// f^e by binary exponentiation; squaring is the Frobenius inflation.
F2Series pow(const F2Series& f, std::int64_t e);

/// sum_n [q^(a n + b)] f * q^n over integral exponents. Requires an integral
/// offset and 0 <= b < a.
F2Series dissect(const F2Series& f, std::int64_t a, std::int64_t b);

/// f(q) -> f(q^d).
F2Series inflate(const F2Series& f, std::int64_t d);

/// prod_{i >= 1} (1 - q^i) mod 2, known below trunc. Bits sit at the
/// generalized pentagonal numbers.
F2Series euler(std::size_t trunc);

/// eta(delta z)^r mod 2 with offset24 = delta * r; trunc is the relative
/// horizon of the result.
F2Series eta_power(std::int64_t delta, std::int64_t r, std::size_t trunc);

/// Generalized pentagonal numbers k(3k-1)/2, k in Z, below limit, ascending.
std::vector<std::int64_t> generalized_pentagonals(std::int64_t limit);

/// Smallest absolute exponent where f and g differ on their common known
/// range, or nullopt when they agree there. Offsets must share their
/// fractional part.
std::optional<std::int64_t> first_mismatch(const F2Series& f,
                                           const F2Series& g);

/// FNV-1a 64 over the packed coefficients of exponents [lo, hi], rendered as
/// 16 hex digits.
std::string range_hash(const F2Series& f, std::int64_t lo, std::int64_t hi);

namespace detail {
/// Product of two packed GF(2) polynomials (no truncation).
std::vector<F2Series::Word> clmul_poly(std::span<const F2Series::Word> a,
                                       std::span<const F2Series::Word> b);
bool hardware_clmul_available();
}  // namespace detail

}  // namespace pmod2
