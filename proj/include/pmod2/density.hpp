#pragma once

// Empirical odd densities of p_t(n) and b_m(n): exact counts over
// 0 <= n < x with trend checkpoints, the multipartition conjecture table,
// the 5/20 and 7/28 regular-partition relations and the density-zero check
// for (q)^4 + q (q)^8 (q^5)^4.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmod2/arith.hpp"
#include "pmod2/f2series.hpp"

namespace pmod2 {

struct SeriesSpec {
  enum class Kind { Multipartition, Regular, Landau };
  Kind kind = Kind::Multipartition;
  std::int64_t param = 1;

  /// "p", "p_3", "p3", "b_5", "b5" or "landau". Throws ParseError.
  static SeriesSpec parse(const std::string& text);
  std::string id() const;
};

/// Parity bits of the series for 0 <= n < x.
F2Series series_bits(const SeriesSpec& spec, std::size_t x);

struct Checkpoint {
  std::int64_t x = 0;
  std::int64_t odd_count = 0;
  Rational ratio{0};
};

struct DensityEstimate {
  std::string series;
  std::int64_t x = 0;
  std::int64_t odd_count = 0;
  Rational ratio{0};
  /// At x/10, x/4 and x/2 (those that are positive), ascending.
  std::vector<Checkpoint> checkpoints;
};

/// Number of set bits of f below exponent hi (from exponent 0), counted in
/// chunks on up to `threads` workers.
std::int64_t odd_count(const F2Series& f, std::int64_t hi, unsigned threads = 1);

DensityEstimate odd_density(const F2Series& bits, const std::string& id, std::int64_t x,
                            unsigned threads = 1);
DensityEstimate odd_density(const SeriesSpec& spec, std::int64_t x, unsigned threads = 1);

/// Ratios at the checkpoints followed by the final ratio strictly decrease.
bool strictly_decreasing(const DensityEstimate& d);

struct ConjectureRow {
  std::int64_t t = 1;
  int k = 0;             // t = 2^k t0
  std::int64_t t0 = 1;
  Rational predicted{0};  // 2^{-k-1}
  DensityEstimate estimate;
  double deviation = 0;  // estimate - predicted
  /// odd_count_t(x) equals odd_count_{t0}(ceil(x / 2^k)).
  bool frobenius_consistent = false;
};

std::vector<ConjectureRow> conjecture_table(const std::vector<std::int64_t>& ts, std::int64_t x,
                                            unsigned threads = 1);

struct RegularRelationReport {
  std::int64_t x = 0;
  DensityEstimate b5, b20, b7, b28;
  /// |d5 - d20 / 4| and |d7 - d28 / 2|.
  Rational residual_5_20{0};
  Rational residual_7_28{0};
  /// b_5(n) + [q^n]((q)^4 + q (q)^8 (q^5)^4) == b_20((n - 3) / 4) when
  /// n == 3 mod 4 and 0 otherwise, for every n < x.
  bool identity_holds = false;
  std::optional<std::int64_t> identity_mismatch;
};

RegularRelationReport regular_relation_check(std::int64_t x, unsigned threads = 1);

/// Odd count of (q)^4 + q (q)^8 (q^5)^4 mod 2 below x.
DensityEstimate landau_check(std::int64_t x, unsigned threads = 1);

nlohmann::ordered_json to_json(const DensityEstimate& d);
nlohmann::ordered_json to_json(const ConjectureRow& row);
nlohmann::ordered_json to_json(const RegularRelationReport& r);

}  // namespace pmod2
