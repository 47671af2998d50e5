#pragma once

// Parity tables for the partition function p(n), the t-multipartition
// functions p_t(n) and the m-regular partition counts b_m(n).

#include <cstdint>
#include <iosfwd>
#include <string>

#include "pmod2/f2series.hpp"

namespace pmod2 {

enum class TableKind { Multipartition, Regular };

struct ParityTable {
  TableKind kind = TableKind::Multipartition;
  /// t for multipartitions (p = p_1), m for m-regular partitions.
  std::int64_t param = 1;
  /// Coefficient parities for 0 <= n < x; offset 0, trunc x.
  F2Series bits;

  std::size_t x() const { return bits.trunc(); }
  bool odd(std::size_t n) const { return bits.bit(n); }
  /// Number of odd values among n < limit (limit <= x).
  std::size_t odd_count(std::size_t limit) const;
  /// "p_t(5)" style identifier.
  std::string id() const;

  friend bool operator==(const ParityTable& a, const ParityTable& b) {
    return a.kind == b.kind && a.param == b.param && a.bits == b.bits;
  }
};

/// Parity of p(n) for n < x by the pentagonal recurrence
/// p(n) = sum_k p(n - g_k) mod 2 (the signs vanish mod 2).
ParityTable partition_parity(std::size_t x);

/// Parity of p_t(n) for n < x from 1/(q)_inf^t.
ParityTable multipartition_parity(std::int64_t t, std::size_t x);

/// Parity of b_m(n) for n < x from (q^m)_inf / (q)_inf.
ParityTable regular_parity(std::int64_t m, std::size_t x);

/// Raw dump: ceil(x / 64) little-endian 64-bit words, bit n of the table at
/// bit n % 64 of word n / 64.
void write_raw(const ParityTable& table, std::ostream& out);
F2Series read_raw(std::istream& in, std::size_t x);

/// Run-length text:
///
///     pmod2-rle-v1 kind=p_t param=1 x=11
///     1:2 0:1 1:5 0:3
void write_rle(const ParityTable& table, std::ostream& out);
ParityTable read_rle(std::istream& in);

}  // namespace pmod2
