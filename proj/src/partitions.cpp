#include "pmod2/partitions.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <sstream>
#include <vector>

namespace pmod2 {

std::size_t ParityTable::odd_count(std::size_t limit) const {
  if (limit > x()) throw ContractViolation("odd_count beyond table horizon");
  const auto words = bits.words();
  std::size_t full = limit / F2Series::kWordBits;
  std::size_t count = 0;
  for (std::size_t w = 0; w < full; ++w) {
    count += static_cast<std::size_t>(std::popcount(words[w]));
  }
  const std::size_t rest = limit % F2Series::kWordBits;
  if (rest != 0) {
    const F2Series::Word mask = (F2Series::Word{1} << rest) - 1;
    count += static_cast<std::size_t>(std::popcount(words[full] & mask));
  }
  return count;
}

std::string ParityTable::id() const {
  return (kind == TableKind::Multipartition ? "p_" : "b_") + std::to_string(param);
}

ParityTable partition_parity(std::size_t x) {
  if (x < 1) throw ContractViolation("partition_parity: x must be >= 1");
  const auto pent = generalized_pentagonals(static_cast<std::int64_t>(x));
  std::vector<std::uint8_t> p(x, 0);
  p[0] = 1;
  for (std::size_t n = 1; n < x; ++n) {
    std::uint8_t acc = 0;
    // pent[0] == 0 is the k = 0 term on the other side of the recurrence.
    for (std::size_t k = 1; k < pent.size(); ++k) {
      const auto g = static_cast<std::size_t>(pent[k]);
      if (g > n) break;
      acc ^= p[n - g];
    }
    p[n] = acc;
  }
  ParityTable table{TableKind::Multipartition, 1, F2Series(x)};
  for (std::size_t n = 0; n < x; ++n) {
    if (p[n]) table.bits.set_bit(n);
  }
  return table;
}

ParityTable multipartition_parity(std::int64_t t, std::size_t x) {
  if (t < 1) throw ContractViolation("multipartition_parity: t must be >= 1");
  if (x < 1) throw ContractViolation("multipartition_parity: x must be >= 1");
  // For t = 2^k t0 the Frobenius rule gives p_t(q) = p_t0(q^(2^k)).
  const std::int64_t power = t & -t;
  const std::int64_t odd = t / power;
  const auto up = static_cast<std::size_t>(power);
  const std::size_t inner = (x + up - 1) / up;
  F2Series base = pow(euler(inner), -odd).truncated(inner);
  F2Series full = inflate(base, power).truncated(x);
  return ParityTable{TableKind::Multipartition, t, std::move(full)};
}

ParityTable regular_parity(std::int64_t m, std::size_t x) {
  if (m < 2) throw ContractViolation("regular_parity: m must be >= 2");
  if (x < 1) throw ContractViolation("regular_parity: x must be >= 1");
  const auto um = static_cast<std::size_t>(m);
  const F2Series numerator = inflate(euler((x + um - 1) / um), m).truncated(x);
  F2Series series = (numerator * inv(euler(x))).truncated(x);
  return ParityTable{TableKind::Regular, m, std::move(series)};
}

void write_raw(const ParityTable& table, std::ostream& out) {
  for (F2Series::Word w : table.bits.words()) {
    char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<char>((w >> (8 * i)) & 0xFF);
    out.write(bytes, 8);
  }
}

F2Series read_raw(std::istream& in, std::size_t x) {
  F2Series f(x);
  const std::size_t words = (x + 63) / 64;
  for (std::size_t w = 0; w < words; ++w) {
    char bytes[8];
    if (!in.read(bytes, 8)) throw Error("read_raw: truncated input");
    F2Series::Word word = 0;
    for (int i = 0; i < 8; ++i) {
      word |= static_cast<F2Series::Word>(static_cast<unsigned char>(bytes[i])) << (8 * i);
    }
    for (std::size_t b = 0; b < 64 && w * 64 + b < x; ++b) {
      if ((word >> b) & 1U) f.set_bit(w * 64 + b);
    }
  }
  return f;
}

void write_rle(const ParityTable& table, std::ostream& out) {
  out << "pmod2-rle-v1 kind="
      << (table.kind == TableKind::Multipartition ? "p_t" : "b_m")
      << " param=" << table.param << " x=" << table.x() << "\n";
  std::size_t n = 0;
  bool first = true;
  while (n < table.x()) {
    const bool value = table.odd(n);
    std::size_t run = 1;
    while (n + run < table.x() && table.odd(n + run) == value) ++run;
    out << (first ? "" : " ") << (value ? 1 : 0) << ":" << run;
    first = false;
    n += run;
  }
  out << "\n";
}

ParityTable read_rle(std::istream& in) {
  std::string header;
  if (!std::getline(in, header)) throw Error("read_rle: missing header");
  std::istringstream hs(header);
  std::string magic, kind, param, x;
  hs >> magic >> kind >> param >> x;
  if (magic != "pmod2-rle-v1" || kind.rfind("kind=", 0) != 0 ||
      param.rfind("param=", 0) != 0 || x.rfind("x=", 0) != 0) {
    throw Error("read_rle: malformed header");
  }
  ParityTable table;
  const std::string kind_value = kind.substr(5);
  if (kind_value == "p_t") {
    table.kind = TableKind::Multipartition;
  } else if (kind_value == "b_m") {
    table.kind = TableKind::Regular;
  } else {
    throw Error("read_rle: unknown kind " + kind_value);
  }
  table.param = std::stoll(param.substr(6));
  const auto size = static_cast<std::size_t>(std::stoull(x.substr(2)));
  table.bits = F2Series(size);
  std::string token;
  std::size_t n = 0;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos) throw Error("read_rle: malformed run " + token);
    const bool value = token.substr(0, colon) == "1";
    const auto run = static_cast<std::size_t>(std::stoull(token.substr(colon + 1)));
    if (n + run > size) throw Error("read_rle: runs exceed table size");
    if (value) {
      for (std::size_t i = 0; i < run; ++i) table.bits.set_bit(n + i);
    }
    n += run;
  }
  if (n != size) throw Error("read_rle: runs do not cover the table");
  return table;
}

}  // namespace pmod2
