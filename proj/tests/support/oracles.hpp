#pragma once

// Independent reference computations used only by the tests. Nothing here
// goes through F2Series; everything is plain integer arithmetic.

#include <cstdint>
#include <ostream>
#include <algorithm>
#include <random>
#include <utility>
#include <vector>

#include "pmod2/f2series.hpp"

namespace pmod2 {
// Readable failure messages in the tests.
inline void PrintTo(const F2Series& f, std::ostream* os) {
  *os << f.to_string(40) << " [offset24=" << f.offset24() << " trunc=" << f.trunc() << "]";
}
}  // namespace pmod2

namespace oracle {

/// Both series restricted to their common relative horizon.
inline std::pair<pmod2::F2Series, pmod2::F2Series> common(const pmod2::F2Series& f,
                                                          const pmod2::F2Series& g) {
  const std::size_t t = std::min(f.trunc(), g.trunc());
  return {f.truncated(t), g.truncated(t)};
}


/// Number of t-coloured partitions of n for n < limit, by enumerating
/// ordinary partitions and weighting each part size of multiplicity k by
/// the C(k + t - 1, t - 1) ways to colour it.
inline std::vector<std::uint64_t> coloured_partitions(int t, int limit) {
  auto binom = [](std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
  };
  std::vector<std::uint64_t> count(limit, 0);
  auto rec = [&](auto&& self, int n, int max_part, std::uint64_t weight) -> void {
    count[n] += weight;
    for (int part = max_part; part >= 1; --part) {
      for (int k = 1; n + k * part < limit; ++k) {
        self(self, n + k * part, part - 1,
             weight * binom(static_cast<std::uint64_t>(k + t - 1),
                            static_cast<std::uint64_t>(t - 1)));
      }
    }
  };
  rec(rec, 0, limit - 1, 1);
  return count;
}

/// Schoolbook product of integer polynomials, truncated.
inline std::vector<std::int64_t> poly_mul(const std::vector<std::int64_t>& a,
                                          const std::vector<std::int64_t>& b,
                                          std::size_t trunc) {
  std::vector<std::int64_t> out(trunc, 0);
  for (std::size_t i = 0; i < a.size() && i < trunc; ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size() && i + j < trunc; ++j) out[i + j] += a[i] * b[j];
  }
  return out;
}

/// prod_{i >= 1} (1 - q^(step i))^power mod 2, truncated, one factor at a
/// time; negative powers divide by each factor.
inline std::vector<std::int64_t> product_mod2(std::int64_t step, std::int64_t power,
                                              std::size_t trunc) {
  std::vector<std::int64_t> f(trunc, 0);
  f[0] = 1;
  const std::int64_t reps = power < 0 ? -power : power;
  for (std::int64_t rep = 0; rep < reps; ++rep) {
    for (std::size_t i = static_cast<std::size_t>(step); i < trunc; i += static_cast<std::size_t>(step)) {
      if (power > 0) {
        for (std::size_t n = trunc; n-- > i;) f[n] ^= f[n - i];
      } else {
        for (std::size_t n = i; n < trunc; ++n) f[n] ^= f[n - i];
      }
    }
  }
  return f;
}

inline pmod2::F2Series random_series(std::mt19937_64& rng, std::size_t trunc,
                                     bool unit_constant, double density = 0.5) {
  std::bernoulli_distribution coin(density);
  pmod2::F2Series f(trunc);
  for (std::size_t i = 0; i < trunc; ++i) {
    if (coin(rng)) f.set_bit(i);
  }
  if (unit_constant) f.set_bit(0, true);
  return f;
}

inline pmod2::F2Series from_vector(const std::vector<std::int64_t>& v) {
  pmod2::F2Series f(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (v[i] & 1) f.set_bit(i);
  }
  return f;
}

}  // namespace oracle
