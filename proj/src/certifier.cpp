#include "pmod2/certifier.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <unordered_map>

#include "pmod2/partitions.hpp"

namespace pmod2 {

namespace {

std::string product_to_string(const ExponentMap& exps) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [delta, e] : exps) {
    if (e == 0) continue;
    os << (first ? "" : " ") << "(q^" << delta << ")^" << e;
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

std::string shift_prefix(std::int64_t shift) {
  if (shift == 0) return "";
  return "q^" + std::to_string(shift) + " * ";
}

// Expansion of a product of Euler factors known below rel; uses the
// Frobenius-aware multipartition generator for pure powers of (q)_inf.
F2Series product_series(const ExponentMap& exps, std::size_t rel) {
  if (exps.size() == 1 && exps.begin()->first == 1 && exps.begin()->second < 0) {
    return multipartition_parity(-exps.begin()->second, rel).bits;
  }
  return expand_product(exps, rel);
}

F2Series term_series(const Term& term, std::int64_t horizon) {
  return std::visit(
      [&](const auto& t) -> F2Series {
        using T = std::decay_t<decltype(t)>;
        const std::int64_t rel = horizon - t.shift;
        if (rel <= 0) return F2Series(0, 24 * t.shift);
        const auto urel = static_cast<std::size_t>(rel);
        if constexpr (std::is_same_v<T, ProductTerm>) {
          return product_series(t.exps, urel).shifted(t.shift);
        } else if constexpr (std::is_same_v<T, DissectionTerm>) {
          const auto need = static_cast<std::size_t>(t.a * (rel - 1) + t.b + 1);
          return dissect(product_series(t.exps, need), t.a, t.b).truncated(urel).shifted(t.shift);
        } else {
          if (t.A <= 0 || t.divisor <= 0) throw ContractViolation("quadratic sum needs A, divisor > 0");
          F2Series f(urel);
          // A (n - vertex)^2 = value - C + B^2 / 4A, so values below divisor * rel
          // lie within this distance of the vertex.
          const double spread = static_cast<double>(t.divisor * rel) + std::abs(static_cast<double>(t.C)) +
                                static_cast<double>(t.B) * t.B / (4.0 * t.A);
          const double reach = std::sqrt(spread / t.A) + 2;
          const double vertex = -static_cast<double>(t.B) / (2.0 * t.A);
          const auto lo = std::max<std::int64_t>(t.n_min, static_cast<std::int64_t>(std::floor(vertex - reach)));
          const auto hi = static_cast<std::int64_t>(std::ceil(vertex + reach));
          for (std::int64_t n = lo; n <= hi; ++n) {
            const std::int64_t v = t.A * n * n + t.B * n + t.C;
            if (v % t.divisor != 0) throw ContractViolation("quadratic sum: divisor does not divide");
            const std::int64_t e = v / t.divisor;
            if (e >= 0 && e < rel) f.flip_bit(static_cast<std::size_t>(e));
          }
          return f.shifted(t.shift);
        }
      },
      term);
}

std::int64_t term_shift(const Term& term) {
  return std::visit([](const auto& t) { return t.shift; }, term);
}

}  // namespace

std::string term_to_string(const Term& term) {
  return std::visit(
      [](const auto& t) -> std::string {
        using T = std::decay_t<decltype(t)>;
        if constexpr (std::is_same_v<T, ProductTerm>) {
          return shift_prefix(t.shift) + product_to_string(t.exps);
        } else if constexpr (std::is_same_v<T, DissectionTerm>) {
          return shift_prefix(t.shift) + "sum [q^(" + std::to_string(t.a) + "n+" +
                 std::to_string(t.b) + ")] " + product_to_string(t.exps) + " q^n";
        } else {
          std::ostringstream os;
          os << shift_prefix(t.shift) << "sum_{n>=" << t.n_min << "} q^((" << t.A << "n^2"
             << (t.B < 0 ? "" : "+") << t.B << "n" << (t.C < 0 ? "" : "+") << t.C << ")";
          if (t.divisor != 1) os << "/" << t.divisor;
          os << ")";
          return os.str();
        }
      },
      term);
}

F2Series evaluate(const std::vector<Term>& terms, std::int64_t horizon) {
  if (horizon < 1) throw ContractViolation("evaluate: horizon must be positive");
  std::int64_t lo = 0;
  for (const Term& t : terms) lo = std::min(lo, term_shift(t));
  F2Series acc(static_cast<std::size_t>(horizon - lo), 24 * lo);
  for (const Term& t : terms) {
    const F2Series g = term_series(t, horizon);
    if (g.trunc() == 0) continue;
    acc = acc + g;
  }
  return acc;
}

// ---------------------------------------------------------------------------
// Catalog

namespace {

ProductTerm prod(ExponentMap exps, std::int64_t shift = 0) { return {std::move(exps), shift}; }

CongruenceClaim two_term(std::int64_t a, std::int64_t b, std::int64_t t,
                         std::vector<std::int64_t> s, std::int64_t j) {
  CongruenceClaim c;
  c.id = std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(t);
  c.shape = ClaimShape::TwoTerm;
  c.a = a;
  c.b = b;
  c.t = t;
  c.lhs = {DissectionTerm{{{1, -t}}, a, b, 1}};
  c.rhs = {prod({{1, -a * t}}), prod({{a, -t}})};
  c.description = "q sum p_" + std::to_string(t) + "(" + std::to_string(a) + "n+" +
                  std::to_string(b) + ") q^n == 1/(q)^" + std::to_string(a * t) + " + 1/(q^" +
                  std::to_string(a) + ")^" + std::to_string(t);
  CertificationPlan plan;
  plan.tuple = RaduTuple(a, 1, 2 * a, b, {{1, -t}});
  plan.s = make_svector(2 * a, s);
  plan.published_j = j;
  c.plan = plan;
  return c;
}

CongruenceClaim three_term(std::int64_t a, std::int64_t b, std::int64_t t,
                           std::vector<std::int64_t> s, std::int64_t j) {
  CongruenceClaim c;
  c.id = std::to_string(a) + "," + std::to_string(b) + "," + std::to_string(t);
  c.shape = ClaimShape::ThreeTerm;
  c.a = a;
  c.b = b;
  c.t = t;
  c.lhs = {DissectionTerm{{{1, -t}}, a * a, b, 2}};
  c.rhs = {prod({{1, -a * a * t}}), prod({{a, -a * t}}), prod({{1, -t}}, 1)};
  c.description = "q^2 sum p_" + std::to_string(t) + "(" + std::to_string(a * a) + "n+" +
                  std::to_string(b) + ") q^n == 1/(q)^" + std::to_string(a * a * t) +
                  " + 1/(q^" + std::to_string(a) + ")^" + std::to_string(a * t) + " + q/(q)^" +
                  std::to_string(t);
  CertificationPlan plan;
  plan.tuple = RaduTuple(a * a, 1, a * a * a, b, {{1, -t}});
  plan.s = make_svector(a * a * a, s);
  plan.published_j = j;
  c.plan = plan;
  return c;
}

CongruenceClaim aux(std::string id, std::string description, std::vector<Term> lhs,
                    std::vector<Term> rhs) {
  CongruenceClaim c;
  c.id = std::move(id);
  c.shape = ClaimShape::Auxiliary;
  c.description = std::move(description);
  c.lhs = std::move(lhs);
  c.rhs = std::move(rhs);
  return c;
}

std::vector<CongruenceClaim> build_catalog() {
  std::vector<CongruenceClaim> out;
  auto generic = [](std::int64_t m) { return std::vector<std::int64_t>{m - 1, 2, m, -2 * m}; };
  for (const auto& [m, b] : std::vector<std::pair<std::int64_t, std::int64_t>>{
           {5, 4}, {7, 5}, {11, 6}, {13, 6}, {17, 5}, {19, 4}, {23, 1}}) {
    out.push_back(two_term(m, b, 1, generic(m), (m * m - 1) / 8));
  }
  out.push_back(two_term(3, 2, 3, {6, 6, 9, -18}, 3));
  out.push_back(two_term(5, 2, 3, {10, 8, 1, -16}, 6));
  out.push_back(two_term(7, 1, 3, {10, 10, 5, -22}, 11));
  out.push_back(two_term(5, 0, 5, {5, 1, 4, -5}, 4));
  out.push_back(two_term(3, 0, 9, {9, 3, 6, -9}, 3));
  out.push_back(three_term(3, 8, 3, {3, 1, 8, -9}, 28));
  out.push_back(three_term(5, 24, 1, {5, 4, 2, -10}, 200));

  for (CongruenceClaim& c : out) {
    if (c.id == "11,6,1") {
      c.plan->published_rhs = {
          EtaQuotient::parse("eta(4) * eta(11)^11 / eta(1) / eta(44)^11 @ N=44"),
          EtaQuotient::parse("eta(1)^10 * eta(2)^2 * eta(11)^10 * eta(22)^-22 @ N=22")};
      c.plan->asserted_trivial_character = true;
    } else if (c.id == "7,1,3") {
      c.plan->published_rhs = {
          EtaQuotient::parse("eta(1) * eta(4)^2 * eta(14)^18 / eta(7)^3 / eta(28)^18 @ N=28"),
          EtaQuotient::parse("eta(1)^10 * eta(2)^10 * eta(7)^2 * eta(14)^-22 @ N=14")};
    } else if (c.id == "17,5,1" || c.id == "19,4,1" || c.id == "23,1,1") {
      c.plan->asserted_trivial_character = true;
    }
  }

  using D = DissectionTerm;
  using Q = QuadraticSum;
  out.push_back(aux("p-5n+4", "sum p(5n+4) q^n == (q^5)^5 / (q)^6",
                    {D{{{1, -1}}, 5, 4, 0}}, {prod({{5, 5}, {1, -6}})}));
  out.push_back(aux("eta-1-5-10", "(q)(q^10)/(q^5) == (q)(q^5)",
                    {prod({{1, 1}, {5, -1}, {10, 1}})}, {prod({{1, 1}, {5, 1}})}));
  out.push_back(aux("eta-1-5-theta", "(q)(q^5) == sum_{n>=1} q^(n^2-n) + sum_{n>=1} q^(5n^2-5n+1)",
                    {prod({{1, 1}, {5, 1}})}, {Q{1, -1, 0, 1, 0}, Q{5, -5, 1, 1, 0}}));
  out.push_back(aux("eta-1-5-split", "(q)(q^5) == (q)^6 + q (q^5)^6",
                    {prod({{1, 1}, {5, 1}})}, {prod({{1, 6}}), prod({{5, 6}}, 1)}));
  out.push_back(aux("p-5n+4-shifted", "q sum p(5n+4) q^n == 1/(q)^5 + 1/(q^5)",
                    {D{{{1, -1}}, 5, 4, 1}}, {prod({{1, -5}}), prod({{5, -1}})}));
  out.push_back(aux("b5-split", "sum b_5(n) q^n == (q)^4 + q (q^5)^6/(q)^2",
                    {prod({{5, 1}, {1, -1}})}, {prod({{1, 4}}), prod({{5, 6}, {1, -2}}, 1)}));
  out.push_back(aux("eta-5-3-over-1", "(q^5)^3/(q) == (q)^4 (q^5)^2 + q (q^5)^8/(q)^2",
                    {prod({{5, 3}, {1, -1}})},
                    {prod({{1, 4}, {5, 2}}), prod({{5, 8}, {1, -2}}, 1)}));
  out.push_back(aux("b5-three-term", "sum b_5(n) q^n == (q)^4 + q (q)^8 (q^5)^4 + q^3 (q^5)^16/(q)^4",
                    {prod({{5, 1}, {1, -1}})},
                    {prod({{1, 4}}), prod({{1, 8}, {5, 4}}, 1), prod({{5, 16}, {1, -4}}, 3)}));
  out.push_back(aux("b5-b20-link", "q^3 (q^5)^16/(q)^4 == q^3 sum b_20(n) q^(4n)",
                    {prod({{5, 16}, {1, -4}}, 3)}, {prod({{80, 1}, {4, -1}}, 3)}));
  out.push_back(aux("p-13n+6", "sum p(13n+6) q^n == (q^13)/(q)^2 + q^5 (q^13)^11/(q)^12 + q^6 (q^13)^13/(q)^14",
                    {D{{{1, -1}}, 13, 6, 0}},
                    {prod({{13, 1}, {1, -2}}), prod({{13, 11}, {1, -12}}, 5),
                     prod({{13, 13}, {1, -14}}, 6)}));
  out.push_back(aux("eta-13-split", "(q^13)/(q) + (q)^12 == q (q)^10 (q^13)^2 + q^6 (q^13)^12 + q^7 (q^13)^14/(q)^2",
                    {prod({{13, 1}, {1, -1}}), prod({{1, 12}})},
                    {prod({{1, 10}, {13, 2}}, 1), prod({{13, 12}}, 6),
                     prod({{13, 14}, {1, -2}}, 7)}));
  out.push_back(aux("p-7n+5", "sum p(7n+5) q^n == (q^7)^3/(q)^4 + q (q^7)^7/(q)^8",
                    {D{{{1, -1}}, 7, 5, 0}},
                    {prod({{7, 3}, {1, -4}}), prod({{7, 7}, {1, -8}}, 1)}));
  out.push_back(aux("eta-1-7-split", "(q)(q^7) == (q)^8 + q (q)^4 (q^7)^4 + q^2 (q^7)^8",
                    {prod({{1, 1}, {7, 1}})},
                    {prod({{1, 8}}), prod({{1, 4}, {7, 4}}, 1), prod({{7, 8}}, 2)}));
  out.push_back(aux("p3-3n+2", "sum p_3(3n+2) q^n == (q^3)^9/(q)^12",
                    {D{{{1, -3}}, 3, 2, 0}}, {prod({{3, 9}, {1, -12}})}));
  out.push_back(aux("eta-1-3-split", "1/((q)^9 (q^3)^9) == q/(q)^12 + 1/(q^3)^12",
                    {prod({{1, -9}, {3, -9}})}, {prod({{1, -12}}, 1), prod({{3, -12}})}));
  out.push_back(aux("p3-5n+2", "q sum p_3(5n+2) q^n == q (q^5)^3/(q)^6 + q^2 (q^5)^9/(q)^12 + q^3 (q^5)^15/(q)^18",
                    {D{{{1, -3}}, 5, 2, 1}},
                    {prod({{5, 3}, {1, -6}}, 1), prod({{5, 9}, {1, -12}}, 2),
                     prod({{5, 15}, {1, -18}}, 3)}));
  out.push_back(aux("p-25n+24", "sum p(25n+24) q^n == (q^5)^6/(q)^7 + q^2 (q^5)^18/(q)^19 + q^4 (q^5)^30/(q)^31",
                    {D{{{1, -1}}, 25, 24, 0}},
                    {prod({{5, 6}, {1, -7}}), prod({{5, 18}, {1, -19}}, 2),
                     prod({{5, 30}, {1, -31}}, 4)}));
  out.push_back(aux("p-25n+24-shifted", "q^2 sum p(25n+24) q^n == q/(q) + 1/(q)^25 + q (q^5)/(q)^6 + 1/((q)^5 (q^5)^4)",
                    {D{{{1, -1}}, 25, 24, 2}},
                    {prod({{1, -1}}, 1), prod({{1, -25}}), prod({{5, 1}, {1, -6}}, 1),
                     prod({{1, -5}, {5, -4}})}));
  out.push_back(aux("p5-5n", "sum p_5(5n) q^n == q sum p(25n+24) q^n + 1/(q)",
                    {D{{{1, -5}}, 5, 0, 0}},
                    {D{{{1, -1}}, 25, 24, 1}, prod({{1, -1}})}));
  out.push_back(aux("p3-9n+8", "sum p_3(9n+8) q^n == q^2 (q^3)^36/(q)^39",
                    {D{{{1, -3}}, 9, 8, 0}}, {prod({{3, 36}, {1, -39}}, 2)}));
  out.push_back(aux("p3-9n+8-level-12", "q^4 (q^3)^36/(q)^39 == (q^3)^36 (q)^9/(q^12)^12 + (q^3)^36 (q)^9/((q^4)^9 (q^12)^9)",
                    {prod({{3, 36}, {1, -39}}, 4)},
                    {prod({{3, 36}, {1, 9}, {12, -12}}), prod({{3, 36}, {1, 9}, {4, -9}, {12, -9}})}));
  out.push_back(aux("level-12-collapse", "(q^3)^36 (q)^9/(q^12)^12 + (q^3)^36 (q)^9/((q^4)^9 (q^12)^9) == 1/(q)^27 + (q)^9/(q^3)^12",
                    {prod({{3, 36}, {1, 9}, {12, -12}}), prod({{3, 36}, {1, 9}, {4, -9}, {12, -9}})},
                    {prod({{1, -27}}), prod({{1, 9}, {3, -12}})}));
  out.push_back(aux("eta-1-3-reciprocal", "(q)^9/(q^3)^12 == 1/(q^3)^9 + q/(q)^3",
                    {prod({{1, 9}, {3, -12}})}, {prod({{3, -9}}), prod({{1, -3}}, 1)}));
  out.push_back(aux("euler-cube", "(q)^3 == sum_{n>=0} q^(n(n+1)/2)",
                    {prod({{1, 3}})}, {Q{1, 1, 0, 0, 0, 2}}));
  out.push_back(aux("euler-fourth", "(q)^4 == sum_{n in Z} q^(2n(3n-1))",
                    {prod({{1, 4}})}, {Q{6, -2, 0, std::numeric_limits<std::int32_t>::min(), 0}}));
  return out;
}

}  // namespace

const std::vector<CongruenceClaim>& catalog() {
  static const std::vector<CongruenceClaim> claims = build_catalog();
  return claims;
}

const CongruenceClaim& find_claim(const std::string& id) {
  std::string key;
  for (char ch : id) {
    if (ch != ' ' && ch != '(' && ch != ')') key.push_back(ch);
  }
  for (const CongruenceClaim& c : catalog()) {
    if (c.id == key) return c;
  }
  throw UnknownCase("unknown case '" + id + "'");
}

NumericResult numeric_verify(const CongruenceClaim& claim, std::int64_t horizon) {
  NumericResult res;
  res.horizon = horizon;
  const F2Series lhs = evaluate(claim.lhs, horizon);
  const F2Series rhs = evaluate(claim.rhs, horizon);
  res.first_mismatch = first_mismatch(lhs, rhs);
  res.passed = !res.first_mismatch.has_value() && std::min(lhs.horizon(), rhs.horizon()) >= horizon;
  return res;
}

std::int64_t sturm_bound(std::int64_t weight2, std::int64_t N, bool same_character) {
  if (weight2 < 0 || weight2 % 2 != 0) {
    throw ContractViolation("sturm_bound: weight2 must be even and nonnegative");
  }
  const std::int64_t k = weight2 / 2;
  Rational bound(k * N * (same_character ? 1 : N), 12);
  for (std::int64_t p : prime_divisors(N)) {
    bound *= same_character ? Rational(p + 1, p) : Rational(p * p - 1, p * p);
  }
  return floor(bound);
}

// ---------------------------------------------------------------------------
// Normalizer
//
// Every rewrite eta(delta)^2 -> eta(2 delta) stays on a chain o, 2o, 4o, ...
// with o odd, and the reachable exponent vectors on a chain are exactly
// those with the same weighted sum sum_i r(o 2^i) 2^i. For each chain we
// enumerate move counts k_i (r_i -= 2 k_i, r_{i+1} += k_i), summarize each
// outcome by (weight, contribution to sum (L/delta) r mod 24, parity of the
// prime exponents of prod delta^r), and combine chains by dynamic
// programming, minimizing the total absolute exponent.

namespace {

struct ChainChoice {
  std::int64_t l1 = 0;
  std::vector<std::int64_t> r;
};

struct Key {
  std::int64_t weight;
  int b;
  unsigned mask;
  bool operator==(const Key&) const = default;
};

struct KeyHash {
  std::size_t operator()(const Key& k) const {
    return std::hash<std::int64_t>()(k.weight * 1000003 + k.b * 64 + k.mask);
  }
};

using ChainTable = std::unordered_map<Key, ChainChoice, KeyHash>;

ChainTable chain_candidates(const std::vector<std::int64_t>& D, std::int64_t o, std::int64_t L,
                            const std::vector<std::int64_t>& primes, std::int64_t slack) {
  const std::size_t len = D.size();
  const std::size_t moves = len - 1;
  std::int64_t K = 48;
  while (K > 1) {
    double count = 1;
    for (std::size_t i = 0; i < moves; ++i) count *= static_cast<double>(2 * K + 1);
    if (count <= 250000) break;
    --K;
  }
  std::vector<std::int64_t> odd_prime_valuation(primes.size(), 0);
  for (std::size_t p = 0; p < primes.size(); ++p) {
    std::int64_t x = o;
    while (primes[p] != 2 && x % primes[p] == 0) {
      x /= primes[p];
      ++odd_prime_valuation[p];
    }
  }
  ChainTable table;
  std::vector<std::int64_t> k(moves, -K);
  std::vector<std::int64_t> r(len);
  while (true) {
    for (std::size_t i = 0; i < len; ++i) {
      r[i] = D[i] - (i < moves ? 2 * k[i] : 0) + (i > 0 ? k[i - 1] : 0);
    }
    std::int64_t weight = 0, l1 = 0, bsum = 0, twos = 0;
    for (std::size_t i = 0; i < len; ++i) {
      weight += r[i];
      l1 += r[i] < 0 ? -r[i] : r[i];
      bsum += (L / (o << i)) * r[i];
      twos += static_cast<std::int64_t>(i) * r[i];
    }
    unsigned mask = 0;
    for (std::size_t p = 0; p < primes.size(); ++p) {
      const std::int64_t e = primes[p] == 2 ? twos : odd_prime_valuation[p] * weight;
      if (mod(e, 2) != 0) mask |= 1U << p;
    }
    const Key key{weight, static_cast<int>(mod(bsum, 24)), mask};
    auto it = table.find(key);
    if (it == table.end() || l1 < it->second.l1 || (l1 == it->second.l1 && r < it->second.r)) {
      table[key] = ChainChoice{l1, r};
    }
    std::size_t i = 0;
    while (i < moves && k[i] == K) k[i++] = -K;
    if (i == moves) break;
    ++k[i];
  }
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  for (const auto& [key, c] : table) best = std::min(best, c.l1);
  for (auto it = table.begin(); it != table.end();) {
    it = it->second.l1 > best + slack ? table.erase(it) : std::next(it);
  }
  return table;
}

struct Partial {
  std::int64_t l1 = 0;
  std::vector<Key> picks;
};

std::optional<std::pair<ExponentMap, bool>> solve_level(const ExponentMap& pre, std::int64_t L) {
  std::int64_t v = 0;
  while ((L >> v) % 2 == 0) ++v;
  const std::int64_t odd_part = L >> v;
  const std::vector<std::int64_t> primes = prime_divisors(L);
  std::int64_t sigma_inf = 0;
  for (const auto& [delta, r] : pre) {
    if (L % delta != 0) return std::nullopt;
    sigma_inf += delta * r;
  }
  if (mod(sigma_inf, 24) != 0) return std::nullopt;

  const std::int64_t slack = 48;
  std::vector<std::int64_t> odds = divisors(odd_part);
  std::vector<ChainTable> tables;
  for (std::int64_t o : odds) {
    std::vector<std::int64_t> D(static_cast<std::size_t>(v + 1), 0);
    for (std::int64_t i = 0; i <= v; ++i) {
      const auto it = pre.find(o << i);
      if (it != pre.end()) D[static_cast<std::size_t>(i)] = it->second;
    }
    tables.push_back(chain_candidates(D, o, L, primes, slack));
  }

  // Combine all chains but the last.
  std::unordered_map<Key, Partial, KeyHash> states;
  states[Key{0, 0, 0}] = Partial{};
  for (std::size_t c = 0; c + 1 < tables.size(); ++c) {
    std::unordered_map<Key, Partial, KeyHash> next;
    for (const auto& [sk, sp] : states) {
      for (const auto& [ck, cc] : tables[c]) {
        const Key nk{sk.weight + ck.weight, (sk.b + ck.b) % 24, sk.mask ^ ck.mask};
        const std::int64_t l1 = sp.l1 + cc.l1;
        auto it = next.find(nk);
        if (it == next.end() || l1 < it->second.l1) {
          Partial p{l1, sp.picks};
          p.picks.push_back(ck);
          next[nk] = std::move(p);
        }
      }
    }
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    for (const auto& [k, p] : next) best = std::min(best, p.l1);
    for (auto it = next.begin(); it != next.end();) {
      it = it->second.l1 > best + 2 * slack ? next.erase(it) : std::next(it);
    }
    states = std::move(next);
  }

  // Close with the last chain: the weight and level residue are forced.
  const ChainTable& last = tables.back();
  struct Best {
    bool found = false;
    bool trivial = false;
    std::int64_t l1 = 0;
    std::vector<Key> picks;
  } best;
  // Deterministic scan order over the states.
  std::vector<std::pair<Key, const Partial*>> ordered;
  for (const auto& [k, p] : states) ordered.emplace_back(k, &p);
  std::sort(ordered.begin(), ordered.end(), [](const auto& x, const auto& y) {
    if (x.second->l1 != y.second->l1) return x.second->l1 < y.second->l1;
    if (x.first.weight != y.first.weight) return x.first.weight < y.first.weight;
    if (x.first.b != y.first.b) return x.first.b < y.first.b;
    return x.first.mask < y.first.mask;
  });
  const unsigned mask_count = 1U << primes.size();
  for (const auto& [sk, sp] : ordered) {
    for (unsigned m = 0; m < mask_count; ++m) {
      const Key need{-sk.weight, static_cast<int>(mod(-sk.b, 24)), m};
      const auto it = last.find(need);
      if (it == last.end()) continue;
      const bool trivial = (sk.mask ^ m) == 0;
      const std::int64_t l1 = sp->l1 + it->second.l1;
      const bool better = !best.found || (trivial && !best.trivial) ||
                          (trivial == best.trivial && l1 < best.l1);
      if (better) {
        best.found = true;
        best.trivial = trivial;
        best.l1 = l1;
        best.picks = sp->picks;
        best.picks.push_back(need);
      }
    }
  }
  if (!best.found) return std::nullopt;

  ExponentMap out;
  for (std::size_t c = 0; c < tables.size(); ++c) {
    const ChainChoice& choice = tables[c].at(best.picks[c]);
    for (std::size_t i = 0; i < choice.r.size(); ++i) {
      if (choice.r[i] != 0) out[odds[c] << i] = choice.r[i];
    }
  }
  return std::make_pair(out, best.trivial);
}

}  // namespace

std::optional<EtaQuotient> normalize_term(const ExponentMap& pre, std::int64_t L, int max_rounds) {
  // A term that already qualifies is kept as it stands.
  try {
    const EtaQuotient as_is(L, pre);
    const ModularityReport rep = ghn_check(as_is);
    if (rep.is_form && rep.weight2 == 0 && rep.character().trivial()) return as_is;
  } catch (const ContractViolation&) {
  }
  std::optional<EtaQuotient> fallback;
  for (int e = 0; e <= max_rounds; ++e) {
    const std::int64_t level = L << e;
    const auto solved = solve_level(pre, level);
    if (!solved || solved->first.empty()) continue;
    EtaQuotient form(level, solved->first);
    const ModularityReport rep = ghn_check(form);
    if (!rep.is_form || rep.weight2 != 0 || !frobenius_equivalent(pre, form.exps())) continue;
    if (solved->second) return form;
    if (!fallback) fallback = form;
  }
  return fallback;
}

std::int64_t pole_clearing_power(const std::vector<CuspRow>& table) {
  std::int64_t j = 0;
  for (const CuspRow& row : table) {
    std::vector<Rational> orders = row.rhs_orders;
    orders.push_back(row.lhs_bound);
    for (const Rational& ord : orders) {
      if (ord >= 0) continue;
      if (row.clearing_order <= 0) {
        throw NoClearingPower("eta(4z)^24 does not vanish at cusp " + std::to_string(row.cusp.c) +
                              "/" + std::to_string(row.cusp.d));
      }
      j = std::max(j, ceil(-ord / row.clearing_order));
    }
  }
  return j;
}

// ---------------------------------------------------------------------------
// Certification

namespace {

std::int64_t row_requirement(const CuspRow& row) { return pole_clearing_power({row}); }

}  // namespace

ProofCertificate certify(const std::string& case_id, const CertifyOptions& options) {
  return certify(find_claim(case_id), options);
}

ProofCertificate certify(const CongruenceClaim& claim, const CertifyOptions& options) {
  ProofCertificate cert;
  cert.case_id = claim.id;
  auto fail = [&](const std::string& stage, const std::string& why) {
    cert.proven = false;
    cert.failed_stage = stage;
    if (!why.empty()) cert.note += (cert.note.empty() ? "" : "; ") + why;
    return cert;
  };
  if (!claim.plan) return fail("catalog", "claim has no certification plan (numeric only)");
  const CertificationPlan& plan = *claim.plan;
  const RaduTuple& T = plan.tuple;
  cert.tuple = T;
  cert.s = plan.s;
  cert.j_published = plan.published_j;

  const auto* lhs_term = claim.lhs.size() == 1 ? std::get_if<DissectionTerm>(&claim.lhs[0]) : nullptr;
  if (!lhs_term || lhs_term->a != T.m || lhs_term->b != T.t || lhs_term->exps != ExponentMap{{1, T.r.at(1)}} ||
      T.M != 1) {
    return fail("catalog", "left-hand side does not match the Radu tuple");
  }

  cert.delta_star = delta_star_check(T);
  if (!cert.delta_star.passed()) return fail("delta_star", "");
  const auto P = p_set(T);
  cert.p_set.assign(P.begin(), P.end());
  if (P.size() != 1) return fail("p_set", "orbit has more than one residue");
  try {
    cert.nu = nu(T);
  } catch (const NonIntegralNu& e) {
    return fail("nu", e.what());
  }
  cert.conditions = multiplier_conditions(T, plan.s);
  if (!cert.conditions.passed()) return fail("multiplier_conditions", "");

  // F = eta^s q^{(24t + sigma_inf(r)) / (24m)} sum a(mn + t) q^n, i.e. eta^s
  // times the claim's left side times q^{x24 / 24}.
  const std::int64_t num = 24 * T.t + T.sigma_inf();
  if (num % T.m != 0) return fail("q_power", "dissection prefactor is not in (1/24)Z");
  const std::int64_t lhs_offset24 = num / T.m;  // q-power of the dissection, in 24ths
  const std::int64_t x24 = lhs_offset24 - 24 * lhs_term->shift;

  const std::int64_t base_level =
      lcm(4 * (claim.shape == ClaimShape::ThreeTerm ? claim.a * claim.a : claim.a), T.N);
  std::int64_t level = base_level;
  const bool use_published = !options.normalizer_only && !plan.published_rhs.empty();
  for (std::size_t i = 0; i < claim.rhs.size(); ++i) {
    const auto* term = std::get_if<ProductTerm>(&claim.rhs[i]);
    if (!term) return fail("rhs_terms", "right-hand side term is not an eta product");
    ExponentMap pre = plan.s;
    std::int64_t sum_delta_e = 0;
    for (const auto& [delta, e] : term->exps) {
      pre[delta] += e;
      sum_delta_e += delta * e;
    }
    for (auto it = pre.begin(); it != pre.end();) it = it->second == 0 ? pre.erase(it) : std::next(it);
    const std::int64_t residual24 = x24 + 24 * term->shift - sum_delta_e;
    if (residual24 != 0) {
      return fail("rhs_terms", "term " + std::to_string(i + 1) + " leaves a q-power " +
                                   std::to_string(residual24) + "/24");
    }
    std::optional<EtaQuotient> form;
    bool published = false;
    if (use_published) {
      if (plan.published_rhs.size() != claim.rhs.size()) return fail("rhs_terms", "published form count");
      form = plan.published_rhs[i];
      published = true;
      if (!frobenius_equivalent(pre, form->exps())) {
        return fail("rhs_terms", "published form " + std::to_string(i + 1) +
                                     " is not congruent to the constructed term");
      }
    } else {
      form = normalize_term(pre, base_level);
      if (!form) return fail("normalize", "no weight-zero modular rewrite for term " + std::to_string(i + 1));
    }
    const ModularityReport rep = ghn_check(*form);
    if (!rep.is_form || rep.weight2 != 0) {
      return fail("rhs_terms", "term " + std::to_string(i + 1) + " is not a weight-zero form");
    }
    level = lcm(level, form->level());
    cert.rhs_terms.push_back(TermRecord{pre, *form, published, rep});
  }
  cert.level = level;

  const EtaQuotient clearing(4, {{4, 24}});
  const EtaQuotient clearing_at = clearing.at_level(level);
  cert.lhs_min_bound = Rational(std::numeric_limits<std::int32_t>::max());
  cert.rhs_min_order = Rational(std::numeric_limits<std::int32_t>::max());
  for (const Cusp& cusp : cusp_set(level)) {
    CuspRow row;
    row.cusp = cusp;
    row.width = cusp_width(level, cusp);
    row.lhs_bound = order_lower_bound_at(T, plan.s, cusp.d, level);
    for (const TermRecord& term : cert.rhs_terms) {
      row.rhs_orders.push_back(ligozat_order(term.form.at_level(level), cusp));
      cert.rhs_min_order = std::min(cert.rhs_min_order, row.rhs_orders.back());
    }
    row.clearing_order = ligozat_order(clearing_at, cusp);
    cert.lhs_min_bound = std::min(cert.lhs_min_bound, row.lhs_bound);
    try {
      row.j_needed = row_requirement(row);
    } catch (const NoClearingPower& e) {
      return fail("pole_clearing", e.what());
    }
    cert.cusp_table.push_back(row);
  }
  cert.global_min_order = std::min(cert.lhs_min_bound, cert.rhs_min_order);
  cert.j_min = pole_clearing_power(cert.cusp_table);
  if (options.j_override) {
    cert.j_used = *options.j_override;
  } else if (plan.published_j >= cert.j_min) {
    cert.j_used = plan.published_j;
  } else {
    cert.j_used = cert.j_min;
    cert.note += (cert.note.empty() ? "" : "; ") +
                 std::string("published clearing power is below the computed requirement");
  }
  if (cert.j_used < cert.j_min) return fail("pole_clearing", "clearing power too small");
  cert.weight2 = 24 * cert.j_used;

  cert.same_character = true;
  for (const TermRecord& term : cert.rhs_terms) {
    if (!term.report.character().trivial()) cert.same_character = false;
  }
  cert.character_flag = plan.asserted_trivial_character && !cert.same_character;
  cert.sturm = sturm_bound(cert.weight2, level, cert.same_character);

  // Expansions on [0, B].
  const std::int64_t H = cert.sturm + 1;
  const std::int64_t j4 = 4 * cert.j_used;  // q-order of eta(4z)^{24j}
  const EtaQuotient s_quotient(T.N, plan.s);
  const std::int64_t lhs_total24 = s_quotient.sigma_inf() + lhs_offset24 + 96 * cert.j_used;
  if (mod(lhs_total24, 24) != 0) return fail("offsets", "left-hand side has a fractional q-power");
  cert.lhs_order_at_infinity = lhs_total24 / 24;
  bool offsets_ok = cert.lhs_order_at_infinity >= 0;
  std::int64_t rhs_min_base = std::numeric_limits<std::int64_t>::max();
  for (const TermRecord& term : cert.rhs_terms) {
    const std::int64_t base = term.form.sigma_inf() / 24;
    rhs_min_base = std::min(rhs_min_base, base);
    cert.rhs_orders_at_infinity.push_back(base + j4);
    if (base + j4 < 0) offsets_ok = false;
  }
  if (!offsets_ok) return fail("offsets", "a side still has a pole at infinity after clearing");

  const std::int64_t lhs_rel = H - cert.lhs_order_at_infinity;
  F2Series lhs(0);
  if (lhs_rel > 0) {
    const auto rel = static_cast<std::size_t>(lhs_rel);
    const auto need = static_cast<std::size_t>(T.m * (lhs_rel - 1) + T.t + 1);
    const F2Series part =
        dissect(multipartition_parity(-T.r.at(1), need).bits, T.m, T.t).truncated(rel).with_offset(lhs_offset24);
    lhs = part * expand(s_quotient, rel) * eta_power(4, 24 * cert.j_used, rel);
  }
  const std::int64_t rhs_rel = H - j4 - rhs_min_base;
  F2Series rhs(0);
  if (rhs_rel > 0) {
    F2Series sum;
    bool first = true;
    for (const TermRecord& term : cert.rhs_terms) {
      const std::int64_t rel = H - j4 - term.form.sigma_inf() / 24;
      if (rel <= 0) continue;
      const F2Series e = expand(term.form, static_cast<std::size_t>(rel));
      sum = first ? e : sum + e;
      first = false;
    }
    if (!first) rhs = sum * eta_power(4, 24 * cert.j_used, static_cast<std::size_t>(rhs_rel));
  }
  auto known_to = [&](const F2Series& f) { return f.trunc() == 0 ? H : f.horizon(); };
  if (known_to(lhs) < H || known_to(rhs) < H) return fail("compare", "expansion horizon too short");
  auto coefficients = [&](const F2Series& f) {
    F2Series out(static_cast<std::size_t>(H));
    if (f.trunc() == 0) return out;
    for (std::int64_t e = std::max<std::int64_t>(0, f.base_exponent()); e < H; ++e) {
      if (f.coeff(e)) out.set_bit(static_cast<std::size_t>(e));
    }
    return out;
  };
  const F2Series L0 = coefficients(lhs);
  const F2Series R0 = coefficients(rhs);
  cert.verified_from = 0;
  cert.verified_to = cert.sturm;
  cert.lhs_hash = range_hash(L0, 0, cert.sturm);
  cert.rhs_hash = range_hash(R0, 0, cert.sturm);
  cert.first_mismatch = first_mismatch(L0, R0);
  if (cert.first_mismatch) return fail("compare", "coefficients differ below the Sturm bound");
  cert.proven = true;
  return cert;
}

// ---------------------------------------------------------------------------
// cert-v1

namespace {

nlohmann::ordered_json exps_json(const ExponentMap& m) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [delta, r] : m) j[std::to_string(delta)] = r;
  return j;
}

std::string rat(const Rational& r) { return to_string(r); }

}  // namespace

nlohmann::ordered_json to_json(const ProofCertificate& c) {
  using J = nlohmann::ordered_json;
  J j;
  j["format"] = "cert-v1";
  j["case"] = c.case_id;
  j["verdict"] = c.proven ? "PROVEN" : "FAILED";
  j["failed_stage"] = c.failed_stage.empty() ? J(nullptr) : J(c.failed_stage);
  j["radu_tuple"] = {{"m", c.tuple.m}, {"M", c.tuple.M}, {"N", c.tuple.N}, {"t", c.tuple.t},
                     {"r", exps_json(c.tuple.r)}};
  j["delta_star"] = {{"passed", c.delta_star.passed()},
                     {"kappa", c.delta_star.kappa},
                     {"prime_support", c.delta_star.prime_support},
                     {"r_support", c.delta_star.r_support},
                     {"t_in_range", c.delta_star.t_in_range},
                     {"sigma0_clause", c.delta_star.sigma0_clause},
                     {"weight_clause", c.delta_star.weight_clause},
                     {"level_clause", c.delta_star.level_clause},
                     {"even_m_applies", c.delta_star.even_m_applies},
                     {"even_m_clause", c.delta_star.even_m_clause}};
  j["p_set"] = c.p_set;
  j["nu"] = c.nu;
  j["nu_note"] = "residue mod 24; nu = 24 is reported as 0";
  j["s_vector"] = exps_json(c.s);
  j["multiplier_conditions"] = {{"passed", c.conditions.passed()},
                    {"p_size", c.conditions.p_size},
                    {"weight_sum", c.conditions.weight_sum},
                    {"weight_value", c.conditions.weight_value},
                    {"sigma_inf_sum", c.conditions.sigma_inf_sum},
                    {"sigma_inf_value", c.conditions.sigma_inf_value},
                    {"sigma_0_sum", c.conditions.sigma_0_sum},
                    {"sigma_0_value", rat(c.conditions.sigma_0_value)},
                    {"square", c.conditions.square}};
  j["level"] = c.level;
  J terms = J::array();
  for (const TermRecord& t : c.rhs_terms) {
    terms.push_back({{"constructed", exps_json(t.pre)},
                     {"form", t.form.to_string()},
                     {"level", t.form.level()},
                     {"source", t.published ? "published" : "normalizer"},
                     {"weight2", t.report.weight2},
                     {"character_kernel", t.report.char_s_kernel}});
  }
  j["rhs_terms"] = terms;
  J rows = J::array();
  for (const CuspRow& r : c.cusp_table) {
    J orders = J::array();
    for (const Rational& o : r.rhs_orders) orders.push_back(rat(o));
    rows.push_back({{"cusp", std::to_string(r.cusp.c) + "/" + std::to_string(r.cusp.d)},
                    {"width", r.width},
                    {"lhs_bound", rat(r.lhs_bound)},
                    {"rhs_orders", orders},
                    {"clearing_order", rat(r.clearing_order)},
                    {"j_needed", r.j_needed}});
  }
  j["cusp_table"] = rows;
  j["min_order"] = {{"lhs_bound", rat(c.lhs_min_bound)},
                    {"rhs", rat(c.rhs_min_order)},
                    {"global", rat(c.global_min_order)}};
  j["pole_clearing"] = {{"j_min", c.j_min},
                        {"j_published", c.j_published},
                        {"j_used", c.j_used},
                        {"multiplier", "eta(4)^" + std::to_string(24 * c.j_used)}};
  j["weight2"] = c.weight2;
  j["same_character"] = c.same_character;
  j["sturm_branch"] = c.same_character ? "same" : "different";
  j["character_flag"] = c.character_flag;
  j["sturm_bound"] = c.sturm;
  j["order_at_infinity"] = {{"lhs", c.lhs_order_at_infinity}, {"rhs", c.rhs_orders_at_infinity}};
  j["verified_range"] = J::array({c.verified_from, c.verified_to});
  j["lhs_hash"] = c.lhs_hash;
  j["rhs_hash"] = c.rhs_hash;
  j["first_mismatch"] = c.first_mismatch ? J(*c.first_mismatch) : J(nullptr);
  j["note"] = c.note;
  return j;
}

}  // namespace pmod2
