#include "pmod2/radu.hpp"

#include <sstream>

namespace pmod2 {

RaduTuple::RaduTuple(std::int64_t m_, std::int64_t M_, std::int64_t N_, std::int64_t t_,
                     ExponentMap r_)
    : m(m_), M(M_), N(N_), t(t_) {
  if (m < 1 || M < 1 || N < 1) throw ContractViolation("RaduTuple: m, M, N must be positive");
  if (t < 0 || t >= m) throw ContractViolation("RaduTuple: t must lie in [0, m)");
  for (const auto& [delta, value] : r_) {
    if (delta < 1 || M % delta != 0) {
      throw ContractViolation("RaduTuple: r indexed by a non-divisor of M");
    }
  }
  for (std::int64_t d : divisors(M)) {
    const auto it = r_.find(d);
    r[d] = it == r_.end() ? 0 : it->second;
  }
}

std::int64_t RaduTuple::weight() const {
  std::int64_t w = 0;
  for (const auto& [delta, v] : r) w += v;
  return w;
}

std::int64_t RaduTuple::sigma_inf() const {
  std::int64_t s = 0;
  for (const auto& [delta, v] : r) s += delta * v;
  return s;
}

std::int64_t RaduTuple::sigma_0() const {
  std::int64_t s = 0;
  for (const auto& [delta, v] : r) s += (M / delta) * v;
  return s;
}

std::string RaduTuple::to_string() const {
  std::ostringstream os;
  os << "(" << m << "," << M << "," << N << "," << t << ",(";
  bool first = true;
  for (const auto& [delta, v] : r) {
    os << (first ? "" : ",") << v;
    first = false;
  }
  os << "))";
  return os.str();
}

SVector make_svector(std::int64_t N, const std::vector<std::int64_t>& values) {
  const auto divs = divisors(N);
  if (divs.size() != values.size()) {
    throw ContractViolation("make_svector: need one entry per divisor of " + std::to_string(N));
  }
  SVector s;
  for (std::size_t i = 0; i < divs.size(); ++i) s[divs[i]] = values[i];
  return s;
}

std::vector<std::string> DeltaStarReport::failures() const {
  std::vector<std::string> out;
  if (!prime_support) out.emplace_back("prime_support");
  if (!r_support) out.emplace_back("r_support");
  if (!t_in_range) out.emplace_back("t_in_range");
  if (!sigma0_clause) out.emplace_back("sigma0_clause");
  if (!weight_clause) out.emplace_back("weight_clause");
  if (!level_clause) out.emplace_back("level_clause");
  if (!even_m_clause) out.emplace_back("even_m_clause");
  return out;
}

DeltaStarReport delta_star_check(const RaduTuple& T) {
  DeltaStarReport rep;
  const std::int64_t m = T.m, N = T.N, M = T.M;
  rep.prime_support = true;
  for (std::int64_t p : prime_divisors(m)) {
    if (N % p != 0) rep.prime_support = false;
  }
  rep.r_support = true;
  for (const auto& [delta, v] : T.r) {
    if (v != 0 && (m * N) % delta != 0) rep.r_support = false;
  }
  rep.t_in_range = T.t >= 0 && T.t < m;
  rep.kappa = gcd(1 - m * m, 24);
  const std::int64_t k = rep.kappa;
  rep.sigma0_clause = mod(k * m * N * N * T.sigma_0(), 24 * M) == 0;
  rep.weight_clause = mod(k * N * T.weight(), 8) == 0;
  const std::int64_t g = gcd(k * (-24 * T.t - T.sigma_inf()), 24 * m);
  rep.level_clause = N % (24 * m / g) == 0;
  if (m % 2 == 0) {
    rep.even_m_applies = true;
    std::int64_t prod_twos = 0;
    std::int64_t odd_part = 1;
    for (const auto& [delta, v] : T.r) {
      for (const auto& [p, e] : factorize(delta)) {
        const std::int64_t times = e * (v < 0 ? -v : v);
        if (p == 2) {
          prod_twos += times;
        } else {
          for (std::int64_t i = 0; i < times; ++i) odd_part = odd_part * p % 8;
        }
      }
    }
    rep.even_m_clause = (mod(k * N, 4) == 0 && mod(N * prod_twos, 8) == 0) ||
                        (prod_twos % 2 == 0 && mod(N * (1 - odd_part), 8) == 0);
  }
  return rep;
}

std::set<std::int64_t> p_set(const RaduTuple& T) {
  std::set<std::int64_t> out;
  for (std::int64_t a = 1; a <= 24 * T.m; ++a) {
    if (gcd(a, 6) != 1 || gcd(a, T.M) != 1) continue;
    out.insert(mod(T.t * a * a + ((a * a - 1) / 24) * T.sigma_inf(), T.m));
  }
  return out;
}

std::int64_t nu(const RaduTuple& T) {
  Rational total(0);
  for (std::int64_t u : p_set(T)) {
    total += Rational((1 - T.m * T.m) * (24 * u + T.sigma_inf()), T.m);
  }
  if (total.denominator() != 1) {
    throw NonIntegralNu("nu is not an integer for " + T.to_string() + ": " + to_string(total));
  }
  return mod(total.numerator(), 24);
}

MultiplierReport multiplier_conditions(const RaduTuple& T, const SVector& s) {
  for (const auto& [delta, v] : s) {
    if (T.N % delta != 0) throw ContractViolation("multiplier_conditions: s indexed by a non-divisor of N");
  }
  MultiplierReport rep;
  rep.p_size = static_cast<std::int64_t>(p_set(T).size());
  rep.nu = nu(T);
  const std::int64_t P = rep.p_size;
  std::int64_t ws = 0, sis = 0, s0s = 0;
  for (const auto& [delta, v] : s) {
    ws += v;
    sis += delta * v;
    s0s += (T.N / delta) * v;
  }
  rep.weight_value = P * T.weight() + ws;
  rep.weight_sum = rep.weight_value == 0;
  rep.sigma_inf_value = rep.nu + P * T.m * T.sigma_inf() + sis;
  rep.sigma_inf_sum = mod(rep.sigma_inf_value, 24) == 0;
  rep.sigma_0_value = Rational(P * T.m * T.N * T.sigma_0(), T.M) + Rational(s0s);
  rep.sigma_0_sum = rep.sigma_0_value.denominator() == 1 &&
                    mod(rep.sigma_0_value.numerator(), 24) == 0;
  std::map<std::int64_t, std::int64_t> exps;
  for (const auto& [delta, v] : T.r) {
    const std::int64_t times = P * (v < 0 ? -v : v);
    for (const auto& [p, e] : factorize(T.m * delta)) exps[p] += e * times;
  }
  for (const auto& [delta, v] : s) {
    const std::int64_t times = v < 0 ? -v : v;
    for (const auto& [p, e] : factorize(delta)) exps[p] += e * times;
  }
  rep.square = true;
  for (const auto& [p, e] : exps) {
    if (e % 2 != 0) rep.square = false;
  }
  return rep;
}

std::optional<SVector> search_s_vector(const RaduTuple& T, std::int64_t bound) {
  const auto divs = divisors(T.N);
  const std::int64_t P = static_cast<std::int64_t>(p_set(T).size());
  const std::int64_t target = -P * T.weight();
  std::vector<std::int64_t> values(divs.size(), -bound);
  const std::size_t free = divs.size() - 1;
  while (true) {
    std::int64_t partial = 0;
    for (std::size_t i = 0; i < free; ++i) partial += values[i];
    const std::int64_t last = target - partial;
    if (last >= -bound && last <= bound) {
      values[free] = last;
      const SVector s = make_svector(T.N, values);
      if (multiplier_conditions(T, s).passed()) return s;
    }
    std::size_t i = free;
    while (i > 0) {
      --i;
      if (values[i] < bound) {
        ++values[i];
        break;
      }
      values[i] = -bound;
      if (i == 0) return std::nullopt;
    }
    if (free == 0) return std::nullopt;
  }
}

Rational order_lower_bound_at(const RaduTuple& T, const SVector& s, std::int64_t c,
                         std::int64_t level) {
  if (level % T.N != 0 || level % c != 0) {
    throw ContractViolation("order_lower_bound_at: need T.N | level and c | level");
  }
  const std::int64_t P = static_cast<std::int64_t>(p_set(T).size());
  std::optional<Rational> best;
  for (std::int64_t d : divisors(T.m)) {
    if (gcd(d, c) != 1) continue;
    Rational sum(0);
    for (const auto& [delta, v] : T.r) {
      const std::int64_t g = gcd(delta * d, T.m * c);
      sum += Rational(v * g * g, delta * T.m);
    }
    sum /= 24;
    if (!best || sum < *best) best = sum;
  }
  Rational s_part(0);
  for (const auto& [delta, v] : s) {
    if (level % delta != 0) throw ContractViolation("order_lower_bound_at: s key must divide level");
    const std::int64_t g = gcd(delta, c);
    s_part += Rational(v * g * g, delta);
  }
  s_part /= 24;
  return Rational(level / gcd(c * c, level)) * (Rational(P) * *best + s_part);
}

Rational order_lower_bound(const RaduTuple& T, const SVector& s) {
  std::optional<Rational> best;
  for (std::int64_t c : divisors(T.N)) {
    const Rational b = order_lower_bound_at(T, s, c, T.N);
    if (!best || b < *best) best = b;
  }
  return *best;
}

}  // namespace pmod2
