#include "pmod2/etaquot.hpp"

#include <cctype>
#include <sstream>

namespace pmod2 {

EtaQuotient::EtaQuotient(std::int64_t level, ExponentMap exps) : level_(level) {
  if (level < 1) throw ContractViolation("eta quotient level must be positive");
  for (const auto& [delta, r] : exps) {
    if (delta < 1 || level % delta != 0) {
      throw ContractViolation("eta(" + std::to_string(delta) +
                              "z) does not divide level " + std::to_string(level));
    }
    if (r != 0) exps_[delta] = r;
  }
  if (exps_.empty()) {
    throw ContractViolation("eta quotient needs a nonzero exponent");
  }
}

std::int64_t EtaQuotient::exponent(std::int64_t delta) const {
  const auto it = exps_.find(delta);
  return it == exps_.end() ? 0 : it->second;
}

std::int64_t EtaQuotient::weight2() const {
  std::int64_t w = 0;
  for (const auto& [delta, r] : exps_) w += r;
  return w;
}

std::int64_t EtaQuotient::sigma_inf() const {
  std::int64_t s = 0;
  for (const auto& [delta, r] : exps_) s += delta * r;
  return s;
}

std::int64_t EtaQuotient::sigma_0() const {
  std::int64_t s = 0;
  for (const auto& [delta, r] : exps_) s += (level_ / delta) * r;
  return s;
}

EtaQuotient EtaQuotient::at_level(std::int64_t multiple) const {
  if (multiple % level_ != 0) {
    throw ContractViolation("at_level: new level must be a multiple");
  }
  return EtaQuotient(multiple, exps_);
}

std::string exponent_map_to_string(const ExponentMap& exps) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [delta, r] : exps) {
    if (r == 0) continue;
    os << (first ? "" : " * ") << "eta(" << delta << ")";
    if (r != 1) os << "^" << r;
    first = false;
  }
  if (first) os << "1";
  return os.str();
}

std::string EtaQuotient::to_string() const {
  return exponent_map_to_string(exps_) + " @ N=" + std::to_string(level_);
}

EtaQuotient operator*(const EtaQuotient& a, const EtaQuotient& b) {
  ExponentMap m = a.exps_;
  for (const auto& [delta, r] : b.exps_) m[delta] += r;
  return EtaQuotient(lcm(a.level_, b.level_), m);
}

namespace {

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) {}

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool done() {
    skip_ws();
    return pos_ >= s_.size();
  }
  bool accept(char c) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  bool accept_word(const std::string& w) {
    skip_ws();
    if (s_.compare(pos_, w.size(), w) == 0) {
      pos_ += w.size();
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  std::int64_t integer() {
    skip_ws();
    std::size_t start = pos_;
    if (pos_ < s_.size() && (s_[pos_] == '-' || s_[pos_] == '+')) ++pos_;
    const std::size_t digits = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    if (pos_ == digits) fail("expected an integer");
    return std::stoll(s_.substr(start, pos_ - start));
  }
  [[noreturn]] void fail(const std::string& what) const {
    throw ParseError("eta quotient parse error at column " + std::to_string(pos_ + 1) +
                     ": " + what + " in \"" + s_ + "\"");
  }

 private:
  const std::string& s_;
  std::size_t pos_ = 0;
};

}  // namespace

EtaQuotient EtaQuotient::parse(const std::string& text) {
  Lexer lex(text);
  ExponentMap exps;
  std::int64_t sign = 1;
  std::int64_t natural_level = 1;
  while (true) {
    if (!lex.accept_word("eta")) lex.fail("expected eta(...)");
    lex.expect('(');
    const std::int64_t delta = lex.integer();
    if (delta < 1) lex.fail("eta argument must be positive");
    lex.expect(')');
    std::int64_t r = 1;
    if (lex.accept('^')) {
      if (lex.accept('(')) {
        r = lex.integer();
        lex.expect(')');
      } else {
        r = lex.integer();
      }
    }
    exps[delta] += sign * r;
    natural_level = lcm(natural_level, delta);
    if (lex.accept('*')) {
      sign = 1;
    } else if (lex.accept('/')) {
      sign = -1;
    } else {
      break;
    }
  }
  std::int64_t level = natural_level;
  if (lex.accept('@')) {
    if (!lex.accept('N')) lex.fail("expected N=<level>");
    lex.expect('=');
    level = lex.integer();
  }
  if (!lex.done()) lex.fail("unexpected trailing input");
  try {
    return EtaQuotient(level, exps);
  } catch (const ContractViolation& e) {
    throw ParseError(e.what());
  }
}

ModularityReport ghn_check(const EtaQuotient& e) {
  ModularityReport rep;
  rep.cond_A = mod(e.sigma_inf(), 24);
  rep.cond_B = mod(e.sigma_0(), 24);
  rep.is_form = rep.cond_A == 0 && rep.cond_B == 0;
  rep.weight2 = e.weight2();
  rep.char_k = static_cast<int>(mod(floor_div(rep.weight2, 2), 2));
  // Squarefree kernel of s = prod delta^{r_delta}: primes whose total
  // exponent is odd.
  std::map<std::int64_t, std::int64_t> total;
  for (const auto& [delta, r] : e.exps()) {
    for (const auto& [p, k] : factorize(delta)) total[p] += k * r;
  }
  std::int64_t kernel = 1;
  for (const auto& [p, k] : total) {
    if (mod(k, 2) != 0) kernel *= p;
  }
  rep.char_s_kernel = rep.char_k == 1 ? -kernel : kernel;
  return rep;
}

std::vector<Cusp> cusp_set(std::int64_t level) {
  std::vector<Cusp> out;
  for (std::int64_t d : divisors(level)) {
    const std::int64_t g = gcd(d, level / d);
    for (std::int64_t c0 = 0; c0 < g || (g == 1 && c0 == 0); ++c0) {
      if (gcd(c0, g) != 1) continue;
      std::int64_t c = c0;
      while (gcd(c, d) != 1) c += g;
      out.push_back({c, d});
      if (g == 1) break;
    }
  }
  return out;
}

std::int64_t cusp_width(std::int64_t level, const Cusp& cusp) {
  return level / gcd(cusp.d * cusp.d, level);
}

Rational ligozat_order(const EtaQuotient& e, const Cusp& cusp) {
  const std::int64_t N = e.level();
  const std::int64_t d = cusp.d;
  if (N % d != 0 || gcd(cusp.c, d) != 1) {
    throw ContractViolation("ligozat_order: cusp denominator must divide the level");
  }
  Rational sum(0);
  for (const auto& [delta, r] : e.exps()) {
    const std::int64_t g = gcd(d, delta);
    sum += Rational(g * g * r, gcd(d, N / d) * d * delta);
  }
  return Rational(N, 24) * sum;
}

F2Series expand_product(const ExponentMap& exps, std::size_t trunc) {
  F2Series numerator = F2Series::one(trunc);
  F2Series denominator = F2Series::one(trunc);
  for (const auto& [delta, r] : exps) {
    if (r == 0) continue;
    F2Series factor = eta_power(delta, r > 0 ? r : -r, trunc).with_offset(0);
    if (r > 0) {
      numerator = numerator * factor;
    } else {
      denominator = denominator * factor;
    }
  }
  return (numerator * inv(denominator)).truncated(trunc);
}

F2Series expand(const EtaQuotient& e, std::size_t trunc) {
  return expand_product(e.exps(), trunc).with_offset(e.sigma_inf());
}

bool frobenius_equivalent(const ExponentMap& a, const ExponentMap& b) {
  // The substitutions generate exactly the vectors whose weighted sums
  // sum_i D(o 2^i) 2^i vanish along every chain o, 2o, 4o, ... (o odd).
  std::map<std::int64_t, std::int64_t> chain;
  auto accumulate = [&](const ExponentMap& m, std::int64_t sign) {
    for (const auto& [delta, r] : m) {
      std::int64_t odd = delta;
      while (odd % 2 == 0) odd /= 2;
      chain[odd] += sign * (delta / odd) * r;
    }
  };
  accumulate(a, 1);
  accumulate(b, -1);
  for (const auto& [odd, v] : chain) {
    if (v != 0) return false;
  }
  return true;
}

}  // namespace pmod2
