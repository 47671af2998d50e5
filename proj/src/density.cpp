#include "pmod2/density.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <cmath>
#include <thread>

#include "pmod2/etaquot.hpp"
#include "pmod2/partitions.hpp"

namespace pmod2 {

SeriesSpec SeriesSpec::parse(const std::string& text) {
  std::string s;
  for (char c : text) {
    if (!std::isspace(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(c)));
  }
  if (s == "landau") return {Kind::Landau, 0};
  if (s.empty() || (s[0] != 'p' && s[0] != 'b')) {
    throw ParseError("unknown series '" + text + "' (expected p_t, b_m or landau)");
  }
  const Kind kind = s[0] == 'p' ? Kind::Multipartition : Kind::Regular;
  std::string rest = s.substr(1);
  if (!rest.empty() && rest[0] == '_') rest.erase(0, 1);
  if (rest.empty()) {
    if (kind == Kind::Regular) throw ParseError("b_m needs m");
    return {kind, 1};
  }
  if (!std::all_of(rest.begin(), rest.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
      rest.size() > 9) {
    throw ParseError("bad parameter in series '" + text + "'");
  }
  const std::int64_t param = std::stoll(rest);
  if (param < 1 || (kind == Kind::Regular && param < 2)) {
    throw ParseError("series parameter out of range in '" + text + "'");
  }
  return {kind, param};
}

std::string SeriesSpec::id() const {
  switch (kind) {
    case Kind::Multipartition:
      return "p_" + std::to_string(param);
    case Kind::Regular:
      return "b_" + std::to_string(param);
    case Kind::Landau:
      return "landau";
  }
  return "";
}

namespace {

F2Series landau_series(std::size_t x) {
  // (q)^4 + q (q)^8 (q^5)^4, both pieces known below x.
  const F2Series first = expand_product({{1, 4}}, x);
  if (x <= 1) return first;
  const F2Series second = expand_product({{1, 8}, {5, 4}}, x - 1).shifted(1);
  return (first + second).truncated(x);
}

}  // namespace

F2Series series_bits(const SeriesSpec& spec, std::size_t x) {
  switch (spec.kind) {
    case SeriesSpec::Kind::Multipartition:
      return multipartition_parity(spec.param, x).bits;
    case SeriesSpec::Kind::Regular:
      return regular_parity(spec.param, x).bits;
    case SeriesSpec::Kind::Landau:
      return landau_series(x);
  }
  return F2Series(x);
}

std::int64_t odd_count(const F2Series& f, std::int64_t hi, unsigned threads) {
  if (f.offset24() != 0) throw ContractViolation("odd_count: series must start at q^0");
  if (hi < 0 || static_cast<std::size_t>(hi) > f.trunc()) {
    throw ContractViolation("odd_count: limit beyond the known horizon");
  }
  const auto words = f.words();
  const std::size_t full = static_cast<std::size_t>(hi) / F2Series::kWordBits;
  const std::size_t tail = static_cast<std::size_t>(hi) % F2Series::kWordBits;
  threads = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(full / 4096 + 1)));
  std::vector<std::int64_t> partial(threads, 0);
  auto work = [&](unsigned w) {
    const std::size_t lo = full * w / threads, up = full * (w + 1) / threads;
    std::int64_t c = 0;
    for (std::size_t i = lo; i < up; ++i) c += std::popcount(words[i]);
    partial[w] = c;
  };
  if (threads == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  std::int64_t total = 0;
  for (std::int64_t c : partial) total += c;
  if (tail != 0) total += std::popcount(words[full] & ((F2Series::Word{1} << tail) - 1));
  return total;
}

DensityEstimate odd_density(const F2Series& bits, const std::string& id, std::int64_t x,
                            unsigned threads) {
  if (x < 1) throw ContractViolation("odd_density: x must be positive");
  DensityEstimate d;
  d.series = id;
  d.x = x;
  for (std::int64_t div : {10, 4, 2}) {
    const std::int64_t cx = x / div;
    if (cx < 1) continue;
    const std::int64_t c = odd_count(bits, cx, threads);
    d.checkpoints.push_back({cx, c, Rational(c, cx)});
  }
  d.odd_count = odd_count(bits, x, threads);
  d.ratio = Rational(d.odd_count, x);
  return d;
}

DensityEstimate odd_density(const SeriesSpec& spec, std::int64_t x, unsigned threads) {
  if (x < 1) throw ContractViolation("odd_density: x must be positive");
  return odd_density(series_bits(spec, static_cast<std::size_t>(x)), spec.id(), x, threads);
}

bool strictly_decreasing(const DensityEstimate& d) {
  std::vector<Rational> ratios;
  for (const Checkpoint& c : d.checkpoints) ratios.push_back(c.ratio);
  ratios.push_back(d.ratio);
  for (std::size_t i = 1; i < ratios.size(); ++i) {
    if (!(ratios[i] < ratios[i - 1])) return false;
  }
  return true;
}

std::vector<ConjectureRow> conjecture_table(const std::vector<std::int64_t>& ts, std::int64_t x,
                                            unsigned threads) {
  std::vector<ConjectureRow> rows;
  for (std::int64_t t : ts) {
    if (t < 1) throw ContractViolation("conjecture_table: t must be positive");
    ConjectureRow row;
    row.t = t;
    row.t0 = t;
    while (row.t0 % 2 == 0) {
      row.t0 /= 2;
      ++row.k;
    }
    row.predicted = Rational(1, std::int64_t{2} << row.k);
    row.estimate = odd_density(SeriesSpec{SeriesSpec::Kind::Multipartition, t}, x, threads);
    row.deviation = boost::rational_cast<double>(row.estimate.ratio - row.predicted);
    const std::int64_t step = std::int64_t{1} << row.k;
    const std::int64_t reduced = (x + step - 1) / step;
    const F2Series base = multipartition_parity(row.t0, static_cast<std::size_t>(reduced)).bits;
    row.frobenius_consistent = odd_count(base, reduced, threads) == row.estimate.odd_count;
    rows.push_back(std::move(row));
  }
  return rows;
}

RegularRelationReport regular_relation_check(std::int64_t x, unsigned threads) {
  if (x < 4) throw ContractViolation("regular_relation_check: x too small");
  RegularRelationReport r;
  r.x = x;
  const auto ux = static_cast<std::size_t>(x);
  const F2Series b5 = regular_parity(5, ux).bits;
  const F2Series b20 = regular_parity(20, ux).bits;
  r.b5 = odd_density(b5, "b_5", x, threads);
  r.b20 = odd_density(b20, "b_20", x, threads);
  r.b7 = odd_density(SeriesSpec{SeriesSpec::Kind::Regular, 7}, x, threads);
  r.b28 = odd_density(SeriesSpec{SeriesSpec::Kind::Regular, 28}, x, threads);
  auto absval = [](const Rational& q) { return q < 0 ? -q : q; };
  r.residual_5_20 = absval(r.b5.ratio - r.b20.ratio / 4);
  r.residual_7_28 = absval(r.b7.ratio - r.b28.ratio / 2);

  // b_5 + the density-zero part must be q^3 sum b_20(n) q^(4n).
  const F2Series lhs = (b5 + landau_series(ux)).truncated(ux);
  const std::size_t need = (ux + 3) / 4;
  const F2Series rhs = inflate(b20.truncated(std::min(need, b20.trunc())), 4).shifted(3);
  F2Series rhs_full(ux);
  for (std::int64_t e = 3; e < x; ++e) {
    if (rhs.coeff(e)) rhs_full.set_bit(static_cast<std::size_t>(e));
  }
  r.identity_mismatch = first_mismatch(lhs, rhs_full);
  r.identity_holds = !r.identity_mismatch.has_value();
  return r;
}

DensityEstimate landau_check(std::int64_t x, unsigned threads) {
  if (x < 1) throw ContractViolation("landau_check: x must be positive");
  return odd_density(SeriesSpec{SeriesSpec::Kind::Landau, 0}, x, threads);
}

namespace {

nlohmann::ordered_json ratio_json(const Rational& q) {
  return {{"exact", to_string(q)}, {"approx", boost::rational_cast<double>(q)}};
}

}  // namespace

nlohmann::ordered_json to_json(const DensityEstimate& d) {
  nlohmann::ordered_json j;
  j["series"] = d.series;
  j["x"] = d.x;
  j["odd_count"] = d.odd_count;
  j["ratio"] = ratio_json(d.ratio);
  auto cps = nlohmann::ordered_json::array();
  for (const Checkpoint& c : d.checkpoints) {
    cps.push_back({{"x", c.x}, {"odd_count", c.odd_count}, {"ratio", ratio_json(c.ratio)}});
  }
  j["checkpoints"] = cps;
  return j;
}

nlohmann::ordered_json to_json(const ConjectureRow& row) {
  nlohmann::ordered_json j;
  j["t"] = row.t;
  j["k"] = row.k;
  j["t0"] = row.t0;
  j["predicted"] = to_string(row.predicted);
  j["estimate"] = to_json(row.estimate);
  j["deviation"] = row.deviation;
  j["frobenius_consistent"] = row.frobenius_consistent;
  return j;
}

nlohmann::ordered_json to_json(const RegularRelationReport& r) {
  nlohmann::ordered_json j;
  j["x"] = r.x;
  j["b_5"] = to_json(r.b5);
  j["b_20"] = to_json(r.b20);
  j["b_7"] = to_json(r.b7);
  j["b_28"] = to_json(r.b28);
  j["residual_5_20"] = ratio_json(r.residual_5_20);
  j["residual_7_28"] = ratio_json(r.residual_7_28);
  j["identity_holds"] = r.identity_holds;
  j["identity_mismatch"] = r.identity_mismatch ? nlohmann::ordered_json(*r.identity_mismatch)
                                               : nlohmann::ordered_json(nullptr);
  return j;
}

}  // namespace pmod2
