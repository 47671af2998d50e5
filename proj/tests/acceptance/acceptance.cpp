// One line per acceptance criterion; exit status is nonzero when any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>

#include <json.hpp>

#include "oracles.hpp"
#include "pmod2/certifier.hpp"
#include "pmod2/cli.hpp"
#include "pmod2/density.hpp"
#include "pmod2/partitions.hpp"

using namespace pmod2;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v, int digits = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

fs::path scratch_dir() {
  const fs::path d = fs::temp_directory_path() / "pmod2_acceptance";
  fs::create_directories(d);
  return d;
}

int certify_all_to(const fs::path& out, int threads) {
  std::ostringstream o, e;
  return cli::run({"certify", "--all", "--threads", std::to_string(threads), "--format", "structured",
                   "--out", out.string()},
                  o, e);
}

Outcome catalog_reproduction() {
  const auto t0 = std::chrono::steady_clock::now();
  const fs::path out = scratch_dir() / "all.json";
  fs::remove(out);
  const int code = certify_all_to(out, 8);
  const double secs = seconds_since(t0);
  if (code != 0) return {false, "certify --all exited with " + std::to_string(code)};
  const auto j = nlohmann::json::parse(slurp(out));
  int two = 0, three = 0, proven = 0;
  for (const auto& cert : j) {
    const CongruenceClaim& c = find_claim(cert["case"].get<std::string>());
    two += c.shape == ClaimShape::TwoTerm;
    three += c.shape == ClaimShape::ThreeTerm;
    proven += cert["verdict"] == "PROVEN";
  }
  const bool ok = two == 12 && three == 2 && proven == 14 && secs < 300;
  return {ok, std::to_string(proven) + "/14 PROVEN (" + std::to_string(two) + " two-term, " +
                  std::to_string(three) + " three-term) in " + fmt(secs, 2) + " s (limit 300 s)"};
}

Outcome worked_constants() {
  std::string why;
  auto need = [&](bool cond, const std::string& what) {
    if (!cond) why += (why.empty() ? "" : "; ") + what;
  };
  const ProofCertificate a = certify("11,6,1");
  need(a.proven, "11,6,1 not proven");
  need(a.p_set == std::vector<std::int64_t>{6}, "11,6,1 P-set");
  need(a.nu % 24 == 0, "11,6,1 nu");
  need(a.s == SVector{{1, 10}, {2, 2}, {11, 11}, {22, -22}}, "11,6,1 s");
  need(a.conditions.weight_sum && a.conditions.sigma_inf_sum && a.conditions.sigma_0_sum &&
           a.conditions.square,
       "11,6,1 conditions");
  need(a.global_min_order == Rational(-15), "11,6,1 min order " + to_string(a.global_min_order));
  need(24 * a.j_used == 360, "11,6,1 clearing power");
  need(a.sturm == 1080, "11,6,1 Sturm bound " + std::to_string(a.sturm));
  const ProofCertificate b = certify("7,1,3");
  need(b.proven, "7,1,3 not proven");
  need(b.p_set == std::vector<std::int64_t>{1}, "7,1,3 P-set");
  need(b.s == SVector{{1, 10}, {2, 10}, {7, 5}, {14, -22}}, "7,1,3 s");
  need(24 * b.j_used == 264, "7,1,3 clearing power");
  need(b.sturm == 6336, "7,1,3 Sturm bound " + std::to_string(b.sturm));
  need(!b.same_character, "7,1,3 character branch");
  if (!why.empty()) return {false, why};
  return {true, "11,6,1: P={6}, nu=0 mod 24, s=(10,2,11,-22), min order -15, eta(4z)^360, B=1080; "
                "7,1,3: P={1}, s=(10,10,5,-22), eta(4z)^264, B=6336 (different character)"};
}

Outcome generic_rows() {
  std::string bad;
  for (std::int64_t m : {5, 7, 11, 13, 17, 19, 23}) {
    const CongruenceClaim* claim = nullptr;
    for (const CongruenceClaim& c : catalog()) {
      if (c.shape == ClaimShape::TwoTerm && c.a == m && c.t == 1) claim = &c;
    }
    const SVector s{{1, m - 1}, {2, 2}, {m, m}, {2 * m, -2 * m}};
    const std::int64_t j = (m * m - 1) / 8;
    bool ok = claim != nullptr && claim->plan->s == s && multiplier_conditions(claim->plan->tuple, s).passed();
    if (ok) {
      CertifyOptions opt;
      opt.j_override = j;
      const ProofCertificate c = certify(*claim, opt);
      ok = c.proven && c.j_min <= j;
    }
    if (!ok) bad += " m=" + std::to_string(m);
  }
  if (!bad.empty()) return {false, "failed for" + bad};
  return {true, "m in {5,7,11,13,17,19,23}: s=(m-1,2,m,-2m) passes all four conditions, j=(m^2-1)/8 clears every cusp"};
}

Outcome numeric_suite() {
  const auto t0 = std::chrono::steady_clock::now();
  int total = 0, passed = 0;
  std::string bad;
  for (const CongruenceClaim& c : catalog()) {
    ++total;
    const NumericResult r = numeric_verify(c, 50000);
    if (r.passed) {
      ++passed;
    } else {
      bad += " " + c.id;
    }
  }
  const double secs = seconds_since(t0);
  const bool ok = passed == total && secs < 60;
  return {ok, std::to_string(passed) + "/" + std::to_string(total) + " claims agree to T=50000 in " +
                  fmt(secs, 2) + " s (limit 60 s)" + (bad.empty() ? "" : "; mismatches:" + bad)};
}

Outcome oracle_equivalence() {
  const bool recurrence = partition_parity(100000).bits == inv(euler(100000));
  bool brute = true;
  for (int t = 1; t <= 5; ++t) {
    const auto counts = oracle::coloured_partitions(t, 61);
    const ParityTable table = multipartition_parity(t, 61);
    for (int n = 0; n <= 60; ++n) brute = brute && table.odd(n) == ((counts[n] & 1) == 1);
  }
  return {recurrence && brute, std::string("pentagonal recurrence vs inversion at x=100000: ") +
                                   (recurrence ? "identical" : "DIFFER") +
                                   "; p_t vs coloured enumeration (t<=5, n<=60): " + (brute ? "identical" : "DIFFER")};
}

Outcome property_suite() {
  std::mt19937_64 rng(20240501);
  int failures = 0;
  std::uniform_int_distribution<std::size_t> len(1, 700);
  for (int i = 0; i < 1000; ++i) {
    const F2Series f = oracle::random_series(rng, len(rng), false);
    failures += !(pow(f, 2) == inflate(f, 2));
  }
  for (int i = 0; i < 1000; ++i) {
    const F2Series f = oracle::random_series(rng, 512, true);
    failures += !(f * inv(f) == F2Series::one(512));
  }
  for (int i = 0; i < 1000; ++i) {
    const F2Series f = oracle::random_series(rng, len(rng), false);
    const std::int64_t a = 1 + i % 8;
    F2Series sum(f.trunc());
    for (std::int64_t b = 0; b < a; ++b) {
      const F2Series part = inflate(dissect(f, a, b), a).shifted(b);
      for (std::int64_t e = part.base_exponent(); e < part.horizon() && e < static_cast<std::int64_t>(f.trunc()); ++e) {
        if (part.coeff(e)) sum.flip_bit(static_cast<std::size_t>(e));
      }
    }
    failures += !(sum == f);
  }
  const std::vector<std::int64_t> levels{4, 12, 20, 28, 44, 108};
  std::uniform_int_distribution<std::int64_t> ex(-30, 30);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t N = levels[rng() % levels.size()];
    ExponentMap a, b, sum;
    for (std::int64_t d : divisors(N)) {
      a[d] = ex(rng);
      b[d] = ex(rng);
      sum[d] = a[d] + b[d];
    }
    try {
      const EtaQuotient ea(N, a), eb(N, b), es(N, sum);
      for (const Cusp& c : cusp_set(N)) {
        failures += !(ligozat_order(es, c) == ligozat_order(ea, c) + ligozat_order(eb, c));
      }
    } catch (const ContractViolation&) {
      // All-zero exponent vectors are not quotients; draw again.
      --i;
    }
  }
  std::uniform_int_distribution<std::int64_t> val(-500, 500), pos(1, 500);
  for (int i = 0; i < 1000; ++i) {
    const std::int64_t x = val(rng), y = val(rng), n = pos(rng), m = pos(rng);
    failures += kronecker(x * y, n) != kronecker(x, n) * kronecker(y, n);
    failures += kronecker(x, n * m) != kronecker(x, n) * kronecker(x, m);
  }
  return {failures == 0, "Frobenius, inverse round-trip, dissection (a<=8), Ligozat linearity, kronecker: "
                             "1000 instances each, " + std::to_string(failures) + " failures"};
}

Outcome density_consistency() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::int64_t x = 1000000;
  const DensityEstimate p = odd_density(SeriesSpec::parse("p"), x, 8);
  const RegularRelationReport r = regular_relation_check(x, 8);
  const DensityEstimate l = landau_check(x, 8);
  const double secs = seconds_since(t0);
  const double d1 = boost::rational_cast<double>(p.ratio);
  const double res = boost::rational_cast<double>(r.residual_5_20);
  const bool a = std::abs(d1 - 0.5) < 0.02;
  const bool b = res < 0.01;
  const bool c = strictly_decreasing(l);
  std::string trend;
  for (const Checkpoint& cp : l.checkpoints) trend += fmt(boost::rational_cast<double>(cp.ratio)) + " > ";
  trend += fmt(boost::rational_cast<double>(l.ratio));
  return {a && b && c && secs < 120,
          std::string("|d1-1/2|=") + fmt(std::abs(d1 - 0.5)) + (a ? " ok" : " OUT") +
              "; |d5-d20/4|=" + fmt(res) + (b ? " ok" : " OUT (limit 0.01)") + "; landau ratios " + trend +
              (c ? " ok" : " NOT DECREASING") + "; " + fmt(secs, 2) + " s"};
}

Outcome determinism() {
  const fs::path a = scratch_dir() / "run1.json", b = scratch_dir() / "run2.json";
  fs::remove(a);
  fs::remove(b);
  const int c1 = certify_all_to(a, 8);
  const int c2 = certify_all_to(b, 8);
  if (c1 != 0 || c2 != 0) return {false, "certify --all failed"};
  const std::string x = slurp(a), y = slurp(b);
  return {x == y && !x.empty(), std::to_string(x.size()) + " bytes, " + (x == y ? "byte-identical" : "DIFFERENT")};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"catalog proof reproduction", catalog_reproduction},
      {"worked-case constants", worked_constants},
      {"generic-row check", generic_rows},
      {"numeric congruence suite", numeric_suite},
      {"oracle equivalence", oracle_equivalence},
      {"property suite", property_suite},
      {"density consistency", density_consistency},
      {"determinism", determinism},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("criterion %zu %s  %s: %s\n", i + 1, o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                o.detail.c_str());
    std::fflush(stdout);
  }
  fs::remove_all(fs::temp_directory_path() / "pmod2_acceptance");
  return failed == 0 ? 0 : 1;
}
