#include "pmod2/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <limits>
#include <sstream>
#include <thread>

#include "pmod2/certifier.hpp"
#include "pmod2/density.hpp"
#include "pmod2/partitions.hpp"

namespace pmod2::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public Error {
 public:
  using Error::Error;
};

unsigned default_threads() { return std::max(1U, std::thread::hardware_concurrency()); }

// Runs fn(i) for i in [0, n) on up to `threads` workers; results keep index
// order and the first exception (by index) is rethrown.
template <class T>
std::vector<T> parallel_map(std::size_t n, unsigned threads, const std::function<T(std::size_t)>& fn) {
  std::vector<T> results(n);
  std::vector<std::exception_ptr> errors(n);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < n; i = next++) {
      try {
        results[i] = fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  };
  const unsigned count = std::max(1U, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (count == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < count; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return results;
}

std::string fixed(double v, int digits = 6) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

std::string approx(const Rational& q) { return fixed(boost::rational_cast<double>(q)); }

struct Output {
  std::string format = "text";
  std::string path;
  unsigned threads = default_threads();
};

void emit(const Output& o, const std::string& content, std::ostream& out) {
  if (o.path.empty()) {
    out << content;
  } else {
    write_atomic(o.path, content);
  }
}

std::vector<const CongruenceClaim*> select_claims(const std::vector<std::string>& ids, bool all,
                                                  bool certifiable_only) {
  std::vector<const CongruenceClaim*> out;
  if (all) {
    for (const CongruenceClaim& c : catalog()) {
      if (!certifiable_only || !c.numeric_only()) out.push_back(&c);
    }
    return out;
  }
  if (ids.empty()) throw UsageError("--case: give a case id or use --all");
  for (const std::string& id : ids) {
    const CongruenceClaim* c = nullptr;
    try {
      c = &find_claim(id);
    } catch (const UnknownCase& e) {
      throw UsageError(std::string("--case: ") + e.what());
    }
    if (certifiable_only && c->numeric_only()) {
      throw UsageError("--case: '" + id + "' is a numeric-only identity and cannot be certified");
    }
    out.push_back(c);
  }
  return out;
}

// ---------------------------------------------------------------------------

struct ExpandArgs {
  std::string series;
  std::string eta;
  std::int64_t terms = 0;
  Output o;
};

int do_expand(const ExpandArgs& a, std::ostream& out) {
  if (a.series.empty() == a.eta.empty()) throw UsageError("expand: give exactly one of --series, --eta");
  const auto trunc = static_cast<std::size_t>(a.terms);
  if (!a.eta.empty()) {
    EtaQuotient e = [&] {
      try {
        return EtaQuotient::parse(a.eta);
      } catch (const ParseError& err) {
        throw UsageError(std::string("--eta: ") + err.what());
      }
    }();
    if (a.o.format == "raw" || a.o.format == "rle") {
      throw UsageError("--format: raw and rle apply to parity tables (--series), not eta quotients");
    }
    const F2Series f = expand(e, trunc);
    if (a.o.format == "structured") {
      Json j;
      j["eta_quotient"] = e.to_string();
      j["offset24"] = f.offset24();
      j["terms"] = a.terms;
      j["odd_count"] = f.popcount();
      j["support"] = f.support();
      emit(a.o, j.dump(2) + "\n", out);
    } else {
      emit(a.o, e.to_string() + "\n" + f.to_string(static_cast<std::size_t>(a.terms)) + "\n", out);
    }
    return kOk;
  }
  SeriesSpec spec;
  try {
    spec = SeriesSpec::parse(a.series);
  } catch (const ParseError& err) {
    throw UsageError(std::string("--series: ") + err.what());
  }
  if (a.o.format == "raw" || a.o.format == "rle") {
    if (spec.kind == SeriesSpec::Kind::Landau) {
      throw UsageError("--format: raw and rle apply to p_t and b_m tables");
    }
    const ParityTable table = spec.kind == SeriesSpec::Kind::Multipartition
                                  ? multipartition_parity(spec.param, trunc)
                                  : regular_parity(spec.param, trunc);
    std::ostringstream os;
    if (a.o.format == "raw") {
      write_raw(table, os);
    } else {
      write_rle(table, os);
    }
    emit(a.o, os.str(), out);
    return kOk;
  }
  const F2Series f = series_bits(spec, trunc);
  if (a.o.format == "structured") {
    Json j;
    j["series"] = spec.id();
    j["terms"] = a.terms;
    j["odd_count"] = f.popcount();
    j["hash"] = range_hash(f, 0, a.terms - 1);
    j["support"] = f.support();
    emit(a.o, j.dump(2) + "\n", out);
    return kOk;
  }
  std::ostringstream os;
  os << spec.id() << " terms=" << a.terms << " odd=" << f.popcount() << "\n";
  for (std::size_t row = 0; row < trunc; row += 64) {
    os << std::setw(10) << row << " ";
    for (std::size_t n = row; n < std::min(trunc, row + 64); ++n) os << (f.bit(n) ? '1' : '0');
    os << "\n";
  }
  emit(a.o, os.str(), out);
  return kOk;
}

// ---------------------------------------------------------------------------

struct CaseArgs {
  std::vector<std::string> cases;
  bool all = false;
  std::int64_t terms = 10000;
  std::optional<std::int64_t> j;
  bool normalize = false;
  Output o;
};

int do_verify(const CaseArgs& a, std::ostream& out, std::ostream& err) {
  const auto claims = select_claims(a.cases, a.all, false);
  const auto results = parallel_map<NumericResult>(
      claims.size(), a.o.threads, [&](std::size_t i) { return numeric_verify(*claims[i], a.terms); });
  bool ok = true;
  Json arr = Json::array();
  std::ostringstream os;
  for (std::size_t i = 0; i < claims.size(); ++i) {
    const NumericResult& r = results[i];
    ok = ok && r.passed;
    if (!r.passed) {
      err << claims[i]->id << ": mismatch at q^"
          << (r.first_mismatch ? std::to_string(*r.first_mismatch) : "?") << "\n";
    }
    Json j;
    j["case"] = claims[i]->id;
    j["claim"] = claims[i]->description;
    j["terms"] = r.horizon;
    j["passed"] = r.passed;
    j["first_mismatch"] = r.first_mismatch ? Json(*r.first_mismatch) : Json(nullptr);
    arr.push_back(j);
    os << std::left << std::setw(10) << claims[i]->id << " " << (r.passed ? "PASS" : "FAIL")
       << " terms=" << r.horizon;
    if (r.first_mismatch) os << " first_mismatch=" << *r.first_mismatch;
    os << "\n";
  }
  emit(a.o, a.o.format == "structured" ? arr.dump(2) + "\n" : os.str(), out);
  return ok ? kOk : kFailed;
}

int do_certify(const CaseArgs& a, std::ostream& out, std::ostream& err) {
  const auto claims = select_claims(a.cases, a.all, true);
  CertifyOptions opt;
  opt.j_override = a.j;
  opt.normalizer_only = a.normalize;
  const auto certs = parallel_map<ProofCertificate>(
      claims.size(), a.o.threads, [&](std::size_t i) { return certify(*claims[i], opt); });
  bool ok = true;
  Json arr = Json::array();
  std::ostringstream os;
  for (const ProofCertificate& c : certs) {
    ok = ok && c.proven;
    if (!c.proven) {
      err << c.case_id << ": FAILED at " << c.failed_stage;
      if (!c.note.empty()) err << " (" << c.note << ")";
      if (c.first_mismatch) err << " first mismatch at q^" << *c.first_mismatch;
      err << "\n";
    }
    arr.push_back(to_json(c));
    os << std::left << std::setw(8) << c.case_id << " " << (c.proven ? "PROVEN" : "FAILED");
    if (!c.proven) os << " stage=" << c.failed_stage;
    os << " level=" << c.level << " j=" << c.j_used << " (min " << c.j_min << ")"
       << " weight=" << c.weight2 / 2 << " sturm=" << c.sturm
       << (c.same_character ? " same-character" : " different-character")
       << " min_order=" << to_string(c.global_min_order) << "\n";
  }
  // Nothing is written when any certification fails.
  if (!ok) return kFailed;
  if (a.o.format == "structured") {
    const Json doc = a.all || arr.size() != 1 ? arr : arr[0];
    emit(a.o, doc.dump(2) + "\n", out);
  } else {
    emit(a.o, os.str(), out);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct DensityArgs {
  std::string series = "p";
  std::int64_t x = 100000;
  bool regular = false;
  bool landau = false;
  Output o;
};

void density_text(std::ostream& os, const DensityEstimate& d) {
  os << std::left << std::setw(8) << d.series << " x=" << d.x << " odd=" << d.odd_count
     << " ratio=" << approx(d.ratio) << "  checkpoints:";
  for (const Checkpoint& c : d.checkpoints) os << " " << c.x << ":" << approx(c.ratio);
  os << "\n";
}

int do_density(const DensityArgs& a, std::ostream& out) {
  if (a.regular && a.landau) throw UsageError("density: --regular and --landau are exclusive");
  std::ostringstream os;
  if (a.regular) {
    if (a.x < 10000) throw UsageError("--x: the regular relation check needs x >= 10000");
    const RegularRelationReport r = regular_relation_check(a.x, a.o.threads);
    if (a.o.format == "structured") {
      os << to_json(r).dump(2) << "\n";
    } else {
      for (const DensityEstimate* d : {&r.b5, &r.b20, &r.b7, &r.b28}) density_text(os, *d);
      os << "|d5 - d20/4| = " << approx(r.residual_5_20) << "\n";
      os << "|d7 - d28/2| = " << approx(r.residual_7_28) << "\n";
      os << "b_5 identity below x: " << (r.identity_holds ? "holds" : "FAILS") << "\n";
    }
    emit(a.o, os.str(), out);
    return r.identity_holds ? kOk : kFailed;
  }
  if (a.landau) {
    if (a.x < 1000) throw UsageError("--x: the density-zero check needs x >= 1000");
    const DensityEstimate d = landau_check(a.x, a.o.threads);
    const bool dec = strictly_decreasing(d);
    if (a.o.format == "structured") {
      Json j = to_json(d);
      j["strictly_decreasing"] = dec;
      os << j.dump(2) << "\n";
    } else {
      density_text(os, d);
      os << "ratio strictly decreasing across checkpoints: " << (dec ? "yes" : "no") << "\n";
    }
    emit(a.o, os.str(), out);
    return dec ? kOk : kFailed;
  }
  SeriesSpec spec;
  try {
    spec = SeriesSpec::parse(a.series);
  } catch (const ParseError& e) {
    throw UsageError(std::string("--series: ") + e.what());
  }
  if (a.x < 10) throw UsageError("--x: must be at least 10");
  const DensityEstimate d = odd_density(spec, a.x, a.o.threads);
  if (a.o.format == "structured") {
    os << to_json(d).dump(2) << "\n";
  } else {
    density_text(os, d);
  }
  emit(a.o, os.str(), out);
  return kOk;
}

struct TableArgs {
  std::vector<std::int64_t> ts{1, 2, 3, 4, 5, 6, 7, 8};
  std::int64_t x = 100000;
  Output o;
};

int do_table(const TableArgs& a, std::ostream& out) {
  const auto rows = conjecture_table(a.ts, a.x, a.o.threads);
  std::ostringstream os;
  if (a.o.format == "structured") {
    Json arr = Json::array();
    for (const ConjectureRow& r : rows) arr.push_back(to_json(r));
    os << arr.dump(2) << "\n";
  } else {
    os << "     t   k  t0  predicted   estimate  deviation  odd_count\n";
    for (const ConjectureRow& r : rows) {
      os << std::right << std::setw(6) << r.t << std::setw(4) << r.k << std::setw(4) << r.t0
         << std::setw(11) << to_string(r.predicted) << std::setw(11) << approx(r.estimate.ratio)
         << std::setw(11) << fixed(r.deviation) << std::setw(11) << r.estimate.odd_count << "\n";
    }
  }
  emit(a.o, os.str(), out);
  return kOk;
}

const CLI::Range kPositive(std::int64_t{1}, std::numeric_limits<std::int64_t>::max());

void add_output(CLI::App* sub, Output& o, std::vector<std::string> formats) {
  sub->add_option("--format", o.format, "Output format")->check(CLI::IsMember(std::move(formats)));
  sub->add_option("--out", o.path, "Write to this file (atomically) instead of stdout");
  sub->add_option("--threads", o.threads, "Worker threads")->check(CLI::Range(1U, 1024U));
}

}  // namespace

void write_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(std::hash<std::thread::id>()(std::this_thread::get_id()) % 1000000);
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error("cannot open " + tmp.string() + " for writing");
    f << content;
    f.flush();
    if (!f) {
      f.close();
      fs::remove(tmp);
      throw Error("write to " + tmp.string() + " failed");
    }
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw Error("cannot move output into place at " + path + ": " + ec.message());
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Parity of multipartition functions: expansion, congruence checks, certificates"};
  app.name("pmod2");
  app.require_subcommand(1);

  ExpandArgs ex;
  auto* expand_cmd = app.add_subcommand("expand", "Expand a parity table or an eta quotient mod 2");
  expand_cmd->add_option("--series", ex.series, "p, p_t, b_m or landau");
  expand_cmd->add_option("--eta", ex.eta, "Eta quotient, e.g. \"eta(1)^-1 * eta(5)^5 @ N=5\"");
  expand_cmd->add_option("--terms", ex.terms, "Number of coefficients")->required()->check(kPositive);
  add_output(expand_cmd, ex.o, {"text", "structured", "raw", "rle"});

  CaseArgs ver;
  auto* verify_cmd = app.add_subcommand("verify", "Check claims coefficientwise to a finite depth");
  verify_cmd->add_option("--case", ver.cases, "Case id \"a,b,t\" or an identity name");
  verify_cmd->add_flag("--all", ver.all, "Every catalog claim and auxiliary identity");
  verify_cmd->add_option("--terms", ver.terms, "Depth")->check(kPositive);
  add_output(verify_cmd, ver.o, {"text", "structured"});

  CaseArgs cer;
  auto* certify_cmd = app.add_subcommand("certify", "Run the full certification");
  certify_cmd->add_option("--case", cer.cases, "Case id \"a,b,t\"");
  certify_cmd->add_flag("--all", cer.all, "All fourteen cases");
  certify_cmd->add_option("--j", cer.j, "Clearing power to use instead of the published one")
      ->check(CLI::Range(std::int64_t{0}, std::numeric_limits<std::int64_t>::max()));
  certify_cmd->add_flag("--normalize", cer.normalize, "Ignore printed right-hand side forms");
  add_output(certify_cmd, cer.o, {"text", "structured"});

  DensityArgs den;
  auto* density_cmd = app.add_subcommand("density", "Odd-density estimates");
  density_cmd->add_option("--series", den.series, "p, p_t, b_m or landau");
  density_cmd->add_option("--x", den.x, "Count over 0 <= n < x")->check(kPositive);
  density_cmd->add_flag("--regular", den.regular, "5/20 and 7/28 regular-partition relations");
  density_cmd->add_flag("--landau", den.landau, "Density-zero trend for (q)^4 + q(q)^8(q^5)^4");
  add_output(density_cmd, den.o, {"text", "structured"});

  TableArgs tab;
  auto* table_cmd = app.add_subcommand("table", "Odd densities of p_t against 2^(-k-1), t = 2^k t0");
  table_cmd->add_option("--t", tab.ts, "Values of t")->delimiter(',')->check(kPositive);
  table_cmd->add_option("--x", tab.x, "Count over 0 <= n < x")->check(kPositive);
  add_output(table_cmd, tab.o, {"text", "structured"});

  for (auto* sub : {verify_cmd, certify_cmd}) {
    sub->get_option("--case")->excludes(sub->get_option("--all"));
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*expand_cmd) return do_expand(ex, out);
    if (*verify_cmd) return do_verify(ver, out, err);
    if (*certify_cmd) return do_certify(cer, out, err);
    if (*density_cmd) return do_density(den, out);
    if (*table_cmd) return do_table(tab, out);
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ContractViolation& e) {
    err << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kFailed;
  }
  return kUsage;
}

int run(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace pmod2::cli
