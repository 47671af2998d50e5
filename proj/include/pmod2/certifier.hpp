#pragma once

// Congruence claims for multipartition dissections mod 2, their numeric
// verification, and the end-to-end certification: Radu's construction for
// the left-hand side, eta-quotient rewrites of the right-hand side, pole
// clearing by powers of eta(4z)^24 and a Sturm-bound coefficient check.

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "pmod2/etaquot.hpp"
#include "pmod2/f2series.hpp"
#include "pmod2/radu.hpp"

namespace pmod2 {

class NoClearingPower : public Error {
 public:
  using Error::Error;
};

class UnknownCase : public Error {
 public:
  using Error::Error;
};

/// q^shift * prod_delta (q^delta)_inf^{e_delta}.
struct ProductTerm {
  ExponentMap exps;
  std::int64_t shift = 0;
};

/// q^shift * sum_n [q^(a n + b)] prod_delta (q^delta)_inf^{e_delta} * q^n.
struct DissectionTerm {
  ExponentMap exps;
  std::int64_t a = 1;
  std::int64_t b = 0;
  std::int64_t shift = 0;
};

/// q^shift * sum_{n >= n_min} q^((A n^2 + B n + C) / divisor), each exponent
/// counted once per n (so repeated exponents cancel mod 2). A > 0 and the
/// divisor must divide every value of the quadratic.
struct QuadraticSum {
  std::int64_t A = 1;
  std::int64_t B = 0;
  std::int64_t C = 0;
  std::int64_t n_min = 0;
  std::int64_t shift = 0;
  std::int64_t divisor = 1;
};

using Term = std::variant<ProductTerm, DissectionTerm, QuadraticSum>;

std::string term_to_string(const Term& term);

/// Sum of the terms mod 2 for exponents below horizon (absolute, >= 1).
F2Series evaluate(const std::vector<Term>& terms, std::int64_t horizon);

enum class ClaimShape { TwoTerm, ThreeTerm, Auxiliary };

/// Inputs for the rigorous route: Radu's tuple, the multiplier s, the
/// published clearing power and, where the construction was printed,
/// explicit eta-quotient forms of the right-hand side terms.
struct CertificationPlan {
  RaduTuple tuple;
  SVector s;
  std::int64_t published_j = 0;
  std::vector<EtaQuotient> published_rhs;
  /// The source states that every form involved has trivial character.
  bool asserted_trivial_character = false;
};

struct CongruenceClaim {
  /// "a,b,t" for the catalog cases; a short name for auxiliary identities.
  std::string id;
  ClaimShape shape = ClaimShape::Auxiliary;
  std::int64_t a = 0, b = 0, t = 0;
  std::vector<Term> lhs;
  std::vector<Term> rhs;
  std::string description;
  std::optional<CertificationPlan> plan;

  bool numeric_only() const { return shape == ClaimShape::Auxiliary; }
};

/// The twelve two-term and two three-term cases, then the auxiliary
/// identities (numeric only).
const std::vector<CongruenceClaim>& catalog();

/// Looks up a claim by id; accepts "a,b,t" with optional spaces or
/// parentheses. Throws UnknownCase.
const CongruenceClaim& find_claim(const std::string& id);

struct NumericResult {
  bool passed = false;
  std::int64_t horizon = 0;
  std::optional<std::int64_t> first_mismatch;
};

NumericResult numeric_verify(const CongruenceClaim& claim, std::int64_t horizon);

/// floor(k N / 12 prod (1 + 1/p)) for equal characters, otherwise
/// floor(k N^2 / 12 prod (1 - 1/p^2)); k = weight2 / 2, p | N prime.
std::int64_t sturm_bound(std::int64_t weight2, std::int64_t N, bool same_character);

/// A weight-zero eta quotient congruent mod 2 to pre (same q-expansion by
/// repeated eta(delta z)^2 == eta(2 delta z)) that satisfies the
/// Gordon-Hughes-Newman conditions at level L * 2^e for some e <= 3.
/// Prefers a trivial character, then the smallest e, then the fewest total
/// exponent. Returns nullopt when no such form is found.
std::optional<EtaQuotient> normalize_term(const ExponentMap& pre, std::int64_t L,
                                          int max_rounds = 3);

struct CuspRow {
  Cusp cusp;
  std::int64_t width = 1;
  Rational lhs_bound{0};
  std::vector<Rational> rhs_orders;
  Rational clearing_order{0};  // order of eta(4z)^24
  std::int64_t j_needed = 0;
};

/// Smallest j with every order + j * ord(eta(4z)^24) >= 0 at each cusp.
std::int64_t pole_clearing_power(const std::vector<CuspRow>& table);

struct TermRecord {
  ExponentMap pre;  // eta^s times the term, before rewriting
  EtaQuotient form;
  bool published = false;
  ModularityReport report;
};

struct CertifyOptions {
  /// Use this clearing power instead of the published one.
  std::optional<std::int64_t> j_override;
  /// Ignore printed right-hand side forms and normalize every term.
  bool normalizer_only = false;
};

struct ProofCertificate {
  std::string case_id;
  RaduTuple tuple;
  DeltaStarReport delta_star;
  std::vector<std::int64_t> p_set;
  std::int64_t nu = 0;
  SVector s;
  MultiplierReport conditions;
  std::int64_t level = 0;
  std::vector<TermRecord> rhs_terms;
  std::vector<CuspRow> cusp_table;
  Rational lhs_min_bound{0};
  Rational rhs_min_order{0};
  Rational global_min_order{0};
  std::int64_t j_min = 0;
  std::int64_t j_published = 0;
  std::int64_t j_used = 0;
  std::int64_t weight2 = 0;
  bool same_character = false;
  /// True when a displayed claim of trivial characters everywhere is
  /// contradicted by the forms used.
  bool character_flag = false;
  std::int64_t sturm = 0;
  std::int64_t lhs_order_at_infinity = 0;
  std::vector<std::int64_t> rhs_orders_at_infinity;
  std::int64_t verified_from = 0;
  std::int64_t verified_to = -1;
  std::string lhs_hash;
  std::string rhs_hash;
  std::optional<std::int64_t> first_mismatch;
  bool proven = false;
  std::string failed_stage;
  std::string note;
};

ProofCertificate certify(const CongruenceClaim& claim, const CertifyOptions& options = {});
ProofCertificate certify(const std::string& case_id, const CertifyOptions& options = {});

/// cert-v1: stable field order, exact rationals as "p/q" strings.
nlohmann::ordered_json to_json(const ProofCertificate& cert);

}  // namespace pmod2
