#include <gtest/gtest.h>

#include <algorithm>

#include "oracles.hpp"
#include "pmod2/certifier.hpp"
#include "pmod2/partitions.hpp"

using namespace pmod2;

namespace {

std::vector<const CongruenceClaim*> claims_of(ClaimShape shape) {
  std::vector<const CongruenceClaim*> out;
  for (const CongruenceClaim& c : catalog()) {
    if (c.shape == shape) out.push_back(&c);
  }
  return out;
}

const std::vector<std::string> kCases = {"5,4,1",  "7,5,1", "11,6,1", "13,6,1", "17,5,1",
                                         "19,4,1", "23,1,1", "3,2,3", "5,2,3",  "7,1,3",
                                         "5,0,5",  "3,0,9", "3,8,3",  "5,24,1"};

}  // namespace

TEST(Sturm, PublishedBounds) {
  EXPECT_EQ(sturm_bound(360, 44, true), 1080);
  EXPECT_EQ(sturm_bound(264, 28, false), 6336);
  EXPECT_EQ(sturm_bound(0, 44, true), 0);
  EXPECT_EQ(sturm_bound(0, 28, false), 0);
  EXPECT_THROW(sturm_bound(3, 4, true), ContractViolation);
}

TEST(Sturm, DifferentCharacterIsNeverSmaller) {
  for (std::int64_t N = 1; N <= 200; ++N) {
    for (std::int64_t w2 : {2, 24, 96, 360}) {
      EXPECT_LE(sturm_bound(w2, N, true), sturm_bound(w2, N, false)) << N;
    }
  }
}

TEST(Catalog, CountsAndIds) {
  EXPECT_EQ(claims_of(ClaimShape::TwoTerm).size(), 12U);
  EXPECT_EQ(claims_of(ClaimShape::ThreeTerm).size(), 2U);
  EXPECT_GE(claims_of(ClaimShape::Auxiliary).size(), 10U);
  for (const std::string& id : kCases) {
    const CongruenceClaim& c = find_claim(id);
    EXPECT_EQ(c.id, id);
    EXPECT_FALSE(c.numeric_only());
    ASSERT_TRUE(c.plan.has_value());
  }
  EXPECT_EQ(find_claim("(11, 6, 1)").id, "11,6,1");
  EXPECT_THROW(find_claim("6,0,1"), UnknownCase);
  for (const CongruenceClaim* c : claims_of(ClaimShape::Auxiliary)) {
    EXPECT_TRUE(c->numeric_only());
    EXPECT_FALSE(c->plan.has_value());
  }
}

TEST(Catalog, RightHandSideShapes) {
  const CongruenceClaim& c = find_claim("5,4,1");
  ASSERT_EQ(c.rhs.size(), 2U);
  EXPECT_EQ(std::get<ProductTerm>(c.rhs[0]).exps, (ExponentMap{{1, -5}}));
  EXPECT_EQ(std::get<ProductTerm>(c.rhs[1]).exps, (ExponentMap{{5, -1}}));
  for (const CongruenceClaim* tc : claims_of(ClaimShape::TwoTerm)) {
    ASSERT_EQ(tc->rhs.size(), 2U);
    EXPECT_EQ(std::get<ProductTerm>(tc->rhs[0]).exps, (ExponentMap{{1, -tc->a * tc->t}}));
    EXPECT_EQ(std::get<ProductTerm>(tc->rhs[1]).exps, (ExponentMap{{tc->a, -tc->t}}));
    EXPECT_EQ(std::get<DissectionTerm>(tc->lhs[0]).shift, 1);
  }
  for (const CongruenceClaim* tc : claims_of(ClaimShape::ThreeTerm)) {
    ASSERT_EQ(tc->rhs.size(), 3U);
    EXPECT_EQ(std::get<DissectionTerm>(tc->lhs[0]).a, tc->a * tc->a);
    EXPECT_EQ(std::get<DissectionTerm>(tc->lhs[0]).shift, 2);
    EXPECT_EQ(std::get<ProductTerm>(tc->rhs[2]).shift, 1);
  }
}

TEST(Evaluate, MatchesDirectOracle) {
  // q * sum p(5n+4) q^n against a byte-wise expansion of 1/(q)_inf.
  const std::int64_t T = 400;
  const F2Series got = evaluate({DissectionTerm{{{1, -1}}, 5, 4, 1}}, T);
  const auto p = oracle::product_mod2(1, -1, static_cast<std::size_t>(5 * T + 5));
  for (std::int64_t e = 0; e < T; ++e) {
    const bool want = e >= 1 && p[static_cast<std::size_t>(5 * (e - 1) + 4)] != 0;
    ASSERT_EQ(got.coeff(e), want) << e;
  }
  // Terms starting beyond the horizon contribute nothing.
  EXPECT_EQ(evaluate({ProductTerm{{{1, 1}}, 50}}, 40).popcount(), 0U);
}

TEST(Evaluate, QuadraticSums) {
  const F2Series tri = evaluate({QuadraticSum{1, 1, 0, 0, 0, 2}}, 100);
  for (std::int64_t e = 0; e < 100; ++e) {
    bool want = false;
    for (std::int64_t n = 0; n * (n + 1) / 2 <= e; ++n) want = want || n * (n + 1) / 2 == e;
    EXPECT_EQ(tri.coeff(e), want) << e;
  }
  // Two-sided sum: n and the mirrored value never collide for 2n(3n-1).
  const F2Series pent = evaluate({QuadraticSum{6, -2, 0, -1000000, 0}}, 1000);
  EXPECT_EQ(pent.popcount(), 26U);
}

TEST(NumericVerify, PublishedClaims) {
  EXPECT_TRUE(numeric_verify(find_claim("5,4,1"), 10000).passed);
  EXPECT_TRUE(numeric_verify(find_claim("3,8,3"), 10000).passed);
}

TEST(NumericVerify, PerturbedClaimFailsEarly) {
  CongruenceClaim bad = find_claim("5,4,1");
  bad.lhs = {DissectionTerm{{{1, -1}}, 5, 3, 1}};
  const NumericResult r = numeric_verify(bad, 10000);
  EXPECT_FALSE(r.passed);
  ASSERT_TRUE(r.first_mismatch.has_value());
  EXPECT_LT(*r.first_mismatch, 10);
  // The reported index really is the first difference.
  const F2Series l = evaluate(bad.lhs, 10000);
  const F2Series rr = evaluate(bad.rhs, 10000);
  for (std::int64_t e = 0; e < *r.first_mismatch; ++e) EXPECT_EQ(l.coeff(e), rr.coeff(e));
  EXPECT_NE(l.coeff(*r.first_mismatch), rr.coeff(*r.first_mismatch));
}

TEST(NumericVerify, EveryClaimToFiftyThousand) {
  for (const CongruenceClaim& c : catalog()) {
    const NumericResult r = numeric_verify(c, 50000);
    EXPECT_TRUE(r.passed) << c.id << " mismatch at "
                          << (r.first_mismatch ? std::to_string(*r.first_mismatch) : "-");
  }
}

TEST(Normalize, KeepsValidTermsAndRewritesOthers) {
  const ExponentMap valid{{1, 10}, {2, 2}, {11, 10}, {22, -22}};
  auto kept = normalize_term(valid, 22);
  ASSERT_TRUE(kept.has_value());
  EXPECT_EQ(kept->exps(), valid);

  // eta^s / (q)^11 for (11,6,1): a form at level 44, but with character
  // (11 / d), so it is rewritten.
  const ExponentMap pre{{1, -1}, {2, 2}, {11, 11}, {22, -22}};
  EXPECT_FALSE(ghn_check(EtaQuotient(44, pre)).character().trivial());
  auto form = normalize_term(pre, 44);
  ASSERT_TRUE(form.has_value());
  const ModularityReport rep = ghn_check(*form);
  EXPECT_TRUE(rep.is_form);
  EXPECT_EQ(rep.weight2, 0);
  EXPECT_TRUE(rep.character().trivial());
  EXPECT_TRUE(frobenius_equivalent(pre, form->exps()));
  // Same q-expansion mod 2.
  EXPECT_EQ(expand(*form, 500).truncated(500), expand(EtaQuotient(44, pre), 500));
}

TEST(Normalize, ResultsAreFormsAndEquivalent) {
  std::mt19937_64 rng(7);
  int found = 0;
  for (int iter = 0; iter < 200; ++iter) {
    ExponentMap pre;
    std::int64_t weight = 0;
    for (std::int64_t d : {1, 2, 3, 6}) {
      const std::int64_t r = static_cast<std::int64_t>(rng() % 13) - 6;
      pre[d] = r;
      weight += r;
    }
    pre[12] = -weight;
    const auto form = normalize_term(pre, 12);
    if (!form) continue;
    ++found;
    const ModularityReport rep = ghn_check(*form);
    EXPECT_TRUE(rep.is_form);
    EXPECT_EQ(rep.weight2, 0);
    EXPECT_TRUE(frobenius_equivalent(pre, form->exps()));
  }
  EXPECT_GT(found, 0);
}

TEST(PoleClearing, RequirementPerRow) {
  CuspRow row;
  row.lhs_bound = Rational(-160, 11);
  row.rhs_orders = {Rational(-15), Rational(3)};
  row.clearing_order = Rational(1);
  EXPECT_EQ(pole_clearing_power({row}), 15);
  row.clearing_order = Rational(2);
  EXPECT_EQ(pole_clearing_power({row}), 8);
  row.clearing_order = Rational(0);
  EXPECT_THROW(pole_clearing_power({row}), NoClearingPower);
  row.lhs_bound = Rational(0);
  row.rhs_orders = {Rational(1)};
  EXPECT_EQ(pole_clearing_power({row}), 0);
}

TEST(Certify, ElevenSixOne) {
  const ProofCertificate c = certify("11,6,1");
  ASSERT_TRUE(c.proven) << c.failed_stage << " " << c.note;
  EXPECT_EQ(c.p_set, (std::vector<std::int64_t>{6}));
  EXPECT_EQ(c.nu % 24, 0);
  EXPECT_EQ(c.s, (SVector{{1, 10}, {2, 2}, {11, 11}, {22, -22}}));
  EXPECT_TRUE(c.conditions.weight_sum);
  EXPECT_TRUE(c.conditions.sigma_inf_sum);
  EXPECT_TRUE(c.conditions.sigma_0_sum);
  EXPECT_TRUE(c.conditions.square);
  EXPECT_EQ(c.global_min_order, Rational(-15));
  EXPECT_EQ(c.lhs_min_bound, Rational(-160, 11));
  EXPECT_EQ(c.j_min, 15);
  EXPECT_EQ(c.j_used, 15);
  EXPECT_EQ(c.weight2, 360);
  EXPECT_EQ(c.level, 44);
  EXPECT_TRUE(c.same_character);
  EXPECT_FALSE(c.character_flag);
  EXPECT_EQ(c.sturm, 1080);
  EXPECT_EQ(c.verified_from, 0);
  EXPECT_EQ(c.verified_to, 1080);
  EXPECT_EQ(c.lhs_hash, c.rhs_hash);
  EXPECT_EQ(c.cusp_table.size(), cusp_set(44).size());
}

TEST(Certify, SevenOneThree) {
  const ProofCertificate c = certify("7,1,3");
  ASSERT_TRUE(c.proven) << c.failed_stage << " " << c.note;
  EXPECT_EQ(c.p_set, (std::vector<std::int64_t>{1}));
  EXPECT_EQ(c.s, (SVector{{1, 10}, {2, 10}, {7, 5}, {14, -22}}));
  EXPECT_EQ(c.j_used, 11);
  EXPECT_EQ(c.weight2, 264);
  EXPECT_FALSE(c.same_character);
  EXPECT_EQ(c.sturm, 6336);
}

TEST(Certify, NormalizerAloneFindsTrivialCharacterForms) {
  CertifyOptions opt;
  opt.normalizer_only = true;
  const ProofCertificate c = certify("7,1,3", opt);
  ASSERT_TRUE(c.proven) << c.failed_stage;
  EXPECT_TRUE(c.same_character);
  EXPECT_EQ(c.sturm, 528);
  for (const TermRecord& t : c.rhs_terms) EXPECT_FALSE(t.published);
}

TEST(Certify, GenericRows) {
  for (std::int64_t m : {5, 7, 11, 13, 17, 19, 23}) {
    const CongruenceClaim* claim = nullptr;
    for (const CongruenceClaim* c : claims_of(ClaimShape::TwoTerm)) {
      if (c->a == m && c->t == 1) claim = c;
    }
    ASSERT_NE(claim, nullptr) << m;
    EXPECT_EQ(claim->plan->s, (SVector{{1, m - 1}, {2, 2}, {m, m}, {2 * m, -2 * m}}));
    EXPECT_TRUE(multiplier_conditions(claim->plan->tuple, claim->plan->s).passed()) << m;
    const ProofCertificate c = certify(*claim);
    ASSERT_TRUE(c.proven) << m << " " << c.failed_stage;
    EXPECT_LE(c.j_min, (m * m - 1) / 8);
    EXPECT_EQ(c.j_used, (m * m - 1) / 8);
    // Closed form of the same-character bound at level 4m.
    EXPECT_EQ(c.sturm, 3 * (m * m - 1) * (m + 1) / 4) << m;
  }
}

TEST(Certify, AllCasesProvenAndAgreeWithNumerics) {
  for (const std::string& id : kCases) {
    const ProofCertificate c = certify(id);
    EXPECT_TRUE(c.proven) << id << " " << c.failed_stage << " " << c.note;
    EXPECT_LE(c.j_min, c.j_published) << id;
    EXPECT_FALSE(c.character_flag) << id;
    for (std::int64_t o : c.rhs_orders_at_infinity) EXPECT_GE(o, 0) << id;
    EXPECT_GE(c.lhs_order_at_infinity, 0) << id;
    // Finite-depth check beyond the Sturm bound agrees with the verdict.
    const NumericResult n = numeric_verify(find_claim(id), c.sturm + 1000);
    EXPECT_EQ(n.passed, c.proven) << id;
  }
}

TEST(Certify, LargerClearingPowerStillProves) {
  for (const std::string& id : {"5,4,1", "3,2,3", "11,6,1", "5,0,5"}) {
    const ProofCertificate base = certify(id);
    CertifyOptions opt;
    opt.j_override = base.j_used + 1;
    const ProofCertificate more = certify(id, opt);
    EXPECT_TRUE(more.proven) << id;
    EXPECT_GT(more.sturm, base.sturm) << id;
    EXPECT_EQ(more.weight2, base.weight2 + 24);
  }
}

TEST(Certify, TwentyFourColourRowProvesAtComputedMinimum) {
  const ProofCertificate published = certify("5,24,1");
  ASSERT_TRUE(published.proven);
  EXPECT_EQ(published.j_min, 196);
  EXPECT_EQ(published.j_used, 200);
  EXPECT_EQ(published.sturm, 180000);
  CertifyOptions opt;
  opt.j_override = published.j_min;
  const ProofCertificate minimal = certify("5,24,1", opt);
  EXPECT_TRUE(minimal.proven) << minimal.failed_stage;
  EXPECT_LT(minimal.sturm, published.sturm);
}

TEST(Certify, FailuresNameTheStage) {
  CertifyOptions low;
  low.j_override = 14;
  const ProofCertificate c = certify("11,6,1", low);
  EXPECT_FALSE(c.proven);
  EXPECT_EQ(c.failed_stage, "pole_clearing");

  // A wrong b breaks the Radu orbit or the comparison, never silently.
  CongruenceClaim wrong = find_claim("5,4,1");
  wrong.b = 3;
  wrong.lhs = {DissectionTerm{{{1, -1}}, 5, 3, 1}};
  wrong.plan->tuple = RaduTuple(5, 1, 10, 3, {{1, -1}});
  const ProofCertificate w = certify(wrong);
  EXPECT_FALSE(w.proven);
  EXPECT_FALSE(w.failed_stage.empty());

  // A published form that is not congruent to the constructed term.
  CongruenceClaim forged = find_claim("11,6,1");
  forged.plan->published_rhs[0] = EtaQuotient::parse("eta(1)^10 * eta(2)^2 * eta(11)^10 * eta(22)^-22");
  const ProofCertificate f = certify(forged);
  EXPECT_FALSE(f.proven);
  EXPECT_EQ(f.failed_stage, "rhs_terms");

  const CongruenceClaim& aux = find_claim("p-5n+4");
  EXPECT_EQ(certify(aux).failed_stage, "catalog");
}

TEST(CertificateJson, FieldsAndRationals) {
  const auto j = to_json(certify("11,6,1"));
  EXPECT_EQ(j.begin().key(), "format");
  EXPECT_EQ(j["format"], "cert-v1");
  EXPECT_EQ(j["verdict"], "PROVEN");
  EXPECT_EQ(j["sturm_bound"], 1080);
  EXPECT_EQ(j["min_order"]["global"], "-15");
  EXPECT_EQ(j["min_order"]["lhs_bound"], "-160/11");
  EXPECT_EQ(j["pole_clearing"]["multiplier"], "eta(4)^360");
  EXPECT_EQ(j["p_set"], nlohmann::ordered_json::array({6}));
  EXPECT_EQ(j["verified_range"], nlohmann::ordered_json::array({0, 1080}));
  EXPECT_EQ(j.dump(), to_json(certify("11,6,1")).dump());
}
