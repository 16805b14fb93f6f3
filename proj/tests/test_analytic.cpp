#include <catch_amalgamated.hpp>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "sirdiv/analytic.hpp"
#include "sirdiv/params.hpp"

using Catch::Matchers::WithinAbs;
using Catch::Matchers::WithinRel;
using namespace sirdiv;

namespace {
const NormalizedParams kQuarterHalf{0.25, 0.5};  // Delta = 1/4, delta = 1/2
const NormalizedParams kHalfHalf{0.5, 0.5};  // Delta theta^delta = 1/2 at theta 1
const NormalizedParams kUnitHalf{1.0, 0.5};
}  // namespace

TEST_CASE("model parameter validation and derived quantities") {
  const ModelParams m(0.1, 2.0, 4.0);
  REQUIRE(m.delta == 0.5);
  const double recomputed = m.intensity * 3.14159265358979323846 *
                            m.link_distance * m.link_distance *
                            interference_constant(m.delta);
  REQUIRE_THAT(m.contention, WithinRel(recomputed, 1e-12));

  REQUIRE_THROWS_AS(ModelParams(0.0, 1.0, 4.0), std::domain_error);
  REQUIRE_THROWS_AS(ModelParams(1.0, -1.0, 4.0), std::domain_error);
  REQUIRE_THROWS_AS(ModelParams(1.0, 1.0, 2.0), std::domain_error);
  REQUIRE_THROWS_AS(NormalizedParams(-1.0, 0.5), std::domain_error);
  REQUIRE_THROWS_AS(NormalizedParams(1.0, 1.0), std::domain_error);
}

TEST_CASE("canonical model round-trips the normalized pair") {
  for (double contention : {0.1, 0.25, 1.0, 10.0}) {
    for (double delta : {0.1, 0.33, 0.5, 0.9}) {
      const NormalizedParams p(contention, delta);
      const ModelParams m = canonical_model(p);
      REQUIRE(m.link_distance == 1.0);
      const NormalizedParams back = normalize(m);
      REQUIRE_THAT(back.contention, WithinRel(contention, 1e-12));
      REQUIRE_THAT(back.delta, WithinRel(delta, 1e-12));
    }
  }
  // Gamma(1.5) Gamma(0.5) = pi / 2.
  REQUIRE_THAT(interference_constant(0.5),
               WithinRel(1.570796326794896619231, 1e-13));
}

TEST_CASE("single-antenna success probability") {
  REQUIRE_THAT(single_success_prob(kQuarterHalf, 1.0),
               WithinRel(0.7788007830714048682452, 1e-14));
  REQUIRE(single_success_prob(kQuarterHalf, 0.0) == 1.0);
  REQUIRE(single_success_prob(NormalizedParams(1e6, 0.5), 1.0) == 0.0);
  REQUIRE_THROWS_AS(single_success_prob(kQuarterHalf, -1.0),
                    std::domain_error);
}

TEST_CASE("joint success probability") {
  REQUIRE_THAT(joint_success_prob(kQuarterHalf, 2, 1.0),
               WithinRel(0.6872892787909721985452, 1e-13));
  // n = 1 collapses to the single-antenna expression exactly.
  for (double theta : {0.2, 1.0, 7.5})
    REQUIRE(joint_success_prob(kQuarterHalf, 1, theta) ==
            single_success_prob(kQuarterHalf, theta));
  // delta -> 0 is complete correlation: P_n approaches P_1.
  const NormalizedParams tiny_delta(0.25, 1e-6);
  for (int n : {2, 8})
    REQUIRE_THAT(joint_success_prob(tiny_delta, n, 1.0),
                 WithinAbs(single_success_prob(tiny_delta, 1.0), 1e-4));
}

TEST_CASE("independent joint probability") {
  REQUIRE_THAT(independent_joint_prob(kQuarterHalf, 4, 1.0),
               WithinRel(0.3678794411714423215955, 1e-13));
  REQUIRE(independent_joint_prob(kQuarterHalf, 1, 2.0) ==
          joint_success_prob(kQuarterHalf, 1, 2.0));
  for (int n : {2, 3, 16, 200})
    REQUIRE(independent_joint_prob(kQuarterHalf, n, 1.0) <
            joint_success_prob(kQuarterHalf, n, 1.0));
}

TEST_CASE("joint probability bounds") {
  const ProbBounds b = joint_prob_bounds(kQuarterHalf, 8, 1.0);
  REQUIRE_THAT(b.lower, WithinRel(0.4502804983218504926155, 1e-13));
  REQUIRE_THAT(b.upper, WithinRel(0.493068691395239787846, 1e-13));
  const double p8 = joint_success_prob(kQuarterHalf, 8, 1.0);
  REQUIRE_THAT(p8, WithinRel(0.4558814593002475557289, 1e-13));
  REQUIRE(b.lower < p8);
  REQUIRE(p8 < b.upper);

  // Bounds at theta = 0 collapse to 1; n = 1 brackets loosely.
  const ProbBounds b0 = joint_prob_bounds(kQuarterHalf, 8, 0.0);
  REQUIRE(b0.lower == 1.0);
  REQUIRE(b0.upper == 1.0);
  const ProbBounds b1 = joint_prob_bounds(kQuarterHalf, 1, 1.0);
  REQUIRE(b1.lower <= single_success_prob(kQuarterHalf, 1.0));
  REQUIRE(single_success_prob(kQuarterHalf, 1.0) <= b1.upper);

  for (int n : {2, 5, 32, 500}) {
    const ProbBounds bn = joint_prob_bounds(kQuarterHalf, n, 1.0);
    const double pn = joint_success_prob(kQuarterHalf, n, 1.0);
    REQUIRE(bn.lower < pn);
    REQUIRE(pn < bn.upper);
  }
}

TEST_CASE("diversity loss") {
  REQUIRE_THAT(diversity_loss(2, 0.5), WithinRel(4.0 / 3.0, 1e-13));
  for (double delta : {0.1, 0.5, 0.9}) REQUIRE(diversity_loss(1, delta) == 1.0);
  REQUIRE_THAT(diversity_loss(1000, 0.5),
               WithinRel(28.02845942030800306900052, 1e-11));
  // Strictly increasing in n.
  double prev = diversity_loss(1, 0.5);
  for (int n = 2; n <= 64; ++n) {
    const double cur = diversity_loss(n, 0.5);
    REQUIRE(cur > prev);
    prev = cur;
  }
}

TEST_CASE("diversity loss identity L(n) D_n(delta) = n") {
  for (int n : {1, 2, 3, 8, 50, 200, 1000}) {
    for (double delta : {0.1, 0.333, 0.5, 0.75, 0.95}) {
      const double product =
          diversity_loss(n, delta) * diversity_poly(n, delta);
      INFO("n = " << n << ", delta = " << delta);
      REQUIRE_THAT(product, WithinRel(double(n), 1e-12));
    }
  }
}

TEST_CASE("conditional success probability") {
  REQUIRE_THAT(conditional_success_prob(kQuarterHalf, 1, 1.0),
               WithinRel(0.8824969025845954028649, 1e-13));
  // Ratio identity: conditional(k) P_k = P_{k+1}.
  for (int k : {1, 2, 5, 20, 63, 64, 100}) {
    const double lhs = conditional_success_prob(kQuarterHalf, k, 1.0) *
                       joint_success_prob(kQuarterHalf, k, 1.0);
    REQUIRE_THAT(
        lhs, WithinRel(joint_success_prob(kQuarterHalf, k + 1, 1.0), 1e-12));
  }
  // Approaches one as the conditioning set grows.
  REQUIRE(conditional_success_prob(kQuarterHalf, 1000000, 1.0) >= 0.999);
  double prev = conditional_success_prob(kQuarterHalf, 1, 1.0);
  for (int k = 2; k <= 40; ++k) {
    const double cur = conditional_success_prob(kQuarterHalf, k, 1.0);
    REQUIRE(cur > prev);
    prev = cur;
  }
}

TEST_CASE("telescoping product of conditionals") {
  for (int n : {2, 8, 64}) {
    double prod = single_success_prob(kQuarterHalf, 1.0);
    for (int k = 1; k < n; ++k)
      prod *= conditional_success_prob(kQuarterHalf, k, 1.0);
    REQUIRE_THAT(prod,
                 WithinRel(joint_success_prob(kQuarterHalf, n, 1.0), 1e-10));
  }
}

TEST_CASE("indicator correlation") {
  REQUIRE_THAT(indicator_correlation(kUnitHalf, 1.0),
               WithinRel(0.3775406687981454353611, 1e-12));
  // Limits in delta.
  REQUIRE_THAT(indicator_correlation(NormalizedParams(1.0, 1e-8), 1.0),
               WithinAbs(1.0, 1e-6));
  REQUIRE_THAT(indicator_correlation(NormalizedParams(1.0, 1.0 - 1e-8), 1.0),
               WithinAbs(0.0, 1e-6));
  // High-reliability limit: approaches 1 - delta.
  REQUIRE_THAT(indicator_correlation(NormalizedParams(1e-10, 0.5), 1.0),
               WithinAbs(0.5, 1e-8));
  REQUIRE(indicator_correlation(kUnitHalf, 0.0) == 0.5);
  // Bounded by 1 - delta.
  for (double delta : {0.1, 0.4, 0.8}) {
    for (double a : {1e-6, 0.1, 1.0, 20.0}) {
      const double zeta =
          indicator_correlation(NormalizedParams(a, delta), 1.0);
      REQUIRE(zeta >= 0.0);
      REQUIRE(zeta <= 1.0 - delta + 1e-12);
    }
  }
}

TEST_CASE("selection combining closed form") {
  REQUIRE(selection_combining_prob(kHalfHalf, 1, 1.0) ==
          single_success_prob(kHalfHalf, 1.0));
  REQUIRE_THAT(selection_combining_prob(kHalfHalf, 2, 1.0),
               WithinRel(0.7406947666842521400696, 1e-12));
  // p_2 = 2 P_1 - P_2 exactly.
  const double direct = 2.0 * single_success_prob(kHalfHalf, 1.0) -
                        joint_success_prob(kHalfHalf, 2, 1.0);
  REQUIRE_THAT(selection_combining_prob(kHalfHalf, 2, 1.0),
               WithinRel(direct, 1e-15));
  REQUIRE_THAT(selection_combining_prob(kHalfHalf, 8, 1.0),
               WithinRel(0.8746727293709673263498, 1e-12));
  REQUIRE_THAT(selection_combining_prob(kHalfHalf, 64, 1.0),
               WithinRel(0.9507635526600607145697, 1e-12));
  REQUIRE(selection_combining_prob(kHalfHalf, 100, 0.0) == 1.0);
}

TEST_CASE("selection combining monotone in n and within brackets") {
  double prev = 0.0;
  for (int n = 1; n <= 128; ++n) {
    const double p = selection_combining_prob(kHalfHalf, n, 1.0);
    REQUIRE(p > prev);
    REQUIRE(p <= 1.0);
    REQUIRE(p >= joint_success_prob(kHalfHalf, n, 1.0));
    prev = p;
  }
}

TEST_CASE("selection combining precision budget") {
  REQUIRE_THROWS_AS(selection_combining_prob(kHalfHalf, 4097, 1.0),
                    PrecisionExhausted);
  REQUIRE_NOTHROW(selection_combining_prob(kHalfHalf, 300, 1.0));
}

TEST_CASE("independent selection probability") {
  REQUIRE_THAT(independent_selection_prob(kHalfHalf, 2, 1.0),
               WithinRel(0.8451818782538245256121, 1e-13));
  REQUIRE(independent_selection_prob(kHalfHalf, 1, 1.0) ==
          single_success_prob(kHalfHalf, 1.0));
  for (int n : {2, 4, 32, 256})
    REQUIRE(independent_selection_prob(kHalfHalf, n, 1.0) >
            selection_combining_prob(kHalfHalf, n, 1.0));
}

TEST_CASE("two-antenna joint exceedance") {
  REQUIRE_THAT(joint_two_antenna_success(kUnitHalf, 2.0, 1.0),
               WithinRel(0.1606660768368713285843, 1e-13));
  // Symmetric by construction.
  REQUIRE(joint_two_antenna_success(kUnitHalf, 2.0, 1.0) ==
          joint_two_antenna_success(kUnitHalf, 1.0, 2.0));
  // theta2 = 0 reduces to the single-antenna expression.
  for (double theta : {0.5, 1.0, 3.0})
    REQUIRE_THAT(joint_two_antenna_success(kUnitHalf, theta, 0.0),
                 WithinRel(single_success_prob(kUnitHalf, theta), 1e-13));
  // Diagonal equals the two-antenna joint success since D_2(x) = 1 + x.
  REQUIRE_THAT(joint_two_antenna_success(kUnitHalf, 1.0, 1.0),
               WithinRel(0.2231301601484298289333, 1e-13));
  REQUIRE_THAT(joint_two_antenna_success(kUnitHalf, 1.0, 1.0),
               WithinRel(joint_success_prob(kUnitHalf, 2, 1.0), 1e-12));
}

TEST_CASE("two-antenna continuity across the diagonal") {
  for (double theta : {0.3, 1.0, 5.0}) {
    const double on = joint_two_antenna_success(kUnitHalf, theta, theta);
    const double off =
        joint_two_antenna_success(kUnitHalf, theta + 1e-9 * theta, theta);
    REQUIRE_THAT(on, WithinRel(off, 1e-6));
  }
}

TEST_CASE("two-antenna joint distribution") {
  REQUIRE_THAT(joint_two_antenna_cdf(kUnitHalf, 1.0, 1.0),
               WithinRel(0.4873712778055451857422, 1e-12));
  REQUIRE_THAT(joint_two_antenna_cdf(kUnitHalf, 0.0, 5.0),
               WithinAbs(0.0, 1e-15));
  REQUIRE_THAT(joint_two_antenna_cdf(kUnitHalf, 5.0, 0.0),
               WithinAbs(0.0, 1e-15));
  // Inclusion-exclusion rearrangement sums to one.
  for (double t1 : {0.5, 1.0, 4.0}) {
    for (double t2 : {0.25, 1.0, 2.0}) {
      const double total = joint_two_antenna_cdf(kUnitHalf, t1, t2) +
                           single_success_prob(kUnitHalf, t1) +
                           single_success_prob(kUnitHalf, t2) -
                           joint_two_antenna_success(kUnitHalf, t1, t2);
      REQUIRE_THAT(total, WithinRel(1.0, 1e-12));
    }
  }
  // Nondecreasing in each argument.
  double prev = 0.0;
  for (double t : {0.1, 0.5, 1.0, 2.0, 8.0}) {
    const double cur = joint_two_antenna_cdf(kUnitHalf, t, 1.0);
    REQUIRE(cur >= prev);
    prev = cur;
  }
}

TEST_CASE("independent two-antenna probability") {
  REQUIRE_THAT(independent_two_antenna_success(kUnitHalf, 1.0, 1.0),
               WithinRel(0.135335283236612691894, 1e-13));
  REQUIRE_THAT(independent_two_antenna_success(kUnitHalf, 2.0, 0.0),
               WithinRel(single_success_prob(kUnitHalf, 2.0), 1e-13));
  for (double t1 : {0.5, 1.0, 4.0})
    for (double t2 : {0.1, 1.0, 3.0})
      REQUIRE(independent_two_antenna_success(kUnitHalf, t1, t2) <=
              joint_two_antenna_success(kUnitHalf, t1, t2));
}
