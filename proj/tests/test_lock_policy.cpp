#include <cmath>
#include <memory>
#include <stdexcept>

#include "doctest.h"
#include "vqpm/lock_policy.hpp"

using namespace vqpm;

namespace {

QubitMarginals marginals_of(std::vector<QubitMarginal> per_qubit, int precision = 3) {
  QubitMarginals m;
  m.precision = precision;
  m.per_qubit = std::move(per_qubit);
  return m;
}

}  // namespace

TEST_CASE("lock register: permanence and counting") {
  LockRegister locks(3);
  CHECK(locks.n() == 3);
  CHECK(locks.locked_count() == 0);
  CHECK_FALSE(locks.all_locked());

  locks.lock(1, 0);
  CHECK(locks.is_locked(1));
  CHECK(locks.locked_bit(1) == 0);
  CHECK(locks.locked_count() == 1);
  CHECK_THROWS_AS(locks.lock(1, 1), std::invalid_argument);  // relocking is an error
  CHECK_THROWS_AS(locks.lock(0, 2), std::invalid_argument);  // bits are 0 or 1

  locks.lock(0, 1);
  locks.lock(2, 1);
  CHECK(locks.all_locked());
}

TEST_CASE("hoeffding_epsilon: hand-checked values") {
  // delta_i = 1/60, M = 100: eps = sqrt(ln(120) / (2 * 10 * n * 100))
  CHECK(hoeffding_epsilon(1.0 / 60.0, 15, 100) == doctest::Approx(0.012633).epsilon(1e-4));
  CHECK(hoeffding_epsilon(1.0 / 60.0, 20, 100) == doctest::Approx(0.010941).epsilon(1e-4));
  CHECK(hoeffding_epsilon(1.0 / 60.0, 10, 100) == doctest::Approx(0.015472).epsilon(1e-4));
  // algebraic spot check: ln(2/delta) = 1 and 10nM = 50 gives sqrt(1/100)
  CHECK(hoeffding_epsilon(2.0 / std::exp(1.0), 5, 1) == doctest::Approx(0.1).epsilon(1e-12));

  CHECK_THROWS_AS(hoeffding_epsilon(0.0, 10, 100), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_epsilon(2.0, 10, 100), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_epsilon(0.5, 0, 100), std::invalid_argument);
  CHECK_THROWS_AS(hoeffding_epsilon(0.5, 10, 0), std::invalid_argument);
}

TEST_CASE("delta_schedule splits the budget evenly") {
  CHECK(delta_schedule(0.5, 30) == doctest::Approx(1.0 / 60.0).epsilon(1e-15));
  CHECK(delta_schedule(0.5, 1) == 0.5);
  CHECK(delta_schedule(0.1, 10) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK_THROWS_AS(delta_schedule(0.5, 0), std::invalid_argument);
}

TEST_CASE("policy constructors validate their parameters") {
  CHECK_THROWS_AS(ThresholdPolicy(FixedThreshold{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdPolicy(FixedThreshold{-0.1}), std::invalid_argument);
  CHECK_NOTHROW(ThresholdPolicy(FixedThreshold{2.0}));  // above 1: never locks, still valid
  CHECK_THROWS_AS(ThresholdPolicy(GeometricDecay{0.0}), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdPolicy(HoeffdingThreshold{2.5}), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdPolicy(InfluenceWeighted{nullptr, InfluenceScores{{1.0}}}),
                  std::invalid_argument);
  auto base = std::make_shared<const ThresholdPolicy>(FixedThreshold{0.01});
  CHECK_THROWS_AS(ThresholdPolicy(InfluenceWeighted{base, InfluenceScores{{1.5}}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(ThresholdPolicy(BitSignificance{base, {}}), std::invalid_argument);
  CHECK_THROWS_AS(ThresholdPolicy(BitSignificance{base, {0.0}}), std::invalid_argument);
}

TEST_CASE("fixed threshold is constant over iterations and qubits") {
  ThresholdPolicy p = FixedThreshold{0.01};
  CHECK(threshold_for(p, 1, 0, 4) == 0.01);
  CHECK(threshold_for(p, 100, 3, 4) == 0.01);
  CHECK_THROWS_AS(threshold_for(p, 0, 0, 4), std::invalid_argument);
  CHECK_THROWS_AS(threshold_for(p, 1, 4, 4), std::invalid_argument);
}

TEST_CASE("geometric decay halves per iteration and respects its floor") {
  ThresholdPolicy p = GeometricDecay{0.16};
  CHECK(threshold_for(p, 1, 0, 4) == doctest::Approx(0.08).epsilon(1e-15));
  CHECK(threshold_for(p, 2, 0, 4) == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(threshold_for(p, 3, 0, 4) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(threshold_for(p, 4, 0, 4) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(threshold_for(p, 20, 0, 4) == 0.01);  // floored

  ThresholdPolicy lin = GeometricDecay{0.16, GeometricDecay::Law::Linear, 0.01};
  CHECK(threshold_for(lin, 1, 0, 4) == doctest::Approx(0.16).epsilon(1e-15));
  CHECK(threshold_for(lin, 2, 0, 4) == doctest::Approx(0.08).epsilon(1e-15));
  CHECK(threshold_for(lin, 4, 0, 4) == doctest::Approx(0.04).epsilon(1e-15));
  CHECK(threshold_for(lin, 1000, 0, 4) == 0.01);
}

TEST_CASE("hoeffding threshold is constant per iteration and clamped") {
  ThresholdPolicy p = HoeffdingThreshold{};  // delta 0.5, M 100, horizon 30
  const double t1 = threshold_for(p, 1, 0, 15);
  CHECK(t1 == doctest::Approx(0.012633).epsilon(1e-4));
  CHECK(threshold_for(p, 17, 3, 15) == t1);  // same budget slice at every iteration

  // small n pushes the raw bound above the clamp, large n below it
  CHECK(threshold_for(p, 1, 0, 5) == 0.015);
  CHECK(threshold_for(p, 1, 0, 100) == 0.005);
  CHECK(hoeffding_epsilon(1.0 / 60.0, 5, 100) > 0.015);
  CHECK(hoeffding_epsilon(1.0 / 60.0, 100, 100) < 0.005);
}

TEST_CASE("influence weighting divides the base threshold by the score") {
  auto fixed = std::make_shared<const ThresholdPolicy>(FixedThreshold{0.01});
  ThresholdPolicy p = InfluenceWeighted{fixed, InfluenceScores{{1.0, 0.5, 0.875}}};
  CHECK(threshold_for(p, 1, 0, 3) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(threshold_for(p, 1, 1, 3) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(threshold_for(p, 1, 2, 3) == doctest::Approx(0.01 / 0.875).epsilon(1e-15));

  // a zero score can never lock under a fixed base (threshold diverges)
  ThresholdPolicy z = InfluenceWeighted{fixed, InfluenceScores{{0.0, 1.0}}};
  CHECK(std::isinf(threshold_for(z, 1, 0, 2)));

  // under a hoeffding base the result is clamped back into range
  auto hoeff = std::make_shared<const ThresholdPolicy>(HoeffdingThreshold{});
  ThresholdPolicy w = InfluenceWeighted{hoeff, InfluenceScores{{0.5, 1.0, 0.0}}};
  CHECK(threshold_for(w, 1, 0, 15) == 0.015);  // 0.012633 / 0.5 clamps to the hi end
  CHECK(threshold_for(w, 1, 1, 15) == doctest::Approx(0.012633).epsilon(1e-4));
  CHECK(threshold_for(w, 1, 2, 15) == 0.015);  // even a zero score stays finite
}

TEST_CASE("bit significance multiplies the base by its per-qubit profile") {
  CHECK(bit_significance_profile(4, 2.0) == std::vector<double>{1.0, 2.0, 4.0, 8.0});
  CHECK(bit_significance_profile(3, 1.0) == std::vector<double>{1.0, 1.0, 1.0});
  CHECK_THROWS_AS(bit_significance_profile(3, 0.0), std::invalid_argument);

  auto base = std::make_shared<const ThresholdPolicy>(FixedThreshold{0.01});
  ThresholdPolicy p = BitSignificance{base, bit_significance_profile(4, 2.0)};
  CHECK(threshold_for(p, 1, 0, 4) == doctest::Approx(0.01).epsilon(1e-15));
  CHECK(threshold_for(p, 1, 1, 4) == doctest::Approx(0.02).epsilon(1e-15));
  CHECK(threshold_for(p, 1, 3, 4) == doctest::Approx(0.08).epsilon(1e-15));
}

TEST_CASE("decide_locks: lock direction, ties, and sub-threshold gaps") {
  ThresholdPolicy p = FixedThreshold{0.01};

  SUBCASE("a clear gap locks onto the likelier bit") {
    LockDecision d = decide_locks(marginals_of({{0.512, 0.488}}), p, LockRegister(1), 4);
    CHECK(d.locks.is_locked(0));
    CHECK(d.locks.locked_bit(0) == 0);
    REQUIRE(d.events.size() == 1);
    CHECK(d.events[0].qubit == 0);
    CHECK(d.events[0].bit == 0);
    CHECK(d.events[0].iteration == 4);
    CHECK(d.events[0].threshold == 0.01);
  }

  SUBCASE("the opposite gap locks onto one") {
    LockDecision d = decide_locks(marginals_of({{0.488, 0.512}}), p, LockRegister(1), 1);
    CHECK(d.locks.locked_bit(0) == 1);
  }

  SUBCASE("an exact tie never locks, whatever the threshold") {
    LockDecision d = decide_locks(marginals_of({{0.5, 0.5}}), FixedThreshold{1e-9},
                                  LockRegister(1), 1);
    CHECK_FALSE(d.locks.is_locked(0));
    CHECK(d.events.empty());
  }

  SUBCASE("a gap below the threshold stays free") {
    LockDecision d = decide_locks(marginals_of({{0.505, 0.495}}), FixedThreshold{0.02},
                                  LockRegister(1), 1);
    CHECK_FALSE(d.locks.is_locked(0));
  }

  SUBCASE("a gap exactly at the threshold locks") {
    LockDecision d = decide_locks(marginals_of({{0.505, 0.495}}), FixedThreshold{0.01},
                                  LockRegister(1), 1);
    CHECK(d.locks.is_locked(0));
  }

  SUBCASE("locked qubits are skipped, free ones still considered") {
    LockRegister locks(2);
    locks.lock(0, 1);  // disagrees with the marginal below; must not re-fire
    LockDecision d = decide_locks(marginals_of({{0.9, 0.1}, {0.8, 0.2}}), p, locks, 2);
    CHECK(d.locks.locked_bit(0) == 1);
    CHECK(d.locks.locked_bit(1) == 0);
    REQUIRE(d.events.size() == 1);
    CHECK(d.events[0].qubit == 1);
  }

  SUBCASE("register size must match the marginals") {
    CHECK_THROWS_AS(decide_locks(marginals_of({{0.5, 0.5}}), p, LockRegister(2), 1),
                    std::invalid_argument);
  }
}

TEST_CASE("a never-lock threshold leaves everything free") {
  ThresholdPolicy none = FixedThreshold{2.0};
  LockDecision d = decide_locks(marginals_of({{1.0, 0.0}, {0.0, 1.0}}), none, LockRegister(2), 1);
  CHECK(d.locks.locked_count() == 0);
}

TEST_CASE("influence weighting with all-one scores behaves like its base") {
  auto base = std::make_shared<const ThresholdPolicy>(FixedThreshold{0.01});
  ThresholdPolicy weighted = InfluenceWeighted{base, InfluenceScores{{1.0, 1.0, 1.0}}};
  for (std::size_t q = 0; q < 3; ++q)
    CHECK(threshold_for(weighted, 5, q, 3) == threshold_for(*base, 5, q, 3));
}

TEST_CASE("make_policy parses every strategy") {
  PolicyContext ctx;
  ctx.n = 15;
  ctx.max_iter = 30;

  CHECK(threshold_for(make_policy("fixed:0.01", ctx), 1, 0, 15) == 0.01);
  CHECK(threshold_for(make_policy(" fixed:0.25 ", ctx), 1, 0, 15) == 0.25);
  CHECK(threshold_for(make_policy("none", ctx), 1, 0, 15) == 2.0);
  CHECK(threshold_for(make_policy("decay:p0=0.16", ctx), 3, 0, 15) ==
        doctest::Approx(0.02).epsilon(1e-15));
  CHECK(threshold_for(make_policy("decay:p0=0.2,floor=0.05,law=linear", ctx), 2, 0, 15) ==
        doctest::Approx(0.1).epsilon(1e-15));
  CHECK(threshold_for(make_policy("decay:p0=0.2,floor=0.05,law=linear", ctx), 100, 0, 15) == 0.05);
  CHECK(threshold_for(make_policy("hoeffding", ctx), 1, 0, 15) ==
        doctest::Approx(0.012633).epsilon(1e-4));
  CHECK(threshold_for(make_policy("hoeffding:delta=0.5,M=100,clamp=0.005:0.015", ctx), 1, 0, 15) ==
        threshold_for(make_policy("hoeffding", ctx), 1, 0, 15));
  CHECK(threshold_for(make_policy("bitsig:p=0.01,scale=2", ctx), 1, 3, 15) ==
        doctest::Approx(0.08).epsilon(1e-15));

  PolicyContext with_scores = ctx;
  with_scores.influence = InfluenceScores{std::vector<double>(15, 1.0)};
  ThresholdPolicy wi = make_policy("hoeffding+influence", with_scores);
  CHECK(threshold_for(wi, 1, 0, 15) == threshold_for(make_policy("hoeffding", ctx), 1, 0, 15));
}

TEST_CASE("make_policy rejects malformed specs") {
  PolicyContext ctx;
  ctx.n = 4;
  CHECK_THROWS_AS(make_policy("bogus", ctx), std::invalid_argument);
  CHECK_THROWS_AS(make_policy("fixed", ctx), std::invalid_argument);
  CHECK_THROWS_AS(make_policy("fixed:abc", ctx), std::invalid_argument);
  CHECK_THROWS_AS(make_policy("fixed:-1", ctx), std::invalid_argument);
  CHECK_THROWS_AS(make_policy("none:1", ctx), std::invalid_argument);
  CHECK_THROWS_AS(make_policy("decay", ctx), std::invalid_argument);  // p0 is required
  CHECK_THROWS_AS(make_policy("decay:floor=0.01", ctx), std::invalid_argument);
  CHECK_THROWS_AS(make_policy("decay:p0=0.1,law=cubic", ctx), std::invalid_argument);
  CHECK_THROWS_AS(make_policy("hoeffding:delta=0.5,bogus=1", ctx), std::invalid_argument);
  CHECK_THROWS_AS(make_policy("hoeffding:clamp=5", ctx), std::invalid_argument);
  CHECK_THROWS_AS(make_policy("hoeffding+influence", ctx), std::invalid_argument);  // no scores
}
