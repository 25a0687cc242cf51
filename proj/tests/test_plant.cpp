#include <catch_amalgamated.hpp>

#include <cmath>
#include <random>
#include <vector>

#include "oracles.hpp"
#include "zflow/plant.hpp"

using Catch::Matchers::WithinAbs;
using zflow::ErrorCode;
using zflow::Mode;
using zflow::PlantState;

TEST_CASE("min_service_rate", "[plant]") {
  const std::vector<double> table{14.5, 20.0, 27.0};
  CHECK(zflow::min_service_rate(table) == 14.5);
  const std::vector<double> one{20.0};
  CHECK(zflow::min_service_rate(one) == 20.0);
  CHECK(error_code_of([] { zflow::min_service_rate({}); }) == ErrorCode::EmptyRateList);
}

TEST_CASE("rtt_update", "[plant]") {
  CHECK(zflow::rtt_update(10.0, 10.0, 7.0 / 8.0) == 10.0);
  CHECK(zflow::rtt_update(16.0, 8.0, 7.0 / 8.0) == 15.0);
  CHECK(zflow::rtt_update(16.0, 8.0, 0.0) == 8.0);
}

TEST_CASE("EWMA contracts towards the measurement", "[plant][property]") {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> ms(0.5, 500.0);
  std::uniform_real_distribution<double> weight(0.0, 0.99);
  for (int i = 0; i < 500; ++i) {
    const double prev = ms(rng), m = ms(rng), alpha = weight(rng);
    const double next = zflow::rtt_update(prev, m, alpha);
    CHECK_THAT(std::abs(next - m), WithinAbs(alpha * std::abs(prev - m), 1e-12 * std::max(prev, m)));
  }
  double rtt = 40.0;
  for (int k = 1; k <= 200; ++k) {
    rtt = zflow::rtt_update(rtt, 10.0, 7.0 / 8.0);
    CHECK(std::abs(rtt - 10.0) <= 30.0 * std::pow(7.0 / 8.0, k) * (1 + 1e-12) + 1e-14);
  }
}

TEST_CASE("queue_step examples", "[plant]") {
  PlantState s{250.0, 10.0, 0.0, 0.0, 0.0, Mode::analytic};
  CHECK(zflow::queue_step(s, 14.5, 14.5, 10.0, 1000.0).q == 250.0);

  PlantState empty{0.0, 10.0, 0.0, 0.0, 0.0, Mode::analytic};
  const auto analytic = zflow::queue_step(empty, 475.3, 14.5, 10.0, 1000.0);
  CHECK_THAT(analytic.q, WithinAbs(4608.0, 1e-9));
  CHECK(analytic.drops == 0.0);

  empty.mode = Mode::physical;
  const auto physical = zflow::queue_step(empty, 475.3, 14.5, 10.0, 1000.0);
  CHECK(physical.q == 1000.0);
  CHECK_THAT(physical.drops, WithinAbs(3608.0, 1e-9));

  // An emptying queue serves only what it has.
  PlantState low{30.0, 10.0, 0.0, 0.0, 0.0, Mode::physical};
  const auto drained = zflow::queue_step(low, 0.0, 14.5, 10.0, 1000.0);
  CHECK(drained.q == 0.0);
  CHECK(drained.served == 30.0);
  CHECK(drained.drops == 0.0);
}

TEST_CASE("analytic mode leaves q unconstrained", "[plant]") {
  PlantState s{0.0, 10.0, 0.0, 0.0, 0.0, Mode::analytic};
  s = zflow::queue_step(s, 0.0, 14.5, 10.0, 1000.0);
  CHECK(s.q == -145.0);
  s = zflow::queue_step_excess(s, 500.0, 10.0);
  CHECK(s.q == 4855.0);
  CHECK(s.drops == 0.0);

  PlantState phys{0.0, 10.0, 0.0, 0.0, 0.0, Mode::physical};
  CHECK(error_code_of([&] { zflow::queue_step_excess(phys, 1.0, 10.0); }) == ErrorCode::InvariantViolation);
}

TEST_CASE("physical mode conserves volume", "[plant][property]") {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> rate(0.0, 60.0);
  std::uniform_real_distribution<double> rtt(1.0, 20.0);
  for (int run = 0; run < 100; ++run) {
    const double capacity = 500.0;
    PlantState s{100.0, 10.0, 0.0, 0.0, 0.0, Mode::physical};
    const double q_init = s.q;
    for (int k = 0; k < 100; ++k) {
      s = zflow::queue_step(s, rate(rng), rate(rng), rtt(rng), capacity);
      REQUIRE(s.q >= 0.0);
      REQUIRE(s.q <= capacity);
      REQUIRE(s.drops >= 0.0);
    }
    CHECK_THAT(s.arrived - s.served - s.drops, WithinAbs(s.q - q_init, 1e-9));
  }
}
