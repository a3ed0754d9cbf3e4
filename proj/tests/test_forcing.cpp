#include "biofilm/forcing.hpp"

#include <doctest.h>

#include <cmath>

using namespace biofilm;
using doctest::Approx;

TEST_SUITE("forcing") {

TEST_CASE("constant") {
  const ForcingSignal f = ForcingSignal::constant(100.0);
  CHECK(f.evaluate(0.0, 0) == 100.0);
  CHECK(f.evaluate(3.7, 1234) == 100.0);
  CHECK(f.kind() == "constant");
  CHECK(f.describe() == "100");
  CHECK(ForcingSignal().evaluate(1.0, 1) == 0.0);
}

TEST_CASE("sinusoid reads continuous time") {
  const ForcingSignal f = ForcingSignal::Sinusoid{50.0, 50.0, 500.0};
  CHECK(f.evaluate(0.0, 0) == 50.0);
  CHECK(f.evaluate(0.01, 100) == Approx(50.0 + 50.0 * std::sin(5.0)).epsilon(1e-14));
  // Same time, different step index: identical value.
  CHECK(f.evaluate(0.01, 7) == f.evaluate(0.01, 100));
  CHECK(f.evaluate(M_PI / 1000.0, 0) == Approx(100.0));
  CHECK(f.kind() == "sinusoid");

  const ForcingSignal by_step = ForcingSignal::Sinusoid{1.0, 2.0, 0.5, TimeBasis::StepIndex};
  CHECK(by_step.evaluate(99.0, 3) == Approx(1.0 + 2.0 * std::sin(1.5)));
}

TEST_CASE("step switches strictly after the switch point") {
  const ForcingSignal f = ForcingSignal::Step{500.0, 0.0, 100.0};
  CHECK(f.evaluate(0.0, 0) == 0.0);
  CHECK(f.evaluate(0.05, 500) == 0.0);
  CHECK(f.evaluate(0.0501, 501) == 100.0);
  CHECK(f.evaluate(1e9, 499) == 0.0);
  CHECK(f.kind() == "step");
  CHECK(f.describe() == "0 -> 100 after step 500");

  const ForcingSignal by_time = ForcingSignal::Step{0.05, 1.0, 2.0, TimeBasis::Time};
  CHECK(by_time.evaluate(0.05, 9999) == 1.0);
  CHECK(by_time.evaluate(0.0500001, 0) == 2.0);
}

TEST_CASE("equality") {
  CHECK(ForcingSignal::constant(1.0) == ForcingSignal::constant(1.0));
  CHECK_FALSE(ForcingSignal::constant(1.0) == ForcingSignal::constant(2.0));
  CHECK_FALSE(ForcingSignal(ForcingSignal::Step{1, 0, 0}) == ForcingSignal::constant(0.0));
}

}  // TEST_SUITE
