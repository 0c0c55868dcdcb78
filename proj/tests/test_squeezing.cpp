#include <doctest.h>

#include <cmath>
#include <random>

#include "sqznb/error.hpp"
#include "sqznb/squeezing.hpp"

using namespace sqznb;
using doctest::Approx;

namespace {

double rel_diff(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

// Random valid (possibly mixed) state: pure state then random loss.
SqueezedState random_state(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> db(0.0, 25.0), eta(0.0, 1.0);
  return apply_loss(state_from_db(db(rng)), eta(rng));
}

}  // namespace

TEST_CASE("state_from_db") {
  const auto vacuum = state_from_db(0.0);
  CHECK(vacuum.v_plus() == 1.0);
  CHECK(vacuum.v_minus() == 1.0);

  // 10^(+-1.03) evaluated independently.
  const auto s = state_from_db(10.3);
  CHECK(s.v_minus() == Approx(0.0933254300796991).epsilon(1e-12));
  CHECK(s.v_plus() == Approx(10.715193052376065).epsilon(1e-12));
  CHECK(s.is_pure());

  const auto s20 = state_from_db(20.0);
  CHECK(s20.v_minus() == Approx(0.01).epsilon(1e-14));
  CHECK(s20.v_plus() == Approx(100.0).epsilon(1e-14));

  CHECK_THROWS_AS(state_from_db(-0.1), InvalidArgument);
  CHECK_THROWS_AS(state_from_db(NAN), InvalidArgument);
}

TEST_CASE("SqueezedState invariants are enforced") {
  CHECK_THROWS_AS(SqueezedState(2.0, 0.0), InvalidArgument);
  CHECK_THROWS_AS(SqueezedState(0.5, 2.0), InvalidArgument);  // ordering
  CHECK_THROWS_AS(SqueezedState(2.0, 0.4), InvalidArgument);  // below the uncertainty bound
  CHECK_NOTHROW(SqueezedState(2.0, 0.5));
  CHECK_NOTHROW(SqueezedState(3.0, 3.0));
}

TEST_CASE("variance_along follows the ellipse") {
  const auto s = state_from_db(6.0, 0.3);
  CHECK(s.variance_along(0.3) == Approx(s.v_minus()));
  CHECK(s.variance_along(0.3 + M_PI / 2) == Approx(s.v_plus()));
}

TEST_CASE("apply_loss") {
  const SqueezedState s(10.715, 0.09333);
  const auto out = apply_loss(s, 0.44);
  // 0.44 v + 0.56
  CHECK(out.v_plus() == Approx(5.2746).epsilon(1e-12));
  CHECK(out.v_minus() == Approx(0.6010652).epsilon(1e-12));

  CHECK(apply_loss(s, 1.0) == s);
  const auto gone = apply_loss(s, 0.0);
  CHECK(gone.v_plus() == 1.0);
  CHECK(gone.v_minus() == 1.0);

  CHECK_THROWS_AS(apply_loss(s, 1.01), InvalidArgument);
  CHECK_THROWS_AS(apply_loss(s, -0.01), InvalidArgument);
}

TEST_CASE("apply_phase_noise") {
  const SqueezedState s(5.2746, 0.6011);
  CHECK(apply_phase_noise(s, PhaseNoise(0.0)) == s);

  // cos^2(0.037) = 0.99863..., sin^2 = 0.0013684...
  const auto out = apply_phase_noise(s, PhaseNoise(0.037));
  const double c2 = std::cos(0.037) * std::cos(0.037);
  CHECK(out.v_minus() == Approx(0.6011 * c2 + 5.2746 * (1 - c2)).epsilon(1e-12));
  CHECK(out.v_minus() == Approx(0.6075).epsilon(1e-4));
  CHECK(out.v_plus() == Approx(5.2682).epsilon(1e-4));

  const auto pure20 = apply_phase_noise(SqueezedState(100.0, 0.01), PhaseNoise(0.035));
  CHECK(pure20.v_minus() == Approx(0.1324377423372877).epsilon(1e-12));

  // Phase noise on vacuum is a no-op.
  CHECK(apply_phase_noise(SqueezedState(), PhaseNoise(0.5)) == SqueezedState());

  CHECK_THROWS_AS(PhaseNoise(-0.001), InvalidArgument);
  CHECK_THROWS_AS(PhaseNoise(M_PI / 4), InvalidArgument);
}

TEST_CASE("Gaussian phase averaging is the exact expectation") {
  const double theta = 0.05;
  const PhaseNoise exact(theta, PhaseAveraging::kGaussian);
  // E[sin^2(x)], x ~ N(0, theta^2), by midpoint quadrature.
  double integral = 0.0;
  const int n = 200000;
  const double span = 12.0 * theta, dx = span / n;
  for (int i = 0; i < n; ++i) {
    const double x = -6.0 * theta + (i + 0.5) * dx;
    integral += std::sin(x) * std::sin(x) * std::exp(-x * x / (2 * theta * theta)) * dx;
  }
  integral /= std::sqrt(2 * M_PI) * theta;
  CHECK(exact.leakage() == Approx(integral).epsilon(1e-9));
  // Small-angle substitution differs only at higher order.
  CHECK(PhaseNoise(theta).leakage() == Approx(exact.leakage()).epsilon(1e-2));
}

TEST_CASE("detected_db") {
  CHECK(detected_db(SqueezedState()) == 0.0);
  CHECK(detected_db(SqueezedState(2.0, 0.6011)) == Approx(2.21).epsilon(1e-3));
  CHECK(detected_db(SqueezedState(10.0, 0.13245)) == Approx(8.779).epsilon(1e-3));
}

TEST_CASE("loss chain") {
  CHECK(LossChain().total() == 1.0);
  const LossChain methods({{"mode_mismatch", 0.75}, {"omc", 0.82}, {"faraday", 0.80}});
  CHECK(methods.total() == Approx(0.492).epsilon(1e-14));
  CHECK(LossChain({{"unit", 1.0}, {"rest", 0.44}}).total() == 0.44);
  LossChain chain;
  CHECK_THROWS_AS(chain.add("zero", 0.0), InvalidArgument);
  CHECK_THROWS_AS(chain.add("gain", 1.1), InvalidArgument);
}

TEST_CASE("propagate end to end") {
  CHECK(propagate_db(10.3, 0.44, PhaseNoise(0.037)) == Approx(2.1648341645059825).epsilon(1e-12));
  CHECK(propagate_db(10.3, 0.44, PhaseNoise(0.0)) == Approx(2.2107986860701105).epsilon(1e-12));
  CHECK(propagate_db(20.0, 1.0, PhaseNoise(0.035)) == Approx(8.77988231263484).epsilon(1e-12));

  const auto p = propagate(10.3, LossChain({{"a", 0.75}, {"b", 0.82}, {"c", 0.80}}), PhaseNoise(0.0));
  CHECK(p.efficiency == Approx(0.492));
  CHECK(p.detected_db == Approx(detected_db(apply_loss(state_from_db(10.3), 0.492))));

  // Vacuum stays vacuum regardless of phase noise.
  CHECK(propagate_db(0.0, 0.5, PhaseNoise(0.01)) == 0.0);
}

TEST_CASE("property: loss composition") {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> eta(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_state(rng);
    const double a = eta(rng), b = eta(rng);
    const auto twice = apply_loss(apply_loss(s, a), b);
    const auto once = apply_loss(s, a * b);
    REQUIRE(rel_diff(twice.v_plus(), once.v_plus()) <= 1e-12);
    REQUIRE(rel_diff(twice.v_minus(), once.v_minus()) <= 1e-12);
  }
}

TEST_CASE("property: physicality and trace preservation") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> eta(0.0, 1.0), theta(0.0, 0.7);
  for (int i = 0; i < 2000; ++i) {
    const auto s = random_state(rng);
    const auto lossy = apply_loss(s, eta(rng));
    REQUIRE(lossy.v_plus() * lossy.v_minus() >= 1.0 - 1e-12);
    const auto noisy = apply_phase_noise(lossy, PhaseNoise(theta(rng)));
    REQUIRE(noisy.v_plus() * noisy.v_minus() >= 1.0 - 1e-12);
    REQUIRE(rel_diff(noisy.v_plus() + noisy.v_minus(), lossy.v_plus() + lossy.v_minus()) <= 1e-12);
    REQUIRE(noisy.v_minus() >= lossy.v_minus() * (1 - 1e-15));
    REQUIRE(noisy.v_plus() <= lossy.v_plus() * (1 + 1e-15));
  }
}

TEST_CASE("property: monotonicity and bounds of detected squeezing") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> db(0.5, 15.0), eta(0.0, 1.0), theta(0.0, 0.05);
  for (int i = 0; i < 1000; ++i) {
    const double s = db(rng), t = theta(rng);
    const double e1 = eta(rng), e2 = eta(rng);
    const double lo = std::min(e1, e2), hi = std::max(e1, e2);
    // Below the phase-noise optimum more efficiency always helps.
    REQUIRE(propagate_db(s, lo, PhaseNoise(t)) <= propagate_db(s, hi, PhaseNoise(t)) + 1e-12);
    const double t2 = t + 0.01;
    REQUIRE(propagate_db(s, e1, PhaseNoise(t2)) <= propagate_db(s, e1, PhaseNoise(t)) + 1e-12);
    REQUIRE(propagate_db(s, e1, PhaseNoise(t)) <= s + 1e-12);
  }
}

TEST_CASE("property: dB round trip") {
  for (double s = 0.0; s <= 40.0; s += 0.37) {
    REQUIRE(std::abs(propagate_db(s, 1.0, PhaseNoise(0.0)) - s) <= 1e-10);
  }
}
