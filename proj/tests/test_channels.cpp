#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <random>

#include "qnetcap/channel.hpp"

using namespace qnetcap;
using Catch::Matchers::WithinAbs;

// Expected values frozen from a high-precision arithmetic oracle (40-digit
// evaluation of the closed forms).
namespace {
constexpr double kH2_07 = 0.8812908992306926;
constexpr double kH2_025 = 0.8112781244591328;
constexpr double kThermal_05 = 1.3774437510817343;
constexpr double kPauliBound_07 = 0.1187091007693074;
constexpr double kThermalLossBound_05_01 = 0.6165533143863354;
}  // namespace

TEST_CASE("binary entropy") {
  REQUIRE(binary_entropy(0.5) == 1.0);
  REQUIRE(binary_entropy(0.0) == 0.0);
  REQUIRE(binary_entropy(1.0) == 0.0);
  REQUIRE_THAT(binary_entropy(0.7), WithinAbs(kH2_07, 1e-14));
  REQUIRE_THAT(binary_entropy(0.25), WithinAbs(kH2_025, 1e-14));
  REQUIRE_THROWS_AS(binary_entropy(-0.1), std::domain_error);
  REQUIRE_THROWS_AS(binary_entropy(1.1), std::domain_error);
  REQUIRE_THROWS_AS(binary_entropy(std::nan("")), std::domain_error);
}

TEST_CASE("thermal entropy") {
  REQUIRE(thermal_entropy(0.0) == 0.0);
  REQUIRE_THAT(thermal_entropy(1.0), WithinAbs(2.0, 1e-14));
  REQUIRE_THAT(thermal_entropy(0.5), WithinAbs(kThermal_05, 1e-14));
  REQUIRE_THROWS_AS(thermal_entropy(-1e-9), std::domain_error);
}

TEST_CASE("construction enforces parameter ranges") {
  REQUIRE_THROWS_AS(Channel::lossy(-0.01), std::domain_error);
  REQUIRE_THROWS_AS(Channel::lossy(1.01), std::domain_error);
  REQUIRE_THROWS_AS(Channel::amplifier(1.0), std::domain_error);
  REQUIRE_THROWS_AS(Channel::thermal_loss(0.0, 0.1), std::domain_error);
  REQUIRE_THROWS_AS(Channel::thermal_loss(1.0, 0.1), std::domain_error);
  REQUIRE_THROWS_AS(Channel::thermal_loss(0.5, -0.1), std::domain_error);
  REQUIRE_THROWS_AS(Channel::noisy_amplifier(0.9, 0.1), std::domain_error);
  REQUIRE_THROWS_AS(Channel::additive_noise(-0.5), std::domain_error);
  REQUIRE_THROWS_AS(Channel::dephasing({1.0}), std::domain_error);
  REQUIRE_THROWS_AS(Channel::dephasing({0.5, 0.6}), std::domain_error);
  REQUIRE_THROWS_AS(Channel::dephasing({0.5, -0.1, 0.6}), std::domain_error);
  REQUIRE_THROWS_AS(Channel::erasure(0.5, 1), std::domain_error);
  REQUIRE_THROWS_AS(Channel::erasure(1.5, 2), std::domain_error);
  REQUIRE_THROWS_AS(Channel::pauli({0.7, 0.1, 0.1, 0.2}), std::domain_error);
  REQUIRE_THROWS_AS(Channel::multiband(0, Channel::lossy(0.5)), std::domain_error);
  REQUIRE_THROWS_AS(Channel::multiband(2, Channel::multiband(2, Channel::lossy(0.5))),
                    std::domain_error);

  // sum tolerance is 1e-12 absolute
  REQUIRE_NOTHROW(Channel::dephasing({0.9, 0.1 + 0.4e-12}));
  REQUIRE_THROWS_AS(Channel::dephasing({0.9, 0.1 + 3e-12}), std::domain_error);
}

TEST_CASE("distillable channel classification") {
  REQUIRE(is_distillable(Channel::lossy(0.3)));
  REQUIRE(is_distillable(Channel::amplifier(2.0)));
  REQUIRE(is_distillable(Channel::dephasing({0.9, 0.1})));
  REQUIRE(is_distillable(Channel::erasure(0.1, 2)));
  REQUIRE(is_distillable(Channel::multiband(4, Channel::erasure(0.1, 2))));
  REQUIRE_FALSE(is_distillable(Channel::thermal_loss(0.3, 0.1)));
  REQUIRE_FALSE(is_distillable(Channel::noisy_amplifier(2.0, 0.1)));
  REQUIRE_FALSE(is_distillable(Channel::additive_noise(0.5)));
  REQUIRE_FALSE(is_distillable(Channel::pauli({0.7, 0.1, 0.1, 0.1})));
  REQUIRE_FALSE(is_distillable(Channel::multiband(4, Channel::thermal_loss(0.3, 0.1))));
}

TEST_CASE("two-way capacities of distillable channels") {
  auto c = two_way_capacity(Channel::lossy(0.5));
  REQUIRE(c.bits == 1.0);
  REQUIRE(is_exact(c));

  c = two_way_capacity(Channel::erasure(0.25, 2));
  REQUIRE_THAT(c.bits, WithinAbs(0.75, 1e-15));
  REQUIRE(is_exact(c));

  c = two_way_capacity(Channel::dephasing({1.0, 0.0}));
  REQUIRE(c.bits == 1.0);
  REQUIRE(is_exact(c));

  c = two_way_capacity(Channel::amplifier(2.0));
  REQUIRE_THAT(c.bits, WithinAbs(1.0, 1e-15));
  REQUIRE(is_exact(c));

  REQUIRE(two_way_capacity(Channel::lossy(1.0)).bits == kInfiniteBits);
  REQUIRE(two_way_capacity(Channel::lossy(0.0)).bits == 0.0);
  REQUIRE(two_way_capacity(Channel::erasure(1.0, 2)).bits == 0.0);

  // dephasing is symmetric under p <-> 1-p
  REQUIRE(two_way_capacity(Channel::dephasing({0.2, 0.8})).bits ==
          two_way_capacity(Channel::dephasing({0.8, 0.2})).bits);

  // qudit cases
  REQUIRE_THAT(two_way_capacity(Channel::erasure(0.25, 4)).bits, WithinAbs(1.5, 1e-15));
  REQUIRE_THAT(two_way_capacity(Channel::dephasing({0.25, 0.25, 0.25, 0.25})).bits,
               WithinAbs(0.0, 1e-15));
}

TEST_CASE("REE bounds for non-distillable channels") {
  REQUIRE(ree_upper_bound(Channel::thermal_loss(0.5, 1.0)) == 0.0);
  REQUIRE(ree_upper_bound(Channel::additive_noise(1.0)) == 0.0);
  // nbar = 0 reduces to the lossy value
  REQUIRE(ree_upper_bound(Channel::thermal_loss(0.5, 0.0)) == 1.0);
  REQUIRE_THAT(ree_upper_bound(Channel::pauli({0.7, 0.1, 0.1, 0.1})),
               WithinAbs(kPauliBound_07, 1e-14));
  REQUIRE_THAT(ree_upper_bound(Channel::thermal_loss(0.5, 0.1)),
               WithinAbs(kThermalLossBound_05_01, 1e-14));
  // gain/transmissivity duality: the g = 1/eta amplifier bound coincides
  REQUIRE_THAT(ree_upper_bound(Channel::noisy_amplifier(2.0, 0.1)),
               WithinAbs(kThermalLossBound_05_01, 1e-14));
  REQUIRE(ree_upper_bound(Channel::additive_noise(0.0)) == kInfiniteBits);

  auto v = two_way_capacity(Channel::pauli({0.7, 0.1, 0.1, 0.1}));
  REQUIRE_FALSE(is_exact(v));
}

TEST_CASE("REE coincides with the capacity on distillable channels") {
  const Channel cases[] = {Channel::lossy(0.37), Channel::amplifier(3.7),
                           Channel::dephasing({0.6, 0.4}), Channel::erasure(0.21, 3),
                           Channel::multiband(5, Channel::lossy(0.9))};
  for (const Channel& c : cases) {
    REQUIRE(ree_upper_bound(c) == two_way_capacity(c).bits);
  }
}

TEST_CASE("multiband additivity") {
  const CapacityValue inner = two_way_capacity(Channel::lossy(0.35));
  const CapacityValue stack = two_way_capacity(Channel::multiband(7, Channel::lossy(0.35)));
  REQUIRE_THAT(stack.bits, WithinAbs(7.0 * inner.bits, 1e-12));
  REQUIRE(is_exact(stack));

  const CapacityValue bound = two_way_capacity(Channel::multiband(3, Channel::thermal_loss(0.5, 0.1)));
  REQUIRE_THAT(bound.bits, WithinAbs(3.0 * kThermalLossBound_05_01, 1e-12));
  REQUIRE_FALSE(is_exact(bound));
}

TEST_CASE("monotonicity of basic capacities") {
  double prev = -1.0;
  for (double eta = 0.0; eta <= 0.999; eta += 0.037) {
    const double c = two_way_capacity(Channel::lossy(eta)).bits;
    REQUIRE(c > prev);
    prev = c;
  }
  prev = 2.0;
  for (double p = 0.0; p <= 0.5; p += 0.025) {
    const double c = two_way_capacity(Channel::dephasing({1.0 - p, p})).bits;
    REQUIRE(c < prev);
    prev = c;
  }
}

TEST_CASE("bound thresholds straddled by random draws") {
  std::mt19937 rng(20260809);
  std::uniform_real_distribution<double> unit(0.05, 0.95);
  std::uniform_real_distribution<double> rel(1e-5, 0.5);
  std::bernoulli_distribution above(0.5);

  for (int i = 0; i < 400; ++i) {
    const double eta = unit(rng);
    const double threshold = eta / (1.0 - eta);
    const bool over = above(rng);
    const double nbar = over ? threshold * (1.0 + rel(rng)) : threshold * (1.0 - rel(rng));
    const double b = ree_upper_bound(Channel::thermal_loss(eta, nbar));
    if (over) {
      REQUIRE(b == 0.0);
    } else {
      REQUIRE(b > 0.0);
    }

    const double g = 1.0 + unit(rng) * 4.0;
    const double athr = 1.0 / (g - 1.0);
    const bool aover = above(rng);
    const double anbar = aover ? athr * (1.0 + rel(rng)) : athr * (1.0 - rel(rng));
    const double ab = ree_upper_bound(Channel::noisy_amplifier(g, anbar));
    if (aover) {
      REQUIRE(ab == 0.0);
    } else {
      REQUIRE(ab > 0.0);
    }

    const bool xover = above(rng);
    const double xi = xover ? 1.0 + rel(rng) : 1.0 - rel(rng);
    const double xb = ree_upper_bound(Channel::additive_noise(xi));
    if (xover) {
      REQUIRE(xb == 0.0);
    } else {
      REQUIRE(xb > 0.0);
    }

    const bool pover = above(rng);
    const double pmax = pover ? 0.5 * (1.0 + rel(rng)) : 0.5 * (1.0 - rel(rng));
    const double rest = (1.0 - pmax) / 3.0;
    const double pb = ree_upper_bound(Channel::pauli({pmax, rest, rest, rest}));
    if (pover) {
      REQUIRE(pb > 0.0);
    } else {
      REQUIRE(pb == 0.0);
    }
  }
}
