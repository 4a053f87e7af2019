#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "doctest.h"
#include "rectiflow/thermal.hpp"

using namespace rectiflow;

TEST_CASE("bose_einstein matches the defining expression at moderate x") {
  // n(E, T) = 1/(e^{E/T} - 1); E = T gives 1/(e - 1).
  CHECK(bose_einstein(1.0, 1.0) ==
        doctest::Approx(1.0 / std::expm1(1.0)).epsilon(1e-15));
  CHECK(bose_einstein(2.0, 0.5) ==
        doctest::Approx(1.0 / std::expm1(4.0)).epsilon(1e-15));
}

TEST_CASE("bose_einstein survives extreme arguments without overflow") {
  const double frozen = bose_einstein(1.0, 1e-3);  // x = 1000
  CHECK(std::isfinite(frozen));
  CHECK(frozen >= 0.0);
  CHECK(frozen < 1e-300);

  const double classical = bose_einstein(1e-9, 1.0);  // x = 1e-9
  CHECK(std::isfinite(classical));
  // Leading behavior T/E.
  CHECK(classical == doctest::Approx(1e9 - 0.5).epsilon(1e-12));
}

TEST_CASE("bose_einstein branches agree at their seams") {
  // Large-x seam at x = 30.
  for (double x : {29.999999, 30.000001}) {
    const double direct = 1.0 / std::expm1(x);
    CHECK(bose_einstein(x, 1.0) == doctest::Approx(direct).epsilon(1e-12));
  }
  // Small-x seam at x = 1e-6: the Laurent expansion and expm1 agree far
  // below the advertised accuracy.
  const double lo = bose_einstein(0.9999e-6, 1.0);
  const double hi = bose_einstein(1.0001e-6, 1.0);
  CHECK(lo == doctest::Approx(1.0 / 0.9999e-6 - 0.5).epsilon(1e-10));
  CHECK(hi == doctest::Approx(1.0 / std::expm1(1.0001e-6)).epsilon(1e-12));
}

TEST_CASE("bose_einstein is monotone in temperature") {
  double prev = 0.0;
  for (double t : {0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 20.0}) {
    const double n = bose_einstein(1.0, t);
    CHECK(n > prev);
    prev = n;
  }
}

TEST_CASE("bose_einstein rejects non-positive energies and temperatures") {
  CHECK_THROWS_AS(bose_einstein(0.0, 1.0), DomainError);
  CHECK_THROWS_AS(bose_einstein(-1.0, 1.0), DomainError);
  try {
    bose_einstein(-2.5, 1.0);
    FAIL("expected a throw");
  } catch (const DomainError& e) {
    CHECK(e.kind() == DomainError::Kind::NonPositiveEnergy);
  }
  CHECK_THROWS_AS(bose_einstein(1.0, 0.0), DomainError);
  CHECK_THROWS_AS(bose_einstein(1.0, -1.0), DomainError);
}

TEST_CASE("rates satisfy detailed balance with an exact gap") {
  std::mt19937 rng(20240801);
  std::uniform_real_distribution<double> energy(0.05, 3.0);
  std::uniform_real_distribution<double> temp(0.05, 5.0);
  std::uniform_real_distribution<double> coupling(1e-5, 1e-1);
  for (int i = 0; i < 200; ++i) {
    const double e = energy(rng);
    const double t = temp(rng);
    const double gs = coupling(rng);
    const RatePair rp = rates(e, t, gs);
    // The emission/absorption gap reproduces gamma_side to machine accuracy.
    // Bitwise equality is not attainable: down = fl(up + gs) rounds once, so
    // the measured gap can sit an ulp of `down` away from gs (two roundings
    // when the occupation is below 1).  Allow exactly that much.
    const double gap_tol = 4.0 * std::numeric_limits<double>::epsilon() *
                           std::max(rp.down, gs);
    CHECK(std::abs((rp.down - rp.up) - gs) <= gap_tol);
    // Detailed balance: up/down = e^{-E/T}.
    CHECK(rp.up / rp.down ==
          doctest::Approx(std::exp(-e / t)).epsilon(1e-12));
  }
}

TEST_CASE("rates with a zero side coupling vanish") {
  const RatePair rp = rates(1.0, 2.0, 0.0);
  CHECK(rp.up == 0.0);
  CHECK(rp.down == 0.0);
  CHECK_THROWS_AS(rates(1.0, 2.0, -1e-9), DomainError);
}

TEST_CASE("side couplings implement the chi asymmetry") {
  const SideCouplings sym = side_couplings({2e-3, 0.0});
  CHECK(sym.left == 2e-3);
  CHECK(sym.right == 2e-3);

  const SideCouplings tilted = side_couplings({1e-3, 0.4});
  CHECK(tilted.left == doctest::Approx(0.6e-3).epsilon(1e-15));
  CHECK(tilted.right == doctest::Approx(1.4e-3).epsilon(1e-15));
  CHECK(tilted.of(Side::L) == tilted.left);
  CHECK(tilted.of(Side::R) == tilted.right);

  // Full asymmetry disconnects one side entirely.
  CHECK(side_couplings({1e-3, 1.0}).left == 0.0);
  CHECK(side_couplings({1e-3, -1.0}).right == 0.0);

  CHECK_THROWS_AS(side_couplings({0.0, 0.0}), DomainError);
  CHECK_THROWS_AS(side_couplings({1e-3, 1.5}), DomainError);
  CHECK_THROWS_AS(side_couplings({1e-3, -1.5}), DomainError);
}

TEST_CASE("thermal scenario orientation controls which side is hot") {
  const ThermalScenario hot_left{2.0, 0.5, Orientation::HotLeft};
  CHECK(hot_left.temperature(Side::L) == 2.0);
  CHECK(hot_left.temperature(Side::R) == 0.5);

  const ThermalScenario hot_right = hot_left.flipped();
  CHECK(hot_right.orientation == Orientation::HotRight);
  CHECK(hot_right.temperature(Side::L) == 0.5);
  CHECK(hot_right.temperature(Side::R) == 2.0);
  CHECK(hot_right.flipped().orientation == Orientation::HotLeft);
}

TEST_CASE("thermal scenario validation") {
  CHECK_NOTHROW(ThermalScenario{1.0, 1.0, Orientation::HotLeft}.validate());
  CHECK_THROWS_AS(ThermalScenario({0.5, 1.0, Orientation::HotLeft}).validate(),
                  DomainError);
  CHECK_THROWS_AS(ThermalScenario({1.0, 0.0, Orientation::HotLeft}).validate(),
                  DomainError);
  CHECK_THROWS_AS(
      ThermalScenario({-1.0, -2.0, Orientation::HotLeft}).validate(),
      DomainError);
}

TEST_CASE("bias functions are orientation-independent and vanish at "
          "equilibrium") {
  const ThermalScenario sc{2.0, 0.5, Orientation::HotLeft};
  const BiasValues b = bias_functions(1.0, sc);
  CHECK(b.delta_hc > 0.0);
  CHECK(b.sigma > b.delta_hc);
  CHECK(b.delta_hc ==
        doctest::Approx(bose_einstein(1.0, 2.0) - bose_einstein(1.0, 0.5))
            .epsilon(1e-15));

  // Labels are hot/cold, not left/right: flipping the orientation changes
  // nothing.
  const BiasValues flipped = bias_functions(1.0, sc.flipped());
  CHECK(flipped.delta_hc == b.delta_hc);
  CHECK(flipped.sigma == b.sigma);

  // Equal temperatures subtract identical occupations: exactly zero.
  const BiasValues eq =
      bias_functions(1.0, {1.3, 1.3, Orientation::HotLeft});
  CHECK(eq.delta_hc == 0.0);
}
