#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ecs/inequalities.hpp"
#include "ecs/oracle/fock.hpp"

using namespace ecs;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEps = std::numeric_limits<double>::epsilon();

bool same(const MeasurementSetting& x, const MeasurementSetting& y) {
  return x.theta == y.theta && x.phi == y.phi;
}

// Settings found by the optimizer at alpha = 1.5.
const std::array<MeasurementSetting, 4> kBell15{
    {{0.7592, -0.2236}, {0.4301, 2.2468}, {0.2186, 0.0819}, {1.5978, -0.3527}}};

}  // namespace

TEST_CASE("bound identities hold to machine precision") {
  for (double phi = -3.0; phi <= 3.0; phi += 0.01) {
    const double s = 2.0 * std::abs(std::sin(phi / 2.0));
    CHECK(std::abs(bound_L(phi) + s - 8.0) <= 8 * kEps);
    CHECK(std::abs(bound_LS(phi) + s / 3.0 - 2.0) <= 2 * kEps);
  }
  CHECK(bound_L(0.25) == doctest::Approx(7.7506).epsilon(1e-5));
  CHECK(bound_LS(0.65) == doctest::Approx(2.0 - (2.0 / 3.0) * std::sin(0.325)).epsilon(1e-15));
  CHECK(std::abs(bound_LS(0.65) - 1.7872) < 5e-4);
}

TEST_CASE("setting catalog for L") {
  const double phi = 0.3;
  const auto c = catalog_L(phi);
  CHECK(same(c.a[0], {kPi / 2, 0.0}));
  CHECK(same(c.a[1], {kPi / 2, kPi / 2}));
  CHECK(same(c.a[2], {0.0, 0.0}));
  CHECK(same(c.b[4], c.a[0]));
  CHECK(same(c.b[5], c.a[1]));
  CHECK(same(c.b[6], c.a[2]));
  CHECK(same(c.b[0], {kPi / 2, phi}));
  CHECK(same(c.b[3], {phi, kPi / 2}));
  CHECK(same(c.b[1], {kPi / 2, kPi / 2 + phi}));
  CHECK(same(c.b[2], {kPi / 2 + phi, kPi / 2}));
}

TEST_CASE("setting catalog for LS") {
  const double phi = 0.65;
  const auto c = catalog_LS(phi);
  CHECK(same(c.bplus[0], {kPi / 2, phi / 2}));
  CHECK(same(c.bminus[0], {kPi / 2, -phi / 2}));
  CHECK(same(c.bplus[1], {kPi / 2 - phi / 2, kPi / 2}));
  CHECK(same(c.bminus[1], {kPi / 2 + phi / 2, kPi / 2}));
  CHECK(same(c.bplus[2], {phi / 2, 0.0}));
  CHECK(same(c.bminus[2], {-phi / 2, 0.0}));
  // each pair subtends phi on the Bloch sphere
  auto vec = [](const MeasurementSetting& s) {
    return std::array<double, 3>{std::sin(s.theta) * std::cos(s.phi), std::sin(s.theta) * std::sin(s.phi),
                                 std::cos(s.theta)};
  };
  for (int i = 0; i < 3; ++i) {
    const auto u = vec(c.bplus[i]), v = vec(c.bminus[i]);
    CHECK(std::acos(u[0] * v[0] + u[1] * v[1] + u[2] * v[2]) == doctest::Approx(phi).epsilon(1e-12));
  }
}

TEST_CASE("kind names") {
  for (auto k : {InequalityKind::L, InequalityKind::LS, InequalityKind::BELL}) {
    CHECK(parse_kind(to_string(k)) == k);
  }
  CHECK_THROWS_AS(parse_kind("CHSH"), ValidationError);
}

TEST_CASE("L at the plateau") {
  const auto r = leggett_L(60.0, 0.25);
  CHECK(r.value == doctest::Approx(7.87).epsilon(0.02 / 7.87));
  CHECK(r.value > r.bound);
  CHECK(r.violation == doctest::Approx(r.value - r.bound).epsilon(1e-15));
  CHECK(r.settings.size() == 7);
}

TEST_CASE("L_S at the plateau") {
  const auto r = leggett_LS(60.0, 0.65);
  CHECK(std::abs(r.value - 1.898) < 0.01);
  CHECK(r.violation > 0.0);
  CHECK(r.settings.size() == 6);
}

TEST_CASE("no violation at phi = 0") {
  for (double a : {0.5, 3.0, 60.0}) {
    const auto l = leggett_L(a, 0.0);
    CHECK(l.bound == 8.0);
    CHECK(l.value <= 8.0 + 1e-12);
    CHECK(l.violation <= 1e-12);
    const auto s = leggett_LS(a, 0.0);
    CHECK(s.bound == 2.0);
    CHECK(s.value <= 2.0 + 1e-12);
    CHECK(s.violation <= 1e-12);
  }
}

TEST_CASE("values respect the algebraic maxima") {
  std::mt19937_64 rng(12);
  std::uniform_real_distribution<double> phi(0.0, kPi / 2), alpha(0.2, 80.0), eta(0.2, 1.0);
  for (int i = 0; i < 12; ++i) {
    const double a = alpha(rng), p = phi(rng), e = eta(rng);
    const auto l = leggett_L(a, p, e);
    const auto s = leggett_LS(a, p, e);
    CHECK(l.value <= 8.0 + 1e-12);
    CHECK(s.value <= 2.0 + 1e-12);
    CHECK(std::abs(l.violation - (l.value - l.bound)) <= 1e-12);
    CHECK(std::abs(s.violation - (s.value - s.bound)) <= 1e-12);
  }
}

TEST_CASE("violation grows with amplitude and saturates") {
  double prev = -INFINITY;
  for (double a = 2.0; a <= 10.0 + 1e-9; a += 0.25) {
    const double v = leggett_L(a, 0.25).violation;
    CHECK(v > prev);
    prev = v;
  }
  CHECK(std::abs(leggett_L(25.0, 0.25).value - leggett_L(60.0, 0.25).value) < 0.01);
}

TEST_CASE("plateau is approached as 1 / alpha^2") {
  const double far = leggett_L(120.0, 0.25).value;
  for (double a : {10.0, 20.0, 30.0}) {
    const double c = (far - leggett_L(a, 0.25).value) * a * a;
    CHECK(c > 5.5);
    CHECK(c < 6.5);
  }
  // hence L(20) sits 0.014 below L(60)
  const double gap = leggett_L(60.0, 0.25).value - leggett_L(20.0, 0.25).value;
  CHECK(gap > 0.012);
  CHECK(gap < 0.016);
}

TEST_CASE("CHSH with optimised settings violates at alpha = 1.5") {
  const auto r = bell_chsh(1.5, kBell15);
  CHECK(r.value > 2.4);
  CHECK(r.bound == 2.0);
  CHECK(r.violation == doctest::Approx(r.value - 2.0));

  // number-basis cross-check
  double c[4];
  for (int i = 0; i < 4; ++i) {
    c[i] = oracle::fock_pipeline(1.5, r.settings[i], Efficiency(1.0)).correlation();
  }
  CHECK(std::abs(std::abs(c[0] + c[1] + c[2] - c[3]) - r.value) < 1e-6);
}

TEST_CASE("CHSH approaches the quantum maximum at large amplitude") {
  const std::array<MeasurementSetting, 4> s{
      {{kPi / 2, 0.0}, {kPi / 2, kPi / 2}, {kPi / 2, kPi / 4}, {kPi / 2, -kPi / 4}}};
  const double b10 = bell_chsh(10.0, s).value;
  const double b60 = bell_chsh(60.0, s).value;
  CHECK(b10 > 2.7);
  CHECK(b60 > b10);
  CHECK(b60 == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(2e-3));
}

TEST_CASE("optimised CHSH in the overlap regime") {
  OptimizeOptions opt;
  opt.restarts = 2;
  const auto r = optimize_settings(InequalityKind::BELL, 0.1, 1.0, opt);
  CHECK(r.report.value <= 2.0);
  CHECK(r.evaluations > 0);
  CHECK(r.report.value == doctest::Approx(bell_chsh(0.1, r.best_bell).value).epsilon(1e-12));
  // same seed, same answer
  const auto again = optimize_settings(InequalityKind::BELL, 0.1, 1.0, opt);
  CHECK(again.report.value == r.report.value);
}

TEST_CASE("phi optimisation for L at alpha = 10") {
  const auto r = optimize_settings(InequalityKind::L, 10.0);
  CHECK(r.best_phi > 0.0);
  CHECK(r.best_phi <= kPi / 2);
  CHECK_FALSE(r.boundary_maximum);
  CHECK(r.best_phi == doctest::Approx(0.2507).epsilon(0.02));
  for (double d : {-0.01, 0.01}) {
    CHECK(leggett_L(10.0, r.best_phi + d).violation <= r.report.violation + 1e-12);
  }
}

TEST_CASE("evaluate dispatch") {
  CHECK(evaluate(InequalityKind::L, 5.0, 0.3, 1.0).value == leggett_L(5.0, 0.3).value);
  CHECK(evaluate(InequalityKind::LS, 5.0, 0.3, 0.8).value == leggett_LS(5.0, 0.3, 0.8).value);
  CHECK_THROWS_AS(evaluate(InequalityKind::BELL, 5.0, 0.3, 1.0), ValidationError);
  CHECK_THROWS_AS(leggett_L(-1.0, 0.3), ValidationError);
  CHECK_THROWS_AS(leggett_LS(1.0, 0.3, 0.0), ValidationError);
}
