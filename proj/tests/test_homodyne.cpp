#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include "ecs/homodyne.hpp"
#include "ecs/loss_channel.hpp"
#include "support/quadrature.hpp"

using namespace ecs;

namespace {

constexpr double kPi = std::numbers::pi;

CoherentDyadSum product_dyad(cplx a, cplx b) {
  CoherentDyadSum s;
  s.terms.push_back({LogAmp::one(), a, a, b, b});
  return s;
}

double max_diff(const SignProbabilities& x, const SignProbabilities& y) {
  return std::max({std::abs(x.pp - y.pp), std::abs(x.pm - y.pm), std::abs(x.mp - y.mp),
                   std::abs(x.mm - y.mm)});
}

SettingPair random_pair(std::mt19937_64& rng, double theta_max = kPi, double phi_min = -kPi,
                        double phi_max = kPi) {
  std::uniform_real_distribution<double> th(0.0, theta_max), ph(phi_min, phi_max);
  const double t1 = th(rng), p1 = ph(rng), t2 = th(rng), p2 = ph(rng);
  return {{t1, p1}, {t2, p2}};
}

}  // namespace

TEST_CASE("half-line integral of a unit Gaussian") {
  const LogAmp pos = half_line_integral(0.0, 0.0, HalfLine::Positive);
  const LogAmp neg = half_line_integral(0.0, 0.0, HalfLine::Negative);
  CHECK(pos.phase == 0.0);
  CHECK(std::abs(pos.value() - 0.5) <= 0.5 * std::numeric_limits<double>::epsilon());
  CHECK(std::abs((pos + neg).value() - 1.0) < 1e-15);
}

TEST_CASE("half-line integral matches adaptive quadrature") {
  const cplx b(3.0, 2.0);
  auto f = [&](double x, bool re) {
    const cplx v = std::exp(-x * x + b * x) / std::sqrt(kPi);
    return re ? v.real() : v.imag();
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 61>;
  const double re = GK::integrate([&](double x) { return f(x, true); }, 0.0, 40.0, 15, 1e-14);
  const double im = GK::integrate([&](double x) { return f(x, false); }, 0.0, 40.0, 15, 1e-14);
  const cplx ref(re, im);
  const cplx got = half_line_integral(b, 0.0, HalfLine::Positive).value();
  CHECK(std::abs(got - ref) / std::abs(ref) < 1e-10);

  for (cplx bb : {cplx(-2.5, 1.0), cplx(0.3, -4.0), cplx(-0.1, 0.0)}) {
    const double r2 = GK::integrate([&](double x) { return (std::exp(-x * x + bb * x) / std::sqrt(kPi)).real(); }, -40.0, 0.0, 15, 1e-14);
    CHECK(std::abs(half_line_integral(bb, 0.0, HalfLine::Negative).value().real() - r2) < 1e-10 * std::max(1.0, std::abs(r2)));
  }
}

TEST_CASE("half-line integral stays representable for large |b|") {
  for (cplx b : {cplx(400.0, 0.0), cplx(-400.0, 3.0), cplx(0.0, 400.0), cplx(283.0, -283.0)}) {
    for (HalfLine side : {HalfLine::Positive, HalfLine::Negative}) {
      const LogAmp v = half_line_integral(b, cplx(-1e4, 0.0), side);
      CHECK(v.finite());
    }
  }
  // large real b puts all weight on one side: log integral -> b^2 / 4
  const LogAmp big = half_line_integral(400.0, 0.0, HalfLine::Positive);
  CHECK(big.log_mag == doctest::Approx(40000.0).epsilon(1e-14));
  CHECK_THROWS_AS(half_line_integral(cplx(NAN, 0.0), 0.0, HalfLine::Positive), ValidationError);
  CHECK_THROWS_AS(half_line_integral(0.0, cplx(INFINITY, 0.0), HalfLine::Negative), ValidationError);
}

TEST_CASE("vacuum gives a uniform quarter in each bin") {
  const auto p = sign_probabilities(product_dyad(0.0, 0.0));
  for (double v : {p.pp, p.pm, p.mp, p.mm}) CHECK(v == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(std::abs(p.correlation()) < 1e-15);
}

TEST_CASE("single coherent dyad at beta = 1") {
  // mean sqrt(2), variance 1/2 per mode
  const double q = 0.5 * std::erfc(-2.0 / std::sqrt(2.0));
  const auto p = sign_probabilities(product_dyad(1.0, 1.0));
  CHECK(std::abs(p.pp - q * q) < 1e-12);
  CHECK(std::abs(p.mm - (1 - q) * (1 - q)) < 1e-12);
  const auto s = product_dyad(1.0, 1.0);
  const auto ref = testing::quadrant_integrals([&](double x, double y) { return testing::dyad_density(s, x, y); }, 10.0);
  CHECK(max_diff(p, ref) < 1e-10);
}

TEST_CASE("unrotated entangled state is sign correlated at alpha = 2") {
  const auto s = make_ecs({2.0});
  const auto p = sign_probabilities(s);
  CHECK(p.pp + p.mm >= 0.99);
  CHECK(p.correlation() >= 0.98);
  const auto ref = testing::quadrant_integrals([&](double x, double y) { return testing::dyad_density(s, x, y); }, 11.0);
  CHECK(max_diff(p, ref) < 1e-10);
}

TEST_CASE("sign probabilities are quadrature-scale invariant") {
  std::mt19937_64 rng(21);
  for (double a : {0.5, 2.0, 60.0}) {
    const auto s = measured_state(a, random_pair(rng), Efficiency(1.0));
    const auto ref = sign_probabilities(s, {kDefaultQuadratureScale});
    for (double scale : {0.5, 1.0 / std::sqrt(2.0), 1.0}) {
      CHECK(max_diff(sign_probabilities(s, {scale}), ref) < 1e-12);
    }
  }
}

TEST_CASE("correlation is symmetric under exchange of the parties") {
  std::mt19937_64 rng(33);
  for (double a : {0.6, 1.5, 7.0, 60.0}) {
    for (int i = 0; i < 5; ++i) {
      const auto pr = random_pair(rng);
      const double ab = lossy_correlation(a, pr, Efficiency(1.0));
      const double ba = lossy_correlation(a, {pr.b, pr.a}, Efficiency(1.0));
      CHECK(std::abs(ab - ba) < 1e-10);
    }
  }
}

TEST_CASE("normalisation over alpha in [0.1, 100]") {
  std::mt19937_64 rng(44);
  for (double a : {0.1, 0.3, 1.0, 2.5, 7.5, 20.0, 60.0, 100.0}) {
    for (int i = 0; i < 4; ++i) {
      const auto p = lossy_probabilities(a, random_pair(rng), Efficiency(1.0));
      CHECK(std::abs(p.sum() - 1.0) < 1e-9);
      for (double v : {p.pp, p.pm, p.mp, p.mm}) {
        CHECK(v >= -1e-12);
        CHECK(v <= 1.0 + 1e-12);
      }
      CHECK(std::abs(p.correlation()) <= 1.0 + 1e-9);
    }
  }
}

TEST_CASE("engine agrees with brute-force two-dimensional quadrature") {
  std::mt19937_64 rng(55);
  for (double a : {0.8, 1.5, 2.0}) {
    for (int i = 0; i < 7; ++i) {
      const auto pr = random_pair(rng);
      const auto engine = lossy_probabilities(a, pr, Efficiency(1.0));
      const auto brute = testing::brute_force_probabilities(a, pr, AzimuthConvention::MirroredBob);
      CHECK(max_diff(engine, brute) < 1e-6);
      CHECK(std::abs(engine.correlation() - brute.correlation()) < 1e-6);
    }
  }
}

TEST_CASE("serial and parallel evaluation are bitwise identical") {
  std::mt19937_64 rng(66);
  for (double a : {1.0, 60.0}) {
    const auto s = measured_state(a, random_pair(rng), Efficiency(0.7));
    const auto x = sign_probabilities(s, {}, ExecutionPolicy::Serial);
    const auto y = sign_probabilities(s, {}, ExecutionPolicy::Parallel);
    CHECK(x.pp == y.pp);
    CHECK(x.pm == y.pm);
    CHECK(x.mp == y.mp);
    CHECK(x.mm == y.mm);
  }
}

TEST_CASE("closed form agrees with the engine") {
  const double a3 = correlation_closed_form(3.0, {{0.0, 0.0}, {0.0, 0.0}});
  CHECK(std::abs(a3 - lossy_correlation(3.0, {{0.0, 0.0}, {0.0, 0.0}}, Efficiency(1.0))) < 1e-6);
  std::mt19937_64 rng(77);
  for (double a : {2.0, 5.0, 10.0}) {
    for (int i = 0; i < 8; ++i) {
      const auto pr = random_pair(rng, kPi / 2, 0.0, kPi / 2);
      CHECK(std::abs(correlation_closed_form(a, pr) - lossy_correlation(a, pr, Efficiency(1.0))) < 1e-6);
    }
  }
}

TEST_CASE("closed form is finite at alpha = 60") {
  const double c = correlation_closed_form(60.0, {{kPi / 2, 0.0}, {kPi / 2, 0.25}});
  CHECK(std::isfinite(c));
  CHECK(std::abs(c - lossy_correlation(60.0, {{kPi / 2, 0.0}, {kPi / 2, 0.25}}, Efficiency(1.0))) < 1e-6);
  CHECK(c == doctest::Approx(std::cos(0.25)).epsilon(1e-3));
}

TEST_CASE("non-normalised input is rejected") {
  auto s = make_ecs({1.0});
  s.log_scale += 0.1;
  CHECK_THROWS_AS(sign_probabilities(s), ValidationError);
  CHECK_THROWS_AS(correlation(s), ValidationError);
  CHECK(std::abs(correlation(product_dyad(0.0, 0.0))) < 1e-15);
}
