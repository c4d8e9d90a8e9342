#include <boost/math/tools/roots.hpp>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <string>
#include <vector>

#include "ecs/inequalities.hpp"
#include "ecs/oracle/regression.hpp"
#include "ecs/sweep.hpp"

using namespace ecs;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool ok;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome plateau() {
  const auto r = leggett_L(60.0, 0.25);
  const bool ok = std::abs(r.value - 7.87) <= 0.02 && r.value > 7.7506 && r.value > r.bound;
  return {ok, fmt("L(60, 0.25) = %.5f, bound %.5f", r.value, r.bound)};
}

Outcome optimal_angle() {
  const auto r60 = optimize_settings(InequalityKind::L, 60.0);
  const auto r10 = optimize_settings(InequalityKind::L, 10.0);
  const bool ok = std::abs(r60.best_phi - 0.2507) <= 0.005 &&
                  std::abs(r10.best_phi - r60.best_phi) <= 0.003 && !r60.boundary_maximum;
  return {ok, fmt("phi*(60) = %.5f, phi*(10) = %.5f", r60.best_phi, r10.best_phi)};
}

Outcome threshold() {
  const auto t = find_threshold(InequalityKind::L, 0.25, 1.0, 0.05);
  const bool ok = t.crossed && t.alpha_star >= 7.0 && t.alpha_star <= 8.0 && t.bracket_width <= 0.05;
  return {ok, fmt("alpha* = %.4f, bracket %.4f", t.alpha_star, t.bracket_width)};
}

Outcome optimal_inequality() {
  const auto r = leggett_LS(60.0, 0.65);
  const auto f = [](double phi) { return leggett_LS(60.0, phi).violation; };
  double edge = NAN;
  if (f(0.65) > 0.0 && f(kPi / 2) < 0.0) {
    const auto tol = [](double a, double b) { return std::abs(b - a) < 1e-5; };
    const auto [lo, hi] = boost::math::tools::bisect(f, 0.65, kPi / 2, tol);
    edge = 0.5 * (lo + hi);
  }
  const bool ok = std::abs(r.value - 1.898) <= 0.010 && std::abs(r.bound - 1.7872) <= 0.0005 &&
                  std::abs(edge - 1.28) <= 0.03;
  return {ok, fmt("L_S(60, 0.65) = %.5f, bound %.5f, region edge phi = %.4f", r.value, r.bound, edge)};
}

Outcome bell_window() {
  const auto b = optimize_settings(InequalityKind::BELL, 1.5);
  double worst = -INFINITY, worst_alpha = 0.0;
  for (double a = 0.05; a <= 6.0 + 1e-9; a += 0.05) {
    const double v = leggett_L(a, 0.25).violation;
    if (v > worst) {
      worst = v;
      worst_alpha = a;
    }
  }
  const double l15 = leggett_L(1.5, 0.25).violation;
  const bool ok = b.report.value > 2.0 && worst <= 0.0 && l15 <= 0.0;
  return {ok, fmt("B(1.5) = %.4f (%d evaluations), max violation of L on (0, 6] = %.4f at alpha %.2f",
                  b.report.value, b.evaluations, worst, worst_alpha)};
}

Outcome loss_robustness() {
  const double plateau = leggett_L(60.0, 0.25).value;
  const std::vector<double> etas{1.0, 0.8, 0.6, 0.4, 0.2};
  const std::vector<double> alphas{10, 20, 30, 40, 60, 80, 100, 150, 200};
  bool ok = true;
  double prev = 0.0;
  std::string detail;
  for (double eta : etas) {
    const auto t = find_threshold(InequalityKind::L, 0.25, eta, 0.05);
    ok = ok && t.crossed && t.alpha_star >= prev;
    prev = t.alpha_star;
    double reached = NAN;
    for (double a : alphas) {
      if (std::abs(leggett_L(a, 0.25, eta).value - plateau) <= 0.05) {
        reached = a;
        break;
      }
    }
    ok = ok && !std::isnan(reached);
    detail += fmt("eta %.1f: alpha* %.3f, plateau by alpha %.0f; ", eta, t.alpha_star, reached);
  }
  return {ok, detail};
}

Outcome oracle_suite() {
  const auto r = oracle::run_regression();
  const bool ok = r.cases.size() == 80 && r.max_fock_diff <= oracle::kFockAgreement &&
                  r.max_wigner_diff <= oracle::kWignerAgreement &&
                  r.max_closed_form_diff <= oracle::kClosedFormAgreement;
  return {ok, fmt("%zu cases; max |engine - fock| %.2e, |engine - wigner| %.2e, |engine - closed form| %.2e",
                  r.cases.size(), r.max_fock_diff, r.max_wigner_diff, r.max_closed_form_diff)};
}

Outcome invariants() {
  double norm = 0.0, tr = 0.0, conv = 0.0, sym = 0.0, bounds = 0.0;
  const std::vector<double> alphas{0.1, 0.5, 1.0, 2.0, 5.0, 10.0, 30.0, 60.0, 100.0};
  std::uint64_t state = 0x9e3779b97f4a7c15ULL;
  auto uniform = [&](double lo, double hi) {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return lo + (hi - lo) * static_cast<double>(state >> 11) * 0x1.0p-53;
  };
  for (double a : alphas) {
    for (int i = 0; i < 6; ++i) {
      const SettingPair p{{uniform(0, kPi), uniform(-kPi, kPi)}, {uniform(0, kPi), uniform(-kPi, kPi)}};
      const double eta = i % 2 ? uniform(0.1, 1.0) : 1.0;
      auto s = make_ecs({a});
      s = rotate(s, Mode::A, p.a, a);
      tr = std::max(tr, std::abs(trace(s).value() - 1.0));
      s = rotate(s, Mode::B, physical_setting(p.b, Mode::B, AzimuthConvention::MirroredBob), a);
      tr = std::max(tr, std::abs(trace(s).value() - 1.0));
      s = apply_loss(apply_loss(s, Mode::A, Efficiency(eta)), Mode::B, Efficiency(eta));
      tr = std::max(tr, std::abs(trace(s).value() - 1.0));
      s = prune(s);
      const auto base = sign_probabilities(s);
      norm = std::max(norm, std::abs(base.sum() - 1.0));
      for (double scale : {0.5, 1.0 / std::sqrt(2.0), 1.0}) {
        const auto q = sign_probabilities(s, {scale});
        conv = std::max({conv, std::abs(q.pp - base.pp), std::abs(q.pm - base.pm),
                         std::abs(q.mp - base.mp), std::abs(q.mm - base.mm)});
      }
      const double ab = lossy_correlation(a, p, Efficiency(eta));
      const double ba = lossy_correlation(a, {p.b, p.a}, Efficiency(eta));
      sym = std::max(sym, std::abs(ab - ba));
    }
  }
  for (double phi = -kPi; phi <= kPi; phi += 0.001) {
    const double s = 2.0 * std::abs(std::sin(phi / 2.0));
    bounds = std::max({bounds, std::abs(bound_L(phi) + s - 8.0), std::abs(bound_LS(phi) + s / 3.0 - 2.0)});
  }
  const double eps = 8.0 * std::numeric_limits<double>::epsilon();
  const bool ok = norm <= 1e-9 && tr <= 1e-10 && conv <= 1e-12 && sym <= 1e-10 && bounds <= eps;
  return {ok, fmt("normalisation %.1e, trace %.1e, convention %.1e, exchange %.1e, bounds %.1e", norm,
                  tr, conv, sym, bounds)};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "plateau value", 1.0, plateau},
      {2, "optimal angle", 30.0, optimal_angle},
      {3, "violation threshold", 30.0, threshold},
      {4, "optimal inequality", 30.0, optimal_inequality},
      {5, "Bell/Leggett window", 120.0, bell_window},
      {6, "loss robustness", 300.0, loss_robustness},
      {7, "oracle equivalence", 300.0, oracle_suite},
      {8, "invariant suite", 60.0, invariants},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs <= c.budget_s;
    const bool pass = o.ok && in_time;
    failed += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.2f s of %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
