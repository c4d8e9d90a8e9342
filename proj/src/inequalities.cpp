#include "ecs/inequalities.hpp"

#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include <algorithm>
#include <boost/math/tools/minima.hpp>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

namespace ecs {
namespace {

constexpr double kPi = std::numbers::pi;

void check_inputs(double alpha, double eta) {
  if (!(alpha > 0.0) || !std::isfinite(alpha)) {
    throw ValidationError("alpha must be positive and finite");
  }
  Efficiency{eta};
}

double C(double alpha, const SettingPair& p, double eta, const PipelineOptions& opt) {
  return lossy_correlation(alpha, p, Efficiency{eta}, opt);
}

ViolationReport finish(InequalityKind kind, double value, double bound, double alpha,
                       double phi, double eta, std::vector<SettingPair> settings) {
  ViolationReport r;
  r.kind = kind;
  r.value = value;
  r.bound = bound;
  r.violation = value - bound;
  r.alpha = alpha;
  r.phi = phi;
  r.eta = eta;
  r.settings = std::move(settings);
  return r;
}

}  // namespace

std::string to_string(InequalityKind k) {
  switch (k) {
    case InequalityKind::L: return "L";
    case InequalityKind::LS: return "LS";
    case InequalityKind::BELL: return "BELL";
  }
  return "?";
}

InequalityKind parse_kind(const std::string& s) {
  if (s == "L") return InequalityKind::L;
  if (s == "LS") return InequalityKind::LS;
  if (s == "BELL") return InequalityKind::BELL;
  throw ValidationError("unknown inequality kind '" + s + "' (expected L, LS or BELL)");
}

SettingsCatalogL catalog_L(double phi) {
  SettingsCatalogL c;
  c.phi = phi;
  c.a = {{{kPi / 2, 0.0}, {kPi / 2, kPi / 2}, {0.0, 0.0}}};
  c.b = {{{kPi / 2, phi},
          {kPi / 2, kPi / 2 + phi},
          {kPi / 2 + phi, kPi / 2},
          {phi, kPi / 2},
          c.a[0],
          c.a[1],
          c.a[2]}};
  return c;
}

SettingsCatalogLS catalog_LS(double phi) {
  SettingsCatalogLS c;
  c.phi = phi;
  c.a = {{{kPi / 2, 0.0}, {kPi / 2, kPi / 2}, {0.0, 0.0}}};
  c.bplus = {{{kPi / 2, phi / 2}, {kPi / 2 - phi / 2, kPi / 2}, {phi / 2, 0.0}}};
  c.bminus = {{{kPi / 2, -phi / 2}, {kPi / 2 + phi / 2, kPi / 2}, {-phi / 2, 0.0}}};
  return c;
}

double bound_L(double phi) { return 8.0 - 2.0 * std::abs(std::sin(phi / 2.0)); }
double bound_LS(double phi) { return 2.0 - (2.0 / 3.0) * std::abs(std::sin(phi / 2.0)); }

ViolationReport leggett_L(double alpha, double phi, double eta, const PipelineOptions& opt) {
  check_inputs(alpha, eta);
  const SettingsCatalogL k = catalog_L(phi);
  const auto& a = k.a;
  const auto& b = k.b;
  // a2,b6 appears in both groups.
  const std::vector<SettingPair> pairs{{a[0], b[0]}, {a[1], b[1]}, {a[0], b[4]},
                                       {a[1], b[5]}, {a[1], b[2]}, {a[2], b[3]},
                                       {a[2], b[6]}};
  std::vector<double> c(pairs.size());
  for (std::size_t i = 0; i < pairs.size(); ++i) c[i] = C(alpha, pairs[i], eta, opt);
  const double value = std::abs(c[0] + c[1] + c[2] + c[3]) + std::abs(c[4] + c[5] + c[3] + c[6]);
  return finish(InequalityKind::L, value, bound_L(phi), alpha, phi, eta, pairs);
}

ViolationReport leggett_LS(double alpha, double phi, double eta, const PipelineOptions& opt) {
  check_inputs(alpha, eta);
  const SettingsCatalogLS k = catalog_LS(phi);
  std::vector<SettingPair> pairs;
  double value = 0.0;
  for (int i = 0; i < 3; ++i) {
    const SettingPair p{k.a[i], k.bplus[i]};
    const SettingPair m{k.a[i], k.bminus[i]};
    value += std::abs(C(alpha, p, eta, opt) + C(alpha, m, eta, opt));
    pairs.push_back(p);
    pairs.push_back(m);
  }
  return finish(InequalityKind::LS, value / 3.0, bound_LS(phi), alpha, phi, eta, pairs);
}

ViolationReport bell_chsh(double alpha, const std::array<MeasurementSetting, 4>& s, double eta,
                          const PipelineOptions& opt) {
  check_inputs(alpha, eta);
  const std::vector<SettingPair> pairs{{s[0], s[2]}, {s[0], s[3]}, {s[1], s[2]}, {s[1], s[3]}};
  const double value = std::abs(C(alpha, pairs[0], eta, opt) + C(alpha, pairs[1], eta, opt) +
                                C(alpha, pairs[2], eta, opt) - C(alpha, pairs[3], eta, opt));
  return finish(InequalityKind::BELL, value, kBellBound, alpha, 0.0, eta, pairs);
}

ViolationReport evaluate(InequalityKind kind, double alpha, double phi, double eta,
                         const PipelineOptions& opt) {
  switch (kind) {
    case InequalityKind::L: return leggett_L(alpha, phi, eta, opt);
    case InequalityKind::LS: return leggett_LS(alpha, phi, eta, opt);
    case InequalityKind::BELL: break;
  }
  throw ValidationError("BELL has no phi-parametrised catalog; use optimize_settings");
}

namespace {

struct BellObjective {
  double alpha, eta;
  const PipelineOptions* opt;
  int evaluations = 0;
};

std::array<MeasurementSetting, 4> unpack(const gsl_vector* x) {
  std::array<MeasurementSetting, 4> s;
  for (int i = 0; i < 4; ++i) {
    s[i] = MeasurementSetting{gsl_vector_get(x, 2 * i), gsl_vector_get(x, 2 * i + 1)}.canonical();
  }
  return s;
}

double bell_negative(const gsl_vector* x, void* params) {
  auto* o = static_cast<BellObjective*>(params);
  ++o->evaluations;
  return -bell_chsh(o->alpha, unpack(x), o->eta, *o->opt).value;
}

OptimizeResult optimize_bell(double alpha, double eta, const OptimizeOptions& opt) {
  BellObjective obj{alpha, eta, &opt.pipeline};
  gsl_multimin_function fn{&bell_negative, 8, &obj};
  std::mt19937_64 rng(opt.seed);
  std::uniform_real_distribution<double> theta(0.0, kPi);
  std::uniform_real_distribution<double> phi(-kPi, kPi);

  gsl_vector* x = gsl_vector_alloc(8);
  gsl_vector* step = gsl_vector_alloc(8);
  gsl_vector_set_all(step, 0.4);
  gsl_multimin_fminimizer* m = gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, 8);

  double best = -std::numeric_limits<double>::infinity();
  std::array<MeasurementSetting, 4> best_s{};
  for (int r = 0; r < std::max(1, opt.restarts); ++r) {
    for (int i = 0; i < 4; ++i) {
      gsl_vector_set(x, 2 * i, theta(rng));
      gsl_vector_set(x, 2 * i + 1, phi(rng));
    }
    gsl_multimin_fminimizer_set(m, &fn, x, step);
    for (int it = 0; it < 600; ++it) {
      if (gsl_multimin_fminimizer_iterate(m) != GSL_SUCCESS) break;
      if (gsl_multimin_test_size(gsl_multimin_fminimizer_size(m), 1e-5) == GSL_SUCCESS) break;
    }
    const double v = -gsl_multimin_fminimizer_minimum(m);
    if (v > best) {
      best = v;
      best_s = unpack(gsl_multimin_fminimizer_x(m));
    }
  }
  gsl_multimin_fminimizer_free(m);
  gsl_vector_free(step);
  gsl_vector_free(x);

  OptimizeResult out;
  out.best_bell = best_s;
  out.report = bell_chsh(alpha, best_s, eta, opt.pipeline);
  out.evaluations = obj.evaluations + 1;
  return out;
}

OptimizeResult optimize_phi(InequalityKind kind, double alpha, double eta,
                            const OptimizeOptions& opt) {
  if (!(opt.phi_step > 0.0) || !(opt.phi_tol > 0.0)) {
    throw ValidationError("phi step and tolerance must be positive");
  }
  int evals = 0;
  auto violation = [&](double phi) {
    ++evals;
    return evaluate(kind, alpha, phi, eta, opt.pipeline).violation;
  };
  const double hi = kPi / 2;
  const int n = static_cast<int>(std::floor(hi / opt.phi_step + 1e-9));
  std::vector<double> grid;
  for (int i = 1; i <= n; ++i) grid.push_back(i * opt.phi_step);
  if (grid.empty() || grid.back() < hi) grid.push_back(hi);

  std::size_t arg = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double v = violation(grid[i]);
    if (v > best) {
      best = v;
      arg = i;
    }
  }
  const double lo_b = arg == 0 ? grid[0] * 1e-3 : grid[arg - 1];
  const double hi_b = arg + 1 == grid.size() ? hi : grid[arg + 1];
  const int bits = static_cast<int>(std::ceil(-std::log2(opt.phi_tol / hi))) + 2;
  boost::uintmax_t max_iter = 200;
  auto [phi_star, neg] = boost::math::tools::brent_find_minima(
      [&](double p) { return -violation(p); }, lo_b, hi_b, bits, max_iter);

  OptimizeResult out;
  if (-neg >= best) {
    out.best_phi = phi_star;
  } else {
    out.best_phi = grid[arg];
  }
  out.boundary_maximum = arg == 0 || arg + 1 == grid.size();
  out.report = evaluate(kind, alpha, out.best_phi, eta, opt.pipeline);
  out.evaluations = evals + 1;
  return out;
}

}  // namespace

OptimizeResult optimize_settings(InequalityKind kind, double alpha, double eta,
                                 const OptimizeOptions& opt) {
  check_inputs(alpha, eta);
  if (kind == InequalityKind::BELL) return optimize_bell(alpha, eta, opt);
  return optimize_phi(kind, alpha, eta, opt);
}

}  // namespace ecs
