#include "ecs/oracle/wigner.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <numbers>

namespace ecs::oracle {
namespace {

constexpr double kPi = std::numbers::pi;
// Characteristic-function samples with exponent below this are set to zero.
constexpr double kChiCutoff = -60.0;
constexpr double kEdgeTolerance = 1e-8;

struct ProductTerm {
  cplx c;
  cplx a, b;
};

void check(double alpha, const WignerGridSpec& spec) {
  if (!(alpha > 0.0) || alpha > kMaxWignerAlpha) {
    throw ValidationError("Wigner oracle requires 0 < alpha <= 2");
  }
  if (spec.points < 8 || spec.points % 4 != 0) {
    throw ValidationError("Wigner grid points must be a multiple of 4");
  }
}

double extent_for(double alpha, const WignerGridSpec& spec) {
  return spec.extent > 0.0 ? spec.extent : std::numbers::sqrt2 * alpha + 6.0;
}

std::vector<ProductTerm> product_terms(double alpha, const SettingPair& settings,
                                       AzimuthConvention conv) {
  const MeasurementSetting sa = physical_setting(settings.a.canonical(), Mode::A, conv);
  const MeasurementSetting sb = physical_setting(settings.b.canonical(), Mode::B, conv);
  const double norm = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-4.0 * alpha * alpha)));
  std::vector<ProductTerm> out;
  for (int branch : {+1, -1}) {
    const KetSum ia = closed_form_image(branch, sa, alpha);
    const KetSum ib = closed_form_image(branch, sb, alpha);
    for (const auto& x : ia)
      for (const auto& y : ib) out.push_back({norm * x.coeff.value() * y.coeff.value(), x.label, y.label});
  }
  return out;
}

// <tau| D(mu) |sigma> in log form
LogAmp displaced_element(cplx sigma, cplx tau, cplx mu) {
  return LogAmp::from_log(0.0, std::imag(mu * std::conj(sigma))) * overlap(sigma + mu, tau);
}

class Fft2 {
 public:
  explicit Fft2(int n) : n_(n) {
    buf_ = fftw_alloc_complex(static_cast<std::size_t>(n) * n);
    plan_ = fftw_plan_dft_2d(n, n, buf_, buf_, FFTW_FORWARD, FFTW_ESTIMATE);
  }
  ~Fft2() {
    fftw_destroy_plan(plan_);
    fftw_free(buf_);
  }
  Fft2(const Fft2&) = delete;
  Fft2& operator=(const Fft2&) = delete;

  cplx* data() { return reinterpret_cast<cplx*>(buf_); }
  void run() { fftw_execute(plan_); }

 private:
  int n_;
  fftw_complex* buf_;
  fftw_plan plan_;
};

std::vector<cplx> dyad_wigner_with(Fft2& fft, cplx ket, cplx bra, int n, double extent) {
  const double du = 2.0 * extent / n;
  const double dk = 2.0 * kPi / (n * du);
  cplx* x = fft.data();
  for (int j = 0; j < n; ++j) {
    const double ku = (j - n / 2) * dk;
    for (int l = 0; l < n; ++l) {
      const double kv = (l - n / 2) * dk;
      // exp(i(ku x + kv p)) = D(mu) with mu = (-kv + i ku)/sqrt(2)
      const cplx mu = cplx(-kv, ku) / std::numbers::sqrt2;
      cplx v = 0.0;
      if (-0.5 * std::norm(ket + mu - bra) > kChiCutoff) {
        v = displaced_element(ket, bra, mu).value();
        if ((j + l) % 2) v = -v;
      }
      x[static_cast<std::size_t>(j) * n + l] = v;
    }
  }
  fft.run();
  const double scale = dk * dk / (4.0 * kPi * kPi);
  std::vector<cplx> w(static_cast<std::size_t>(n) * n);
  for (int m = 0; m < n; ++m) {
    for (int q = 0; q < n; ++q) {
      cplx v = x[static_cast<std::size_t>(m) * n + q] * scale;
      if ((m + q) % 2) v = -v;
      w[static_cast<std::size_t>(m) * n + q] = v;
    }
  }
  return w;
}

// x-marginal of the dyad, after the loss channel.
std::vector<cplx> dyad_marginal(Fft2& fft, cplx ket, cplx bra, int n, double extent, double eta) {
  const std::vector<cplx> w = dyad_wigner_with(fft, ket, bra, n, extent);
  const double du = 2.0 * extent / n;
  std::vector<cplx> m(n, 0.0);
  for (int i = 0; i < n; ++i) {
    cplx s = 0.0;
    for (int q = 0; q < n; ++q) s += w[static_cast<std::size_t>(i) * n + q];
    m[i] = s * du;
  }
  if (eta >= 1.0) return m;
  // x_out = sqrt(eta) x + sqrt(1 - eta) x_vac, with x_vac of variance 1/2.
  const double r = std::sqrt(eta);
  const double var = 1.0 - eta;
  const double g0 = 1.0 / std::sqrt(kPi * var);
  std::vector<cplx> out(n, 0.0);
  for (int i = 0; i < n; ++i) {
    const double u = (i - n / 2) * du;
    cplx s = 0.0;
    for (int k = 0; k < n; ++k) {
      const double d = u - r * (k - n / 2) * du;
      s += m[k] * (g0 * std::exp(-d * d / var));
    }
    out[i] = s * du;
  }
  return out;
}

struct Bins {
  cplx pos, neg;
};

Bins sign_bins(const std::vector<cplx>& f, double du) {
  const int n = static_cast<int>(f.size());
  if (std::abs(f.front()) > kEdgeTolerance || std::abs(f.back()) > kEdgeTolerance) {
    throw NumericalError("Wigner grid extent too small: marginal does not vanish at the edge");
  }
  const int z = n / 2;
  cplx pos = 0.5 * f[z], neg = 0.5 * f[z];
  for (int i = z + 1; i < n; ++i) pos += f[i];
  for (int i = 0; i < z; ++i) neg += f[i];
  const cplx slope = (f[z + 1] - f[z - 1]) / (2.0 * du);
  const cplx corr = du * du / 12.0 * slope;
  return {pos * du + corr, neg * du - corr};
}

using Key = std::pair<std::pair<double, double>, std::pair<double, double>>;
Key key(cplx k, cplx b) { return {{k.real(), k.imag()}, {b.real(), b.imag()}}; }

}  // namespace

double WignerGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * step * step;
}

std::vector<cplx> dyad_wigner(cplx ket, cplx bra, int points, double extent) {
  if (points < 8 || points % 4 != 0) throw ValidationError("grid points must be a multiple of 4");
  Fft2 fft(points);
  return dyad_wigner_with(fft, ket, bra, points, extent);
}

cplx weyl_chi(double alpha, const SettingPair& settings, cplx mu_a, cplx mu_b,
              AzimuthConvention conv) {
  check(alpha, {});
  const auto terms = product_terms(alpha, settings, conv);
  cplx s = 0.0;
  for (const auto& j : terms) {
    for (const auto& k : terms) {
      s += j.c * std::conj(k.c) *
           (displaced_element(j.a, k.a, mu_a) * displaced_element(j.b, k.b, mu_b)).value();
    }
  }
  return s;
}

SignProbabilities wigner_marginal(double alpha, const SettingPair& settings, const Efficiency& eff,
                                  const WignerGridSpec& spec, AzimuthConvention conv) {
  check(alpha, spec);
  const int n = spec.points;
  const double extent = extent_for(alpha, spec);
  const double du = 2.0 * extent / n;
  const auto terms = product_terms(alpha, settings, conv);
  Fft2 fft(n);
  std::map<Key, Bins> cache;
  auto bins = [&](cplx ket, cplx bra) {
    auto [it, fresh] = cache.try_emplace(key(ket, bra));
    if (fresh) it->second = sign_bins(dyad_marginal(fft, ket, bra, n, extent, eff.eta()), du);
    return it->second;
  };
  cplx pp = 0.0, pm = 0.0, mp = 0.0, mm = 0.0;
  for (const auto& j : terms) {
    for (const auto& k : terms) {
      const cplx c = j.c * std::conj(k.c);
      const Bins a = bins(j.a, k.a);
      const Bins b = bins(j.b, k.b);
      pp += c * a.pos * b.pos;
      pm += c * a.pos * b.neg;
      mp += c * a.neg * b.pos;
      mm += c * a.neg * b.neg;
    }
  }
  SignProbabilities out{pp.real(), pm.real(), mp.real(), mm.real()};
  if (std::abs(out.sum() - 1.0) > kWignerNormTolerance) {
    throw NumericalError("Wigner marginal normalization drifted by " +
                         std::to_string(out.sum() - 1.0) + "; refine the grid");
  }
  return out;
}

WignerGrid joint_marginal_grid(double alpha, const SettingPair& settings, const Efficiency& eff,
                               const WignerGridSpec& spec, AzimuthConvention conv) {
  check(alpha, spec);
  const int n = spec.points;
  const double extent = extent_for(alpha, spec);
  const auto terms = product_terms(alpha, settings, conv);
  Fft2 fft(n);
  std::map<Key, std::vector<cplx>> cache;
  auto marginal = [&](cplx ket, cplx bra) -> const std::vector<cplx>& {
    auto [it, fresh] = cache.try_emplace(key(ket, bra));
    if (fresh) it->second = dyad_marginal(fft, ket, bra, n, extent, eff.eta());
    return it->second;
  };
  std::vector<cplx> acc(static_cast<std::size_t>(n) * n, 0.0);
  for (const auto& j : terms) {
    for (const auto& k : terms) {
      const cplx c = j.c * std::conj(k.c);
      const auto& ma = marginal(j.a, k.a);
      const auto& mb = marginal(j.b, k.b);
      for (int x = 0; x < n; ++x) {
        const cplx cx = c * ma[x];
        cplx* row = &acc[static_cast<std::size_t>(x) * n];
        for (int y = 0; y < n; ++y) row[y] += cx * mb[y];
      }
    }
  }
  WignerGrid g;
  g.points = n;
  g.extent = extent;
  g.step = 2.0 * extent / n;
  g.values.resize(acc.size());
  for (std::size_t i = 0; i < acc.size(); ++i) g.values[i] = acc[i].real();
  if (std::abs(g.integral() - 1.0) > kWignerNormTolerance) {
    throw NumericalError("joint marginal normalization drifted beyond tolerance");
  }
  return g;
}

}  // namespace ecs::oracle
