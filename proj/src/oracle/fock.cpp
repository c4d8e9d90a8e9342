#include "ecs/oracle/fock.hpp"

#include <boost/math/quadrature/gauss.hpp>
#include <cmath>
#include <numbers>
#include <unsupported/Eigen/MatrixFunctions>

namespace ecs::oracle {
namespace {

constexpr int kPadding = 40;

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > kMaxFockAlpha) {
    throw ValidationError("number-basis oracle requires 0 < alpha <= 3");
  }
}

cplx label_amp(const FockVector& bra, const Eigen::MatrixXd& op, const FockVector& ket) {
  return bra.amps.dot(op.cast<cplx>() * ket.amps);
}

}  // namespace

int default_nmax(double alpha) {
  const double r = std::numbers::sqrt2 * alpha + 6.0;
  return static_cast<int>(std::ceil(r * r));
}

double FockVector::tail_mass(int band) const {
  const int n = static_cast<int>(amps.size());
  const int from = std::max(0, n - band);
  return amps.tail(n - from).squaredNorm();
}

FockSpace::FockSpace(int nmax) : nmax_(nmax) {
  if (nmax < 1) throw ValidationError("nmax must be at least 1");
  const int d = dim();
  pos_ = Eigen::MatrixXd::Zero(d, d);
  // Hermite functions are negligible beyond the outermost turning point + 10.
  const double top = std::sqrt(2.0 * nmax + 1.0) + 10.0;
  const int panels = static_cast<int>(std::ceil(top / 0.25));
  const double h = top / panels;
  using Rule = boost::math::quadrature::gauss<double, 20>;
  for (int p = 0; p < panels; ++p) {
    const double mid = (p + 0.5) * h;
    auto add = [&](double t, double w) {
      const double x = mid + 0.5 * h * t;
      const Eigen::VectorXd f = hermite_functions(x);
      pos_.noalias() += (0.5 * h * w) * f * f.transpose();
    };
    const auto& xs = Rule::abscissa();
    const auto& ws = Rule::weights();
    for (std::size_t i = 0; i < xs.size(); ++i) {
      add(xs[i], ws[i]);
      if (xs[i] != 0.0) add(-xs[i], ws[i]);
    }
  }
  neg_ = pos_;
  for (int n = 0; n < d; ++n)
    for (int m = 0; m < d; ++m)
      if ((n + m) % 2) neg_(n, m) = -neg_(n, m);
}

Eigen::VectorXd FockSpace::hermite_functions(double x) const {
  Eigen::VectorXd f(dim());
  f(0) = std::pow(std::numbers::pi, -0.25) * std::exp(-0.5 * x * x);
  if (dim() > 1) f(1) = std::numbers::sqrt2 * x * f(0);
  for (int n = 1; n + 1 < dim(); ++n) {
    f(n + 1) = std::sqrt(2.0 / (n + 1)) * x * f(n) - std::sqrt(double(n) / (n + 1)) * f(n - 1);
  }
  return f;
}

const Eigen::MatrixXd& FockSpace::half_line(HalfLine side) const {
  return side == HalfLine::Positive ? pos_ : neg_;
}

FockVector FockSpace::coherent(cplx beta) const {
  FockVector v{Eigen::VectorXcd(dim())};
  v.amps(0) = std::exp(-0.5 * std::norm(beta));
  for (int n = 1; n < dim(); ++n) v.amps(n) = v.amps(n - 1) * beta / std::sqrt(double(n));
  return v;
}

Eigen::MatrixXcd FockSpace::displacement(cplx mu) const {
  const int d = dim() + kPadding;
  Eigen::MatrixXcd g = Eigen::MatrixXcd::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) {
    const double s = std::sqrt(double(n + 1));
    g(n + 1, n) = mu * s;              // mu a^dagger
    g(n, n + 1) = -std::conj(mu) * s;  // -mu* a
  }
  const Eigen::MatrixXcd e = g.exp();
  return e.topLeftCorner(dim(), dim());
}

Eigen::VectorXcd FockSpace::kerr_phases() const {
  Eigen::VectorXcd k(dim());
  for (int n = 0; n < dim(); ++n) {
    // exp(-i pi n^2 / 2) depends only on n mod 4
    const int r = (n % 4) * (n % 4) % 4;
    k(n) = std::polar(1.0, -std::numbers::pi * r / 2.0);
  }
  return k;
}

Eigen::MatrixXcd FockSpace::rotation(const MeasurementSetting& setting, double alpha) const {
  const MeasurementSetting s = setting.canonical();
  const cplx i(0.0, 1.0);
  const Eigen::MatrixXcd u = kerr_phases().asDiagonal();
  return displacement(-i * s.phi / (4.0 * alpha)) * u *
         displacement(i * s.theta / (4.0 * alpha)) * u *
         displacement(i * s.phi / (4.0 * alpha));
}

Eigen::MatrixXd FockSpace::loss_effect(const Eigen::MatrixXd& effect, double eta) const {
  Efficiency{eta};
  if (eta == 1.0) return effect;
  const int d = dim();
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  std::vector<double> lg(d + 1);
  for (int n = 0; n <= d; ++n) lg[n] = std::lgamma(n + 1.0);
  for (int k = 0; k < d; ++k) {
    Eigen::MatrixXd K = Eigen::MatrixXd::Zero(d, d);
    for (int n = k; n < d; ++n) {
      const double lc = lg[n] - lg[k] - lg[n - k];
      K(n - k, n) = std::exp(0.5 * lc + 0.5 * (n - k) * std::log(eta) +
                             (k == 0 ? 0.0 : 0.5 * k * std::log1p(-eta)));
    }
    out.noalias() += K.transpose() * effect * K;
  }
  return out;
}

Eigen::MatrixXcd fock_state(double alpha, const SettingPair& settings, const FockSpace& space,
                            AzimuthConvention conv) {
  check_alpha(alpha);
  const double norm = 1.0 / std::sqrt(2.0 * (1.0 + std::exp(-4.0 * alpha * alpha)));
  const FockVector p = space.coherent(alpha);
  const FockVector m = space.coherent(-alpha);
  Eigen::MatrixXcd psi = norm * (p.amps * p.amps.transpose() + m.amps * m.amps.transpose());
  const Eigen::MatrixXcd ra =
      space.rotation(physical_setting(settings.a, Mode::A, conv), alpha);
  const Eigen::MatrixXcd rb =
      space.rotation(physical_setting(settings.b, Mode::B, conv), alpha);
  psi = ra * psi * rb.transpose();
  const int d = space.dim();
  const int band = std::min(5, d);
  const double tail = psi.bottomRows(band).squaredNorm() + psi.rightCols(band).squaredNorm();
  if (tail > kTailBudget) {
    throw NumericalError("number-basis truncation tail mass " + std::to_string(tail) +
                         " exceeds budget");
  }
  return psi;
}

SignProbabilities fock_pipeline(double alpha, const SettingPair& settings, const Efficiency& eff,
                                const FockOptions& opt) {
  check_alpha(alpha);
  const int nmax = opt.nmax > 0 ? opt.nmax : default_nmax(alpha);
  if (nmax < default_nmax(alpha)) throw ValidationError("nmax below truncation budget");
  const FockSpace space(nmax);
  const Eigen::MatrixXcd psi = fock_state(alpha, settings, space, opt.convention);
  const Eigen::MatrixXcd ep = space.loss_effect(space.half_line(HalfLine::Positive), eff.eta())
                                  .cast<cplx>();
  const Eigen::MatrixXcd en = space.loss_effect(space.half_line(HalfLine::Negative), eff.eta())
                                  .cast<cplx>();
  auto P = [&](const Eigen::MatrixXcd& ea, const Eigen::MatrixXcd& eb) {
    return (psi.adjoint() * ea * psi * eb.transpose()).trace().real();
  };
  return {P(ep, ep), P(ep, en), P(en, ep), P(en, en)};
}

cplx fock_chi(double alpha, const SettingPair& settings, cplx mu_a, cplx mu_b,
              const FockOptions& opt) {
  check_alpha(alpha);
  const FockSpace space(opt.nmax > 0 ? opt.nmax : default_nmax(alpha));
  const Eigen::MatrixXcd psi = fock_state(alpha, settings, space, opt.convention);
  const Eigen::MatrixXcd da = space.displacement(mu_a);
  const Eigen::MatrixXcd db = space.displacement(mu_b);
  return (psi.adjoint() * da * psi * db.transpose()).trace();
}

LogAmp dyad_trace_fock(const CoherentDyadSum& state, const FockSpace& space) {
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(space.dim(), space.dim());
  cplx s = 0.0;
  for (const auto& t : state.terms) {
    s += t.coeff.value() *
         label_amp(space.coherent(t.bra_a), id, space.coherent(t.ket_a)) *
         label_amp(space.coherent(t.bra_b), id, space.coherent(t.ket_b));
  }
  return LogAmp::from_complex(s) * LogAmp::from_log(state.log_scale, 0.0);
}

double dyad_quadrature_mean_fock(const CoherentDyadSum& state, Mode mode,
                                 const FockSpace& space) {
  const int d = space.dim();
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(d, d);
  for (int n = 0; n + 1 < d; ++n) x(n, n + 1) = x(n + 1, n) = std::sqrt((n + 1) / 2.0);
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(d, d);
  const Mode other = mode == Mode::A ? Mode::B : Mode::A;
  cplx num = 0.0, den = 0.0;
  for (const auto& t : state.terms) {
    const FockVector k = space.coherent(t.ket(mode));
    const FockVector b = space.coherent(t.bra(mode));
    const cplx o = label_amp(space.coherent(t.bra(other)), id, space.coherent(t.ket(other)));
    num += t.coeff.value() * o * label_amp(b, x, k);
    den += t.coeff.value() * o * label_amp(b, id, k);
  }
  return (num / den).real();
}

SignProbabilities dyad_sign_probabilities_fock(const CoherentDyadSum& state,
                                               const FockSpace& space) {
  const auto& P = space.half_line(HalfLine::Positive);
  const auto& N = space.half_line(HalfLine::Negative);
  cplx pp = 0.0, pm = 0.0, mp = 0.0, mm = 0.0;
  for (const auto& t : state.terms) {
    const FockVector ka = space.coherent(t.ket_a), ba = space.coherent(t.bra_a);
    const FockVector kb = space.coherent(t.ket_b), bb = space.coherent(t.bra_b);
    const cplx c = t.coeff.scaled(state.log_scale);
    const cplx ap = label_amp(ba, P, ka), an = label_amp(ba, N, ka);
    const cplx bp = label_amp(bb, P, kb), bn = label_amp(bb, N, kb);
    pp += c * ap * bp;
    pm += c * ap * bn;
    mp += c * an * bp;
    mm += c * an * bn;
  }
  return {pp.real(), pm.real(), mp.real(), mm.real()};
}

double quadrature_pdf(const FockVector& v, const FockSpace& space, double x) {
  return std::norm(space.hermite_functions(x).cast<cplx>().dot(v.amps));
}

}  // namespace ecs::oracle
