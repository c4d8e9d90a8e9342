#pragma once

#include <array>
#include <vector>

#include "ecs/coherent_algebra.hpp"

namespace ecs {

struct MeasurementSetting {
  double theta = 0.0;
  double phi = 0.0;

  // theta in [0, pi], phi in (-pi, pi], same Bloch vector.
  MeasurementSetting canonical() const;
};

struct SettingPair {
  MeasurementSetting a;
  MeasurementSetting b;
};

// How a setting label maps onto the physical rotation parameters.
// MirroredBob realises Bob's (theta, phi) as R(theta, -phi), the complex
// conjugate of R(theta, phi) in the number basis. With it the large-amplitude
// correlation of the entangled state is the Bloch-vector dot product a.b.
// Literal applies R(theta, phi) on both sides.
enum class AzimuthConvention { MirroredBob, Literal };

MeasurementSetting physical_setting(const MeasurementSetting& s, Mode mode,
                                    AzimuthConvention conv);

CoherentDyadSum rotate(const CoherentDyadSum& state, Mode mode,
                       const MeasurementSetting& setting, double alpha);

struct KetTerm {
  LogAmp coeff;
  cplx label;
};
using KetSum = std::vector<KetTerm>;

KetSum displace_ket(const KetSum& ket, cplx mu);
KetSum kerr_split_ket(const KetSum& ket);
KetSum merge_ket(const KetSum& ket, double tol = kLabelMergeTol);
KetSum rotate_ket(const KetSum& ket, const MeasurementSetting& setting,
                  double alpha);

// The hand-derived four-term image of |branch * alpha> (branch = +1 or -1)
// under R(theta, phi). Equals rotate_ket up to a global factor i.
KetSum closed_form_image(int branch, const MeasurementSetting& setting,
                         double alpha);

LogAmp ket_inner(const KetSum& bra, const KetSum& ket);
double ket_fidelity(const KetSum& x, const KetSum& y);

struct IdealQubitMap {
  cplx m11, m12, m21, m22;
};

IdealQubitMap ideal_map(const MeasurementSetting& setting);

// Ket image of |branch * alpha> under the ideal 2x2 map.
KetSum ideal_image(int branch, const MeasurementSetting& setting, double alpha);

// Fidelity between R(theta, phi)|alpha> and the ideal image. The exact
// sequence realises the ideal map with phi reflected, so the comparison is made
// against ideal_map(theta, -phi) unless literal is set.
double rotation_fidelity(const MeasurementSetting& setting, double alpha,
                         bool literal = false);

}  // namespace ecs
