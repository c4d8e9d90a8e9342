#pragma once

#include "ecs/log_amp.hpp"

namespace ecs {

// Faddeeva function w(z) = exp(-z^2) erfc(-iz).
cplx faddeeva_w(cplx z);

// erf for complex argument, via w.
cplx erf_complex(cplx z);

// erfi(x) = -i erf(ix) for real x.
double erfi(double x);

// log(erfi(x)) for x > 0, safe for large x.
double log_erfi(double x);

}  // namespace ecs
