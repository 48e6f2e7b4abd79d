#ifndef RESLAB_ZETA_HPP
#define RESLAB_ZETA_HPP

#include "reslab/heat.hpp"
#include "reslab/laurent_germ.hpp"
#include "reslab/spectral.hpp"

namespace reslab {

// Laurent germ at z = 0 of TR(C Q^{-z}): pole = Res_{z=0} (which equals
// (1/q) res of the symbol), konst = the finite part tr^Q(C).
struct ZetaGerm {
  LaurentGerm germ;
  double err = 0.0;
};

// Meromorphic continuation of sum_n tr C_{nn} lambda(n)^{-z} through an
// exact head sum plus Hurwitz-zeta germs of the exact tail expansion.
ZetaGerm zeta_trace_germ(const EigenvalueLaw& law, const SpectralOperator& c);

// Finite part at z = 0 (the weighted trace tr^Q).
ValueErr weighted_trace(const EigenvalueLaw& law, const SpectralOperator& c);

}  // namespace reslab

#endif
