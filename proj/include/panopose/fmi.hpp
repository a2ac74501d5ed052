#pragma once

#include "panopose/image.hpp"

namespace panopose {

/// Full spectral registration result for one window pair.
/// du/dv follow the content-motion convention: win_b(p) ~ win_a(p - (du,dv)),
/// i.e. positive du means content moved toward larger u from a to b.
struct RegistrationResult {
  double du = 0.0;
  double dv = 0.0;
  double rotation = 0.0;  // radians, content rotation from a to b
  double scale = 1.0;     // content magnification from a to b
  double response = 0.0;  // weaker of the two correlation peaks, in [0, 1]
};

struct PhaseShift {
  double du = 0.0;
  double dv = 0.0;
  double response = 0.0;
};

/// Translation-only phase correlation of two equal square power-of-two
/// windows (caller pads). Sub-pixel via 3-point parabolic refinement around
/// the integer peak of the normalized cross-power surface.
/// Throws "degenerate window" if either input has no intensity variation.
PhaseShift phase_correlate(const Image& win_a, const Image& win_b);

/// Fourier-Mellin registration: Hann apodization, magnitude spectra with
/// high-pass emphasis, log-polar phase correlation for rotation/scale, then
/// de-rotated translation correlation. The rotation pi-ambiguity is resolved
/// by the candidate with the stronger translation peak. A measured scale
/// outside [0.5, 2] zeroes the response instead of throwing.
RegistrationResult register_window(const Image& win_a, const Image& win_b);

}  // namespace panopose
