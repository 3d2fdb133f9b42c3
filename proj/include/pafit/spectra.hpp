#pragma once

#include "pafit/rotation.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pafit {

enum class LineShape { gaussian, lorentzian };

struct SpectrumConfig {
  double grid_start = 0.0; // cm^-1, detuning convention
  double grid_stop = 0.0;
  double grid_step = 2e-5;
  double line_fwhm = 1.6e-4; // resolution-limited width at ~450 uK
  LineShape line_shape = LineShape::gaussian;
  double noise_rms = 0.0;
  std::uint64_t seed = 0;

  void validate() const;
};

// One dip of the trap-loss spectrum.
struct SpectralLine {
  double delta_pa; // cm^-1
  double depth;    // [0, 1]
};

struct Spectrum {
  std::vector<double> delta_pa;
  std::vector<double> signal;
};

struct Peak {
  double delta_pa;
  double depth;
};

namespace spectra {

// Converts absolute-wavenumber components into dips of the given R'=0 depth,
// scaled by each component's band amplitude.
std::vector<SpectralLine> toSpectralLines(const std::vector<LineComponent> &c,
                                          double depth,
                                          double nu_res = 12578.862);

// Unit-peak profile with the configured FWHM, evaluated at offset x.
double profile(LineShape shape, double fwhm, double x);

// signal = clamp(1 - sum depth_i g(x - x_i), 0, 1) [+ Gaussian noise].
Spectrum synthesize(const std::vector<SpectralLine> &lines,
                    const SpectrumConfig &cfg);

// Local minima deeper than min_depth, refined by a parabola through the
// minimum and its neighbours.
std::vector<Peak> findPeaks(const Spectrum &s, double min_depth);

std::string spectrumCsv(const Spectrum &s);
std::string spectrumSvg(const Spectrum &s);

} // namespace spectra
} // namespace pafit
