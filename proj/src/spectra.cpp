#include "pafit/spectra.hpp"
#include "pafit/dataio.hpp"
#include "pafit/errors.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

namespace pafit {

void SpectrumConfig::validate() const {
  if (!(grid_start < grid_stop))
    throw DomainError("SpectrumConfig: grid_start must be below grid_stop");
  if (!(line_fwhm > 0.0))
    throw DomainError("SpectrumConfig: line_fwhm must be positive");
  if (!(grid_step > 0.0) || !(grid_step < line_fwhm / 4.0))
    throw DomainError("SpectrumConfig: grid_step must be positive and below "
                      "line_fwhm / 4");
  if (!(noise_rms >= 0.0))
    throw DomainError("SpectrumConfig: noise_rms must be non-negative");
}

namespace spectra {

std::vector<SpectralLine> toSpectralLines(const std::vector<LineComponent> &c,
                                          double depth, double nu_res) {
  std::vector<SpectralLine> out;
  out.reserve(c.size());
  for (const auto &comp : c)
    out.push_back({comp.wavenumber - nu_res, depth * comp.rel_amplitude});
  return out;
}

double profile(LineShape shape, double fwhm, double x) {
  const double u = x / fwhm;
  switch (shape) {
  case LineShape::gaussian:
    return std::exp(-4.0 * std::numbers::ln2 * u * u);
  case LineShape::lorentzian:
    return 1.0 / (1.0 + 4.0 * u * u);
  }
  return 0.0;
}

Spectrum synthesize(const std::vector<SpectralLine> &lines,
                    const SpectrumConfig &cfg) {
  cfg.validate();
  for (const auto &l : lines)
    if (!(l.depth >= 0.0 && l.depth <= 1.0))
      throw DomainError("synthesize: line depths must lie in [0, 1]");

  const auto n = static_cast<std::size_t>(
      std::floor((cfg.grid_stop - cfg.grid_start) / cfg.grid_step + 1e-9)) + 1;
  Spectrum s;
  s.delta_pa.resize(n);
  s.signal.resize(n);

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> noise(0.0, cfg.noise_rms);
  for (std::size_t i = 0; i < n; ++i) {
    const double x = cfg.grid_start + static_cast<double>(i) * cfg.grid_step;
    double loss = 0.0;
    for (const auto &l : lines)
      loss += l.depth * profile(cfg.line_shape, cfg.line_fwhm, x - l.delta_pa);
    double y = std::clamp(1.0 - loss, 0.0, 1.0);
    if (cfg.noise_rms > 0.0)
      y += noise(rng);
    s.delta_pa[i] = x;
    s.signal[i] = y;
  }
  return s;
}

std::vector<Peak> findPeaks(const Spectrum &s, double min_depth) {
  std::vector<Peak> out;
  const auto &y = s.signal;
  for (std::size_t i = 1; i + 1 < y.size(); ++i) {
    if (!(y[i] < y[i - 1] && y[i] <= y[i + 1]))
      continue;
    if (!(y[i] < 1.0 - min_depth))
      continue;
    const double curvature = y[i - 1] - 2.0 * y[i] + y[i + 1];
    double offset = 0.0;
    if (curvature > 0.0)
      offset = 0.5 * (y[i - 1] - y[i + 1]) / curvature;
    const double step = s.delta_pa[i + 1] - s.delta_pa[i];
    const double y_min = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * offset;
    out.push_back({s.delta_pa[i] + offset * step, 1.0 - y_min});
  }
  return out;
}

std::string spectrumCsv(const Spectrum &s) {
  std::string out = "delta_pa_cm1,signal\n";
  for (std::size_t i = 0; i < s.signal.size(); ++i)
    out += dataio::formatNumber(s.delta_pa[i]) + ',' +
           dataio::formatNumber(s.signal[i]) + '\n';
  return out;
}

std::string spectrumSvg(const Spectrum &s) {
  constexpr double width = 800.0, height = 400.0, margin = 40.0;
  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width
      << "\" height=\"" << height << "\">\n";
  svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  if (s.signal.size() >= 2) {
    const double x0 = s.delta_pa.front(), x1 = s.delta_pa.back();
    const auto [lo, hi] = std::minmax_element(s.signal.begin(), s.signal.end());
    const double y0 = std::min(*lo, 0.0), y1 = std::max(*hi, 1.0);
    svg << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"1\" "
           "points=\"";
    for (std::size_t i = 0; i < s.signal.size(); ++i) {
      const double px =
          margin + (s.delta_pa[i] - x0) / (x1 - x0) * (width - 2 * margin);
      const double py = height - margin -
                        (s.signal[i] - y0) / (y1 - y0) * (height - 2 * margin);
      svg << px << ',' << py << ' ';
    }
    svg << "\"/>\n";
    svg << "<text x=\"" << margin << "\" y=\"" << height - 10
        << "\" font-size=\"12\">" << dataio::formatNumber(x0) << " cm-1</text>\n";
    svg << "<text x=\"" << width - margin - 80 << "\" y=\"" << height - 10
        << "\" font-size=\"12\">" << dataio::formatNumber(x1) << " cm-1</text>\n";
  }
  svg << "</svg>\n";
  return svg.str();
}

} // namespace spectra
} // namespace pafit
