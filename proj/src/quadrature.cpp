#include "pafit/quadrature.hpp"

#include <array>
#include <cmath>

namespace pafit::quadrature {

namespace {

// Nodes and weights from QUADPACK qk15.
constexpr std::array<double, 8> xgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> wgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> wg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double value;
  double error;
};

Panel kronrod15(const std::function<double(double)> &f, double a, double b) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const double fc = f(c);
  double k = fc * wgk[7];
  double g = fc * wg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = h * xgk[j];
    const double fsum = f(c - dx) + f(c + dx);
    k += wgk[j] * fsum;
    if (j % 2 == 1)
      g += wg[j / 2] * fsum;
  }
  return {k * h, std::abs((k - g) * h)};
}

void refine(const std::function<double(double)> &f, double a, double b,
            double tol, int depth, int max_depth, Result &out) {
  const Panel p = kronrod15(f, a, b);
  out.evaluations += 15;
  if (p.error <= tol || depth >= max_depth) {
    if (p.error > tol)
      out.converged = false;
    out.value += p.value;
    out.error += p.error;
    return;
  }
  const double m = 0.5 * (a + b);
  refine(f, a, m, 0.5 * tol, depth + 1, max_depth, out);
  refine(f, m, b, 0.5 * tol, depth + 1, max_depth, out);
}

} // namespace

Result gaussKronrod(const std::function<double(double)> &f, double a, double b,
                    double abs_tol, int max_depth) {
  Result out;
  refine(f, a, b, abs_tol, 0, max_depth, out);
  return out;
}

} // namespace pafit::quadrature
