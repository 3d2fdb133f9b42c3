#include "pafit/fitter.hpp"
#include "pafit/errors.hpp"
#include "pafit/units.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <tuple>

namespace pafit {

namespace {

const IsotopologueSpec &isoById(const std::vector<IsotopologueSpec> &isos,
                                std::string_view id) {
  return dataio::findIsotopologue(isos, id);
}

} // namespace

NdeModel FitResult::model(std::string_view isotopologue_id) const {
  NdeModel m;
  m.params = params;
  m.mu = isoById(isotopologues, isotopologue_id).reducedMassMe();
  m.quad_abs_tol = quad_abs_tol;
  return m;
}

std::size_t FitProblem::freeParameterCount() const {
  std::size_t n_iso = 0;
  for (const auto &iso : isotopologues)
    if (std::any_of(lines.begin(), lines.end(),
                    [&](const FitLine &l) { return l.isotopologue_id == iso.id; }))
      ++n_iso;
  return (fix_c8 ? 1 : 2) + n_iso;
}

void FitProblem::validate() const {
  for (const auto &l : lines) {
    dataio::findIsotopologue(isotopologues, l.isotopologue_id);
    if (l.dv > -1)
      throw DomainError("FitProblem: dv must be <= -1");
    if (!(l.energy < 0.0) || !std::isfinite(l.energy))
      throw DomainError("FitProblem: line energies must be negative");
    if (!(l.weight > 0.0) || !std::isfinite(l.weight))
      throw DomainError("FitProblem: weights must be positive");
  }
  if (!(v_d_lower < v_d_upper))
    throw DomainError("FitProblem: empty v_d bounds");
  if (initial)
    initial->validate();
  if (!(c8_scale > 0.0) || !(fd_step > 0.0) || max_iterations < 1 ||
      !(param_tol > 0.0) || !(cost_tol > 0.0) || !(model_tol > 0.0) ||
      !(quad_abs_tol > 0.0))
    throw DomainError("FitProblem: invalid optimizer settings");
  const std::size_t p = freeParameterCount();
  if (lines.size() < p)
    throw IdentifiabilityError(
        "FitProblem: " + std::to_string(lines.size()) + " lines cannot fix " +
        std::to_string(p) + " free parameters");
}

namespace fitter {

namespace {

struct Bound {
  double lower;
  double upper;
  bool hard_lower; // the model cannot be evaluated below `lower`
};

// Parameter vector: [log c6, (log1p(c8/scale)), v_d...] with isotopologues in
// problem order.
class Objective {
public:
  explicit Objective(const FitProblem &pb) : pb_(pb) {
    for (const auto &iso : pb.isotopologues)
      if (std::any_of(pb.lines.begin(), pb.lines.end(), [&](const FitLine &l) {
            return l.isotopologue_id == iso.id;
          })) {
        iso_ids_.push_back(iso.id);
        mu_.push_back(iso.reducedMassMe());
      }
    // Canonical line order makes the result independent of input order.
    order_.resize(pb.lines.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::size_t a, std::size_t b) {
      const auto &la = pb.lines[a], &lb = pb.lines[b];
      return std::tie(la.isotopologue_id, la.dv, la.energy, la.weight) <
             std::tie(lb.isotopologue_id, lb.dv, lb.energy, lb.weight);
    });
    // Weights relative to the largest one, so a common scale drops out.
    for (const auto &l : pb.lines)
      weight_scale_ = std::max(weight_scale_, l.weight);
    for (std::size_t i : order_) {
      const auto &l = pb.lines[i];
      const auto it = std::find(iso_ids_.begin(), iso_ids_.end(),
                                l.isotopologue_id);
      line_iso_.push_back(static_cast<std::size_t>(it - iso_ids_.begin()));
      sqrt_w_.push_back(std::sqrt(l.weight / weight_scale_));
    }
    fixed_c8_ = pb.initial ? pb.initial->c8 : 0.0;
  }

  std::size_t size() const { return (pb_.fix_c8 ? 1 : 2) + iso_ids_.size(); }
  std::size_t lines() const { return order_.size(); }
  std::size_t vdIndex(std::size_t iso) const {
    return (pb_.fix_c8 ? 1 : 2) + iso;
  }
  const std::vector<std::string> &isoIds() const { return iso_ids_; }
  const std::vector<std::size_t> &order() const { return order_; }
  double weightScale() const { return weight_scale_; }

  std::vector<Bound> bounds() const {
    constexpr double inf = std::numeric_limits<double>::infinity();
    std::vector<Bound> b{{-inf, inf, false}};
    if (!pb_.fix_c8)
      b.push_back({0.0, inf, true});
    for (std::size_t i = 0; i < iso_ids_.size(); ++i)
      b.push_back({pb_.v_d_lower, pb_.v_d_upper, false});
    return b;
  }

  PotentialParams params(const Eigen::VectorXd &x) const {
    PotentialParams p;
    p.c6 = std::exp(x[0]);
    p.c8 = pb_.fix_c8 ? fixed_c8_ : pb_.c8_scale * std::expm1(x[1]);
    return p;
  }

  Eigen::VectorXd encode(const PotentialParams &p,
                         const std::vector<double> &v_d) const {
    Eigen::VectorXd x(size());
    x[0] = std::log(p.c6);
    if (!pb_.fix_c8)
      x[1] = std::log1p(p.c8 / pb_.c8_scale);
    for (std::size_t i = 0; i < v_d.size(); ++i)
      x[vdIndex(i)] = v_d[i];
    return x;
  }

  // Predicted energies (cm^-1) in canonical order.
  Eigen::VectorXd predict(const Eigen::VectorXd &x) const {
    const PotentialParams p = params(x);
    Eigen::VectorXd out(lines());
    for (std::size_t k = 0; k < lines(); ++k) {
      const auto &l = pb_.lines[order_[k]];
      NdeModel m{p, mu_[line_iso_[k]], pb_.quad_abs_tol};
      const double count = x[vdIndex(line_iso_[k])] - l.dv;
      out[k] = units::hartreeToCm1(nde::levelEnergy(m, count));
    }
    return out;
  }

  // sqrt(w) (predicted - observed)
  Eigen::VectorXd residuals(const Eigen::VectorXd &x) const {
    Eigen::VectorXd r = predict(x);
    for (std::size_t k = 0; k < lines(); ++k)
      r[k] = sqrt_w_[k] * (r[k] - pb_.lines[order_[k]].energy);
    return r;
  }

  Eigen::MatrixXd jacobian(const Eigen::VectorXd &x,
                           const std::vector<Bound> &bounds) const {
    Eigen::MatrixXd J(lines(), size());
    for (std::size_t j = 0; j < size(); ++j) {
      const double h = pb_.fd_step * std::max(std::abs(x[j]), 1.0);
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      double span = 2.0 * h;
      if (bounds[j].hard_lower && xm[j] < bounds[j].lower) {
        xm[j] = x[j];
        span = h;
      }
      J.col(j) = (residuals(xp) - residuals(xm)) / span;
    }
    return J;
  }

private:
  const FitProblem &pb_;
  std::vector<std::string> iso_ids_;
  std::vector<double> mu_;
  std::vector<std::size_t> order_;
  std::vector<std::size_t> line_iso_;
  std::vector<double> sqrt_w_;
  double weight_scale_ = 0.0;
  double fixed_c8_ = 0.0;
};

// Pure-c6 LeRoy-Bernstein seed: count^3 = (J/pi)^3 (2 mu)^(3/2) sqrt(c6) |E|
// is linear in sqrt(c6); regress through the origin.
double seedC6(const FitProblem &pb, const std::vector<std::size_t> &order,
              double weight_scale, const std::map<std::string, double> &v_d0) {
  const double j = nde::pureC6PhaseConstant() / std::numbers::pi;
  double num = 0.0, den = 0.0;
  for (std::size_t i : order) {
    const auto &l = pb.lines[i];
    const double mu = dataio::findIsotopologue(pb.isotopologues,
                                               l.isotopologue_id)
                          .reducedMassMe();
    const double count = v_d0.at(l.isotopologue_id) - l.dv;
    const double z = j * j * j * std::pow(2.0 * mu, 1.5) *
                     units::cm1ToHartree(-l.energy);
    const double w = l.weight / weight_scale;
    num += w * count * count * count * z;
    den += w * z * z;
  }
  const double sqrt_c6 = num / den;
  return sqrt_c6 * sqrt_c6;
}

double norm(const Eigen::VectorXd &v) { return v.norm(); }

struct LmRun {
  Eigen::VectorXd x;
  Eigen::VectorXd r;
  double cost = 0.0;
  double initial_cost = 0.0;
  int iterations = 0;
  bool converged = false;
};

// Projected Levenberg-Marquardt on the box `bounds`.
LmRun levenbergMarquardt(const Objective &obj, const std::vector<Bound> &bounds,
                         Eigen::VectorXd x, const FitProblem &problem) {
  const std::size_t np = obj.size();
  for (std::size_t j = 0; j < np; ++j)
    x[j] = std::clamp(x[j], bounds[j].lower, bounds[j].upper);

  // Cost changes below this are quadrature noise (per-line energy error of
  // about ten times the count tolerance, in cm^-1).
  const double noise = 10.0 * problem.quad_abs_tol;
  const double floor =
      0.5 * static_cast<double>(obj.lines()) * noise * noise;

  LmRun run;
  Eigen::VectorXd r = obj.residuals(x);
  double cost = 0.5 * r.squaredNorm();
  run.initial_cost = cost;
  double lambda = 1e-3;
  bool converged = false;
  int iter = 0;
  while (!converged && iter < problem.max_iterations) {
    ++iter;
    const Eigen::MatrixXd J = obj.jacobian(x, bounds);
    if (iter == 1) {
      Eigen::JacobiSVD<Eigen::MatrixXd> svd(J);
      const auto &s = svd.singularValues();
      if (s.size() == 0 || s[s.size() - 1] <= 1e-14 * s[0])
        throw IdentifiabilityError(
            "fitNde: Jacobian is rank deficient; the lines do not determine "
            "all free parameters");
    }
    const Eigen::VectorXd g = J.transpose() * r;
    const Eigen::MatrixXd A = J.transpose() * J;

    // Parameters pinned at a bound with the descent direction pointing out
    // of the box are held fixed for this step.
    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < np; ++j) {
      const bool at_lower = x[j] <= bounds[j].lower && g[j] > 0.0;
      const bool at_upper = x[j] >= bounds[j].upper && g[j] < 0.0;
      if (!at_lower && !at_upper)
        free.push_back(j);
    }
    if (free.empty()) {
      converged = true;
      break;
    }
    const auto nf = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd Af(nf, nf);
    Eigen::VectorXd gf(nf);
    for (Eigen::Index a = 0; a < nf; ++a) {
      gf[a] = g[free[a]];
      for (Eigen::Index b = 0; b < nf; ++b)
        Af(a, b) = A(free[a], free[b]);
    }
    const double diag_floor = 1e-30 * Af.diagonal().maxCoeff();
    // Decrease the undamped Gauss-Newton model still promises. Heavy damping
    // can make steps and cost changes tiny far from the optimum, so both
    // tests only count once this is negligible too.
    const double promised =
        0.5 * gf.dot(Af.completeOrthogonalDecomposition().solve(gf));
    const bool stationary = promised <= problem.model_tol * cost + floor;

    for (;;) {
      Eigen::MatrixXd M = Af;
      for (Eigen::Index a = 0; a < nf; ++a)
        M(a, a) += lambda * std::max(Af(a, a), diag_floor);
      const Eigen::VectorXd df = M.ldlt().solve(-gf);
      Eigen::VectorXd x_new = x;
      for (Eigen::Index a = 0; a < nf; ++a) {
        const std::size_t j = free[a];
        x_new[j] = std::clamp(x[j] + df[a], bounds[j].lower, bounds[j].upper);
      }
      const double step = norm(x_new - x) / (norm(x) + 1e-300);
      const Eigen::VectorXd r_new = obj.residuals(x_new);
      const double cost_new = 0.5 * r_new.squaredNorm();
      const bool small_step = step < problem.param_tol;
      const bool flat =
          std::abs(cost - cost_new) <= problem.cost_tol * cost + floor;

      if (cost_new < cost) {
        x = x_new;
        r = r_new;
        cost = cost_new;
        lambda = std::max(lambda / 10.0, 1e-12);
        converged = small_step && flat && stationary;
        break;
      }
      lambda *= 10.0;
      if (stationary && ((small_step && flat) || step == 0.0)) {
        converged = true;
        break;
      }
      if (lambda > 1e20)
        break;
    }
    if (lambda > 1e20 && !converged)
      break;
  }
  run.x = x;
  run.r = r;
  run.cost = cost;
  run.iterations = iter;
  run.converged = converged;
  return run;
}

} // namespace

FitProblem makeFitProblem(std::span<const LineRecord> records,
                          std::span<const IsotopologueSpec> isotopologues) {
  FitProblem pb;
  pb.isotopologues.assign(isotopologues.begin(), isotopologues.end());
  for (const auto &r : records) {
    if (!r.observed || !r.delta_pa || !r.dv || r.f_prime != 2)
      continue;
    pb.lines.push_back({r.isotopologue_id, *r.dv, *r.delta_pa, 1.0});
  }
  return pb;
}

FitResult fitNde(const FitProblem &problem) {
  problem.validate();
  const Objective obj(problem);
  const auto bounds = obj.bounds();
  const std::size_t np = obj.size();
  const std::size_t nl = obj.lines();

  std::map<std::string, double> v_d0;
  for (const auto &id : obj.isoIds()) {
    const auto it = problem.initial_v_d.find(id);
    v_d0[id] = it != problem.initial_v_d.end() ? it->second : 0.5;
  }
  std::vector<double> vd_start;
  for (const auto &id : obj.isoIds())
    vd_start.push_back(v_d0[id]);

  // Without a user guess, c6 comes from the pure-c6 seed and c8 is started
  // at a few magnitudes; the valley along c6-c8 has more than one minimum.
  std::vector<PotentialParams> starts;
  if (problem.initial) {
    starts.push_back(*problem.initial);
  } else {
    const double c6 = seedC6(problem, obj.order(), obj.weightScale(), v_d0);
    starts.push_back({c6, 0.0});
    if (!problem.fix_c8) {
      starts.push_back({c6, problem.c8_scale});
      starts.push_back({c6, 10.0 * problem.c8_scale});
    }
  }
  std::optional<LmRun> best;
  double initial_cost = 0.0;
  for (const auto &start : starts) {
    LmRun run =
        levenbergMarquardt(obj, bounds, obj.encode(start, vd_start), problem);
    if (!best) {
      initial_cost = run.initial_cost;
      best = std::move(run);
    } else if (run.cost < best->cost) {
      best = std::move(run);
    }
  }
  const Eigen::VectorXd x = best->x;
  const double cost = best->cost;
  const bool converged = best->converged;

  FitResult out;
  Eigen::MatrixXd J;
  out.iterations = best->iterations;

  // Fill the result in problem order.
  out.params = obj.params(x);
  for (std::size_t i = 0; i < obj.isoIds().size(); ++i)
    out.v_d[obj.isoIds()[i]] = x[obj.vdIndex(i)];
  out.isotopologues = problem.isotopologues;
  out.lines = problem.lines;
  out.quad_abs_tol = problem.quad_abs_tol;
  const Eigen::VectorXd pred = obj.predict(x);
  out.predicted.assign(nl, 0.0);
  out.residuals.assign(nl, 0.0);
  double sq = 0.0;
  for (std::size_t k = 0; k < nl; ++k) {
    const std::size_t i = obj.order()[k];
    out.predicted[i] = pred[k];
    out.residuals[i] = problem.lines[i].energy - pred[k];
    sq += out.residuals[i] * out.residuals[i];
  }
  out.rms = std::sqrt(sq / static_cast<double>(nl));
  out.cost = cost * obj.weightScale();
  out.initial_cost = initial_cost * obj.weightScale();
  out.converged = converged;

  // Covariance from the Jacobian at the optimum, mapped to physical units.
  J = obj.jacobian(x, bounds);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(J, Eigen::ComputeThinU |
                                               Eigen::ComputeThinV);
  const auto &s = svd.singularValues();
  out.condition_number = s[s.size() - 1] > 0.0
                             ? s[0] / s[s.size() - 1]
                             : std::numeric_limits<double>::infinity();
  Eigen::VectorXd inv_s2(s.size());
  for (Eigen::Index i = 0; i < s.size(); ++i)
    inv_s2[i] = s[i] > 1e-14 * s[0] ? 1.0 / (s[i] * s[i]) : 0.0;
  Eigen::MatrixXd cov =
      svd.matrixV() * inv_s2.asDiagonal() * svd.matrixV().transpose();
  if (nl > np)
    cov *= 2.0 * cost / static_cast<double>(nl - np);
  else
    out.warnings.push_back("zero degrees of freedom: covariance is not "
                           "scaled by the residual variance");
  if (out.condition_number > 1e8)
    out.warnings.push_back("ill-conditioned fit: Jacobian condition number " +
                           dataio::formatNumber(out.condition_number));

  Eigen::VectorXd d = Eigen::VectorXd::Ones(np);
  d[0] = out.params.c6;
  out.parameter_names.push_back("c6");
  if (!problem.fix_c8) {
    d[1] = problem.c8_scale * std::exp(x[1]);
    out.parameter_names.push_back("c8");
  }
  for (const auto &id : obj.isoIds())
    out.parameter_names.push_back("v_d:" + id);
  out.covariance = d.asDiagonal() * cov * d.asDiagonal();

  const Eigen::VectorXd g = J.transpose() * obj.residuals(x);
  for (std::size_t j = 0; j < np; ++j) {
    if ((x[j] <= bounds[j].lower && g[j] > 0.0) ||
        (x[j] >= bounds[j].upper && g[j] < 0.0))
      out.active_bounds.push_back(out.parameter_names[j] +
                                  (x[j] <= bounds[j].lower ? " at lower bound"
                                                           : " at upper bound"));
  }
  if (!converged)
    out.warnings.push_back("did not converge within " +
                           std::to_string(problem.max_iterations) +
                           " iterations");
  return out;
}

Assignment autoAssign(std::span<const double> energies, const NdeModel &model,
                      double v_d_guess) {
  Assignment out;
  if (energies.empty())
    return out;
  for (std::size_t i = 1; i < energies.size(); ++i)
    if (!(energies[i] < energies[i - 1]))
      throw AssignmentError("autoAssign: energies must be strictly decreasing");

  std::vector<double> q;
  for (double e : energies)
    q.push_back(nde::quantumDefect(model, units::cm1ToHartree(e)));

  const int first = static_cast<int>(std::lround(v_d_guess - q[0]));
  if (first > -1)
    throw AssignmentError("autoAssign: first line would be assigned dv = " +
                          std::to_string(first) + " (must be <= -1)");
  out.dv.push_back(first);
  if (energies.size() == 1)
    out.warnings.push_back("single line: assignment rests on v_d_guess alone");

  for (std::size_t i = 1; i < energies.size(); ++i) {
    const double spacing = q[i] - q[i - 1];
    if (!(spacing > 0.5 && spacing < 3.5))
      throw AssignmentError(
          "autoAssign: ambiguous spacing " + dataio::formatNumber(spacing) +
          " between lines at " + dataio::formatNumber(energies[i - 1]) +
          " and " + dataio::formatNumber(energies[i]) + " cm^-1");
    const int step = static_cast<int>(std::lround(spacing));
    out.dv.push_back(out.dv.back() - step);
    if (step > 1) {
      out.gaps.emplace_back(i, step - 1);
      out.warnings.push_back("gap of " + std::to_string(step - 1) +
                             " level(s) before " +
                             dataio::formatNumber(energies[i]) + " cm^-1");
    }
  }
  return out;
}

std::vector<ResidualRow> residualReport(const FitResult &result,
                                        const FitProblem &problem) {
  double mu_ref = 0.0;
  for (const auto &[id, v] : result.v_d)
    mu_ref = std::max(mu_ref,
                      dataio::findIsotopologue(result.isotopologues, id)
                          .reducedMassMe());
  std::vector<ResidualRow> rows;
  for (std::size_t i = 0; i < problem.lines.size(); ++i) {
    const auto &l = problem.lines[i];
    const double mu =
        dataio::findIsotopologue(result.isotopologues, l.isotopologue_id)
            .reducedMassMe();
    const double scale = std::sqrt(mu_ref / mu);
    rows.push_back({l.isotopologue_id, l.dv, l.energy, result.predicted.at(i),
                    result.residuals.at(i), scale,
                    (result.v_d.at(l.isotopologue_id) - l.dv) * scale});
  }
  return rows;
}

std::string residualCsv(const std::vector<ResidualRow> &rows) {
  std::string out = "isotopologue,dv,observed_cm1,predicted_cm1,residual_cm1,"
                    "mass_scale,scaled_count\n";
  for (const auto &r : rows)
    out += r.isotopologue_id + ',' + std::to_string(r.dv) + ',' +
           dataio::formatNumber(r.observed) + ',' +
           dataio::formatNumber(r.predicted) + ',' +
           dataio::formatNumber(r.residual) + ',' +
           dataio::formatNumber(r.mass_scale) + ',' +
           dataio::formatNumber(r.scaled_count) + '\n';
  return out;
}

std::string fitResultJson(const FitResult &result) {
  using nlohmann::json;
  json j;
  j["schema_version"] = 1;
  j["c6_au"] = result.params.c6;
  j["c8_au"] = result.params.c8;
  j["v_d"] = json::object();
  for (const auto &[id, v] : result.v_d)
    j["v_d"][id] = v;
  j["rms_cm1"] = result.rms;
  j["residuals"] = json::array();
  for (std::size_t i = 0; i < result.lines.size(); ++i)
    j["residuals"].push_back({{"isotopologue", result.lines[i].isotopologue_id},
                              {"dv", result.lines[i].dv},
                              {"observed_cm1", result.lines[i].energy},
                              {"predicted_cm1", result.predicted[i]},
                              {"residual_cm1", result.residuals[i]},
                              {"weight", result.lines[i].weight}});
  j["converged"] = result.converged;
  j["iterations"] = result.iterations;
  j["cost"] = result.cost;
  j["initial_cost"] = result.initial_cost;
  j["condition_number"] = std::isfinite(result.condition_number)
                              ? json(result.condition_number)
                              : json(nullptr);
  json cov = json::array();
  for (Eigen::Index a = 0; a < result.covariance.rows(); ++a) {
    json row = json::array();
    for (Eigen::Index b = 0; b < result.covariance.cols(); ++b)
      row.push_back(result.covariance(a, b));
    cov.push_back(row);
  }
  j["covariance"] = {{"parameters", result.parameter_names}, {"matrix", cov}};
  j["active_bounds"] = result.active_bounds;
  j["warnings"] = result.warnings;
  j["isotopologues"] = json::array();
  for (const auto &iso : result.isotopologues)
    j["isotopologues"].push_back({{"id", iso.id},
                                  {"mass_a_amu", iso.mass_a},
                                  {"mass_b_amu", iso.mass_b}});
  j["quad_abs_tol"] = result.quad_abs_tol;
  return j.dump(2) + "\n";
}

FitResult parseFitResultJson(std::string_view text) {
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception &e) {
    throw ParseError(std::string("fit result: invalid JSON: ") + e.what(), 0);
  }
  try {
    if (j.at("schema_version").get<int>() != 1)
      throw ParseError("fit result: unsupported schema_version", 0,
                       "schema_version");
    FitResult r;
    r.params = {j.at("c6_au").get<double>(), j.at("c8_au").get<double>()};
    r.params.validate();
    for (const auto &[id, v] : j.at("v_d").items())
      r.v_d[id] = v.get<double>();
    r.rms = j.at("rms_cm1").get<double>();
    r.converged = j.at("converged").get<bool>();
    r.iterations = j.at("iterations").get<int>();
    for (const auto &iso : j.at("isotopologues"))
      r.isotopologues.push_back({iso.at("id").get<std::string>(),
                                 iso.at("mass_a_amu").get<double>(),
                                 iso.at("mass_b_amu").get<double>()});
    for (const auto &row : j.at("residuals")) {
      r.lines.push_back({row.at("isotopologue").get<std::string>(),
                         row.at("dv").get<int>(),
                         row.at("observed_cm1").get<double>(),
                         row.value("weight", 1.0)});
      r.predicted.push_back(row.at("predicted_cm1").get<double>());
      r.residuals.push_back(row.at("residual_cm1").get<double>());
    }
    r.cost = j.value("cost", 0.0);
    r.initial_cost = j.value("initial_cost", 0.0);
    if (j.contains("condition_number") && !j["condition_number"].is_null())
      r.condition_number = j["condition_number"].get<double>();
    if (j.contains("covariance")) {
      const auto &c = j["covariance"];
      r.parameter_names = c.at("parameters").get<std::vector<std::string>>();
      const auto &m = c.at("matrix");
      const auto n = static_cast<Eigen::Index>(m.size());
      r.covariance.resize(n, n);
      for (Eigen::Index a = 0; a < n; ++a)
        for (Eigen::Index b = 0; b < n; ++b)
          r.covariance(a, b) = m.at(a).at(b).get<double>();
    }
    r.active_bounds = j.value("active_bounds", std::vector<std::string>{});
    r.warnings = j.value("warnings", std::vector<std::string>{});
    r.quad_abs_tol = j.value("quad_abs_tol", 1e-10);
    for (const auto &[id, v] : r.v_d)
      dataio::findIsotopologue(r.isotopologues, id);
    return r;
  } catch (const json::exception &e) {
    throw ParseError(std::string("fit result: ") + e.what(), 0);
  }
}

} // namespace fitter
} // namespace pafit
