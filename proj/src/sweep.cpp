#include "qbreak/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <sstream>
#include <thread>

#include "qbreak/errors.hpp"

namespace qbreak {
namespace {

EhrenfestPoint run_one(const SweepConfig& cfg, double hbar, const semiclassics::RegWkbParityRule& rule,
                       SweepRecord& rec) {
  switch (cfg.method) {
    case EhrenfestMethod::WkbSingleWell:
      return semiclassics::single_well_ehrenfest(cfg.spec.beta, hbar);
    case EhrenfestMethod::RegWkb:
      return semiclassics::regwkb_ehrenfest(hbar, rule);
    case EhrenfestMethod::Numeric:
      break;
  }
  NumericRunOptions opts = cfg.numeric;
  opts.weight_floor = cfg.weight_floor;
  const NumericRun run = numeric_ehrenfest(cfg.spec, hbar, opts);
  rec.captured_mass = run.overlaps.captured_mass;
  rec.max_odd_weight = run.max_odd_weight;
  rec.parseval_defect = run.parseval_defect;
  return run.point;
}

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

LineFit least_squares(const std::vector<double>& x, const std::vector<double>& y) {
  const auto n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (!(sxx > 1e-300) || !std::isfinite(sxx)) throw FitError("degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - (f.intercept + f.slope * x[i]);
    f.residuals.push_back(r);
    ss_res += r * r;
  }
  f.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 0.0;
  return f;
}

}  // namespace

void validate(const SweepConfig& cfg) {
  validate(cfg.spec);
  if (cfg.hbar_values.empty()) throw ConfigError("no hbar values");
  for (std::size_t i = 0; i < cfg.hbar_values.size(); ++i) {
    const double h = cfg.hbar_values[i];
    if (!(h > 0.0) || !std::isfinite(h)) throw ConfigError("hbar values must be positive and finite");
    if (i > 0 && !(h < cfg.hbar_values[i - 1])) throw ConfigError("hbar values must be strictly descending");
  }
  if (!(cfg.weight_floor > 0.0)) throw ConfigError("weight floor must be positive");
  if (cfg.method == EhrenfestMethod::RegWkb && !(cfg.spec == PotentialSpec::double_well(1, 2))) {
    throw ConfigError("regwkb applies only to the alpha=1, beta=2 double well");
  }
  if (cfg.method == EhrenfestMethod::WkbSingleWell && cfg.spec.is_double()) {
    throw ConfigError("wkb applies only to single wells");
  }
}

std::vector<EhrenfestPoint> SweepResult::points() const {
  std::vector<EhrenfestPoint> out;
  for (const auto& r : records) {
    if (r.point) out.push_back(*r.point);
  }
  return out;
}

semiclassics::RegWkbParityRule calibrate_parity_rule(double hbar) {
  const PotentialSpec spec = PotentialSpec::double_well(1, 2);
  SolveOptions opts;
  opts.grid_check_states = 0;
  opts.keep_samples_to = 0.0;
  const double half = std::min(0.05, 20.0 * hbar);
  const SpectralWindow window = solve_eigen_window(spec, hbar, -half, half, ParityFilter::Both, opts);
  return semiclassics::calibrate_regwkb_parity(window);
}

SweepResult run_sweep(const SweepConfig& cfg) {
  validate(cfg);
  semiclassics::RegWkbParityRule rule;
  if (cfg.method == EhrenfestMethod::RegWkb) rule = cfg.parity_rule ? *cfg.parity_rule : calibrate_parity_rule();

  const std::size_t count = cfg.hbar_values.size();
  std::vector<SweepRecord> records(count);
  auto task = [&](std::size_t i) {
    SweepRecord& rec = records[i];
    rec.hbar = cfg.hbar_values[i];
    try {
      rec.point = run_one(cfg, rec.hbar, rule, rec);
    } catch (const Error& e) {
      rec.error = e.what();
    }
  };
  const unsigned workers = cfg.workers == 0 ? std::max(1u, std::thread::hardware_concurrency()) : cfg.workers;
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) task(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::future<void>> pool;
    for (unsigned w = 0; w < std::min<std::size_t>(workers, count); ++w) {
      pool.push_back(std::async(std::launch::async, [&] {
        for (std::size_t i = next++; i < count; i = next++) task(i);
      }));
    }
    for (auto& f : pool) f.get();
  }

  SweepResult result;
  result.records = std::move(records);
  std::sort(result.records.begin(), result.records.end(),
            [](const SweepRecord& a, const SweepRecord& b) { return a.hbar > b.hbar; });
  if (result.points().empty()) {
    std::ostringstream os;
    os << "every hbar value failed:";
    for (const auto& r : result.records) os << "\n  hbar=" << r.hbar << ": " << r.error;
    throw Error(os.str());
  }
  return result;
}

std::vector<double> log_spaced_hbar(double hbar_max, double hbar_min, int per_decade) {
  if (!(hbar_max > 0.0) || !(hbar_min > 0.0) || !(hbar_min < hbar_max)) {
    throw ConfigError("need 0 < hbar_min < hbar_max");
  }
  if (per_decade < 1) throw ConfigError("need at least one point per decade");
  const double span = std::log10(hbar_max / hbar_min) * per_decade;
  const auto steps = static_cast<int>(std::floor(span + 1e-9));
  std::vector<double> out;
  for (int i = 0; i <= steps; ++i) {
    out.push_back(hbar_max * std::pow(10.0, -static_cast<double>(i) / per_decade));
  }
  return out;
}

std::string to_string(ScalingModel m) { return m == ScalingModel::PowerLaw ? "power_law" : "logarithmic"; }

ScalingModel parse_scaling_model(const std::string& text) {
  if (text == "power_law" || text == "power") return ScalingModel::PowerLaw;
  if (text == "logarithmic" || text == "log") return ScalingModel::Logarithmic;
  throw ConfigError("unknown scaling model '" + text + "'");
}

ScalingFit fit_scaling(const std::vector<EhrenfestPoint>& points, ScalingModel model) {
  if (points.size() < 4) throw FitError("need at least four points to fit");
  std::vector<double> x, y;
  for (const auto& p : points) {
    if (!(p.hbar > 0.0) || !(p.nu_e > 0.0)) throw FitError("points need positive hbar and nu_E");
    if (model == ScalingModel::PowerLaw) {
      x.push_back(std::log(p.hbar));
      y.push_back(std::log(p.inverse()));
    } else {
      x.push_back(std::log(1.0 / p.hbar));
      y.push_back(p.inverse());
    }
  }
  const LineFit f = least_squares(x, y);
  return {model, f.slope, f.intercept, f.r_squared, f.residuals};
}

ModelSelection model_select(const std::vector<EhrenfestPoint>& points) {
  if (points.size() < 5) throw FitError("model selection needs at least five points");
  double lo = points.front().hbar, hi = lo;
  for (const auto& p : points) {
    lo = std::min(lo, p.hbar);
    hi = std::max(hi, p.hbar);
  }
  if (std::log10(hi / lo) < 2.0 - 1e-9) throw FitError("model selection needs two decades of hbar");
  ModelSelection sel;
  sel.power_law = fit_scaling(points, ScalingModel::PowerLaw);
  sel.logarithmic = fit_scaling(points, ScalingModel::Logarithmic);
  sel.preferred = sel.logarithmic.r_squared > sel.power_law.r_squared ? ScalingModel::Logarithmic
                                                                        : ScalingModel::PowerLaw;
  return sel;
}

}  // namespace qbreak
