#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qbreak/dynamics.hpp"
#include "qbreak/ehrenfest.hpp"
#include "qbreak/model.hpp"
#include "qbreak/semiclassics.hpp"

namespace qbreak {

struct SweepConfig {
  PotentialSpec spec;
  std::vector<double> hbar_values;  // strictly descending
  EhrenfestMethod method = EhrenfestMethod::Numeric;
  double weight_floor = kDefaultWeightFloor;
  unsigned workers = 1;  // concurrent hbar values (0 = hardware)
  NumericRunOptions numeric;
  // Parity rule for regularized-WKB roots; calibrated on the numeric
  // spectrum at hbar = 1e-2 when absent.
  std::optional<semiclassics::RegWkbParityRule> parity_rule;
};

// Throws ConfigError for invalid grids or method/potential mismatches.
void validate(const SweepConfig& cfg);

// Diagnostics of one hbar value; `point` is empty when that value failed.
struct SweepRecord {
  double hbar = 0.0;
  std::optional<EhrenfestPoint> point;
  std::string error;
  double captured_mass = 0.0;  // numeric runs only
  double max_odd_weight = 0.0;
  double parseval_defect = 0.0;
};

struct SweepResult {
  std::vector<SweepRecord> records;  // hbar descending
  std::vector<EhrenfestPoint> points() const;
};

// One Ehrenfest point per hbar. Per-value failures are recorded and
// skipped; throws Error listing them when every value failed.
SweepResult run_sweep(const SweepConfig& cfg);

// Computes the regularized-WKB parity rule from the numeric spectrum of the
// alpha=1, beta=2 double well at the given hbar.
semiclassics::RegWkbParityRule calibrate_parity_rule(double hbar = 1e-2);

// per_decade points per decade from hbar_max down to hbar_min (both included
// when the span is an integer number of steps), descending.
std::vector<double> log_spaced_hbar(double hbar_max, double hbar_min, int per_decade = 8);

enum class ScalingModel { PowerLaw, Logarithmic };

std::string to_string(ScalingModel m);
ScalingModel parse_scaling_model(const std::string& text);

struct ScalingFit {
  ScalingModel model = ScalingModel::PowerLaw;
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::vector<double> residuals;
};

// Least squares on (ln hbar, ln nu_E^-1) for PowerLaw, (ln(1/hbar), nu_E^-1)
// for Logarithmic. Needs at least four points.
ScalingFit fit_scaling(const std::vector<EhrenfestPoint>& points, ScalingModel model);

struct ModelSelection {
  ScalingFit power_law;
  ScalingFit logarithmic;
  ScalingModel preferred = ScalingModel::PowerLaw;
};

// Fits both models; the higher r_squared wins, ties go to PowerLaw. Needs at
// least five points spanning two decades.
ModelSelection model_select(const std::vector<EhrenfestPoint>& points);

}  // namespace qbreak
