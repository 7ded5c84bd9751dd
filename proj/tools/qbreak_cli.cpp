// qbreak: spectra, survival-probability spectra and Ehrenfest frequencies of
// single- and double-well Hamiltonians from the command line.

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qbreak/dynamics.hpp"
#include "qbreak/errors.hpp"
#include "qbreak/io.hpp"
#include "qbreak/semiclassics.hpp"
#include "qbreak/spectrum.hpp"
#include "qbreak/sweep.hpp"

namespace {

using namespace qbreak;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

struct CommonArgs {
  int alpha = 1;
  int beta = 2;
  std::string well = "double";
  std::vector<double> hbar;
  std::string hbar_decades;
  std::string method;
  double weight_floor = kDefaultWeightFloor;
  std::string out = "-";
  std::string format = "csv";
  int bins = 200;
  unsigned workers = 1;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--alpha", a.alpha, "Exponent of the inverted term (double well)")->capture_default_str();
  cmd->add_option("--beta", a.beta, "Exponent of the confining term")->capture_default_str();
  cmd->add_option("--well", a.well, "single or double")
      ->check(CLI::IsMember({"single", "double"}))
      ->capture_default_str();
  cmd->add_option("--hbar", a.hbar, "Rescaled Planck constant (repeatable)");
  cmd->add_option("--hbar-decades", a.hbar_decades, "a:b, 8 log-spaced values per decade from 1e-a to 1e-b");
  cmd->add_option("--method", a.method, "numeric, wkb or regwkb");
  cmd->add_option("--weight-floor", a.weight_floor, "Smallest |c_n|^2 counted as nonzero")->capture_default_str();
  cmd->add_option("--out", a.out, "Output path, - for stdout")->capture_default_str();
  cmd->add_option("--format", a.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
  cmd->add_option("--bins", a.bins, "Histogram bins on [0, 2]")->capture_default_str();
  cmd->add_option("--workers", a.workers, "Worker threads (0 = all cores)")->capture_default_str();
}

PotentialSpec spec_of(const CommonArgs& a) {
  PotentialSpec spec = a.well == "single" ? PotentialSpec::single_well(a.beta)
                                          : PotentialSpec::double_well(a.alpha, a.beta);
  validate(spec);
  return spec;
}

std::vector<double> hbar_values(const CommonArgs& a) {
  std::vector<double> values = a.hbar;
  if (!a.hbar_decades.empty()) {
    const auto colon = a.hbar_decades.find(':');
    if (colon == std::string::npos) throw ConfigError("--hbar-decades expects a:b");
    double d1 = 0.0, d2 = 0.0;
    try {
      d1 = std::stod(a.hbar_decades.substr(0, colon));
      d2 = std::stod(a.hbar_decades.substr(colon + 1));
    } catch (const std::exception&) {
      throw ConfigError("--hbar-decades expects two numbers a:b");
    }
    const auto grid = log_spaced_hbar(std::pow(10.0, -std::min(d1, d2)), std::pow(10.0, -std::max(d1, d2)));
    values.insert(values.end(), grid.begin(), grid.end());
  }
  if (values.empty()) throw ConfigError("give --hbar or --hbar-decades");
  std::sort(values.begin(), values.end(), std::greater<>());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

double single_hbar(const CommonArgs& a) {
  const auto values = hbar_values(a);
  if (values.size() != 1) throw ConfigError("this command takes exactly one hbar value");
  return values.front();
}

EhrenfestMethod method_of(const CommonArgs& a) {
  if (!a.method.empty()) return parse_method(a.method);
  return EhrenfestMethod::Numeric;
}

NumericRunOptions numeric_options(const CommonArgs& a) {
  NumericRunOptions opts;
  opts.weight_floor = a.weight_floor;
  opts.solve.workers = a.workers;
  return opts;
}

OverlapSet overlaps_for(const CommonArgs& a) {
  const PotentialSpec spec = spec_of(a);
  const double hbar = single_hbar(a);
  const EhrenfestMethod method = method_of(a);
  if (method == EhrenfestMethod::WkbSingleWell) {
    if (spec.is_double()) throw ConfigError("wkb applies only to single wells");
    return wkb_overlap_set(spec.beta, hbar);
  }
  if (method == EhrenfestMethod::RegWkb) throw ConfigError("regwkb provides energies only, not overlaps");
  const NumericRun run = numeric_ehrenfest(spec, hbar, numeric_options(a));
  std::cerr << "captured mass " << run.overlaps.captured_mass << ", " << run.even_states << " even states, max odd weight "
            << run.max_odd_weight << "\n";
  return run.overlaps;
}

void print_fit(const ScalingFit& f) {
  std::cerr << "fit " << to_string(f.model) << ": slope " << f.slope << ", intercept " << f.intercept << ", R^2 "
            << f.r_squared << "\n";
}

void report_fits(const std::vector<EhrenfestPoint>& points) {
  try {
    const ModelSelection sel = model_select(points);
    print_fit(sel.power_law);
    print_fit(sel.logarithmic);
    std::cerr << "preferred: " << to_string(sel.preferred) << "\n";
  } catch (const FitError&) {
    if (points.size() >= 4) print_fit(fit_scaling(points, ScalingModel::PowerLaw));
  }
}

int cmd_spectrum(const CommonArgs& a, double eps_min, double eps_max, const std::string& parity,
                 const std::string& wave_out, int wave_n) {
  const PotentialSpec spec = spec_of(a);
  const double hbar = single_hbar(a);
  const double lo = std::isnan(eps_min) ? (spec.is_double() ? -20.0 * hbar : potential_minimum(spec)) : eps_min;
  const double hi = std::isnan(eps_max) ? 20.0 * hbar : eps_max;
  const ParityFilter filter = parity == "even" ? ParityFilter::Even
                              : parity == "odd" ? ParityFilter::Odd
                                                : ParityFilter::Both;
  SolveOptions opts;
  opts.workers = a.workers;
  if (wave_out.empty()) opts.keep_samples_to = 0.0;
  const SpectralWindow window = solve_eigen_window(spec, hbar, lo, hi, filter, opts);
  io::write_table(a.out, io::spectrum_table(window), io::parse_format(a.format));
  if (!wave_out.empty()) {
    for (const auto& s : window.states) {
      if (s.n == wave_n) {
        io::write_table(wave_out, io::wavefunction_table(s), io::parse_format(a.format));
        return 0;
      }
    }
    throw ConfigError("state n=" + std::to_string(wave_n) + " is not in the window");
  }
  return 0;
}

int cmd_overlaps(const CommonArgs& a) {
  io::write_table(a.out, io::overlap_table(overlaps_for(a)), io::parse_format(a.format));
  return 0;
}

int cmd_pnu(const CommonArgs& a) {
  if (a.bins < 1) throw ConfigError("--bins must be positive");
  const double nu_max = 2.0;
  const OverlapSet os = overlaps_for(a);
  io::write_table(a.out, io::density_table(binned_density(os, nu_max / a.bins, nu_max)), io::parse_format(a.format));
  return 0;
}

SweepConfig sweep_config(const CommonArgs& a) {
  SweepConfig cfg;
  cfg.spec = spec_of(a);
  cfg.hbar_values = hbar_values(a);
  cfg.method = method_of(a);
  cfg.weight_floor = a.weight_floor;
  cfg.workers = a.workers;
  cfg.numeric = numeric_options(a);
  return cfg;
}

int run_points(const CommonArgs& a, bool fits) {
  const SweepResult result = run_sweep(sweep_config(a));
  for (const auto& r : result.records) {
    if (!r.point) {
      std::cerr << "hbar=" << r.hbar << " failed: " << r.error << "\n";
    } else if (r.point->method == EhrenfestMethod::Numeric || !fits) {
      std::cerr << "hbar=" << r.hbar << ": nu_E=" << r.point->nu_e << " pair (" << r.point->eps_lo << ", "
                << r.point->eps_hi << ")\n";
    }
  }
  const auto points = result.points();
  io::write_table(a.out, io::ehrenfest_table(points), io::parse_format(a.format));
  if (fits) report_fits(points);
  bool any_failed = false;
  for (const auto& r : result.records) any_failed = any_failed || !r.point;
  return any_failed ? kExitNumerical : 0;
}

int cmd_fit(const CommonArgs& a, const std::string& in, const std::string& model) {
  const auto points = io::ehrenfest_points(io::read_table(in));
  io::Table t;
  t.columns = {"model", "slope", "intercept", "r_squared", "preferred"};
  auto add = [&](const ScalingFit& f, bool preferred) {
    t.add_row({to_string(f.model), f.slope, f.intercept, f.r_squared, static_cast<long long>(preferred)});
  };
  if (model == "auto") {
    const ModelSelection sel = model_select(points);
    add(sel.power_law, sel.preferred == ScalingModel::PowerLaw);
    add(sel.logarithmic, sel.preferred == ScalingModel::Logarithmic);
  } else {
    add(fit_scaling(points, parse_scaling_model(model)), true);
  }
  io::write_table(a.out, t, io::parse_format(a.format));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Spectra, survival-probability spectra and Ehrenfest frequencies of polynomial wells"};
  app.require_subcommand(1);

  CommonArgs args;
  double eps_min = std::nan(""), eps_max = std::nan("");
  std::string parity = "both", wave_out, fit_in, fit_model = "auto";
  int wave_n = 0;

  auto* spectrum = app.add_subcommand("spectrum", "Eigenvalues in an energy window");
  add_common(spectrum, args);
  spectrum->add_option("--eps-min", eps_min, "Window lower edge (default -20 hbar, or the well bottom)");
  spectrum->add_option("--eps-max", eps_max, "Window upper edge (default 20 hbar)");
  spectrum->add_option("--parity", parity, "even, odd or both")->check(CLI::IsMember({"even", "odd", "both"}));
  spectrum->add_option("--wavefunction-out", wave_out, "Also export q,phi of state --state");
  spectrum->add_option("--state", wave_n, "Node count of the exported state");

  auto* overlaps = app.add_subcommand("overlaps", "Packet weights |c_n|^2 on the even ladder");
  add_common(overlaps, args);
  auto* pnu = app.add_subcommand("pnu", "Binned frequency density of the survival probability");
  add_common(pnu, args);
  auto* ehrenfest = app.add_subcommand("ehrenfest", "Ehrenfest frequency at the given hbar values");
  add_common(ehrenfest, args);
  auto* sweep = app.add_subcommand("sweep", "Ehrenfest frequencies over an hbar grid plus scaling fits");
  add_common(sweep, args);
  auto* fit = app.add_subcommand("fit", "Fit scaling laws to a previously written ehrenfest/sweep table");
  add_common(fit, args);
  fit->add_option("--in", fit_in, "Input CSV or JSON")->required();
  fit->add_option("--model", fit_model, "power_law, logarithmic or auto")
      ->check(CLI::IsMember({"power_law", "logarithmic", "auto"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*spectrum) return cmd_spectrum(args, eps_min, eps_max, parity, wave_out, wave_n);
    if (*overlaps) return cmd_overlaps(args);
    if (*pnu) return cmd_pnu(args);
    if (*ehrenfest) return run_points(args, false);
    if (*sweep) return run_points(args, true);
    if (*fit) return cmd_fit(args, fit_in, fit_model);
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  }
  return kExitUsage;
}
