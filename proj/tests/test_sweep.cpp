#include <cmath>

#include "doctest.h"
#include "qbreak/errors.hpp"
#include "qbreak/sweep.hpp"

using namespace qbreak;

namespace {

std::vector<EhrenfestPoint> synthetic(const std::vector<double>& hbars, double (*inverse)(double)) {
  std::vector<EhrenfestPoint> out;
  for (double h : hbars) {
    EhrenfestPoint p;
    p.hbar = h;
    p.nu_e = 1.0 / inverse(h);
    out.push_back(p);
  }
  return out;
}

}  // namespace

TEST_SUITE("sweep") {
  TEST_CASE("log-spaced grid") {
    const auto g = log_spaced_hbar(1e-2, 1e-4);
    REQUIRE(g.size() == 17);
    CHECK(g.front() == doctest::Approx(1e-2).epsilon(1e-14));
    CHECK(g.back() == doctest::Approx(1e-4).epsilon(1e-12));
    for (std::size_t i = 1; i < g.size(); ++i) CHECK(g[i - 1] / g[i] == doctest::Approx(std::pow(10.0, 0.125)));
    CHECK_THROWS_AS(log_spaced_hbar(1e-4, 1e-2), ConfigError);
    CHECK_THROWS_AS(log_spaced_hbar(1e-2, 1e-4, 0), ConfigError);
  }

  TEST_CASE("fits recover exact parameters") {
    const auto grid = log_spaced_hbar(1e-1, 1e-6);
    const auto power = synthetic(grid, [](double h) { return 2.5 * std::pow(h, -0.4); });
    const auto pf = fit_scaling(power, ScalingModel::PowerLaw);
    CHECK(std::abs(pf.slope + 0.4) < 1e-10);
    CHECK(std::abs(pf.intercept - std::log(2.5)) < 1e-10);
    CHECK(pf.r_squared == doctest::Approx(1.0).epsilon(1e-12));

    const auto logd = synthetic(grid, [](double h) { return 3.0 + 1.25 * std::log(1.0 / h); });
    const auto lf = fit_scaling(logd, ScalingModel::Logarithmic);
    CHECK(std::abs(lf.slope - 1.25) < 1e-10);
    CHECK(std::abs(lf.intercept - 3.0) < 1e-10);

    CHECK(model_select(power).preferred == ScalingModel::PowerLaw);
    CHECK(model_select(logd).preferred == ScalingModel::Logarithmic);
  }

  TEST_CASE("degenerate fits") {
    const auto grid = log_spaced_hbar(1e-1, 1e-4);
    const auto flat = synthetic(grid, [](double) { return 7.0; });
    const auto sel = model_select(flat);
    CHECK(sel.power_law.r_squared == 0.0);
    CHECK(sel.logarithmic.r_squared == 0.0);
    CHECK(sel.preferred == ScalingModel::PowerLaw);
    CHECK_THROWS_AS(fit_scaling(synthetic({1e-2, 1e-2, 1e-2, 1e-2}, [](double) { return 1.0; }), ScalingModel::PowerLaw),
                    FitError);
    CHECK_THROWS_AS(fit_scaling(synthetic({1e-2, 1e-3, 1e-4}, [](double) { return 1.0; }), ScalingModel::PowerLaw),
                    FitError);
    CHECK_THROWS_AS(model_select(synthetic({1e-2, 5e-3, 2e-3, 1e-3, 5e-4}, [](double) { return 1.0; })), FitError);
  }

  TEST_CASE("configuration checks") {
    SweepConfig cfg;
    cfg.spec = PotentialSpec::single_well(2);
    cfg.hbar_values = {1e-2, 1e-3};
    cfg.method = EhrenfestMethod::RegWkb;
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
    cfg.method = EhrenfestMethod::WkbSingleWell;
    cfg.hbar_values = {1e-3, 1e-2};
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
    cfg.hbar_values = {};
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
    cfg.hbar_values = {1e-2, -1e-3};
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
    cfg.spec = PotentialSpec::double_well(1, 2);
    cfg.hbar_values = {1e-2};
    CHECK_THROWS_AS(run_sweep(cfg), ConfigError);
  }

  TEST_CASE("every value failing is an error") {
    SweepConfig cfg;
    cfg.spec = PotentialSpec::double_well(1, 2);
    cfg.hbar_values = {1e-2, 1e-3};
    cfg.numeric.max_widenings = 0;
    cfg.numeric.upper_window_hbar = 0.5;
    cfg.numeric.lower_window_hbar = 0.5;
    CHECK_THROWS_AS(run_sweep(cfg), Error);
  }

  TEST_CASE("regularized sweep is deterministic across worker counts") {
    SweepConfig cfg;
    cfg.spec = PotentialSpec::double_well(1, 2);
    cfg.hbar_values = log_spaced_hbar(1e-2, 1e-4);
    cfg.method = EhrenfestMethod::RegWkb;
    cfg.workers = 1;
    const auto serial = run_sweep(cfg).points();
    cfg.workers = 4;
    const auto parallel = run_sweep(cfg).points();
    REQUIRE(serial.size() == parallel.size());
    for (std::size_t i = 0; i < serial.size(); ++i) {
      CHECK(serial[i].hbar == parallel[i].hbar);
      CHECK(serial[i].nu_e == parallel[i].nu_e);
    }
  }

  TEST_CASE("numeric sweep: Ehrenfest time grows as hbar shrinks") {
    SweepConfig cfg;
    cfg.spec = PotentialSpec::double_well(1, 2);
    cfg.hbar_values = {1e-2, 1e-3, 1e-4};
    cfg.workers = 3;
    const auto res = run_sweep(cfg);
    REQUIRE(res.points().size() == 3);
    for (const auto& r : res.records) {
      CHECK(r.error.empty());
      CHECK(r.captured_mass > kMinCapturedMass);
      CHECK(r.max_odd_weight < kOddWeightLimit);
    }
    const auto pts = res.points();
    CHECK(pts[1].inverse() > pts[0].inverse());
    CHECK(pts[2].inverse() > pts[1].inverse());
  }
}
