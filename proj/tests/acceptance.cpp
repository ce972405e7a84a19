// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "optomech/config.hpp"
#include "optomech/measures.hpp"
#include "optomech/solver.hpp"
#include "optomech/sweep.hpp"
#include "support.hpp"

using namespace optomech;

namespace {

using Clock = std::chrono::steady_clock;

// E_N at or below this is round-off on a separable state.
constexpr double kZero = 1e-12;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

Config figure(const std::string& name) {
  return load_config(std::string(OPTOMECH_CONFIG_DIR) + "/" + name + ".conf");
}

std::size_t column_of(const SweepResult& r, const std::string& label) {
  const auto cols = r.columns();
  return static_cast<std::size_t>(std::find(cols.begin(), cols.end(), label) - cols.begin());
}

// Minimum of a covariance column over stable rows and the first axis value there.
std::pair<double, double> argmin(const SweepResult& r, const std::string& label) {
  const std::size_t c = column_of(r, label);
  double best = std::numeric_limits<double>::infinity(), at = 0.0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto cells = r.cells(i);
    if (cells[c] && *cells[c] < best) {
      best = *cells[c];
      at = r.rows[i].axis_values[0];
    }
  }
  return {best, at};
}

double max_where(const SweepResult& r, const std::string& label,
                 const std::function<bool(const SweepRow&)>& keep) {
  const std::size_t c = column_of(r, label);
  double best = 0.0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    if (!keep(r.rows[i])) continue;
    const auto cells = r.cells(i);
    if (cells[c]) best = std::max(best, *cells[c]);
  }
  return best;
}

// Longest run of consecutive grid points with the column above kZero.
std::size_t positive_run(const SweepResult& r, const std::string& label) {
  const std::size_t c = column_of(r, label);
  std::size_t run = 0, best = 0;
  for (std::size_t i = 0; i < r.rows.size(); ++i) {
    const auto cells = r.cells(i);
    run = cells[c] && *cells[c] > kZero ? run + 1 : 0;
    best = std::max(best, run);
  }
  return best;
}

int failures = 0;

void verdict(int id, bool pass, const std::string& detail) {
  if (!pass) ++failures;
  std::printf("[%s] criterion %d: %s\n", pass ? "PASS" : "FAIL", id, detail.c_str());
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

void criterion1() {
  const auto t0 = Clock::now();
  const auto p = testing::table1(0.05, 0.0, 0.0);
  const auto pt = testing::make_point(p, testing::figure_source(), {10, 20, 45}, 1.0);
  const auto v = integrate_covariance(SpectralMatrices(pt.layout, pt.steady));
  const Basis basis(pt.layout);
  double worst = 0.0;
  for (const auto& mode : mechanical_modes(basis)) {
    const double omega = mode.kind == ModeKind::Com ? 1.0 : pt.layout.modes[mode.slot].Omega;
    const double nbar = bose_occupancy(omega, pt.layout.thermal_ratio);
    worst = std::max(worst, std::abs(phonon_number(v.entries, mode) / nbar - 1.0));
  }
  const double t = seconds_since(t0);
  verdict(1, worst < 0.05 && t < 5.0,
          fmt("zero drive, CoM + 3 elastic modes: worst |n_eff/nbar - 1| = %.2e, %.3f s", worst, t));
}

void criterion2() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int accepted = 0, drawn = 0;
  while (accepted < 20 && drawn < 10000) {
    ++drawn;
    const double k1 = 0.05 + 0.95 * u(rng);
    const auto p = testing::table1(k1, k1 * u(rng), 1e-3 + 60e-3 * u(rng));
    const int n = 10 + static_cast<int>(50 * u(rng));
    const auto pt = testing::make_point(p, testing::figure_source(0.0), {n}, 0.2 + 1.8 * u(rng));
    if (!check_stability(pt.layout, pt.steady).stable) continue;
    ++accepted;
    const SpectralMatrices sm(pt.layout, pt.steady, BrownianSpectrum::Frozen);
    const RealMatrix v = integrate_covariance(sm).entries;
    const RealMatrix o = lyapunov_oracle(sm.drift_at(0.0).real(), sm.diffusion_at(0.0).real()).entries;
    worst = std::max(worst, (v - o).cwiseAbs().maxCoeff() / o.cwiseAbs().maxCoeff());
  }
  const double t = seconds_since(t0);
  verdict(2, accepted == 20 && worst < 1e-6 && t < 30.0,
          fmt("%d stable points (%d drawn): worst relative max-norm gap %.2e, %.2f s", accepted,
              drawn, worst, t));
}

void criterion3() {
  bool pass = true;
  std::string detail;
  double slowest = 0.0;
  const double omega1 = 20.0 / 37.0;
  for (const char* tag : {"a", "b", "c"}) {
    const auto t0 = Clock::now();
    const auto r = run_sweep(figure(std::string("fig2") + tag + "-good-cavity"), 1);
    slowest = std::max(slowest, seconds_since(t0));
    const auto [com, com_at] = argmin(r, "n_eff_com[quanta]");
    const auto [el, el_at] = argmin(r, "n_eff_el1[quanta]");
    pass = pass && com < 1 && el < 1 && std::abs(com_at - 1.0) <= 0.15 &&
           std::abs(el_at - omega1) <= 0.15;
    detail += fmt("(%s) CoM %.3g@%.3f el %.3g@%.3f; ", tag, com, com_at, el, el_at);
  }
  const auto bad0 = argmin(run_sweep(figure("fig2a-bad-cavity"), 1), "n_eff_com[quanta]").first;
  const auto bad1 = argmin(run_sweep(figure("fig2c-bad-cavity"), 1), "n_eff_com[quanta]").first;
  pass = pass && bad1 > bad0 && slowest < 60.0;
  detail += fmt("bad cavity CoM min %.3g -> %.3g; slowest 200-point sweep %.2f s (1 thread)", bad0,
                bad1, slowest);
  verdict(3, pass, detail);
}

void criterion4() {
  bool pass = true;
  std::string detail;
  for (const char* tag : {"a", "b", "c"}) {
    const auto r = run_sweep(figure(std::string("fig4") + tag), 1);
    const std::size_t c = column_of(r, "n_eff_el1[quanta]");
    auto at = [&](int n) {
      for (std::size_t i = 0; i < r.rows.size(); ++i)
        if (r.rows[i].axis_values[0] == n && r.cells(i)[c]) return *r.cells(i)[c];
      return std::numeric_limits<double>::quiet_NaN();
    };
    const double ratio = at(37) / std::max(at(31), at(43));
    pass = pass && ratio >= 10.0;
    detail += fmt("(%s) n_eff(37)=%.3g n_eff(31)=%.3g n_eff(43)=%.3g ratio %.1f; ", tag, at(37),
                  at(31), at(43), ratio);
  }
  verdict(4, pass, detail);
}

void criterion5() {
  const auto r = run_sweep(figure("fig6-detuning-0.4"), 0);
  const double at0 = max_where(r, "EN_cav_el1[-]",
                               [](const SweepRow& row) { return row.axis_values[0] == 0.0; });
  const double opt = max_where(r, "EN_cav_el1[-]",
                               [](const SweepRow& row) { return row.axis_values[0] > 0.0; });
  const double com = max_where(r, "EN_com_cav[-]", [](const SweepRow&) { return true; });
  const bool a = std::abs(at0 / 0.21 - 1.0) <= 0.3;
  const bool b = std::abs(opt / 0.26 - 1.0) <= 0.3;
  const bool c = com <= kZero;
  verdict(5, a && b && c,
          fmt("max E_N(el,cav) at kappa2=0: %.3f (target 0.21 +-30%%: %s); at kappa2>0: %.3f "
              "(target 0.26 +-30%%: %s); max E_N(com,cav) over panel %.2e (zero: %s)",
              at0, a ? "ok" : "miss", opt, b ? "ok" : "miss", com, c ? "ok" : "miss"));
}

void criterion6() {
  const auto half = run_sweep(figure("fig5b"), 0);
  const auto full = run_sweep(figure("fig5c"), 0);
  const auto none = run_sweep(figure("fig5a"), 0);
  const std::size_t run = positive_run(half, "EN_com_cav[-]");
  const double at_full = max_where(full, "EN_com_cav[-]", [](const SweepRow&) { return true; });
  double mech = 0.0;
  for (const auto* r : {&none, &half, &full})
    mech = std::max(mech, max_where(*r, "EN_com_el1[-]", [](const SweepRow&) { return true; }));
  const bool a = run >= 2, b = at_full <= kZero, c = mech <= kZero;
  verdict(6, a && b && c,
          fmt("E_N(com,cav)>0 on %zu consecutive detunings at kappa2=0.5kappa1 (%s); max at "
              "kappa2=kappa1 %.3g (zero: %s); max mech-mech E_N %.2e (zero: %s)",
              run, a ? "ok" : "miss", at_full, b ? "ok" : "miss", mech, c ? "ok" : "miss"));
}

void criterion7() {
  const std::vector<std::string> names = {
      "fig2a-good-cavity", "fig2b-good-cavity", "fig2c-good-cavity", "fig2a-bad-cavity",
      "fig2b-bad-cavity",  "fig2c-bad-cavity",  "fig4a",             "fig4b",
      "fig4c",             "fig5a",             "fig5b",             "fig5c",
      "fig6-detuning-0.4"};
  std::size_t points = 0;
  double min_nu = std::numeric_limits<double>::infinity(), worst_residue = 0.0, worst_asym = 0.0;
  for (const auto& name : names) {
    Config c = figure(name);
    c.quadrature.mirror_check = true;
    for (const auto& at : sweep_grid(c)) {
      const auto p = evaluate_point(c, at);
      if (!p.covariance) continue;
      ++points;
      const RealMatrix& v = p.covariance->entries;
      const double scale = v.diagonal().maxCoeff();
      for (double nu : symplectic_spectrum(v)) min_nu = std::min(min_nu, nu);
      worst_residue = std::max(worst_residue, p.covariance->imag_residue / scale);
      worst_asym = std::max(worst_asym, (v - v.transpose()).cwiseAbs().maxCoeff() / scale);
    }
  }
  verdict(7, min_nu >= 0.5 - 1e-6 && worst_residue < 1e-6 && worst_asym < 1e-6,
          fmt("%zu stable points: min symplectic eigenvalue %.9f, worst imag residue %.2e, "
              "worst asymmetry %.2e (relative to max diagonal)",
              points, min_nu, worst_residue, worst_asym));
}

void criterion8() {
  double tmsv = 0.0;
  for (double r : {0.1, 0.5, 1.0})
    tmsv = std::max(tmsv, std::abs(log_negativity(testing::tmsv(r)).log_neg - 2 * r));
  std::mt19937_64 rng(8);
  double routes = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto v = testing::random_physical(rng);
    routes = std::max(routes, std::abs(log_negativity(v).eta_minus - partial_transpose_eta(v)));
  }
  verdict(8, tmsv < 1e-9 && routes < 1e-9,
          fmt("TMSV |E_N - 2r| <= %.2e; closed form vs spectrum on 1000 random states <= %.2e",
              tmsv, routes));
}

void criterion9() {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int disagree = 0, unstable = 0;
  for (int i = 0; i < 1000; ++i) {
    const double k1 = 0.02 + 5.0 * u(rng) * u(rng);
    const auto p = testing::table1(k1, k1 * u(rng), 100e-3 * u(rng));
    const int n = 5 + static_cast<int>(55 * u(rng));
    const auto src = testing::figure_source(0.2 * u(rng), 0.5 + 4.5 * u(rng));
    const auto pt = testing::make_point(p, src, {n}, 0.02 + 2.5 * u(rng), u(rng) < 0.8);
    const auto rep = check_stability(pt.layout, pt.steady);
    const bool closed = stability_margin(pt.layout, pt.steady) > 0.0;
    if (closed != (rep.max_real_eigenvalue < 0.0) || !rep.agreement) ++disagree;
    if (!rep.stable) ++unstable;
  }
  int rays = 0, broken = 0;
  for (int ray = 0; ray < 20; ++ray, ++rays) {
    const double k1 = 0.05 + u(rng), k2 = k1 * u(rng), det = 0.1 + 1.9 * u(rng);
    double last = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 100; ++k) {
      const auto pt = testing::make_point(testing::table1(k1, k2, 1e-3 * k),
                                          testing::figure_source(), {20}, det);
      const double m = stability_margin(pt.layout, pt.steady);
      if (k > 0 && !(m < last)) {
        ++broken;
        break;
      }
      last = m;
    }
  }
  verdict(9, disagree == 0 && broken == 0,
          fmt("1000 draws (%d unstable): %d verdict disagreements; margin strictly decreasing "
              "in P on %d/%d rays",
              unstable, disagree, rays - broken, rays));
}

}  // namespace

int main() {
  const auto t0 = Clock::now();
  for (auto* check : {criterion1, criterion2, criterion3, criterion4, criterion5, criterion6,
                      criterion7, criterion8, criterion9}) {
    try {
      check();
    } catch (const std::exception& e) {
      ++failures;
      std::printf("[FAIL] criterion raised: %s\n", e.what());
    }
  }
  std::printf("%d of 9 criteria failed (%.1f s)\n", failures, seconds_since(t0));
  return failures == 0 ? 0 : 1;
}
