#include "optomech/dynamics.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "optomech/error.hpp"

namespace optomech {

namespace {

using cd = std::complex<double>;

void check_consistent(const SystemLayout& layout, const SteadyState& steady) {
  if (steady.G.size() != layout.modes.size())
    throw InvalidArgument("steady state has " + std::to_string(steady.G.size()) +
                          " elastic couplings but the layout has " +
                          std::to_string(layout.modes.size()) + " modes");
}

}  // namespace

double brownian_factor(double omega, double thermal_ratio) {
  if (std::abs(omega) < 1e-8) return 2.0 / thermal_ratio + thermal_ratio * omega * omega / 6.0;
  const double x = 0.5 * thermal_ratio * omega;
  return omega / std::tanh(x);
}

ComplexMatrix build_drift(const SystemLayout& layout, const SteadyState& steady,
                          double omega) {
  check_consistent(layout, steady);
  const Basis basis(layout);
  const auto x = basis.cavity_x();
  const auto y = basis.cavity_y();
  ComplexMatrix a = ComplexMatrix::Zero(basis.dimension(), basis.dimension());

  if (layout.include_com) {
    a(0, 1) = 1.0;
    a(1, 0) = -1.0;
    a(1, 1) = -layout.gamma_m;
    a(1, x) = steady.g;
    a(y, 0) = steady.g;
  }

  const double kc = layout.kappa_c();
  a(x, x) = -kc;
  a(x, y) = steady.detuning_eff;
  a(y, x) = -steady.detuning_eff;
  a(y, y) = -kc;

  const double pt = 2.0 * layout.kappa2 * layout.chi;
  for (std::size_t k = 0; k < layout.modes.size(); ++k) {
    const auto& m = layout.modes[k];
    const auto q = basis.elastic_q(k);
    const auto p = basis.elastic_p(k);
    a(q, p) = m.Omega;
    a(p, q) = -m.Omega;
    a(p, p) = -m.Gamma;
    a(p, x) = steady.G[k] * (1.0 + pt * layout.kernel_response(k, omega));
    a(y, q) = steady.G[k];
  }
  return a;
}

ComplexMatrix build_diffusion(const SystemLayout& layout, const SteadyState& steady,
                              double omega, BrownianSpectrum brownian) {
  check_consistent(layout, steady);
  const Basis basis(layout);
  const auto x = basis.cavity_x();
  ComplexMatrix d = ComplexMatrix::Zero(basis.dimension(), basis.dimension());

  auto thermal = [&](double resonance) {
    switch (brownian) {
      case BrownianSpectrum::Full: return brownian_factor(omega, layout.thermal_ratio);
      case BrownianSpectrum::Frozen: return brownian_factor(resonance, layout.thermal_ratio);
      case BrownianSpectrum::Omitted: break;
    }
    return 0.0;
  };

  if (layout.include_com) d(1, 1) = layout.gamma_m * thermal(1.0);

  const double kc = layout.kappa_c();
  d(x, x) = kc;
  d(x + 1, x + 1) = kc;

  const std::size_t n = layout.modes.size();
  const double k2 = layout.kappa2;
  const double chi = layout.chi;
  std::vector<cd> h(n);
  for (std::size_t k = 0; k < n; ++k) h[k] = layout.kernel_response(k, omega);

  // Absorption noise enters dX_a with weight sqrt(2 kappa2) and dP_n with
  // -sqrt(2 kappa2) chi G_n h_n(omega); D is the outer product of those weights
  // with the vacuum variance 1/2, plus the uncorrelated thermal terms.
  for (std::size_t i = 0; i < n; ++i) {
    const auto pi_row = basis.elastic_p(i);
    const cd cross = -k2 * chi * steady.G[i] * h[i];
    d(pi_row, x) = cross;
    d(x, pi_row) = std::conj(cross);
    for (std::size_t j = 0; j < n; ++j) {
      const auto pj = basis.elastic_p(j);
      d(pi_row, pj) = k2 * chi * chi * steady.G[i] * steady.G[j] * h[i] * std::conj(h[j]);
    }
    const auto& m = layout.modes[i];
    d(pi_row, pi_row) += m.Gamma / m.Omega * thermal(m.Omega);
  }
  return d;
}

SpectralMatrices::SpectralMatrices(SystemLayout layout, SteadyState steady,
                                   BrownianSpectrum brownian)
    : layout_(std::move(layout)), steady_(std::move(steady)), brownian_(brownian) {
  check_consistent(layout_, steady_);
}

double stability_margin(const SystemLayout& layout, const SteadyState& steady) {
  check_consistent(layout, steady);
  const double dc = steady.detuning_eff;
  const double kc = layout.kappa_c();
  double load = layout.include_com ? steady.g * steady.g : 0.0;
  for (std::size_t k = 0; k < layout.modes.size(); ++k) {
    const auto& m = layout.modes[k];
    const double static_gain =
        1.0 + 2.0 * layout.kappa2 * layout.chi * layout.kernel_response(k, 0.0).real();
    load += steady.G[k] * steady.G[k] / m.Omega * static_gain;
  }
  return 1.0 - dc / (dc * dc + kc * kc) * load;
}

StabilityReport check_stability(const SystemLayout& layout, const SteadyState& steady) {
  const RealMatrix a0 = build_drift(layout, steady, 0.0).real();
  Eigen::EigenSolver<RealMatrix> solver(a0, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success)
    throw UnphysicalInput("eigenvalue solver failed on the drift matrix");

  StabilityReport report;
  report.max_real_eigenvalue = solver.eigenvalues().real().maxCoeff();
  report.stable = report.max_real_eigenvalue < 0.0;
  if (steady.detuning_eff > 0.0) {
    report.closed_form_margin = stability_margin(layout, steady);
    report.agreement = (*report.closed_form_margin > 0.0) == report.stable;
  }
  return report;
}

}  // namespace optomech
