#include "optomech/solver.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

namespace optomech {

namespace {

using cd = std::complex<double>;

// 7-point Gauss / 15-point Kronrod abscissae and weights on [-1, 1].
constexpr std::array<double, 8> kKronrodNodes = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kKronrodWeights = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kGaussWeights = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Panel {
  double a = 0.0;
  double b = 0.0;
  bool tail = false;
  ComplexMatrix value;
  double error = 0.0;
};

struct ByError {
  bool operator()(const Panel& l, const Panel& r) const { return l.error < r.error; }
};

double max_abs(const ComplexMatrix& m) { return m.cwiseAbs().maxCoeff(); }

// Folded integrand on [0, omega_max] and on the mapped tail t in (0, 1].
class Integrand {
 public:
  Integrand(const SpectralMatrices& matrices, double omega_max, bool mirror)
      : m_(matrices), omega_max_(omega_max), mirror_(mirror) {
    tail_brownian_ = matrices.brownian() == BrownianSpectrum::Full ? BrownianSpectrum::Omitted
                                                                   : matrices.brownian();
  }

  ComplexMatrix operator()(double x, bool tail) {
    ++evaluations_;
    if (!tail) return folded(x, m_.brownian());
    const double omega = omega_max_ / x;
    return folded(omega, tail_brownian_) * (omega_max_ / (x * x));
  }

  std::size_t evaluations() const { return evaluations_; }

 private:
  ComplexMatrix spectral(double omega, BrownianSpectrum brownian) const {
    ComplexMatrix a = build_drift(m_.layout(), m_.steady(), omega);
    const ComplexMatrix d = build_diffusion(m_.layout(), m_.steady(), omega, brownian);
    a.diagonal().array() += cd(0.0, omega);
    const Eigen::PartialPivLU<ComplexMatrix> lu(a);
    // M D M^dagger = M (M D)^dagger because D is Hermitian.
    const ComplexMatrix md = lu.solve(d);
    return lu.solve(md.adjoint());
  }

  ComplexMatrix folded(double omega, BrownianSpectrum brownian) const {
    ComplexMatrix f = spectral(omega, brownian);
    if (mirror_) return f + spectral(-omega, brownian);
    return f + f.conjugate();
  }

  const SpectralMatrices& m_;
  double omega_max_;
  bool mirror_;
  BrownianSpectrum tail_brownian_;
  std::size_t evaluations_ = 0;
};

Panel integrate_panel(Integrand& f, double a, double b, bool tail) {
  const double c = 0.5 * (a + b);
  const double h = 0.5 * (b - a);
  const ComplexMatrix center = f(c, tail);
  ComplexMatrix kronrod = kKronrodWeights[7] * center;
  ComplexMatrix gauss = kGaussWeights[3] * center;
  for (std::size_t j = 0; j < 7; ++j) {
    const double dx = h * kKronrodNodes[j];
    const ComplexMatrix pair = f(c - dx, tail) + f(c + dx, tail);
    kronrod += kKronrodWeights[j] * pair;
    if (j % 2 == 1) gauss += kGaussWeights[j / 2] * pair;
  }
  Panel p;
  p.a = a;
  p.b = b;
  p.tail = tail;
  p.value = h * kronrod;
  p.error = h * max_abs(kronrod - gauss);
  return p;
}

// Panel edges at the resonances of M(omega) and on geometric ladders around
// them, so that peaks of width ~ gamma_m are never straddled by a coarse panel.
std::vector<double> seed_breakpoints(const SpectralMatrices& m, double omega_max) {
  const auto& layout = m.layout();
  std::vector<double> pts = {0.0, omega_max};
  auto add = [&](double w) {
    if (std::isfinite(w) && w > 0.0 && w < omega_max) pts.push_back(w);
  };

  if (layout.include_com) add(1.0);
  for (const auto& mode : layout.modes) add(mode.Omega);
  add(std::abs(m.steady().detuning_eff));
  add(layout.kappa_c());
  add(1.0 / layout.tau_th);

  const RealMatrix a0 = m.drift_at(0.0).real();
  Eigen::EigenSolver<RealMatrix> es(a0, false);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    cd mu = es.eigenvalues()(i);
    if (mu.imag() > 0.0) continue;
    // Poles of M sit where -i omega is an eigenvalue of A(omega); follow the
    // eigenvalue a few steps as A picks up its omega dependence.
    for (int iter = 0; iter < 3 && -mu.imag() > 0.0; ++iter) {
      Eigen::ComplexEigenSolver<ComplexMatrix> ces(m.drift_at(-mu.imag()), false);
      const auto& ev = ces.eigenvalues();
      Eigen::Index best = 0;
      for (Eigen::Index j = 1; j < ev.size(); ++j)
        if (std::abs(ev(j) - mu) < std::abs(ev(best) - mu)) best = j;
      mu = ev(best);
    }
    const double center = std::max(0.0, -mu.imag());
    const double width = std::max(std::abs(mu.real()), 1e-12 * omega_max);
    add(center);
    for (double d = 0.5 * width; d < omega_max; d *= 2.0) {
      add(center + d);
      add(center - d);
    }
  }

  std::sort(pts.begin(), pts.end());
  std::vector<double> unique;
  for (double p : pts)
    if (unique.empty() || p - unique.back() > 1e-13 * std::max(1.0, p)) unique.push_back(p);
  if (unique.back() != omega_max) unique.back() = omega_max;
  return unique;
}

}  // namespace

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0 && rel_tol <= 1e-2))
    throw InvalidArgument("quadrature rel_tol must lie in (0, 1e-2]");
  if (!(std::isfinite(omega_max) && omega_max >= 0.0))
    throw InvalidArgument("quadrature omega_max must be finite and >= 0");
  if (max_panels < 8) throw InvalidArgument("quadrature max_panels must be >= 8");
}

UnstableSystem::UnstableSystem(const StabilityReport& report)
    : Error(ErrorKind::Unstable,
            [&] {
              std::ostringstream os;
              os << "system is unstable: max Re(eig A(0)) = " << report.max_real_eigenvalue;
              if (report.closed_form_margin) os << ", margin = " << *report.closed_form_margin;
              return os.str();
            }()),
      report_(report) {}

double max_system_frequency(const SystemLayout& layout, const SteadyState& steady) {
  double w = std::max(1.0, layout.kappa_c());
  w = std::max(w, std::abs(steady.detuning_eff));
  for (const auto& m : layout.modes) w = std::max(w, m.Omega);
  return w;
}

CovarianceMatrix integrate_covariance(const SpectralMatrices& matrices,
                                      const QuadratureConfig& quad) {
  quad.validate();
  const StabilityReport report = check_stability(matrices.layout(), matrices.steady());
  if (!report.stable) throw UnstableSystem(report);

  const double largest = max_system_frequency(matrices.layout(), matrices.steady());
  const double omega_max = quad.omega_max > 0.0 ? quad.omega_max : 100.0 * largest;
  if (omega_max <= largest)
    throw InvalidArgument("quadrature omega_max must exceed the largest system frequency");

  Integrand f(matrices, omega_max, quad.mirror_check);
  std::vector<Panel> heap;
  const std::vector<double> edges = seed_breakpoints(matrices, omega_max);
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    heap.push_back(integrate_panel(f, edges[i], edges[i + 1], false));
  for (const auto& [a, b] : {std::pair{0.0, 0.25}, {0.25, 0.5}, {0.5, 1.0}})
    heap.push_back(integrate_panel(f, a, b, true));
  std::make_heap(heap.begin(), heap.end(), ByError{});

  const std::size_t dim = matrices.dimension();
  ComplexMatrix total = ComplexMatrix::Zero(dim, dim);
  double error = 0.0;
  for (const auto& p : heap) {
    total += p.value;
    error += p.error;
  }

  std::vector<Panel> finished;  // panels too narrow to split further
  double stuck_error = 0.0;
  auto tolerance = [&] { return quad.rel_tol * total.real().diagonal().cwiseAbs().maxCoeff(); };

  while (!heap.empty() && heap.size() + finished.size() < quad.max_panels) {
    if (error + stuck_error <= tolerance()) {
      // Incremental sums drift; confirm against a fresh sum before stopping.
      total.setZero();
      error = 0.0;
      for (const auto& p : heap) {
        total += p.value;
        error += p.error;
      }
      for (const auto& p : finished) total += p.value;
      if (error + stuck_error <= tolerance()) break;
    }
    if (stuck_error > tolerance()) break;

    std::pop_heap(heap.begin(), heap.end(), ByError{});
    Panel worst = std::move(heap.back());
    heap.pop_back();
    total -= worst.value;
    error -= worst.error;

    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b) ||
        worst.b - worst.a <= 1e-14 * std::max(1.0, std::abs(worst.a))) {
      total += worst.value;
      stuck_error += worst.error;
      finished.push_back(std::move(worst));
      continue;
    }
    for (auto&& child : {integrate_panel(f, worst.a, mid, worst.tail),
                         integrate_panel(f, mid, worst.b, worst.tail)}) {
      total += child.value;
      error += child.error;
      heap.push_back(child);
      std::push_heap(heap.begin(), heap.end(), ByError{});
    }
  }

  // Deterministic final reduction in domain order.
  std::vector<Panel> all = std::move(heap);
  for (auto& p : finished) all.push_back(std::move(p));
  std::sort(all.begin(), all.end(), [](const Panel& l, const Panel& r) {
    return l.tail != r.tail ? !l.tail : l.a < r.a;
  });
  total.setZero();
  error = 0.0;
  for (const auto& p : all) {
    total += p.value;
    error += p.error;
  }

  const double norm = 1.0 / (2.0 * constants::pi);
  const ComplexMatrix v = norm * total;
  CovarianceMatrix out;
  out.entries = 0.5 * (v.real() + v.real().transpose());
  out.imag_residue = v.imag().cwiseAbs().maxCoeff();
  out.error_estimate = norm * error;
  out.converged = error <= tolerance() * (1.0 + 1e-12);
  out.panels = all.size();
  out.evaluations = f.evaluations();
  return out;
}

}  // namespace optomech
