#include "optomech/measures.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <cmath>

#include "optomech/error.hpp"

namespace optomech {

namespace {

void check_rows(const RealMatrix& v, const ModeSelector& m) {
  if (v.rows() != v.cols()) throw InvalidArgument("covariance matrix must be square");
  if (m.p_row != m.q_row + 1 || m.p_row >= static_cast<std::size_t>(v.rows()))
    throw InvalidArgument("mode selector rows out of range for a " +
                          std::to_string(v.rows()) + "x" + std::to_string(v.cols()) +
                          " covariance matrix");
}

double det2(const Eigen::Matrix2d& m) { return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0); }

}  // namespace

ModeSelector ModeSelector::com(const Basis& basis) {
  if (!basis.has_com()) throw InvalidArgument("layout has no CoM mode");
  return {ModeKind::Com, 0, basis.com_q(), basis.com_p()};
}

ModeSelector ModeSelector::cavity(const Basis& basis) {
  return {ModeKind::Cavity, 0, basis.cavity_x(), basis.cavity_y()};
}

ModeSelector ModeSelector::elastic(const Basis& basis, std::size_t slot) {
  if (slot >= basis.elastic_count())
    throw InvalidArgument("elastic slot " + std::to_string(slot) + " out of range");
  return {ModeKind::Elastic, slot, basis.elastic_q(slot), basis.elastic_p(slot)};
}

std::string ModeSelector::label() const {
  switch (kind) {
    case ModeKind::Com: return "com";
    case ModeKind::Cavity: return "cav";
    case ModeKind::Elastic: return "el" + std::to_string(slot + 1);
  }
  return "?";
}

std::vector<ModeSelector> mechanical_modes(const Basis& basis) {
  std::vector<ModeSelector> out;
  if (basis.has_com()) out.push_back(ModeSelector::com(basis));
  for (std::size_t k = 0; k < basis.elastic_count(); ++k)
    out.push_back(ModeSelector::elastic(basis, k));
  return out;
}

std::vector<std::pair<ModeSelector, ModeSelector>> bipartitions(const Basis& basis) {
  std::vector<ModeSelector> all;
  if (basis.has_com()) all.push_back(ModeSelector::com(basis));
  all.push_back(ModeSelector::cavity(basis));
  for (std::size_t k = 0; k < basis.elastic_count(); ++k)
    all.push_back(ModeSelector::elastic(basis, k));
  std::vector<std::pair<ModeSelector, ModeSelector>> out;
  for (std::size_t i = 0; i < all.size(); ++i)
    for (std::size_t j = i + 1; j < all.size(); ++j) out.emplace_back(all[i], all[j]);
  return out;
}

double phonon_number(const RealMatrix& v, const ModeSelector& mode) {
  if (mode.kind == ModeKind::Cavity)
    throw InvalidArgument("phonon_number is defined for mechanical modes only");
  check_rows(v, mode);
  return 0.5 * (v(mode.q_row, mode.q_row) + v(mode.p_row, mode.p_row) - 1.0);
}

Eigen::Matrix4d reduce(const RealMatrix& v, const ModeSelector& a, const ModeSelector& b) {
  check_rows(v, a);
  check_rows(v, b);
  if (a.q_row == b.q_row) throw InvalidArgument("reduce needs two distinct modes");
  const std::array<std::size_t, 4> rows = {a.q_row, a.p_row, b.q_row, b.p_row};
  Eigen::Matrix4d out;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) out(i, j) = v(rows[i], rows[j]);
  return out;
}

NegativityResult log_negativity(const Eigen::Matrix4d& v4) {
  const Eigen::Matrix2d a = v4.topLeftCorner<2, 2>();
  const Eigen::Matrix2d b = v4.bottomRightCorner<2, 2>();
  const Eigen::Matrix2d c = v4.topRightCorner<2, 2>();
  const double sigma = det2(a) + det2(b) - 2.0 * det2(c);
  const double det = v4.determinant();
  double disc = sigma * sigma - 4.0 * det;
  if (disc < -1e-9 * sigma * sigma)
    throw UnphysicalInput("partial-transpose discriminant is negative: covariance is unphysical");
  disc = std::max(disc, 0.0);
  const double eta2 = 0.5 * (sigma - std::sqrt(disc));
  if (!(eta2 > 0.0))
    throw UnphysicalInput("partial-transpose symplectic eigenvalue is not positive");
  NegativityResult r;
  r.eta_minus = std::sqrt(eta2);
  r.log_neg = std::max(0.0, -std::log(2.0 * r.eta_minus));
  return r;
}

double partial_transpose_eta(const Eigen::Matrix4d& v4) {
  const Eigen::Vector4d flip(1.0, 1.0, 1.0, -1.0);
  const RealMatrix transposed = flip.asDiagonal() * v4 * flip.asDiagonal();
  return symplectic_spectrum(transposed).front();
}

BipartitionResult bipartition(const RealMatrix& v, const ModeSelector& a,
                              const ModeSelector& b) {
  const auto r = log_negativity(reduce(v, a, b));
  return {{a, b}, r.eta_minus, r.log_neg};
}

RealMatrix symplectic_form(std::size_t modes) {
  RealMatrix omega = RealMatrix::Zero(2 * modes, 2 * modes);
  for (std::size_t k = 0; k < modes; ++k) {
    omega(2 * k, 2 * k + 1) = 1.0;
    omega(2 * k + 1, 2 * k) = -1.0;
  }
  return omega;
}

std::vector<double> symplectic_spectrum(const RealMatrix& v) {
  if (v.rows() != v.cols() || v.rows() % 2 != 0)
    throw InvalidArgument("symplectic_spectrum needs a square matrix of even size");
  const double scale = std::max(1.0, v.cwiseAbs().maxCoeff());
  if ((v - v.transpose()).cwiseAbs().maxCoeff() > 1e-9 * scale)
    throw InvalidArgument("symplectic_spectrum needs a symmetric matrix");

  const std::size_t modes = static_cast<std::size_t>(v.rows()) / 2;
  Eigen::EigenSolver<RealMatrix> es(symplectic_form(modes) * v, false);
  std::vector<double> moduli;
  moduli.reserve(2 * modes);
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i)
    moduli.push_back(std::abs(es.eigenvalues()(i)));
  std::sort(moduli.begin(), moduli.end());
  // Eigenvalues come in pairs +-i nu; report each nu once.
  std::vector<double> nu(modes);
  for (std::size_t k = 0; k < modes; ++k) nu[k] = 0.5 * (moduli[2 * k] + moduli[2 * k + 1]);
  return nu;
}

}  // namespace optomech
