#include <Eigen/Eigenvalues>
#include <complex>

#include "optomech/solver.hpp"

namespace optomech {

CovarianceMatrix lyapunov_oracle(const RealMatrix& a, const RealMatrix& d) {
  const Eigen::Index n = a.rows();
  if (a.cols() != n || d.rows() != n || d.cols() != n)
    throw InvalidArgument("lyapunov_oracle: A and D must be square and of equal size");

  Eigen::ComplexSchur<ComplexMatrix> schur(a.cast<std::complex<double>>());
  if (schur.info() != Eigen::Success) throw UnphysicalInput("Schur decomposition failed");
  const ComplexMatrix& t = schur.matrixT();
  const ComplexMatrix& u = schur.matrixU();
  for (Eigen::Index i = 0; i < n; ++i)
    if (!(t(i, i).real() < 0.0))
      throw UnphysicalInput("lyapunov_oracle: A is not Hurwitz");

  // With A = U T U^H and Y = U^H V U the equation becomes T Y + Y T^H = C,
  // solved entrywise from the bottom-right corner.
  const ComplexMatrix c = -(u.adjoint() * d.cast<std::complex<double>>() * u);
  ComplexMatrix y = ComplexMatrix::Zero(n, n);
  for (Eigen::Index j = n - 1; j >= 0; --j) {
    for (Eigen::Index i = n - 1; i >= 0; --i) {
      std::complex<double> rhs = c(i, j);
      for (Eigen::Index k = i + 1; k < n; ++k) rhs -= t(i, k) * y(k, j);
      for (Eigen::Index k = j + 1; k < n; ++k) rhs -= y(i, k) * std::conj(t(j, k));
      y(i, j) = rhs / (t(i, i) + std::conj(t(j, j)));
    }
  }

  const ComplexMatrix v = u * y * u.adjoint();
  CovarianceMatrix out;
  out.imag_residue = v.imag().cwiseAbs().maxCoeff();
  out.entries = 0.5 * (v.real() + v.real().transpose());
  return out;
}

}  // namespace optomech
