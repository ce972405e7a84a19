#ifndef OPTOMECH_MEASURES_HPP
#define OPTOMECH_MEASURES_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "optomech/dynamics.hpp"
#include "optomech/solver.hpp"

namespace optomech {

enum class ModeKind { Com, Elastic, Cavity };

/// One bosonic mode of the covariance matrix: its (q, p) rows.
struct ModeSelector {
  ModeKind kind = ModeKind::Com;
  std::size_t slot = 0;  ///< elastic slot (position in the layout), else 0
  std::size_t q_row = 0;
  std::size_t p_row = 1;

  static ModeSelector com(const Basis& basis);
  static ModeSelector cavity(const Basis& basis);
  static ModeSelector elastic(const Basis& basis, std::size_t slot);

  /// "com", "cav", "el1", "el2", ...
  std::string label() const;
};

/// All mechanical modes of the basis, CoM first.
std::vector<ModeSelector> mechanical_modes(const Basis& basis);
/// Every unordered pair of modes in basis order: (com,cav), (com,el1), (cav,el1), ...
std::vector<std::pair<ModeSelector, ModeSelector>> bipartitions(const Basis& basis);

/// Effective occupancy (V_qq + V_pp - 1) / 2 of a mechanical mode.
double phonon_number(const RealMatrix& v, const ModeSelector& mode);

/// 4x4 principal submatrix in (q_a, p_a, q_b, p_b) order.
Eigen::Matrix4d reduce(const RealMatrix& v, const ModeSelector& a, const ModeSelector& b);

struct NegativityResult {
  double eta_minus = 0.0;
  double log_neg = 0.0;
};

struct BipartitionResult {
  std::pair<ModeSelector, ModeSelector> pair;
  double eta_minus = 0.0;
  double log_neg = 0.0;
};

/// Smallest symplectic eigenvalue of the partial transpose from the
/// invariant formula, and E_N = max(0, -ln 2 eta). Throws UnphysicalInput when
/// the discriminant is negative beyond round-off.
NegativityResult log_negativity(const Eigen::Matrix4d& v4);

/// The same eta_minus computed from the spectrum of i Omega V with p_b -> -p_b.
double partial_transpose_eta(const Eigen::Matrix4d& v4);

BipartitionResult bipartition(const RealMatrix& v, const ModeSelector& a,
                              const ModeSelector& b);

/// Symplectic eigenvalues (moduli of the eigenvalues of i Omega V), ascending,
/// one per mode. Omega is block diagonal with [[0, 1], [-1, 0]] per (q, p) pair.
std::vector<double> symplectic_spectrum(const RealMatrix& v);

/// Block-diagonal symplectic form for the given number of modes.
RealMatrix symplectic_form(std::size_t modes);

}  // namespace optomech

#endif  // OPTOMECH_MEASURES_HPP
