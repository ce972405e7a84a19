// Shared fixtures for the test binaries.
#ifndef OPTOMECH_TESTS_SUPPORT_HPP
#define OPTOMECH_TESTS_SUPPORT_HPP

#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "optomech/dynamics.hpp"
#include "optomech/model.hpp"

namespace testing {

// Table 1 mirror and cavity; rates passed in units of omega_m.
inline optomech::PhysicalParams table1(double kappa1, double kappa2, double power) {
  optomech::PhysicalParams p;
  p.omega_m = 2.0 * optomech::constants::pi * 20e6;
  p.Q_m = 1e5;
  p.mass = 5e-12;
  p.cavity_length = 1e-3;
  p.laser_wavelength = 810e-9;
  p.bath_temperature = 4e-3;
  p.kappa1 = kappa1 * p.omega_m;
  p.kappa2 = kappa2 * p.omega_m;
  p.laser_power = power;
  return p;
}

inline optomech::ElasticSource figure_source(double chi = 0.13, double tau = 37.0 / 20.0) {
  optomech::ElasticSource s;
  s.omega_base = 1.0 / 37.0;
  s.chi = chi;
  s.tau_th = tau;
  return s;
}

struct Point {
  optomech::SystemLayout layout;
  optomech::SteadyState steady;
};

inline Point make_point(const optomech::PhysicalParams& p, const optomech::ElasticSource& s,
                        std::vector<int> indices, double detuning, bool include_com = true) {
  optomech::LayoutOptions opt;
  opt.include_com = include_com;
  Point out;
  out.layout = optomech::derive_couplings(p, s, indices, opt);
  out.steady = optomech::steady_state(p, out.layout, detuning);
  return out;
}

// Elementary symplectic maps on two modes in (q1, p1, q2, p2) order.
inline Eigen::Matrix4d local_squeeze(int mode, double r, double theta) {
  Eigen::Matrix2d rot;
  rot << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
  Eigen::Matrix2d sq = Eigen::Vector2d(std::exp(r), std::exp(-r)).asDiagonal();
  Eigen::Matrix4d s = Eigen::Matrix4d::Identity();
  s.block<2, 2>(2 * mode, 2 * mode) = rot * sq * rot.transpose();
  return s;
}

inline Eigen::Matrix4d beam_splitter(double theta) {
  const double c = std::cos(theta), s = std::sin(theta);
  Eigen::Matrix4d b = Eigen::Matrix4d::Zero();
  b.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
  b.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
  b.block<2, 2>(0, 2) = s * Eigen::Matrix2d::Identity();
  b.block<2, 2>(2, 0) = -s * Eigen::Matrix2d::Identity();
  return b;
}

inline Eigen::Matrix4d two_mode_squeeze(double r) {
  const double c = std::cosh(r), s = std::sinh(r);
  Eigen::Matrix4d t = Eigen::Matrix4d::Zero();
  t.block<2, 2>(0, 0) = c * Eigen::Matrix2d::Identity();
  t.block<2, 2>(2, 2) = c * Eigen::Matrix2d::Identity();
  Eigen::Matrix2d z = Eigen::Vector2d(1.0, -1.0).asDiagonal();
  t.block<2, 2>(0, 2) = s * z;
  t.block<2, 2>(2, 0) = s * z;
  return t;
}

inline Eigen::Matrix4d tmsv(double r) {
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  v.diagonal().setConstant(std::cosh(2 * r) / 2);
  v(0, 2) = v(2, 0) = std::sinh(2 * r) / 2;
  v(1, 3) = v(3, 1) = -std::sinh(2 * r) / 2;
  return v;
}

// Williamson form S diag(nu1, nu1, nu2, nu2) S^T with a random symplectic S.
inline Eigen::Matrix4d random_physical(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Eigen::Matrix4d v = Eigen::Matrix4d::Zero();
  const double nu1 = 0.5 + 2.0 * u(rng) * u(rng), nu2 = 0.5 + 2.0 * u(rng) * u(rng);
  v.diagonal() << nu1, nu1, nu2, nu2;
  const double pi = optomech::constants::pi;
  Eigen::Matrix4d s = local_squeeze(0, u(rng) - 0.5, pi * u(rng)) *
                      beam_splitter(pi * u(rng)) * two_mode_squeeze(1.2 * u(rng)) *
                      local_squeeze(1, u(rng) - 0.5, pi * u(rng)) *
                      beam_splitter(pi * u(rng));
  return s * v * s.transpose();
}

}  // namespace testing

#endif  // OPTOMECH_TESTS_SUPPORT_HPP
