// Husimi Q(theta, phi) = |<theta, phi | psi>|^2 sampled on a Bloch-sphere grid.
#pragma once

#include "oats/echo.hpp"

#include <vector>

namespace oats {

enum class HusimiScale {
  peak,               // max value 1
  quasi_probability,  // (N+1)/(4 pi) |<theta,phi|psi>|^2, integrates to 1 over the sphere
};

template <typename Real>
struct HusimiGrid {
  std::vector<Real> theta;  // uniform over [0, pi], endpoints included
  std::vector<Real> phi;    // uniform over [0, 2 pi), half open
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> values;  // theta x phi
  HusimiScale scale;
  int atom_count;

  Eigen::Index theta_index_nearest(Real target) const {
    Eigen::Index best = 0;
    for (std::size_t i = 1; i < theta.size(); ++i) {
      if (std::abs(theta[i] - target) < std::abs(theta[best] - target)) best = Eigen::Index(i);
    }
    return best;
  }

  Real phi_step() const { return 2 * std::numbers::pi_v<Real> / Real(phi.size()); }
  Real theta_step() const { return std::numbers::pi_v<Real> / Real(theta.size() - 1); }
};

namespace detail {

template <typename Real>
void check_grid_shape(int n_theta, int n_phi) {
  if (n_theta < 2 || n_phi < 2) throw PreconditionViolation("Husimi grid needs at least 2 x 2 samples");
}

// |<theta, phi|psi>|^2 for every phi of one theta row.
// <theta,phi|psi> = sum_i w_i(theta) psi_i e^{-i phi (N - i)}, a polynomial in e^{-i phi}.
template <typename Real>
Eigen::Matrix<Real, 1, Eigen::Dynamic> husimi_row(int atom_count, const AmplitudeVector<Real>& psi, Real theta,
                                              const std::vector<Real>& phis) {
  Eigen::Matrix<Real, 1, Eigen::Dynamic> row(Eigen::Index(phis.size()));
  const auto w = css_magnitudes<Real>(atom_count, theta);
  AmplitudeVector<Real> coeffs = w.template cast<Complex<Real>>().cwiseProduct(psi);
  for (std::size_t j = 0; j < phis.size(); ++j) {
    const Complex<Real> z = std::polar(Real(1), -phis[j]);
    // Horner in z over powers N - i, i.e. starting from i = 0 (highest power).
    Complex<Real> acc = 0;
    for (int i = 0; i <= atom_count; ++i) acc = acc * z + coeffs(i);
    row(Eigen::Index(j)) = std::norm(acc);
  }
  return row;
}

template <typename Real>
HusimiGrid<Real> empty_grid(int atom_count, int n_theta, int n_phi, HusimiScale scale) {
  check_grid_shape<Real>(n_theta, n_phi);
  HusimiGrid<Real> grid;
  grid.atom_count = atom_count;
  grid.scale = scale;
  grid.theta.resize(std::size_t(n_theta));
  grid.phi.resize(std::size_t(n_phi));
  for (int i = 0; i < n_theta; ++i) grid.theta[std::size_t(i)] = std::numbers::pi_v<Real> * Real(i) / Real(n_theta - 1);
  for (int j = 0; j < n_phi; ++j) grid.phi[std::size_t(j)] = 2 * std::numbers::pi_v<Real> * Real(j) / Real(n_phi);
  grid.values = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>::Zero(n_theta, n_phi);
  return grid;
}

template <typename Real>
void finish_scale(HusimiGrid<Real>& grid, Real squared_norm) {
  if (grid.scale == HusimiScale::peak) {
    const Real peak = grid.values.maxCoeff();
    if (peak <= Real(0)) throw PreconditionViolation("Husimi distribution of a zero state");
    grid.values /= peak;
  } else {
    grid.values *= Real(grid.atom_count + 1) / (4 * std::numbers::pi_v<Real> * squared_norm);
  }
}

}  // namespace detail

template <typename Real>
HusimiGrid<Real> husimi_grid(const CollectiveSpinState<Real>& state, int n_theta = 181, int n_phi = 360,
                             HusimiScale scale = HusimiScale::peak) {
  const Real sq = state.amplitudes().squaredNorm();
  if (sq == Real(0)) throw PreconditionViolation("Husimi distribution of a zero-norm state");
  auto grid = detail::empty_grid<Real>(state.atom_count(), n_theta, n_phi, scale);
  for (int i = 0; i < n_theta; ++i) {
    grid.values.row(i) = detail::husimi_row<Real>(state.atom_count(), state.amplitudes(), grid.theta[std::size_t(i)], grid.phi);
  }
  detail::finish_scale(grid, sq);
  return grid;
}

// Q of the target state conditioned on one control row, renormalized.
template <typename Real>
HusimiGrid<Real> husimi_grid(const BipartiteState<Real>& state, Eigen::Index control_row, int n_theta = 181,
                             int n_phi = 360, HusimiScale scale = HusimiScale::peak) {
  if (control_row < 0 || control_row > state.control_count()) throw PreconditionViolation("control row out of range");
  if (state.amplitudes().row(control_row).squaredNorm() == Real(0)) {
    throw PreconditionViolation("control branch has zero weight");
  }
  return husimi_grid(state.conditional_target(control_row), n_theta, n_phi, scale);
}

// Q of the target's reduced state: branch-weighted sum over control rows.
template <typename Real>
HusimiGrid<Real> marginal_husimi_grid(const BipartiteState<Real>& state, int n_theta = 181, int n_phi = 360,
                                      HusimiScale scale = HusimiScale::peak) {
  const Real sq = state.amplitudes().squaredNorm();
  if (sq == Real(0)) throw PreconditionViolation("Husimi distribution of a zero-norm state");
  auto grid = detail::empty_grid<Real>(state.target_count(), n_theta, n_phi, scale);
  for (Eigen::Index r = 0; r < state.amplitudes().rows(); ++r) {
    const AmplitudeVector<Real> row = state.amplitudes().row(r).transpose();
    if (row.squaredNorm() == Real(0)) continue;
    for (int i = 0; i < n_theta; ++i) {
      grid.values.row(i) += detail::husimi_row<Real>(state.target_count(), row, grid.theta[std::size_t(i)], grid.phi);
    }
  }
  detail::finish_scale(grid, sq);
  return grid;
}

template <typename Real>
struct PerimeterCircle {
  BlochDirection<Real> center;
  Real angular_radius;

  bool contains(const BlochDirection<Real>& d) const { return center.angle_to(d) <= angular_radius; }
};

// Circle on which a CSS's Q drops to e^{-2} of its peak: cos^{2N}(gamma/2) = e^{-2}.
template <typename Real>
PerimeterCircle<Real> css_perimeter(int atom_count, const BlochDirection<Real>& center) {
  if (atom_count < 1) throw PreconditionViolation("perimeter needs at least one atom");
  return {center, 2 * std::acos(std::exp(-Real(1) / Real(atom_count)))};
}

// Cyclic strict local maxima of the row nearest theta = pi/2, above 1% of the grid maximum.
template <typename Real>
std::vector<Real> equatorial_maxima(const HusimiGrid<Real>& grid, Real floor_fraction = Real(0.01)) {
  const Eigen::Index row = grid.theta_index_nearest(std::numbers::pi_v<Real> / 2);
  const Real floor = floor_fraction * grid.values.maxCoeff();
  const Eigen::Index n = grid.values.cols();
  std::vector<Real> out;
  for (Eigen::Index j = 0; j < n; ++j) {
    const Real v = grid.values(row, j);
    const Real left = grid.values(row, (j + n - 1) % n);
    const Real right = grid.values(row, (j + 1) % n);
    if (v > left && v > right && v > floor) out.push_back(grid.phi[std::size_t(j)]);
  }
  return out;
}

using Husimi = HusimiGrid<double>;

}  // namespace oats
