// One-axis-twist propagators and the squeeze / target-only unsqueeze echo.
#pragma once

#include "oats/spin_state.hpp"

#include <Eigen/SVD>

namespace oats {

// Joint state of a control group (N' atoms, rows) and a target group
// (N atoms, columns), both in ascending m order.
template <typename Real>
class BipartiteState {
 public:
  BipartiteState(int control_count, int target_count, ComplexMatrix<Real> amplitudes,
                 Normalization normalization = Normalization::normalized)
      : control_count_(control_count),
        target_count_(target_count),
        amplitudes_(std::move(amplitudes)),
        normalization_(normalization) {
    if (control_count_ < 0 || target_count_ < 0) throw PreconditionViolation("atom counts must be non-negative");
    if (amplitudes_.rows() != control_count_ + 1 || amplitudes_.cols() != target_count_ + 1) {
      throw DimensionMismatch("bipartite amplitude matrix must be (N'+1) x (N+1)");
    }
    if (normalization_ == Normalization::normalized &&
        std::abs(amplitudes_.squaredNorm() - Real(1)) > Real(kNormTolerance)) {
      throw PreconditionViolation("bipartite state labelled normalized has squared norm " +
                                  std::to_string(static_cast<double>(amplitudes_.squaredNorm())));
    }
  }

  static BipartiteState product(const CollectiveSpinState<Real>& control, const CollectiveSpinState<Real>& target) {
    return BipartiteState(control.atom_count(), target.atom_count(),
                          control.amplitudes() * target.amplitudes().transpose(),
                          control.is_normalized() && target.is_normalized() ? Normalization::normalized
                                                                            : Normalization::unnormalized);
  }

  int control_count() const { return control_count_; }
  int target_count() const { return target_count_; }
  const ComplexMatrix<Real>& amplitudes() const { return amplitudes_; }
  bool is_normalized() const { return normalization_ == Normalization::normalized; }

  Real control_m(Eigen::Index row) const { return Real(row) - Real(control_count_) / 2; }
  Real target_m(Eigen::Index col) const { return Real(col) - Real(target_count_) / 2; }

  // Probability of finding the control group at the given row (S~_z level).
  Real branch_weight(Eigen::Index row) const { return amplitudes_.row(row).squaredNorm() / amplitudes_.squaredNorm(); }

  // Renormalized target state conditioned on the control row.
  CollectiveSpinState<Real> conditional_target(Eigen::Index row) const {
    const AmplitudeVector<Real> t = amplitudes_.row(row).transpose();
    return CollectiveSpinState<Real>(target_count_, t, Normalization::unnormalized).normalized();
  }

 private:
  int control_count_;
  int target_count_;
  ComplexMatrix<Real> amplitudes_;
  Normalization normalization_;
};

// Propagator exp(-i sign mu S_z^2); sign = -1 is the unsqueezing step.
template <typename Real>
struct SqueezingSpec {
  SqueezingSpec(Real mu_, int sign_ = +1) : mu(mu_), sign(sign_) {
    if (sign != 1 && sign != -1) throw PreconditionViolation("squeezing sign must be +1 or -1");
  }

  Real mu;
  int sign;

  SqueezingSpec inverse() const { return {mu, -sign}; }
};

template <typename Real>
CollectiveSpinState<Real> apply_oats(const CollectiveSpinState<Real>& state, const SqueezingSpec<Real>& spec) {
  if (!state.is_normalized()) throw PreconditionViolation("apply_oats expects a normalized state");
  AmplitudeVector<Real> a = state.amplitudes();
  for (Eigen::Index i = 0; i < a.size(); ++i) {
    const Real m = state.m_value(i);
    a(i) *= std::polar(Real(1), -Real(spec.sign) * spec.mu * m * m);
  }
  return CollectiveSpinState<Real>(state.atom_count(), std::move(a));
}

namespace detail {

template <typename Real, typename PhaseFn>
BipartiteState<Real> apply_diagonal(const BipartiteState<Real>& state, PhaseFn phase) {
  if (!state.is_normalized()) throw PreconditionViolation("diagonal propagator expects a normalized state");
  ComplexMatrix<Real> a = state.amplitudes();
  for (Eigen::Index c = 0; c < a.cols(); ++c) {
    for (Eigen::Index r = 0; r < a.rows(); ++r) a(r, c) *= std::polar(Real(1), phase(state.control_m(r), state.target_m(c)));
  }
  return BipartiteState<Real>(state.control_count(), state.target_count(), std::move(a));
}

}  // namespace detail

// exp(-i sign mu (S_z + S~_z)^2) on both groups.
template <typename Real>
BipartiteState<Real> apply_joint_oats(const BipartiteState<Real>& state, const SqueezingSpec<Real>& spec) {
  return detail::apply_diagonal(state, [&](Real mc, Real mt) { return -Real(spec.sign) * spec.mu * (mc + mt) * (mc + mt); });
}

// exp(-i sign mu S_z^2) on the target group only.
template <typename Real>
BipartiteState<Real> apply_target_oats(const BipartiteState<Real>& state, const SqueezingSpec<Real>& spec) {
  return detail::apply_diagonal(state, [&](Real, Real mt) { return -Real(spec.sign) * spec.mu * mt * mt; });
}

// exp(-i 2 mu S_z S~_z) exp(-i mu S~_z^2): the echo propagator after
// commuting S_z past S~_z.
template <typename Real>
BipartiteState<Real> apply_echo_rearranged(const BipartiteState<Real>& state, Real mu) {
  return detail::apply_diagonal(state, [&](Real mc, Real mt) { return -2 * mu * mt * mc - mu * mc * mc; });
}

// Squeeze both groups, then unsqueeze the target alone.
template <typename Real>
BipartiteState<Real> echo(const BipartiteState<Real>& state, Real mu) {
  return apply_target_oats(apply_joint_oats(state, SqueezingSpec<Real>(mu, +1)), SqueezingSpec<Real>(mu, -1));
}

template <typename Real>
BipartiteState<Real> echo_protocol(const CollectiveSpinState<Real>& control, const CollectiveSpinState<Real>& target,
                                   Real mu) {
  if (!control.is_normalized() || !target.is_normalized()) {
    throw PreconditionViolation("echo_protocol expects normalized inputs");
  }
  return echo(BipartiteState<Real>::product(control, target), mu);
}

// The echo output written branch by branch: control level m~ carries the
// phase exp(-i mu m~ (N + m~)) and the target CSS turned azimuthally by 2 m~ mu.
template <typename Real>
BipartiteState<Real> closed_form_final(const CollectiveSpinState<Real>& control, const BlochDirection<Real>& target_direction,
                                       int target_count, Real mu) {
  if (!control.is_normalized()) throw PreconditionViolation("control coefficients must be normalized");
  ComplexMatrix<Real> a(control.dimension(), target_count + 1);
  for (Eigen::Index r = 0; r < control.dimension(); ++r) {
    const Real m = control.m_value(r);
    const Complex<Real> phase = std::polar(Real(1), -mu * m * (Real(target_count) + m));
    const BlochDirection<Real> turned(target_direction.theta(), target_direction.phi() + 2 * m * mu);
    a.row(r) = (control[r] * phase) * make_css(target_count, turned).amplitudes().transpose();
  }
  return BipartiteState<Real>(control.atom_count(), target_count, std::move(a));
}

// Rotation acting on one factor of a bipartite state.
template <typename Real>
BipartiteState<Real> rotate_target(const BipartiteState<Real>& state, const RotationSpec<Real>& rotation) {
  const ComplexMatrix<Real> u = rotation_matrix(state.target_count(), rotation);
  return BipartiteState<Real>(state.control_count(), state.target_count(), state.amplitudes() * u.transpose());
}

template <typename Real>
BipartiteState<Real> rotate_control(const BipartiteState<Real>& state, const RotationSpec<Real>& rotation) {
  const ComplexMatrix<Real> u = rotation_matrix(state.control_count(), rotation);
  return BipartiteState<Real>(state.control_count(), state.target_count(), u * state.amplitudes());
}

// Number of Schmidt coefficients above the tolerance.
template <typename Real>
int schmidt_rank(const BipartiteState<Real>& state, Real tolerance) {
  Eigen::JacobiSVD<ComplexMatrix<Real>> svd(state.amplitudes());
  const auto& s = svd.singularValues();
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) rank += s(i) > tolerance ? 1 : 0;
  return rank;
}

using Bipartite = BipartiteState<double>;
using Squeezing = SqueezingSpec<double>;

}  // namespace oats
