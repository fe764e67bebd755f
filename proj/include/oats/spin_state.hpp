// Collective spin states of N two-level atoms restricted to the symmetric
// (maximal total spin) Dicke subspace.
//
// Amplitudes are stored in ascending m order: index i carries
// m = i - N/2, so index 0 is |m = -N/2> (all atoms down) and index N is
// |m = +N/2> (all atoms up).
#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>

namespace oats {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionMismatch : public Error {
 public:
  using Error::Error;
};

class PreconditionViolation : public Error {
 public:
  using Error::Error;
};

inline constexpr double kNormTolerance = 1e-12;

template <typename Real>
using Complex = std::complex<Real>;

template <typename Real>
using AmplitudeVector = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, 1>;

template <typename Real>
using ComplexMatrix = Eigen::Matrix<Complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Real>
using Vector3 = Eigen::Matrix<Real, 3, 1>;

// Reduces an angle into [0, period).
template <typename Real>
Real reduce_angle(Real angle, Real period) {
  Real r = std::fmod(angle, period);
  if (r < Real(0)) r += period;
  if (r >= period) r -= period;
  return r;
}

// Smallest cyclic distance between two azimuths.
template <typename Real>
Real azimuth_distance(Real a, Real b) {
  const Real d = reduce_angle(a - b, 2 * std::numbers::pi_v<Real>);
  return std::min(d, 2 * std::numbers::pi_v<Real> - d);
}

template <typename Real>
class BlochDirection {
 public:
  BlochDirection(Real theta, Real phi) : theta_(theta), phi_(reduce_angle(phi, two_pi())) {
    const Real slack = Real(1e-12);
    if (!(theta >= -slack && theta <= std::numbers::pi_v<Real> + slack)) {
      throw PreconditionViolation("polar angle must lie in [0, pi]");
    }
    theta_ = std::clamp(theta, Real(0), std::numbers::pi_v<Real>);
  }

  static BlochDirection from_vector(const Vector3<Real>& v) {
    const Real norm = v.norm();
    if (norm == Real(0)) throw PreconditionViolation("zero Bloch vector has no direction");
    const Real z = std::clamp(v.z() / norm, Real(-1), Real(1));
    return BlochDirection(std::acos(z), std::atan2(v.y(), v.x()));
  }

  Real theta() const { return theta_; }
  Real phi() const { return phi_; }

  Vector3<Real> unit_vector() const {
    return {std::sin(theta_) * std::cos(phi_), std::sin(theta_) * std::sin(phi_), std::cos(theta_)};
  }

  // Great-circle angle to another direction.
  Real angle_to(const BlochDirection& other) const {
    const Vector3<Real> a = unit_vector();
    const Vector3<Real> b = other.unit_vector();
    return std::atan2(a.cross(b).norm(), a.dot(b));
  }

 private:
  static constexpr Real two_pi() { return 2 * std::numbers::pi_v<Real>; }

  Real theta_;
  Real phi_;
};

enum class Axis { x, y, z };

inline char axis_name(Axis axis) {
  switch (axis) {
    case Axis::x: return 'x';
    case Axis::y: return 'y';
    case Axis::z: return 'z';
  }
  return '?';
}

// exp(-i angle S_axis). The angle is kept modulo 4 pi (spinor period).
template <typename Real>
struct RotationSpec {
  RotationSpec(Axis axis_, Real angle_)
      : axis(axis_), angle(reduce_angle(angle_, 4 * std::numbers::pi_v<Real>)) {}

  Axis axis;
  Real angle;
};

enum class Normalization { normalized, unnormalized };

template <typename Real>
class CollectiveSpinState {
 public:
  CollectiveSpinState(int atom_count, AmplitudeVector<Real> amplitudes,
                      Normalization normalization = Normalization::normalized)
      : atom_count_(atom_count), amplitudes_(std::move(amplitudes)), normalization_(normalization) {
    if (atom_count_ < 0) throw PreconditionViolation("atom count must be non-negative");
    if (amplitudes_.size() != atom_count_ + 1) {
      throw DimensionMismatch("expected " + std::to_string(atom_count_ + 1) + " amplitudes, got " +
                              std::to_string(amplitudes_.size()));
    }
    if (normalization_ == Normalization::normalized &&
        std::abs(amplitudes_.squaredNorm() - Real(1)) > Real(kNormTolerance)) {
      throw PreconditionViolation("state labelled normalized has squared norm " +
                                  std::to_string(static_cast<double>(amplitudes_.squaredNorm())));
    }
  }

  // The Dicke state |m> with 2m = twice_m.
  static CollectiveSpinState dicke(int atom_count, int twice_m) {
    AmplitudeVector<Real> a = AmplitudeVector<Real>::Zero(atom_count + 1);
    a(index_of(atom_count, twice_m)) = Real(1);
    return CollectiveSpinState(atom_count, std::move(a));
  }

  static int index_of(int atom_count, int twice_m) {
    if ((twice_m + atom_count) % 2 != 0 || twice_m < -atom_count || twice_m > atom_count) {
      throw PreconditionViolation("2m = " + std::to_string(twice_m) + " is not a level of " +
                                  std::to_string(atom_count) + " atoms");
    }
    return (twice_m + atom_count) / 2;
  }

  int atom_count() const { return atom_count_; }
  Eigen::Index dimension() const { return amplitudes_.size(); }
  const AmplitudeVector<Real>& amplitudes() const { return amplitudes_; }
  Complex<Real> operator[](Eigen::Index i) const { return amplitudes_(i); }
  bool is_normalized() const { return normalization_ == Normalization::normalized; }

  Real m_value(Eigen::Index i) const { return Real(i) - Real(atom_count_) / 2; }
  int twice_m(Eigen::Index i) const { return 2 * static_cast<int>(i) - atom_count_; }

  Real norm() const { return amplitudes_.norm(); }

  // Rescaled copy labelled normalized.
  CollectiveSpinState normalized() const {
    const Real n = amplitudes_.norm();
    if (n == Real(0)) throw PreconditionViolation("cannot normalize a zero-norm state");
    return CollectiveSpinState(atom_count_, amplitudes_ / n);
  }

  // Relabels as normalized after validating the norm.
  CollectiveSpinState as_normalized() const {
    return CollectiveSpinState(atom_count_, amplitudes_, Normalization::normalized);
  }

 private:
  int atom_count_;
  AmplitudeVector<Real> amplitudes_;
  Normalization normalization_;
};

namespace detail {

// log C(n, k) for k = 0..n by cumulative sums.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> log_binomials(int n) {
  Eigen::Matrix<Real, Eigen::Dynamic, 1> out(n + 1);
  out(0) = Real(0);
  for (int k = 1; k <= n; ++k) out(k) = out(k - 1) + std::log(Real(n - k + 1)) - std::log(Real(k));
  return out;
}

// x^k with the convention 0^0 = 1, evaluated in log space when it helps.
template <typename Real>
Real log_power(Real x, int k) {
  if (k == 0) return Real(0);
  if (x == Real(0)) return -std::numeric_limits<Real>::infinity();
  return Real(k) * std::log(x);
}

}  // namespace detail

// Real magnitudes |c_i| of CSS(theta, .) with atom_count atoms.
template <typename Real>
Eigen::Matrix<Real, Eigen::Dynamic, 1> css_magnitudes(int atom_count, Real theta) {
  const auto log_c = detail::log_binomials<Real>(atom_count);
  const Real c = std::abs(std::cos(theta / 2));
  const Real s = std::abs(std::sin(theta / 2));
  Eigen::Matrix<Real, Eigen::Dynamic, 1> out(atom_count + 1);
  for (int i = 0; i <= atom_count; ++i) {
    const int down = atom_count - i;
    out(i) = std::exp(Real(0.5) * log_c(down) + detail::log_power(c, i) + detail::log_power(s, down));
  }
  return out;
}

// Coherent spin state: every atom in cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>.
template <typename Real>
CollectiveSpinState<Real> make_css(int atom_count, const BlochDirection<Real>& direction) {
  if (atom_count < 0) throw PreconditionViolation("atom count must be non-negative");
  const Real theta = direction.theta();
  const Real phi = direction.phi();
  // theta in [0, pi] keeps cos(theta/2) and sin(theta/2) non-negative.
  const auto mag = css_magnitudes<Real>(atom_count, theta);
  AmplitudeVector<Real> a(atom_count + 1);
  for (int i = 0; i <= atom_count; ++i) a(i) = mag(i) * std::polar(Real(1), Real(atom_count - i) * phi);
  // Normalization holds analytically; renormalize away the rounding.
  return CollectiveSpinState<Real>(atom_count, a / a.norm());
}

template <typename Real>
Complex<Real> inner(const CollectiveSpinState<Real>& a, const CollectiveSpinState<Real>& b) {
  if (a.atom_count() != b.atom_count()) throw DimensionMismatch("inner product of states with different atom counts");
  return a.amplitudes().dot(b.amplitudes());
}

template <typename Real>
Real fidelity(const CollectiveSpinState<Real>& a, const CollectiveSpinState<Real>& b) {
  return std::norm(inner(a, b));
}

// Collective spin operators in the (N+1)-dimensional symmetric subspace.
template <typename Real>
ComplexMatrix<Real> spin_matrix(int atom_count, Axis axis) {
  const Eigen::Index d = atom_count + 1;
  const Real s = Real(atom_count) / 2;
  ComplexMatrix<Real> out = ComplexMatrix<Real>::Zero(d, d);
  for (Eigen::Index i = 0; i < d; ++i) {
    const Real m = Real(i) - s;
    if (axis == Axis::z) {
      out(i, i) = m;
      continue;
    }
    if (i + 1 < d) {
      // <m+1| S_+ |m>
      const Real raise = std::sqrt(s * (s + 1) - m * (m + 1));
      if (axis == Axis::x) {
        out(i + 1, i) = raise / 2;
        out(i, i + 1) = raise / 2;
      } else {
        out(i + 1, i) = Complex<Real>(0, -raise / 2);
        out(i, i + 1) = Complex<Real>(0, raise / 2);
      }
    }
  }
  return out;
}

namespace detail {

// Columns are eigenvectors of S_axis with eigenvalues -N/2, ..., +N/2.
template <typename Real>
std::shared_ptr<const ComplexMatrix<Real>> build_rotation_basis(int atom_count, Axis axis) {
  const Eigen::Index d = atom_count + 1;
  const Real s = Real(atom_count) / 2;
  Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic> sx = spin_matrix<Real>(atom_count, Axis::x).real();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>> solver(sx);
  if (solver.info() != Eigen::Success) throw Error("S_x eigendecomposition failed");
  for (Eigen::Index i = 0; i < d; ++i) {
    if (std::abs(solver.eigenvalues()(i) - (Real(i) - s)) > Real(1e-8)) {
      throw Error("S_x spectrum deviates from the Dicke ladder");
    }
  }
  ComplexMatrix<Real> basis = solver.eigenvectors().template cast<Complex<Real>>();
  if (axis == Axis::y) {
    // S_y = R_z(pi/2) S_x R_z(pi/2)^dagger with R_z(a) = exp(-i a S_z).
    for (Eigen::Index i = 0; i < d; ++i) {
      basis.row(i) *= std::polar(Real(1), -std::numbers::pi_v<Real> / 2 * (Real(i) - s));
    }
  }
  return std::make_shared<const ComplexMatrix<Real>>(std::move(basis));
}

}  // namespace detail

// Eigenbasis of S_x or S_y, built once per (axis, N) and shared read-only.
template <typename Real>
std::shared_ptr<const ComplexMatrix<Real>> rotation_basis(int atom_count, Axis axis) {
  if (axis == Axis::z) throw PreconditionViolation("z rotations are diagonal and need no basis");
  static std::mutex mutex;
  static std::map<std::pair<int, Axis>, std::shared_ptr<const ComplexMatrix<Real>>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[{atom_count, axis}];
  if (!slot) slot = detail::build_rotation_basis<Real>(atom_count, axis);
  return slot;
}

// Dense exp(-i angle S_axis).
template <typename Real>
ComplexMatrix<Real> rotation_matrix(int atom_count, const RotationSpec<Real>& rotation) {
  const Eigen::Index d = atom_count + 1;
  const Real s = Real(atom_count) / 2;
  AmplitudeVector<Real> phases(d);
  for (Eigen::Index i = 0; i < d; ++i) phases(i) = std::polar(Real(1), -rotation.angle * (Real(i) - s));
  if (rotation.axis == Axis::z) return phases.asDiagonal();
  const auto basis = rotation_basis<Real>(atom_count, rotation.axis);
  return (*basis) * phases.asDiagonal() * basis->adjoint();
}

template <typename Real>
AmplitudeVector<Real> rotate_amplitudes(int atom_count, const AmplitudeVector<Real>& amplitudes,
                                        const RotationSpec<Real>& rotation) {
  const Real s = Real(atom_count) / 2;
  AmplitudeVector<Real> phases(amplitudes.size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) phases(i) = std::polar(Real(1), -rotation.angle * (Real(i) - s));
  if (rotation.axis == Axis::z) return phases.cwiseProduct(amplitudes);
  const auto basis = rotation_basis<Real>(atom_count, rotation.axis);
  return (*basis) * phases.cwiseProduct(basis->adjoint() * amplitudes);
}

template <typename Real>
CollectiveSpinState<Real> rotate(const CollectiveSpinState<Real>& state, const RotationSpec<Real>& rotation) {
  if (!state.is_normalized()) throw PreconditionViolation("rotate expects a normalized state");
  return CollectiveSpinState<Real>(state.atom_count(),
                                   rotate_amplitudes(state.atom_count(), state.amplitudes(), rotation));
}

// Rotates a Bloch direction the way exp(-i angle S_axis) rotates a CSS.
template <typename Real>
BlochDirection<Real> rotate(const BlochDirection<Real>& direction, const RotationSpec<Real>& rotation) {
  const Eigen::Matrix<Real, 3, 1> axis = rotation.axis == Axis::x   ? Vector3<Real>::UnitX()
                                         : rotation.axis == Axis::y ? Vector3<Real>::UnitY()
                                                                    : Vector3<Real>::UnitZ();
  const Eigen::AngleAxis<Real> r(rotation.angle, axis);
  return BlochDirection<Real>::from_vector(r * direction.unit_vector());
}

template <typename Real>
Real expectation(const CollectiveSpinState<Real>& state, Axis axis) {
  // Real part only: the operator is Hermitian.
  const auto& a = state.amplitudes();
  if (axis == Axis::z) {
    Real acc = 0;
    for (Eigen::Index i = 0; i < a.size(); ++i) acc += std::norm(a(i)) * state.m_value(i);
    return acc / a.squaredNorm();
  }
  return (a.dot(spin_matrix<Real>(state.atom_count(), axis) * a)).real() / a.squaredNorm();
}

template <typename Real>
Real expectation_sz_squared(const CollectiveSpinState<Real>& state) {
  const auto& a = state.amplitudes();
  Real acc = 0;
  for (Eigen::Index i = 0; i < a.size(); ++i) acc += std::norm(a(i)) * state.m_value(i) * state.m_value(i);
  return acc / a.squaredNorm();
}

template <typename Real>
Vector3<Real> mean_spin(const CollectiveSpinState<Real>& state) {
  return {expectation(state, Axis::x), expectation(state, Axis::y), expectation(state, Axis::z)};
}

// Direction of <S>; exact for a CSS.
template <typename Real>
BlochDirection<Real> mean_direction(const CollectiveSpinState<Real>& state) {
  return BlochDirection<Real>::from_vector(mean_spin(state));
}

// Max amplitude deviation after removing one global phase, taken from the
// largest-magnitude amplitude of `a`.
template <typename Real>
Real phase_aligned_distance(const AmplitudeVector<Real>& a, const AmplitudeVector<Real>& b) {
  if (a.size() != b.size()) throw DimensionMismatch("phase comparison of vectors with different sizes");
  Eigen::Index pivot = 0;
  a.cwiseAbs().maxCoeff(&pivot);
  Complex<Real> phase(1, 0);
  if (std::abs(b(pivot)) > Real(0)) {
    const Complex<Real> ratio = a(pivot) / b(pivot);
    phase = ratio / std::abs(ratio);
  }
  return (a - phase * b).cwiseAbs().maxCoeff();
}

template <typename Real>
Real phase_aligned_distance(const CollectiveSpinState<Real>& a, const CollectiveSpinState<Real>& b) {
  if (a.atom_count() != b.atom_count()) throw DimensionMismatch("phase comparison of states with different atom counts");
  return phase_aligned_distance(a.amplitudes(), b.amplitudes());
}

template <typename Real>
bool equal_up_to_phase(const CollectiveSpinState<Real>& a, const CollectiveSpinState<Real>& b, Real tolerance) {
  return phase_aligned_distance(a, b) <= tolerance;
}

using SpinState = CollectiveSpinState<double>;
using Direction = BlochDirection<double>;
using Rotation = RotationSpec<double>;

}  // namespace oats
