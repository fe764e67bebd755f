// The squeezing propagator at mu = pi/n as a sum of n z-rotations,
//
//   exp(-i (pi/n) S_z^2) = n^{-1/2} e^{-i pi/4} sum_{l=alpha}^{n-1+alpha} e^{i (pi/n) l^2} exp(-i (2 pi/n) l S_z),
//
// with alpha = frac((N + n) / 2), and the quadratic Gauss sum behind it.
//
// Half-integer quantities (l, alpha, k0) are carried as twice their value
// so that parity conditions are checked on integers.
#pragma once

#include "oats/echo.hpp"

#include <cstdint>
#include <numeric>
#include <optional>
#include <vector>

namespace oats {

// An angle known exactly as (numerator / denominator) * pi.
struct PiFraction {
  PiFraction(std::int64_t numerator_, std::int64_t denominator_) : numerator(numerator_), denominator(denominator_) {
    if (denominator == 0) throw PreconditionViolation("pi fraction with zero denominator");
    if (denominator < 0) {
      numerator = -numerator;
      denominator = -denominator;
    }
    const std::int64_t g = std::gcd(numerator, denominator);
    if (g > 1) {
      numerator /= g;
      denominator /= g;
    }
  }

  std::int64_t numerator;
  std::int64_t denominator;

  template <typename Real = double>
  Real value() const {
    return Real(numerator) * std::numbers::pi_v<Real> / Real(denominator);
  }

  friend bool operator==(const PiFraction&, const PiFraction&) = default;
};

// n and sign when mu = sign * pi / n, nothing otherwise.
struct DecompositionOrder {
  int order;
  int sign;
};

inline std::optional<DecompositionOrder> decomposition_order(const PiFraction& mu) {
  if (mu.numerator != 1 && mu.numerator != -1) return std::nullopt;
  return DecompositionOrder{static_cast<int>(mu.denominator), static_cast<int>(mu.numerator)};
}

// Sum over k = k0, ..., k0 + n - 1 of e^{i (pi/n) k^2}; 2 k0 must share the parity of n.
struct GaussSumQuery {
  GaussSumQuery(int order_, int twice_start_) : order(order_), twice_start(twice_start_) {
    if (order < 1) throw PreconditionViolation("Gauss sum order must be positive");
    if (((twice_start % 2) + 2) % 2 != order % 2) {
      throw PreconditionViolation("2 k0 must have the same parity as n");
    }
  }

  int order;
  int twice_start;
};

// e^{i (pi/n) k^2} with k = twice_k / 2, evaluated straight from the definition.
template <typename Real>
Complex<Real> gauss_phase(int order, Real twice_k) {
  const Real k = twice_k / 2;
  return std::polar(Real(1), std::numbers::pi_v<Real> / Real(order) * k * k);
}

namespace detail {

// e^{i pi t^2 / (4n)} with t^2 reduced modulo 8n, an exact period of the phase.
template <typename Real>
Complex<Real> reduced_gauss_phase(int order, std::int64_t twice_k) {
  const std::int64_t period = 8 * static_cast<std::int64_t>(order);
  const std::int64_t t = ((twice_k % period) + period) % period;
  const std::int64_t r = (t * t) % period;
  return std::polar(Real(1), std::numbers::pi_v<Real> * Real(r) / Real(4 * order));
}

template <typename Real>
Complex<Real> pairwise_sum(const std::vector<Complex<Real>>& values, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return {};
  if (hi - lo == 1) return values[lo];
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(values, lo, mid) + pairwise_sum(values, mid, hi);
}

}  // namespace detail

template <typename Real>
Complex<Real> quadratic_gauss_sum(const GaussSumQuery& query) {
  std::vector<Complex<Real>> terms;
  terms.reserve(static_cast<std::size_t>(query.order));
  for (int j = 0; j < query.order; ++j) {
    terms.push_back(detail::reduced_gauss_phase<Real>(query.order, std::int64_t(query.twice_start) + 2 * j));
  }
  return detail::pairwise_sum(terms, 0, terms.size());
}

// sqrt(n) e^{i pi/4}
template <typename Real>
Complex<Real> gauss_sum_closed_form(int order) {
  return std::polar(std::sqrt(Real(order)), std::numbers::pi_v<Real> / 4);
}

template <typename Real>
struct RotationTerm {
  int twice_l;
  Complex<Real> coefficient;
  Real z_angle;

  Real l() const { return Real(twice_l) / 2; }
};

template <typename Real>
struct RotationDecomposition {
  int order;
  int atom_count;
  int twice_alpha;  // 0 or 1
  int sign;         // +1 for exp(-i (pi/n) S_z^2), -1 for its inverse
  std::vector<RotationTerm<Real>> terms;

  Real alpha() const { return Real(twice_alpha) / 2; }
};

// sign = -1 builds exp(+i (pi/n) S_z^2) as the term-wise conjugate.
template <typename Real>
RotationDecomposition<Real> build_decomposition(int order, int atom_count, int sign = +1) {
  if (order < 1) throw PreconditionViolation("decomposition order must be positive");
  if (atom_count < 0) throw PreconditionViolation("atom count must be non-negative");
  if (sign != 1 && sign != -1) throw PreconditionViolation("decomposition sign must be +1 or -1");
  RotationDecomposition<Real> out{order, atom_count, (atom_count + order) % 2, sign, {}};
  const Complex<Real> prefactor = std::polar(Real(1) / std::sqrt(Real(order)), -std::numbers::pi_v<Real> / 4);
  out.terms.reserve(static_cast<std::size_t>(order));
  for (int j = 0; j < order; ++j) {
    const int twice_l = out.twice_alpha + 2 * j;
    Complex<Real> c = prefactor * detail::reduced_gauss_phase<Real>(order, twice_l);
    Real angle = std::numbers::pi_v<Real> * Real(twice_l) / Real(order);
    if (sign < 0) {
      c = std::conj(c);
      angle = -angle;
    }
    out.terms.push_back({twice_l, c, angle});
  }
  return out;
}

// Sum of coefficient * exp(-i z_angle S_z) applied to the state.
template <typename Real>
CollectiveSpinState<Real> apply_decomposition(const CollectiveSpinState<Real>& state,
                                              const RotationDecomposition<Real>& decomposition) {
  if (decomposition.atom_count != state.atom_count()) {
    throw DimensionMismatch("decomposition built for a different atom count");
  }
  AmplitudeVector<Real> acc = AmplitudeVector<Real>::Zero(state.dimension());
  for (const auto& term : decomposition.terms) {
    acc += term.coefficient * rotate_amplitudes(state.atom_count(), state.amplitudes(), RotationSpec<Real>(Axis::z, term.z_angle));
  }
  return CollectiveSpinState<Real>(state.atom_count(), std::move(acc), Normalization::unnormalized);
}

template <typename Real>
struct CssComponent {
  Complex<Real> weight;
  BlochDirection<Real> direction;
};

// Expresses a squeezed CSS as the weighted CSS superposition implied by the
// decomposition. Throws when the state is not the squeezed `source` CSS.
template <typename Real>
std::vector<CssComponent<Real>> css_components(const CollectiveSpinState<Real>& state,
                                               const RotationDecomposition<Real>& decomposition,
                                               const BlochDirection<Real>& source) {
  if (decomposition.atom_count != state.atom_count()) {
    throw DimensionMismatch("decomposition built for a different atom count");
  }
  const int n_atoms = state.atom_count();
  std::vector<CssComponent<Real>> out;
  out.reserve(decomposition.terms.size());
  AmplitudeVector<Real> rebuilt = AmplitudeVector<Real>::Zero(state.dimension());
  for (const auto& term : decomposition.terms) {
    // exp(-i a S_z)|theta, phi> = e^{-i a N/2} |theta, phi + a>
    const BlochDirection<Real> turned(source.theta(), source.phi() + term.z_angle);
    const Complex<Real> weight = term.coefficient * std::polar(Real(1), -term.z_angle * Real(n_atoms) / 2);
    rebuilt += weight * make_css(n_atoms, turned).amplitudes();
    out.push_back({weight, turned});
  }
  const Real residual = (rebuilt - state.amplitudes()).cwiseAbs().maxCoeff();
  if (residual > Real(1e-8)) {
    throw PreconditionViolation("state is not the squeezed source CSS (reconstruction residual " +
                                std::to_string(static_cast<double>(residual)) + ")");
  }
  return out;
}

// prefactor * exp(-i prefactor_angle S_z) * sum_j c_j exp(-i angle_j S_z)
template <typename Real>
struct ZRotationSum {
  Complex<Real> prefactor;
  Real prefactor_angle;
  std::vector<std::pair<Complex<Real>, Real>> terms;
};

template <typename Real>
AmplitudeVector<Real> apply_z_rotation_sum(int atom_count, const AmplitudeVector<Real>& amplitudes,
                                           const ZRotationSum<Real>& op) {
  AmplitudeVector<Real> acc = AmplitudeVector<Real>::Zero(amplitudes.size());
  for (const auto& [c, angle] : op.terms) {
    acc += c * rotate_amplitudes(atom_count, amplitudes, RotationSpec<Real>(Axis::z, angle));
  }
  return op.prefactor * rotate_amplitudes(atom_count, acc, RotationSpec<Real>(Axis::z, op.prefactor_angle));
}

// Hand-factored forms of exp(-i (pi/n) S_z^2) for n = 2, 3, chosen by the
// parity of the atom count:
//   n = 2, N even: 2^{-1/2} e^{-i pi/4} (1 + i e^{-i pi S_z})
//   n = 2, N odd:  2^{-1/2} e^{-i pi/8} e^{-i (pi/2) S_z} (1 - e^{-i pi S_z})
//   n = 3, N odd:  3^{-1/2} e^{-i pi/4} (1 + e^{i pi/3} e^{-i (2pi/3) S_z} + e^{i 4pi/3} e^{-i (4pi/3) S_z})
//   n = 3, N even: 3^{-1/2} e^{-i pi/6} e^{-i (pi/3) S_z} (1 + e^{i 2pi/3} e^{-i (2pi/3) S_z} + e^{-i (4pi/3) S_z})
template <typename Real>
ZRotationSum<Real> factored_propagator(int order, int atom_count) {
  constexpr Real pi = std::numbers::pi_v<Real>;
  const bool even = atom_count % 2 == 0;
  auto e = [](Real phase) { return std::polar(Real(1), phase); };
  if (order == 2) {
    const Real r = Real(1) / std::sqrt(Real(2));
    if (even) return {r * e(-pi / 4), Real(0), {{Real(1), Real(0)}, {Complex<Real>(0, 1), pi}}};
    return {r * e(-pi / 8), pi / 2, {{Real(1), Real(0)}, {Real(-1), pi}}};
  }
  if (order == 3) {
    const Real r = Real(1) / std::sqrt(Real(3));
    if (!even) return {r * e(-pi / 4), Real(0), {{Real(1), Real(0)}, {e(pi / 3), 2 * pi / 3}, {e(4 * pi / 3), 4 * pi / 3}}};
    return {r * e(-pi / 6), pi / 3, {{Real(1), Real(0)}, {e(2 * pi / 3), 2 * pi / 3}, {Real(1), 4 * pi / 3}}};
  }
  throw PreconditionViolation("factored forms exist only for n = 2 and n = 3");
}

using Decomposition = RotationDecomposition<double>;

}  // namespace oats
