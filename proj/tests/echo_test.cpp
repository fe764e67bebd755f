#include "oats/echo.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace oats;
using oats::testing::kPi;
using oats::testing::max_diff;

namespace {

Bipartite random_bipartite(int nc, int nt, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::MatrixXcd a(nc + 1, nt + 1);
  for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = {g(rng), g(rng)};
  return Bipartite(nc, nt, a / a.norm());
}

SpinState half_cat(int n, int twice_a, int twice_b) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  c(SpinState::index_of(n, twice_a)) = 1 / std::sqrt(2.0);
  c(SpinState::index_of(n, twice_b)) = 1 / std::sqrt(2.0);
  return SpinState(n, c);
}

}  // namespace

TEST(apply_oats, basis_state_picks_up_quadratic_phase) {
  for (int n : {4, 5}) {
    for (int i = 0; i <= n; ++i) {
      const int twice_m = 2 * i - n;
      const double m = twice_m / 2.0;
      const SpinState out = apply_oats(SpinState::dicke(n, twice_m), Squeezing(0.37));
      EXPECT_NEAR(std::abs(out[i] - std::polar(1.0, -0.37 * m * m)), 0, 1e-15);
    }
  }
}

TEST(apply_oats, unsqueeze_inverts) {
  std::mt19937_64 rng(1);
  const SpinState psi = oats::testing::random_state(11, rng);
  const SpinState back = apply_oats(apply_oats(psi, Squeezing(1.3, +1)), Squeezing(1.3, -1));
  EXPECT_LT(max_diff(back.amplitudes(), psi.amplitudes()), 1e-15);
}

TEST(apply_oats, two_atom_equator_at_half_pi) {
  const SpinState out = apply_oats(make_css(2, Direction(kPi / 2, 0)), Squeezing(kPi / 2));
  const std::complex<double> mi(0, -1);
  EXPECT_NEAR(std::abs(out[0] - mi / 2.0), 0, 1e-15);
  EXPECT_NEAR(std::abs(out[1] - 1 / std::sqrt(2.0)), 0, 1e-15);
  EXPECT_NEAR(std::abs(out[2] - mi / 2.0), 0, 1e-15);
}

TEST(squeezing_spec, rejects_bad_sign) { EXPECT_THROW(Squeezing(1.0, 0), PreconditionViolation); }

TEST(apply_joint_oats, product_basis_phase) {
  const Bipartite s = Bipartite::product(SpinState::dicke(3, 1), SpinState::dicke(4, -2));
  const Bipartite out = apply_joint_oats(s, Squeezing(0.7));
  // m~ = 1/2, m = -1
  EXPECT_NEAR(std::abs(out.amplitudes()(2, 1) - std::polar(1.0, -0.7 * 0.25)), 0, 1e-15);
}

TEST(apply_joint_oats, zero_mu_and_unitarity) {
  std::mt19937_64 rng(2);
  const Bipartite s = random_bipartite(1, 2, rng);
  EXPECT_EQ(max_diff(apply_joint_oats(s, Squeezing(0.0)).amplitudes(), s.amplitudes()), 0);
  EXPECT_NEAR(apply_joint_oats(s, Squeezing(2.2)).amplitudes().squaredNorm(), 1, 1e-14);
}

TEST(apply_target_oats, diagonal_identity_unitarity) {
  std::mt19937_64 rng(3);
  const Bipartite basis = Bipartite::product(SpinState::dicke(2, 2), SpinState::dicke(5, 3));
  EXPECT_NEAR(std::abs(apply_target_oats(basis, Squeezing(0.4)).amplitudes()(2, 4) - std::polar(1.0, -0.4 * 2.25)), 0, 1e-15);
  const Bipartite s = random_bipartite(2, 5, rng);
  EXPECT_EQ(max_diff(apply_target_oats(s, Squeezing(0.0)).amplitudes(), s.amplitudes()), 0);
  EXPECT_NEAR(apply_target_oats(s, Squeezing(0.9, -1)).amplitudes().squaredNorm(), 1, 1e-14);
}

TEST(echo, equals_commuted_form_on_random_states) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int nt = oats::testing::uniform_int(rng, 1, 30);
    const int nc = oats::testing::uniform_int(rng, 1, 4);
    const double mu = oats::testing::uniform(rng, -kPi, kPi);
    const Bipartite s = random_bipartite(nc, nt, rng);
    EXPECT_LT(max_diff(echo(s, mu).amplitudes(), apply_echo_rearranged(s, mu).amplitudes()), 1e-12);
  }
}

TEST(echo_protocol, basis_control_rotates_target_azimuth) {
  const Direction d(1.1, 0.3);
  for (int twice_m : {-3, -1, 1, 3}) {
    const Bipartite out = echo_protocol(SpinState::dicke(3, twice_m), make_css(12, d), 0.21);
    const SpinState t = out.conditional_target(SpinState::index_of(3, twice_m));
    const SpinState expected = make_css(12, Direction(1.1, 0.3 + twice_m * 0.21));
    EXPECT_LT(phase_aligned_distance(t, expected), 1e-12);
  }
}

TEST(echo_protocol, zero_mu_keeps_product) {
  std::mt19937_64 rng(5);
  const SpinState c = oats::testing::random_state(2, rng);
  const SpinState t = oats::testing::random_state(7, rng);
  const Bipartite out = echo_protocol(c, t, 0.0);
  EXPECT_LT(max_diff(out.amplitudes(), Bipartite::product(c, t).amplitudes()), 1e-15);
}

TEST(echo_protocol, single_control_atom_splits_target_by_plus_minus_mu) {
  const double mu = 0.47;
  const double theta = 0.9;
  const Bipartite out = echo_protocol(half_cat(1, 1, -1), make_css(10, Direction(theta, 0)), mu);
  EXPECT_NEAR(out.branch_weight(0), 0.5, 1e-14);
  EXPECT_NEAR(out.branch_weight(1), 0.5, 1e-14);
  EXPECT_LT(phase_aligned_distance(out.conditional_target(1), make_css(10, Direction(theta, mu))), 1e-12);
  EXPECT_LT(phase_aligned_distance(out.conditional_target(0), make_css(10, Direction(theta, -mu))), 1e-12);
}

TEST(closed_form_final, matches_echo_on_random_inputs) {
  std::mt19937_64 rng(6);
  for (int trial = 0; trial < 60; ++trial) {
    const int nt = oats::testing::uniform_int(rng, 4, 30);
    const int nc = oats::testing::uniform_int(rng, 1, 4);
    const double mu = oats::testing::uniform(rng, -kPi, kPi);
    const SpinState c = oats::testing::random_state(nc, rng);
    const Direction d = oats::testing::random_direction(rng);
    const Bipartite direct = echo_protocol(c, make_css(nt, d), mu);
    const Bipartite closed = closed_form_final(c, d, nt, mu);
    EXPECT_LT(max_diff(direct.amplitudes(), closed.amplitudes()), 1e-10);
  }
}

TEST(closed_form_final, three_atom_control_branches) {
  const double mu = kPi / 5;
  const Bipartite out = closed_form_final(half_cat(3, 3, 1), Direction(kPi / 2, 0), 40, mu);
  EXPECT_NEAR(mean_direction(out.conditional_target(3)).phi(), 3 * kPi / 5, 1e-10);
  EXPECT_NEAR(mean_direction(out.conditional_target(2)).phi(), kPi / 5, 1e-10);
  EXPECT_NEAR(out.branch_weight(3), 0.5, 1e-14);
}

TEST(closed_form_final, zero_level_branch_is_untouched) {
  const Direction d(0.7, 1.9);
  const Bipartite out = closed_form_final(SpinState::dicke(2, 0), d, 9, 0.8);
  EXPECT_LT(max_diff(out.amplitudes().row(1).transpose(), make_css(9, d).amplitudes()), 1e-15);
}

TEST(echo_protocol, azimuth_shift_is_parity_independent) {
  const double mu = 0.3;
  for (int n = 4; n <= 20; ++n) {
    for (int twice_m : {-1, 1}) {
      const auto phi_n = mean_direction(
          echo_protocol(SpinState::dicke(1, twice_m), make_css(n, Direction(kPi / 2, 0)), mu).conditional_target(twice_m > 0))
                             .phi();
      const auto phi_n1 = mean_direction(
          echo_protocol(SpinState::dicke(1, twice_m), make_css(n + 1, Direction(kPi / 2, 0)), mu).conditional_target(twice_m > 0))
                              .phi();
      EXPECT_NEAR(phi_n, phi_n1, 1e-10);
      EXPECT_NEAR(phi_n, reduce_angle(twice_m * mu, 2 * kPi), 1e-10);
    }
  }
}

TEST(echo_protocol, basis_control_gives_product_state) {
  std::mt19937_64 rng(7);
  for (int twice_m : {-2, 0, 2}) {
    const Bipartite out = echo_protocol(SpinState::dicke(2, twice_m), oats::testing::random_state(9, rng), 1.7);
    EXPECT_EQ(schmidt_rank(out, 1e-12), 1);
  }
  const Bipartite entangled = echo_protocol(half_cat(1, 1, -1), make_css(9, Direction(kPi / 2, 0)), kPi / 2);
  EXPECT_EQ(schmidt_rank(entangled, 1e-12), 2);
}

TEST(bipartite, rejects_bad_shape) {
  EXPECT_THROW(Bipartite(1, 2, Eigen::MatrixXcd::Zero(3, 3), Normalization::unnormalized), DimensionMismatch);
}

TEST(bipartite, factor_rotations_commute) {
  std::mt19937_64 rng(8);
  const Bipartite s = random_bipartite(2, 6, rng);
  const Rotation rc(Axis::x, 0.4);
  const Rotation rt(Axis::y, -1.2);
  EXPECT_LT(max_diff(rotate_control(rotate_target(s, rt), rc).amplitudes(),
                     rotate_target(rotate_control(s, rc), rt).amplitudes()),
            1e-13);
}
