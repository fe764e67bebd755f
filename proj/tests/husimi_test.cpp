#include "oats/husimi.hpp"

#include "oats/decomposition.hpp"
#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace oats;
using oats::testing::kPi;

namespace {

SpinState z_cat(int n) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(n + 1);
  c(0) = c(n) = 1 / std::sqrt(2.0);
  return SpinState(n, c);
}

}  // namespace

TEST(husimi_grid, css_has_single_peak_at_its_direction) {
  const Husimi g = husimi_grid(make_css(30, Direction(kPi / 2, kPi / 2)));
  Eigen::Index r, c;
  EXPECT_NEAR(g.values.maxCoeff(&r, &c), 1, 1e-12);
  EXPECT_NEAR(g.theta[std::size_t(r)], kPi / 2, 1e-12);
  EXPECT_NEAR(g.phi[std::size_t(c)], kPi / 2, 1e-12);
  EXPECT_EQ(equatorial_maxima(g).size(), 1u);
}

TEST(husimi_grid, z_cat_is_concentrated_at_both_poles) {
  const Husimi g = husimi_grid(z_cat(20), 91, 60);
  for (Eigen::Index j = 0; j < g.values.cols(); ++j) {
    EXPECT_NEAR(g.values(0, j), 1, 1e-12);
    EXPECT_NEAR(g.values(90, j), 1, 1e-12);
  }
  EXPECT_LT(g.values.row(45).maxCoeff(), 1e-5);
}

TEST(husimi_grid, x_cat_peaks_at_zero_and_pi) {
  const SpinState cat = rotate(z_cat(20), Rotation(Axis::y, kPi / 2));
  const auto maxima = equatorial_maxima(husimi_grid(cat));
  ASSERT_EQ(maxima.size(), 2u);
  EXPECT_NEAR(maxima[0], 0, 1e-12);
  EXPECT_NEAR(maxima[1], kPi, 1e-12);
}

TEST(husimi_grid, pi_over_three_gives_three_peaks_near_components) {
  const Direction source(kPi / 2, 0);
  const SpinState s = apply_oats(make_css(41, source), Squeezing(kPi / 3));
  const Husimi g = husimi_grid(s);
  const auto maxima = equatorial_maxima(g);
  const auto comps = css_components(s, build_decomposition<double>(3, 41), source);
  ASSERT_EQ(maxima.size(), 3u);
  for (const auto& c : comps) {
    double best = 10;
    for (double m : maxima) best = std::min(best, azimuth_distance(m, c.direction.phi()));
    EXPECT_LE(best, g.phi_step() + 1e-12);
  }
}

TEST(husimi_grid, ten_equatorial_maxima_inside_component_circles) {
  const Direction source(kPi / 2, 0);
  const SpinState s = apply_oats(make_css(40, source), Squeezing(kPi / 10));
  const Husimi g = husimi_grid(s);
  const auto maxima = equatorial_maxima(g);
  ASSERT_EQ(maxima.size(), 10u);
  const auto comps = css_components(s, build_decomposition<double>(10, 40), source);
  const double theta = g.theta[std::size_t(g.theta_index_nearest(kPi / 2))];
  for (double phi : maxima) {
    bool inside = false;
    for (const auto& c : comps) inside = inside || css_perimeter(40, c.direction).contains(Direction(theta, phi));
    EXPECT_TRUE(inside) << phi;
  }
}

TEST(css_perimeter, radius_values) {
  EXPECT_NEAR(css_perimeter(40, Direction(0, 0)).angular_radius, 0.4453525555219656, 1e-15);
  EXPECT_NEAR(css_perimeter(1, Direction(0, 0)).angular_radius, 2.388137637472643, 1e-14);
  EXPECT_NEAR(css_perimeter(160, Direction(0, 0)).angular_radius, 0.22337394695340956, 1e-15);
  EXPECT_THROW(css_perimeter(0, Direction(0, 0)), PreconditionViolation);
}

TEST(css_perimeter, q_on_the_circle_is_e_minus_two) {
  for (int n : {1, 7, 40}) {
    const Direction center(kPi / 2, 0);
    const double gamma = css_perimeter(n, center).angular_radius;
    const double q = std::norm(inner(make_css(n, center), make_css(n, Direction(kPi / 2, gamma))));
    EXPECT_NEAR(q, std::exp(-2.0), 1e-13) << n;
  }
}

TEST(husimi_grid, ignores_global_phase) {
  std::mt19937_64 rng(1);
  const SpinState psi = oats::testing::random_state(12, rng);
  const SpinState shifted(12, psi.amplitudes() * std::polar(1.0, 0.8));
  const Husimi a = husimi_grid(psi, 31, 40);
  const Husimi b = husimi_grid(shifted, 31, 40);
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-13);
}

TEST(husimi_grid, z_rotation_translates_phi) {
  std::mt19937_64 rng(2);
  const SpinState psi = oats::testing::random_state(9, rng);
  const int nphi = 36;
  const int shift = 5;
  const SpinState turned = rotate(psi, Rotation(Axis::z, 2 * kPi * shift / nphi));
  const Husimi a = husimi_grid(psi, 19, nphi);
  const Husimi b = husimi_grid(turned, 19, nphi);
  for (Eigen::Index i = 0; i < 19; ++i) {
    for (Eigen::Index j = 0; j < nphi; ++j) EXPECT_NEAR(b.values(i, (j + shift) % nphi), a.values(i, j), 1e-12);
  }
}

TEST(husimi_grid, quasi_probability_integrates_to_one) {
  std::mt19937_64 rng(3);
  const SpinState psi = oats::testing::random_state(10, rng);
  const Husimi g = husimi_grid(psi, 361, 180, HusimiScale::quasi_probability);
  double total = 0;
  const double dt = g.theta_step();
  for (std::size_t i = 0; i < g.theta.size(); ++i) {
    const double w = (i == 0 || i + 1 == g.theta.size()) ? 0.5 : 1.0;
    total += w * std::sin(g.theta[i]) * g.values.row(Eigen::Index(i)).sum() * dt * g.phi_step();
  }
  EXPECT_NEAR(total, 1, 1e-4);
}

TEST(husimi_grid, rejects_zero_state_and_tiny_grid) {
  EXPECT_THROW(husimi_grid(SpinState(3, Eigen::VectorXcd::Zero(4), Normalization::unnormalized)), PreconditionViolation);
  EXPECT_THROW(husimi_grid(SpinState::dicke(2, 0), 1, 10), PreconditionViolation);
}

TEST(husimi_grid, bipartite_conditional_and_marginal) {
  Eigen::VectorXcd c = Eigen::VectorXcd::Zero(2);
  c << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const Bipartite out = echo_protocol(SpinState(1, c), make_css(20, Direction(kPi / 2, 0)), kPi / 4);
  const auto up = equatorial_maxima(husimi_grid(out, 1));
  ASSERT_EQ(up.size(), 1u);
  EXPECT_NEAR(up[0], kPi / 4, 1e-12);
  const auto down = equatorial_maxima(husimi_grid(out, 0));
  ASSERT_EQ(down.size(), 1u);
  EXPECT_NEAR(down[0], 7 * kPi / 4, 1e-12);
  const auto both = equatorial_maxima(marginal_husimi_grid(out));
  ASSERT_EQ(both.size(), 2u);
  EXPECT_THROW(husimi_grid(out, 2), PreconditionViolation);
  const Bipartite basis = Bipartite::product(SpinState::dicke(1, 1), make_css(5, Direction(1, 0)));
  EXPECT_THROW(husimi_grid(basis, 0), PreconditionViolation);
}
