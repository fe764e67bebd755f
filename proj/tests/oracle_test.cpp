#include "oats/oracle.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

using namespace oats;
using oats::testing::kPi;
using oats::testing::max_diff;

TEST(oracle, tensor_power_is_normalized_product) {
  const Eigen::VectorXcd v = oracle::tensor_power(3, Direction(kPi / 2, 0));
  EXPECT_NEAR(v.norm(), 1, 1e-15);
  for (Eigen::Index i = 0; i < v.size(); ++i) EXPECT_NEAR(std::abs(v(i) - 1 / std::sqrt(8.0)), 0, 1e-15);
}

TEST(oracle, embed_then_project_round_trip) {
  std::mt19937_64 rng(1);
  for (int n = 0; n <= 8; ++n) {
    const SpinState s = oats::testing::random_state(n, rng);
    const oracle::ProductState p{n, oracle::embed_symmetric(s)};
    EXPECT_NEAR(p.amplitudes.norm(), 1, 1e-13);
    EXPECT_LT(oracle::leakage(p, {0, n}), 1e-13);
    EXPECT_LT(max_diff(oracle::project_symmetric(p, {0, n}).row(0).transpose(), s.amplitudes()), 1e-13);
  }
}

TEST(oracle, single_atom_rotation_matches_engine) {
  std::mt19937_64 rng(2);
  for (Axis axis : {Axis::x, Axis::y, Axis::z}) {
    const SpinState s = oats::testing::random_state(5, rng);
    oracle::ProductState p{5, oracle::embed_symmetric(s)};
    oracle::apply_rotation(p, {0, 5}, oracle::Group::target, axis, 0.77);
    const SpinState e = rotate(s, Rotation(axis, 0.77));
    EXPECT_LT(max_diff(oracle::project_symmetric(p, {0, 5}).row(0).transpose(), e.amplitudes()), 1e-12) << axis_name(axis);
  }
}

TEST(oracle, echo_four_plus_one_at_half_pi) {
  Eigen::VectorXcd control(2);
  control << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  const oracle::Result o = oracle::run_echo(4, 1, kPi / 2, {control, Direction(kPi / 2, 0)});
  const Bipartite e = echo_protocol(SpinState(1, control), make_css(4, Direction(kPi / 2, 0)), kPi / 2);
  EXPECT_LT(max_diff(o.symmetric, e.amplitudes()), 1e-12);
  EXPECT_LT(o.max_leakage, 1e-12);
  for (const auto& b : o.branches) {
    EXPECT_NEAR(b.probability, 0.5, 1e-12);
    EXPECT_NEAR(b.fidelity, 1, 1e-12);
  }
}

TEST(oracle, zero_mu_is_identity) {
  Eigen::VectorXcd control(4);
  control << 0.5, 0.5, 0.5, 0.5;
  const Direction d(0.4, 1.3);
  const oracle::Result o = oracle::run_echo(3, 2, 0, {control, d});
  const oracle::ProductState start = oracle::join({2, 3}, control, oracle::tensor_power(3, d));
  EXPECT_LT(max_diff(o.state.amplitudes, start.amplitudes), 1e-15);
}

TEST(oracle, transfer_three_atoms) {
  const oracle::Result o = oracle::run_transfer(3);
  ASSERT_EQ(o.branches.size(), 2u);
  for (const auto& b : o.branches) {
    EXPECT_NEAR(b.probability, 0.5, 1e-12);
    EXPECT_GE(b.fidelity, 1 - 1e-10);
  }
  EXPECT_LT(o.max_leakage, 1e-12);
}

TEST(oracle, leakage_detects_non_symmetric_state) {
  // (|ud> - |du>)/sqrt2 has no symmetric component.
  oracle::ProductState s{2, Eigen::VectorXcd::Zero(4)};
  s.amplitudes(1) = 1 / std::sqrt(2.0);
  s.amplitudes(2) = -1 / std::sqrt(2.0);
  EXPECT_NEAR(oracle::leakage(s, {0, 2}), 1, 1e-15);
}

TEST(oracle, size_cap) {
  EXPECT_THROW(oracle::run_entangled_cat(14, 1, 1.0), PreconditionViolation);
  EXPECT_THROW(oracle::tensor_power(15, Direction(0, 0)), PreconditionViolation);
  EXPECT_THROW(oracle::oracle_run(oracle::ProtocolId::transfer, 3, 2, 1.0), PreconditionViolation);
}

TEST(oracle, non_symmetric_control_depends_only_on_its_level) {
  // Control |u u d>: m~ = 1/2 with no symmetric structure. Target turns by 2 m~ mu.
  const double mu = kPi / 5;
  Eigen::VectorXcd control = Eigen::VectorXcd::Zero(8);
  control(0b011) = 1;
  const oracle::Result o = oracle::run_echo(8, 3, mu, {control, Direction(kPi / 2, 0)});
  const oracle::Branch& b = o.branches[2];
  EXPECT_EQ(b.label, "+1/2");
  EXPECT_NEAR(b.probability, 1, 1e-14);
  EXPECT_NEAR(b.fidelity, 1, 1e-12);
  const Bipartite engine = echo_protocol(SpinState::dicke(3, 1), make_css(8, Direction(kPi / 2, 0)), mu);
  EXPECT_LT(max_diff(b.target_symmetric, engine.conditional_target(2).amplitudes()), 1e-12);
}

TEST(oracle, cross_check_up_to_ten_atoms) {
  const oracle::CheckSummary s = oracle::cross_check(10);
  EXPECT_TRUE(s.all_pass);
  EXPECT_GT(s.cases.size(), 40u);
  for (const auto& c : s.cases) {
    EXPECT_LT(c.amplitude_error, 1e-10) << c.protocol << " " << c.target_count << "+" << c.control_count;
    EXPECT_LT(c.observable_error, 1e-10) << c.protocol << " " << c.target_count << "+" << c.control_count;
    EXPECT_LT(c.leakage, 1e-12) << c.protocol << " " << c.target_count << "+" << c.control_count;
  }
}
