#include "oats/io.hpp"

#include "test_support.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

using namespace oats;
using oats::testing::kPi;

TEST(io, spin_state_round_trip_is_bit_exact) {
  std::mt19937_64 rng(1);
  for (int n = 0; n <= 25; ++n) {
    const SpinState s = oats::testing::random_state(n, rng);
    const io::json j = io::json::parse(io::to_json(s).dump());
    const SpinState back = io::spin_state_from_json(j);
    ASSERT_EQ(back.atom_count(), n);
    for (Eigen::Index i = 0; i <= n; ++i) EXPECT_EQ(back[i], s[i]);
  }
}

TEST(io, spin_state_layout) {
  const io::json j = io::to_json(SpinState::dicke(2, 2));
  EXPECT_EQ(j["n_atoms"], 2);
  ASSERT_EQ(j["amplitudes"].size(), 3u);
  EXPECT_EQ(j["amplitudes"][2][0], 1.0);
  EXPECT_EQ(j["amplitudes"][0][0], 0.0);
}

TEST(io, rejects_wrong_length_and_malformed_entries) {
  EXPECT_THROW(io::spin_state_from_json(io::json::parse(R"({"n_atoms": 2, "amplitudes": [[1,0],[0,0]]})")), Error);
  EXPECT_THROW(io::spin_state_from_json(io::json::parse(R"({"amplitudes": [[1,0]]})")), Error);
  EXPECT_THROW(io::spin_state_from_json(io::json::parse(R"({"n_atoms": 0, "amplitudes": [[1]]})")), Error);
  EXPECT_THROW(io::spin_state_from_json(io::json::parse(R"({"n_atoms": 1, "amplitudes": [[1,0],[1,0]]})")),
               PreconditionViolation);
  EXPECT_THROW(io::bipartite_from_json(io::json::parse(R"({"n_control": 1, "n_target": 1, "amplitudes": [[1,0]]})")), Error);
}

TEST(io, bipartite_is_row_major_over_control_then_target) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(2, 3);
  a(0, 2) = 1;
  const Bipartite b(1, 2, a);
  const io::json j = io::to_json(b);
  EXPECT_EQ(j["amplitudes"][2][0], 1.0);
  const Bipartite back = io::bipartite_from_json(j);
  EXPECT_EQ(back.amplitudes(), a);

  std::mt19937_64 rng(2);
  const Bipartite e = echo_protocol(oats::testing::random_state(2, rng), oats::testing::random_state(5, rng), 0.3);
  EXPECT_EQ(io::bipartite_from_json(io::json::parse(io::to_json(e).dump())).amplitudes(), e.amplitudes());
}

TEST(io, report_json_fields) {
  const io::json j = io::to_json(entangled_cat_parity(6, 1, kPi / 2), true);
  EXPECT_EQ(j["protocol"], "cat");
  EXPECT_DOUBLE_EQ(j["branch_weights"]["+1/2"].get<double>(), 0.5);
  EXPECT_EQ(j["pairing"]["-1/2"], "down");
  EXPECT_TRUE(j["parity_checked"]["match"].get<bool>());
  EXPECT_EQ(j["parity_checked"]["runs"].size(), 2u);
  EXPECT_EQ(j["final_state"]["n_target"], 6);
  EXPECT_FALSE(io::to_json(entangled_cat(6, 1, kPi / 2)).contains("final_state"));
}

TEST(io, decomposition_json) {
  const io::json j = io::to_json(build_decomposition<double>(3, 4));
  EXPECT_EQ(j["order"], 3);
  EXPECT_DOUBLE_EQ(j["alpha"].get<double>(), 0.5);
  EXPECT_EQ(j["terms"].size(), 3u);
  EXPECT_DOUBLE_EQ(j["terms"][1]["l"].get<double>(), 1.5);
}

TEST(io, husimi_csv_shape) {
  const Husimi g = husimi_grid(make_css(4, Direction(0, 0)), 3, 4);
  std::ostringstream s;
  io::write_husimi_csv(s, g);
  std::istringstream in(s.str());
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  ASSERT_EQ(lines.size(), 4u);
  EXPECT_EQ(lines[0], "theta\\phi,0,1.5708,3.14159,4.71239");
  EXPECT_EQ(lines[1], "0,1,1,1,1");
  EXPECT_EQ(lines[3].substr(0, 8), "3.14159,");
}

TEST(io, sidecar_lists_circles) {
  const Husimi g = husimi_grid(make_css(10, Direction(kPi / 2, 0)), 5, 8);
  const io::json j = io::husimi_sidecar(g, {css_perimeter(10, Direction(kPi / 2, 1.0))}, {{"kind", "test"}});
  EXPECT_EQ(j["n_theta"], 5);
  EXPECT_EQ(j["n_phi"], 8);
  EXPECT_EQ(j["scale"], "peak");
  ASSERT_EQ(j["perimeter_circles"].size(), 1u);
  EXPECT_DOUBLE_EQ(j["perimeter_circles"][0]["phi"].get<double>(), 1.0);
}

TEST(io, text_file_round_trip) {
  const auto path = std::filesystem::temp_directory_path() / "oats_io_test.txt";
  io::write_text_file(path.string(), "abc\n1,2\n");
  EXPECT_EQ(io::read_text_file(path.string()), "abc\n1,2\n");
  std::filesystem::remove(path);
  EXPECT_THROW(io::read_text_file("/nonexistent/dir/file"), Error);
}
