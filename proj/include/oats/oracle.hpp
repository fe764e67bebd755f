// Brute-force reference simulator over the full 2^(N'+N) product space.
//
// Atom j occupies bit j of the basis index (bit set = up). Control atoms
// take bits 0 .. N'-1 and target atoms bits N' .. N'+N-1. Every collective
// operation is applied atom by atom, with no use of the Dicke basis, so the
// results are independent of the symmetric-subspace engine.
#pragma once

#include "oats/protocols.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace oats::oracle {

inline constexpr int kMaxAtoms = 14;

struct ProductState {
  int total_atoms;
  Eigen::VectorXcd amplitudes;  // 2^total_atoms entries
};

struct Layout {
  int control_count;
  int target_count;

  int total() const { return control_count + target_count; }
  std::uint32_t control_bits(std::uint32_t index) const { return index & ((1u << control_count) - 1u); }
  std::uint32_t target_bits(std::uint32_t index) const { return index >> control_count; }
};

enum class Group { control, target, both };

// Single-atom state cos(theta/2)|up> + e^{i phi} sin(theta/2)|down>, tensored over n atoms.
Eigen::VectorXcd tensor_power(int atom_count, const Direction& direction);

// A symmetric state written out over all 2^n configurations.
Eigen::VectorXcd embed_symmetric(const SpinState& state);

// Joint vector from per-group product-space vectors.
ProductState join(const Layout& layout, const Eigen::VectorXcd& control, const Eigen::VectorXcd& target);

// exp(-i sign mu (sum of s_z over the group)^2)
void apply_squeezing(ProductState& state, const Layout& layout, Group group, double mu, int sign);

// exp(-i angle s_axis) on every atom of the group.
void apply_rotation(ProductState& state, const Layout& layout, Group group, Axis axis, double angle);

// Amplitudes on the symmetric Dicke basis of each group, (N'+1) x (N+1).
Eigen::MatrixXcd project_symmetric(const ProductState& state, const Layout& layout);

// Weight outside the symmetric subspace of both groups.
double leakage(const ProductState& state, const Layout& layout);

double target_sz(const ProductState& state, const Layout& layout);
double target_sz_squared(const ProductState& state, const Layout& layout);

enum class ProtocolId { echo, entangled_cat, transfer };

std::string protocol_name(ProtocolId id);

struct EchoInputs {
  Eigen::VectorXcd control;  // product-space control state, 2^N' entries
  Direction target_direction{std::numbers::pi / 2, 0.0};
};

struct Branch {
  std::string label;
  double probability = 0;
  double fidelity = 0;
  Eigen::VectorXcd target_symmetric;  // renormalized symmetric projection of the branch target
  double target_leakage = 0;
};

struct Result {
  ProductState state;                 // joint state before any measurement
  Eigen::MatrixXcd symmetric;         // its symmetric projection
  double max_leakage = 0;             // largest leakage over every stage
  double target_sz = 0;
  double target_sz_squared = 0;
  std::vector<Branch> branches;
};

// Echo: control and target CSS, squeeze both, unsqueeze target. Branches per control level.
Result run_echo(int target_count, int control_count, double mu, const EchoInputs& inputs);

// Deterministic cat: branches "+N'/2" and "-N'/2" scored against all-up / all-down.
Result run_entangled_cat(int target_count, int control_count, double mu);

// Transfer protocol with measurement of the single control atom.
Result run_transfer(int target_count, Axis correction_axis = Axis::x);

Result oracle_run(ProtocolId id, int target_count, int control_count, double mu);

struct CheckCase {
  std::string protocol;
  int target_count;
  int control_count;
  double mu;
  double amplitude_error;
  double observable_error;
  double leakage;
  bool pass;
};

struct CheckSummary {
  std::vector<CheckCase> cases;
  double amplitude_tolerance;
  double leakage_tolerance;
  bool all_pass;
};

// Every protocol for N + N' <= max_total_atoms against the symmetric-subspace engine.
CheckSummary cross_check(int max_total_atoms = 10, std::uint64_t seed = 2024);

}  // namespace oats::oracle
