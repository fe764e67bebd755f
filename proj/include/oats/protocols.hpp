// Cat-state procedures built on the echo: the deterministic control/target
// cat and the measurement-conditioned transfer of a cat to the target group.
#pragma once

#include "oats/echo.hpp"

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace oats {

struct ProtocolReport {
  std::string protocol;
  int target_count = 0;
  int control_count = 0;
  double mu = 0;

  // Keys are control levels ("+1/2", "-3/2", ...) or measurement outcomes ("up", "down").
  std::map<std::string, double> branch_weights;
  std::map<std::string, double> conditional_fidelities;
  // Which pole ("up" or "down") each branch's target ends closest to.
  std::map<std::string, std::string> pairing;
  // Target azimuth and fidelity with CSS(pi/2, 2 m~ mu) right after the echo.
  std::map<std::string, double> pre_pulse_azimuths;
  std::map<std::string, double> pre_pulse_fidelities;

  // Runs for N and N+1 when a parity sweep was requested.
  std::vector<ProtocolReport> parity_runs;
  std::optional<bool> parity_match;

  std::variant<std::monostate, Bipartite, SpinState> final_state;
};

struct MeasurementOutcome {
  std::string label;  // "up" or "down"
  double probability;
  std::optional<SpinState> post_state;  // empty when the outcome has zero probability
};

// "+3/2", "-1/2", "0", "+2"
std::string half_integer_label(int twice_value);

// Phase-maximized fidelity with (|d> + e^{i chi}|-d>)/sqrt(2); the default is the z cat.
double cat_fidelity(const SpinState& state);
double cat_fidelity(const SpinState& state, const Direction& pole);

// Control (|+N'/2> + |-N'/2>)/sqrt(2), target all up; y(pi/2) on target, echo, x(pi/2) on target.
ProtocolReport entangled_cat(int target_count, int control_count, double mu);

// entangled_cat at N and N+1 with the structural comparison filled in.
ProtocolReport entangled_cat_parity(int target_count, int control_count, double mu);

// exp(-i angle s_x) on the single control atom.
Bipartite control_x_pulse(const Bipartite& state, double angle);

// Projective measurement of the single control atom. Outcomes are ordered up, down.
std::vector<MeasurementOutcome> measure_control(const Bipartite& state);

struct TransferOptions {
  // Axis of the outcome-conditioned +-pi/2 target pulse.
  Axis correction_axis = Axis::x;
};

// Echo at mu = pi/2, control x(pi/2), measure control, conditioned target pulse.
// Returns the (up, down) outcome reports.
std::pair<ProtocolReport, ProtocolReport> transfer_cat(int target_count, TransferOptions options = {});

}  // namespace oats
