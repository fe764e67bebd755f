#include "oats/protocols.hpp"

#include <cmath>
#include <numbers>

namespace oats {

namespace {

constexpr double kPi = std::numbers::pi;

SpinState control_cat(int control_count) {
  Eigen::VectorXcd a = Eigen::VectorXcd::Zero(control_count + 1);
  a(0) += 1.0 / std::sqrt(2.0);
  a(control_count) += 1.0 / std::sqrt(2.0);
  return SpinState(control_count, a);
}

SpinState pole(int atom_count, bool up) { return SpinState::dicke(atom_count, up ? atom_count : -atom_count); }

}  // namespace

std::string half_integer_label(int twice_value) {
  if (twice_value == 0) return "0";
  const std::string sign = twice_value > 0 ? "+" : "-";
  const int mag = std::abs(twice_value);
  if (mag % 2 == 0) return sign + std::to_string(mag / 2);
  return sign + std::to_string(mag) + "/2";
}

double cat_fidelity(const SpinState& state) {
  const double n = state.norm();
  const double up = std::abs(state[state.dimension() - 1]) / n;
  const double down = std::abs(state[0]) / n;
  return (up + down) * (up + down) / 2;
}

double cat_fidelity(const SpinState& state, const Direction& pole_direction) {
  const Direction opposite = Direction::from_vector(-pole_direction.unit_vector());
  const double n = state.norm();
  const double a = std::abs(inner(make_css(state.atom_count(), pole_direction), state)) / n;
  const double b = std::abs(inner(make_css(state.atom_count(), opposite), state)) / n;
  return (a + b) * (a + b) / 2;
}

ProtocolReport entangled_cat(int target_count, int control_count, double mu) {
  if (target_count < 1 || control_count < 1) throw PreconditionViolation("entangled_cat needs N >= 1 and N' >= 1");
  ProtocolReport report;
  report.protocol = "cat";
  report.target_count = target_count;
  report.control_count = control_count;
  report.mu = mu;

  const SpinState target = rotate(pole(target_count, true), Rotation(Axis::y, kPi / 2));
  const Bipartite after_echo = echo_protocol(control_cat(control_count), target, mu);
  const Bipartite final_state = rotate_target(after_echo, Rotation(Axis::x, kPi / 2));

  const SpinState up = pole(target_count, true);
  const SpinState down = pole(target_count, false);
  for (const Eigen::Index row : {Eigen::Index(control_count), Eigen::Index(0)}) {
    const int twice_m = 2 * int(row) - control_count;
    const std::string key = half_integer_label(twice_m);
    report.branch_weights[key] = final_state.branch_weight(row);

    const SpinState pre = after_echo.conditional_target(row);
    report.pre_pulse_azimuths[key] = mean_direction(pre).phi();
    report.pre_pulse_fidelities[key] = fidelity(make_css(target_count, Direction(kPi / 2, twice_m * mu)), pre);

    const SpinState post = final_state.conditional_target(row);
    const double f_up = fidelity(up, post);
    const double f_down = fidelity(down, post);
    report.pairing[key] = f_up >= f_down ? "up" : "down";
    report.conditional_fidelities[key] = twice_m > 0 ? f_up : f_down;
  }
  report.final_state = final_state;
  return report;
}

ProtocolReport entangled_cat_parity(int target_count, int control_count, double mu) {
  ProtocolReport first = entangled_cat(target_count, control_count, mu);
  ProtocolReport second = entangled_cat(target_count + 1, control_count, mu);
  bool match = first.pairing == second.pairing;
  for (const auto& [key, f] : first.conditional_fidelities) {
    match = match && std::abs(f - second.conditional_fidelities.at(key)) < 1e-10;
    match = match && std::abs(first.branch_weights.at(key) - second.branch_weights.at(key)) < 1e-10;
  }
  ProtocolReport out = first;
  out.parity_runs = {std::move(first), std::move(second)};
  out.parity_match = match;
  return out;
}

Bipartite control_x_pulse(const Bipartite& state, double angle) {
  if (state.control_count() != 1) throw PreconditionViolation("control pulse is defined for a single control atom");
  return rotate_control(state, Rotation(Axis::x, angle));
}

std::vector<MeasurementOutcome> measure_control(const Bipartite& state) {
  if (state.control_count() != 1) throw PreconditionViolation("measurement is defined for a single control atom");
  std::vector<MeasurementOutcome> out;
  for (const auto& [label, row] : {std::pair{"up", Eigen::Index(1)}, std::pair{"down", Eigen::Index(0)}}) {
    const double p = state.branch_weight(row);
    std::optional<SpinState> post;
    if (p > 0) post = state.conditional_target(row);
    out.push_back({label, p, std::move(post)});
  }
  return out;
}

std::pair<ProtocolReport, ProtocolReport> transfer_cat(int target_count, TransferOptions options) {
  if (target_count < 1) throw PreconditionViolation("transfer_cat needs N >= 1");
  const SpinState target = make_css(target_count, Direction(kPi / 2, 0));
  const Bipartite entangled = echo_protocol(control_cat(1), target, kPi / 2);
  const Bipartite pulsed = control_x_pulse(entangled, kPi / 2);
  const auto outcomes = measure_control(pulsed);

  std::vector<ProtocolReport> reports;
  for (const auto& outcome : outcomes) {
    ProtocolReport r;
    r.protocol = "transfer";
    r.target_count = target_count;
    r.control_count = 1;
    r.mu = kPi / 2;
    for (const auto& o : outcomes) r.branch_weights[o.label] = o.probability;
    if (!outcome.post_state) throw Error("transfer measurement produced an empty branch");
    const double angle = outcome.label == std::string("up") ? kPi / 2 : -kPi / 2;
    const SpinState corrected = rotate(*outcome.post_state, Rotation(options.correction_axis, angle));
    r.conditional_fidelities[outcome.label] = cat_fidelity(corrected);
    const double f_up = fidelity(pole(target_count, true), corrected);
    const double f_down = fidelity(pole(target_count, false), corrected);
    r.pairing[outcome.label] = std::abs(f_up - f_down) < 1e-10 ? "both" : (f_up > f_down ? "up" : "down");
    r.final_state = corrected;
    reports.push_back(std::move(r));
  }
  return {std::move(reports[0]), std::move(reports[1])};
}

}  // namespace oats
