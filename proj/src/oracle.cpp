#include "oats/oracle.hpp"

#include "oats/echo.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <random>

namespace oats::oracle {

namespace {

constexpr double kPi = std::numbers::pi;

double binomial(int n, int k) {
  double c = 1;
  for (int j = 1; j <= k; ++j) c = c * double(n - k + j) / double(j);
  return c;
}

int popcount(std::uint32_t bits) { return std::popcount(bits); }

void check_size(int total) {
  if (total > kMaxAtoms) throw PreconditionViolation("oracle is capped at " + std::to_string(kMaxAtoms) + " atoms");
  if (total < 0) throw PreconditionViolation("negative atom count");
}

// exp(-i angle sigma_axis / 2) in the (up, down) basis.
Eigen::Matrix2cd single_atom_rotation(Axis axis, double angle) {
  const std::complex<double> i(0, 1);
  Eigen::Matrix2cd sigma;
  switch (axis) {
    case Axis::x: sigma << 0, 1, 1, 0; break;
    case Axis::y: sigma << 0, -i, i, 0; break;
    case Axis::z: sigma << 1, 0, 0, -1; break;
  }
  return std::cos(angle / 2) * Eigen::Matrix2cd::Identity() - i * std::sin(angle / 2) * sigma;
}

bool in_group(const Layout& layout, int atom, Group group) {
  const bool is_control = atom < layout.control_count;
  return group == Group::both || (group == Group::control) == is_control;
}

}  // namespace

Eigen::VectorXcd tensor_power(int atom_count, const Direction& direction) {
  check_size(atom_count);
  const std::complex<double> up = std::cos(direction.theta() / 2);
  const std::complex<double> down = std::polar(std::sin(direction.theta() / 2), direction.phi());
  Eigen::VectorXcd v(std::size_t(1) << atom_count);
  for (std::uint32_t idx = 0; idx < v.size(); ++idx) {
    std::complex<double> a = 1;
    for (int j = 0; j < atom_count; ++j) a *= (idx >> j) & 1u ? up : down;
    v(idx) = a;
  }
  return v;
}

Eigen::VectorXcd embed_symmetric(const SpinState& state) {
  const int n = state.atom_count();
  check_size(n);
  Eigen::VectorXcd v(std::size_t(1) << n);
  for (std::uint32_t idx = 0; idx < v.size(); ++idx) {
    const int k = popcount(idx);
    v(idx) = state[k] / std::sqrt(binomial(n, k));
  }
  return v;
}

ProductState join(const Layout& layout, const Eigen::VectorXcd& control, const Eigen::VectorXcd& target) {
  check_size(layout.total());
  if (control.size() != (Eigen::Index(1) << layout.control_count) ||
      target.size() != (Eigen::Index(1) << layout.target_count)) {
    throw DimensionMismatch("group vectors do not match the layout");
  }
  ProductState s{layout.total(), Eigen::VectorXcd(std::size_t(1) << layout.total())};
  for (std::uint32_t idx = 0; idx < s.amplitudes.size(); ++idx) {
    s.amplitudes(idx) = control(layout.control_bits(idx)) * target(layout.target_bits(idx));
  }
  return s;
}

void apply_squeezing(ProductState& state, const Layout& layout, Group group, double mu, int sign) {
  for (std::uint32_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    double m = 0;
    for (int j = 0; j < state.total_atoms; ++j) {
      if (in_group(layout, j, group)) m += (idx >> j) & 1u ? 0.5 : -0.5;
    }
    state.amplitudes(idx) *= std::polar(1.0, -double(sign) * mu * m * m);
  }
}

void apply_rotation(ProductState& state, const Layout& layout, Group group, Axis axis, double angle) {
  const Eigen::Matrix2cd u = single_atom_rotation(axis, angle);
  for (int j = 0; j < state.total_atoms; ++j) {
    if (!in_group(layout, j, group)) continue;
    const std::uint32_t bit = 1u << j;
    for (std::uint32_t idx = 0; idx < state.amplitudes.size(); ++idx) {
      if (idx & bit) continue;
      const std::complex<double> down = state.amplitudes(idx);
      const std::complex<double> up = state.amplitudes(idx | bit);
      state.amplitudes(idx | bit) = u(0, 0) * up + u(0, 1) * down;
      state.amplitudes(idx) = u(1, 0) * up + u(1, 1) * down;
    }
  }
}

Eigen::MatrixXcd project_symmetric(const ProductState& state, const Layout& layout) {
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(layout.control_count + 1, layout.target_count + 1);
  for (std::uint32_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    const int kc = popcount(layout.control_bits(idx));
    const int kt = popcount(layout.target_bits(idx));
    p(kc, kt) += state.amplitudes(idx);
  }
  for (int kc = 0; kc <= layout.control_count; ++kc) {
    for (int kt = 0; kt <= layout.target_count; ++kt) {
      p(kc, kt) /= std::sqrt(binomial(layout.control_count, kc) * binomial(layout.target_count, kt));
    }
  }
  return p;
}

double leakage(const ProductState& state, const Layout& layout) {
  return std::max(0.0, state.amplitudes.squaredNorm() - project_symmetric(state, layout).squaredNorm());
}

double target_sz(const ProductState& state, const Layout& layout) {
  double acc = 0;
  for (std::uint32_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    acc += std::norm(state.amplitudes(idx)) * (popcount(layout.target_bits(idx)) - 0.5 * layout.target_count);
  }
  return acc / state.amplitudes.squaredNorm();
}

double target_sz_squared(const ProductState& state, const Layout& layout) {
  double acc = 0;
  for (std::uint32_t idx = 0; idx < state.amplitudes.size(); ++idx) {
    const double m = popcount(layout.target_bits(idx)) - 0.5 * layout.target_count;
    acc += std::norm(state.amplitudes(idx)) * m * m;
  }
  return acc / state.amplitudes.squaredNorm();
}

std::string protocol_name(ProtocolId id) {
  switch (id) {
    case ProtocolId::echo: return "echo";
    case ProtocolId::entangled_cat: return "cat";
    case ProtocolId::transfer: return "transfer";
  }
  return "unknown";
}

namespace {

void track(Result& r, const ProductState& s, const Layout& layout) { r.max_leakage = std::max(r.max_leakage, leakage(s, layout)); }

void finish(Result& r, const Layout& layout) {
  r.symmetric = project_symmetric(r.state, layout);
  r.target_sz = target_sz(r.state, layout);
  r.target_sz_squared = target_sz_squared(r.state, layout);
}

// Control-level branch probability and the fidelity of the target with a
// product-space reference, summed over control configurations in the level.
Branch score_level(const ProductState& s, const Layout& layout, int control_up, const Eigen::VectorXcd& reference,
                   const std::string& label) {
  Branch b;
  b.label = label;
  const std::uint32_t n_control = 1u << layout.control_count;
  const std::uint32_t n_target = 1u << layout.target_count;
  double overlap_sq = 0;
  for (std::uint32_t cb = 0; cb < n_control; ++cb) {
    if (popcount(cb) != control_up) continue;
    std::complex<double> ov = 0;
    for (std::uint32_t tb = 0; tb < n_target; ++tb) {
      const std::complex<double> a = s.amplitudes(cb | (tb << layout.control_count));
      b.probability += std::norm(a);
      ov += std::conj(reference(tb)) * a;
    }
    overlap_sq += std::norm(ov);
  }
  b.fidelity = b.probability > 0 ? overlap_sq / b.probability : 0;
  b.probability /= s.amplitudes.squaredNorm();
  const Eigen::MatrixXcd proj = project_symmetric(s, layout);
  const Eigen::VectorXcd row = proj.row(control_up).transpose();
  if (row.norm() > 0) b.target_symmetric = row / row.norm();
  return b;
}

Eigen::VectorXcd pole_vector(int atom_count, bool up) {
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(std::size_t(1) << atom_count);
  v(up ? v.size() - 1 : 0) = 1;
  return v;
}

}  // namespace

Result run_echo(int target_count, int control_count, double mu, const EchoInputs& inputs) {
  const Layout layout{control_count, target_count};
  check_size(layout.total());
  Result r;
  ProductState s = join(layout, inputs.control, tensor_power(target_count, inputs.target_direction));
  track(r, s, layout);
  apply_squeezing(s, layout, Group::both, mu, +1);
  track(r, s, layout);
  apply_squeezing(s, layout, Group::target, mu, -1);
  track(r, s, layout);
  r.state = s;
  finish(r, layout);
  for (int k = 0; k <= control_count; ++k) {
    const double m = k - 0.5 * control_count;
    const Direction turned(inputs.target_direction.theta(), inputs.target_direction.phi() + 2 * m * mu);
    r.branches.push_back(score_level(s, layout, k, tensor_power(target_count, turned), half_integer_label(2 * k - control_count)));
  }
  return r;
}

Result run_entangled_cat(int target_count, int control_count, double mu) {
  const Layout layout{control_count, target_count};
  check_size(layout.total());
  Eigen::VectorXcd control = Eigen::VectorXcd::Zero(std::size_t(1) << control_count);
  control(0) += 1 / std::sqrt(2.0);
  control(control.size() - 1) += 1 / std::sqrt(2.0);
  Result r;
  ProductState s = join(layout, control, pole_vector(target_count, true));
  track(r, s, layout);
  apply_rotation(s, layout, Group::target, Axis::y, kPi / 2);
  track(r, s, layout);
  apply_squeezing(s, layout, Group::both, mu, +1);
  track(r, s, layout);
  apply_squeezing(s, layout, Group::target, mu, -1);
  track(r, s, layout);
  apply_rotation(s, layout, Group::target, Axis::x, kPi / 2);
  track(r, s, layout);
  r.state = s;
  finish(r, layout);
  r.branches.push_back(score_level(s, layout, control_count, pole_vector(target_count, true), half_integer_label(control_count)));
  r.branches.push_back(score_level(s, layout, 0, pole_vector(target_count, false), half_integer_label(-control_count)));
  return r;
}

Result run_transfer(int target_count, Axis correction_axis) {
  const Layout layout{1, target_count};
  check_size(layout.total());
  Eigen::VectorXcd control(2);
  control << 1 / std::sqrt(2.0), 1 / std::sqrt(2.0);
  Result r;
  ProductState s = join(layout, control, tensor_power(target_count, Direction(kPi / 2, 0)));
  track(r, s, layout);
  apply_squeezing(s, layout, Group::both, kPi / 2, +1);
  track(r, s, layout);
  apply_squeezing(s, layout, Group::target, kPi / 2, -1);
  track(r, s, layout);
  apply_rotation(s, layout, Group::control, Axis::x, kPi / 2);
  track(r, s, layout);
  r.state = s;
  finish(r, layout);

  const Layout target_only{0, target_count};
  for (const auto& [label, bit] : {std::pair{"up", 1u}, std::pair{"down", 0u}}) {
    Branch b;
    b.label = label;
    ProductState t{target_count, Eigen::VectorXcd(std::size_t(1) << target_count)};
    for (std::uint32_t tb = 0; tb < t.amplitudes.size(); ++tb) t.amplitudes(tb) = s.amplitudes(bit | (tb << 1));
    b.probability = t.amplitudes.squaredNorm() / s.amplitudes.squaredNorm();
    if (b.probability > 0) {
      t.amplitudes /= t.amplitudes.norm();
      apply_rotation(t, target_only, Group::target, correction_axis, bit ? kPi / 2 : -kPi / 2);
      const double up = std::abs(t.amplitudes(t.amplitudes.size() - 1));
      const double down = std::abs(t.amplitudes(0));
      b.fidelity = (up + down) * (up + down) / 2;
      b.target_leakage = leakage(t, target_only);
      r.max_leakage = std::max(r.max_leakage, b.target_leakage);
      const Eigen::VectorXcd row = project_symmetric(t, target_only).row(0).transpose();
      b.target_symmetric = row / row.norm();
    }
    r.branches.push_back(std::move(b));
  }
  return r;
}

Result oracle_run(ProtocolId id, int target_count, int control_count, double mu) {
  switch (id) {
    case ProtocolId::echo: {
      Eigen::VectorXcd control = Eigen::VectorXcd::Zero(std::size_t(1) << control_count);
      control(0) += 1 / std::sqrt(2.0);
      control(control.size() - 1) += 1 / std::sqrt(2.0);
      if (control_count == 0) control(0) = 1;
      return run_echo(target_count, control_count, mu, EchoInputs{control});
    }
    case ProtocolId::entangled_cat: return run_entangled_cat(target_count, control_count, mu);
    case ProtocolId::transfer:
      if (control_count != 1) throw PreconditionViolation("transfer protocol uses a single control atom");
      return run_transfer(target_count);
  }
  throw PreconditionViolation("unknown protocol");
}

namespace {

double max_abs_diff(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return std::numeric_limits<double>::infinity();
  return (a - b).cwiseAbs().maxCoeff();
}

double engine_target_sz(const Bipartite& s) {
  double acc = 0;
  for (Eigen::Index c = 0; c < s.amplitudes().cols(); ++c) acc += s.amplitudes().col(c).squaredNorm() * s.target_m(c);
  return acc;
}

double engine_target_sz_squared(const Bipartite& s) {
  double acc = 0;
  for (Eigen::Index c = 0; c < s.amplitudes().cols(); ++c) {
    acc += s.amplitudes().col(c).squaredNorm() * s.target_m(c) * s.target_m(c);
  }
  return acc;
}

SpinState random_state(int atom_count, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd a(atom_count + 1);
  for (auto& x : a) x = {g(rng), g(rng)};
  return SpinState(atom_count, a / a.norm());
}

}  // namespace

CheckSummary cross_check(int max_total_atoms, std::uint64_t seed) {
  check_size(max_total_atoms);
  CheckSummary summary{{}, 1e-10, 1e-12, true};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::uniform_real_distribution<double> polar(0, kPi);

  auto record = [&](CheckCase c) {
    c.pass = c.amplitude_error < summary.amplitude_tolerance && c.observable_error < summary.amplitude_tolerance &&
             c.leakage < summary.leakage_tolerance;
    summary.all_pass = summary.all_pass && c.pass;
    summary.cases.push_back(c);
  };

  for (int nc = 1; nc <= 3; ++nc) {
    for (int nt = 1; nt + nc <= max_total_atoms; ++nt) {
      // Echo with a random symmetric control and a random target direction.
      {
        const double mu = angle(rng);
        const SpinState control = random_state(nc, rng);
        const Direction dir(polar(rng), angle(rng));
        const Result o = run_echo(nt, nc, mu, EchoInputs{embed_symmetric(control), dir});
        const Bipartite e = echo_protocol(control, make_css(nt, dir), mu);
        double obs = std::abs(o.target_sz - engine_target_sz(e));
        obs = std::max(obs, std::abs(o.target_sz_squared - engine_target_sz_squared(e)));
        for (int k = 0; k <= nc; ++k) {
          const Branch& b = o.branches[std::size_t(k)];
          obs = std::max(obs, std::abs(b.probability - e.branch_weight(k)));
          if (e.branch_weight(k) < 1e-14) continue;
          const double m = k - 0.5 * nc;
          const double f = fidelity(make_css(nt, Direction(dir.theta(), dir.phi() + 2 * m * mu)), e.conditional_target(k));
          obs = std::max(obs, std::abs(b.fidelity - f));
        }
        record({"echo", nt, nc, mu, max_abs_diff(o.symmetric, e.amplitudes()), obs, o.max_leakage, false});
      }
      // Deterministic cat at mu N' = pi/2.
      {
        const double mu = kPi / (2 * nc);
        const Result o = run_entangled_cat(nt, nc, mu);
        const ProtocolReport rep = entangled_cat(nt, nc, mu);
        const Bipartite& e = std::get<Bipartite>(rep.final_state);
        double obs = std::abs(o.target_sz - engine_target_sz(e));
        obs = std::max(obs, std::abs(o.target_sz_squared - engine_target_sz_squared(e)));
        for (const Branch& b : o.branches) {
          obs = std::max(obs, std::abs(b.probability - rep.branch_weights.at(b.label)));
          obs = std::max(obs, std::abs(b.fidelity - rep.conditional_fidelities.at(b.label)));
        }
        record({"cat", nt, nc, mu, max_abs_diff(o.symmetric, e.amplitudes()), obs, o.max_leakage, false});
      }
    }
  }

  for (int nt = 1; nt + 1 <= max_total_atoms; ++nt) {
    const Result o = run_transfer(nt);
    const SpinState control(1, Eigen::Vector2cd(1 / std::sqrt(2.0), 1 / std::sqrt(2.0)));
    const Bipartite pre =
        control_x_pulse(echo_protocol(control, make_css(nt, Direction(kPi / 2, 0)), kPi / 2), kPi / 2);
    const auto [up, down] = transfer_cat(nt);
    double amp = max_abs_diff(o.symmetric, pre.amplitudes());
    double obs = std::abs(o.target_sz - engine_target_sz(pre));
    obs = std::max(obs, std::abs(o.target_sz_squared - engine_target_sz_squared(pre)));
    for (const ProtocolReport* rep : {&up, &down}) {
      const std::string label = rep->conditional_fidelities.begin()->first;
      const Branch& b = label == "up" ? o.branches[0] : o.branches[1];
      obs = std::max(obs, std::abs(b.probability - rep->branch_weights.at(label)));
      obs = std::max(obs, std::abs(b.fidelity - rep->conditional_fidelities.at(label)));
      amp = std::max(amp, max_abs_diff(b.target_symmetric, std::get<SpinState>(rep->final_state).amplitudes()));
    }
    record({"transfer", nt, 1, kPi / 2, amp, obs, o.max_leakage, false});
  }
  return summary;
}

}  // namespace oats::oracle
