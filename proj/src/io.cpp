#include "oats/io.hpp"

#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

namespace oats::io {

namespace {

json complex_pair(std::complex<double> z) { return json::array({z.real(), z.imag()}); }

std::complex<double> parse_pair(const json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw Error("amplitude entries must be [re, im] pairs");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

int require_count(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key) || !j[key].is_number_integer()) {
    throw Error(std::string("missing integer field \"") + key + "\"");
  }
  const int n = j[key].get<int>();
  if (n < 0) throw Error(std::string("field \"") + key + "\" must be non-negative");
  return n;
}

const json& require_amplitudes(const json& j, std::size_t expected) {
  if (!j.contains("amplitudes") || !j["amplitudes"].is_array()) throw Error("missing \"amplitudes\" array");
  const json& a = j["amplitudes"];
  if (a.size() != expected) {
    throw Error("expected " + std::to_string(expected) + " amplitudes, got " + std::to_string(a.size()));
  }
  return a;
}

json state_variant_to_json(const std::variant<std::monostate, Bipartite, SpinState>& s) {
  if (const auto* b = std::get_if<Bipartite>(&s)) return to_json(*b);
  if (const auto* c = std::get_if<SpinState>(&s)) return to_json(*c);
  return nullptr;
}

const char* scale_name(HusimiScale s) { return s == HusimiScale::peak ? "peak" : "quasi_probability"; }

}  // namespace

json to_json(const SpinState& state) {
  json amps = json::array();
  for (Eigen::Index i = 0; i < state.dimension(); ++i) amps.push_back(complex_pair(state[i]));
  return {{"n_atoms", state.atom_count()}, {"amplitudes", std::move(amps)}};
}

SpinState spin_state_from_json(const json& j) {
  const int n = require_count(j, "n_atoms");
  const json& a = require_amplitudes(j, std::size_t(n) + 1);
  Eigen::VectorXcd v(n + 1);
  for (int i = 0; i <= n; ++i) v(i) = parse_pair(a[std::size_t(i)]);
  return SpinState(n, v);
}

json to_json(const Bipartite& state) {
  json amps = json::array();
  const auto& a = state.amplitudes();
  for (Eigen::Index r = 0; r < a.rows(); ++r) {
    for (Eigen::Index c = 0; c < a.cols(); ++c) amps.push_back(complex_pair(a(r, c)));
  }
  return {{"n_control", state.control_count()}, {"n_target", state.target_count()}, {"amplitudes", std::move(amps)}};
}

Bipartite bipartite_from_json(const json& j) {
  const int nc = require_count(j, "n_control");
  const int nt = require_count(j, "n_target");
  const json& a = require_amplitudes(j, std::size_t(nc + 1) * std::size_t(nt + 1));
  Eigen::MatrixXcd m(nc + 1, nt + 1);
  std::size_t k = 0;
  for (int r = 0; r <= nc; ++r) {
    for (int c = 0; c <= nt; ++c) m(r, c) = parse_pair(a[k++]);
  }
  return Bipartite(nc, nt, m);
}

json to_json(const ProtocolReport& report, bool include_state) {
  json j = {{"protocol", report.protocol},
            {"n_target", report.target_count},
            {"n_control", report.control_count},
            {"mu", report.mu},
            {"branch_weights", report.branch_weights},
            {"conditional_fidelities", report.conditional_fidelities},
            {"pairing", report.pairing}};
  if (!report.pre_pulse_azimuths.empty()) j["pre_pulse_azimuths"] = report.pre_pulse_azimuths;
  if (!report.pre_pulse_fidelities.empty()) j["pre_pulse_fidelities"] = report.pre_pulse_fidelities;
  if (report.parity_match) {
    json runs = json::array();
    for (const auto& r : report.parity_runs) runs.push_back(to_json(r, false));
    j["parity_checked"] = {{"runs", std::move(runs)}, {"match", *report.parity_match}};
  }
  if (include_state) j["final_state"] = state_variant_to_json(report.final_state);
  return j;
}

json to_json(const Decomposition& d) {
  json terms = json::array();
  for (const auto& t : d.terms) {
    terms.push_back({{"l", t.l()}, {"coefficient", complex_pair(t.coefficient)}, {"z_angle", t.z_angle}});
  }
  return {{"order", d.order}, {"n_atoms", d.atom_count}, {"alpha", d.alpha()}, {"sign", d.sign}, {"terms", std::move(terms)}};
}

json to_json(const oracle::CheckSummary& summary) {
  json cases = json::array();
  for (const auto& c : summary.cases) {
    cases.push_back({{"protocol", c.protocol},
                     {"n_target", c.target_count},
                     {"n_control", c.control_count},
                     {"mu", c.mu},
                     {"amplitude_error", c.amplitude_error},
                     {"observable_error", c.observable_error},
                     {"leakage", c.leakage},
                     {"pass", c.pass}});
  }
  return {{"pass", summary.all_pass},
          {"amplitude_tolerance", summary.amplitude_tolerance},
          {"leakage_tolerance", summary.leakage_tolerance},
          {"cases", std::move(cases)}};
}

void write_husimi_csv(std::ostream& out, const Husimi& grid) {
  std::ostringstream s;
  s << std::setprecision(6);
  s << "theta\\phi";
  for (double p : grid.phi) s << ',' << p;
  s << '\n';
  for (std::size_t i = 0; i < grid.theta.size(); ++i) {
    s << grid.theta[i];
    for (Eigen::Index j = 0; j < grid.values.cols(); ++j) s << ',' << grid.values(Eigen::Index(i), j);
    s << '\n';
  }
  out << s.str();
}

json husimi_sidecar(const Husimi& grid, const std::vector<PerimeterCircle<double>>& circles, const json& state_metadata) {
  json cj = json::array();
  for (const auto& c : circles) {
    cj.push_back({{"theta", c.center.theta()}, {"phi", c.center.phi()}, {"angular_radius", c.angular_radius}});
  }
  return {{"n_theta", grid.theta.size()},
          {"n_phi", grid.phi.size()},
          {"n_atoms", grid.atom_count},
          {"scale", scale_name(grid.scale)},
          {"state", state_metadata},
          {"perimeter_circles", std::move(cj)}};
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write " + path);
  out << content;
  if (!out) throw Error("failed writing " + path);
}

}  // namespace oats::io
