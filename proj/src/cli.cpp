#include "oats/cli.hpp"

#include "oats/io.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iomanip>
#include <ostream>
#include <random>
#include <regex>
#include <sstream>

namespace oats::cli {

namespace {

constexpr double kPi = std::numbers::pi;

class UsageError : public Error {
 public:
  using Error::Error;
};

std::pair<int, int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  try {
    if (colon == std::string::npos) {
      const int v = std::stoi(text);
      return {v, v};
    }
    return {std::stoi(text.substr(0, colon)), std::stoi(text.substr(colon + 1))};
  } catch (const std::logic_error&) {
    throw UsageError("expected an integer or a range lo:hi, got \"" + text + "\"");
  }
}

void emit(const std::string& content, const std::string& out_path, std::ostream& out) {
  if (out_path.empty()) {
    out << content;
  } else {
    io::write_text_file(resolve_output_path(out_path), content);
  }
}

std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

SpinState random_state(int atom_count, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Eigen::VectorXcd a(atom_count + 1);
  for (auto& x : a) x = {g(rng), g(rng)};
  return SpinState(atom_count, a / a.norm());
}

double decomposition_error(int order, int atom_count, int sign, int samples, std::mt19937_64& rng) {
  const Decomposition d = build_decomposition<double>(order, atom_count, sign);
  double worst = 0;
  for (int s = 0; s < samples; ++s) {
    const SpinState psi = random_state(atom_count, rng);
    const SpinState direct = apply_oats(psi, Squeezing(kPi / order, sign));
    const SpinState summed = apply_decomposition(psi, d);
    worst = std::max(worst, (direct.amplitudes() - summed.amplitudes()).cwiseAbs().maxCoeff());
  }
  return worst;
}

std::string format_double(double v, int precision) {
  std::ostringstream s;
  s << std::setprecision(precision) << v;
  return s.str();
}

struct Options {
  int n_target = 20;
  int n_control = 1;
  std::string mu = "pi/2";
  std::string theta = "pi/2";
  std::string phi = "0";
  std::string control_state;
  std::string out;
  std::string format = "json";
  bool parity = false;
  bool include_state = false;
  std::string correction_axis = "x";

  std::string order = "2";
  std::string atoms = "6";
  bool check = false;
  int sign = 1;
  int samples = 5;
  std::uint64_t seed = 2024;

  int gauss_n = 2;
  std::string k0 = "0";

  std::string state_path;
  int ntheta = 181;
  int nphi = 360;
  std::string scale = "peak";
  int control_row = -1;
  bool marginal = false;
  int n_atoms = 0;

  int max_atoms = 10;
};

int run_echo(const Options& o, std::ostream& out) {
  const double mu = parse_angle(o.mu).radians;
  SpinState control = o.control_state.empty()
                          ? SpinState(o.n_control, [&] {
                              Eigen::VectorXcd a = Eigen::VectorXcd::Zero(o.n_control + 1);
                              a(0) += 1 / std::sqrt(2.0);
                              a(o.n_control) += 1 / std::sqrt(2.0);
                              return a;
                            }())
                          : io::spin_state_from_json(io::json::parse(io::read_text_file(o.control_state)));
  const Direction dir(parse_angle(o.theta).radians, parse_angle(o.phi).radians);
  const Bipartite result = echo_protocol(control, make_css(o.n_target, dir), mu);
  emit(dump(io::to_json(result)), o.out, out);
  return 0;
}

int run_cat(const Options& o, std::ostream& out) {
  const double mu = parse_angle(o.mu).radians;
  const ProtocolReport r = o.parity ? entangled_cat_parity(o.n_target, o.n_control, mu) : entangled_cat(o.n_target, o.n_control, mu);
  emit(dump(io::to_json(r, o.include_state)), o.out, out);
  return 0;
}

int run_transfer(const Options& o, std::ostream& out) {
  TransferOptions opts;
  if (o.correction_axis == "x") {
    opts.correction_axis = Axis::x;
  } else if (o.correction_axis == "y") {
    opts.correction_axis = Axis::y;
  } else {
    throw UsageError("--correction-axis must be x or y");
  }
  const auto [up, down] = transfer_cat(o.n_target, opts);
  io::json j = {{"protocol", "transfer"}, {"n_target", o.n_target}, {"correction_axis", o.correction_axis},
                {"outcomes", io::json::array({io::to_json(up, o.include_state), io::to_json(down, o.include_state)})}};
  emit(dump(j), o.out, out);
  return 0;
}

int run_decompose(const Options& o, std::ostream& out) {
  const auto [n_lo, n_hi] = parse_range(o.order);
  const auto [a_lo, a_hi] = parse_range(o.atoms);
  if (n_lo < 1 || a_lo < 0 || n_hi < n_lo || a_hi < a_lo) throw UsageError("invalid --n / --n-atoms range");
  std::mt19937_64 rng(o.seed);
  std::ostringstream s;
  if (o.check) {
    s << "n,N,alpha,max_operator_error\n";
    bool ok = true;
    for (int n = n_lo; n <= n_hi; ++n) {
      for (int a = a_lo; a <= a_hi; ++a) {
        const double err = decomposition_error(n, a, o.sign, o.samples, rng);
        ok = ok && err < 1e-10;
        s << n << ',' << a << ',' << ((a + n) % 2 ? "0.5" : "0") << ',' << format_double(err, 6) << '\n';
      }
    }
    emit(s.str(), o.out, out);
    if (!ok) throw Error("decomposition operator error exceeded 1e-10");
    return 0;
  }
  if (n_lo != n_hi || a_lo != a_hi) throw UsageError("term listing needs a single --n and --n-atoms");
  const Decomposition d = build_decomposition<double>(n_lo, a_lo, o.sign);
  if (o.format == "json") {
    emit(dump(io::to_json(d)), o.out, out);
    return 0;
  }
  s << "l,coefficient_re,coefficient_im,z_angle\n" << std::setprecision(17);
  for (const auto& t : d.terms) s << t.l() << ',' << t.coefficient.real() << ',' << t.coefficient.imag() << ',' << t.z_angle << '\n';
  emit(s.str(), o.out, out);
  return 0;
}

int run_gauss_sum(const Options& o, std::ostream& out) {
  const GaussSumQuery q(o.gauss_n, parse_twice_half_integer(o.k0));
  const auto value = quadratic_gauss_sum<double>(q);
  const auto expected = gauss_sum_closed_form<double>(q.order);
  const double err = std::abs(value - expected);
  io::json j = {{"n", q.order},
                {"k0", q.twice_start / 2.0},
                {"value", {value.real(), value.imag()}},
                {"closed_form", {expected.real(), expected.imag()}},
                {"error", err},
                {"pass", err < 1e-10}};
  emit(dump(j), o.out, out);
  if (err >= 1e-10) throw Error("Gauss sum deviates from sqrt(n) e^{i pi/4}");
  return 0;
}

int run_husimi(const Options& o, std::ostream& out) {
  const HusimiScale scale = o.scale == "peak" ? HusimiScale::peak
                            : o.scale == "quasi" ? HusimiScale::quasi_probability
                                                 : throw UsageError("--scale must be peak or quasi");
  std::vector<PerimeterCircle<double>> circles;
  io::json meta;
  Husimi grid;
  if (!o.state_path.empty()) {
    const io::json j = io::json::parse(io::read_text_file(o.state_path));
    if (j.contains("n_control")) {
      const Bipartite b = io::bipartite_from_json(j);
      if (o.marginal || o.control_row < 0) {
        grid = marginal_husimi_grid(b, o.ntheta, o.nphi, scale);
        meta = {{"source", o.state_path}, {"kind", "bipartite"}, {"view", "marginal"}};
      } else {
        grid = husimi_grid(b, o.control_row, o.ntheta, o.nphi, scale);
        meta = {{"source", o.state_path}, {"kind", "bipartite"}, {"view", "conditional"}, {"control_row", o.control_row}};
      }
    } else {
      grid = husimi_grid(io::spin_state_from_json(j), o.ntheta, o.nphi, scale);
      meta = {{"source", o.state_path}, {"kind", "collective"}};
    }
  } else {
    if (o.n_atoms < 1) throw UsageError("husimi needs --state or --n-atoms with --mu");
    const AngleArg mu = parse_angle(o.mu);
    const Direction source(parse_angle(o.theta).radians, parse_angle(o.phi).radians);
    const SpinState css = make_css(o.n_atoms, source);
    const SpinState squeezed = apply_oats(css, Squeezing(mu.radians));
    grid = husimi_grid(squeezed, o.ntheta, o.nphi, scale);
    meta = {{"kind", "squeezed_css"}, {"n_atoms", o.n_atoms}, {"mu", mu.radians},
            {"source", {{"theta", source.theta()}, {"phi", source.phi()}}}};
    std::optional<DecompositionOrder> order;
    if (mu.exact) order = decomposition_order(*mu.exact);
    if (order) {
      meta["decomposition_order"] = order->order;
      const auto comps = css_components(squeezed, build_decomposition<double>(order->order, o.n_atoms, order->sign), source);
      for (const auto& c : comps) circles.push_back(css_perimeter(o.n_atoms, c.direction));
    }
  }
  std::ostringstream csv;
  io::write_husimi_csv(csv, grid);
  emit(csv.str(), o.out, out);
  if (!o.out.empty()) io::write_text_file(resolve_output_path(o.out) + ".json", dump(io::husimi_sidecar(grid, circles, meta)));
  return 0;
}

int run_oracle_check(const Options& o, std::ostream& out) {
  const auto summary = oracle::cross_check(o.max_atoms, o.seed);
  emit(dump(io::to_json(summary)), o.out, out);
  return summary.all_pass ? 0 : 1;
}

}  // namespace

AngleArg parse_angle(const std::string& text) {
  static const std::regex pi_form(R"(^\s*([+-])?(\d+)?\*?pi(?:/(\d+))?\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, pi_form)) {
    const std::int64_t num = (m[2].matched ? std::stoll(m[2].str()) : 1) * (m[1].matched && m[1].str() == "-" ? -1 : 1);
    const std::int64_t den = m[3].matched ? std::stoll(m[3].str()) : 1;
    if (den == 0) throw UsageError("zero denominator in \"" + text + "\"");
    const PiFraction f(num, den);
    return {f.value(), f};
  }
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw UsageError("trailing characters in angle \"" + text + "\"");
    return {v, std::nullopt};
  } catch (const std::logic_error&) {
    throw UsageError("cannot parse angle \"" + text + "\"");
  }
}

int parse_twice_half_integer(const std::string& text) {
  static const std::regex frac(R"(^\s*([+-]?\d+)/2\s*$)");
  std::smatch m;
  if (std::regex_match(text, m, frac)) return std::stoi(m[1].str());
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    const double twice = 2 * v;
    if (used != text.size() || twice != std::round(twice)) throw UsageError("not a half-integer: \"" + text + "\"");
    return int(std::lround(twice));
  } catch (const std::logic_error&) {
    throw UsageError("not a half-integer: \"" + text + "\"");
  }
}

std::string resolve_output_path(const std::string& path) {
  const char* dir = std::getenv("OATS_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0' || std::filesystem::path(path).is_absolute()) return path;
  return (std::filesystem::path(dir) / path).string();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"One-axis-twist squeezing echo simulator"};
  app.require_subcommand(1);
  Options o;

  auto* echo = app.add_subcommand("echo", "Squeeze/unsqueeze echo on a control and a target group");
  echo->add_option("--n-target", o.n_target)->required();
  echo->add_option("--n-control", o.n_control);
  echo->add_option("--mu", o.mu);
  echo->add_option("--theta", o.theta, "Target CSS polar angle");
  echo->add_option("--phi", o.phi, "Target CSS azimuth");
  echo->add_option("--control-state", o.control_state, "Control state JSON (default: cat of the control group)");
  echo->add_option("--out", o.out);

  auto* cat = app.add_subcommand("cat", "Deterministic entangled cat");
  cat->add_option("--n-target", o.n_target)->required();
  cat->add_option("--n-control", o.n_control);
  cat->add_option("--mu", o.mu);
  cat->add_flag("--parity", o.parity, "Also run N+1 and compare");
  cat->add_flag("--include-state", o.include_state);
  cat->add_option("--out", o.out);

  auto* transfer = app.add_subcommand("transfer", "Measurement-conditioned cat transfer to the target");
  transfer->add_option("--n-target", o.n_target)->required();
  transfer->add_option("--correction-axis", o.correction_axis);
  transfer->add_flag("--include-state", o.include_state);
  transfer->add_option("--out", o.out);

  auto* decompose = app.add_subcommand("decompose", "Rotation-sum form of exp(-i (pi/n) S_z^2)");
  decompose->add_option("--n", o.order, "Order n or range lo:hi")->required();
  decompose->add_option("--n-atoms", o.atoms, "Atom count N or range lo:hi")->required();
  decompose->add_flag("--check", o.check, "Compare against direct phases on random states");
  decompose->add_option("--sign", o.sign)->check(CLI::IsMember({-1, 1}));
  decompose->add_option("--samples", o.samples);
  decompose->add_option("--seed", o.seed);
  decompose->add_option("--format", o.format)->check(CLI::IsMember({"csv", "json"}));
  decompose->add_option("--out", o.out);

  auto* gauss = app.add_subcommand("gauss-sum", "Quadratic Gauss sum over n consecutive k");
  gauss->add_option("--n", o.gauss_n)->required();
  gauss->add_option("--k0", o.k0, "Start index (integer for even n, half-integer for odd n)");
  gauss->add_option("--out", o.out);

  auto* husimi = app.add_subcommand("husimi", "Husimi distribution on a (theta, phi) grid");
  husimi->add_option("--state", o.state_path, "State JSON (collective or bipartite)");
  husimi->add_option("--n-atoms", o.n_atoms, "Squeeze CSS(theta, phi) of this many atoms instead");
  husimi->add_option("--mu", o.mu);
  husimi->add_option("--theta", o.theta);
  husimi->add_option("--phi", o.phi);
  husimi->add_option("--ntheta", o.ntheta);
  husimi->add_option("--nphi", o.nphi);
  husimi->add_option("--scale", o.scale);
  husimi->add_option("--control-row", o.control_row, "Condition a bipartite state on this control row");
  husimi->add_flag("--marginal", o.marginal);
  husimi->add_option("--out", o.out);

  auto* oracle_check = app.add_subcommand("oracle-check", "Compare against the product-space oracle");
  oracle_check->add_option("--max-atoms", o.max_atoms);
  oracle_check->add_option("--seed", o.seed);
  oracle_check->add_option("--out", o.out);

  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << io::json{{"error", e.what()}, {"kind", "usage"}}.dump() << '\n';
    return 2;
  }

  try {
    if (*echo) return run_echo(o, out);
    if (*cat) return run_cat(o, out);
    if (*transfer) return run_transfer(o, out);
    if (*decompose) return run_decompose(o, out);
    if (*gauss) return run_gauss_sum(o, out);
    if (*husimi) return run_husimi(o, out);
    if (*oracle_check) return run_oracle_check(o, out);
  } catch (const UsageError& e) {
    err << io::json{{"error", e.what()}, {"kind", "usage"}}.dump() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << io::json{{"error", e.what()}, {"kind", "contract"}}.dump() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace oats::cli
