// Command-line front end for the pu library.
//
// Exit status: 0 success, 1 domain error or failed verification, 2 usage error.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pu/dynamics.hpp"
#include "pu/errors.hpp"
#include "pu/hierarchy.hpp"
#include "pu/report_io.hpp"
#include "pu/symmetry.hpp"
#include "pu/transform.hpp"
#include "pu/verify.hpp"

namespace {

using nlohmann::ordered_json;

struct Options {
  std::optional<double> alpha, beta, omega1, omega2;
  std::uint64_t seed = 42;
  std::optional<double> tol;
  std::string out;
  std::string format;

  std::vector<std::string> suites;
  std::size_t n = 4;
  std::string kind = "Ta2+";
  double ax = 1.0, ay = 1.0, bx = 0.0, by = 1.0, g = 0.0;
  std::string generator = "X3";
  double s = 1.0;
  double h = 1e-3;
  double t_end = 10.0;
  double dt = 0.1;
  std::string potential;
  pu::Amplitudes amp;
};

pu::PuParams resolve_params(const Options& o) {
  const bool coeffs = o.alpha || o.beta;
  const bool freqs = o.omega1 || o.omega2;
  if (coeffs == freqs) {
    throw pu::UsageError("give exactly one of --alpha/--beta or --omega1/--omega2");
  }
  if (coeffs) {
    if (!o.alpha || !o.beta) throw pu::UsageError("--alpha and --beta go together");
    return pu::PuParams::from_coefficients(*o.alpha, *o.beta);
  }
  if (!o.omega1 || !o.omega2) throw pu::UsageError("--omega1 and --omega2 go together");
  return pu::PuParams::from_frequencies(*o.omega1, *o.omega2);
}

double resolve_tol(const Options& o) {
  double tol = 1e-9;
  if (o.tol) {
    tol = *o.tol;
  } else if (const char* env = std::getenv("PU_TOL"); env && *env) {
    char* end = nullptr;
    tol = std::strtod(env, &end);
    if (end == env || *end != '\0') throw pu::UsageError("PU_TOL is not a number");
  }
  if (!(tol > 0.0)) throw pu::UsageError("tolerance must be positive");
  return tol;
}

std::string resolve_format(const Options& o, std::initializer_list<const char*> allowed) {
  if (o.format.empty()) return *allowed.begin();
  for (const char* f : allowed) {
    if (o.format == f) return o.format;
  }
  throw pu::UsageError("format '" + o.format + "' is not available for this command");
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
  } else {
    pu::write_atomic(o.out, text);
  }
}

std::string csv_text(const pu::Table& t) {
  std::ostringstream ss;
  pu::write_csv(ss, t);
  return ss.str();
}

ordered_json matrix_json(const pu::Mat& m) {
  ordered_json rows = ordered_json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    ordered_json row = ordered_json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(row);
  }
  return rows;
}

int cmd_verify(const Options& o) {
  resolve_format(o, {"json"});
  pu::VerifyConfig cfg{resolve_params(o), o.seed, resolve_tol(o)};
  pu::VerificationReport rep;
  if (o.suites.empty()) {
    rep = pu::run_verification(cfg);
  } else {
    rep.seed = cfg.seed;
    for (const auto& name : o.suites) rep.append(pu::run_suite(name, cfg));
  }
  emit(o, pu::report_to_json(rep));
  return rep.pass() ? 0 : 1;
}

int cmd_hierarchy(const Options& o) {
  const auto fmt = resolve_format(o, {"csv", "json"});
  const auto p = resolve_params(o);
  if (o.n < 1) throw pu::UsageError("--n must be at least 1");
  const auto ladder = pu::ChargeLadder::build(p, o.n);
  pu::Table t{{"n", "on_h1", "on_h2", "P_n"}, {}};
  for (std::size_t k = 0; k < ladder.depth(); ++k) {
    const auto& c = ladder.coordinates()[k];
    t.rows.push_back({static_cast<double>(k + 1), c.on_h1, c.on_h2,
                      pu::pu_polynomial(static_cast<int>(k + 1), p)});
  }
  if (fmt == "csv") {
    emit(o, csv_text(t));
    return 0;
  }
  ordered_json rows = ordered_json::array();
  for (const auto& r : t.rows) {
    rows.push_back({{"n", static_cast<int>(r[0])}, {"on_h1", r[1]}, {"on_h2", r[2]}, {"P_n", r[3]}});
  }
  emit(o, ordered_json{{"alpha", p.alpha()}, {"beta", p.beta()}, {"charges", rows}}.dump(2) + "\n");
  return 0;
}

int cmd_transform(const Options& o) {
  resolve_format(o, {"json"});
  const auto p = resolve_params(o);
  pu::TransformKind kind;
  try {
    kind = pu::parse_transform_kind(o.kind);
  } catch (const pu::InvalidInput& e) {
    throw pu::UsageError(e.what());
  }
  const auto spec = pu::build(kind, p, {o.ax, o.ay, o.bx, o.by, o.g});
  const auto pb = pu::pullback_hamiltonian(spec, p);
  ordered_json j;
  j["kind"] = std::string(pu::to_string(kind));
  j["mu"] = spec.mu;
  j["nu"] = spec.nu;
  j["lagrangian"] = {{"ax", spec.lag.ax}, {"ay", spec.lag.ay}, {"bx", spec.lag.bx},
                     {"by", spec.lag.by}, {"g", spec.lag.g}};
  j["mapping_residual"] = pu::equation_mapping_residual(spec, p);
  j["pullback"] = {{"on_h1", pb.coords.on_h1}, {"on_h2", pb.coords.on_h2}};
  try {
    const auto jt = pu::flow_preserving_tensor(p, pb.coords.on_h1, pb.coords.on_h2);
    const auto [c1, c2] = pu::flow_preserving_coefficients(p, pb.coords.on_h1, pb.coords.on_h2);
    const auto table = pu::pushforward_brackets(spec, jt);
    j["flow_tensor"] = {{"c1", c1}, {"c2", c2}, {"matrix", matrix_json(jt.matrix())}};
    j["brackets"] = {{"x_px", table.x_px},
                     {"x_py", table.x_py},
                     {"y_px", table.y_px},
                     {"y_py", table.y_py},
                     {"canonical", pu::is_canonical(table, resolve_tol(o))}};
  } catch (const pu::SingularStructure& e) {
    j["flow_tensor"] = nullptr;
    j["singular"] = e.what();
  }
  emit(o, j.dump(2) + "\n");
  return 0;
}

std::vector<double> grid(double t_end, double dt) {
  if (!(dt > 0.0) || t_end < 0.0) throw pu::UsageError("need --dt > 0 and --t-end >= 0");
  std::vector<double> times;
  const auto n = static_cast<std::size_t>(std::llround(t_end / dt));
  for (std::size_t k = 0; k <= n; ++k) times.push_back(static_cast<double>(k) * dt);
  return times;
}

int cmd_flow(const Options& o) {
  resolve_format(o, {"csv"});
  const auto p = resolve_params(o);
  const auto basis = pu::standard_basis(p);
  const pu::Generator* x = nullptr;
  if (o.generator == "X1") x = &basis.x1;
  if (o.generator == "X2") x = &basis.x2;
  if (o.generator == "X3") x = &basis.x3;
  if (o.generator == "X4") x = &basis.x4;
  if (!x) throw pu::UsageError("--generator must be one of X1, X2, X3, X4");
  const auto sol = pu::make_solution(p, o.amp);
  const auto times = grid(o.t_end, o.dt);
  const auto curve =
      pu::flow_curve(*x, o.s, times, [&](double t) { return pu::eval_solution(sol, t); });
  emit(o, csv_text(pu::flow_table(curve)));
  return 0;
}

int cmd_simulate(const Options& o) {
  resolve_format(o, {"csv"});
  const auto p = resolve_params(o);
  std::optional<pu::Potential> pot;
  if (!o.potential.empty()) {
    try {
      pot = pu::parse_potential(o.potential);
    } catch (const pu::InvalidInput& e) {
      throw pu::UsageError(e.what());
    }
  }
  const auto v0 = pu::eval_solution(pu::make_solution(p, o.amp), 0.0);
  auto traj = pu::integrate(pu::Field{p, pot}, v0, o.h, o.t_end);
  const auto ladder = pu::ChargeLadder::build(p, 4);
  std::vector<std::pair<std::string, pu::QuadHamiltonian>> charges;
  for (std::size_t k = 1; k <= 4; ++k) charges.emplace_back("H" + std::to_string(k), ladder.at(k));
  pu::monitor(traj, charges);
  if (pot) {
    const auto& base = pot->target == pu::PotentialTarget::kOnQ ? ladder.at(1) : ladder.at(2);
    pu::monitor(traj, {{"Hint", base}}, pot);
  }
  emit(o, csv_text(pu::trajectory_table(traj)));
  return 0;
}

int cmd_discover(const Options& o) {
  resolve_format(o, {"json"});
  const auto p = resolve_params(o);
  const auto found = pu::structure_discovery(p);
  ordered_json list = ordered_json::array();
  for (const auto& d : found) {
    ordered_json e;
    e["k"] = matrix_json(d.k);
    e["condition"] = d.condition;
    e["j"] = d.j ? matrix_json(d.j->matrix()) : ordered_json(nullptr);
    e["h"] = d.h ? matrix_json(d.h->matrix()) : ordered_json(nullptr);
    e["residual"] = d.residual;
    list.push_back(std::move(e));
  }
  const double span1 = pu::structure_span_residual(found, pu::num::inverse(pu::poisson_j1(p).matrix()));
  const double span2 = pu::structure_span_residual(found, pu::num::inverse(pu::poisson_j2(p).matrix()));
  emit(o, ordered_json{{"alpha", p.alpha()},
                       {"beta", p.beta()},
                       {"dimension", found.size()},
                       {"structures", list},
                       {"span_residual_j1", span1},
                       {"span_residual_j2", span2}}
                  .dump(2) +
              "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Pais-Uhlenbeck oscillator structures"};
  app.require_subcommand(1);
  Options o;

  app.add_option("--alpha", o.alpha, "coefficient alpha");
  app.add_option("--beta", o.beta, "coefficient beta");
  app.add_option("--omega1", o.omega1, "first frequency");
  app.add_option("--omega2", o.omega2, "second frequency");
  app.add_option("--seed", o.seed, "sampling seed");
  app.add_option("--tol", o.tol, "identity tolerance (overrides PU_TOL)");
  app.add_option("--out", o.out, "output file (default stdout)");
  app.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  auto amplitudes = [&](CLI::App* sub) {
    sub->add_option("--A1", o.amp.a1);
    sub->add_option("--A2", o.amp.a2);
    sub->add_option("--B1", o.amp.b1);
    sub->add_option("--B2", o.amp.b2);
  };

  auto* verify = app.add_subcommand("verify", "run the verification suites");
  verify->add_option("--suite", o.suites, "restrict to named suites")
      ->check(CLI::IsMember(pu::suite_names()));

  auto* hierarchy = app.add_subcommand("hierarchy", "charges H1..Hn on (H1, H2)");
  hierarchy->add_option("--n", o.n, "charge depth");

  auto* transform = app.add_subcommand("transform", "build a transformation and report it");
  transform->add_option("--kind", o.kind, "Ta1+, Ta1-, Ta2+, Ta2-, Tb1, Tb2+, Tb2-");
  transform->add_option("--ax", o.ax);
  transform->add_option("--ay", o.ay);
  transform->add_option("--bx", o.bx);
  transform->add_option("--by", o.by);
  transform->add_option("--g", o.g);

  auto* flow = app.add_subcommand("flow", "group flow of a classical solution");
  flow->add_option("--generator", o.generator, "X1..X4");
  flow->add_option("--s", o.s, "flow parameter");
  flow->add_option("--t-end", o.t_end);
  flow->add_option("--dt", o.dt, "sample spacing");
  amplitudes(flow);

  auto* simulate = app.add_subcommand("simulate", "RK4 trajectory with charges");
  simulate->set_help_flag("--help", "Print this help message and exit");
  simulate->add_option("--h", o.h, "step");
  simulate->add_option("--t-end", o.t_end);
  simulate->add_option("--potential", o.potential, "name:lambda=..,on=q|qdd");
  amplitudes(simulate);

  auto* discover = app.add_subcommand("discover", "solve for compatible (J, H) pairs");

  for (auto* sub : {verify, hierarchy, transform, flow, simulate, discover}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*verify) return cmd_verify(o);
    if (*hierarchy) return cmd_hierarchy(o);
    if (*transform) return cmd_transform(o);
    if (*flow) return cmd_flow(o);
    if (*simulate) return cmd_simulate(o);
    if (*discover) return cmd_discover(o);
  } catch (const pu::UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const pu::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
