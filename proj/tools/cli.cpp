#include "cli.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "ergoloc/assignment.hpp"
#include "ergoloc/ergotropy.hpp"
#include "ergoloc/local.hpp"
#include "ergoloc/matrix_io.hpp"
#include "ergoloc/models.hpp"
#include "ergoloc/parallel.hpp"
#include "ergoloc/random.hpp"
#include "ergoloc/sdp.hpp"

namespace ergoloc::cli {

namespace {

using nlohmann::json;
using std::numbers::pi;

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

double parse_double(const std::string& text, const std::string& what) {
  double x = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, x);
  if (ec != std::errc() || ptr != last || !std::isfinite(x)) {
    throw InvalidInput("cannot parse " + what + " '" + text + "'");
  }
  return x;
}

// ---- shared option groups -------------------------------------------------

struct SystemFiles {
  std::string state, hs, he, v;
  int ds = 0, de = 0;
};

void add_system_options(CLI::App* sub, SystemFiles& f, bool required) {
  auto* st = sub->add_option("--state", f.state, "density matrix or state vector (matrix JSON)");
  auto* hs = sub->add_option("--hs", f.hs, "H_S (matrix JSON)");
  auto* v = sub->add_option("--v", f.v, "coupling V on S x E (matrix JSON)");
  if (required) {
    st->required();
    hs->required();
    v->required();
  }
  sub->add_option("--he", f.he, "H_E (matrix JSON); zero when omitted");
  sub->add_option("--ds", f.ds, "dimension of S (default: from H_S)")->check(CLI::PositiveNumber);
  sub->add_option("--de", f.de, "dimension of E (default: from the state)")->check(CLI::PositiveNumber);
}

BipartiteSystem load_system(const SystemFiles& f) {
  ComplexMatrix rho = read_matrix_file(f.state);
  const ComplexMatrix hs = read_matrix_file(f.hs);
  const ComplexMatrix v = read_matrix_file(f.v);
  const int ds = f.ds ? f.ds : static_cast<int>(hs.rows());
  if (ds <= 0 || rho.rows() % ds != 0) {
    throw DimensionError("state dimension " + std::to_string(rho.rows()) + " is not a multiple of d_S = " +
                         std::to_string(ds));
  }
  const int de = f.de ? f.de : static_cast<int>(rho.rows() / ds);
  const Dims dims{ds, de};
  if (rho.cols() == 1 && rho.rows() == dims.total()) {
    if (std::abs(rho.col(0).norm() - 1.0) > 1e-10) throw InvalidInput("state vector is not normalized");
    rho = projector(rho.col(0));
  }
  const ComplexMatrix he = f.he.empty() ? ComplexMatrix::Zero(de, de) : read_matrix_file(f.he);
  if (v.rows() != dims.total() || v.cols() != dims.total()) {
    throw DimensionError("V must be " + std::to_string(dims.total()) + "x" + std::to_string(dims.total()));
  }
  if (he.rows() != de || he.cols() != de) throw DimensionError("H_E must be " + std::to_string(de) + "x" + std::to_string(de));
  // Any Tr_S V part is moved into H_E; local values do not depend on it.
  auto [he_n, v_n] = BipartiteSystem::normalize_coupling(dims, he, hermitize(v));
  return BipartiteSystem(dims, rho, hs, he_n, v_n);
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw InvalidInput("cannot write " + path);
  f << text;
  if (!f) throw InvalidInput("write failed for " + path);
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

json real_vector_json(const RealVector& x) {
  json a = json::array();
  for (Eigen::Index i = 0; i < x.size(); ++i) a.push_back(x(i));
  return a;
}

// ---- global ---------------------------------------------------------------

struct GlobalArgs {
  std::string state, hamiltonian;
  bool unitary = false;
};

std::string cmd_global(const GlobalArgs& a) {
  const ComplexMatrix rho = read_matrix_file(a.state);
  const ComplexMatrix h = read_matrix_file(a.hamiltonian);
  if (rho.rows() != rho.cols() || rho.rows() != h.rows() || h.rows() != h.cols()) {
    throw DimensionError("state and Hamiltonian must be square of equal size");
  }
  const ErgotropyReport rep = global_ergotropy(rho, h);
  RealVector pops = hermitian_eig(rho).values.reverse();
  json j;
  j["value"] = rep.value;
  j["energy"] = rep.diagnostics.at("energy");
  j["passive_energy"] = rep.diagnostics.at("passive_energy");
  j["passive_eigenvalues"] = real_vector_json(pops);
  if (a.unitary && rep.optimal_unitary) j["optimal_unitary"] = matrix_to_json(*rep.optimal_unitary);
  return dump(j);
}

// ---- local ----------------------------------------------------------------

struct LocalArgs {
  SystemFiles files;
  std::string method = "all";
  int restarts = 32;
  double sdp_tol = 1e-7;
};

struct LocalOutcome {
  std::string text;
  bool converged = true;
};

LocalOutcome cmd_local(const LocalArgs& a, std::uint64_t seed) {
  if (a.method == "closed" && a.files.ds != 0 && a.files.ds != 2) {
    throw InvalidInput("method 'closed' needs d_S = 2 (got " + std::to_string(a.files.ds) + ")");
  }
  const BipartiteSystem sys = load_system(a.files);
  const Dims dims = sys.dims();
  const bool all = a.method == "all";
  if (a.method == "closed" && dims.s != 2) {
    throw InvalidInput("method 'closed' needs d_S = 2 (got " + std::to_string(dims.s) + ")");
  }
  const MMatrix m = build_m_matrix(sys);
  json methods = json::object();
  std::optional<double> exact, polar, sdp;
  bool converged = true;

  if ((all && dims.s == 2) || a.method == "closed") {
    const ErgotropyReport rep = qubit_local_ergotropy(m);
    methods["closed"] = {{"value", rep.value}, {"optimal_unitary", matrix_to_json(*rep.optimal_unitary)}};
    exact = rep.value;
  }
  if (all || a.method == "optimize") {
    OptimizerConfig cfg;
    cfg.restarts = a.restarts;
    cfg.seed = seed;
    const ErgotropyReport rep = optimize_local_unitary(sys, cfg);
    const bool ok = rep.diagnostics.at("converged") != 0.0;
    converged = converged && ok;
    methods["optimize"] = {{"value", rep.value},
                           {"iterations", rep.diagnostics.at("iterations")},
                           {"gradient_norm", rep.diagnostics.at("gradient_norm")},
                           {"converged", ok},
                           {"optimal_unitary", matrix_to_json(*rep.optimal_unitary)}};
    if (exact) {
      methods["optimize"]["gap_to_closed"] = *exact - rep.value;
    } else {
      exact = rep.value;
    }
  }
  if (all || a.method == "polar") {
    polar = polar_upper_bound(m);
    methods["polar"] = {{"value", *polar}};
  }
  if (all || a.method == "sdp") {
    SdpOptions opts;
    opts.tol = a.sdp_tol;
    const SdpBound b = sdp_upper_bound(choi_cost(sys), sys.energy(), opts);
    converged = converged && b.solution.converged;
    sdp = b.bound;
    methods["sdp"] = {{"value", b.bound},
                      {"gap", b.solution.gap},
                      {"iterations", b.solution.iterations},
                      {"converged", b.solution.converged}};
  }
  if (methods.empty()) throw InvalidInput("unknown method '" + a.method + "'");

  json j;
  j["dims"] = {{"s", dims.s}, {"e", dims.e}};
  j["energy"] = sys.energy();
  j["delta_off"] = delta_off(sys);
  j["switch_off"] = switch_off_ergotropy(sys);
  j["methods"] = methods;
  json order = {{"checked", exact && (polar || sdp)}};
  bool ok = true;
  if (exact && polar) ok = ok && *exact <= *polar + 1e-9;
  if (exact && sdp) ok = ok && *exact <= *sdp + 1e-6;
  order["ok"] = ok;
  j["ordering"] = order;
  return {dump(j), converged};
}

// ---- jc -------------------------------------------------------------------

struct JcArgs {
  int n = 10;
  int n_max = -1;
  double omega_s = 1.0, omega_e = 1.2, rabi = 0.1;
  std::string alpha = "0.4pi";
  std::string sweep = "0:20pi:2000";
  bool dynamical = false;
  std::string export_dir;
};

void write_jc_export(const JcParams& p, const JcArgs& a, double alpha, double phi) {
  namespace fs = std::filesystem;
  const fs::path dir(a.export_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw InvalidInput("cannot create " + a.export_dir + ": " + ec.message());
  const SystemPieces pieces = jc_system(p);
  const double phase = a.dynamical ? jc_dynamical_phase(p, a.n, phi) : phi;
  write_matrix_file((dir / "state.json").string(), jc_phase_family_state(p, a.n, alpha, phase));
  write_matrix_file((dir / "hs.json").string(), pieces.h_s);
  write_matrix_file((dir / "he.json").string(), pieces.h_e);
  write_matrix_file((dir / "v.json").string(), pieces.v);
}

std::string cmd_jc(const JcArgs& a) {
  const JcParams p{a.omega_s, a.omega_e, a.rabi, a.n_max >= 0 ? a.n_max : default_cutoff(a.n)};
  const double alpha = parse_angle(a.alpha);
  const std::vector<double> phis = parse_sweep(a.sweep);
  const std::vector<SweepRow> rows = jc_sweep(p, a.n, alpha, phis, a.dynamical);
  if (!a.export_dir.empty()) write_jc_export(p, a, alpha, phis.front());
  std::string text = "phi,local_ergotropy,switch_off,delta_off\n";
  for (const SweepRow& r : rows) {
    text += format_number(r.phi) + "," + format_number(r.local) + "," + format_number(r.switch_off) + "," +
            format_number(r.delta_off) + "\n";
  }
  return text;
}

// ---- xxz ------------------------------------------------------------------

struct XxzArgs {
  int sites = 4;
  double epsilon = 1.0, j = 0.1, jz = 0.1;
  std::optional<int> k;
  bool k_sweep = false;
  std::string format = "csv";
};

struct XxzRow {
  int k = 0;
  double energy = 0.0, delta_off = 0.0, switch_off = 0.0;
  std::optional<double> local_analytic;
  double local_numeric = 0.0, bethe_residual = 0.0;
  bool regime = false;
};

std::string cmd_xxz(const XxzArgs& a) {
  const XxzParams p{a.sites, a.epsilon, a.j, a.jz};
  if (a.k && a.k_sweep) throw InvalidInput("--k and --k-sweep are exclusive");
  std::vector<int> ks;
  if (a.k) {
    if (!xxz_k_valid(a.sites, *a.k)) {
      throw InvalidInput("k = " + std::to_string(*a.k) + " outside (-floor(N/2), floor(N/2)]");
    }
    ks.push_back(*a.k);
  } else {
    ks = xxz_k_values(a.sites);
  }
  const SparseSplit split = xxz_system_sparse(p);
  const SparseMatrix h = split.total();
  std::vector<XxzRow> rows(ks.size());
  const long count = static_cast<long>(ks.size());
#pragma omp parallel for schedule(dynamic) num_threads(worker_count())
  for (long i = 0; i < count; ++i) {
    const int k = ks[i];
    const ComplexVector phi = xxz_bethe_state(p, k);
    const PureStateQuantities q = pure_state_quantities(split, phi);
    const XxzAnalytic an = xxz_analytic(p, k);
    XxzRow& r = rows[i];
    r.k = k;
    r.energy = xxz_bethe_energy(p, k);
    r.delta_off = q.delta_off;
    r.switch_off = q.switch_off;
    r.local_analytic = an.values.local;
    r.local_numeric = qubit_local_ergotropy(q.m).value;
    r.bethe_residual = (h * phi - r.energy * phi).norm();
    r.regime = an.regime;
  }

  if (a.format == "json") {
    json arr = json::array();
    for (const XxzRow& r : rows) {
      json row = {{"k", r.k},
                  {"energy", r.energy},
                  {"delta_off", r.delta_off},
                  {"switch_off", r.switch_off},
                  {"local_numeric", r.local_numeric},
                  {"bethe_residual", r.bethe_residual},
                  {"regime", r.regime}};
      row["local_analytic"] = r.local_analytic ? json(*r.local_analytic) : json(nullptr);
      arr.push_back(row);
    }
    json j = {{"sites", a.sites}, {"epsilon", a.epsilon}, {"j", a.j}, {"jz", a.jz}, {"rows", arr}};
    return dump(j);
  }
  std::string text = "k,energy,delta_off,switch_off,local_analytic,local_numeric,bethe_residual,regime\n";
  for (const XxzRow& r : rows) {
    text += std::to_string(r.k) + "," + format_number(r.energy) + "," + format_number(r.delta_off) + "," +
            format_number(r.switch_off) + "," + (r.local_analytic ? format_number(*r.local_analytic) : "") + "," +
            format_number(r.local_numeric) + "," + format_number(r.bethe_residual) + "," + (r.regime ? "1" : "0") +
            "\n";
  }
  return text;
}

// ---- export-sdp -----------------------------------------------------------

struct SdpArgs {
  SystemFiles files;
  std::string import_path;
  double tol = 1e-7;
};

struct SdpOutcome {
  std::string text;
  bool converged = true;
};

SdpOutcome cmd_export_sdp(const SdpArgs& a) {
  if (!a.import_path.empty()) {
    if (!a.files.state.empty()) throw InvalidInput("--import cannot be combined with system files");
    const auto [cost, energy] = import_sdp(read_json_file(a.import_path));
    SdpOptions opts;
    opts.tol = a.tol;
    const SdpBound b = sdp_upper_bound(cost, energy, opts);
    json j = {{"bound", b.bound},
              {"objective", b.solution.objective},
              {"dual_objective", b.solution.dual_objective},
              {"gap", b.solution.gap},
              {"primal_residual", b.solution.primal_residual},
              {"dual_residual", b.solution.dual_residual},
              {"iterations", b.solution.iterations},
              {"converged", b.solution.converged}};
    return {dump(j), b.solution.converged};
  }
  if (a.files.state.empty() || a.files.hs.empty() || a.files.v.empty()) {
    throw InvalidInput("export-sdp needs --state, --hs and --v (or --import)");
  }
  const BipartiteSystem sys = load_system(a.files);
  return {dump(export_sdp(choi_cost(sys), sys.energy())), true};
}

// ---- selftest -------------------------------------------------------------

int cmd_selftest(std::uint64_t seed, std::ostream& out) {
  int failures = 0;
  const auto line = [&](const std::string& name, bool ok, double err) {
    out << (ok ? "PASS " : "FAIL ") << name << " err=" << format_number(err) << "\n";
    if (!ok) ++failures;
  };
  Rng rng(seed);

  {
    const BipartiteSystem sys = random_system({2, 3}, rng, 0.6);
    OptimizerConfig cfg;
    cfg.restarts = 8;
    cfg.seed = seed;
    const double closed = qubit_local_ergotropy(build_m_matrix(sys)).value;
    const double err = std::abs(optimize_local_unitary(sys, cfg).value - closed);
    line("qubit optimizer vs closed formula", err <= 1e-6, err);
    const SdpBound b = sdp_upper_bound(choi_cost(sys), sys.energy());
    const double sdp_err = std::abs(b.bound - closed);
    line("qubit sdp vs closed formula", b.solution.converged && sdp_err <= 1e-4, sdp_err);
  }
  {
    const JcParams p{1.2, 1.0, 0.3, default_cutoff(2)};
    double err = 0.0;
    for (Branch br : {Branch::plus, Branch::minus}) {
      const BipartiteSystem sys = jc_system(p).with_state(jc_dressed_state(p, 2, br));
      err = std::max(err, std::abs(qubit_local_ergotropy(build_m_matrix(sys)).value - *jc_exact(p, 2, br).local));
    }
    line("jc dressed states vs closed forms", err <= 1e-9, err);
  }
  {
    const XxzParams p{6, 1.0, 0.1, 0.4};
    const SparseSplit split = xxz_system_sparse(p);
    double err = 0.0;
    for (int k : xxz_k_values(6)) {
      const PureStateQuantities q = pure_state_quantities(split, xxz_bethe_state(p, k));
      err = std::max(err, std::abs(qubit_local_ergotropy(q.m).value - *xxz_exact(p, k).local));
    }
    line("xxz magnons vs closed forms", err <= 1e-9, err);
  }
  {
    RealMatrix cost(5, 5);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (Eigen::Index i = 0; i < cost.size(); ++i) cost.data()[i] = u(rng);
    std::vector<int> perm{0, 1, 2, 3, 4};
    double best = 1e300;
    do {
      double c = 0.0;
      for (int i = 0; i < 5; ++i) c += cost(i, perm[i]);
      best = std::min(best, c);
    } while (std::next_permutation(perm.begin(), perm.end()));
    const double err = std::abs(solve_assignment(cost).cost - best);
    line("assignment vs brute force", err <= 1e-12, err);
  }
  out << (failures == 0 ? "selftest passed\n" : "selftest failed\n");
  return failures == 0 ? kExitOk : kExitSelftest;
}

}  // namespace

double parse_angle(const std::string& text) {
  std::string s = trim(text);
  if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
    std::string coef = s.substr(0, s.size() - 2);
    if (!coef.empty() && coef.back() == '*') coef.pop_back();
    if (coef.empty() || coef == "+") return pi;
    if (coef == "-") return -pi;
    return parse_double(coef, "angle") * pi;
  }
  return parse_double(s, "angle");
}

std::vector<double> parse_sweep(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  for (std::string item; std::getline(ss, item, ':');) parts.push_back(trim(item));
  if (parts.size() != 3) throw InvalidInput("sweep must look like start:stop:steps, got '" + text + "'");
  const double a = parse_angle(parts[0]), b = parse_angle(parts[1]);
  int steps = 0;
  const auto [ptr, ec] = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), steps);
  if (ec != std::errc() || ptr != parts[2].data() + parts[2].size() || steps < 2) {
    throw InvalidInput("sweep steps must be an integer >= 2, got '" + parts[2] + "'");
  }
  std::vector<double> out(steps);
  for (int i = 0; i < steps; ++i) out[i] = a + (b - a) * i / (steps - 1);
  out.back() = b;
  return out;
}

std::string format_number(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ergoloc: ergotropy, local ergotropy and their bounds for bipartite systems"};
  app.require_subcommand(1);
  app.fallthrough();
  std::uint64_t seed = 20240607;
  std::string output;
  app.add_option("--seed", seed, "seed for random restarts and selftest instances");
  app.add_option("--output,-o", output, "write the result here instead of stdout");

  GlobalArgs ga;
  auto* g = app.add_subcommand("global", "ergotropy of a state under a Hamiltonian");
  g->add_option("--state", ga.state, "density matrix (matrix JSON)")->required();
  g->add_option("--hamiltonian", ga.hamiltonian, "Hamiltonian (matrix JSON)")->required();
  g->add_flag("--unitary", ga.unitary, "include an optimal unitary");

  LocalArgs la;
  auto* l = app.add_subcommand("local", "local ergotropy of S with the coupling kept on");
  add_system_options(l, la.files, true);
  l->add_option("--method", la.method, "closed, optimize, polar, sdp or all")
      ->check(CLI::IsMember({"closed", "optimize", "polar", "sdp", "all"}));
  l->add_option("--restarts", la.restarts, "random restarts of the optimizer")->check(CLI::NonNegativeNumber);
  l->add_option("--sdp-tol", la.sdp_tol, "ADMM tolerance")->check(CLI::PositiveNumber);

  JcArgs ja;
  auto* jc = app.add_subcommand("jc", "Jaynes-Cummings phase family sweep (CSV)");
  jc->add_option("--n", ja.n, "dressed level n")->check(CLI::NonNegativeNumber);
  jc->add_option("--n-max", ja.n_max, "photon cutoff (default n + 5)");
  jc->add_option("--omega-s", ja.omega_s, "atom frequency");
  jc->add_option("--omega-e", ja.omega_e, "cavity frequency");
  jc->add_option("--rabi", ja.rabi, "vacuum Rabi frequency");
  jc->add_option("--alpha", ja.alpha, "mixing angle, e.g. 0.4pi");
  jc->add_option("--sweep-phi", ja.sweep, "start:stop:steps, endpoints may carry a pi suffix");
  jc->add_flag("--dynamical-phase", ja.dynamical, "interpret phi as Rabi time, phase (E+ - E-) phi / Omega");
  jc->add_option("--export", ja.export_dir, "also write state/hs/he/v matrix files at the first phi");

  XxzArgs xa;
  int k_value = 0;
  auto* x = app.add_subcommand("xxz", "single-magnon states of the XXZ ring");
  x->add_option("--sites", xa.sites, "ring size N");
  x->add_option("--epsilon", xa.epsilon, "Zeeman energy");
  x->add_option("--j", xa.j, "XY coupling");
  x->add_option("--jz", xa.jz, "Z coupling");
  auto* kopt = x->add_option("--k", k_value, "single magnon momentum");
  x->add_flag("--k-sweep", xa.k_sweep, "all momenta (default)");
  x->add_option("--format", xa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  SdpArgs sa;
  auto* s = app.add_subcommand("export-sdp", "write the local-ergotropy SDP instance, or solve one with --import");
  add_system_options(s, sa.files, false);
  s->add_option("--import", sa.import_path, "solve an exported instance");
  s->add_option("--tol", sa.tol, "ADMM tolerance for --import")->check(CLI::PositiveNumber);

  auto* st = app.add_subcommand("selftest", "quick cross-checks of the numerical paths");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitInput;
  }

  try {
    if (g->parsed()) {
      emit(cmd_global(ga), output, out);
    } else if (l->parsed()) {
      const LocalOutcome r = cmd_local(la, seed);
      emit(r.text, output, out);
      if (!r.converged) {
        err << "warning: a numerical method did not converge\n";
        return kExitNotConverged;
      }
    } else if (jc->parsed()) {
      emit(cmd_jc(ja), output, out);
    } else if (x->parsed()) {
      if (kopt->count() > 0) xa.k = k_value;
      emit(cmd_xxz(xa), output, out);
    } else if (s->parsed()) {
      const SdpOutcome r = cmd_export_sdp(sa);
      emit(r.text, output, out);
      if (!r.converged) {
        err << "warning: SDP solver did not converge\n";
        return kExitNotConverged;
      }
    } else if (st->parsed()) {
      std::ostringstream buf;
      const int code = cmd_selftest(seed, buf);
      emit(buf.str(), output, out);
      return code;
    }
  } catch (const NotConverged& e) {
    err << "error: " << e.what() << "\n";
    return kExitNotConverged;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }
  return kExitOk;
}

}  // namespace ergoloc::cli
