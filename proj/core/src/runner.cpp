#include "rfhdg/runner.hpp"

#include <chrono>
#include <cmath>
#include <fstream>
#include <sstream>

#include "rfhdg/problems.hpp"

namespace rfhdg {

std::string to_string(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::DarcyHdpg: return "hdpg";
    case SchemeVariant::DarcyHdpgReduced: return "hdpg_reduced";
    case SchemeVariant::DarcyHdpgGlobalTrace: return "hdpg_global";
    case SchemeVariant::DarcyHdg: return "hdg";
    case SchemeVariant::DarcyHdpgFlux2: return "hdpg_flux2";
    case SchemeVariant::Stokes: return "stokes";
    case SchemeVariant::StokesDarcy: return "stokes_darcy";
    case SchemeVariant::Brinkman: return "brinkman";
  }
  fail(ErrorCode::Config, "unknown scheme variant");
}

SchemeVariant scheme_from_string(const std::string& name) {
  if (name == "hdpg") return SchemeVariant::DarcyHdpg;
  if (name == "hdpg_reduced") return SchemeVariant::DarcyHdpgReduced;
  if (name == "hdpg_global") return SchemeVariant::DarcyHdpgGlobalTrace;
  if (name == "hdg") return SchemeVariant::DarcyHdg;
  if (name == "hdpg_flux2") return SchemeVariant::DarcyHdpgFlux2;
  if (name == "stokes") return SchemeVariant::Stokes;
  if (name == "stokes_darcy") return SchemeVariant::StokesDarcy;
  if (name == "brinkman") return SchemeVariant::Brinkman;
  fail(ErrorCode::Config, "unknown scheme '" + name + "'");
}

namespace {

bool is_darcy_scheme(SchemeVariant v) {
  return v == SchemeVariant::DarcyHdpg || v == SchemeVariant::DarcyHdpgReduced ||
         v == SchemeVariant::DarcyHdpgGlobalTrace || v == SchemeVariant::DarcyHdg ||
         v == SchemeVariant::DarcyHdpgFlux2;
}

DarcyVariant darcy_variant(SchemeVariant v) {
  switch (v) {
    case SchemeVariant::DarcyHdpg: return DarcyVariant::Hdpg;
    case SchemeVariant::DarcyHdpgReduced: return DarcyVariant::HdpgReduced;
    case SchemeVariant::DarcyHdpgGlobalTrace: return DarcyVariant::HdpgGlobalTrace;
    case SchemeVariant::DarcyHdg: return DarcyVariant::Hdg;
    case SchemeVariant::DarcyHdpgFlux2: return DarcyVariant::HdpgFlux2;
    default: fail(ErrorCode::Config, "not a darcy scheme");
  }
}

void validate(const RunConfig& c) {
  if (c.seeds.empty()) fail(ErrorCode::Config, "seed list must be non-empty");
  if (c.nx < 1 || c.ny < 1) fail(ErrorCode::Config, "nx and ny must be at least 1");
  const bool ok = (c.example == 1 && is_darcy_scheme(c.scheme)) ||
                  (c.example == 2 && is_darcy_scheme(c.scheme)) ||
                  (c.example == 3 && c.scheme == SchemeVariant::Stokes) ||
                  (c.example == 4 && c.scheme == SchemeVariant::StokesDarcy) ||
                  (c.example == 5 && c.scheme == SchemeVariant::Brinkman);
  if (!ok)
    fail(ErrorCode::Config, "example " + std::to_string(c.example) +
                                " cannot run with scheme " + to_string(c.scheme));
}

Mesh make_mesh(const RunConfig& c) {
  if (c.example == 4)
    return build_uniform_mesh(Domain{0, M_PI, -M_PI, M_PI}, c.nx, c.ny, 0.0);
  return build_uniform_mesh(Domain{0, 1, 0, 1}, c.nx, c.ny);
}

void maybe_dump(const RunConfig& c, const DenseSystem& system, bool first_seed) {
  if (c.dump_path.empty() || !first_seed) return;
  std::ofstream os(c.dump_path);
  if (!os) fail(ErrorCode::Io, "cannot open dump path " + c.dump_path);
  system.dump(os);
}

ErrorReport run_darcy_seed(const RunConfig& c, const Mesh& mesh,
                           const DarcyProblem& problem, std::uint64_t seed,
                           bool first_seed) {
  DarcySchemeConfig cfg;
  cfg.variant = darcy_variant(c.scheme);
  cfg.test_degree = c.k0;
  cfg.n_u = c.n_u;
  cfg.n_uhat = c.n_uhat;
  cfg.n_p = c.n_p;
  cfg.eta = c.eta;
  cfg.tau = c.tau;
  cfg.half_width = c.r;
  cfg.seed = seed;
  cfg.quad_points = c.quad_points;

  const auto t0 = std::chrono::steady_clock::now();
  DarcyAssembly assembly = assemble_darcy(mesh, problem, cfg);
  maybe_dump(c, assembly.system, first_seed);
  LeastSquaresSolution sol = solve_least_squares(assembly.system);
  const auto t1 = std::chrono::steady_clock::now();

  DarcySolution eval(mesh, assembly, std::move(sol.x));
  NormOptions opts{c.k0 + 8, std::nullopt};

  ErrorReport report;
  report.dof = assembly.layout.dof();
  report.rows = assembly.system.rows();
  report.residual_norm = sol.residual_norm;
  report.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  report.e0["p"] = relative_l2(
      mesh, [&](const Element& el, const Vec2& x) { return eval.pressure(el.id, x); },
      problem.exact_p, opts);
  report.e1["p"] = relative_semi_h1(
      mesh,
      [&](const Element& el, const Vec2& x) { return eval.pressure_gradient(el.id, x); },
      problem.exact_grad_p, opts);
  report.eps1["p"] = relative_l1(
      mesh, [&](const Element& el, const Vec2& x) { return eval.pressure(el.id, x); },
      problem.exact_p, opts);
  report.e0["u"] = relative_l2(
      mesh, [&](const Element& el, const Vec2& x) { return eval.velocity(el.id, x); },
      problem.exact_u, opts);
  return report;
}

ErrorReport run_stokes_seed(const RunConfig& c, const Mesh& mesh, double nu,
                            const Mat2& inv_kappa, const VectorFn& f, const VectorFn& g,
                            const VectorFn& exact_u, const TensorFn& exact_sigma,
                            const ScalarFn& exact_p, std::uint64_t seed,
                            bool first_seed) {
  StokesSchemeConfig cfg;
  cfg.test_degree = c.k0;
  cfg.n_u = c.n_u;
  cfg.n_sigmahat = c.n_uhat;
  cfg.eta = c.eta;
  cfg.half_width = c.r;
  cfg.seed = seed;
  cfg.quad_points = c.quad_points;

  const auto t0 = std::chrono::steady_clock::now();
  StokesAssembly assembly = [&] {
    if (c.scheme == SchemeVariant::Brinkman) {
      BrinkmanProblem prob;
      prob.nu = nu;
      prob.inv_kappa = inv_kappa;
      prob.source = f;
      prob.boundary = g;
      return assemble_brinkman(mesh, prob, cfg);
    }
    StokesProblem prob;
    prob.nu = nu;
    prob.source = f;
    prob.boundary = g;
    return assemble_hdpg_stokes(mesh, prob, cfg);
  }();
  maybe_dump(c, assembly.system, first_seed);
  LeastSquaresSolution sol = solve_least_squares(assembly.system);
  const auto t1 = std::chrono::steady_clock::now();

  StokesSolution eval(mesh, assembly, std::move(sol.x));
  NormOptions opts{c.k0 + 8, std::nullopt};

  ErrorReport report;
  report.dof = assembly.layout.dof();
  report.rows = assembly.system.rows();
  report.residual_norm = sol.residual_norm;
  report.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  report.e0["u"] = relative_l2(
      mesh, [&](const Element& el, const Vec2& x) { return eval.velocity(el.id, x); },
      exact_u, opts);
  report.e0["sigma"] = relative_l2(
      mesh, [&](const Element& el, const Vec2& x) { return eval.stress(el.id, x); },
      exact_sigma, opts);
  report.e0["p"] = relative_l2(
      mesh, [&](const Element& el, const Vec2& x) { return eval.pressure(el.id, x); },
      exact_p, opts);
  return report;
}

ErrorReport run_coupled_seed(const RunConfig& c, const Mesh& mesh,
                             const CoupledProblem& problem, std::uint64_t seed,
                             bool first_seed) {
  StokesSchemeConfig s_cfg;
  s_cfg.test_degree = c.k0 + 1;
  s_cfg.half_width = c.r_stokes > 0 ? c.r_stokes : c.r;
  s_cfg.seed = seed;
  s_cfg.quad_points = c.quad_points;

  DarcySchemeConfig d_cfg;
  d_cfg.variant = DarcyVariant::Hdpg;
  d_cfg.test_degree = c.k0;
  d_cfg.half_width = c.r_darcy > 0 ? c.r_darcy : c.r;
  d_cfg.seed = seed;
  d_cfg.quad_points = c.quad_points;

  InterfaceConfig iface{c.interface_samples};

  const auto t0 = std::chrono::steady_clock::now();
  CoupledAssembly assembly = assemble_stokes_darcy(mesh, problem, s_cfg, d_cfg, iface);
  maybe_dump(c, assembly.system, first_seed);
  LeastSquaresSolution sol = solve_least_squares(assembly.system);
  const auto t1 = std::chrono::steady_clock::now();

  CoupledSolution eval(mesh, assembly, std::move(sol.x));
  NormOptions stokes_opts{c.k0 + 9, Subdomain::Stokes};
  NormOptions darcy_opts{c.k0 + 8, Subdomain::Darcy};

  ErrorReport report;
  report.dof = assembly.layout.dof();
  report.rows = assembly.system.rows();
  report.residual_norm = sol.residual_norm;
  report.runtime_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
  report.e0["u_S"] = relative_l2(
      mesh,
      [&](const Element& el, const Vec2& x) { return eval.stokes().velocity(el.id, x); },
      problem.stokes.exact_u, stokes_opts);
  report.e0["p_S"] = relative_l2(
      mesh,
      [&](const Element& el, const Vec2& x) { return eval.stokes().pressure(el.id, x); },
      problem.stokes.exact_p, stokes_opts);
  report.e0["u_D"] = relative_l2(
      mesh,
      [&](const Element& el, const Vec2& x) { return eval.darcy().velocity(el.id, x); },
      problem.darcy.exact_u, darcy_opts);
  report.e0["p_D"] = relative_l2(
      mesh,
      [&](const Element& el, const Vec2& x) { return eval.darcy().pressure(el.id, x); },
      problem.darcy.exact_p, darcy_opts);
  return report;
}

}  // namespace

RunRecord run_single(const RunConfig& config) {
  validate(config);
  const Mesh mesh = make_mesh(config);

  RunRecord record;
  record.config = config;
  record.h = mesh.domain.width() / config.nx;

  for (std::size_t s = 0; s < config.seeds.size(); ++s) {
    const std::uint64_t seed = config.seeds[s];
    const bool first = s == 0;
    ErrorReport report;
    switch (config.example) {
      case 1:
        report = run_darcy_seed(config, mesh, example1(), seed, first);
        break;
      case 2:
        report = run_darcy_seed(config, mesh, example2(config.m), seed, first);
        break;
      case 3: {
        const StokesProblem prob = example3(config.nu);
        report = run_stokes_seed(config, mesh, prob.nu, Mat2::Zero(), prob.source,
                                 prob.boundary, prob.exact_u, prob.exact_sigma,
                                 prob.exact_p, seed, first);
        break;
      }
      case 4:
        report = run_coupled_seed(config, mesh, example4(config.alpha, config.nu), seed,
                                  first);
        break;
      case 5: {
        const BrinkmanProblem prob = example5(config.alpha);
        report = run_stokes_seed(config, mesh, prob.nu, prob.inv_kappa, prob.source,
                                 prob.boundary, prob.exact_u, prob.exact_sigma,
                                 prob.exact_p, seed, first);
        break;
      }
      default:
        fail(ErrorCode::Config, "unknown example " + std::to_string(config.example));
    }
    record.per_seed.push_back(std::move(report));
  }
  record.mean = mean_report(record.per_seed);
  record.dof = record.mean.dof;
  record.rows = record.mean.rows;
  return record;
}

std::vector<RunRecord> run(const std::vector<RunConfig>& configs) {
  std::vector<RunRecord> records;
  records.reserve(configs.size());
  for (const RunConfig& c : configs) records.push_back(run_single(c));
  return records;
}

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

std::string metric(const std::map<std::string, double>& m, const std::string& key) {
  auto it = m.find(key);
  return it == m.end() ? std::string() : fmt(it->second);
}

}  // namespace

void write_csv(const std::vector<RunRecord>& records, const std::string& path) {
  std::ofstream os(path);
  if (!os) fail(ErrorCode::Io, "cannot open output path " + path);
  os << "example,scheme,h,k0,N_u,N_uhat,N_p,r,eta,tau,M,dof,rows,seeds,"
        "e0_p,e1_p,eps1_p,e0_u,e0_sigma,residual,runtime_ms\n";
  for (const RunRecord& rec : records) {
    const RunConfig& c = rec.config;
    const bool coupled = c.scheme == SchemeVariant::StokesDarcy;
    const bool stokes_like =
        c.scheme == SchemeVariant::Stokes || c.scheme == SchemeVariant::Brinkman;

    std::string n_u, n_uhat, n_p, r;
    if (is_darcy_scheme(c.scheme)) {
      DarcySchemeConfig d;
      d.test_degree = c.k0;
      d.n_u = c.n_u;
      d.n_uhat = c.n_uhat;
      d.n_p = c.n_p;
      n_u = std::to_string(d.resolved_n_u());
      n_uhat = std::to_string(d.resolved_n_uhat());
      n_p = std::to_string(d.resolved_n_p());
      r = fmt(c.r);
    } else if (stokes_like) {
      StokesSchemeConfig s;
      s.test_degree = c.k0;
      s.n_u = c.n_u;
      s.n_sigmahat = c.n_uhat;
      n_u = std::to_string(s.resolved_n_u());
      n_uhat = std::to_string(s.resolved_n_sigmahat());
      r = fmt(c.r);
    } else {
      StokesSchemeConfig s;
      s.test_degree = c.k0 + 1;
      DarcySchemeConfig d;
      d.test_degree = c.k0;
      n_u = std::to_string(s.resolved_n_u());
      n_uhat = std::to_string(d.resolved_n_uhat());
      n_p = std::to_string(d.resolved_n_p());
      r = fmt(c.r_stokes > 0 ? c.r_stokes : c.r);
    }

    os << c.example << ',' << to_string(c.scheme) << ',' << fmt(rec.h) << ',' << c.k0
       << ',' << n_u << ',' << n_uhat << ',' << n_p << ',' << r << ',' << fmt(c.eta)
       << ',' << fmt(c.tau) << ',' << (coupled ? std::to_string(c.interface_samples) : "")
       << ',' << rec.dof << ',' << rec.rows << ',' << rec.per_seed.size() << ','
       << metric(rec.mean.e0, coupled ? "p_D" : "p") << ','
       << metric(rec.mean.e1, "p") << ',' << metric(rec.mean.eps1, "p") << ','
       << metric(rec.mean.e0, coupled ? "u_S" : "u") << ','
       << metric(rec.mean.e0, "sigma") << ',' << fmt(rec.mean.residual_norm) << ','
       << fmt(rec.mean.runtime_ms) << '\n';
  }
  if (!os) fail(ErrorCode::Io, "failed while writing " + path);
}

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(const std::string& csv) {
  std::vector<std::uint64_t> seeds;
  std::stringstream ss(csv);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    seeds.push_back(std::stoull(item));
  }
  if (seeds.empty()) fail(ErrorCode::Config, "seed list must be non-empty");
  return seeds;
}

RunConfig parse_config_text(const std::string& text) {
  RunConfig c;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::Config,
           "config line " + std::to_string(line_no) + " is not 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    try {
      if (key == "example") c.example = std::stoi(value);
      else if (key == "m") c.m = std::stoi(value);
      else if (key == "alpha") c.alpha = std::stod(value);
      else if (key == "nu") c.nu = std::stod(value);
      else if (key == "scheme") c.scheme = scheme_from_string(value);
      else if (key == "nx") c.nx = std::stoi(value);
      else if (key == "ny") c.ny = std::stoi(value);
      else if (key == "k0") c.k0 = std::stoi(value);
      else if (key == "r") c.r = std::stod(value);
      else if (key == "r_stokes") c.r_stokes = std::stod(value);
      else if (key == "r_darcy") c.r_darcy = std::stod(value);
      else if (key == "eta") c.eta = std::stod(value);
      else if (key == "tau") c.tau = std::stod(value);
      else if (key == "interface_samples") c.interface_samples = std::stoi(value);
      else if (key == "n_u") c.n_u = std::stoi(value);
      else if (key == "n_uhat") c.n_uhat = std::stoi(value);
      else if (key == "n_p") c.n_p = std::stoi(value);
      else if (key == "quad_points") c.quad_points = std::stoi(value);
      else if (key == "seeds") c.seeds = parse_seed_list(value);
      else if (key == "out") c.out_path = value;
      else fail(ErrorCode::Config, "unknown config key '" + key + "'");
    } catch (const Error&) {
      throw;
    } catch (const std::exception&) {
      fail(ErrorCode::Config, "bad value for config key '" + key + "'");
    }
  }
  return c;
}

RunConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace rfhdg
