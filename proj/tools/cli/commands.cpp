#include "cli/commands.hpp"

#include <cmath>
#include <functional>
#include <map>

#include "cli/emit.hpp"
#include "spectral/epd.hpp"
#include "spectral/hooft.hpp"
#include "spectral/periods.hpp"
#include "spectral/scaling.hpp"
#include "spectral/scan.hpp"
#include "spectral/whitham.hpp"

namespace spectral::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Context {
  const RunSpec& spec;
  fs::path out_dir;
  std::ostream& log;
  std::string command;
  std::vector<fs::path> written;

  bool csv() const { return spec.format != "json"; }
  fs::path file(const std::string& ext) const { return out_dir / (spec.prefix + "_" + command + "." + ext); }
  // The JSON summary is always written: it carries the echoed configuration.
  void summary(json j) {
    j["command"] = command;
    j["config"] = spec.echo;
    write_json(file("json"), std::move(j));
    written.push_back(file("json"));
  }
};

template <class T>
const T& need(const std::optional<T>& v, const char* field) {
  if (!v) throw ConfigError(field, "required by this command");
  return *v;
}

CVec padded_t(const RunSpec& spec) {
  CVec t = need(spec.t, "/t");
  t.resize(static_cast<std::size_t>(spec.W.N()), 0.0);
  return t;
}

NewtonOptions newton(const RunSpec& spec) {
  NewtonOptions o;
  o.tol = spec.tol.newton;
  return o;
}

QuadratureOptions quad(const RunSpec& spec) {
  QuadratureOptions q;
  q.rel_tol = spec.tol.quadrature;
  return q;
}

ContourOptions contour(const RunSpec& spec) {
  ContourOptions c;
  c.rel_tol = spec.tol.contour;
  c.radius = spec.radius;
  return c;
}

CutSystem pairing_for(const RunSpec& spec, const CVec& betas) {
  return spec.pairing ? *spec.pairing : CutSystem::default_for(betas);
}

json config_json(const BranchConfiguration& cfg, int N) {
  return {{"betas", cvec_to_json(cfg.betas)},
          {"alphas", cvec_to_json(cfg.alphas)},
          {"q", cfg.q},
          {"own_sector", cfg.regular ? "reg" : "sing"},
          {"sector", cfg.regular && cfg.q == N ? "reg" : "sing"},
          {"roots", cvec_to_json(cfg.roots.roots)},
          {"multiplicities", cfg.roots.multiplicities},
          {"min_dist", cfg.min_dist}};
}

void cmd_classify(Context& c) {
  const SpectralCurve curve = build_curve(c.spec.W, padded_t(c.spec));
  const BranchConfiguration cfg = classify(curve, c.spec.tol.classify);
  json j = config_json(cfg, c.spec.W.N());
  j["t"] = cvec_to_json(curve.t);
  j["discriminant"] = complex_to_json(discriminant(curve.P()));
  c.log << "q = " << cfg.q << ", " << (cfg.regular ? "regular" : "singular") << "\n";
  c.summary(j);
}

void cmd_solve_hooft(Context& c) {
  const CVec& s = need(c.spec.s, "/s");
  HooftSolution sol;
  CutSystem pairing;
  if (c.spec.betas) {
    pairing = pairing_for(c.spec, *c.spec.betas);
    sol = solve_from_hooft(c.spec.W, s, pairing, *c.spec.betas, newton(c.spec));
  } else {
    const Seed seed = classical_seed(c.spec.W, static_cast<int>(s.size()));
    pairing = seed.pairing;
    sol = solve_with_continuation(c.spec.W, s, seed, newton(c.spec));
  }
  c.log << "converged in " << sol.iterations << " iterations, residual " << sol.residual << "\n";
  c.summary({{"betas", cvec_to_json(sol.betas)},
             {"t", cvec_to_json(sol.t)},
             {"pairing", pairing.pairs},
             {"residual", sol.residual},
             {"iterations", sol.iterations},
             {"condition", sol.condition}});
}

void cmd_solve_reduced(Context& c) {
  const CVec& t_head = need(c.spec.t, "/t");
  const CVec& seed = need(c.spec.betas, "/betas");
  if (seed.size() != 2 * t_head.size()) throw ConfigError("/betas", "need 2q branch points for q = length of /t");
  ReducedOptions o;
  o.tol = c.spec.tol.newton;
  o.contour = contour(c.spec);
  const ReducedSolution sol = solve_reduced(c.spec.W, t_head, seed, o);
  json j{{"betas", cvec_to_json(sol.betas)},
         {"t_head", cvec_to_json(sol.t_head)},
         {"t", cvec_to_json(implied_t(c.spec.W, sol.betas))},
         {"gradient_norm", sol.gradient_norm},
         {"iterations", sol.iterations},
         {"condition", sol.condition}};
  try {
    const std::vector<int> n = classify_singular(sol, c.spec.W, 1e-6, o.contour);
    j["singular"] = !n.empty();
    j["n"] = n.empty() ? std::vector<int>(sol.betas.size(), 0) : n;
  } catch (const AmbiguousClassification& e) {
    j["singular"] = nullptr;
    j["classification_error"] = e.what();
  }
  c.log << "gradient norm " << sol.gradient_norm << "\n";
  c.summary(j);
}

json flow_summary(bool catastrophe, std::size_t points, const CVec& last_betas) {
  return {{"catastrophe", catastrophe}, {"points", points}, {"final_betas", cvec_to_json(last_betas)}};
}

void cmd_flow_s(Context& c) {
  const CVec& betas = need(c.spec.betas, "/betas");
  if (c.spec.path.empty()) throw ConfigError("/path", "required by this command");
  FlowOptions o;
  o.ode.rtol = c.spec.tol.ode;
  o.newton = newton(c.spec);
  const FlowResult r = flow_hooft(c.spec.W, pairing_for(c.spec, betas), betas, c.spec.path, o);
  std::vector<CVec> params, bs;
  for (const FlowPoint& p : r.points) {
    params.push_back(p.s);
    bs.push_back(p.betas);
  }
  if (c.csv()) {
    write_trajectory_csv(c.file("csv"), "s", params, bs);
    c.written.push_back(c.file("csv"));
  }
  json j = flow_summary(r.catastrophe, r.points.size(), bs.empty() ? CVec{} : bs.back());
  j["min_distance"] = r.min_distance;
  c.log << r.points.size() << " points" << (r.catastrophe ? ", stopped at a catastrophe" : "") << "\n";
  c.summary(j);
}

void cmd_flow_t(Context& c) {
  const CVec& betas = need(c.spec.betas, "/betas");
  if (c.spec.path.empty()) throw ConfigError("/path", "required by this command");
  FlowTOptions o;
  o.ode.rtol = c.spec.tol.ode;
  const FlowTResult r = flow_t(c.spec.W, betas, c.spec.path, o);
  std::vector<CVec> params, bs;
  for (const FlowTPoint& p : r.points) {
    params.push_back(p.t);
    bs.push_back(p.betas);
  }
  if (c.csv()) {
    write_trajectory_csv(c.file("csv"), "t", params, bs);
    c.written.push_back(c.file("csv"));
  }
  json j = flow_summary(r.catastrophe, r.points.size(), bs.empty() ? CVec{} : bs.back());
  j["multiplicity_guess"] = r.multiplicity_guess;
  c.log << r.points.size() << " points" << (r.catastrophe ? ", stopped at a catastrophe" : "") << "\n";
  c.summary(j);
}

void cmd_scan(Context& c) {
  const ScanSpec& sc = need(c.spec.scan, "/scan");
  const std::vector<ScanRow> rows = scan_grid(sc, c.spec.threads);
  if (c.csv()) {
    write_class_map_csv(c.file("csv"), rows, sc.x.name, sc.y.t_index >= 0 ? sc.y.name : "y");
    c.written.push_back(c.file("csv"));
  }
  json failures = json::array();
  int reg = 0, sing = 0;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    if (!rows[k].error.empty())
      failures.push_back({{"node", k}, {"x", rows[k].x}, {"y", rows[k].y}, {"error", rows[k].error}});
    else
      (rows[k].regular ? reg : sing)++;
  }
  json j{{"nodes", rows.size()}, {"reg", reg}, {"sing", sing}, {"failures", failures}};
  if (sc.x.count >= 7 && sc.y.count >= 7) {
    json pts = json::array();
    for (const CriticalPoint& p : discriminant_critical_points(rows, sc.x.count, sc.y.count, 8))
      pts.push_back({{"x", p.x}, {"y", p.y}, {"i", p.i}, {"j", p.j}});
    j["discriminant_critical_points"] = pts;
  }
  c.log << rows.size() << " nodes, " << reg << " reg, " << sing << " sing, " << failures.size() << " failed\n";
  c.summary(j);
}

void cmd_prepotential(Context& c) {
  const CVec& betas = need(c.spec.betas, "/betas");
  const CurveBranch br(c.spec.W, CutGeometry(betas, pairing_for(c.spec, betas)));
  if (br.consistency_defect() > 1e-8)
    throw BranchError("prepotential: these branch points do not define a spectral curve of the potential");
  const QuadratureOptions q = quad(c.spec);
  const HooftParams h = hooft_params(br, q);
  CVec moments;
  for (int n = 1; n <= c.spec.W.N(); ++n) moments.push_back(moment_at_infinity(br, n, q));
  const cplx F = prepotential(br, q);
  c.log << "F = " << F << "\n";
  c.summary({{"F", complex_to_json(F)},
             {"l", cvec_to_json(l_parameters(br, q))},
             {"s", cvec_to_json(h.s)},
             {"t", cvec_to_json(br.implied_t())},
             {"dF_dg", cvec_to_json(moments)}});
}

void cmd_scaling(Context& c) {
  const CVec& betas = need(c.spec.betas, "/betas");
  const ScalingSpec& sc = need(c.spec.scaling, "/scaling");
  if (betas.size() != 2 * sc.t_start.size()) throw ConfigError("/betas", "need 2q branch points for q = length of t_start");
  FlowTOptions fo;
  fo.catastrophe_dist = 1e-7;
  const CatastropheLocation loc = locate_catastrophe(c.spec.W, betas, sc.t_start, sc.t_end, 1e-11, fo);
  json j{{"lambda", loc.lambda},
         {"width", loc.width},
         {"t_head", cvec_to_json(loc.t_head)},
         {"t", cvec_to_json(loc.t)},
         {"betas", cvec_to_json(loc.betas)},
         {"alphas", cvec_to_json(loc.alphas)},
         {"flows", loc.flows}};

  ReducedSolution sol;
  sol.betas = loc.betas;
  sol.t_head = loc.t_head;
  try {
    const std::vector<int> n = classify_singular(sol, c.spec.W, 1e-4, contour(c.spec));
    j["n"] = n;
    const ScalingExpansion e = scaling_expansion(c.spec.W, sol, n, contour(c.spec));
    j["gamma"] = e.gamma;
    j["predicted_exponent"] = e.exponent;
    j["B"] = cvec_to_json(e.B);
  } catch (const AmbiguousClassification& e) {
    j["classification_error"] = e.what();
  }

  // Distances are measured to the located point, so stop well above its uncertainty.
  double len = 0.0;
  for (std::size_t k = 0; k < sc.t_start.size(); ++k) len = std::max(len, std::abs(sc.t_end[k] - sc.t_start[k]));
  const double last = std::max(1e-9, 1e3 * loc.width * len);
  const ApproachSamples a = approach_samples(c.spec.W, betas, sc.t_start, loc.t_head, sc.per_decade, 1e-1, last);
  try {
    const ExponentFit f = blowup_exponent_fit(a.dist, a.dbeta);
    j["fitted_exponent"] = f.slope;
    j["fit_samples"] = f.samples;
  } catch (const InvalidArgument& e) {
    j["fit_error"] = e.what();
  }
  if (c.csv()) {
    std::vector<std::string> header{"dist"};
    for (std::size_t k = 1; k <= betas.size(); ++k) {
      header.push_back("dbeta" + std::to_string(k) + "_re");
      header.push_back("dbeta" + std::to_string(k) + "_im");
    }
    std::vector<std::vector<double>> rows;
    for (std::size_t i = 0; i < a.dist.size(); ++i) {
      std::vector<double> r{a.dist[i]};
      for (cplx z : a.dbeta[i]) {
        r.push_back(z.real());
        r.push_back(z.imag());
      }
      rows.push_back(std::move(r));
    }
    write_table_csv(c.file("csv"), header, rows);
    c.written.push_back(c.file("csv"));
  }
  c.log << "catastrophe at lambda = " << loc.lambda << "\n";
  c.summary(j);
}

void cmd_painleve(Context& c) {
  const PainleveSpec& p = c.spec.painleve;
  std::vector<double> grid;
  const long n = std::lround((p.x_max - p.x_min) / p.step);
  if (n < 2) throw ConfigError("/painleve/step", "grid needs at least three nodes");
  for (long k = 0; k <= n; ++k) grid.push_back(p.x_min + (p.x_max - p.x_min) * double(k) / double(n));
  const ODESolution sol = p.B ? integrate_scalar_regularized(p.n, *p.B, *p.C, grid) : painleve1(grid);
  if (c.csv()) {
    write_ode_csv(c.file("csv"), sol, {"u", "du"});
    c.written.push_back(c.file("csv"));
  }
  json j{{"nodes", sol.values.size()}, {"residual_norm", sol.residual_norm}, {"blew_up", sol.blew_up}};
  j["blowup_x"] = sol.blew_up ? json(sol.blowup_x) : json(nullptr);
  if (!p.B) {
    const auto a = tritronquee_asymptotics(grid.front());
    j["start"] = {{"x", grid.front()}, {"omega", sol.values.front()[0].real()}, {"asymptotic", a[0]}};
  }
  c.log << "residual " << sol.residual_norm << (sol.blew_up ? ", blew up" : "") << "\n";
  c.summary(j);
}

const std::map<std::string, std::function<void(Context&)>>& table() {
  static const std::map<std::string, std::function<void(Context&)>> t{
      {"classify", cmd_classify},   {"solve-hooft", cmd_solve_hooft}, {"solve-reduced", cmd_solve_reduced},
      {"flow-s", cmd_flow_s},       {"flow-t", cmd_flow_t},           {"scan", cmd_scan},
      {"prepotential", cmd_prepotential}, {"scaling", cmd_scaling},   {"painleve", cmd_painleve}};
  return t;
}

}  // namespace

const std::vector<std::string>& command_names() {
  static const std::vector<std::string> names{"classify", "solve-hooft", "solve-reduced", "flow-s",  "flow-t",
                                              "scan",     "prepotential", "scaling",     "painleve"};
  return names;
}

std::vector<fs::path> run_command(const std::string& name, const RunSpec& spec, const fs::path& out_dir,
                                  std::ostream& log) {
  const auto it = table().find(name);
  if (it == table().end()) throw ConfigError("", "unknown command " + name);
  std::error_code ec;
  fs::create_directories(out_dir, ec);
  if (ec) throw IoError(out_dir.string() + ": " + ec.message());
  Context c{spec, out_dir, log, name, {}};
  it->second(c);
  return c.written;
}

}  // namespace spectral::cli
