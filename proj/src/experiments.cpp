#include "exlab/experiments.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "exlab/cumulants.hpp"
#include "exlab/estimates.hpp"
#include "exlab/exclusion.hpp"
#include "exlab/pam.hpp"
#include "exlab/srw.hpp"

namespace exlab {

namespace {

constexpr const char* kVersion = "0.1.0";

using nlohmann::json;

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : text) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

double slope_fit(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

struct Emitter {
  const ExperimentConfig& cfg;
  std::string name;
  std::string outdir;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(const ResultTable& table, json summary) const {
    std::filesystem::create_directories(outdir);
    write_csv(table, cfg, name, outdir + "/" + name + ".csv");
    json root;
    root["name"] = name;
    root["version"] = kVersion;
    root["digest"] = config_digest(cfg);
    json jcfg;
    for (const auto& [k, v] : cfg.kv) jcfg[k] = v;
    root["config"] = jcfg;
    root["summary"] = std::move(summary);
    root["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::ofstream out(outdir + "/" + name + ".json", std::ios::binary);
    out << root.dump(2) << "\n";
  }
};

Geometry torus_from(const ExperimentConfig& cfg) {
  return Geometry::torus(int(cfg.integer("d")), cfg.integer("L"));
}

RngStream stream_from(const ExperimentConfig& cfg, std::uint64_t sub = 0) {
  return RngStream{std::uint64_t(cfg.integer("seed")), sub};
}

std::vector<Config> default_bases(int k, int d, Index L) {
  std::vector<Config> out;
  auto mk = [&](std::vector<Pt> pos) { out.push_back(Config{std::move(pos)}); };
  if (k == 1) {
    mk({Pt{0}});
  } else if (d == 1) {
    mk({Pt{0}, Pt{2}});
    if (L >= 6) mk({Pt{0}, Pt{3}});
  } else {
    mk({Pt{0, 0}, Pt{0, 1}});
    mk({Pt{0, 0}, Pt{2, 0}});
    mk({Pt{0, 0}, Pt{1, 1}});
    mk({Pt{0, 0}, Pt{L / 2, L / 2}});
  }
  return out;
}

std::string config_to_string(const Config& c, int dim) {
  std::string s;
  for (int i = 0; i < c.k(); ++i) {
    if (i) s += ';';
    for (int a = 0; a < dim; ++a) {
      if (a) s += ',';
      s += std::to_string(c.pos[std::size_t(i)][a]);
    }
  }
  return s;
}

// ---------------------------------------------------------------- ssep --

int run_simulate_ssep(const ExperimentConfig& cfg, const Emitter& em) {
  const Geometry g = torus_from(cfg);
  const double rho = cfg.num("rho");
  const double T = cfg.num("T");
  const auto replicas = cfg.integer("replicas");

  ResultTable table;
  table.columns = {"replica", "particles_initial", "particles_final", "density_final"};
  bool conserved = true;
  for (std::int64_t r = 0; r < replicas; ++r) {
    Rng rng(stream_from(cfg, std::uint64_t(r)));
    OccupationField eta = sample_bernoulli_field(g, rho, rng);
    const Index before = eta.count();
    simulate_unlabelled(eta, T, rng);
    const Index after = eta.count();
    conserved = conserved && before == after;
    table.add_row({fmt_int(r), fmt_int(before), fmt_int(after),
                   fmt_num(double(after) / double(g.volume()))});
  }
  em.emit(table, json{{"conserved", conserved}});
  return conserved ? kOk : kCheckFailed;
}

// -------------------------------------------------------------- kernels --

int run_kernel_exact(const ExperimentConfig& cfg, const Emitter& em) {
  const Geometry g = torus_from(cfg);
  const int k = int(cfg.integer("k"));
  const double t = cfg.num("t");
  const Config x = parse_config(cfg.get("x"), g.dim);
  KernelWorkspace ws(g, cfg.integer("budget"));
  const KernelRow row = ws.row(x, t);
  const StateIndex& idx = ws.states(k);

  ResultTable table;
  table.columns = {"state", "config", "prob"};
  for (std::int64_t i = 0; i < idx.size(); ++i)
    table.add_row({fmt_int(i), config_to_string(idx.config(i), g.dim), fmt_num(row.p[i])});

  const double rowsum_dev = std::abs(row.p.sum() - 1.0);
  const bool ok = rowsum_dev < 1e-10;
  em.emit(table, json{{"row_sum_deviation", rowsum_dev},
                      {"states", idx.size()},
                      {"series_tail", row.tail},
                      {"check_passed", ok}});
  return ok ? kOk : kCheckFailed;
}

int run_kernel_mc(const ExperimentConfig& cfg, const Emitter& em) {
  const Geometry g = torus_from(cfg);
  const int k = int(cfg.integer("k"));
  const double t = cfg.num("t");
  const Config x = parse_config(cfg.get("x"), g.dim);
  const auto samples = cfg.integer("samples");

  KernelWorkspace ws(g, cfg.integer("budget"));
  const StateIndex& idx = ws.states(k);
  const KernelRow exact = ws.row(x, t);
  std::vector<Config> targets;
  for (std::int64_t i = 0; i < idx.size(); ++i) targets.push_back(idx.config(i));

  const McKernel mc = exclusion_kernel_mc(g, x, t, targets, samples, stream_from(cfg));

  ResultTable table;
  table.columns = {"state", "config", "freq", "stderr", "exact", "z"};
  double max_abs_z = 0;
  for (std::int64_t i = 0; i < idx.size(); ++i) {
    const double se = mc.stderr_[std::size_t(i)];
    const double z = se > 0 ? (mc.prob[std::size_t(i)] - exact.p[i]) / se : 0.0;
    max_abs_z = std::max(max_abs_z, std::abs(z));
    table.add_row({fmt_int(i), config_to_string(targets[std::size_t(i)], g.dim),
                   fmt_num(mc.prob[std::size_t(i)]), fmt_num(se), fmt_num(exact.p[i]),
                   fmt_num(z)});
  }
  em.emit(table, json{{"max_abs_z", max_abs_z}, {"samples", samples}});
  return kOk;
}

// ------------------------------------------------------------ estimates --

int run_grad_bound(const ExperimentConfig& cfg, const Emitter& em) {
  const Geometry g = torus_from(cfg);
  const int k = int(cfg.integer("k"));
  const double theta = cfg.num("theta");
  const auto t_grid = parse_number_list(cfg.get("t-grid"));
  const std::string bases_text = cfg.get_or("bases", "auto");
  const std::vector<Config> bases = bases_text == "auto"
                                        ? default_bases(k, g.dim, g.side)
                                        : parse_config_list(bases_text, g.dim);

  KernelWorkspace ws(g, cfg.integer("budget"));
  const BoundReport rep = grad_bound_scan(ws, k, theta, t_grid, bases);

  ResultTable table;
  table.columns = {"t", "base", "max_ratio", "argmax_state", "argmax_config"};
  for (const auto& ps : rep.rows) {
    const Config arg = ws.states(k).config(ps.argmax);
    table.add_row({fmt_num(ps.t), config_to_string(bases[std::size_t(ps.base)], g.dim),
                   fmt_num(ps.max_ratio), fmt_int(ps.argmax), config_to_string(arg, g.dim)});
  }
  em.emit(table, json{{"c_fit", rep.c_fit},
                      {"probes", rep.probes},
                      {"skipped_bases", rep.skipped},
                      {"theta", theta}});
  return kOk;
}

int run_tv_sum(const ExperimentConfig& cfg, const Emitter& em) {
  const Geometry g = torus_from(cfg);
  const Config x = parse_config(cfg.get("x"), g.dim);
  const auto t_grid = parse_number_list(cfg.get("t-grid"));
  KernelWorkspace ws(g, cfg.integer("budget"));

  ResultTable table;
  table.columns = {"t", "sum", "log_scale", "log_sum"};
  std::vector<double> lx, ly;
  for (double t : t_grid) {
    const double s = tv_gradient_sum(ws, x, t);
    lx.push_back(std::log(std::sqrt(t) + 1));
    ly.push_back(std::log(s));
    table.add_row({fmt_num(t), fmt_num(s), fmt_num(lx.back()), fmt_num(ly.back())});
  }
  const double slope = slope_fit(lx, ly);
  em.emit(table, json{{"slope", slope}});
  return kOk;
}

int run_rw_grad_sum(const ExperimentConfig& cfg, const Emitter& em) {
  const auto t_grid = parse_number_list(cfg.get("t-grid"));
  ResultTable table;
  table.columns = {"t", "sum", "plateau"};
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (double t : t_grid) {
    const double s = rw_gradient_sum(t);
    const double plat = s * (std::sqrt(t) + 1);
    lo = std::min(lo, plat);
    hi = std::max(hi, plat);
    table.add_row({fmt_num(t), fmt_num(s), fmt_num(plat)});
  }
  em.emit(table, json{{"plateau_min", lo},
                      {"plateau_max", hi},
                      {"plateau_variation", (hi - lo) / lo}});
  return kOk;
}

int run_compare_rw(const ExperimentConfig& cfg, const Emitter& em) {
  const Geometry g = torus_from(cfg);
  const Config x = parse_config(cfg.get("x"), g.dim);
  const Config y = parse_config(cfg.get("y"), g.dim);
  const auto t_grid = parse_number_list(cfg.get("t"));
  const double quad_tol = cfg.num("quad-tol");
  const double threshold = cfg.num("threshold");
  KernelWorkspace ws(g, cfg.integer("budget"));

  ResultTable table;
  table.columns = {"t", "lhs", "rhs", "residual", "quad_error"};
  double worst = 0;
  for (double t : t_grid) {
    const ComparisonResult r = comparison_identity_check(ws, x, y, t, quad_tol);
    worst = std::max(worst, r.residual);
    table.add_row({fmt_num(t), fmt_num(r.lhs), fmt_num(r.rhs), fmt_num(r.residual),
                   fmt_num(r.quad_error)});
  }
  const bool ok = worst < threshold;
  em.emit(table,
          json{{"max_residual", worst}, {"threshold", threshold}, {"check_passed", ok}});
  return ok ? kOk : kCheckFailed;
}

int run_diff_sum(const ExperimentConfig& cfg, const Emitter& em) {
  const Geometry g = torus_from(cfg);
  const Config x = parse_config(cfg.get("x"), g.dim);
  const auto t_grid = parse_number_list(cfg.get("t-grid"));
  KernelWorkspace ws(g, cfg.integer("budget"));

  ResultTable table;
  table.columns = {"t", "sum", "normalized"};
  double lo = std::numeric_limits<double>::infinity(), hi = 0;
  for (double t : t_grid) {
    const double s = kernel_difference_sum(ws, x, t);
    const double norm = g.dim == 2 ? s * (std::sqrt(t) + 1) / std::log(t + 2)
                                   : s * (std::sqrt(t) + 1);
    lo = std::min(lo, norm);
    hi = std::max(hi, norm);
    table.add_row({fmt_num(t), fmt_num(s), fmt_num(norm)});
  }
  em.emit(table, json{{"normalized_min", lo},
                      {"normalized_max", hi},
                      {"normalized_spread", hi / lo}});
  return kOk;
}

// ------------------------------------------------------------ cumulants --

std::vector<CumulantPoint> parse_points(const std::string& text, int dim) {
  std::vector<CumulantPoint> pts;
  for (const std::string& part : split(text, ';')) {
    const auto at = part.find('@');
    if (at == std::string::npos) throw std::invalid_argument("points: expected t@x1,..: " + part);
    CumulantPoint p;
    p.t = std::stod(part.substr(0, at));
    const auto coords = split(part.substr(at + 1), ',');
    if (int(coords.size()) != dim) throw std::invalid_argument("points: wrong arity: " + part);
    for (int a = 0; a < dim; ++a) p.x[std::size_t(a)] = std::stod(coords[std::size_t(a)]);
    pts.push_back(p);
  }
  return pts;
}

int run_cumulants(const ExperimentConfig& cfg, const Emitter& em) {
  const int d = int(cfg.integer("d"));
  const double rho = cfg.num("rho");
  CumulantOptions opt;
  opt.samples = cfg.integer("samples");
  opt.batches = int(cfg.integer("batches"));
  opt.rescale = cfg.integer("rescale") != 0;
  opt.window_gap = cfg.num("gap");

  ResultTable table;
  table.columns = {"level", "config", "order", "kappa", "stderr", "envelope", "ratio", "excluded"};

  if (cfg.integer("scan") != 0) {
    const auto levels = parse_int_range(cfg.get("levels"));
    // family of two-point queries at fixed rescaled geometry
    std::vector<std::vector<CumulantPoint>> configs;
    configs.push_back({{0.0, {0, 0, 0}}, {0.0, {0.25, 0, 0}}});
    configs.push_back({{0.0, {0, 0, 0}}, {0.0625, {0, 0, 0}}});
    configs.push_back({{0.0, {0, 0, 0}}, {0.0625, {0.25, 0, 0}}});
    const auto rep = envelope_ratio_scan(configs, levels, d, rho, stream_from(cfg), opt);
    for (const auto& e : rep.entries)
      table.add_row({fmt_int(e.level), fmt_int(e.config), fmt_int(2), fmt_num(e.kappa),
                     fmt_num(e.stderr_), fmt_num(e.envelope), fmt_num(e.ratio),
                     fmt_int(e.excluded ? 1 : 0)});
    json fits = json::array();
    for (double c : rep.c_fit_by_level) fits.push_back(c);
    em.emit(table, json{{"c_fit_by_level", fits},
                        {"growth_flag", rep.growth_flag},
                        {"excluded", rep.excluded}});
    return kOk;
  }

  const int level = int(cfg.integer("N"));
  const auto pts = parse_points(cfg.get("points"), d);
  const auto q = joint_cumulant(pts, level, d, rho, stream_from(cfg), opt);
  const double env = cumulant_envelope(pts, level, d);
  table.add_row({fmt_int(level), fmt_int(0), fmt_int(q.order()), fmt_num(q.estimate),
                 fmt_num(q.stderr_), fmt_num(env), fmt_num(std::abs(q.estimate) / env),
                 fmt_int(0)});
  em.emit(table, json{{"kappa", q.estimate},
                      {"stderr", q.stderr_},
                      {"envelope", env},
                      {"samples", q.samples}});
  return kOk;
}

int run_fluctuation(const ExperimentConfig& cfg, const Emitter& em) {
  const int level = int(cfg.integer("N"));
  const int d = int(cfg.integer("d"));
  const double rho = cfg.num("rho");
  const ScalarField f = named_test_function(cfg.get("f"), d);
  const auto check =
      stationary_variance_check(f, level, d, rho, cfg.integer("samples"), stream_from(cfg));

  ResultTable table;
  table.columns = {"f", "empirical", "limit", "z"};
  table.add_row({cfg.get("f"), fmt_num(check.empirical), fmt_num(check.limit),
                 fmt_num(check.z_score)});
  em.emit(table, json{{"empirical", check.empirical},
                      {"limit", check.limit},
                      {"z", check.z_score}});
  return kOk;
}

// ------------------------------------------------------------------ pam --

int run_renorm_const(const ExperimentConfig& cfg, const Emitter& em) {
  const int d = int(cfg.integer("d"));
  const double T = cfg.num("T");
  const auto levels = parse_int_range(cfg.get("N"));

  ResultTable table;
  table.columns = {"N", "C_N", "diff"};
  std::vector<double> cs;
  for (int n : levels) {
    cs.push_back(renorm_constant(n, T, d));
    const double diff = cs.size() > 1 ? cs.back() - cs[cs.size() - 2] : 0.0;
    table.add_row({fmt_int(n), fmt_num(cs.back()), fmt_num(diff)});
  }
  json summary;
  if (cs.size() > 1) {
    const double last_diff = cs.back() - cs[cs.size() - 2];
    summary["last_diff"] = last_diff;
    if (d == 2) summary["d2_asymptote"] = std::log(2.0) / (4 * M_PI);
    if (d >= 3) summary["cauchy_gap"] = std::abs(last_diff) / cs[cs.size() - 2];
  }
  em.emit(table, summary);
  return kOk;
}

PamConfig pam_config_from(const ExperimentConfig& cfg) {
  PamConfig pc;
  pc.level = int(cfg.integer("N"));
  pc.dim = int(cfg.integer("d"));
  pc.rho = cfg.num("rho");
  pc.horizon = cfg.num("T");
  pc.dt = cfg.num("dt");
  const std::string init = cfg.get("init");
  pc.init = init == "constant" ? PamInit::Constant
            : init == "bump"   ? PamInit::Bump
                               : PamInit::PointMass;
  const std::string renorm = cfg.get("renorm");
  pc.renorm = renorm == "computed" ? PamRenorm::Computed
              : renorm == "zero"   ? PamRenorm::Zero
                                   : PamRenorm::Supplied;
  pc.renorm_value = cfg.num("renorm-value");
  pc.env_stream = stream_from(cfg);
  if (!cfg.get_or("snapshots", "").empty())
    pc.snapshot_times = parse_number_list(cfg.get("snapshots"));
  return pc;
}

int run_pam(const ExperimentConfig& cfg, const Emitter& em) {
  const PamConfig pc = pam_config_from(cfg);
  const std::string pot_name = cfg.get("potential");
  Potential pot;
  pot.kind = pot_name == "ssep" ? PotentialKind::Ssep : PotentialKind::None;

  const auto snaps = pam_solve(pc, pot);

  ResultTable table;
  table.columns = {"t", "min", "max", "mean", "l2"};
  double global_min = std::numeric_limits<double>::infinity();
  for (const auto& s : snaps) {
    global_min = std::min(global_min, s.values.minCoeff());
    table.add_row({fmt_num(s.t), fmt_num(s.values.minCoeff()), fmt_num(s.values.maxCoeff()),
                   fmt_num(s.values.mean()),
                   fmt_num(std::sqrt(s.values.square().mean()))});
  }
  if (cfg.integer("dump") != 0) {
    ResultTable field;
    field.columns = {"t", "site", "value"};
    for (const auto& s : snaps)
      for (Index id = 0; id < s.values.size(); ++id)
        field.add_row({fmt_num(s.t), fmt_int(id), fmt_num(s.values[id])});
    write_csv(field, cfg, em.name + "-field", em.outdir + "/" + em.name + "-field.csv");
  }
  const bool positive = global_min >= -1e-12;
  em.emit(table, json{{"min_value", global_min}, {"positivity", positive}});
  return positive ? kOk : kCheckFailed;
}

int run_probe_convergence(const ExperimentConfig& cfg, const Emitter& em) {
  PamConfig coarse = pam_config_from(cfg);
  PamConfig fine = coarse;
  fine.level = coarse.level + 1;
  const ScalarField phi = named_test_function(cfg.get("phi"), coarse.dim);
  const double eta = cfg.num("eta");
  const int replicas = int(cfg.integer("replicas"));

  const ConvergenceProbe probe =
      convergence_probe(coarse, fine, phi, eta, replicas, stream_from(cfg, 17));

  ResultTable table;
  table.columns = {"N", "mean_pairing", "se_pairing", "mean_holder", "se_holder",
                   "mean_mass", "se_mass"};
  for (const EnsembleStats* st : {&probe.coarse, &probe.fine})
    table.add_row({fmt_int(st->level), fmt_num(st->mean_pairing), fmt_num(st->se_pairing),
                   fmt_num(st->mean_holder), fmt_num(st->se_holder), fmt_num(st->mean_mass),
                   fmt_num(st->se_mass)});
  em.emit(table, json{{"delta_pairing", probe.delta_pairing}, {"mc_error", probe.mc_error}});
  return kOk;
}

}  // namespace

// ---------------------------------------------------------------- driver --

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names = {
      "simulate-ssep", "kernel-exact", "kernel-mc",   "grad-bound",
      "tv-sum",        "rw-grad-sum",  "compare-rw",  "diff-sum",
      "cumulants",     "fluctuation",  "renorm-const", "pam",
      "probe-convergence"};
  return names;
}

ExperimentConfig default_config(const std::string& name) {
  ExperimentConfig c;
  auto set = [&](const char* k, const char* v) { c.kv[k] = v; };
  set("seed", "1");
  if (name == "simulate-ssep") {
    set("d", "1"), set("L", "16"), set("rho", "0.5"), set("T", "1"), set("replicas", "8");
  } else if (name == "kernel-exact") {
    set("d", "1"), set("L", "4"), set("k", "2"), set("t", "1"), set("x", "0;1");
    set("budget", "2000000");
  } else if (name == "kernel-mc") {
    set("d", "1"), set("L", "4"), set("k", "2"), set("t", "1"), set("x", "0;1");
    set("samples", "20000"), set("budget", "2000000");
  } else if (name == "grad-bound") {
    set("d", "2"), set("L", "8"), set("k", "2"), set("theta", "0.5");
    set("t-grid", "0.25,1,4,16"), set("bases", "auto"), set("budget", "2000000");
  } else if (name == "tv-sum") {
    set("d", "2"), set("L", "16"), set("k", "2"), set("x", "0,0;0,1");
    set("t-grid", "1,1.7783,3.1623,5.6234,10,17.783,31.623,56.234,100");
    set("budget", "2000000");
  } else if (name == "rw-grad-sum") {
    set("t-grid", "1,10,100,1000");
  } else if (name == "compare-rw") {
    set("d", "1"), set("L", "6"), set("k", "2"), set("t", "1");
    set("x", "0;1"), set("y", "2;4");
    set("quad-tol", "1e-8"), set("threshold", "1e-6"), set("budget", "2000000");
  } else if (name == "diff-sum") {
    set("d", "2"), set("L", "8"), set("k", "2"), set("x", "0,0;2,1");
    set("t-grid", "1,4,16"), set("budget", "2000000");
  } else if (name == "cumulants") {
    set("d", "2"), set("N", "3"), set("rho", "0.5"), set("samples", "20000");
    set("batches", "50"), set("points", "0@0,0;0@0.25,0"), set("scan", "0");
    set("levels", "2,3,4"), set("rescale", "1"), set("gap", "1");
  } else if (name == "fluctuation") {
    set("d", "2"), set("N", "4"), set("rho", "0.5"), set("samples", "5000"), set("f", "bump");
  } else if (name == "renorm-const") {
    set("d", "2"), set("N", "3..8"), set("T", "1");
  } else if (name == "pam") {
    set("d", "2"), set("N", "3"), set("rho", "0.5"), set("T", "0.25"), set("dt", "-1");
    set("init", "bump"), set("init-value", "1"), set("potential", "ssep");
    set("renorm", "computed"), set("renorm-value", "0"), set("snapshots", ""), set("dump", "0");
  } else if (name == "probe-convergence") {
    set("d", "2"), set("N", "4"), set("rho", "0.5"), set("T", "0.125"), set("dt", "-1");
    set("init", "bump"), set("init-value", "1"), set("renorm", "computed");
    set("renorm-value", "0"), set("snapshots", ""), set("replicas", "16");
    set("eta", "0.5"), set("phi", "cosine");
  } else {
    throw std::invalid_argument("unknown experiment: " + name);
  }
  return c;
}

int run_experiment(const std::string& name, const ExperimentConfig& cfg,
                   const std::string& outdir) {
  Emitter em{cfg, name, outdir};
  if (name == "simulate-ssep") return run_simulate_ssep(cfg, em);
  if (name == "kernel-exact") return run_kernel_exact(cfg, em);
  if (name == "kernel-mc") return run_kernel_mc(cfg, em);
  if (name == "grad-bound") return run_grad_bound(cfg, em);
  if (name == "tv-sum") return run_tv_sum(cfg, em);
  if (name == "rw-grad-sum") return run_rw_grad_sum(cfg, em);
  if (name == "compare-rw") return run_compare_rw(cfg, em);
  if (name == "diff-sum") return run_diff_sum(cfg, em);
  if (name == "cumulants") return run_cumulants(cfg, em);
  if (name == "fluctuation") return run_fluctuation(cfg, em);
  if (name == "renorm-const") return run_renorm_const(cfg, em);
  if (name == "pam") return run_pam(cfg, em);
  if (name == "probe-convergence") return run_probe_convergence(cfg, em);
  throw std::invalid_argument("unknown experiment: " + name);
}

// ---------------------------------------------------------------- parse --

std::vector<double> parse_number_list(const std::string& text) {
  std::vector<double> out;
  for (const auto& part : split(text, ',')) out.push_back(std::stod(part));
  if (out.empty()) throw std::invalid_argument("empty number list");
  return out;
}

std::vector<int> parse_int_range(const std::string& text) {
  const auto dots = text.find("..");
  std::vector<int> out;
  if (dots != std::string::npos) {
    const int a = std::stoi(text.substr(0, dots));
    const int b = std::stoi(text.substr(dots + 2));
    for (int n = a; n <= b; ++n) out.push_back(n);
  } else {
    for (const auto& part : split(text, ',')) out.push_back(std::stoi(part));
  }
  if (out.empty()) throw std::invalid_argument("empty range: " + text);
  return out;
}

Config parse_config(const std::string& text, int dim) {
  Config c;
  for (const auto& part : split(text, ';')) {
    const auto coords = split(part, ',');
    if (int(coords.size()) != dim)
      throw std::invalid_argument("config: expected " + std::to_string(dim) + " coords: " + part);
    Pt p;
    for (int a = 0; a < dim; ++a) p[a] = std::stoll(coords[std::size_t(a)]);
    c.pos.push_back(p);
  }
  if (c.pos.empty()) throw std::invalid_argument("empty config: " + text);
  return c;
}

std::vector<Config> parse_config_list(const std::string& text, int dim) {
  std::vector<Config> out;
  for (const auto& part : split(text, '|')) out.push_back(parse_config(part, dim));
  return out;
}

ScalarField named_test_function(const std::string& name, int dim) {
  if (name == "constant") return [](const std::array<double, 3>&) { return 1.0; };
  if (name == "cosine")
    return [](const std::array<double, 3>& x) { return std::cos(2 * M_PI * x[0]); };
  if (name == "bump")
    return [dim](const std::array<double, 3>& x) {
      double v = 1;
      for (int a = 0; a < dim; ++a) {
        const double b = 0.5 * (1 - std::cos(2 * M_PI * x[std::size_t(a)]));
        v *= b * b;
      }
      return v;
    };
  throw std::invalid_argument("unknown test function: " + name);
}

}  // namespace exlab
