#include "nahmlab/scenario.hpp"

#include <json.hpp>

#include <algorithm>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>

#include "nahmlab/acceptance.hpp"
#include "nahmlab/gauge.hpp"
#include "nahmlab/implosion.hpp"
#include "nahmlab/metric.hpp"
#include "nahmlab/sampling.hpp"

namespace nahmlab {

using nlohmann::json;

std::string format_double(double v) {
  if (std::isnan(v)) return "\"nan\"";
  if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::string quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  out += "\"";
  return out;
}

[[noreturn]] void fail(const std::string& msg) { throw ScenarioParseError(msg); }

void check_fields(const json& obj, const std::vector<std::string>& allowed,
                  const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const auto& a : allowed)
      if (it.key() == a) {
        known = true;
        break;
      }
    if (!known) fail("unknown field '" + it.key() + "' in " + where);
  }
}

}  // namespace

bool Report::passed() const {
  for (const auto& a : assertions)
    if (!a.passed) return false;
  return true;
}

Scenario parse_scenario(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    fail(std::string("scenario is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) fail("scenario must be a JSON object");
  check_fields(j, {"schema", "name", "kind", "params", "seed"}, "scenario");
  if (!j.contains("schema") || !j["schema"].is_number_integer() || j["schema"] != 1)
    fail("scenario requires \"schema\": 1");
  if (!j.contains("name") || !j["name"].is_string()) fail("scenario requires a name");
  if (!j.contains("kind") || !j["kind"].is_string()) fail("scenario requires a kind");

  Scenario sc;
  sc.name = j["name"].get<std::string>();
  sc.kind = j["kind"].get<std::string>();
  static const std::vector<std::string> kinds = {"lie",    "nahm",    "gauge",
                                                 "metric", "implode", "acceptance"};
  if (std::find(kinds.begin(), kinds.end(), sc.kind) == kinds.end())
    fail("unknown scenario kind '" + sc.kind + "'");
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned() && !j["seed"].is_number_integer())
      fail("seed must be an integer");
    sc.seed = j["seed"].get<std::uint64_t>();
  }
  json params = j.contains("params") ? j["params"] : json::object();
  if (!params.is_object()) fail("params must be an object");
  sc.params_json = params.dump();
  return sc;
}

Scenario load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail("cannot open scenario file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scenario(ss.str());
}

// --- parameter access ----------------------------------------------------------

namespace {

struct Params {
  json j;
  std::string where;

  void allow(const std::vector<std::string>& fields) const {
    check_fields(j, fields, where);
  }
  double number(const std::string& key, double fallback) const {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number()) fail(where + ": '" + key + "' must be a number");
    return j[key].get<double>();
  }
  int integer(const std::string& key, int fallback) const {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_number_integer()) fail(where + ": '" + key + "' must be an integer");
    return j[key].get<int>();
  }
  std::string text(const std::string& key, const std::string& fallback) const {
    if (!j.contains(key)) return fallback;
    if (!j[key].is_string()) fail(where + ": '" + key + "' must be a string");
    return j[key].get<std::string>();
  }
  std::vector<double> numbers(const std::string& key) const {
    std::vector<double> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) fail(where + ": '" + key + "' must be an array");
    for (const auto& v : j[key]) {
      if (!v.is_number()) fail(where + ": '" + key + "' must hold numbers");
      out.push_back(v.get<double>());
    }
    return out;
  }
  std::vector<std::vector<int>> partitions(const std::string& key) const {
    std::vector<std::vector<int>> out;
    if (!j.contains(key)) return out;
    if (!j[key].is_array()) fail(where + ": '" + key + "' must be an array of arrays");
    for (const auto& part : j[key]) {
      if (!part.is_array()) fail(where + ": '" + key + "' must be an array of arrays");
      std::vector<int> p;
      for (const auto& v : part) p.push_back(v.get<int>());
      out.push_back(std::move(p));
    }
    return out;
  }
};

constexpr int kMaxDim = 8;
constexpr int kMaxGridNodes = 1000000;

int checked_nodes(const Params& p, int fallback) {
  int n = p.integer("grid_nodes", fallback);
  if (n < 16 || n > kMaxGridNodes)
    fail(p.where + ": grid_nodes out of range [16, 1e6]");
  return n;
}

double checked_tmax(const Params& p, double fallback) {
  double t = p.number("tmax", fallback);
  if (t <= 0 || t > 1e4) fail(p.where + ": tmax out of range (0, 1e4]");
  return t;
}

int checked_dim(const Params& p, int fallback) {
  int n = p.integer("n", fallback);
  if (n < 2 || n > kMaxDim) fail(p.where + ": n out of range [2, 8]");
  return n;
}

double checked_b(const Params& p, double fallback, double lo) {
  double b = p.number("b", fallback);
  if (b < lo || b > 100.0) fail(p.where + ": b out of range");
  return b;
}

CMatrix diag_imag(const std::vector<double>& d) {
  CMatrix m = CMatrix::Zero(d.size(), d.size());
  double mean = 0;
  for (double v : d) mean += v;
  mean /= double(d.size());
  for (size_t i = 0; i < d.size(); ++i) m(i, i) = Complex(0, d[i] - mean);
  return m;
}

void add_assertion(Report& rep, const std::string& name, bool ok,
                   const std::string& detail) {
  rep.assertions.push_back({name, ok, detail});
}

std::string err_vs_tol(double err, double tol) {
  std::ostringstream os;
  os << "error " << err << " vs tolerance " << tol;
  return os.str();
}

// --- kind handlers ---------------------------------------------------------

void run_lie(const Params& p, Rng& rng, Report& rep) {
  p.allow({"n", "tau1_diag", "partitions", "grid_nodes", "tmax"});
  (void)rng;
  auto d = p.numbers("tau1_diag");
  int n = checked_dim(p, d.empty() ? 3 : int(d.size()));
  if (d.empty()) d.assign(n, 0.0);
  if (int(d.size()) != n) fail("lie: tau1_diag length must equal n");

  CMatrix tau1 = diag_imag(d);
  CMatrix zero = CMatrix::Zero(n, n);
  WeylFace face = weyl_face(tau1);
  const Stratum& s = face.stratum;

  auto parts = p.partitions("partitions");
  if (parts.empty())
    for (int k : s.blocks) parts.push_back(std::vector<int>(k, 1));
  Su2Triple sigma = su2_triple_from_partition(s, parts);
  auto stab = stability_constants(sigma, s);

  rep.results["n"] = n;
  rep.results["num_blocks"] = double(s.blocks.size());
  rep.results["dim_centralizer"] = centralizer_dim(s);
  rep.results["zeta_bound"] = stab.zeta_bound;
  rep.results["stratum_zeta"] = s.zeta;
  rep.results["stratum_eta"] = s.eta;
  rep.results["hess_min"] = stab.hess_spectrum.minCoeff();
  rep.results["hess_max"] = stab.hess_spectrum.maxCoeff();
  rep.results["casimir_max"] = stab.casimir_spectrum.maxCoeff();
  rep.results["su2_bracket_residual"] = su2_bracket_residual(sigma);
  if (s.blocks.size() > 1) {
    auto roots = root_spaces(face.tau1, s);
    rep.results["num_root_spaces"] = double(roots.size());
    rep.results["alpha_max"] = roots.front().alpha_value;
    rep.results["alpha_min"] = roots.back().alpha_value;
  }
  add_assertion(rep, "zeta_bound_positive", stab.zeta_bound > 0,
                "zeta_bound = " + std::to_string(stab.zeta_bound));
  add_assertion(rep, "su2_triple_valid", su2_bracket_residual(sigma) < 1e-10,
                err_vs_tol(su2_bracket_residual(sigma), 1e-10));
}

void run_nahm(const Params& p, Rng& rng, Report& rep, const std::string& out_dir) {
  p.allow({"n", "tau1_diag", "partitions", "tau0_coeff", "grid_nodes", "tmax",
           "max_residual"});
  (void)rng;
  auto d = p.numbers("tau1_diag");
  int n = checked_dim(p, d.empty() ? 2 : int(d.size()));
  if (d.empty()) d.assign(n, 0.0);
  if (int(d.size()) != n) fail("nahm: tau1_diag length must equal n");

  Grid grid = Grid::half_line(checked_tmax(p, 40.0), checked_nodes(p, 8192));

  CMatrix tau1 = diag_imag(d);
  CMatrix zero = CMatrix::Zero(n, n);
  WeylFace face = weyl_face(tau1);
  const Stratum& s = face.stratum;

  auto parts = p.partitions("partitions");
  if (parts.empty())
    for (int k : s.blocks) parts.push_back(std::vector<int>{k});
  Su2Triple sigma = su2_triple_from_partition(s, parts);

  CMatrix tau0 = zero;
  double t0c = p.number("tau0_coeff", 0.0);
  auto zb = center_basis(s);
  if (t0c != 0.0 && !zb.empty()) tau0 = t0c * zb.front();

  NahmPath t = model_solution(tau0, {face.tau1, zero, zero}, sigma, grid);
  double res = nahm_residual_sup(t);
  rep.results["residual_sup"] = res;
  rep.results["asymptotic_gap"] = asymptotic_gap(t);

  std::vector<CMatrix> tail(grid.size());
  for (int k = 0; k < grid.size(); ++k) tail[k] = t.samples[k][1] - face.tau1;
  auto decay = decay_diagnostics(grid, tail, s);
  rep.results["tail_zeta_fit"] = decay.zeta_fit;
  rep.results["tail_eta_fit"] = decay.eta_fit;

  double tol = p.number("max_residual", 1e-10);
  add_assertion(rep, "model_residual", res < tol, err_vs_tol(res, tol));

  std::filesystem::path csv = std::filesystem::path(out_dir) /
                              (rep.scenario.name + "_path.csv");
  std::ofstream out(csv, std::ios::binary);
  out << nahm_path_csv(t);
  rep.artifacts.push_back(csv.filename().string());
}

void run_gauge(const Params& p, Rng& rng, Report& rep, const std::string& out_dir) {
  p.allow({"n", "what", "grid_nodes", "tmax", "b", "c"});
  int n = checked_dim(p, 2);
  std::string what = p.text("what", "kronheimer");

  if (what == "kronheimer") {
    Grid grid = Grid::interval(1.0, checked_nodes(p, 2048));
    // gauge-orbit representative of constant commuting data
    CMatrix k = rng.unitary(n);
    CMatrix b2 = CMatrix::Zero(n, n), b3 = CMatrix::Zero(n, n);
    for (int i = 0; i < n; ++i) {
      b2(i, i) = Complex(0, rng.normal());
      b3(i, i) = Complex(0, rng.normal());
    }
    b2 -= (b2.trace() / double(n)) * CMatrix::Identity(n, n);
    b3 -= (b3.trace() / double(n)) * CMatrix::Identity(n, n);

    CMatrix logk = unitary_log(k);
    GaugeAlgebraPath xi;
    xi.grid = grid;
    xi.samples.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i) xi.samples[i] = -grid.nodes[i] * logk;
    GaugePath u_inv = gauge_exp(xi);  // u0^-1 along the geodesic to k

    NahmPath t;
    t.grid = grid;
    t.samples.resize(grid.size());
    for (int i = 0; i < grid.size(); ++i)
      t.samples[i] = {CMatrix::Zero(n, n), CMatrix::Zero(n, n), b2, b3};
    NahmPath tu = apply_gauge(u_inv, t);

    auto kd = kronheimer_map(tu);
    rep.results["g_end_error"] = (kd.g_end - k).cwiseAbs().maxCoeff();
    rep.results["beta0_error"] =
        (kd.beta0 - (b2 + Complex(0, 1) * b3)).cwiseAbs().maxCoeff();
    rep.results["input_residual"] = kd.residual_sup;
    add_assertion(rep, "kronheimer_recovers_orbit_data",
                  rep.results["g_end_error"] < 1e-7 && rep.results["beta0_error"] < 1e-7,
                  err_vs_tol(std::max(rep.results["g_end_error"],
                                      rep.results["beta0_error"]),
                             1e-7));

    std::filesystem::path path = std::filesystem::path(out_dir) /
                                 (rep.scenario.name + "_kronheimer.json");
    std::ofstream out(path, std::ios::binary);
    out << "{\n  \"beta0\": " << matrix_to_json(kd.beta0)
        << ",\n  \"g_end\": " << matrix_to_json(kd.g_end) << "\n}\n";
    rep.artifacts.push_back(path.filename().string());
  } else if (what == "center_tau0") {
    double b = checked_b(p, 1.0, 0.0);
    double c = p.number("c", 1.0);
    if (c <= 0) fail("gauge: c must be positive");
    Grid grid = Grid::half_line(checked_tmax(p, 40.0), checked_nodes(p, 4096));

    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = double(n - i);
    CMatrix tau1 = diag_imag(d);
    WeylFace face = weyl_face(tau1);
    CMatrix zero = CMatrix::Zero(n, n);
    auto zb = center_basis(face.stratum);
    CMatrix tau0 = 0.5 * zb.front();
    Su2Triple sig;
    for (auto& m : sig.sigma) m = zero;
    NahmPath t = model_solution(tau0, {tau1, zero, zero}, sig, grid);

    auto [u, tprime] = center_tau0(t, b, c);
    double worst = 0;
    for (int k = 0; k < grid.size(); ++k) {
      CMatrix expect = c * b * std::exp(-c * grid.nodes[k]) * tau0;
      worst = std::max(worst, (tprime.samples[k][0] - expect).cwiseAbs().maxCoeff());
    }
    rep.results["t0_error_sup"] = worst;
    rep.results["tau0_after"] = tprime.asym->tau0.cwiseAbs().maxCoeff();
    add_assertion(rep, "centered_t0_matches_closed_form", worst < 1e-9,
                  err_vs_tol(worst, 1e-9));

    std::filesystem::path csv = std::filesystem::path(out_dir) /
                                (rep.scenario.name + "_gauge.csv");
    std::ofstream out(csv, std::ios::binary);
    out << matrix_series_csv(grid, {u.samples}, {"U"});
    rep.artifacts.push_back(csv.filename().string());
  } else {
    fail("gauge: unknown 'what' (kronheimer | center_tau0)");
  }
}

void run_metric(const Params& p, Rng& rng, Report& rep, const std::string& out_dir) {
  p.allow({"example", "n", "b", "eta", "delta_coeff", "grid_nodes", "tmax",
           "tail_start"});
  (void)rng;
  int n = checked_dim(p, 2);
  std::string example = p.text("example", "signed_norm");
  Grid grid = Grid::half_line(checked_tmax(p, 60.0), checked_nodes(p, 16384));

  std::vector<double> d(n);
  for (int i = 0; i < n; ++i) d[i] = double(n - i);
  WeylFace face = weyl_face(diag_imag(d));
  const Stratum& s = face.stratum;
  auto zb = center_basis(s);
  double coeff = p.number("delta_coeff", 1.0);

  MetricConfig cfg;
  cfg.tail_start = p.number("tail_start", 2.0 * grid.t_max() / 3.0);

  TangentVector x;
  x.grid = grid;
  x.samples.resize(grid.size());
  TangentAsymptotics asym = zero_tangent_asym(n);

  if (example == "null_vector") {
    cfg.b = checked_b(p, 0.0, 0.0);
    double delta_norm2 = 0;
    for (int i = 1; i < 4; ++i) {
      asym.delta[i] = coeff * zb[(i - 1) % zb.size()];
      delta_norm2 += inner(asym.delta[i], asym.delta[i]);
    }
    for (int k = 0; k < grid.size(); ++k)
      x.samples[k] = {CMatrix::Zero(n, n), asym.delta[1], asym.delta[2], asym.delta[3]};
    x.asym = asym;
    auto pr = bielawski_pair(x, x, cfg);
    rep.results["value"] = pr.value;
    rep.results["boundary_part"] = pr.boundary_part;
    rep.results["interval_part"] = pr.interval_part;
    rep.results["tail_part"] = pr.tail_part;
    rep.results["delta_norm2"] = delta_norm2;
    add_assertion(rep, "null_vector_value", std::abs(pr.value) < 1e-8 * delta_norm2,
                  err_vs_tol(std::abs(pr.value), 1e-8 * delta_norm2));
  } else if (example == "signed_norm") {
    cfg.b = checked_b(p, 1.0, 0.0);
    double eta = p.number("eta", 0.5);
    if (eta <= 0) fail("metric: eta must be positive");
    asym.delta[1] = coeff * zb.front();
    for (int k = 0; k < grid.size(); ++k) {
      double damp = 1.0 - std::exp(-eta * grid.nodes[k]);
      x.samples[k] = {CMatrix::Zero(n, n), damp * asym.delta[1], CMatrix::Zero(n, n),
                      CMatrix::Zero(n, n)};
    }
    x.asym = asym;
    auto pr = bielawski_pair(x, x, cfg);
    double d2 = inner(asym.delta[1], asym.delta[1]);
    double expected = d2 * (cfg.b - 3.0 / (2.0 * eta));
    rep.results["value"] = pr.value;
    rep.results["expected"] = expected;
    rep.results["boundary_part"] = pr.boundary_part;
    rep.results["interval_part"] = pr.interval_part;
    rep.results["tail_part"] = pr.tail_part;
    rep.results["tail_remainder_bound"] = pr.tail_remainder_bound;
    double tol = 1e-6 * std::max(d2, std::abs(expected));
    add_assertion(rep, "signed_norm_value", std::abs(pr.value - expected) < tol,
                  err_vs_tol(std::abs(pr.value - expected), tol));
  } else {
    fail("metric: unknown 'example' (null_vector | signed_norm)");
  }

  // integrand audit trail
  std::vector<double> dens(grid.size());
  double limit_density = 0;
  for (int i = 0; i < 4; ++i) limit_density += inner(asym.delta[i], asym.delta[i]);
  for (int k = 0; k < grid.size(); ++k) {
    double v = 0;
    for (int i = 0; i < 4; ++i) v += inner(x.samples[k][i], x.samples[k][i]);
    dens[k] = v - limit_density;
  }
  std::filesystem::path csv = std::filesystem::path(out_dir) /
                              (rep.scenario.name + "_integrand.csv");
  std::ofstream out(csv, std::ios::binary);
  out << scalar_series_csv(grid, {dens}, {"subtracted_integrand"});
  rep.artifacts.push_back(csv.filename().string());
}

void run_implode(const Params& p, Rng& rng, Report& rep, const std::string& out_dir) {
  p.allow({"n", "tau1_diag", "b", "grid_nodes", "tmax", "num_samples"});
  auto d = p.numbers("tau1_diag");
  int n = checked_dim(p, d.empty() ? 3 : int(d.size()));
  if (d.empty()) {
    d.resize(n);
    for (int i = 0; i < n; ++i) d[i] = double(n - i);
  }
  if (int(d.size()) != n) fail("implode: tau1_diag length must equal n");
  double b = checked_b(p, 1.0, 1e-6);
  Grid grid = Grid::half_line(checked_tmax(p, 40.0), checked_nodes(p, 8192));

  WeylFace face = weyl_face(diag_imag(d));
  BabyGeometry geom(face, b);
  auto zb = center_basis(face.stratum);

  rep.results["num_root_spaces"] = double(geom.roots().size());
  for (size_t a = 0; a < geom.roots().size(); ++a)
    rep.results["alpha_" + std::to_string(a)] = geom.roots()[a].alpha_value;
  for (size_t bl = 0; bl < face.blocks.size(); ++bl)
    rep.results["block_" + std::to_string(bl)] = face.blocks[bl];
  for (int i = 0; i < n; ++i)
    rep.results["tau1_" + std::to_string(i)] = face.tau1(i, i).imag();

  int num = p.integer("num_samples", 8);
  double worst_rel = 0, min_metric = std::numeric_limits<double>::infinity();
  MetricConfig cfg;
  cfg.b = b;
  std::vector<std::vector<double>> table;
  for (int it = 0; it < num; ++it) {
    CMatrix delta1 = zb.empty() ? CMatrix::Zero(n, n) : rng.in_span(zb);
    CMatrix slope = zb.empty() ? CMatrix::Zero(n, n) : rng.in_span(zb);
    std::vector<Eigen::Vector2d> coeffs(geom.roots().size());
    for (auto& c : coeffs) c = Eigen::Vector2d(rng.normal(), rng.normal());
    auto tg = make_implosion_tangent(face, delta1, slope, coeffs, b);
    double closed = implosion_tangent_norm2(tg);

    auto samples = baby_tangent_samples(tg, grid);
    auto pr = bielawski_pair2(grid, samples.x0, samples.x1, samples.delta0,
                              samples.delta1, samples.x0, samples.x1, samples.delta0,
                              samples.delta1, cfg);
    double rel = std::abs(pr.value - closed) / std::max(1e-30, std::abs(closed));
    worst_rel = std::max(worst_rel, rel);
    min_metric = std::min(min_metric, closed);
    table.push_back({closed, pr.value, rel});
  }
  rep.results["metric_crosscheck_worst_rel"] = worst_rel;
  rep.results["metric_min_value"] = min_metric;
  add_assertion(rep, "metric_matches_integration", worst_rel < 1e-5,
                err_vs_tol(worst_rel, 1e-5));
  add_assertion(rep, "metric_positive", min_metric > 0,
                "min sampled norm^2 = " + std::to_string(min_metric));

  std::filesystem::path csv = std::filesystem::path(out_dir) /
                              (rep.scenario.name + "_geometry.csv");
  std::ofstream out(csv, std::ios::binary);
  out << "closed_form,integrated,relative_error\n";
  for (const auto& row : table) {
    out << format_double(row[0]) << "," << format_double(row[1]) << ","
        << format_double(row[2]) << "\n";
  }
  rep.artifacts.push_back(csv.filename().string());
}

void run_acceptance_kind(const Params& p, Report& rep) {
  p.allow({"filter"});
  auto results = run_acceptance(p.text("filter", ""));
  for (const auto& r : results) {
    rep.results["criterion_" + std::to_string(r.id)] = r.passed ? 1.0 : 0.0;
    add_assertion(rep, r.name, r.passed, r.detail);
  }
}

}  // namespace

Report run_parsed_scenario(const Scenario& sc, const std::string& out_dir,
                           const RunOptions& opts) {
  std::filesystem::create_directories(out_dir);
  Report rep;
  rep.scenario = sc;
  if (opts.seed) rep.scenario.seed = *opts.seed;
  Rng rng(rep.scenario.seed);

  Params p{json::parse(sc.params_json), "params(" + sc.kind + ")"};
  if (opts.grid_nodes || opts.t_max) {
    // CLI overrides: surface them in the echoed scenario for reproducibility
    json pj = p.j;
    if (opts.grid_nodes) pj["grid_nodes"] = *opts.grid_nodes;
    if (opts.t_max) pj["tmax"] = *opts.t_max;
    p.j = pj;
    rep.scenario.params_json = pj.dump();
  }

  if (sc.kind == "lie")
    run_lie(p, rng, rep);
  else if (sc.kind == "nahm")
    run_nahm(p, rng, rep, out_dir);
  else if (sc.kind == "gauge")
    run_gauge(p, rng, rep, out_dir);
  else if (sc.kind == "metric")
    run_metric(p, rng, rep, out_dir);
  else if (sc.kind == "implode")
    run_implode(p, rng, rep, out_dir);
  else if (sc.kind == "acceptance")
    run_acceptance_kind(p, rep);

  export_report(rep, out_dir, &rep.artifacts);
  return rep;
}

Report run_scenario(const std::string& path, const std::string& out_dir,
                    const RunOptions& opts) {
  Scenario sc = load_scenario(path);
  return run_parsed_scenario(sc, out_dir, opts);
}

// --- deterministic export --------------------------------------------------------

std::string report_to_json(const Report& report) {
  std::ostringstream os;
  os << "{\n";
  os << "  \"artifacts\": [";
  for (size_t i = 0; i < report.artifacts.size(); ++i)
    os << (i ? ", " : "") << quote(report.artifacts[i]);
  os << "],\n";

  os << "  \"assertions\": [";
  for (size_t i = 0; i < report.assertions.size(); ++i) {
    const auto& a = report.assertions[i];
    os << (i ? ", " : "") << "{\"detail\": " << quote(a.detail)
       << ", \"name\": " << quote(a.name)
       << ", \"passed\": " << (a.passed ? "true" : "false") << "}";
  }
  os << "],\n";

  os << "  \"notes\": {";
  {
    size_t i = 0;
    for (const auto& [k, v] : report.notes)
      os << (i++ ? ", " : "") << quote(k) << ": " << quote(v);
  }
  os << "},\n";

  os << "  \"results\": {";
  {
    size_t i = 0;
    for (const auto& [k, v] : report.results)
      os << (i++ ? ", " : "") << quote(k) << ": " << format_double(v);
  }
  os << "},\n";

  // canonicalized scenario echo: nlohmann objects iterate in sorted key order
  json params = json::parse(report.scenario.params_json);
  os << "  \"scenario\": {\"kind\": " << quote(report.scenario.kind)
     << ", \"name\": " << quote(report.scenario.name) << ", \"params\": ";
  std::function<void(const json&)> dump_json = [&](const json& v) {
    if (v.is_object()) {
      os << "{";
      size_t i = 0;
      for (auto it = v.begin(); it != v.end(); ++it) {
        os << (i++ ? ", " : "") << quote(it.key()) << ": ";
        dump_json(it.value());
      }
      os << "}";
    } else if (v.is_array()) {
      os << "[";
      for (size_t i = 0; i < v.size(); ++i) {
        if (i) os << ", ";
        dump_json(v[i]);
      }
      os << "]";
    } else if (v.is_number_float()) {
      os << format_double(v.get<double>());
    } else {
      os << v.dump();
    }
  };
  dump_json(params);
  os << ", \"schema\": 1, \"seed\": " << report.scenario.seed << "},\n";

  os << "  \"status\": " << (report.passed() ? "\"pass\"" : "\"fail\"") << "\n";
  os << "}\n";
  return os.str();
}

void export_report(const Report& report, const std::string& out_dir,
                   std::vector<std::string>* written_paths) {
  std::filesystem::path path = std::filesystem::path(out_dir) /
                               (report.scenario.name + "_report.json");
  {
    std::ofstream out(path, std::ios::binary);
    out << report_to_json(report);
  }
  if (written_paths) written_paths->push_back(path.filename().string());
}

std::string matrix_to_json(const CMatrix& m) {
  std::ostringstream os;
  os << "[";
  for (int i = 0; i < m.rows(); ++i) {
    if (i) os << ", ";
    os << "[";
    for (int j = 0; j < m.cols(); ++j) {
      if (j) os << ", ";
      os << "[" << format_double(m(i, j).real()) << ", " << format_double(m(i, j).imag())
         << "]";
    }
    os << "]";
  }
  os << "]";
  return os.str();
}

std::string nahm_path_csv(const NahmPath& path) {
  std::ostringstream os;
  const int n = path.dim();
  os << "t";
  for (int c = 0; c < 4; ++c)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        os << ",T" << c << "_" << i << j << "_re,T" << c << "_" << i << j << "_im";
  os << "\n";
  for (int k = 0; k < path.grid.size(); ++k) {
    os << format_double(path.grid.nodes[k]);
    for (int c = 0; c < 4; ++c)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Complex v = path.samples[k][c](i, j);
          os << "," << format_double(v.real()) << "," << format_double(v.imag());
        }
    os << "\n";
  }
  return os.str();
}

std::string matrix_series_csv(const Grid& grid,
                              const std::vector<std::vector<CMatrix>>& series,
                              const std::vector<std::string>& names) {
  std::ostringstream os;
  const int n = static_cast<int>(series.at(0).at(0).rows());
  os << "t";
  for (const auto& name : names)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        os << "," << name << "_" << i << j << "_re," << name << "_" << i << j << "_im";
  os << "\n";
  for (int k = 0; k < grid.size(); ++k) {
    os << format_double(grid.nodes[k]);
    for (const auto& s : series)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Complex v = s[k](i, j);
          os << "," << format_double(v.real()) << "," << format_double(v.imag());
        }
    os << "\n";
  }
  return os.str();
}

std::string scalar_series_csv(const Grid& grid,
                              const std::vector<std::vector<double>>& series,
                              const std::vector<std::string>& names) {
  std::ostringstream os;
  os << "t";
  for (const auto& name : names) os << "," << name;
  os << "\n";
  for (int k = 0; k < grid.size(); ++k) {
    os << format_double(grid.nodes[k]);
    for (const auto& s : series) os << "," << format_double(s[k]);
    os << "\n";
  }
  return os.str();
}

}  // namespace nahmlab
