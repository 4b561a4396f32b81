#include "gkcs/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "gkcs/coherent.hpp"
#include "gkcs/dynamics.hpp"
#include "gkcs/errors.hpp"
#include "gkcs/measure.hpp"
#include "gkcs/spectrum.hpp"
#include "gkcs/statistics.hpp"
#include "gkcs/wavefunctions.hpp"

namespace gkcs::cli {

namespace {

using nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string model = "quasiharmonic";
  double alpha = 1.0;
  std::optional<double> upsilon;
  std::optional<double> mu;
  std::optional<double> lambda_tilde;

  std::optional<double> J;
  std::optional<double> n0;
  double gamma = 0.0;

  std::string format = "csv";
  std::string out_path;

  // spectrum / si-chain / verify-measure
  int n_max = 20;
  // moments sweep
  std::optional<double> j_min;
  std::optional<double> j_max;
  int j_count = 20;
  // time grids
  std::optional<double> tmax_rev;
  std::optional<double> tmax_cl;
  double samples_per_cl = 20.0;
  double t = 0.0;
  std::optional<double> t_rev_units;
  // revivals
  double threshold = 0.2;
  int q_max = 4;
  // wavefunctions
  int n = 0;
  int points = 4001;
  std::string grid = "uniform";
};

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class Csv {
 public:
  explicit Csv(std::ostream& os) : os_(os) {}
  void header(std::initializer_list<const char*> cols) {
    bool first = true;
    for (const char* c : cols) {
      if (!first) os_ << ',';
      os_ << c;
      first = false;
    }
    os_ << '\n';
  }
  template <typename... T>
  void row(const T&... cells) {
    bool first = true;
    ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
    os_ << '\n';
  }

 private:
  static std::string cell(double v) { return fmt(v); }
  static std::string cell(int v) { return std::to_string(v); }
  static std::string cell(const std::string& s) { return s; }
  static std::string cell(const char* s) { return s; }
  std::ostream& os_;
};

SpectrumModel make_model(const RunConfig& cfg, std::ostream& err) {
  const auto reject = [&](const std::optional<double>& v, const char* flag) {
    if (v) throw UsageError(std::string(flag) + " does not apply to --model " + cfg.model);
  };
  const auto need = [&](const std::optional<double>& v, const char* flag) {
    if (!v) throw UsageError("--model " + cfg.model + " requires " + flag);
    return *v;
  };
  std::optional<SpectrumModel> model;
  if (cfg.model == "quasiharmonic") {
    reject(cfg.mu, "--mu");
    reject(cfg.lambda_tilde, "--lambda-tilde");
    model = SpectrumModel::quasi_harmonic(cfg.alpha, need(cfg.upsilon, "--upsilon"));
  } else if (cfg.model == "morse") {
    reject(cfg.upsilon, "--upsilon");
    reject(cfg.lambda_tilde, "--lambda-tilde");
    model = SpectrumModel::morse(need(cfg.mu, "--mu"));
  } else {
    reject(cfg.upsilon, "--upsilon");
    reject(cfg.mu, "--mu");
    model = SpectrumModel::mathews_lakshmanan(cfg.alpha, need(cfg.lambda_tilde, "--lambda-tilde"));
  }
  for (const auto& w : model->warnings()) err << "warning: " << w << '\n';
  return *model;
}

ordered_json model_json(const SpectrumModel& m) {
  ordered_json j;
  j["kind"] = to_string(m.kind());
  switch (m.kind()) {
    case SpectrumKind::QuasiHarmonic:
      j["alpha"] = m.alpha();
      j["upsilon"] = m.upsilon();
      break;
    case SpectrumKind::Morse:
      j["mu"] = m.mu();
      break;
    case SpectrumKind::MathewsLakshmanan:
      j["alpha"] = m.alpha();
      j["lambda_tilde"] = m.lambda_tilde();
      break;
    case SpectrumKind::Custom:
      j["name"] = m.name();
      break;
  }
  return j;
}

double resolve_j(const RunConfig& cfg, const SpectrumModel& model) {
  if (cfg.J && cfg.n0) throw UsageError("--J and --n0 are mutually exclusive");
  if (cfg.J) return *cfg.J;
  if (cfg.n0) return solve_j(model, *cfg.n0);
  throw UsageError("one of --J or --n0 is required");
}

ordered_json summary_json(const CoherentState& state) {
  const auto dist = distribution(state);
  ordered_json j;
  j["model"] = model_json(state.model());
  j["J"] = state.J();
  j["gamma"] = state.gamma();
  j["n0"] = dist.mean;
  j["mean"] = dist.mean;
  j["variance"] = dist.variance;
  j["mandel_q"] = dist.mandel_q;
  const auto ts = timescales(state.model(), dist.mean);
  j["t_classical"] = ts.t_classical;
  if (ts.t_revival) j["t_revival"] = *ts.t_revival;
  return j;
}

void emit_json(std::ostream& os, const ordered_json& j) { os << j.dump(2) << '\n'; }

std::vector<double> time_grid(const RunConfig& cfg, const Timescales& ts) {
  if (cfg.tmax_rev && cfg.tmax_cl) throw UsageError("--tmax-rev and --tmax-cl are mutually exclusive");
  std::optional<double> horizon;
  if (cfg.tmax_rev) {
    if (!ts.t_revival) throw DomainError("--tmax-rev given but this spectrum has no revival time");
    horizon = *cfg.tmax_rev * *ts.t_revival;
  } else if (cfg.tmax_cl) {
    horizon = *cfg.tmax_cl * ts.t_classical;
  }
  return default_time_grid(ts, cfg.samples_per_cl, horizon);
}

// --- subcommands -----------------------------------------------------------

void cmd_spectrum(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  if (cfg.n_max < 0) throw DomainError("--n-max must be >= 0");
  int top = cfg.n_max;
  if (const auto nv = model.n_max_valid(); nv && *nv < top) {
    err << "warning: truncated spectrum, listing levels up to n = " << *nv << '\n';
    top = *nv;
  }
  if (cfg.format == "json") {
    ordered_json j;
    j["model"] = model_json(model);
    ordered_json rows = ordered_json::array();
    for (int n = 0; n <= top; ++n) rows.push_back({{"n", n}, {"e_n", model.e(n)}, {"E_n", model.energy(n)}});
    j["levels"] = rows;
    emit_json(os, j);
    return;
  }
  Csv csv(os);
  csv.header({"n", "e_n", "E_n"});
  for (int n = 0; n <= top; ++n) csv.row(n, model.e(n), model.energy(n));
}

void cmd_dist(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  const auto state = build_state(model, resolve_j(cfg, model), cfg.gamma);
  const auto dist = distribution(state);
  if (cfg.format == "json") {
    auto j = summary_json(state);
    j["probs"] = dist.probs;
    emit_json(os, j);
    return;
  }
  Csv csv(os);
  csv.header({"n", "P_n"});
  for (std::size_t n = 0; n < dist.probs.size(); ++n) csv.row(static_cast<int>(n), dist.probs[n]);
}

void cmd_moments(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  std::vector<double> js;
  const bool sweep = cfg.j_min || cfg.j_max;
  if (sweep) {
    if (cfg.J || cfg.n0) throw UsageError("--j-min/--j-max cannot be combined with --J or --n0");
    if (!cfg.j_min || !cfg.j_max) throw UsageError("a sweep needs both --j-min and --j-max");
    if (cfg.j_count < 1) throw UsageError("--j-count must be >= 1");
    if (!(*cfg.j_min > 0.0 && *cfg.j_max >= *cfg.j_min)) throw DomainError("sweep needs 0 < j-min <= j-max");
    const double a = std::log(*cfg.j_min);
    const double b = std::log(*cfg.j_max);
    for (int i = 0; i < cfg.j_count; ++i) {
      js.push_back(cfg.j_count == 1 ? *cfg.j_min : std::exp(a + (b - a) * i / (cfg.j_count - 1)));
    }
    js.back() = *cfg.j_max;
  } else {
    js.push_back(resolve_j(cfg, model));
  }
  std::vector<CoherentState> states;
  for (double J : js) states.push_back(build_state(model, J, cfg.gamma));

  if (cfg.format == "json") {
    if (!sweep) {
      emit_json(os, summary_json(states.front()));
      return;
    }
    ordered_json arr = ordered_json::array();
    for (const auto& s : states) arr.push_back(summary_json(s));
    emit_json(os, arr);
    return;
  }
  Csv csv(os);
  csv.header({"J", "mean", "variance", "mandel_q"});
  for (const auto& s : states) {
    const auto d = distribution(s);
    csv.row(s.J(), d.mean, d.variance, d.mandel_q);
  }
}

void cmd_solve_j(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  if (cfg.J) throw UsageError("solve-j takes --n0, not --J");
  if (!cfg.n0) throw UsageError("solve-j requires --n0");
  const double J = solve_j(model, *cfg.n0);
  if (cfg.format == "json") {
    ordered_json j;
    j["model"] = model_json(model);
    j["n0"] = *cfg.n0;
    j["J"] = J;
    emit_json(os, j);
    return;
  }
  os << fmt(J) << '\n';
}

TimeSeries series_for(const RunConfig& cfg, const SpectrumModel& model) {
  const auto state = build_state(model, resolve_j(cfg, model), cfg.gamma);
  const auto dist = distribution(state);
  const auto grid = time_grid(cfg, timescales(model, dist.mean));
  return autocorrelation(state, grid);
}

void cmd_autocorr(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  const auto series = series_for(cfg, model);
  if (cfg.format == "json") {
    auto j = summary_json(*series.state);
    ordered_json rows = ordered_json::array();
    for (std::size_t i = 0; i < series.times.size(); ++i) {
      const double t = series.times[i];
      const auto a = series.values[i];
      rows.push_back({{"t", t},
                      {"tau", series.tau(t)},
                      {"tau_cl", series.tau_classical(t)},
                      {"re_A", a.real()},
                      {"im_A", a.imag()},
                      {"abs2_A", std::norm(a)}});
    }
    j["samples"] = rows;
    emit_json(os, j);
    return;
  }
  Csv csv(os);
  csv.header({"t", "tau", "tau_cl", "re_A", "im_A", "abs2_A"});
  for (std::size_t i = 0; i < series.times.size(); ++i) {
    const double t = series.times[i];
    const auto a = series.values[i];
    csv.row(t, series.tau(t), series.tau_classical(t), a.real(), a.imag(), std::norm(a));
  }
}

void cmd_revivals(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  const auto series = series_for(cfg, model);
  const auto events = detect_revivals(series, cfg.threshold, cfg.q_max);
  if (cfg.format == "json") {
    auto j = summary_json(*series.state);
    ordered_json rows = ordered_json::array();
    for (const auto& e : events) {
      ordered_json r{{"time", e.time}, {"tau", e.tau}, {"abs2", e.amplitude_sq}};
      if (e.fraction) {
        r["p"] = e.fraction->first;
        r["q"] = e.fraction->second;
      }
      rows.push_back(r);
    }
    j["events"] = rows;
    j["distinct_fractions"] = count_fractional_revivals(events, cfg.q_max);
    emit_json(os, j);
    return;
  }
  Csv csv(os);
  csv.header({"time", "tau", "abs2", "p", "q"});
  for (const auto& e : events) {
    const std::string p = e.fraction ? std::to_string(e.fraction->first) : "";
    const std::string q = e.fraction ? std::to_string(e.fraction->second) : "";
    csv.row(e.time, e.tau, e.amplitude_sq, p, q);
  }
}

GridSpec grid_for(const RunConfig& cfg, const SpectrumModel& model) {
  if (cfg.grid == "arcsine") return GridSpec::for_model(model, cfg.points, GridCoordinate::Arcsine);
  return GridSpec::for_model(model, cfg.points, GridCoordinate::Uniform);
}

void write_samples(std::ostream& os, const RunConfig& cfg, const SampledFunction& f, const char* name,
                   ordered_json j) {
  if (cfg.format == "json") {
    j["rho"] = f.rho;
    j[name] = f.values;
    emit_json(os, j);
    return;
  }
  Csv csv(os);
  csv.header({"rho", name});
  for (std::size_t i = 0; i < f.rho.size(); ++i) csv.row(f.rho[i], f.values[i]);
}

void cmd_eigenfunction(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  if (model.kind() != SpectrumKind::QuasiHarmonic) throw DomainError("eigenfunction needs --model quasiharmonic");
  const auto grid = grid_for(cfg, model);
  const auto psi = eigenfunction(cfg.n, model, grid);
  ordered_json j;
  j["model"] = model_json(model);
  j["n"] = cfg.n;
  j["energy"] = model.energy(cfg.n);
  j["deformation_mu"] = deformation_mu(model);
  j["residual"] = hamiltonian_residual(cfg.n, model, grid);
  write_samples(os, cfg, psi, "psi", j);
}

void cmd_density(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  if (model.kind() != SpectrumKind::QuasiHarmonic) throw DomainError("density needs --model quasiharmonic");
  const auto state = build_state(model, resolve_j(cfg, model), cfg.gamma);
  double t = cfg.t;
  if (cfg.t_rev_units) {
    const auto ts = timescales(model, distribution(state).mean);
    if (!ts.t_revival) throw DomainError("--t-rev given but this spectrum has no revival time");
    t = *cfg.t_rev_units * *ts.t_revival;
  }
  const auto grid = grid_for(cfg, model);
  const auto rho = coherent_density(state, grid, t);
  auto j = summary_json(state);
  j["t"] = t;
  j["integral"] = integrate(grid, rho.values);
  write_samples(os, cfg, rho, "density", j);
}

void cmd_verify_measure(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  if (model.kind() != SpectrumKind::QuasiHarmonic) throw DomainError("verify-measure needs --model quasiharmonic");
  const double a = 1.0 + 1.0 / (model.upsilon() * model.upsilon());
  const auto check = validate_meijer_reduction(a);
  if (!check.passed) err << "warning: Bessel-K reduction failed its Mellin-Barnes validation\n";
  const auto rows = verify_measure_moments(model, cfg.n_max);
  if (cfg.format == "json") {
    ordered_json j;
    j["model"] = model_json(model);
    ordered_json val;
    val["order"] = check.order;
    val["passed"] = check.passed;
    ordered_json samples = ordered_json::array();
    for (const auto& s : check.samples) {
      samples.push_back({{"x", s.x}, {"bessel", s.via_bessel}, {"mellin_barnes", s.via_mellin_barnes}, {"rel_err", s.rel_err}});
    }
    val["samples"] = samples;
    j["meijer_validation"] = val;
    ordered_json mom = ordered_json::array();
    for (const auto& r : rows) {
      mom.push_back({{"n", r.n}, {"lhs", r.lhs}, {"rhs", r.rhs}, {"rel_err", r.rel_err}, {"converged", r.converged}});
    }
    j["moments"] = mom;
    emit_json(os, j);
    return;
  }
  Csv csv(os);
  csv.header({"n", "lhs", "rhs", "rel_err", "converged"});
  for (const auto& r : rows) csv.row(r.n, r.lhs, r.rhs, r.rel_err, r.converged ? 1 : 0);
}

void cmd_si_chain(const RunConfig& cfg, std::ostream& os, std::ostream& err) {
  const auto model = make_model(cfg, err);
  const auto chain = ShapeInvarianceChain::for_model(model);
  if (cfg.n_max < 0) throw DomainError("--n-max must be >= 0");
  const auto levels = si_spectrum(chain, cfg.n_max);
  if (cfg.format == "json") {
    ordered_json j;
    j["model"] = model_json(model);
    ordered_json rows = ordered_json::array();
    for (int n = 0; n <= cfg.n_max; ++n) {
      rows.push_back({{"n", n}, {"E_chain", levels[n]}, {"E_model", model.energy(n)}});
    }
    j["levels"] = rows;
    emit_json(os, j);
    return;
  }
  Csv csv(os);
  csv.header({"n", "E_chain", "E_model", "diff"});
  for (int n = 0; n <= cfg.n_max; ++n) csv.row(n, levels[n], model.energy(n), levels[n] - model.energy(n));
}

// --- option wiring -----------------------------------------------------------

void add_model_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--model", cfg.model, "Spectrum model")
      ->transform(CLI::IsMember({"quasiharmonic", "morse", "mathews-lakshmanan"}))
      ->capture_default_str();
  sub->add_option("--alpha", cfg.alpha, "Oscillator frequency alpha (= omega)")->capture_default_str();
  sub->add_option("--upsilon", cfg.upsilon, "Quasi-harmonic nonlinearity upsilon");
  sub->add_option("--mu", cfg.mu, "Morse parameter mu");
  sub->add_option("--lambda-tilde", cfg.lambda_tilde, "Mathews-Lakshmanan parameter");
}

void add_output_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--format", cfg.format, "Output format")
      ->check(CLI::IsMember({"csv", "json"}))
      ->capture_default_str();
  sub->add_option("--out", cfg.out_path, "Write output to this file instead of stdout");
}

void add_state_options(CLI::App* sub, RunConfig& cfg) {
  auto* j = sub->add_option("--J", cfg.J, "Coherent-state action parameter J");
  auto* n0 = sub->add_option("--n0", cfg.n0, "Target mean excitation; J is solved for");
  j->excludes(n0);
  sub->add_option("--gamma", cfg.gamma, "Coherent-state phase parameter gamma")->capture_default_str();
}

void add_time_options(CLI::App* sub, RunConfig& cfg) {
  auto* rev = sub->add_option("--tmax-rev", cfg.tmax_rev, "Horizon in units of T_rev (default 1.1)");
  auto* cl = sub->add_option("--tmax-cl", cfg.tmax_cl, "Horizon in units of T_cl");
  rev->excludes(cl);
  sub->add_option("--samples-per-cl", cfg.samples_per_cl, "Samples per classical period")->capture_default_str();
}

void add_grid_options(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--points", cfg.points, "Grid points")->capture_default_str();
  sub->add_option("--grid", cfg.grid, "Grid coordinate")
      ->check(CLI::IsMember({"uniform", "arcsine"}))
      ->capture_default_str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gazeau-Klauder coherent states of nonlinear oscillators", "gkcs"};
  app.require_subcommand(1);
  RunConfig cfg;

  using Handler = std::function<void(const RunConfig&, std::ostream&, std::ostream&)>;
  std::vector<std::pair<CLI::App*, Handler>> handlers;
  const auto add = [&](const char* name, const char* help, Handler h) {
    auto* sub = app.add_subcommand(name, help);
    add_model_options(sub, cfg);
    add_output_options(sub, cfg);
    handlers.emplace_back(sub, std::move(h));
    return sub;
  };

  auto* spectrum = add("spectrum", "Levels e_n and E_n", cmd_spectrum);
  spectrum->add_option("--n-max", cfg.n_max, "Highest level")->capture_default_str();

  add_state_options(add("dist", "Weighting distribution P_n", cmd_dist), cfg);

  auto* moments = add("moments", "Mean, variance and Mandel Q", cmd_moments);
  add_state_options(moments, cfg);
  moments->add_option("--j-min", cfg.j_min, "Sweep: smallest J");
  moments->add_option("--j-max", cfg.j_max, "Sweep: largest J");
  moments->add_option("--j-count", cfg.j_count, "Sweep: number of log-spaced J values")->capture_default_str();

  auto* solve = add("solve-j", "J giving a target mean excitation", cmd_solve_j);
  add_state_options(solve, cfg);

  auto* autocorr = add("autocorr", "Autocorrelation A(t) on the default time grid", cmd_autocorr);
  add_state_options(autocorr, cfg);
  add_time_options(autocorr, cfg);

  auto* revivals = add("revivals", "Revival and fractional-revival peaks of |A|^2", cmd_revivals);
  add_state_options(revivals, cfg);
  add_time_options(revivals, cfg);
  revivals->add_option("--threshold", cfg.threshold, "Minimum |A|^2 of a reported peak")->capture_default_str();
  revivals->add_option("--q-max", cfg.q_max, "Largest denominator for p/q labels")->capture_default_str();

  auto* eig = add("eigenfunction", "Position-space eigenfunction psi_n(rho)", cmd_eigenfunction);
  eig->add_option("--n", cfg.n, "Level")->capture_default_str();
  add_grid_options(eig, cfg);

  auto* density = add("density", "Coherent-state position density at time t", cmd_density);
  add_state_options(density, cfg);
  add_grid_options(density, cfg);
  auto* t_abs = density->add_option("--t", cfg.t, "Time")->capture_default_str();
  density->add_option("--t-rev", cfg.t_rev_units, "Time in units of T_rev")->excludes(t_abs);

  auto* measure = add("verify-measure", "Moments of the resolution-of-unity measure", cmd_verify_measure);
  measure->add_option("--n-max", cfg.n_max, "Highest moment (<= 6)")->default_val(5);

  auto* si = add("si-chain", "Spectrum rebuilt from the shape-invariance chain", cmd_si_chain);
  si->add_option("--n-max", cfg.n_max, "Highest level")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n" << (subs.empty() ? app.help() : subs.front()->help());
    return 2;
  }

  for (const auto& [sub, handler] : handlers) {
    if (!sub->parsed()) continue;
    try {
      std::ostringstream buffer;
      handler(cfg, buffer, err);
      if (cfg.out_path.empty()) {
        out << buffer.str();
      } else {
        std::ofstream file(cfg.out_path, std::ios::binary);
        if (!file) throw Error("cannot open output file " + cfg.out_path);
        file << buffer.str();
        if (!file) throw Error("failed writing " + cfg.out_path);
      }
      return 0;
    } catch (const UsageError& e) {
      err << "error: " << e.what() << "\n\n" << sub->help();
      return 2;
    } catch (const Error& e) {
      err << "error: " << e.what() << '\n';
      return 1;
    }
  }
  return 2;
}

}  // namespace gkcs::cli
