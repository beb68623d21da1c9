// spinodalkit: command-line front end for the phase-field solver, the
// microstructure analysis, transport extraction and curve fitting.
//
// Exit codes: 0 success, 1 usage error, 2 data/parse error, 3 numerical failure.

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "spinodal/analysis.hpp"
#include "spinodal/ch_solver.hpp"
#include "spinodal/config.hpp"
#include "spinodal/errors.hpp"
#include "spinodal/fit_models.hpp"
#include "spinodal/io.hpp"
#include "spinodal/transport.hpp"

namespace fs = std::filesystem;
using namespace spinodal;

namespace {

enum Exit { kOk = 0, kUsage = 1, kData = 2, kNumerical = 3 };

struct Options {
  std::string config;
  std::string in;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> threads;
  bool force_dt = false;
  std::string rt;
  std::string model = "gl";
  std::optional<double> tc;
  std::vector<double> high_window{100.0, 300.0};
  std::vector<double> low_window{10.0, 60.0};
};

int resolve_threads(const Options& o) {
  if (o.threads) return std::max(1, *o.threads);
  if (const char* env = std::getenv("SPINODALKIT_THREADS")) {
    try {
      return std::max(1, std::stoi(env));
    } catch (const std::exception&) {
      throw DataError("SPINODALKIT_THREADS must be an integer");
    }
  }
  return 1;
}

fs::path prepare_out(const std::string& dir) {
  fs::path p(dir);
  std::error_code ec;
  fs::create_directories(p, ec);
  if (ec) throw DataError("cannot create output directory " + dir + ": " + ec.message());
  return p;
}

// Snapshot files under a directory, ordered by the time encoded in their names.
std::vector<std::pair<double, fs::path>> collect_snapshots(const fs::path& in) {
  std::vector<std::pair<double, fs::path>> out;
  auto time_of = [](const fs::path& p) -> std::optional<double> {
    const std::string name = p.filename().string();
    if (name.rfind("snap_t", 0) != 0 || p.extension() != ".csv") return std::nullopt;
    try {
      return std::stod(name.substr(6, name.size() - 10));
    } catch (const std::exception&) {
      return std::nullopt;
    }
  };
  if (fs::is_directory(in)) {
    for (const auto& e : fs::directory_iterator(in))
      if (auto t = time_of(e.path())) out.emplace_back(*t, e.path());
    std::sort(out.begin(), out.end());
    if (out.empty()) throw DataError("no snap_t*.csv files in " + in.string());
  } else {
    out.emplace_back(time_of(in).value_or(0.0), in);
  }
  return out;
}

int cmd_simulate(const Options& o) {
  RunConfig cfg = load_config(o.config);
  if (o.seed) cfg.init.seed = *o.seed;
  if (!o.out.empty()) cfg.out_dir = o.out;
  cfg.solver.threads = resolve_threads(o);
  cfg.solver.force_dt = cfg.solver.force_dt || o.force_dt;
  const fs::path out = prepare_out(cfg.out_dir);

  const ScalarField2D init =
      gaussian_field(cfg.grid, cfg.init.mean, cfg.init.variance, cfg.init.seed, cfg.solver.threads);
  const double dt = resolve_dt(cfg.solver, cfg.grid.h);
  std::cout << "simulate: " << cfg.grid.nx << "x" << cfg.grid.ny << ", dt = " << format_double(dt)
            << ", seed = " << cfg.init.seed << "\n";
  RunResult res;
  try {
    res = run(init, cfg.solver, GibbsModel{});
  } catch (const StabilityError& e) {
    if (e.last_stable) {
      write_field_csv(out / "last_stable.csv", e.last_stable->field);
      write_diagnostics_csv(out / "diagnostics.csv", e.last_stable->diagnostics);
      std::cerr << "last stable state (t = " << format_double(e.last_stable->t)
                << ") written to " << (out / "last_stable.csv").string() << "\n";
    }
    throw;
  }
  for (const auto& s : res.snapshots) {
    const fs::path p = out / snapshot_filename(s.time);
    write_field_csv(p, s.field);
    std::cout << "  t = " << format_double(s.time) << " (step " << s.step << ") -> " << p.string()
              << "\n";
  }
  write_diagnostics_csv(out / "diagnostics.csv", res.diagnostics);
  return kOk;
}

int cmd_analyze(const Options& o) {
  AnalysisConfig acfg;
  if (!o.config.empty()) acfg = load_config(o.config).analysis;
  std::vector<AnalysisRow> rows;
  for (const auto& [t, path] : collect_snapshots(o.in)) {
    rows.push_back(analyze_snapshot(read_field_csv(path), t, acfg.threshold, acfg.contrast));
    const auto& r = rows.back();
    std::cout << "t = " << format_double(t) << "  L = " << format_double(r.char_length)
              << "  Ti = " << format_double(r.ti_fraction) << "  clusters = " << r.n_clusters
              << "  spans = " << r.spans_x << r.spans_y << "  R_x = " << format_double(r.r_eff_x)
              << "  R_y = " << format_double(r.r_eff_y) << "\n";
  }
  const fs::path out = prepare_out(o.out.empty() ? "." : o.out);
  write_analysis_csv(out / "analysis.csv", rows);
  return kOk;
}

int cmd_transport(const Options& o) {
  std::vector<TransportReport> rows;
  for (const auto& r : read_transport_csv(o.in)) rows.push_back(analyze_transport(r));
  write_transport_report(std::cout, rows);
  if (!o.out.empty()) {
    std::ofstream f(prepare_out(o.out) / "transport_report.csv", std::ios::binary);
    write_transport_report(f, rows);
  }
  if (!o.rt.empty()) {
    const auto trace = read_pairs_csv(o.rt);
    std::cout << "Tc_midpoint_K," << format_double(tc_midpoint(trace)) << "\n";
  }
  return kOk;
}

int cmd_fit_hc2(const Options& o) {
  const auto data = read_hc2_csv(o.in);
  Hc2Fit fit;
  if (o.model == "gl")
    fit = fit_gl_hc2(data, o.tc);
  else if (o.model == "powerlaw")
    fit = fit_powerlaw_hc2(data, o.tc);
  else
    throw CLI::ValidationError("--model", "must be 'gl' or 'powerlaw'");
  if (fit.clamped_points)
    std::cerr << "warning: " << fit.clamped_points
              << " point(s) above the fitted Tc were evaluated as zero field\n";
  write_fit_table(std::cout, fit.model, fit.result);
  if (!o.out.empty()) write_fit_csv(prepare_out(o.out) / ("fit_" + fit.model.name + ".csv"), fit.model, fit.result);
  return fit.result.converged ? kOk : kNumerical;
}

int cmd_fit_resonance(const Options& o) {
  const auto fit = fit_resonance(read_s21_csv(o.in));
  write_fit_table(std::cout, fit.model, fit.result);
  if (!o.out.empty()) write_fit_csv(prepare_out(o.out) / "fit_inv_s21.csv", fit.model, fit.result);
  return fit.result.converged ? kOk : kNumerical;
}

int cmd_fit_sigma(const Options& o) {
  RegimeWindows w;
  w.high_t = {o.high_window[0], o.high_window[1]};
  w.low_t = {o.low_window[0], o.low_window[1]};
  const auto reg = fit_conductivity_regimes(read_pairs_csv(o.in), w);
  std::ostringstream csv;
  csv << "regime,abscissa,slope,intercept,r2,points\n"
      << "high_T,T," << format_double(reg.high_t.slope) << ',' << format_double(reg.high_t.intercept)
      << ',' << format_double(reg.high_t.r2) << ',' << reg.high_points << "\n"
      << "low_T,sqrt_T," << format_double(reg.low_t.slope) << ','
      << format_double(reg.low_t.intercept) << ',' << format_double(reg.low_t.r2) << ','
      << reg.low_points << "\n";
  std::cout << csv.str();
  if (!o.out.empty()) {
    std::ofstream f(prepare_out(o.out) / "fit_sigma.csv", std::ios::binary);
    f << csv.str();
  }
  return kOk;
}

int cmd_render(const Options& o) {
  const fs::path out = prepare_out(o.out.empty() ? "." : o.out);
  for (const auto& [t, path] : collect_snapshots(o.in)) {
    const fs::path dst = out / path.filename().replace_extension(".ppm");
    render_ppm(read_field_csv(path), dst);
    std::cout << path.string() << " -> " << dst.string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"spinodalkit: spinodal phase-field simulation and superconducting film analysis"};
  app.require_subcommand(1);
  Options o;

  auto* sim = app.add_subcommand("simulate", "Run the Cahn-Hilliard solver from a config file");
  sim->add_option("--config", o.config, "Run configuration (INI)")->required()->check(CLI::ExistingFile);
  sim->add_option("--out", o.out, "Output directory (overrides paths.out)");
  sim->add_option("--seed", o.seed, "Override init.seed");
  sim->add_option("--threads", o.threads, "Worker threads (results do not depend on it)");
  sim->add_flag("--force-dt", o.force_dt, "Allow dt above the stability bound");

  auto* ana = app.add_subcommand("analyze", "Microstructure report for snapshot CSVs");
  ana->add_option("--in", o.in, "Snapshot CSV or directory of snap_t*.csv")->required()->check(CLI::ExistingPath);
  ana->add_option("--config", o.config, "Config supplying [analysis] settings")->check(CLI::ExistingFile);
  ana->add_option("--out", o.out, "Output directory for analysis.csv");

  auto* tr = app.add_subcommand("transport", "Free-electron and kinetic-inductance table");
  tr->add_option("--in", o.in, "CSV: label,d_m,Rs_ohm_sq,Tc_K,hall_slope_ohm_per_T")->required()->check(CLI::ExistingFile);
  tr->add_option("--rt", o.rt, "Optional R(T) trace CSV: T_K,R_ohm")->check(CLI::ExistingFile);
  tr->add_option("--out", o.out, "Output directory for transport_report.csv");

  auto* hc2 = app.add_subcommand("fit-hc2", "Fit upper-critical-field data");
  hc2->add_option("--in", o.in, "CSV: T_K,muH_T")->required()->check(CLI::ExistingFile);
  hc2->add_option("--model", o.model, "gl or powerlaw")->check(CLI::IsMember({"gl", "powerlaw"}));
  hc2->add_option("--tc", o.tc, "Hold Tc fixed at this value (K)");
  hc2->add_option("--out", o.out, "Output directory for the parameter CSV");

  auto* res = app.add_subcommand("fit-resonance", "Fit inverse S21 of a resonator");
  res->add_option("--in", o.in, "CSV: f_Hz,re_S21,im_S21")->required()->check(CLI::ExistingFile);
  res->add_option("--out", o.out, "Output directory for the parameter CSV");

  auto* sig = app.add_subcommand("fit-sigma", "Linear-in-T and linear-in-sqrt(T) conductivity fits");
  sig->add_option("--in", o.in, "CSV: T_K,sigma")->required()->check(CLI::ExistingFile);
  sig->add_option("--high", o.high_window, "High-T window lo,hi (K)")->expected(2)->delimiter(',');
  sig->add_option("--low", o.low_window, "Low-T window lo,hi (K)")->expected(2)->delimiter(',');
  sig->add_option("--out", o.out, "Output directory for fit_sigma.csv");

  auto* ren = app.add_subcommand("render", "Convert snapshot CSVs to PPM images");
  ren->add_option("--in", o.in, "Snapshot CSV or directory")->required()->check(CLI::ExistingPath);
  ren->add_option("--out", o.out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (sim->parsed()) return cmd_simulate(o);
    if (ana->parsed()) return cmd_analyze(o);
    if (tr->parsed()) return cmd_transport(o);
    if (hc2->parsed()) return cmd_fit_hc2(o);
    if (res->parsed()) return cmd_fit_resonance(o);
    if (sig->parsed()) return cmd_fit_sigma(o);
    if (ren->parsed()) return cmd_render(o);
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return kNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kData;
  }
  return kUsage;
}
