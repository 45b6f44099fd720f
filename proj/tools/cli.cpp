#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "blmac/asymptotic.hpp"
#include "blmac/csv.hpp"
#include "blmac/errors.hpp"
#include "blmac/experiments.hpp"
#include "blmac/simulator.hpp"
#include "blmac/svg_plot.hpp"
#include "blmac/version.hpp"

namespace blmac::cli {

namespace {

namespace fs = std::filesystem;

fs::path prepare_out_dir(const std::string& out) {
  fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  fs::create_directories(dir);
  return dir;
}

void emit(const ResultTable& table, const fs::path& csv_path) {
  write_csv(table, csv_path);
  std::cout << "wrote " << csv_path.string() << "\n";
}

void emit_plot(const ResultTable& table, const PlotSpec& spec,
               const fs::path& svg_path) {
  write_svg(table, spec, svg_path);
  std::cout << "wrote " << svg_path.string() << "\n";
}

Scenario parse_scenario(const std::string& name) {
  return name == "sharing" ? Scenario::sharing : Scenario::partition;
}

const char* method_name(EvalMethod method) {
  return method == EvalMethod::quadrature ? "quadrature" : "monte-carlo";
}

struct SimulateOpts {
  std::string scenario = "partition";
  int k = 2;
  int n = 50;
  double snr_db = 10.0;
  int bl = 0;  // 0 means no cap
  std::uint64_t seed = 42;
  std::string out = ".";
  bool plot = false;
};

int do_simulate(const SimulateOpts& opt) {
  const fs::path dir = prepare_out_dir(opt.out);
  const NetworkConfig config = NetworkConfig::from_snr_db(opt.k, opt.n, opt.snr_db);
  const BLPolicy bl = opt.bl > 0 ? BLPolicy::capped(opt.bl) : BLPolicy::none();
  const GainMatrix gains = sample_gains(config, {opt.seed, 0});
  const ScenarioOutcome outcome = parse_scenario(opt.scenario) == Scenario::partition
                                      ? run_partition(gains, config, bl)
                                      : run_sharing(gains, config, bl);

  ResultTable table({"k", "omega_k", "rate_per_channel_k", "phi_k"});
  std::ostringstream config_str;
  config_str << "scenario=" << opt.scenario << " k=" << opt.k << " n=" << opt.n
             << " snr_db=" << format_number(opt.snr_db) << " bl=" << opt.bl
             << " seed=" << opt.seed;
  stamp_provenance(table, "simulate", opt.seed, config_str.str(), false);
  for (const TransmitterResult& tr : outcome.transmitters)
    table.add_row({static_cast<std::int64_t>(tr.index + 1), tr.accessible_fraction,
                   tr.rate_per_channel, tr.spectral_efficiency});
  table.add_row({std::string("NSE"), std::string("total"), outcome.nse,
                 std::string()});

  emit(table, dir / "simulate.csv");
  if (opt.plot)
    emit_plot(table,
              {.x_column = "k",
               .y_columns = {"omega_k", "rate_per_channel_k", "phi_k"},
               .group_by = std::nullopt,
               .filter = std::nullopt,
               .title = "Per-transmitter outcome",
               .x_label = "transmitter k",
               .y_label = "value"},
              dir / "simulate.svg");
  return 0;
}

struct AsymptoticOpts {
  int k = 2;
  double snr_db = 10.0;
  long mc_samples = 200000;
  double quad_tol = 1e-9;
  std::uint64_t seed = 42;
  std::string out = ".";
  bool plot = false;
};

int do_asymptotic(const AsymptoticOpts& opt) {
  const fs::path dir = prepare_out_dir(opt.out);
  AsymptoticNumerics numerics;
  numerics.quad_rel_tol = opt.quad_tol;
  numerics.mc_samples = opt.mc_samples;
  numerics.mc_seed = opt.seed;
  const AsymptoticConfig cfg = numerics.config(opt.snr_db, opt.k);

  const PartitionAsymptotics pa = partition_asymptotics(cfg);
  const WaterLevelChain chain = solve_beta_chain(cfg);
  const double nse2 = nse_sharing_inf(chain);
  double nse2_var = 0.0;
  bool any_mc = false;
  for (std::size_t i = 0; i < chain.rates.size(); ++i) {
    nse2_var += chain.rate_stderr[i] * chain.rate_stderr[i];
    any_mc = any_mc || chain.method[i] == EvalMethod::monte_carlo;
  }

  ResultTable table({"k", "statistic", "value", "stderr", "method"});
  std::ostringstream config_str;
  config_str << "k=" << opt.k << " snr_db=" << format_number(opt.snr_db)
             << " mc_samples=" << opt.mc_samples
             << " quad_tol=" << format_number(opt.quad_tol)
             << " seed=" << opt.seed;
  stamp_provenance(table, "asymptotic", opt.seed, config_str.str(), false);

  const std::string quad = "quadrature";
  table.add_row({std::int64_t{0}, std::string("beta_star"), pa.beta_star, 0.0, quad});
  table.add_row({std::int64_t{0}, std::string("omega_inf"), pa.omega, 0.0, quad});
  table.add_row({std::int64_t{0}, std::string("rate_inf"), pa.rate, 0.0, quad});
  table.add_row({std::int64_t{0}, std::string("nse_partition_inf"), pa.nse, 0.0, quad});
  table.add_row({std::int64_t{0}, std::string("nse_sharing_inf"), nse2,
                 std::sqrt(nse2_var),
                 std::string(any_mc ? "monte-carlo" : "quadrature")});
  for (std::size_t i = 0; i < chain.levels.size(); ++i) {
    const auto k_cell = static_cast<std::int64_t>(i + 1);
    table.add_row({k_cell, std::string("beta_k"), chain.levels[i],
                   chain.level_stderr[i], std::string(method_name(chain.method[i]))});
    table.add_row({k_cell, std::string("rate_k"), chain.rates[i],
                   chain.rate_stderr[i], std::string(method_name(chain.method[i]))});
  }

  emit(table, dir / "asymptotic.csv");
  if (opt.plot)
    emit_plot(table,
              {.x_column = "k",
               .y_columns = {"value"},
               .group_by = std::nullopt,
               .filter = std::make_pair(std::string("statistic"), std::string("rate_k")),
               .title = "Asymptotic per-channel rate by arrival",
               .x_label = "arrival k",
               .y_label = "rate (bit/s/Hz)"},
              dir / "asymptotic.svg");
  return 0;
}

struct SweepOpts {
  std::string scenario = "partition";
  int k = 2;
  int n = 50;
  double snr_db = 10.0;
  int trials = 200;
  std::uint64_t seed = 42;
  std::string out = ".";
  bool plot = false;
};

int do_sweep(const SweepOpts& opt) {
  const fs::path dir = prepare_out_dir(opt.out);
  const NetworkConfig config = NetworkConfig::from_snr_db(opt.k, opt.n, opt.snr_db);
  const Scenario scenario = parse_scenario(opt.scenario);

  ResultTable table({"l", "statistic", "mean", "stderr", "trials"});
  std::ostringstream config_str;
  config_str << "scenario=" << opt.scenario << " k=" << opt.k << " n=" << opt.n
             << " snr_db=" << format_number(opt.snr_db)
             << " trials=" << opt.trials << " seed=" << opt.seed;
  stamp_provenance(table, "sweep", opt.seed, config_str.str(), false);

  for (int l = 0; l <= opt.n; ++l) {
    const BLPolicy bl = l == 0 ? BLPolicy::none() : BLPolicy::capped(l);
    const TrialStats stats =
        run_trials({config, scenario, bl}, opt.trials, opt.seed);
    append_point_statistics(table, {static_cast<std::int64_t>(l)}, stats);
  }

  emit(table, dir / "sweep.csv");
  if (opt.plot)
    emit_plot(table,
              {.x_column = "l",
               .y_columns = {"mean"},
               .group_by = std::nullopt,
               .filter = std::make_pair(std::string("statistic"), std::string("nse")),
               .title = "NSE versus cap L (0 = uncapped)",
               .x_label = "cap L",
               .y_label = "NSE (bit/s/Hz)"},
              dir / "sweep.svg");
  return 0;
}

struct FigureOpts {
  std::string which;
  int k = 2;
  int n = 50;
  double snr_db = 0.0;
  bool snr_set = false;
  bool k_set = false;
  bool n_set = false;
  int trials = 200;
  std::uint64_t seed = 42;
  long mc_samples = 200000;
  double quad_tol = 1e-9;
  std::string out = ".";
  bool plot = false;
};

AsymptoticNumerics figure_numerics(const FigureOpts& opt) {
  AsymptoticNumerics numerics;
  numerics.quad_rel_tol = opt.quad_tol;
  numerics.mc_samples = opt.mc_samples;
  return numerics;
}

int do_figure(const FigureOpts& opt) {
  const fs::path dir = prepare_out_dir(opt.out);
  const fs::path csv_path = dir / (opt.which + ".csv");

  if (opt.which == "fig2") {
    ConvergenceStudy study;
    study.snr_db = opt.snr_set ? opt.snr_db : 20.0;
    if (opt.k_set) study.num_transmitters = opt.k;
    study.trials = opt.trials;
    study.master_seed = opt.seed;
    study.numerics = figure_numerics(opt);
    const ResultTable table = convergence_table(study);
    emit(table, csv_path);
    if (opt.plot)
      emit_plot(table,
                {.x_column = "N",
                 .y_columns = {"sim_mean", "asymptotic"},
                 .group_by = std::string("k"),
                 .filter = std::nullopt,
                 .title = "Per-channel rate versus band size",
                 .x_label = "channels N",
                 .y_label = "rate (bit/s/Hz)"},
                dir / "fig2.svg");
    return 0;
  }

  if (opt.which == "fig3") {
    BlSweepStudy study;
    if (opt.n_set) study.num_channels = opt.n;
    if (opt.snr_set) study.snr_db = opt.snr_db;
    study.trials = opt.trials;
    study.master_seed = opt.seed;
    const ResultTable table = bl_sweep_table(study);
    emit(table, csv_path);
    if (opt.plot)
      for (double load : study.loads)
        emit_plot(table,
                  {.x_column = "l",
                   .y_columns = {"mean"},
                   .group_by = std::string("scenario"),
                   .filter = std::make_pair(std::string("load"), format_number(load)),
                   .title = "NSE versus cap L at load " + format_number(load),
                   .x_label = "cap L (0 = uncapped)",
                   .y_label = "NSE (bit/s/Hz)"},
                  dir / ("fig3_load" + format_number(load) + ".svg"));
    return 0;
  }

  if (opt.which == "fig4") {
    OptimalBlStudy study;
    if (opt.n_set) study.num_channels = opt.n;
    if (opt.snr_set) study.snr_db = opt.snr_db;
    study.trials = opt.trials;
    study.master_seed = opt.seed;
    study.numerics = figure_numerics(opt);
    const ResultTable table = optimal_bl_table(study);
    emit(table, csv_path);
    if (opt.plot)
      emit_plot(table,
                {.x_column = "load",
                 .y_columns = {"empirical_l", "analytic_l"},
                 .group_by = std::nullopt,
                 .filter = std::nullopt,
                 .title = "Best cap versus load",
                 .x_label = "load K/N",
                 .y_label = "cap L"},
                dir / "fig4.svg");
    return 0;
  }

  // fig5 is the partition regime, fig6 the sharing regime.
  LoadSweepStudy study;
  study.scenario = opt.which == "fig6" ? Scenario::sharing : Scenario::partition;
  if (opt.n_set) study.num_channels = opt.n;
  if (opt.snr_set) study.snr_dbs = {opt.snr_db};
  study.trials = opt.trials;
  study.master_seed = opt.seed;
  study.numerics = figure_numerics(opt);
  const ResultTable table = load_sweep_table(study);
  emit(table, csv_path);
  if (opt.plot)
    emit_plot(table,
              {.x_column = "load",
               .y_columns = {"nse_bl", "nse_nobl"},
               .group_by = std::string("snr_db"),
               .filter = std::nullopt,
               .title = std::string("NSE with and without the cap, ") +
                        scenario_name(study.scenario) + " regime",
               .x_label = "load K/N",
               .y_label = "NSE (bit/s/Hz)"},
              dir / (opt.which + ".svg"));
  return 0;
}

struct OptimalBlOpts {
  int k = 25;
  int n = 50;
  double snr_db = 10.0;
  double quad_tol = 1e-9;
  std::string rounding = "ceil";
  std::string out = ".";
};

int do_optimal_bl(const OptimalBlOpts& opt) {
  const fs::path dir = prepare_out_dir(opt.out);
  AsymptoticNumerics numerics;
  numerics.quad_rel_tol = opt.quad_tol;
  const AsymptoticConfig cfg = numerics.config(opt.snr_db, opt.k);
  const PartitionAsymptotics pa = partition_asymptotics(cfg);
  const BlRounding rounding =
      opt.rounding == "nearest" ? BlRounding::nearest : BlRounding::ceil;
  const int l_star = optimal_bl(opt.k, opt.n, pa.omega, rounding);
  const int l_ceil = optimal_bl(opt.k, opt.n, pa.omega, BlRounding::ceil);
  const int l_nearest = optimal_bl(opt.k, opt.n, pa.omega, BlRounding::nearest);

  std::cout << "l_star = " << l_star << "\n"
            << "beta_star = " << format_number(pa.beta_star) << "\n"
            << "omega_inf = " << format_number(pa.omega) << "\n";

  ResultTable table({"statistic", "value"});
  std::ostringstream config_str;
  config_str << "k=" << opt.k << " n=" << opt.n
             << " snr_db=" << format_number(opt.snr_db)
             << " rounding=" << opt.rounding;
  stamp_provenance(table, "optimal-bl", 0, config_str.str(), false);
  table.add_row({std::string("l_star"), static_cast<double>(l_star)});
  table.add_row({std::string("l_star_ceil"), static_cast<double>(l_ceil)});
  table.add_row({std::string("l_star_nearest"), static_cast<double>(l_nearest)});
  table.add_row({std::string("beta_star"), pa.beta_star});
  table.add_row({std::string("omega_inf"), pa.omega});
  table.add_row({std::string("rate_inf"), pa.rate});
  // Both readings of where a cap L starts to bind in the large-system model:
  // the unused fraction N*omega and the used fraction N*(1-omega).
  table.add_row({std::string("bl_binds_below_unused"),
                 static_cast<double>(opt.n) * pa.omega});
  table.add_row({std::string("bl_binds_below_used"),
                 static_cast<double>(opt.n) * (1.0 - pa.omega)});

  emit(table, dir / "optimal_bl.csv");
  return 0;
}

void add_out_flags(CLI::App* sub, std::string& out, bool* plot) {
  sub->add_option("--out", out, "output directory")->capture_default_str();
  if (plot) sub->add_flag("--plot", *plot, "emit an SVG plot alongside the CSV");
  sub->add_option("--config",
                  "flat key = value file mirroring the long flag names; "
                  "explicit flags take precedence");
}

// Turns the file behind a "--config <path>" token into ordinary
// "--key=value" tokens appended after the original arguments.  Keys whose
// flag already appears on the command line are dropped, so explicit flags
// stay authoritative.  The expansion happens before parsing because the
// argument parser only honors config files registered on the root command,
// while --config here belongs to a subcommand.
std::vector<std::string> expand_config_tokens(std::vector<std::string> args) {
  std::string path;
  bool found = false;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      found = true;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(std::string("--config=").size());
      found = true;
      break;
    }
  }
  if (!found) return args;

  std::ifstream in(path);
  if (!in) throw CLI::FileError::Missing(path);

  const auto trim = [](std::string text) {
    const auto first = text.find_first_not_of(" \t\r");
    if (first == std::string::npos) return std::string();
    const auto last = text.find_last_not_of(" \t\r");
    return text.substr(first, last - first + 1);
  };

  std::map<std::string, std::string> entries;  // last occurrence of a key wins
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string text = trim(line);
    if (text.empty() || text.front() == '#' || text.front() == ';') continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos || trim(text.substr(0, eq)).empty()) {
      throw CLI::ConfigError(path + ": line " + std::to_string(line_no) +
                             " is not a key = value entry");
    }
    const std::string key = trim(text.substr(0, eq));
    std::string value = trim(text.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    }
    if (key == "config") continue;  // a config file cannot chain another one
    entries[key] = value;
  }

  for (const auto& [key, value] : entries) {
    const std::string flag = "--" + key;
    bool given = false;
    for (const std::string& arg : args) {
      if (arg == flag || arg.rfind(flag + "=", 0) == 0) {
        given = true;
        break;
      }
    }
    if (!given) args.push_back(flag + "=" + value);
  }
  return args;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"Decentralized water-filling over a shared band: simulator, "
               "large-system numerics, and campaign runner"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  SimulateOpts sim;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "run one seeded realization and report per-transmitter stats");
  simulate->add_option("--scenario", sim.scenario, "channel access regime")
      ->check(CLI::IsMember({"partition", "sharing"}))
      ->capture_default_str();
  simulate->add_option("--k", sim.k, "number of transmitters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--n", sim.n, "number of channels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--snr-db", sim.snr_db, "10*log10(p_max/noise)")
      ->capture_default_str();
  simulate->add_option("--bl", sim.bl, "cap on accessible channels, 0 or omitted = none")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--seed", sim.seed, "trial seed")->capture_default_str();
  add_out_flags(simulate, sim.out, &sim.plot);
  simulate->callback([&sim] { do_simulate(sim); });

  AsymptoticOpts asym;
  CLI::App* asymptotic = app.add_subcommand(
      "asymptotic", "evaluate the large-system water levels, rates, and NSE");
  asymptotic->add_option("--k", asym.k, "number of transmitters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  asymptotic->add_option("--snr-db", asym.snr_db, "10*log10(p_max/noise)")
      ->capture_default_str();
  asymptotic->add_option("--mc-samples", asym.mc_samples,
                         "Monte Carlo sample count for deep chain entries")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  asymptotic->add_option("--quad-tol", asym.quad_tol, "quadrature relative tolerance")
      ->capture_default_str();
  asymptotic->add_option("--seed", asym.seed, "Monte Carlo seed")
      ->capture_default_str();
  add_out_flags(asymptotic, asym.out, &asym.plot);
  asymptotic->callback([&asym] { do_asymptotic(asym); });

  SweepOpts swp;
  CLI::App* sweep = app.add_subcommand(
      "sweep", "sweep the cap L from uncapped to N at a fixed operating point");
  sweep->add_option("--scenario", swp.scenario, "channel access regime")
      ->check(CLI::IsMember({"partition", "sharing"}))
      ->capture_default_str();
  sweep->add_option("--k", swp.k, "number of transmitters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--n", swp.n, "number of channels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--snr-db", swp.snr_db, "10*log10(p_max/noise)")
      ->capture_default_str();
  sweep->add_option("--trials", swp.trials, "Monte Carlo trials per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  sweep->add_option("--seed", swp.seed, "master seed")->capture_default_str();
  add_out_flags(sweep, swp.out, &swp.plot);
  sweep->callback([&swp] { do_sweep(swp); });

  FigureOpts fig;
  CLI::App* figure = app.add_subcommand(
      "figure", "reproduce one of the shipped study tables");
  figure->add_option("which", fig.which, "study id")
      ->required()
      ->check(CLI::IsMember({"fig2", "fig3", "fig4", "fig5", "fig6"}));
  CLI::Option* fig_k = figure->add_option("--k", fig.k, "transmitters (fig2)")
                           ->check(CLI::PositiveNumber);
  CLI::Option* fig_n = figure->add_option("--n", fig.n, "channels (fig3-fig6)")
                           ->check(CLI::PositiveNumber);
  CLI::Option* fig_snr =
      figure->add_option("--snr-db", fig.snr_db, "override the study's SNR grid");
  figure->add_option("--trials", fig.trials, "Monte Carlo trials per point")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  figure->add_option("--seed", fig.seed, "master seed")->capture_default_str();
  figure->add_option("--mc-samples", fig.mc_samples,
                     "Monte Carlo sample count for deep chain entries")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  figure->add_option("--quad-tol", fig.quad_tol, "quadrature relative tolerance")
      ->capture_default_str();
  add_out_flags(figure, fig.out, &fig.plot);
  figure->callback([&fig, fig_k, fig_n, fig_snr] {
    fig.k_set = fig_k->count() > 0;
    fig.n_set = fig_n->count() > 0;
    fig.snr_set = fig_snr->count() > 0;
    do_figure(fig);
  });

  OptimalBlOpts obl;
  CLI::App* optbl = app.add_subcommand(
      "optimal-bl", "analytic cap rule with the constants behind it");
  optbl->add_option("--k", obl.k, "number of transmitters")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optbl->add_option("--n", obl.n, "number of channels")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  optbl->add_option("--snr-db", obl.snr_db, "10*log10(p_max/noise)")
      ->capture_default_str();
  optbl->add_option("--quad-tol", obl.quad_tol, "quadrature relative tolerance")
      ->capture_default_str();
  optbl->add_option("--rounding", obl.rounding, "cap rounding rule")
      ->check(CLI::IsMember({"ceil", "nearest"}))
      ->capture_default_str();
  add_out_flags(optbl, obl.out, nullptr);
  optbl->callback([&obl] { do_optimal_bl(obl); });

  try {
    std::vector<std::string> args(argv + 1, argv + argc);
    args = expand_config_tokens(std::move(args));
    std::reverse(args.begin(), args.end());  // the vector overload expects reversed args
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  } catch (const NumericsError& e) {
    std::cerr << "numerics: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace blmac::cli
