// Command-line front end: capacity sweeps, reference figure datasets, and
// the analytic metrics report.
//
// Exit codes: 0 success, 2 usage/invalid arguments, 3 configuration outside
// the closed-form envelope, 4 I/O failure, 5 numerical failure.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "mimocap/errors.hpp"
#include "mimocap/sweep.hpp"

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitEnvelope = 3;
constexpr int kExitIo = 4;
constexpr int kExitNumerical = 5;

void write_output(const std::string& out_path, const std::string& payload) {
  if (out_path.empty()) {
    std::cout << payload;
    return;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open '" + out_path + "' for writing");
  }
  f << payload;
  f.flush();
  if (!f) {
    throw std::runtime_error("write failed for '" + out_path + "'");
  }
}

struct CommonOpts {
  int nt = 1;
  int nr = 1;
  double delta_t = 0.0;
  double delta_r = 0.0;
};

void add_common(CLI::App* cmd, CommonOpts& o) {
  cmd->add_option("--nt", o.nt, "transmit antennas")->required();
  cmd->add_option("--nr", o.nr, "receive antennas")->required();
  cmd->add_option("--delta-t", o.delta_t,
                  "transmit impairment level (EVM), >= 0")
      ->capture_default_str();
  cmd->add_option("--delta-r", o.delta_r, "receive impairment level, >= 0")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "ergodic capacity of MIMO links with residual transceiver impairments"};
  app.require_subcommand(1);

  // --- sweep ---------------------------------------------------------------
  auto* sweep_cmd =
      app.add_subcommand("sweep", "evaluate capacity over an SNR grid");
  CommonOpts sw;
  std::string sw_grid = "0:5:20";
  std::string sw_method = "all";
  std::uint64_t sw_trials = 100000;
  std::uint64_t sw_seed = 42;
  int sw_threads = 0;
  std::string sw_format = "csv";
  std::string sw_out;
  add_common(sweep_cmd, sw);
  sweep_cmd->add_option("--snr-db", sw_grid, "SNR grid 'start:step:stop' in dB")
      ->capture_default_str();
  sweep_cmd
      ->add_option("--method", sw_method,
                   "closed-form | quadrature | monte-carlo | all")
      ->capture_default_str();
  sweep_cmd->add_option("--trials", sw_trials, "Monte-Carlo trials per point")
      ->capture_default_str();
  sweep_cmd->add_option("--seed", sw_seed, "Monte-Carlo seed")
      ->capture_default_str();
  sweep_cmd
      ->add_option("--threads", sw_threads,
                   "worker threads (0 = hardware concurrency)")
      ->capture_default_str();
  sweep_cmd->add_option("--format", sw_format, "csv | json")
      ->capture_default_str();
  sweep_cmd->add_option("--out", sw_out, "output file (default: stdout)");

  // --- figure --------------------------------------------------------------
  auto* fig_cmd =
      app.add_subcommand("figure", "write a reference figure dataset");
  std::string fig_id;
  mimocap::FigureOverrides fig_ov;
  std::uint64_t fig_trials = 0;  // 0 = figure default
  std::uint64_t fig_seed = 0;
  bool fig_seed_set = false;
  fig_cmd->add_option("--id", fig_id, "fig2 | fig3 | fig4 | fig5 | fig6")
      ->required();
  fig_cmd->add_option("--trials", fig_trials,
                      "Monte-Carlo trials per point (0 = figure default)");
  fig_cmd->add_option("--seed", fig_seed, "Monte-Carlo seed")
      ->each([&](const std::string&) { fig_seed_set = true; });
  fig_cmd->add_option("--threads", fig_ov.threads,
                      "worker threads (0 = hardware concurrency)");
  fig_cmd->add_option("--max-n", fig_ov.max_antennas,
                      "cap on the antenna grids of fig4-fig6");
  fig_cmd->add_option("--out-dir", fig_ov.out_dir, "output directory")
      ->capture_default_str();

  // --- metrics -------------------------------------------------------------
  auto* met_cmd = app.add_subcommand(
      "metrics", "analytic low-SNR metrics, ceilings, and large-array limits");
  CommonOpts mt;
  double met_snr_db = 10.0;
  std::string met_format = "text";
  std::string met_out;
  add_common(met_cmd, mt);
  met_cmd
      ->add_option("--snr-db", met_snr_db,
                   "SNR (dB) used for the large-Nt reference value")
      ->capture_default_str();
  met_cmd->add_option("--format", met_format, "text | json")
      ->capture_default_str();
  met_cmd->add_option("--out", met_out, "output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sweep_cmd->parsed()) {
      mimocap::SweepRequest req;
      req.ant = mimocap::AntennaConfig(sw.nt, sw.nr);
      req.imp = mimocap::ImpairmentConfig(sw.delta_t, sw.delta_r);
      req.snr_db = mimocap::parse_snr_grid(sw_grid);
      req.method = mimocap::method_from_string(sw_method);
      req.trials = sw_trials;
      req.seed = sw_seed;
      req.threads = sw_threads;
      req.format = mimocap::format_from_string(sw_format);
      req.out_path = sw_out;
      const auto rows = mimocap::run_sweep(req);
      write_output(req.out_path, req.format == mimocap::OutputFormat::Csv
                                     ? mimocap::to_csv(rows)
                                     : mimocap::to_json(req, rows));
    } else if (fig_cmd->parsed()) {
      if (fig_trials > 0) fig_ov.trials = fig_trials;
      if (fig_seed_set) fig_ov.seed = fig_seed;
      const auto result = mimocap::write_figure_dataset(fig_id, fig_ov);
      for (const auto& f : result.files) std::cout << "wrote: " << f << "\n";
      if (!result.notes.empty()) std::cout << result.notes;
    } else if (met_cmd->parsed()) {
      const auto rep = mimocap::compute_metrics(
          mimocap::AntennaConfig(mt.nt, mt.nr),
          mimocap::ImpairmentConfig(mt.delta_t, mt.delta_r),
          mimocap::SnrSpec::from_db(met_snr_db).rho);
      if (met_format == "text") {
        write_output(met_out, mimocap::to_text(rep));
      } else if (met_format == "json") {
        write_output(met_out, mimocap::to_json(rep));
      } else {
        throw std::invalid_argument("metrics --format must be text or json");
      }
    }
  } catch (const mimocap::envelope_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitEnvelope;
  } catch (const mimocap::numerical_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
