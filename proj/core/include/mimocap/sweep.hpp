#pragma once

// SNR sweeps, figure-dataset generation, and the analytic metrics report —
// the orchestration layer behind the command-line tool.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mimocap/asymptotics.hpp"
#include "mimocap/model.hpp"

namespace mimocap {

enum class Method { ClosedForm, Quadrature, MonteCarlo, All };
enum class OutputFormat { Csv, Json };

Method method_from_string(const std::string& s);          // throws std::invalid_argument
OutputFormat format_from_string(const std::string& s);    // throws std::invalid_argument
std::string to_string(Method m);
std::string to_string(OutputFormat f);

// Parses a "start:step:stop" dB grid (step > 0, start <= stop) into the
// ascending list {start, start+step, ...} capped at stop.  Throws
// std::invalid_argument on malformed or non-increasing grids.
std::vector<double> parse_snr_grid(const std::string& spec);

struct SweepRequest {
  AntennaConfig ant{1, 1};
  ImpairmentConfig imp{};
  std::vector<double> snr_db;           // ascending
  Method method = Method::All;
  std::uint64_t trials = 100000;
  std::uint64_t seed = 42;
  int threads = 0;                      // 0 = auto
  OutputFormat format = OutputFormat::Csv;
  std::string out_path;                 // empty = stdout
};

// One output record.  std_error/trials/seed are populated for Monte-Carlo
// rows only and serialize as empty CSV fields otherwise.
struct SweepRow {
  double snr_db = 0.0;
  double rho = 0.0;
  int nt = 1;
  int nr = 1;
  double delta_t = 0.0;
  double delta_r = 0.0;
  std::string method;
  double capacity_bits = 0.0;
  std::optional<double> std_error;
  std::optional<std::uint64_t> trials;
  std::optional<std::uint64_t> seed;
};

// Evaluates the requested methods on the SNR grid.  Rows are ordered by SNR
// (ascending), then by method (closed-form, quadrature, monte-carlo).
std::vector<SweepRow> run_sweep(const SweepRequest& req);

// CSV with the fixed header
//   snr_db,rho,nt,nr,delta_t,delta_r,method,capacity_bits,std_error,trials,seed
// and shortest round-trip decimal formatting for floating-point fields.
std::string to_csv(const std::vector<SweepRow>& rows);

// JSON document {"request": {...}, "results": [...]} that round-trips
// through request_from_json / rows_from_json.
std::string to_json(const SweepRequest& req, const std::vector<SweepRow>& rows);
SweepRequest request_from_json(const std::string& text);
std::vector<SweepRow> rows_from_json(const std::string& text);

// Reference figure datasets (fig2 .. fig6), one CSV file per curve.
struct FigureOverrides {
  std::optional<std::uint64_t> trials;  // per-point Monte-Carlo trials
  std::optional<std::uint64_t> seed;
  int threads = 0;
  int max_antennas = 512;               // caps the antenna grids of fig4-fig6
  std::string out_dir = ".";
};

struct FigureResult {
  std::vector<std::string> files;  // paths written
  std::string notes;               // human-readable diagnostics
};

// figure_id is one of "fig2" ... "fig6".  Throws std::invalid_argument for
// unknown ids; I/O failures surface as std::runtime_error.
FigureResult write_figure_dataset(const std::string& figure_id,
                                  const FigureOverrides& ov);

// Analytic summary of a configuration.  Optional fields are absent when the
// corresponding quantity is unbounded (ideal hardware).
struct MetricsReport {
  AntennaConfig ant{1, 1};
  ImpairmentConfig imp{};
  double rho = 10.0;                    // SNR used for the large-Nt line
  LowSnrMetrics low_snr{};
  std::optional<double> ceiling;
  double large_nt_limit = 0.0;
  std::optional<double> large_nr_limit;
};

MetricsReport compute_metrics(const AntennaConfig& ant,
                              const ImpairmentConfig& imp, double rho);
std::string to_text(const MetricsReport& rep);
std::string to_json(const MetricsReport& rep);

}  // namespace mimocap
