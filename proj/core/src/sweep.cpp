#include "mimocap/sweep.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <system_error>

#include <json.hpp>

#include "mimocap/closedform.hpp"
#include "mimocap/errors.hpp"
#include "mimocap/montecarlo.hpp"

namespace mimocap {

namespace {

using nlohmann::json;

// Shortest decimal representation that round-trips to the same double.
std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view s, const char* what) {
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string("malformed ") + what + ": '" +
                                std::string(s) + "'");
  }
  return v;
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) {
    throw std::runtime_error("cannot open '" + path + "' for writing");
  }
  f << content;
  f.flush();
  if (!f) {
    throw std::runtime_error("write failed for '" + path + "'");
  }
}

SweepRow make_row(double snr_db, const AntennaConfig& ant,
                  const ImpairmentConfig& imp, std::string method,
                  double capacity) {
  SweepRow row;
  row.snr_db = snr_db;
  row.rho = SnrSpec::from_db(snr_db).rho;
  row.nt = ant.nt;
  row.nr = ant.nr;
  row.delta_t = imp.delta_t;
  row.delta_r = imp.delta_r;
  row.method = std::move(method);
  row.capacity_bits = capacity;
  return row;
}

SweepRow mc_row(double snr_db, const AntennaConfig& ant,
                const ImpairmentConfig& imp, std::uint64_t trials,
                std::uint64_t seed, int threads) {
  const double rho = SnrSpec::from_db(snr_db).rho;
  const CapacityEstimate est =
      estimate_ergodic_capacity(rho, ant, imp, trials, seed, threads);
  SweepRow row = make_row(snr_db, ant, imp, "monte-carlo", est.mean);
  row.std_error = est.std_error;
  row.trials = est.trials;
  row.seed = est.seed;
  return row;
}

}  // namespace

Method method_from_string(const std::string& s) {
  if (s == "closed-form") return Method::ClosedForm;
  if (s == "quadrature") return Method::Quadrature;
  if (s == "monte-carlo") return Method::MonteCarlo;
  if (s == "all") return Method::All;
  throw std::invalid_argument(
      "unknown method '" + s +
      "' (expected closed-form, quadrature, monte-carlo, or all)");
}

OutputFormat format_from_string(const std::string& s) {
  if (s == "csv") return OutputFormat::Csv;
  if (s == "json") return OutputFormat::Json;
  throw std::invalid_argument("unknown format '" + s +
                              "' (expected csv or json)");
}

std::string to_string(Method m) {
  switch (m) {
    case Method::ClosedForm: return "closed-form";
    case Method::Quadrature: return "quadrature";
    case Method::MonteCarlo: return "monte-carlo";
    case Method::All: return "all";
  }
  throw std::logic_error("unreachable");
}

std::string to_string(OutputFormat f) {
  return f == OutputFormat::Csv ? "csv" : "json";
}

std::vector<double> parse_snr_grid(const std::string& spec) {
  const auto c1 = spec.find(':');
  const auto c2 = (c1 == std::string::npos) ? std::string::npos
                                            : spec.find(':', c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos ||
      spec.find(':', c2 + 1) != std::string::npos) {
    throw std::invalid_argument("SNR grid must be 'start:step:stop' (dB), got '" +
                                spec + "'");
  }
  const double start = parse_double(std::string_view(spec).substr(0, c1), "grid start");
  const double step =
      parse_double(std::string_view(spec).substr(c1 + 1, c2 - c1 - 1), "grid step");
  const double stop = parse_double(std::string_view(spec).substr(c2 + 1), "grid stop");
  if (!std::isfinite(start) || !std::isfinite(step) || !std::isfinite(stop)) {
    throw std::invalid_argument("SNR grid values must be finite");
  }
  if (step <= 0.0) {
    throw std::invalid_argument("SNR grid step must be > 0");
  }
  if (start > stop) {
    throw std::invalid_argument("SNR grid start must be <= stop");
  }
  std::vector<double> out;
  const double count = std::floor((stop - start) / step + 1e-9);
  for (int i = 0; i <= static_cast<int>(count); ++i) {
    out.push_back(start + i * step);
  }
  return out;
}

std::vector<SweepRow> run_sweep(const SweepRequest& req) {
  if (req.snr_db.empty()) {
    throw std::invalid_argument("SNR grid is empty");
  }
  for (std::size_t i = 1; i < req.snr_db.size(); ++i) {
    if (!(req.snr_db[i] > req.snr_db[i - 1])) {
      throw std::invalid_argument("SNR grid must be strictly increasing");
    }
  }
  const bool wants_mc =
      req.method == Method::MonteCarlo || req.method == Method::All;
  if (wants_mc && req.trials < 100) {
    throw std::invalid_argument("Monte-Carlo sweeps need trials >= 100");
  }

  std::vector<SweepRow> rows;
  for (const double db : req.snr_db) {
    const double rho = SnrSpec::from_db(db).rho;
    if (req.method == Method::ClosedForm || req.method == Method::All) {
      rows.push_back(make_row(db, req.ant, req.imp, "closed-form",
                              ergodic_capacity_closed(rho, req.ant, req.imp)));
    }
    if (req.method == Method::Quadrature || req.method == Method::All) {
      rows.push_back(
          make_row(db, req.ant, req.imp, "quadrature",
                   ergodic_capacity_quadrature(rho, req.ant, req.imp)));
    }
    if (wants_mc) {
      rows.push_back(
          mc_row(db, req.ant, req.imp, req.trials, req.seed, req.threads));
    }
  }
  return rows;
}

std::string to_csv(const std::vector<SweepRow>& rows) {
  std::string out =
      "snr_db,rho,nt,nr,delta_t,delta_r,method,capacity_bits,std_error,"
      "trials,seed\n";
  for (const auto& r : rows) {
    out += fmt(r.snr_db);
    out += ',';
    out += fmt(r.rho);
    out += ',';
    out += std::to_string(r.nt);
    out += ',';
    out += std::to_string(r.nr);
    out += ',';
    out += fmt(r.delta_t);
    out += ',';
    out += fmt(r.delta_r);
    out += ',';
    out += r.method;
    out += ',';
    out += fmt(r.capacity_bits);
    out += ',';
    if (r.std_error) out += fmt(*r.std_error);
    out += ',';
    if (r.trials) out += std::to_string(*r.trials);
    out += ',';
    if (r.seed) out += std::to_string(*r.seed);
    out += '\n';
  }
  return out;
}

namespace {

json row_to_json(const SweepRow& r) {
  json j{{"snr_db", r.snr_db},       {"rho", r.rho},
         {"nt", r.nt},               {"nr", r.nr},
         {"delta_t", r.delta_t},     {"delta_r", r.delta_r},
         {"method", r.method},       {"capacity_bits", r.capacity_bits}};
  if (r.std_error) j["std_error"] = *r.std_error;
  if (r.trials) j["trials"] = *r.trials;
  if (r.seed) j["seed"] = *r.seed;
  return j;
}

SweepRow row_from_json(const json& j) {
  SweepRow r;
  r.snr_db = j.at("snr_db").get<double>();
  r.rho = j.at("rho").get<double>();
  r.nt = j.at("nt").get<int>();
  r.nr = j.at("nr").get<int>();
  r.delta_t = j.at("delta_t").get<double>();
  r.delta_r = j.at("delta_r").get<double>();
  r.method = j.at("method").get<std::string>();
  r.capacity_bits = j.at("capacity_bits").get<double>();
  if (j.contains("std_error")) r.std_error = j.at("std_error").get<double>();
  if (j.contains("trials")) r.trials = j.at("trials").get<std::uint64_t>();
  if (j.contains("seed")) r.seed = j.at("seed").get<std::uint64_t>();
  return r;
}

}  // namespace

std::string to_json(const SweepRequest& req, const std::vector<SweepRow>& rows) {
  json j;
  j["request"] = json{{"nt", req.ant.nt},
                      {"nr", req.ant.nr},
                      {"delta_t", req.imp.delta_t},
                      {"delta_r", req.imp.delta_r},
                      {"snr_db", req.snr_db},
                      {"method", to_string(req.method)},
                      {"trials", req.trials},
                      {"seed", req.seed},
                      {"threads", req.threads},
                      {"format", to_string(req.format)},
                      {"out", req.out_path}};
  j["results"] = json::array();
  for (const auto& r : rows) j["results"].push_back(row_to_json(r));
  return j.dump(2) + "\n";
}

SweepRequest request_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    const json& q = j.at("request");
    SweepRequest req;
    req.ant = AntennaConfig(q.at("nt").get<int>(), q.at("nr").get<int>());
    req.imp = ImpairmentConfig(q.at("delta_t").get<double>(),
                               q.at("delta_r").get<double>());
    req.snr_db = q.at("snr_db").get<std::vector<double>>();
    req.method = method_from_string(q.at("method").get<std::string>());
    req.trials = q.at("trials").get<std::uint64_t>();
    req.seed = q.at("seed").get<std::uint64_t>();
    req.threads = q.at("threads").get<int>();
    req.format = format_from_string(q.at("format").get<std::string>());
    req.out_path = q.at("out").get<std::string>();
    return req;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed sweep JSON: ") + e.what());
  }
}

std::vector<SweepRow> rows_from_json(const std::string& text) {
  try {
    const json j = json::parse(text);
    std::vector<SweepRow> rows;
    for (const auto& item : j.at("results")) rows.push_back(row_from_json(item));
    return rows;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed sweep JSON: ") + e.what());
  }
}

namespace {

struct FigureContext {
  std::uint64_t trials;
  std::uint64_t seed;
  int threads;
  int max_antennas;
  std::filesystem::path dir;
  FigureResult result;

  void emit(const std::string& name, const std::vector<SweepRow>& rows) {
    const std::string path = (dir / name).string();
    write_text_file(path, to_csv(rows));
    result.files.push_back(path);
  }
};

std::vector<int> power_of_two_grid(int lo, int hi) {
  std::vector<int> g;
  for (int v = lo; v <= hi; v *= 2) g.push_back(v);
  return g;
}

// Capacity vs SNR for 2x2 and 4x4, ideal and impaired hardware; the impaired
// curves saturate while the ideal ones keep their log growth.
void figure_capacity_vs_snr(FigureContext& ctx) {
  const std::vector<double> grid = parse_snr_grid("-10:5:40");
  for (const int n : {2, 4}) {
    const AntennaConfig ant(n, n);
    for (const bool impaired : {false, true}) {
      const ImpairmentConfig imp =
          impaired ? ImpairmentConfig(0.15, 0.15) : ImpairmentConfig();
      std::vector<SweepRow> rows;
      for (const double db : grid) {
        const double rho = SnrSpec::from_db(db).rho;
        rows.push_back(make_row(db, ant, imp, "closed-form",
                                ergodic_capacity_closed(rho, ant, imp)));
        rows.push_back(mc_row(db, ant, imp, ctx.trials, ctx.seed, ctx.threads));
      }
      char name[64];
      std::snprintf(name, sizeof(name), "fig2_%dx%d_%s.csv", n, n,
                    impaired ? "impaired" : "ideal");
      ctx.emit(name, rows);
    }
  }
}

// Wideband regime: Monte-Carlo capacity against Eb/N0 plus the first-order
// expansion C = S0 * log2(eb/eb_min).  Eb/N0 is recoverable from the rows as
// rho / capacity_bits.
void figure_low_snr(FigureContext& ctx) {
  const AntennaConfig ant(4, 4);
  for (const bool impaired : {false, true}) {
    const ImpairmentConfig imp =
        impaired ? ImpairmentConfig(0.15, 0.15) : ImpairmentConfig();
    const char* tag = impaired ? "impaired" : "ideal";

    std::vector<SweepRow> mc_rows;
    for (const double db : parse_snr_grid("-25:2.5:10")) {
      mc_rows.push_back(mc_row(db, ant, imp, ctx.trials, ctx.seed, ctx.threads));
    }
    ctx.emit(std::string("fig3_mc_") + tag + ".csv", mc_rows);

    const LowSnrMetrics m = low_snr_metrics(ant, imp);
    std::vector<SweepRow> ap_rows;
    // Start one grid step above the crossing: at eb == eb_n0_min the
    // capacity is 0 and the rho = eb * C back-mapping degenerates.
    for (double eb_db = m.eb_n0_min_db + 0.25; eb_db <= 0.0 + 1e-9;
         eb_db += 0.25) {
      const double eb = std::pow(10.0, eb_db / 10.0);
      const double c = low_snr_capacity_approx(eb, m);
      ap_rows.push_back(
          make_row(10.0 * std::log10(eb * c), ant, imp, "low-snr-approx", c));
    }
    ctx.emit(std::string("fig3_approx_") + tag + ".csv", ap_rows);
    char note[96];
    std::snprintf(note, sizeof(note),
                  "fig3 %s: approx curve crosses zero at eb_n0_db = %.4f\n",
                  tag, m.eb_n0_min_db);
    ctx.result.notes += note;
  }
  ctx.result.notes +=
      "fig3: plot capacity against eb_n0_db = 10*log10(rho / capacity_bits)\n";
}

// Capacity vs Nt at fixed Nr: saturates at the large-Nt reference line.
void figure_vs_nt(FigureContext& ctx) {
  const double snr_db = 10.0;
  const double rho = SnrSpec::from_db(snr_db).rho;
  const int nr = 4;
  const auto nts = power_of_two_grid(1, std::min(512, ctx.max_antennas));
  for (const bool impaired : {false, true}) {
    const ImpairmentConfig imp =
        impaired ? ImpairmentConfig(0.15, 0.15) : ImpairmentConfig();
    const char* tag = impaired ? "impaired" : "ideal";
    std::vector<SweepRow> mc_rows, limit_rows;
    const double limit = capacity_large_nt(rho, nr, imp);
    for (const int nt : nts) {
      const AntennaConfig ant(nt, nr);
      mc_rows.push_back(mc_row(snr_db, ant, imp, ctx.trials, ctx.seed, ctx.threads));
      limit_rows.push_back(make_row(snr_db, ant, imp, "large-nt-limit", limit));
    }
    ctx.emit(std::string("fig4_mc_") + tag + ".csv", mc_rows);
    ctx.emit(std::string("fig4_limit_") + tag + ".csv", limit_rows);
  }
}

// Capacity vs Nr at fixed Nt: the impaired curve approaches the finite
// large-Nr ceiling; the ideal one is unbounded (no reference line).
void figure_vs_nr(FigureContext& ctx) {
  const double snr_db = 10.0;
  const int nt = 4;
  const auto nrs = power_of_two_grid(1, std::min(512, ctx.max_antennas));
  for (const bool impaired : {false, true}) {
    const ImpairmentConfig imp =
        impaired ? ImpairmentConfig(0.15, 0.15) : ImpairmentConfig();
    const char* tag = impaired ? "impaired" : "ideal";
    std::vector<SweepRow> mc_rows, limit_rows;
    for (const int nr : nrs) {
      const AntennaConfig ant(nt, nr);
      mc_rows.push_back(mc_row(snr_db, ant, imp, ctx.trials, ctx.seed, ctx.threads));
      if (impaired) {
        limit_rows.push_back(make_row(snr_db, ant, imp, "large-nr-limit",
                                      capacity_large_nr(nt, imp)));
      }
    }
    ctx.emit(std::string("fig5_mc_") + tag + ".csv", mc_rows);
    if (impaired) ctx.emit("fig5_limit_impaired.csv", limit_rows);
  }
}

// Deterministic equivalent vs Monte-Carlo across aspect ratios
// beta = nr/nt in {1/2, 1, 2}.
void figure_large_system(FigureContext& ctx) {
  const double snr_db = 10.0;
  const double rho = SnrSpec::from_db(snr_db).rho;
  struct BetaCase {
    const char* tag;
    int nt_num;  // nt = nr * nt_num / nt_den
    int nt_den;
  };
  const BetaCase betas[] = {{"0.5", 2, 1}, {"1", 1, 1}, {"2", 1, 2}};

  std::string gap_table =
      "fig6 relative impairment gap (C_ideal - C_impaired)/C_ideal from "
      "monte-carlo:\n";
  for (const auto& bc : betas) {
    std::vector<SweepRow> rows[2][2];  // [impaired][0=mc,1=de]
    for (const int nr : {4, 8, 16, 32, 64}) {
      const int nt = nr * bc.nt_num / bc.nt_den;
      if (nt < 1 || nt > ctx.max_antennas || nr > ctx.max_antennas) continue;
      const AntennaConfig ant(nt, nr);
      double mc_val[2] = {0.0, 0.0};
      for (const bool impaired : {false, true}) {
        const ImpairmentConfig imp =
            impaired ? ImpairmentConfig(0.15, 0.15) : ImpairmentConfig();
        SweepRow mc =
            mc_row(snr_db, ant, imp, ctx.trials, ctx.seed, ctx.threads);
        mc_val[impaired] = mc.capacity_bits;
        rows[impaired][0].push_back(std::move(mc));
        rows[impaired][1].push_back(
            make_row(snr_db, ant, imp, "deterministic-equivalent",
                     deterministic_equivalent(rho, ant, imp).capacity_approx));
      }
      char line[128];
      std::snprintf(line, sizeof(line), "  beta=%s nr=%d: %.4f\n", bc.tag, nr,
                    (mc_val[0] - mc_val[1]) / mc_val[0]);
      gap_table += line;
    }
    for (const bool impaired : {false, true}) {
      const char* itag = impaired ? "impaired" : "ideal";
      ctx.emit(std::string("fig6_beta") + bc.tag + "_" + itag + "_mc.csv",
               rows[impaired][0]);
      ctx.emit(std::string("fig6_beta") + bc.tag + "_" + itag + "_de.csv",
               rows[impaired][1]);
    }
  }
  ctx.result.notes += gap_table;
}

}  // namespace

FigureResult write_figure_dataset(const std::string& figure_id,
                                  const FigureOverrides& ov) {
  FigureContext ctx;
  // fig2/fig3 sweep small arrays where extra trials are cheap; the antenna
  // scans in fig4-fig6 reach 512x4 and 64x64, so their default is lighter.
  const bool small_arrays = figure_id == "fig2" || figure_id == "fig3";
  ctx.trials = ov.trials.value_or(small_arrays ? 100000 : 10000);
  ctx.seed = ov.seed.value_or(42);
  ctx.threads = ov.threads;
  ctx.max_antennas = ov.max_antennas;
  ctx.dir = ov.out_dir.empty() ? "." : ov.out_dir;
  if (ctx.trials < 100) {
    throw std::invalid_argument("figure datasets need trials >= 100");
  }

  std::error_code ec;
  std::filesystem::create_directories(ctx.dir, ec);
  if (ec) {
    throw std::runtime_error("cannot create output directory '" +
                             ctx.dir.string() + "': " + ec.message());
  }

  if (figure_id == "fig2") {
    figure_capacity_vs_snr(ctx);
  } else if (figure_id == "fig3") {
    figure_low_snr(ctx);
  } else if (figure_id == "fig4") {
    figure_vs_nt(ctx);
  } else if (figure_id == "fig5") {
    figure_vs_nr(ctx);
  } else if (figure_id == "fig6") {
    figure_large_system(ctx);
  } else {
    throw std::invalid_argument("unknown figure id '" + figure_id +
                                "' (expected fig2..fig6)");
  }
  return std::move(ctx.result);
}

MetricsReport compute_metrics(const AntennaConfig& ant,
                              const ImpairmentConfig& imp, double rho) {
  MetricsReport rep;
  rep.ant = ant;
  rep.imp = imp;
  rep.rho = SnrSpec::from_linear(rho).rho;
  rep.low_snr = low_snr_metrics(ant, imp);
  if (imp.delta_t != 0.0 || imp.delta_r != 0.0) {
    rep.ceiling = capacity_ceiling(ant, imp);
  }
  rep.large_nt_limit = capacity_large_nt(rho, ant.nr, imp);
  if (imp.delta_t != 0.0) {
    rep.large_nr_limit = capacity_large_nr(ant.nt, imp);
  }
  return rep;
}

std::string to_text(const MetricsReport& rep) {
  std::ostringstream os;
  os << "configuration      : nt=" << rep.ant.nt << " nr=" << rep.ant.nr
     << " delta_t=" << fmt(rep.imp.delta_t)
     << " delta_r=" << fmt(rep.imp.delta_r) << "\n";
  os << "snr_db             : " << fmt(SnrSpec::from_linear(rep.rho).db())
     << "\n";
  os << "eb_n0_min          : " << fmt(rep.low_snr.eb_n0_min) << " ("
     << fmt(rep.low_snr.eb_n0_min_db) << " dB)\n";
  os << "wideband_slope     : " << fmt(rep.low_snr.wideband_slope) << "\n";
  os << "capacity_slope     : " << fmt(rep.low_snr.capacity_slope)
     << " bits per unit SNR\n";
  os << "capacity_curvature : " << fmt(rep.low_snr.capacity_curvature) << "\n";
  os << "capacity_ceiling   : "
     << (rep.ceiling ? fmt(*rep.ceiling) + " bits/s/Hz" : "unbounded") << "\n";
  os << "large_nt_limit     : " << fmt(rep.large_nt_limit)
     << " bits/s/Hz (at the SNR above)\n";
  os << "large_nr_limit     : "
     << (rep.large_nr_limit ? fmt(*rep.large_nr_limit) + " bits/s/Hz"
                            : "unbounded")
     << "\n";
  return os.str();
}

std::string to_json(const MetricsReport& rep) {
  json j{{"nt", rep.ant.nt},
         {"nr", rep.ant.nr},
         {"delta_t", rep.imp.delta_t},
         {"delta_r", rep.imp.delta_r},
         {"snr_db", SnrSpec::from_linear(rep.rho).db()},
         {"eb_n0_min", rep.low_snr.eb_n0_min},
         {"eb_n0_min_db", rep.low_snr.eb_n0_min_db},
         {"wideband_slope", rep.low_snr.wideband_slope},
         {"capacity_slope", rep.low_snr.capacity_slope},
         {"capacity_curvature", rep.low_snr.capacity_curvature},
         {"capacity_ceiling", rep.ceiling ? json(*rep.ceiling) : json(nullptr)},
         {"large_nt_limit", rep.large_nt_limit},
         {"large_nr_limit",
          rep.large_nr_limit ? json(*rep.large_nr_limit) : json(nullptr)}};
  return j.dump(2) + "\n";
}

}  // namespace mimocap
