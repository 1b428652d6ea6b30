#include "cli_app.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "tr2l/tr2l.h"

namespace tr2l::cli {

namespace {

using nlohmann::ordered_json;

enum ExitCode { kSuccess = 0, kFailure = 1, kUsage = 2 };

// Raised for bad option values that CLI11 accepts syntactically.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the library reports a failure.
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(tr2l_status status, const std::string &what) {
  if (status != TR2L_OK)
    throw NumericalError(what + ": " + tr2l_status_string(status) + ": " +
                         tr2l_last_error());
}

template <typename T, void (*Destroy)(T *)> struct Deleter {
  void operator()(T *p) const { Destroy(p); }
};
using DrivePtr = std::unique_ptr<tr2l_drive, Deleter<tr2l_drive, tr2l_drive_destroy>>;
using TrajectoryPtr =
    std::unique_ptr<tr2l_trajectory, Deleter<tr2l_trajectory, tr2l_trajectory_destroy>>;
using SweepPtr = std::unique_ptr<tr2l_sweep, Deleter<tr2l_sweep, tr2l_sweep_destroy>>;
using ReportPtr =
    std::unique_ptr<tr2l_work_report, Deleter<tr2l_work_report, tr2l_work_report_destroy>>;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string short_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

std::string join(const std::vector<double> &values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i)
    out += (i ? "," : "") + num(values[i]);
  return out;
}

struct Range {
  double lo = -0.2;
  double hi = 0.2;
  std::size_t count = 41;

  std::vector<double> values() const {
    std::vector<double> out;
    for (std::size_t i = 0; i < count; ++i)
      out.push_back(count == 1 ? lo
                    : i + 1 == count
                        ? hi
                        : lo + (hi - lo) * (static_cast<double>(i) / (count - 1)));
    return out;
  }
};

Range parse_range(const std::string &text, const char *flag) {
  Range r;
  std::istringstream in(text);
  char c1 = 0, c2 = 0;
  long long n = 0;
  if (!(in >> r.lo >> c1 >> r.hi >> c2 >> n) || c1 != ':' || c2 != ':' ||
      !(in >> std::ws).eof())
    throw ConfigError(std::string(flag) + " expects LO:HI:N, got '" + text + "'");
  if (n < 1)
    throw ConfigError(std::string(flag) + " needs N >= 1");
  if (!(r.hi >= r.lo) || !std::isfinite(r.lo) || !std::isfinite(r.hi))
    throw ConfigError(std::string(flag) + " needs finite LO <= HI");
  r.count = static_cast<std::size_t>(n);
  return r;
}

struct RunConfig {
  std::string command;
  tr2l_ae_params params{};
  std::vector<double> a;
  std::size_t steps = 0; // 0: library default
  std::string eps_range;
  std::string delta_range;
  std::vector<double> beta_thermal;
  std::string out;
  std::string format;

  tr2l_grid_policy policy() const {
    tr2l_grid_policy p;
    tr2l_grid_policy_default(&p);
    if (steps > 0)
      p.reference_steps = p.rescaled_steps = steps;
    return p;
  }
};

// "# key=value" lines shared by every output file.
std::vector<std::string> provenance(const RunConfig &cfg) {
  const tr2l_grid_policy g = cfg.policy();
  std::vector<std::string> lines = {
      std::string("tr2l ") + tr2l_version() + " " + cfg.command,
      "omega0=" + num(cfg.params.omega0) + " beta_chirp=" + num(cfg.params.beta_chirp) +
          " t0=" + num(cfg.params.t0) + " t_f=" + num(8.0 * cfg.params.t0),
      "a=" + join(cfg.a),
      "reference_steps=" + std::to_string(g.reference_steps) +
          " rescaled_steps=" + std::to_string(g.rescaled_steps) +
          " integrator=midpoint-exponential",
  };
  if (!cfg.beta_thermal.empty())
    lines.push_back("beta_thermal=" + join(cfg.beta_thermal));
  return lines;
}

ordered_json provenance_json(const RunConfig &cfg) {
  const tr2l_grid_policy g = cfg.policy();
  ordered_json p;
  p["tool"] = std::string("tr2l ") + tr2l_version();
  p["command"] = cfg.command;
  p["omega0"] = cfg.params.omega0;
  p["beta_chirp"] = cfg.params.beta_chirp;
  p["t0"] = cfg.params.t0;
  p["t_f"] = 8.0 * cfg.params.t0;
  p["a"] = cfg.a;
  p["reference_steps"] = g.reference_steps;
  p["rescaled_steps"] = g.rescaled_steps;
  if (!cfg.beta_thermal.empty())
    p["beta_thermal"] = cfg.beta_thermal;
  return p;
}

// Writes to `path`, or to `fallback` when path is empty or "-".
class Sink {
public:
  Sink(const std::string &path, std::ostream &fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_.open(path, std::ios::binary | std::ios::trunc);
      if (!file_)
        throw NumericalError("cannot open '" + path + "' for writing");
      stream_ = &file_;
    }
  }
  std::ostream &operator*() { return *stream_; }
  void close(const std::string &path) {
    stream_->flush();
    if (file_.is_open()) {
      file_.close();
      if (!file_)
        throw NumericalError("failed writing '" + path + "'");
    }
  }

private:
  std::ofstream file_;
  std::ostream *stream_;
};

void write_json(const RunConfig &cfg, const ordered_json &doc, std::ostream &fallback) {
  Sink sink(cfg.out, fallback);
  *sink << doc.dump(2) << '\n';
  sink.close(cfg.out);
}

void validate_common(RunConfig &cfg, const std::vector<double> &default_a) {
  if (cfg.a.empty())
    cfg.a = default_a;
  for (double a : cfg.a)
    if (!(a > 0.0) || !std::isfinite(a))
      throw ConfigError("--a values must be positive");
  auto positive = [](double v) { return v > 0.0 && std::isfinite(v); };
  if (!positive(cfg.params.omega0) || !positive(cfg.params.beta_chirp) ||
      !positive(cfg.params.t0))
    throw ConfigError("--omega0, --beta-chirp and --t0 must be positive");
  if (!cfg.format.empty() && cfg.format != "csv" && cfg.format != "json")
    throw ConfigError("--format must be csv or json");
}

// ---- validate ---------------------------------------------------------------

const char *speed_text(tr2l_speed s) {
  switch (s) {
  case TR2L_SPEED_FASTER:
    return "faster";
  case TR2L_SPEED_SLOWER:
    return "slower";
  default:
    return "same";
  }
}

int cmd_validate(RunConfig &cfg, std::ostream &stdout_, std::ostream &err) {
  validate_common(cfg, {2.0, 5.0, 10.0});
  std::ostringstream out;
  const tr2l_grid_policy policy = cfg.policy();

  ordered_json doc;
  doc["provenance"] = provenance_json(cfg);
  doc["checks"] = ordered_json::array();
  bool all_passed = true;

  for (double a : cfg.a) {
    tr2l_protocol_check c;
    check(tr2l_check_protocol(&cfg.params, a, &policy, &c), "validate a=" + short_num(a));
    all_passed = all_passed && c.passed;

    out << "a = " << short_num(a) << ": " << (c.passed ? "PASS" : "FAIL") << '\n'
        << "  map: f^-1(0) residual " << num(c.map.initial_time_residual)
        << ", f^-1(t_f) = " << num(c.map.final_time) << " (" << speed_text(c.map.speed)
        << "), |f'-1| at ends " << num(c.map.initial_rate_residual) << " / "
        << num(c.map.final_rate_residual) << ", min f' " << num(c.map.min_rate)
        << (c.map_ok ? "" : "  [FAIL]") << '\n'
        << "  composition residual: rabi " << num(c.composition_rabi) << ", detuning "
        << num(c.composition_detuning) << (c.composition_ok ? "" : "  [FAIL]") << '\n'
        << "  boundary mismatch: rabi " << num(c.boundary_rabi) << ", detuning "
        << num(c.boundary_detuning) << (c.boundary_ok ? "" : "  [FAIL]") << '\n';
    if (c.peak_checked)
      out << "  peak rabi " << num(c.peak_rabi) << " at tau " << num(c.peak_time)
          << " (expected " << num(c.peak_expected) << ")"
          << (c.peak_ok ? "" : "  [FAIL]") << '\n';
    out << "  propagator distance " << num(c.propagator_distance) << " (phase "
        << num(c.phase_difference) << "), P2 ref " << num(c.reference_p2) << ", P2 tr "
        << num(c.rescaled_p2) << (c.equality_ok ? "" : "  [FAIL]") << '\n';
    if (c.map.speed == TR2L_SPEED_SLOWER)
      err << "warning: a = " << short_num(a)
          << " is slower than reference; the rescaled protocol is not a shortcut\n";

    ordered_json j;
    j["a"] = a;
    j["passed"] = static_cast<bool>(c.passed);
    j["speed"] = speed_text(c.map.speed);
    j["map"] = {{"initial_time_residual", c.map.initial_time_residual},
                {"final_time", c.map.final_time},
                {"initial_rate_residual", c.map.initial_rate_residual},
                {"final_rate_residual", c.map.final_rate_residual},
                {"min_rate", c.map.min_rate},
                {"max_rate", c.map.max_rate},
                {"passed", static_cast<bool>(c.map_ok)}};
    j["composition"] = {{"rabi", c.composition_rabi},
                        {"detuning", c.composition_detuning},
                        {"passed", static_cast<bool>(c.composition_ok)}};
    j["boundary"] = {{"rabi", c.boundary_rabi},
                     {"detuning", c.boundary_detuning},
                     {"passed", static_cast<bool>(c.boundary_ok)}};
    if (c.peak_checked)
      j["peak"] = {{"rabi", c.peak_rabi},
                   {"expected", c.peak_expected},
                   {"tau", c.peak_time},
                   {"passed", static_cast<bool>(c.peak_ok)}};
    j["propagator"] = {{"distance", c.propagator_distance},
                       {"phase_difference", c.phase_difference},
                       {"reference_p2", c.reference_p2},
                       {"rescaled_p2", c.rescaled_p2},
                       {"reference_steps", c.reference_steps},
                       {"rescaled_steps", c.rescaled_steps},
                       {"passed", static_cast<bool>(c.equality_ok)}};
    if (c.map.speed == TR2L_SPEED_SLOWER)
      j["warning"] = "slower than reference";
    doc["checks"].push_back(j);
  }
  doc["passed"] = all_passed;

  out << (all_passed ? "all checks passed" : "some checks FAILED") << '\n';
  if (cfg.out.empty() && cfg.format == "json") {
    stdout_ << doc.dump(2) << '\n';
  } else {
    if (!cfg.out.empty())
      write_json(cfg, doc, stdout_);
    stdout_ << out.str();
  }
  return all_passed ? kSuccess : kFailure;
}

// ---- simulate ---------------------------------------------------------------

int cmd_simulate(RunConfig &cfg, std::ostream &out, std::ostream &) {
  validate_common(cfg, {1.0, 2.0, 10.0});
  if (cfg.format == "json")
    throw ConfigError("simulate writes CSV only");
  const tr2l_grid_policy policy = cfg.policy();
  const std::filesystem::path dir = cfg.out.empty() ? "." : cfg.out;
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw NumericalError("cannot create output directory '" + dir.string() + "'");

  for (double a : cfg.a) {
    tr2l_drive *raw = nullptr;
    check(tr2l_drive_create_rescaled(&cfg.params, a, 0.0, 0.0, &raw), "drive");
    DrivePtr drive(raw);
    const std::size_t steps = a == 1.0 ? policy.reference_steps : policy.rescaled_steps;
    tr2l_trajectory *traj_raw = nullptr;
    check(tr2l_trajectory_create(drive.get(), steps, nullptr, &traj_raw), "trajectory");
    TrajectoryPtr traj(traj_raw);

    const bool reference = a == 1.0;
    const std::filesystem::path path = dir / ("trajectory_a" + short_num(a) + ".csv");
    Sink sink(path.string(), out);
    std::ostream &os = *sink;
    for (const std::string &line : provenance(cfg))
      os << "# " << line << '\n';
    os << "# trajectory a=" << num(a) << " window=[0," << num(8.0 * cfg.params.t0 / a)
       << "] steps=" << steps << " psi0=|1>\n";
    os << "time,P1,P2,rabi,detuning" << (reference ? ",P1_ad,P2_ad" : "") << '\n';
    const std::size_t n = tr2l_trajectory_size(traj.get());
    for (std::size_t i = 0; i < n; ++i) {
      tr2l_trajectory_point p;
      check(tr2l_trajectory_point_at(traj.get(), i, &p), "trajectory row");
      os << num(p.time) << ',' << num(p.p1) << ',' << num(p.p2) << ',' << num(p.rabi)
         << ',' << num(p.detuning);
      if (reference) {
        double p1 = 0.0, p2 = 0.0;
        check(tr2l_adiabatic_populations(&cfg.params, p.time, &p1, &p2),
              "adiabatic populations");
        os << ',' << num(p1) << ',' << num(p2);
      }
      os << '\n';
    }
    sink.close(path.string());
  }
  return kSuccess;
}

// ---- sweep ------------------------------------------------------------------

struct SweepRun {
  tr2l_error_kind kind;
  std::vector<double> values;
};

int cmd_sweep(RunConfig &cfg, std::ostream &out, std::ostream &err) {
  validate_common(cfg, {1.0, 2.0, 10.0});
  std::vector<SweepRun> runs;
  if (!cfg.eps_range.empty())
    runs.push_back({TR2L_ERROR_RABI, parse_range(cfg.eps_range, "--eps-range").values()});
  if (!cfg.delta_range.empty())
    runs.push_back(
        {TR2L_ERROR_DETUNING, parse_range(cfg.delta_range, "--delta-range").values()});
  if (runs.empty()) {
    runs.push_back({TR2L_ERROR_RABI, Range{}.values()});
    runs.push_back({TR2L_ERROR_DETUNING, Range{}.values()});
  }
  for (const SweepRun &run : runs)
    for (double v : run.values)
      if (!(v > -1.0))
        throw ConfigError("error fractions must exceed -1");

  const tr2l_grid_policy policy = cfg.policy();
  const bool json = cfg.format == "json";
  ordered_json doc;
  doc["provenance"] = provenance_json(cfg);
  doc["rows"] = ordered_json::array();
  std::ostringstream csv;
  csv << "a,error_kind,error_value,fidelity,pi_pulse_fidelity\n";
  std::vector<std::string> failures;

  for (const SweepRun &run : runs) {
    tr2l_sweep *raw = nullptr;
    check(tr2l_sweep_run(&cfg.params, run.kind, run.values.data(), run.values.size(),
                         cfg.a.data(), cfg.a.size(), &policy, &raw),
          "sweep");
    SweepPtr sweep(raw);
    const char *kind = run.kind == TR2L_ERROR_RABI ? "rabi" : "detuning";
    for (std::size_t i = 0; i < tr2l_sweep_size(sweep.get()); ++i) {
      tr2l_sweep_row row;
      check(tr2l_sweep_row_at(sweep.get(), i, &row), "sweep row");
      const bool rabi = run.kind == TR2L_ERROR_RABI;
      const double pi = tr2l_pi_pulse_fidelity(row.error);
      csv << num(row.a) << ',' << kind << ',' << num(row.error) << ','
          << (row.ok ? num(row.fidelity) : "nan") << ',' << (rabi ? num(pi) : "")
          << '\n';
      ordered_json j;
      j["a"] = row.a;
      j["error_kind"] = kind;
      j["error_value"] = row.error;
      j["fidelity"] = row.ok ? ordered_json(row.fidelity) : ordered_json(nullptr);
      if (rabi)
        j["pi_pulse_fidelity"] = pi;
      doc["rows"].push_back(j);
    }
    for (std::size_t i = 0; i < tr2l_sweep_failure_count(sweep.get()); ++i) {
      std::size_t index = 0;
      const char *message = nullptr;
      check(tr2l_sweep_failure_at(sweep.get(), i, &index, &message), "sweep failure");
      failures.push_back(std::string(kind) + " row " + std::to_string(index) + ": " +
                         message);
    }
  }

  Sink sink(cfg.out, out);
  if (json) {
    doc["failures"] = failures;
    *sink << doc.dump(2) << '\n';
  } else {
    for (const std::string &line : provenance(cfg))
      *sink << "# " << line << '\n';
    *sink << csv.str();
    for (const std::string &f : failures)
      *sink << "# failure " << f << '\n';
  }
  sink.close(cfg.out);
  for (const std::string &f : failures)
    err << "sweep point failed: " << f << '\n';
  return failures.empty() ? kSuccess : kFailure;
}

// ---- work -------------------------------------------------------------------

ordered_json atoms_json(const tr2l_work_atom (&atoms)[4]) {
  ordered_json arr = ordered_json::array();
  for (const tr2l_work_atom &atom : atoms)
    arr.push_back({{"initial", atom.initial ? "-" : "+"},
                   {"final", atom.final ? "-" : "+"},
                   {"work", atom.work},
                   {"probability", atom.probability}});
  return arr;
}

int cmd_work(RunConfig &cfg, std::ostream &out, std::ostream &) {
  validate_common(cfg, {2.0, 10.0});
  if (cfg.beta_thermal.empty())
    cfg.beta_thermal = {0.1, 1.0, 10.0};
  for (double a : cfg.a)
    if (!(a >= 1.0))
      throw ConfigError("work comparison needs a >= 1");
  for (double b : cfg.beta_thermal)
    if (!(b >= 0.0) || !std::isfinite(b))
      throw ConfigError("--beta-thermal values must be finite and >= 0");

  const tr2l_grid_policy policy = cfg.policy();
  tr2l_work_report *raw = nullptr;
  check(tr2l_work_compare(&cfg.params, cfg.a.data(), cfg.a.size(),
                          cfg.beta_thermal.data(), cfg.beta_thermal.size(), &policy, &raw),
        "work comparison");
  ReportPtr report(raw);

  bool all_within = true;
  ordered_json doc;
  doc["provenance"] = provenance_json(cfg);
  doc["tolerance"] = tr2l_work_equality_tolerance();
  doc["rows"] = ordered_json::array();
  std::ostringstream csv;
  csv << "a,beta_thermal,protocol,initial,final,work,probability\n";

  for (std::size_t i = 0; i < tr2l_work_report_size(report.get()); ++i) {
    tr2l_work_row row;
    check(tr2l_work_report_row_at(report.get(), i, &row), "report row");
    all_within = all_within && row.within_tolerance;

    tr2l_work_atom ref[4], tr[4];
    check(tr2l_protocol_work_atoms(&cfg.params, 1.0, row.beta_thermal, &policy, ref),
          "reference atoms");
    check(tr2l_protocol_work_atoms(&cfg.params, row.a, row.beta_thermal, &policy, tr),
          "rescaled atoms");

    ordered_json j;
    j["a"] = row.a;
    j["beta_thermal"] = row.beta_thermal;
    j["mean_ref"] = row.mean_ref;
    j["mean_tr"] = row.mean_tr;
    j["fluct_ref"] = row.fluct_ref;
    j["fluct_tr"] = row.fluct_tr;
    j["mean_gap"] = row.mean_gap;
    j["fluct_gap"] = row.fluct_gap;
    j["propagator_distance"] = row.propagator_distance;
    j["within_tolerance"] = static_cast<bool>(row.within_tolerance);
    j["atoms_ref"] = atoms_json(ref);
    j["atoms_tr"] = atoms_json(tr);
    doc["rows"].push_back(j);

    for (int p = 0; p < 2; ++p) {
      const tr2l_work_atom *atoms = p == 0 ? ref : tr;
      for (int k = 0; k < 4; ++k)
        csv << num(row.a) << ',' << num(row.beta_thermal) << ','
            << (p == 0 ? "ref" : "tr") << ',' << (atoms[k].initial ? '-' : '+') << ','
            << (atoms[k].final ? '-' : '+') << ',' << num(atoms[k].work) << ','
            << num(atoms[k].probability) << '\n';
    }
  }
  doc["passed"] = all_within;

  Sink sink(cfg.out, out);
  if (cfg.format == "csv") {
    for (const std::string &line : provenance(cfg))
      *sink << "# " << line << '\n';
    *sink << "# equality gaps " << (all_within ? "within" : "EXCEED") << " tolerance "
          << num(tr2l_work_equality_tolerance()) << '\n';
    *sink << csv.str();
  } else {
    *sink << doc.dump(2) << '\n';
  }
  sink.close(cfg.out);
  return all_within ? kSuccess : kFailure;
}

} // namespace

int run(int argc, const char *const *argv, std::ostream &out, std::ostream &err) {
  CLI::App app{"Time-rescaled shortcuts to adiabaticity for a driven two-level system",
               "tr2l"};
  app.require_subcommand(1);
  app.fallthrough();
  app.failure_message(CLI::FailureMessage::help);
  app.set_config("--config", "", "key=value configuration file (flags override it)");

  RunConfig cfg;
  tr2l_ae_params_default(&cfg.params);
  app.add_option("--omega0", cfg.params.omega0, "peak Rabi frequency")
      ->capture_default_str();
  app.add_option("--beta-chirp", cfg.params.beta_chirp, "chirp constant beta")
      ->capture_default_str();
  app.add_option("--t0", cfg.params.t0, "characteristic timescale")->capture_default_str();
  app.add_option("--a", cfg.a, "contraction parameters, comma separated")
      ->delimiter(',');
  app.add_option("--steps", cfg.steps, "integration steps per protocol window")
      ->check(CLI::PositiveNumber);
  app.add_option("--eps-range", cfg.eps_range, "Rabi error sweep LO:HI:N");
  app.add_option("--delta-range", cfg.delta_range, "detuning error sweep LO:HI:N");
  app.add_option("--beta-thermal", cfg.beta_thermal,
                 "inverse temperatures, comma separated")
      ->delimiter(',');
  app.add_option("--out", cfg.out, "output path (directory for simulate)");
  app.add_option("--format", cfg.format, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));

  app.add_subcommand("validate", "check the rescaling map, drives and propagator equality");
  app.add_subcommand("simulate", "write population trajectories per contraction parameter");
  app.add_subcommand("sweep", "fidelity under systematic Rabi / detuning errors");
  app.add_subcommand("work", "two-point-measurement work statistics, reference vs rescaled");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsage;
  }

  cfg.command = app.get_subcommands().front()->get_name();
  try {
    if (cfg.command == "validate")
      return cmd_validate(cfg, out, err);
    if (cfg.command == "simulate")
      return cmd_simulate(cfg, out, err);
    if (cfg.command == "sweep")
      return cmd_sweep(cfg, out, err);
    return cmd_work(cfg, out, err);
  } catch (const ConfigError &e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kUsage;
  } catch (const std::exception &e) {
    err << "error: " << e.what() << '\n';
    return kFailure;
  }
}

} // namespace tr2l::cli
