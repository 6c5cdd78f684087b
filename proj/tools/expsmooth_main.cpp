// Command-line front end: smoothing, calibration, simulation, and stress
// analysis of irregularly sampled series.
//
// Exit codes: 0 success, 2 usage error, 1 data error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <string>

#include "CLI11.hpp"

#include "expsmooth/calibration.hpp"
#include "expsmooth/smoother.hpp"
#include "expsmooth/stats.hpp"
#include "expsmooth/stream_io.hpp"

namespace {

using namespace expsmooth;

class UsageError : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

struct TauFlags {
  std::optional<double> tau;
  std::optional<double> half_life;
  std::optional<double> window;
  std::optional<double> effective_n;
};

struct IoFlags {
  std::string input = "-";
  std::string output = "-";
  std::string format;  // empty means: consult EXPSMOOTH_FORMAT, then default csv
};

struct SmoothOptions {
  TauFlags tau_flags;
  std::optional<double> gap;
  IoFlags io;
  std::string method = "v1";
  bool include_weight = false;
};

struct CalibrateOptions {
  std::optional<double> alpha;
  TauFlags tau_flags;
  double gap = 0.0;
  IoFlags io;
};

struct SimulateOptions {
  TauFlags tau_flags;
  double gap = 0.0;
  std::int64_t steps = 0;
  std::int64_t burn_in = 1000;
  double mu = 0.0;
  double sigma = 1.0;
  std::uint64_t seed = 0;
  std::string method = "v1";
  IoFlags io;
};

struct StressOptions {
  std::optional<double> alpha;
  TauFlags tau_flags;
  std::optional<double> gap;
  std::string gap_law = "constant";
  std::int64_t steps = 0;
  std::uint64_t seed = 0;
  IoFlags io;
};

void add_tau_flags(CLI::App* cmd, TauFlags& flags) {
  cmd->add_option("--tau", flags.tau, "Time scale (decay constant)");
  cmd->add_option("--half-life", flags.half_life, "Half-life, tau * ln 2");
  cmd->add_option("--window", flags.window,
                  "Effective window; exact with --gap, the T/2 limit without");
  cmd->add_option("--n", flags.effective_n, "Effective sample count (needs --gap)");
}

void add_io_flags(CLI::App* cmd, IoFlags& io, bool with_input) {
  if (with_input) {
    cmd->add_option("--input", io.input, "Input path, or - for stdin");
  }
  cmd->add_option("--output", io.output, "Output path, or - for stdout");
  cmd->add_option("--format", io.format,
                  "Record format, csv or jsonl (default from EXPSMOOTH_FORMAT)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

// Exactly one time-scale parameterization, resolved before any data is read.
TimeScale resolve_tau(const TauFlags& flags, std::optional<double> gap) {
  const int given = int(flags.tau.has_value()) + int(flags.half_life.has_value()) +
                    int(flags.window.has_value()) + int(flags.effective_n.has_value());
  if (given == 0) {
    throw UsageError("a time scale is required: one of --tau, --half-life, --window, --n");
  }
  if (given > 1) {
    throw UsageError(
        "--tau, --half-life, --window and --n are mutually exclusive; pass exactly one");
  }
  try {
    if (flags.tau) {
      return TimeScale(*flags.tau);
    }
    if (flags.half_life) {
      if (!std::isfinite(*flags.half_life) || *flags.half_life <= 0.0) {
        throw UsageError("--half-life must be finite and > 0");
      }
      return TimeScale(*flags.half_life / std::numbers::ln2);
    }
    if (flags.window) {
      return gap ? tau_from_window_exact(*flags.window, *gap)
                 : tau_from_window_limit(*flags.window);
    }
    if (!gap) {
      throw UsageError("--n needs --gap (the reference sampling interval)");
    }
    const DecayFactor alpha = alpha_from_effective_n(*flags.effective_n);
    if (alpha.value() <= 0.0) {
      throw UsageError("--n 1 means no smoothing and has no positive time scale");
    }
    return TimeScale(-*gap / std::log(alpha.value()));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
}

// The flag wins; EXPSMOOTH_FORMAT supplies the default. CLI11 validates the
// flag, so only the env value needs checking here.
Format resolve_format(const std::string& flag_value) {
  std::string name = flag_value;
  if (name.empty()) {
    const char* env = std::getenv("EXPSMOOTH_FORMAT");
    if (env == nullptr || *env == '\0') {
      return Format::Csv;
    }
    name = env;
    if (name != "csv" && name != "jsonl") {
      throw UsageError("EXPSMOOTH_FORMAT must be csv or jsonl, got \"" + name + "\"");
    }
  }
  return name == "jsonl" ? Format::Jsonl : Format::Csv;
}

Method resolve_method(const std::string& name) {
  if (name == "v1") return Method::V1;
  if (name == "v2") return Method::V2;
  return Method::V2Corrected;
}

struct InputStream {
  std::ifstream file;
  std::istream* stream = nullptr;
};

struct OutputStream {
  std::ofstream file;
  std::ostream* stream = nullptr;
};

InputStream open_input(const std::string& path) {
  InputStream in;
  if (path == "-") {
    in.stream = &std::cin;
    return in;
  }
  in.file.open(path);
  if (!in.file) {
    throw Error("cannot open input file: " + path);
  }
  in.stream = &in.file;
  return in;
}

OutputStream open_output(const std::string& path) {
  OutputStream out;
  if (path == "-") {
    out.stream = &std::cout;
    return out;
  }
  out.file.open(path);
  if (!out.file) {
    throw Error("cannot open output file: " + path);
  }
  out.stream = &out.file;
  return out;
}

// Thin format switch over the two series readers.
class SeriesReader {
public:
  SeriesReader(std::istream& in, Format format) {
    if (format == Format::Csv) {
      csv_.emplace(in);
    } else {
      jsonl_.emplace(in);
    }
  }

  std::optional<SeriesRecord> next() { return csv_ ? csv_->next() : jsonl_->next(); }

private:
  std::optional<CsvSeriesReader> csv_;
  std::optional<JsonlSeriesReader> jsonl_;
};

int run_smooth(const SmoothOptions& options) {
  if (options.gap && !options.tau_flags.window && !options.tau_flags.effective_n) {
    throw UsageError("--gap only accompanies --window or --n here");
  }
  const TimeScale tau = resolve_tau(options.tau_flags, options.gap);
  const Format format = resolve_format(options.io.format);
  const Method method = resolve_method(options.method);

  if (method == Method::V2) {
    std::cerr << "note: v2 assumes a constant sampling rate; its output drifts on "
                 "irregular gaps (use --method v2c for the gap-corrected variant)\n";
  }

  InputStream in = open_input(options.io.input);
  OutputStream out = open_output(options.io.output);
  SeriesReader reader(*in.stream, format);
  RecordWriter writer(*out.stream, format, options.include_weight);

  if (method == Method::V1) {
    StateV1 state;
    bool first = true;
    while (const auto record = reader.next()) {
      try {
        state = first ? v1_init({record->t, record->x})
                      : v1_update(state, {record->t, record->x}, tau);
      } catch (const OutOfOrderError& e) {
        throw Error("line " + std::to_string(record->line) + ": " + e.what());
      }
      first = false;
      const SmoothedValue value = v1_value(state);
      writer.write({record->t, value.x_hat, value.weight});
    }
    return 0;
  }

  // V2 defers its first emission until the first gap is known: alpha1
  // defaults to that gap's decay factor. The first smoothed value is the
  // first observation either way, since the (1 - alpha1) scaling cancels.
  const auto first = reader.next();
  if (!first) {
    return 0;
  }
  const auto second = reader.next();
  DecayFactor alpha1(0.0);
  if (second) {
    if (second->t <= first->t) {
      throw Error("line " + std::to_string(second->line) + ": timestamp " +
                  format_double(second->t) + " does not exceed previous timestamp " +
                  format_double(first->t) +
                  "; v2 requires strictly increasing timestamps (v1 accepts ties)");
    }
    alpha1 = decay_factor(second->t - first->t, tau);
    if (alpha1.value() >= 1.0) {
      throw Error("line " + std::to_string(second->line) +
                  ": gap is below time resolution at this tau; v2 cannot absorb it");
    }
  }
  StateV2 state = v2_init({first->t, first->x}, alpha1);
  writer.write({first->t, first->x, state.bar_w});

  auto absorb = [&](const SeriesRecord& record) {
    try {
      state = method == Method::V2
                  ? v2_update(state, {record.t, record.x}, tau)
                  : v2_update_gap_corrected(state, {record.t, record.x}, tau);
    } catch (const OutOfOrderError& e) {
      throw Error("line " + std::to_string(record.line) + ": " + e.what());
    }
    const SmoothedValue value = v2_value(state);
    writer.write({record.t, value.x_hat, value.weight});
  };

  if (second) {
    absorb(*second);
    while (const auto record = reader.next()) {
      absorb(*record);
    }
  }
  return 0;
}

int run_calibrate(const CalibrateOptions& options) {
  const TauFlags& flags = options.tau_flags;
  const int given = int(options.alpha.has_value()) + int(flags.tau.has_value()) +
                    int(flags.half_life.has_value()) + int(flags.window.has_value()) +
                    int(flags.effective_n.has_value());
  if (given != 1) {
    throw UsageError(
        "calibrate needs exactly one of --alpha, --tau, --half-life, --window, --n");
  }

  CalibrationReport report;
  try {
    if (options.alpha) {
      report = calibrate_from_alpha(DecayFactor(*options.alpha), options.gap);
    } else if (flags.tau) {
      report = calibrate_from_tau(TimeScale(*flags.tau), options.gap);
    } else if (flags.half_life) {
      report = calibrate_from_half_life(*flags.half_life, options.gap);
    } else if (flags.window) {
      report = calibrate_from_window(*flags.window, options.gap);
    } else {
      report = calibrate_from_effective_n(*flags.effective_n, options.gap);
    }
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }

  OutputStream out = open_output(options.io.output);
  *out.stream << (resolve_format(options.io.format) == Format::Csv ? to_csv(report)
                                                                   : to_json(report));
  return 0;
}

int run_simulate(const SimulateOptions& options) {
  SimulationConfig config;
  config.steps = options.steps;
  config.burn_in = options.burn_in;
  config.mu = options.mu;
  config.sigma = options.sigma;
  config.gap = options.gap;
  config.tau = resolve_tau(options.tau_flags, options.gap).tau();
  config.seed = options.seed;
  config.method = resolve_method(options.method);

  const MomentReport report = simulate_constant_rate(config);
  OutputStream out = open_output(options.io.output);
  *out.stream << (resolve_format(options.io.format) == Format::Csv ? to_csv(report)
                                                                   : to_json(report));
  return 0;
}

GapLaw resolve_gap_law(const std::string& name) {
  if (name == "constant") return GapLaw::Constant;
  if (name == "exponential") return GapLaw::Exponential;
  if (name == "uniform") return GapLaw::Uniform;
  return GapLaw::Bursty;
}

int run_stress(const StressOptions& options) {
  const TauFlags& flags = options.tau_flags;
  const int tau_given = int(flags.tau.has_value()) + int(flags.half_life.has_value()) +
                        int(flags.window.has_value()) + int(flags.effective_n.has_value());

  StressReport report;
  if (options.alpha) {
    if (tau_given > 0 || options.gap) {
      throw UsageError("--alpha already fixes the decay; drop the time-scale and "
                       "--gap flags");
    }
    if (options.gap_law != "constant") {
      throw UsageError("--alpha runs the constant-gap stress; with --gap-law pass a "
                       "time scale instead");
    }
    try {
      report = stress_extreme_alpha(DecayFactor(*options.alpha), options.steps,
                                    options.seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    const TimeScale tau = resolve_tau(flags, options.gap);
    try {
      report = variable_rate_divergence(resolve_gap_law(options.gap_law), options.steps,
                                        tau, options.seed);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  }

  OutputStream out = open_output(options.io.output);
  *out.stream << (resolve_format(options.io.format) == Format::Csv ? to_csv(report)
                                                                   : to_json(report));
  return 0;
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Normalized exponential smoothing of irregularly sampled series"};
  app.require_subcommand(1);

  SmoothOptions smooth_options;
  CLI::App* smooth = app.add_subcommand(
      "smooth", "Stream observations through a smoother, one output per record");
  add_tau_flags(smooth, smooth_options.tau_flags);
  smooth->add_option("--gap", smooth_options.gap,
                     "Reference sampling interval for --window/--n");
  smooth->add_option("--method", smooth_options.method, "Recursion to use")
      ->check(CLI::IsMember({"v1", "v2", "v2c"}));
  smooth->add_flag("--include-weight", smooth_options.include_weight,
                   "Emit the normalizer next to each smoothed value");
  add_io_flags(smooth, smooth_options.io, true);

  CalibrateOptions calibrate_options;
  CLI::App* calibrate = app.add_subcommand(
      "calibrate", "Convert between tau, alpha, effective n, window and half-life");
  calibrate->add_option("--alpha", calibrate_options.alpha, "Decay factor at --gap");
  add_tau_flags(calibrate, calibrate_options.tau_flags);
  calibrate->add_option("--gap", calibrate_options.gap, "Reference sampling interval")
      ->required();
  add_io_flags(calibrate, calibrate_options.io, false);

  SimulateOptions simulate_options;
  CLI::App* simulate = app.add_subcommand(
      "simulate", "Fold i.i.d. normal samples at constant rate; report moments");
  add_tau_flags(simulate, simulate_options.tau_flags);
  simulate->add_option("--gap", simulate_options.gap, "Sampling interval")->required();
  simulate->add_option("--steps", simulate_options.steps, "Observations to draw")
      ->required();
  simulate->add_option("--burn-in", simulate_options.burn_in,
                       "Transient prefix to discard (default 1000)");
  simulate->add_option("--mu", simulate_options.mu, "Signal mean");
  simulate->add_option("--sigma", simulate_options.sigma, "Signal standard deviation");
  simulate->add_option("--seed", simulate_options.seed, "Generator seed")->required();
  simulate->add_option("--method", simulate_options.method, "Recursion to use")
      ->check(CLI::IsMember({"v1", "v2", "v2c"}));
  add_io_flags(simulate, simulate_options.io, false);

  StressOptions stress_options;
  CLI::App* stress = app.add_subcommand(
      "stress", "Compare every method against the extended-precision oracle");
  stress->add_option("--alpha", stress_options.alpha,
                     "Constant-gap stress at this decay factor");
  add_tau_flags(stress, stress_options.tau_flags);
  stress->add_option("--gap", stress_options.gap,
                     "Reference sampling interval for --window/--n");
  stress->add_option("--gap-law", stress_options.gap_law,
                     "Random gap distribution (mean 1) for divergence runs")
      ->check(CLI::IsMember({"constant", "exponential", "uniform", "bursty"}));
  stress->add_option("--steps", stress_options.steps, "Stream length")->required();
  stress->add_option("--seed", stress_options.seed, "Generator seed")->required();
  add_io_flags(stress, stress_options.io, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (smooth->parsed()) {
      return run_smooth(smooth_options);
    }
    if (calibrate->parsed()) {
      return run_calibrate(calibrate_options);
    }
    if (simulate->parsed()) {
      return run_simulate(simulate_options);
    }
    return run_stress(stress_options);
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "error: line " << e.line() << ": " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run_cli(argc, argv);
  } catch (...) {
    std::cerr << "error: unexpected failure\n";
    return 1;
  }
}
