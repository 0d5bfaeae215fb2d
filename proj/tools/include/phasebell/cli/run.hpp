#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "phasebell/bell.hpp"
#include "phasebell/optimize.hpp"

namespace phasebell::cli {

enum class Command { ScanS, Optimize, EffThreshold, DampingCurve, Crossing, OracleCheck };
enum class Format { Csv, Json };

/// Exit codes of the tool.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitIo = 3;
inline constexpr int kExitOracle = 4;

/// Raised for any incomplete or inconsistent configuration (exit 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Carries the usage text when --help is given (exit 0).
class HelpRequested : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  Command command = Command::Optimize;
  std::string state = "ecs";  // w, msv or ecs
  std::optional<double> param;  // p, r or zeta depending on the state

  double s = 0.0;
  double s_min = -2.0;
  double s_max = 0.0;
  double s_step = 0.02;

  double eta = 1.0;
  double gamma_tau = 0.0;
  double nbar = 0.0;
  double gamma_max = 2.0;
  double gamma_step = 0.05;

  std::string objective = "svet";  // svet or mk, for eff-threshold
  double zeta_lo = 0.2;            // crossing bracket
  double zeta_hi = 0.8;

  int samples = 100;  // oracle-check
  optimize::OptimizerConfig optimizer;

  std::string output;  // empty writes to stdout
  Format format = Format::Csv;

  StateSpec state_spec() const;
  noise::NoiseModel noise_model() const;
  std::vector<double> s_grid() const;
  /// Throws ConfigError when the parameters do not fit the command.
  void validate() const;
};

/// Parses argv. A `--config file.json` object supplies defaults (keys are
/// the long flag names without dashes); flags given on the command line
/// win. Thread count defaults to $PHASEBELL_THREADS when set.
RunConfig parse_args(int argc, const char* const* argv);

/// One output row: a state, the conditions it was measured under and the
/// optimized values with the Svetlichny settings.
struct Row {
  std::string state;
  double param = 0.0;
  double s = 0.0;
  double eta = 1.0;
  double gamma_tau = 0.0;
  double nbar = 0.0;
  int sign = 1;
  double mk = 0.0;
  double svet = 0.0;
  bell::MeasurementSettings settings;
};

/// Fixed column order of every result file.
inline constexpr const char* kCsvHeader =
    "state,param,s,eta,gamma_tau,nbar,sign,mk,svet,alpha_re,alpha_im,alphap_re,alphap_im,"
    "beta_re,beta_im,betap_re,betap_im,gamma_re,gamma_im,gammap_re,gammap_im";

void emit_csv(std::ostream& out, std::span<const Row> rows);
void emit_json(std::ostream& out, std::span<const Row> rows);
/// Parses a file written by emit_csv.
std::vector<Row> read_csv(std::istream& in);

/// Closed-form versus number-basis comparison, one line per sample and
/// quantity.
struct OracleSample {
  std::string quantity;  // w3, w2, w1, correlation or mk
  int sample = 0;
  double closed_form = 0.0;
  double oracle = 0.0;
  double abs_error() const;
};

inline constexpr const char* kOracleHeader = "state,param,quantity,sample,closed_form,oracle,abs_error";

/// Runs `samples` random comparisons of every quantity. Inputs are drawn
/// from a generator seeded with `seed`.
std::vector<OracleSample> oracle_check(const StateSpec& state, int samples, std::uint64_t seed);
/// 1e-8, or 1e-6 for the squeezed vacuum.
double oracle_tolerance(const StateSpec& state);

/// Executes the command, writes the result file and returns the exit code.
/// Human-readable progress goes to `log`.
int run(const RunConfig& cfg, std::ostream& log);

}  // namespace phasebell::cli
