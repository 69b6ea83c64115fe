#pragma once

// Batch front-end: experiment configs, the weights/system mini-grammars, and
// the subcommand runners. Exit codes: 0 all asserted properties hold,
// 1 a property failed, 2 config error, 3 I/O error.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ergo/averaging.hpp"
#include "ergo/json_io.hpp"
#include "ergo/pointwise.hpp"

namespace ergo::cli {

inline constexpr const char* kSchemaVersion = "ergo-results/1";

inline constexpr int kExitOk = 0;
inline constexpr int kExitPropertyFailure = 1;
inline constexpr int kExitConfigError = 2;
inline constexpr int kExitIoError = 3;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::string kind;
  std::map<std::string, std::string> params;
  std::uint64_t seed = 0;
  std::string output_path;  // empty: stdout
  std::string format;       // "csv" or "json"; empty picks the kind's default
};

/// Kinds: norms, op-verify, avg-run, weak11-suite, ww-sweep, return-times,
/// paper-example.
const std::vector<std::string>& experiment_kinds();

/// {"kind": ..., "params": {...}, "seed": N, "output": {"path": ..., "format": ...}}
ExperimentConfig config_from_json(const Json& j);
Json config_to_json(const ExperimentConfig& config);

/// Rejects unknown kinds, unknown parameter keys, missing required keys and
/// unsupported formats.
void validate(const ExperimentConfig& config);

int run(const ExperimentConfig& config, std::ostream& out, std::ostream& err);

/// "a", "bi", "a+bi", "a-bi", "i", "-i".
Complex parse_complex(std::string_view text);

/// "trig:z=<c>,lambda=<c>(;z=<c>,lambda=<c>)*[;pert:zero|harmonic:<c>|geometric:<c>:<r>]"
BesicovitchSequence parse_weights(std::string_view text);

/// "cyclic:N=<n>,r=<r>" or "shift:W=<w>".
MPTSystem parse_system(std::string_view text);

/// "1,10,100" -> {1, 10, 100}.
std::vector<std::size_t> parse_index_list(std::string_view text);

/// Formats x with 17 significant digits.
std::string format_double(double x);

/// Writes content to path via a temporary file and rename.
void write_atomically(const std::string& path, const std::string& content);

/// Command-line entry point.
int main_entry(int argc, char** argv);

}  // namespace ergo::cli
