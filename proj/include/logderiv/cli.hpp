#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "logderiv/ensembles.hpp"

namespace logderiv::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidArguments = 1;
inline constexpr int kExitFailure = 2;

inline constexpr std::uint64_t kDefaultSeed = 42;

enum class Format { Csv, Json };

struct RunConfig {
  std::string command;
  Ensemble ensemble = Ensemble::SOEven;
  int K = 1;
  int N = 50;
  double a = 0.1;
  std::size_t samples = 10000;
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  Format format = Format::Csv;
  std::string output_path;  // empty: standard output
  bool timestamp = true;
  bool quiet = false;
  int max_K = 5;
  int bins = 40;
  double x_max = 4.0;
  std::vector<double> alphas;
};

using Cell = std::variant<std::monostate, std::string, long long, std::uint64_t, double>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;
};

// One header row, then one line per row. Missing values are left empty.
void write_csv(const Table& table, std::ostream& out);
// {"metadata": {...}, "rows": [{column: value, ...}, ...]}.
void write_json(const Table& table, const RunConfig& config, std::ostream& out);

// Seed from LOGDET_SEED when set and valid, otherwise kDefaultSeed.
std::uint64_t default_seed();

// Parses the command line and runs one subcommand. Returns one of the
// kExit* codes.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace logderiv::cli
