#ifndef ANYTIME_BENCH_DATASET_IO_HPP
#define ANYTIME_BENCH_DATASET_IO_HPP

#include "anytime/dataset.hpp"

#include <cstdint>
#include <filesystem>
#include <istream>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace anytime::bench {

/// Parse failure; carries the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t line)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Column roles for CSV ingestion. Columns are 0-based; the label defaults to
/// the last column. Any feature column holding a non-numeric value is treated
/// as categorical when auto_categorical is set.
struct CsvSchema {
  std::optional<std::size_t> label_column;
  std::vector<std::size_t> categorical_columns;
  std::vector<std::size_t> ignored_columns;
  bool has_header = true;
  char delimiter = ',';
  bool auto_categorical = true;
};

/// Reads a CSV table: drops rows with missing values ("", "?", "NA", "NaN"),
/// one-hot encodes categorical columns, min-max normalizes every feature to
/// [0,1] and maps labels to 0..k-1 (numeric order when all labels are
/// numeric, lexicographic otherwise).
Dataset parse_csv(std::istream& in, const CsvSchema& schema = {});
Dataset ingest_csv(const std::filesystem::path& path, const CsvSchema& schema = {});

/// Per-column min-max map onto [0,1]; constant columns become 0.
void normalize_unit_interval(Dataset& data);

/// Gaussian class-conditional features with optional heavy-tailed
/// contamination of a fraction of rows, normalized to [0,1].
struct SyntheticSpec {
  std::size_t n = 10'000;
  int classes = 3;
  std::size_t features = 10;
  /// Standard deviation of the class means around the origin.
  double separation = 1.5;
  /// Fraction of rows receiving additive Student-t feature noise.
  double contamination = 0.0;
  /// Degrees of freedom of the contaminating noise.
  double tail = 2.5;
  double outlier_scale = 1.0;
  std::uint64_t seed = 0;
};

/// Parses "synthetic:n=10000,k=3,d=10,sep=1.5,contam=0.05,tail=2.5,scale=5,seed=1".
/// The "synthetic:" prefix is optional; omitted keys keep their defaults.
SyntheticSpec parse_synthetic_spec(const std::string& text);
Dataset make_synthetic(const SyntheticSpec& spec);

/// Loads "synthetic:<spec>" or a CSV path.
std::shared_ptr<const Dataset> load_dataset(const std::string& source, const CsvSchema& schema = {});

struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
};

/// Random permutation of 0..n-1, first floor(ratio * n) rows to train.
Split train_test_split(std::size_t n, double ratio, std::uint64_t seed);

}  // namespace anytime::bench

#endif  // ANYTIME_BENCH_DATASET_IO_HPP
