#ifndef ANYTIME_BENCH_RESULTS_IO_HPP
#define ANYTIME_BENCH_RESULTS_IO_HPP

#include "anytime/bench/experiment.hpp"

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

namespace anytime::bench {

enum class ResultFormat { Csv, Json };

ResultFormat parse_result_format(const std::string& name);
std::string extension(ResultFormat format);

/// Header line of the CSV layout.
inline constexpr const char* kResultsCsvHeader = "trial,epoch,method,train_loss,test_loss,truncation_rate,wall_time_ms";

void write_results_csv(std::ostream& out, const std::vector<ResultRecord>& records);
void write_results_json(std::ostream& out, const std::vector<ResultRecord>& records);
std::vector<ResultRecord> read_results_csv(std::istream& in);
std::vector<ResultRecord> read_results_json(std::istream& in);

/// Means over trials for every (method, epoch), in first-seen method order and
/// ascending epoch. The trial field holds the number of trials averaged.
std::vector<ResultRecord> summarize(const std::vector<ResultRecord>& records);

/// Writes records to path and the per-(method, epoch) means to
/// <stem>_summary.<ext> next to it. Returns the summary path. Throws
/// std::invalid_argument for an empty record set and std::runtime_error on
/// I/O failure.
std::filesystem::path emit_results(const std::vector<ResultRecord>& records, ResultFormat format,
                                   const std::filesystem::path& path);

std::vector<ResultRecord> load_results(const std::filesystem::path& path);

}  // namespace anytime::bench

#endif  // ANYTIME_BENCH_RESULTS_IO_HPP
