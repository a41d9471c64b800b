#ifndef ANYTIME_BENCH_TRACE_IO_HPP
#define ANYTIME_BENCH_TRACE_IO_HPP

#include "anytime/conversion.hpp"

#include <filesystem>
#include <string>

namespace anytime::bench {

/// JSON layout:
///   {"format": "anytime-trace", "version": 1, "horizon": T, "final_h_bar": [...],
///    "steps": [{"t", "h", "h_bar", "g_raw", "g_bar", "threshold" | null,
///               "truncated", "alpha", "beta" | null}, ...]}
/// Doubles are written with round-trip precision.
std::string trace_to_json(const RunTrace& trace);
/// Throws std::runtime_error on a malformed document.
RunTrace trace_from_json(const std::string& text);

void write_trace(const RunTrace& trace, const std::filesystem::path& path);
RunTrace read_trace(const std::filesystem::path& path);

}  // namespace anytime::bench

#endif  // ANYTIME_BENCH_TRACE_IO_HPP
