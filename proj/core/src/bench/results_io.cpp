#include "anytime/bench/results_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace anytime::bench {

ResultFormat parse_result_format(const std::string& name) {
  if (name == "csv") return ResultFormat::Csv;
  if (name == "json") return ResultFormat::Json;
  throw std::invalid_argument("unknown output format '" + name + "' (expected csv or json)");
}

std::string extension(ResultFormat format) { return format == ResultFormat::Csv ? ".csv" : ".json"; }

namespace {

std::string fmt(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

double parse_double(const std::string& s, std::size_t line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw std::runtime_error("results line " + std::to_string(line) + ": bad number '" + s + "'");
  }
}

std::size_t parse_index(const std::string& s, std::size_t line) {
  const double v = parse_double(s, line);
  if (v < 0.0 || v != static_cast<double>(static_cast<std::size_t>(v))) {
    throw std::runtime_error("results line " + std::to_string(line) + ": bad index '" + s + "'");
  }
  return static_cast<std::size_t>(v);
}

}  // namespace

void write_results_csv(std::ostream& out, const std::vector<ResultRecord>& records) {
  out << kResultsCsvHeader << '\n';
  for (const auto& r : records) {
    out << r.trial << ',' << r.epoch << ',' << r.method << ',' << fmt(r.train_loss) << ',' << fmt(r.test_loss) << ','
        << fmt(r.truncation_rate) << ',' << fmt(r.wall_time_ms) << '\n';
  }
}

void write_results_json(std::ostream& out, const std::vector<ResultRecord>& records) {
  // Numbers are written with the same 10 significant digits as the CSV.
  out << "[\n";
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    out << "  {\"trial\": " << r.trial << ", \"epoch\": " << r.epoch << ", \"method\": " << nlohmann::json(r.method).dump()
        << ", \"train_loss\": " << fmt(r.train_loss) << ", \"test_loss\": " << fmt(r.test_loss)
        << ", \"truncation_rate\": " << fmt(r.truncation_rate) << ", \"wall_time_ms\": " << fmt(r.wall_time_ms) << "}"
        << (i + 1 < records.size() ? "," : "") << '\n';
  }
  out << "]\n";
}

std::vector<ResultRecord> read_results_csv(std::istream& in) {
  std::vector<ResultRecord> records;
  std::string line;
  std::size_t line_no = 0;
  if (!std::getline(in, line) || line != kResultsCsvHeader) throw std::runtime_error("results: missing CSV header");
  ++line_no;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> cells;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cells.push_back(cell);
    if (cells.size() != 7) throw std::runtime_error("results line " + std::to_string(line_no) + ": expected 7 fields");
    ResultRecord r;
    r.trial = parse_index(cells[0], line_no);
    r.epoch = parse_index(cells[1], line_no);
    r.method = cells[2];
    r.train_loss = parse_double(cells[3], line_no);
    r.test_loss = parse_double(cells[4], line_no);
    r.truncation_rate = parse_double(cells[5], line_no);
    r.wall_time_ms = parse_double(cells[6], line_no);
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ResultRecord> read_results_json(std::istream& in) {
  const nlohmann::json j = nlohmann::json::parse(in);
  if (!j.is_array()) throw std::runtime_error("results: expected a JSON array");
  std::vector<ResultRecord> records;
  for (const auto& item : j) {
    ResultRecord r;
    r.trial = item.at("trial").get<std::size_t>();
    r.epoch = item.at("epoch").get<std::size_t>();
    r.method = item.at("method").get<std::string>();
    r.train_loss = item.at("train_loss").get<double>();
    r.test_loss = item.at("test_loss").get<double>();
    r.truncation_rate = item.at("truncation_rate").get<double>();
    r.wall_time_ms = item.at("wall_time_ms").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ResultRecord> summarize(const std::vector<ResultRecord>& records) {
  std::vector<std::string> method_order;
  std::map<std::pair<std::string, std::size_t>, std::pair<ResultRecord, std::size_t>> acc;
  for (const auto& r : records) {
    if (std::find(method_order.begin(), method_order.end(), r.method) == method_order.end()) {
      method_order.push_back(r.method);
    }
    auto& [sum, count] = acc[{r.method, r.epoch}];
    sum.method = r.method;
    sum.epoch = r.epoch;
    sum.train_loss += r.train_loss;
    sum.test_loss += r.test_loss;
    sum.truncation_rate += r.truncation_rate;
    sum.wall_time_ms += r.wall_time_ms;
    ++count;
  }
  std::vector<ResultRecord> out;
  for (const auto& method : method_order) {
    for (auto it = acc.lower_bound({method, 0}); it != acc.end() && it->first.first == method; ++it) {
      ResultRecord mean = it->second.first;
      const auto n = static_cast<double>(it->second.second);
      mean.trial = it->second.second;
      mean.train_loss /= n;
      mean.test_loss /= n;
      mean.truncation_rate /= n;
      mean.wall_time_ms /= n;
      out.push_back(std::move(mean));
    }
  }
  return out;
}

namespace {

void write_file(const std::filesystem::path& path, const std::vector<ResultRecord>& records, ResultFormat format) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  if (format == ResultFormat::Csv) {
    write_results_csv(out, records);
  } else {
    write_results_json(out, records);
  }
  out.flush();
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

}  // namespace

std::filesystem::path emit_results(const std::vector<ResultRecord>& records, ResultFormat format,
                                   const std::filesystem::path& path) {
  if (records.empty()) throw std::invalid_argument("emit_results: no records");
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  write_file(path, records, format);
  std::filesystem::path summary = path;
  summary.replace_filename(path.stem().string() + "_summary" + extension(format));
  write_file(summary, summarize(records), format);
  return summary;
}

std::vector<ResultRecord> load_results(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  if (path.extension() == ".json") return read_results_json(in);
  return read_results_csv(in);
}

}  // namespace anytime::bench
