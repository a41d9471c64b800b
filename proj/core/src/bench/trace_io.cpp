#include "anytime/bench/trace_io.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace anytime::bench {

namespace {

using nlohmann::json;

constexpr const char* kFormat = "anytime-trace";
constexpr int kVersion = 1;

template <class Tag>
json coords(const BasicVector<Tag>& v) {
  json arr = json::array();
  for (Index i = 0; i < v.dim(); ++i) arr.push_back(v[i]);
  return arr;
}

Eigen::VectorXd read_coords(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw std::runtime_error("trace: expected a nonempty array");
  Eigen::VectorXd out(static_cast<Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) out[static_cast<Index>(i)] = arr[i].get<double>();
  return out;
}

}  // namespace

std::string trace_to_json(const RunTrace& trace) {
  json doc;
  doc["format"] = kFormat;
  doc["version"] = kVersion;
  doc["horizon"] = trace.horizon();
  doc["final_h_bar"] = coords(trace.final_h_bar);
  json steps = json::array();
  for (const auto& rec : trace.steps) {
    json s;
    s["t"] = rec.t;
    s["h"] = coords(rec.h);
    s["h_bar"] = coords(rec.h_bar);
    s["g_raw"] = rec.g_raw.dim() > 0 ? coords(rec.g_raw) : json(nullptr);
    s["g_bar"] = rec.g_bar.dim() > 0 ? coords(rec.g_bar) : json(nullptr);
    s["threshold"] = rec.threshold ? json(*rec.threshold) : json(nullptr);
    s["truncated"] = rec.truncated;
    s["alpha"] = rec.alpha;
    s["beta"] = rec.beta ? json(*rec.beta) : json(nullptr);
    steps.push_back(std::move(s));
  }
  doc["steps"] = std::move(steps);
  return doc.dump(1);
}

RunTrace trace_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::runtime_error(std::string("trace: ") + e.what());
  }
  try {
    if (doc.at("format").get<std::string>() != kFormat) throw std::runtime_error("trace: unknown format");
    if (doc.at("version").get<int>() != kVersion) throw std::runtime_error("trace: unsupported version");
    RunTrace trace;
    trace.final_h_bar = Vector(read_coords(doc.at("final_h_bar")));
    for (const auto& s : doc.at("steps")) {
      StepRecord rec;
      rec.t = s.at("t").get<std::size_t>();
      rec.h = Vector(read_coords(s.at("h")));
      rec.h_bar = Vector(read_coords(s.at("h_bar")));
      if (!s.at("g_raw").is_null()) rec.g_raw = DualVector(read_coords(s.at("g_raw")));
      if (!s.at("g_bar").is_null()) rec.g_bar = DualVector(read_coords(s.at("g_bar")));
      if (!s.at("threshold").is_null()) rec.threshold = s.at("threshold").get<double>();
      rec.truncated = s.at("truncated").get<bool>();
      rec.alpha = s.at("alpha").get<double>();
      if (!s.at("beta").is_null()) rec.beta = s.at("beta").get<double>();
      if (rec.g_bar.dim() > 0) trace.stats.record(rec.truncated);
      trace.steps.push_back(std::move(rec));
    }
    if (doc.at("horizon").get<std::size_t>() != trace.steps.size()) {
      throw std::runtime_error("trace: horizon does not match the number of steps");
    }
    return trace;
  } catch (const json::exception& e) {
    throw std::runtime_error(std::string("trace: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw std::runtime_error(std::string("trace: ") + e.what());
  }
}

void write_trace(const RunTrace& trace, const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << trace_to_json(trace) << '\n';
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

RunTrace read_trace(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  return trace_from_json(buffer.str());
}

}  // namespace anytime::bench
