#include "anytime/bench/dataset_io.hpp"

#include "anytime/oracles.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace anytime::bench {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_row(const std::string& line, char delim) {
  std::vector<std::string> cells;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (c == '"') {
      if (quoted && i + 1 < line.size() && line[i + 1] == '"') {
        cell.push_back('"');
        ++i;
      } else {
        quoted = !quoted;
      }
    } else if (c == delim && !quoted) {
      cells.push_back(trim(cell));
      cell.clear();
    } else {
      cell.push_back(c);
    }
  }
  cells.push_back(trim(cell));
  return cells;
}

bool is_missing(const std::string& cell) {
  return cell.empty() || cell == "?" || cell == "NA" || cell == "NaN" || cell == "nan";
}

std::optional<double> parse_number(const std::string& cell) {
  double value = 0.0;
  const char* begin = cell.data();
  const char* end = cell.data() + cell.size();
  if (!cell.empty() && *begin == '+') ++begin;
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) return std::nullopt;
  return value;
}

bool contains(const std::vector<std::size_t>& v, std::size_t x) {
  return std::find(v.begin(), v.end(), x) != v.end();
}

}  // namespace

Dataset parse_csv(std::istream& in, const CsvSchema& schema) {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::size_t columns = 0;
  std::size_t line_no = 0;
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    auto cells = split_row(line, schema.delimiter);
    if (columns == 0) {
      columns = cells.size();
      if (columns < 2) throw ParseError("need at least one feature column and a label column", line_no);
      if (schema.has_header) {
        header = std::move(cells);
        continue;
      }
    }
    if (cells.size() != columns) {
      throw ParseError("expected " + std::to_string(columns) + " columns, found " + std::to_string(cells.size()),
                       line_no);
    }
    if (std::any_of(cells.begin(), cells.end(), is_missing)) continue;
    rows.push_back(std::move(cells));
  }
  if (columns == 0) throw ParseError("empty input", line_no);
  if (rows.empty()) throw ParseError("no complete rows", line_no);

  const std::size_t label_col = schema.label_column.value_or(columns - 1);
  if (label_col >= columns) throw ParseError("label column out of range", 1);
  if (header.empty()) {
    for (std::size_t c = 0; c < columns; ++c) header.push_back("x" + std::to_string(c));
  }

  // Column roles.
  std::vector<std::size_t> numeric_cols;
  std::vector<std::size_t> categorical_cols;
  for (std::size_t c = 0; c < columns; ++c) {
    if (c == label_col || contains(schema.ignored_columns, c)) continue;
    bool categorical = contains(schema.categorical_columns, c);
    if (!categorical) {
      for (std::size_t r = 0; r < rows.size(); ++r) {
        if (!parse_number(rows[r][c])) {
          if (!schema.auto_categorical) {
            const std::size_t data_line = r + 1 + (schema.has_header ? 1 : 0);
            throw ParseError("non-numeric value '" + rows[r][c] + "' in column " + std::to_string(c), data_line);
          }
          categorical = true;
          break;
        }
      }
    }
    (categorical ? categorical_cols : numeric_cols).push_back(c);
  }

  // Output layout: columns in file order, categorical ones expanded in place.
  std::map<std::size_t, std::vector<std::string>> levels;
  for (std::size_t c : categorical_cols) {
    std::set<std::string> uniq;
    for (const auto& row : rows) uniq.insert(row[c]);
    levels[c] = std::vector<std::string>(uniq.begin(), uniq.end());
  }
  Dataset data;
  for (std::size_t c = 0; c < columns; ++c) {
    if (contains(numeric_cols, c)) {
      data.feature_names.push_back(header[c]);
    } else if (contains(categorical_cols, c)) {
      for (const auto& level : levels[c]) data.feature_names.push_back(header[c] + "=" + level);
    }
  }
  if (data.feature_names.empty()) throw ParseError("no feature columns", 1);

  data.features = FeatureMatrix::Zero(static_cast<Index>(rows.size()), static_cast<Index>(data.feature_names.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Index out = 0;
    for (std::size_t c = 0; c < columns; ++c) {
      if (contains(numeric_cols, c)) {
        data.features(static_cast<Index>(r), out++) = *parse_number(rows[r][c]);
      } else if (contains(categorical_cols, c)) {
        const auto& lv = levels[c];
        const auto pos = std::lower_bound(lv.begin(), lv.end(), rows[r][c]) - lv.begin();
        data.features(static_cast<Index>(r), out + pos) = 1.0;
        out += static_cast<Index>(lv.size());
      }
    }
  }

  // Labels.
  std::vector<std::string> label_values;
  for (const auto& row : rows) label_values.push_back(row[label_col]);
  std::vector<std::string> classes(label_values.begin(), label_values.end());
  std::sort(classes.begin(), classes.end());
  classes.erase(std::unique(classes.begin(), classes.end()), classes.end());
  const bool numeric_labels =
      std::all_of(classes.begin(), classes.end(), [](const std::string& s) { return parse_number(s).has_value(); });
  if (numeric_labels) {
    std::stable_sort(classes.begin(), classes.end(),
                     [](const std::string& a, const std::string& b) { return *parse_number(a) < *parse_number(b); });
  }
  std::map<std::string, int> class_index;
  for (std::size_t i = 0; i < classes.size(); ++i) class_index[classes[i]] = static_cast<int>(i);
  for (const auto& v : label_values) data.labels.push_back(class_index.at(v));
  data.class_count = static_cast<int>(classes.size());

  normalize_unit_interval(data);
  data.validate();
  return data;
}

Dataset ingest_csv(const std::filesystem::path& path, const CsvSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open dataset file: " + path.string());
  return parse_csv(in, schema);
}

void normalize_unit_interval(Dataset& data) {
  for (Index c = 0; c < data.features.cols(); ++c) {
    auto col = data.features.col(c);
    const double lo = col.minCoeff();
    const double hi = col.maxCoeff();
    if (hi > lo) {
      col = ((col.array() - lo) / (hi - lo)).matrix();
    } else {
      col.setZero();
    }
  }
}

// ---------------------------------------------------------------------------

SyntheticSpec parse_synthetic_spec(const std::string& text) {
  std::string body = text;
  const std::string prefix = "synthetic:";
  if (body.rfind(prefix, 0) == 0) body = body.substr(prefix.size());
  SyntheticSpec spec;
  std::stringstream ss(body);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("synthetic spec: expected key=value, got '" + item + "'");
    const std::string key = trim(item.substr(0, eq));
    const std::string value = trim(item.substr(eq + 1));
    const auto num = parse_number(value);
    if (!num) throw std::invalid_argument("synthetic spec: non-numeric value for '" + key + "'");
    if (key == "n") {
      spec.n = static_cast<std::size_t>(*num);
    } else if (key == "k" || key == "classes") {
      spec.classes = static_cast<int>(*num);
    } else if (key == "d" || key == "features") {
      spec.features = static_cast<std::size_t>(*num);
    } else if (key == "sep" || key == "separation") {
      spec.separation = *num;
    } else if (key == "contam" || key == "contamination") {
      spec.contamination = *num;
    } else if (key == "tail") {
      spec.tail = *num;
    } else if (key == "scale") {
      spec.outlier_scale = *num;
    } else if (key == "seed") {
      spec.seed = static_cast<std::uint64_t>(*num);
    } else {
      throw std::invalid_argument("synthetic spec: unknown key '" + key + "'");
    }
  }
  if (spec.n < 2 || spec.classes < 2 || spec.features < 1) {
    throw std::invalid_argument("synthetic spec: need n >= 2, k >= 2, d >= 1");
  }
  if (spec.contamination < 0.0 || spec.contamination > 1.0) {
    throw std::invalid_argument("synthetic spec: contamination must be in [0,1]");
  }
  return spec;
}

Dataset make_synthetic(const SyntheticSpec& spec) {
  std::mt19937_64 rng(derive_seed(spec.seed, 0x5eed));
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::uniform_int_distribution<int> pick_class(0, spec.classes - 1);
  const NoiseSpec contamination = NoiseSpec::student_t(spec.tail, spec.outlier_scale);

  const auto d = static_cast<Index>(spec.features);
  Eigen::MatrixXd means(spec.classes, d);
  for (Index c = 0; c < means.rows(); ++c) {
    for (Index j = 0; j < d; ++j) means(c, j) = spec.separation * normal(rng);
  }

  Dataset data;
  data.class_count = spec.classes;
  data.features.resize(static_cast<Index>(spec.n), d);
  data.labels.resize(spec.n);
  for (Index j = 0; j < d; ++j) data.feature_names.push_back("x" + std::to_string(j));
  for (std::size_t i = 0; i < spec.n; ++i) {
    const int y = pick_class(rng);
    data.labels[i] = y;
    const bool contaminated = unit(rng) < spec.contamination;
    for (Index j = 0; j < d; ++j) {
      double x = means(y, j) + normal(rng);
      if (contaminated) x += contamination.scale * draw_unit_noise(contamination, rng);
      data.features(static_cast<Index>(i), j) = x;
    }
  }
  normalize_unit_interval(data);
  data.validate();
  return data;
}

std::shared_ptr<const Dataset> load_dataset(const std::string& source, const CsvSchema& schema) {
  if (source.rfind("synthetic", 0) == 0) return std::make_shared<const Dataset>(make_synthetic(parse_synthetic_spec(source)));
  return std::make_shared<const Dataset>(ingest_csv(source, schema));
}

Split train_test_split(std::size_t n, double ratio, std::uint64_t seed) {
  if (!(ratio > 0.0 && ratio < 1.0)) throw std::invalid_argument("split ratio must be in (0,1)");
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::mt19937_64 rng(seed);
  std::shuffle(order.begin(), order.end(), rng);
  const auto n_train = static_cast<std::size_t>(std::floor(ratio * static_cast<double>(n)));
  Split split;
  split.train.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_train));
  split.test.assign(order.begin() + static_cast<std::ptrdiff_t>(n_train), order.end());
  return split;
}

}  // namespace anytime::bench
