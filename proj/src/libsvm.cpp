#include "rda/libsvm.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "rda/types.hpp"

namespace rda {

namespace {

struct SparseRow {
  double label = 0.0;
  std::vector<std::pair<int, double>> entries;
};

double parse_double(const std::string& token, int line_no, const char* what) {
  try {
    std::size_t used = 0;
    const double value = std::stod(token, &used);
    if (used != token.size()) throw std::invalid_argument(token);
    return value;
  } catch (const std::exception&) {
    throw ParseError(std::string("bad ") + what + " '" + token + "'", line_no);
  }
}

SparseRow parse_line(const std::string& line, int line_no) {
  std::istringstream in(line);
  std::string token;
  if (!(in >> token)) throw ParseError("missing label", line_no);
  SparseRow row;
  row.label = parse_double(token, line_no, "label");
  int last_index = 0;
  while (in >> token) {
    const auto colon = token.find(':');
    if (colon == std::string::npos || colon == 0 || colon + 1 == token.size()) {
      throw ParseError("expected index:value, got '" + token + "'", line_no);
    }
    int index = 0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + colon, index);
    if (ec != std::errc() || ptr != token.data() + colon || index < 1) {
      throw ParseError("bad feature index in '" + token + "'", line_no);
    }
    if (index <= last_index) {
      throw ParseError("feature indices must be strictly increasing", line_no);
    }
    last_index = index;
    row.entries.emplace_back(index,
                             parse_double(token.substr(colon + 1), line_no, "value"));
  }
  return row;
}

}  // namespace

LibsvmData load_libsvm_file(const std::string& path, int min_features) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<SparseRow> rows;
  int max_index = min_features;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    rows.push_back(parse_line(line, line_no));
    if (!rows.back().entries.empty()) {
      max_index = std::max(max_index, rows.back().entries.back().first);
    }
  }
  if (rows.empty()) throw InsufficientDataError("'" + path + "' holds no data rows");

  LibsvmData data;
  data.features = Eigen::MatrixXd::Zero(max_index, static_cast<int>(rows.size()));
  data.labels.resize(rows.size());
  for (std::size_t j = 0; j < rows.size(); ++j) {
    data.labels[j] = rows[j].label;
    for (const auto& [index, value] : rows[j].entries) {
      data.features(index - 1, static_cast<int>(j)) = value;
    }
  }
  return data;
}

void write_libsvm_file(const std::string& path, const Eigen::MatrixXd& features,
                       const std::vector<double>& labels) {
  if (static_cast<int>(labels.size()) != features.cols()) {
    throw ModelError("label count does not match the number of columns");
  }
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  char buf[64];
  for (int j = 0; j < features.cols(); ++j) {
    std::snprintf(buf, sizeof(buf), "%.17g", labels[j]);
    out << buf;
    for (int i = 0; i < features.rows(); ++i) {
      if (features(i, j) == 0.0) continue;
      std::snprintf(buf, sizeof(buf), "%.17g", features(i, j));
      out << ' ' << (i + 1) << ':' << buf;
    }
    out << '\n';
  }
  if (!out) throw Error("write to '" + path + "' failed");
}

TrainingSet select_label_pair(const LibsvmData& data, double label0,
                              double label1, int* skipped) {
  std::vector<int> keep;
  std::vector<int> labels;
  int dropped = 0;
  for (std::size_t j = 0; j < data.labels.size(); ++j) {
    if (data.labels[j] == label0) {
      keep.push_back(static_cast<int>(j));
      labels.push_back(0);
    } else if (data.labels[j] == label1) {
      keep.push_back(static_cast<int>(j));
      labels.push_back(1);
    } else {
      ++dropped;
    }
  }
  if (skipped) *skipped = dropped;
  if (keep.empty()) throw InsufficientDataError("no rows match the label pair");
  Eigen::MatrixXd features(data.features.rows(), static_cast<int>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    features.col(static_cast<int>(k)) = data.features.col(keep[k]);
  }
  return make_training_set(std::move(features), std::move(labels));
}

TrainingSet load_libsvm(const std::string& path, double label0, double label1,
                        int min_features, int* skipped) {
  return select_label_pair(load_libsvm_file(path, min_features), label0, label1,
                           skipped);
}

}  // namespace rda
