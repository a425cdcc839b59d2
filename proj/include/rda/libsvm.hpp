#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "rda/model.hpp"

namespace rda {

// Dense view of a libsvm-format file: "<label> <index>:<value> ...", indices
// 1-based and strictly increasing per line, absent indices zero.
struct LibsvmData {
  Eigen::MatrixXd features;    // p x n
  std::vector<double> labels;  // raw labels, one per column
};

// min_features pads the dimension when trailing features never appear.
LibsvmData load_libsvm_file(const std::string& path, int min_features = 0);

// Writes only nonzero entries; values round-trip exactly.
void write_libsvm_file(const std::string& path, const Eigen::MatrixXd& features,
                       const std::vector<double>& labels);

// Maps the columns with raw label `label0` to class 0 and `label1` to class 1;
// other labels are skipped and counted.
TrainingSet select_label_pair(const LibsvmData& data, double label0,
                              double label1, int* skipped = nullptr);

TrainingSet load_libsvm(const std::string& path, double label0, double label1,
                        int min_features = 0, int* skipped = nullptr);

}  // namespace rda
