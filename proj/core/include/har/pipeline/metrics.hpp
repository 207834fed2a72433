#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "har/errors.hpp"

namespace har::pipeline {

struct EvalReport {
  Eigen::MatrixXi confusion;  // rows = truth, cols = prediction
  std::vector<double> per_class_precision;
  std::vector<double> per_class_recall;
  double macro_precision = 0.0;
  double macro_recall = 0.0;
  double macro_f1 = 0.0;

  std::string to_text(const std::vector<std::string>& class_names) const;
  std::string to_json(const std::vector<std::string>& class_names) const;
};

// Per-class precision/recall one-vs-rest from the confusion matrix; macro
// precision/recall are unweighted class means, macro F1 is their harmonic
// mean. Precision of a never-predicted class is 0.
EvalReport report_from_confusion(const Eigen::MatrixXi& confusion);

EvalReport report_from_predictions(const std::vector<int>& truth,
                                   const std::vector<int>& predicted,
                                   int n_classes);

}  // namespace har::pipeline
