#include "har/pipeline/metrics.hpp"

#include <iomanip>
#include <sstream>

#include "json.hpp"

namespace har::pipeline {

EvalReport report_from_confusion(const Eigen::MatrixXi& confusion) {
  const int k = static_cast<int>(confusion.rows());
  if (confusion.cols() != k) throw ShapeMismatch("confusion matrix not square");
  EvalReport r;
  r.confusion = confusion;
  r.per_class_precision.resize(k);
  r.per_class_recall.resize(k);
  for (int c = 0; c < k; ++c) {
    const long tp = confusion(c, c);
    const long predicted = confusion.col(c).sum();
    const long support = confusion.row(c).sum();
    r.per_class_precision[c] =
        predicted > 0 ? static_cast<double>(tp) / predicted : 0.0;
    r.per_class_recall[c] =
        support > 0 ? static_cast<double>(tp) / support : 0.0;
  }
  for (int c = 0; c < k; ++c) {
    r.macro_precision += r.per_class_precision[c];
    r.macro_recall += r.per_class_recall[c];
  }
  r.macro_precision /= k;
  r.macro_recall /= k;
  const double denom = r.macro_precision + r.macro_recall;
  r.macro_f1 = denom > 0 ? 2.0 * r.macro_precision * r.macro_recall / denom : 0.0;
  return r;
}

EvalReport report_from_predictions(const std::vector<int>& truth,
                                   const std::vector<int>& predicted,
                                   int n_classes) {
  if (truth.size() != predicted.size())
    throw ShapeMismatch("truth/prediction length mismatch");
  Eigen::MatrixXi confusion = Eigen::MatrixXi::Zero(n_classes, n_classes);
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++confusion(truth[i], predicted[i]);
  return report_from_confusion(confusion);
}

std::string EvalReport::to_text(
    const std::vector<std::string>& class_names) const {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4);
  os << "class        precision  recall  support\n";
  for (std::size_t c = 0; c < class_names.size(); ++c)
    os << std::left << std::setw(13) << class_names[c] << std::setw(11)
       << per_class_precision[c] << std::setw(8) << per_class_recall[c]
       << confusion.row(static_cast<int>(c)).sum() << "\n";
  os << "macro precision " << macro_precision << "\n";
  os << "macro recall    " << macro_recall << "\n";
  os << "macro f1        " << macro_f1 << "\n";
  os << "confusion (rows=truth):\n";
  for (int i = 0; i < confusion.rows(); ++i) {
    for (int j = 0; j < confusion.cols(); ++j)
      os << std::setw(6) << confusion(i, j);
    os << "\n";
  }
  return os.str();
}

std::string EvalReport::to_json(
    const std::vector<std::string>& class_names) const {
  nlohmann::json j;
  j["classes"] = class_names;
  j["macro_precision"] = macro_precision;
  j["macro_recall"] = macro_recall;
  j["macro_f1"] = macro_f1;
  j["per_class_precision"] = per_class_precision;
  j["per_class_recall"] = per_class_recall;
  std::vector<std::vector<int>> conf(confusion.rows());
  for (int i = 0; i < confusion.rows(); ++i)
    for (int k = 0; k < confusion.cols(); ++k)
      conf[i].push_back(confusion(i, k));
  j["confusion"] = conf;
  return j.dump(2) + "\n";
}

}  // namespace har::pipeline
