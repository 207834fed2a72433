#include "har/pipeline/transfer.hpp"

#include <string>

#include "har/pipeline/synth.hpp"

namespace har::pipeline {

namespace {

FeatureDataset subset(const FeatureDataset& ds,
                      const std::vector<std::size_t>& idx) {
  FeatureDataset out;
  out.steps = ds.steps;
  out.feature_dim = ds.feature_dim;
  out.samples.reserve(idx.size());
  for (std::size_t i : idx) out.samples.push_back(ds.samples[i]);
  return out;
}

std::vector<int> subset_labels(const std::vector<int>& labels,
                               const std::vector<std::size_t>& idx) {
  std::vector<int> out;
  out.reserve(idx.size());
  for (std::size_t i : idx) out.push_back(labels[i]);
  return out;
}

}  // namespace

TransferSplit stratified_split(const std::vector<int>& labels, int n_classes,
                               TransferVariant variant) {
  std::vector<std::vector<std::size_t>> by_class(n_classes);
  for (std::size_t i = 0; i < labels.size(); ++i)
    by_class[labels[i]].push_back(i);

  TransferSplit split;
  split.variant = variant;
  for (int c = 0; c < n_classes; ++c) {
    const auto& members = by_class[c];
    if (members.size() < 2)
      throw ClassTooSmall("class " + std::to_string(c) + " has " +
                          std::to_string(members.size()) +
                          " samples, need >= 2 for a stratified split");
    const std::size_t first_half = (members.size() + 1) / 2;
    for (std::size_t k = 0; k < members.size(); ++k) {
      const bool in_first = k < first_half;
      const bool to_train = (variant == TransferVariant::A) == in_first;
      (to_train ? split.transfer_train : split.transfer_val)
          .push_back(members[k]);
    }
  }
  return split;
}

std::vector<int> fuse_predictions(nn::Network<float>& a, nn::Network<float>& b,
                                  const FeatureDataset& ds) {
  const nn::Mat<float> pa = predict_probs(a, ds);
  const nn::Mat<float> pb = predict_probs(b, ds);
  return argmax_rows(0.5f * (pa + pb));
}

TransferResult transfer_and_fuse(nn::Network<float>& base,
                                 const FeatureDataset& val_set,
                                 const std::vector<int>& val_labels,
                                 const FeatureDataset& test_set,
                                 const std::vector<int>& test_labels,
                                 const TransferOptions& opt) {
  TrainOptions topt;
  topt.batch_size = opt.batch_size;
  topt.max_epochs = opt.max_epochs;
  topt.early_stop_patience = opt.early_stop_patience;
  // Fixed fine-tuning rate: no warmup, no plateau drops.
  topt.schedule.base_lr = opt.lr;
  topt.schedule.warmup_epochs = 0;
  topt.schedule.plateau_patience = opt.max_epochs + 1;

  TransferResult result{clone_network(base), clone_network(base),
                        {}, {}, {}, {}};

  for (TransferVariant variant : {TransferVariant::A, TransferVariant::B}) {
    const TransferSplit split =
        stratified_split(val_labels, base.config().n_classes, variant);
    FeatureDataset tr = subset(val_set, split.transfer_train);
    FeatureDataset va = subset(val_set, split.transfer_val);
    auto tr_y = subset_labels(val_labels, split.transfer_train);
    auto va_y = subset_labels(val_labels, split.transfer_val);

    nn::Network<float>& model =
        variant == TransferVariant::A ? result.model_a : result.model_b;
    topt.seed = derive_seed(opt.seed,
                            variant == TransferVariant::A ? "transferA"
                                                          : "transferB");
    train(model, tr, tr_y, va, va_y, topt);
  }

  result.report_a = evaluate(result.model_a, test_set, test_labels);
  result.report_b = evaluate(result.model_b, test_set, test_labels);
  result.fused_predictions =
      fuse_predictions(result.model_a, result.model_b, test_set);
  result.report_fused = report_from_predictions(
      test_labels, result.fused_predictions, base.config().n_classes);
  return result;
}

}  // namespace har::pipeline
