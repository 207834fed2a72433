#include "har/pipeline/train.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "har/pipeline/synth.hpp"

namespace har::pipeline {

namespace {

// Assemble a batch as a T-step sequence of (batch x F) matrices.
nn::Seq<float> make_batch(const FeatureDataset& ds,
                          const std::vector<std::size_t>& idx) {
  const int T = ds.steps, F = ds.feature_dim;
  nn::Seq<float> x(T);
  for (int t = 0; t < T; ++t) {
    x[t].resize(static_cast<Eigen::Index>(idx.size()), F);
    for (std::size_t r = 0; r < idx.size(); ++r)
      x[t].row(static_cast<Eigen::Index>(r)) =
          ds.samples[idx[r]].values.row(t);
  }
  return x;
}

void fisher_yates(std::vector<std::size_t>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i)
    std::swap(v[i - 1], v[rng() % i]);
}

std::vector<Eigen::MatrixXf> snapshot(nn::Network<float>& net) {
  std::vector<Eigen::MatrixXf> out;
  for (const auto& p : net.parameters()) out.push_back(*p.value);
  return out;
}

void restore(nn::Network<float>& net, const std::vector<Eigen::MatrixXf>& snap) {
  auto params = net.parameters();
  for (std::size_t i = 0; i < params.size(); ++i) *params[i].value = snap[i];
}

}  // namespace

nn::Mat<float> predict_probs(nn::Network<float>& net, const FeatureDataset& ds,
                             int batch_size) {
  std::mt19937_64 rng(0);  // unused in eval mode
  nn::Mat<float> probs(ds.size(), net.config().n_classes);
  for (std::size_t begin = 0; begin < ds.size(); begin += batch_size) {
    const std::size_t end = std::min(ds.size(), begin + batch_size);
    std::vector<std::size_t> idx(end - begin);
    std::iota(idx.begin(), idx.end(), begin);
    nn::Mat<float> p = net.forward(make_batch(ds, idx), false, rng);
    probs.middleRows(static_cast<Eigen::Index>(begin), p.rows()) = p;
  }
  return probs;
}

std::vector<int> argmax_rows(const nn::Mat<float>& probs) {
  std::vector<int> out(probs.rows());
  for (Eigen::Index i = 0; i < probs.rows(); ++i) {
    Eigen::Index j;
    probs.row(i).maxCoeff(&j);
    out[i] = static_cast<int>(j);
  }
  return out;
}

EvalReport evaluate(nn::Network<float>& net, const FeatureDataset& ds,
                    const std::vector<int>& labels) {
  const auto pred = argmax_rows(predict_probs(net, ds));
  return report_from_predictions(labels, pred, net.config().n_classes);
}

TrainResult train(nn::Network<float>& net, const FeatureDataset& train_set,
                  const std::vector<int>& train_labels,
                  const FeatureDataset& val_set,
                  const std::vector<int>& val_labels, const TrainOptions& opt) {
  if (train_set.size() != train_labels.size() ||
      val_set.size() != val_labels.size())
    throw ShapeMismatch("dataset/label size mismatch");
  if (train_set.feature_dim != net.input_dim())
    throw ShapeMismatch("network expects F=" + std::to_string(net.input_dim()) +
                        ", features have F=" +
                        std::to_string(train_set.feature_dim));

  std::mt19937_64 rng(derive_seed(opt.seed, "train"));
  nn::Adam<float> adam;
  nn::LrSchedule sched(opt.schedule);

  TrainResult result;
  std::vector<Eigen::MatrixXf> best = snapshot(net);
  int stale = 0;

  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 0; epoch < opt.max_epochs; ++epoch) {
    const double lr = sched.lr(epoch);
    fisher_yates(order, rng);

    double loss_sum = 0.0;
    int batches = 0;
    for (std::size_t begin = 0; begin < order.size();
         begin += opt.batch_size) {
      const std::size_t end =
          std::min(order.size(), begin + opt.batch_size);
      std::vector<std::size_t> idx(order.begin() + begin, order.begin() + end);
      std::vector<int> targets(idx.size());
      for (std::size_t r = 0; r < idx.size(); ++r)
        targets[r] = train_labels[idx[r]];

      net.zero_grads();
      nn::Mat<float> probs = net.forward(make_batch(train_set, idx), true, rng);
      auto [loss, dlogits] = nn::cross_entropy(probs, targets);
      net.backward(dlogits);
      auto params = net.parameters();
      adam.step(params, static_cast<float>(lr));
      net.clip_recurrent();

      loss_sum += loss;
      ++batches;
    }

    const EvalReport val = evaluate(net, val_set, val_labels);
    sched.observe(val.macro_f1);
    result.history.push_back(
        {epoch, lr, loss_sum / std::max(batches, 1), val.macro_f1});

    if (val.macro_f1 > result.best_f1 || result.best_epoch < 0) {
      result.best_f1 = val.macro_f1;
      result.best_epoch = epoch;
      best = snapshot(net);
      stale = 0;
    } else {
      ++stale;
    }

    if (opt.stop_at_f1 > 0 && val.macro_f1 >= opt.stop_at_f1) break;
    if (opt.early_stop_patience > 0 && stale >= opt.early_stop_patience) break;
  }

  restore(net, best);
  return result;
}

nn::Network<float> clone_network(nn::Network<float>& src) {
  nn::Network<float> dst(src.config(), src.input_dim());
  auto a = src.parameters();
  auto b = dst.parameters();
  for (std::size_t i = 0; i < a.size(); ++i) *b[i].value = *a[i].value;
  return dst;
}

std::string history_to_csv(const std::vector<EpochStat>& history) {
  std::ostringstream os;
  os << "epoch,lr,train_loss,val_f1\n";
  for (const auto& e : history)
    os << e.epoch << ',' << e.lr << ',' << e.train_loss << ',' << e.val_f1
       << '\n';
  return os.str();
}

}  // namespace har::pipeline
