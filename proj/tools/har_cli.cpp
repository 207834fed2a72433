#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "har/nn/checkpoint.hpp"
#include "har/pipeline/ingest.hpp"
#include "har/pipeline/location.hpp"
#include "har/pipeline/metrics.hpp"
#include "har/pipeline/synth.hpp"
#include "har/pipeline/train.hpp"
#include "har/pipeline/transfer.hpp"
#include "tool_config.hpp"

namespace {

namespace fs = std::filesystem;
using namespace har;

void write_file(const fs::path& path, const std::string& content) {
  fs::create_directories(path.parent_path());
  std::ofstream f(path, std::ios::trunc | std::ios::binary);
  if (!f) throw IoError("cannot open " + path.string() + " for writing");
  f << content;
  if (!f) throw IoError("write failed for " + path.string());
}

void echo_config(const cli::RunConfig& cfg, const std::string& out_dir) {
  write_file(fs::path(out_dir) / "run_config.json", cli::resolved_json(cfg));
}

std::vector<int> labels_for(const pipeline::FeatureDataset& ds, int n_classes) {
  // A 2-class checkpoint is a location-group model.
  return n_classes == kNumLocationGroups ? ds.group_labels()
                                         : ds.activity_labels();
}

std::vector<std::string> class_names(int n_classes) {
  std::vector<std::string> names;
  if (n_classes == kNumLocationGroups) {
    names = {"BagHand", "HipsTorso"};
  } else {
    for (int c = 0; c < kNumActivities; ++c)
      names.emplace_back(to_string(static_cast<Activity>(c)));
  }
  return names;
}

pipeline::FeatureDataset load_normalized(const std::string& path,
                                         const nn::NormStats& norm) {
  pipeline::FeatureDataset ds = pipeline::load_features(path);
  pipeline::apply_norm(ds, norm);
  return ds;
}

int cmd_synth(const cli::RunConfig& cfg, const std::string& out_dir) {
  pipeline::SyntheticSpec spec = cfg.synth;
  spec.seed = cfg.seed;
  const pipeline::RawDataset ds = pipeline::synthesize(spec);
  pipeline::write_dataset(ds, out_dir);
  echo_config(cfg, out_dir);
  std::cout << "wrote " << ds.samples.size() << " samples to " << out_dir
            << "\n";
  return 0;
}

int cmd_features(const cli::RunConfig& cfg, const std::string& in_dir,
                 const std::string& out_dir) {
  const pipeline::RawDataset raw = pipeline::ingest(in_dir);
  const pipeline::FeatureDataset ds =
      pipeline::featurize(raw, cfg.window, cfg.feature, cfg.threads);
  fs::create_directories(out_dir);
  pipeline::save_features(ds, (fs::path(out_dir) / "features.bin").string());
  echo_config(cfg, out_dir);
  std::cout << "samples=" << ds.size() << " steps=" << ds.steps
            << " F=" << ds.feature_dim << "\n";
  return 0;
}

int cmd_train(cli::RunConfig cfg, const std::string& train_path,
              const std::string& val_path, const std::string& out_dir) {
  pipeline::FeatureDataset tr = pipeline::load_features(train_path);
  pipeline::FeatureDataset va = pipeline::load_features(val_path);
  if (tr.feature_dim != va.feature_dim)
    throw ShapeMismatch("train/validation feature dims differ");

  const nn::NormStats norm = pipeline::compute_norm_stats(tr);
  pipeline::apply_norm(tr, norm);
  pipeline::apply_norm(va, norm);

  if (cfg.train_target == cli::TrainTarget::LocationGroup)
    cfg.network.n_classes = kNumLocationGroups;
  cfg.network.seq_len = tr.steps;
  const auto tr_y = cfg.train_target == cli::TrainTarget::Activity
                        ? tr.activity_labels()
                        : tr.group_labels();
  const auto va_y = cfg.train_target == cli::TrainTarget::Activity
                        ? va.activity_labels()
                        : va.group_labels();

  nn::Network<float> net(cfg.network, tr.feature_dim);
  std::mt19937_64 init_rng(pipeline::derive_seed(cfg.seed, "init"));
  net.init(init_rng);

  pipeline::TrainOptions topt = cfg.train;
  topt.seed = cfg.seed;
  const pipeline::TrainResult result =
      pipeline::train(net, tr, tr_y, va, va_y, topt);

  nn::save_checkpoint(net, norm, nullptr,
                      (fs::path(out_dir) / "checkpoint.bin").string());
  write_file(fs::path(out_dir) / "history.csv",
             pipeline::history_to_csv(result.history));
  echo_config(cfg, out_dir);
  std::cout << "best val macro F1 " << result.best_f1 << " at epoch "
            << result.best_epoch << "\n";
  return 0;
}

int cmd_eval(const cli::RunConfig& cfg, const std::string& features_path,
             const std::string& ckpt_path, const std::string& out_dir) {
  nn::LoadedCheckpoint ckpt = nn::load_checkpoint(ckpt_path);
  pipeline::FeatureDataset ds = load_normalized(features_path, ckpt.norm);
  const int k = ckpt.net.config().n_classes;
  const pipeline::EvalReport report =
      pipeline::evaluate(ckpt.net, ds, labels_for(ds, k));
  write_file(fs::path(out_dir) / "report.txt", report.to_text(class_names(k)));
  write_file(fs::path(out_dir) / "report.json",
             report.to_json(class_names(k)));
  echo_config(cfg, out_dir);
  std::cout << "macro F1 " << report.macro_f1 << "\n";
  return 0;
}

int cmd_predict(const cli::RunConfig& cfg, const std::string& features_path,
                const std::string& ckpt_path, const std::string& out_dir) {
  nn::LoadedCheckpoint ckpt = nn::load_checkpoint(ckpt_path);
  pipeline::FeatureDataset ds = load_normalized(features_path, ckpt.norm);
  const auto pred =
      pipeline::argmax_rows(pipeline::predict_probs(ckpt.net, ds));
  const auto names = class_names(ckpt.net.config().n_classes);
  std::string out;
  for (int p : pred) out += names[p] + "\n";
  write_file(fs::path(out_dir) / "predictions.txt", out);
  echo_config(cfg, out_dir);
  std::cout << pred.size() << " predictions written\n";
  return 0;
}

int cmd_locate(const cli::RunConfig& cfg, const std::string& features_path,
               const std::string& ckpt_path, const std::string& out_dir) {
  nn::LoadedCheckpoint ckpt = nn::load_checkpoint(ckpt_path);
  if (ckpt.net.config().n_classes != kNumLocationGroups)
    throw BadConfig("locate needs a 2-class location-group checkpoint");
  pipeline::FeatureDataset ds = load_normalized(features_path, ckpt.norm);
  const pipeline::LocationDecision decision =
      pipeline::recognize_location_group(ckpt.net, ds);
  std::string out(to_string(decision.majority));
  out += "\n";
  for (LocationGroup g : decision.per_sample) {
    out += to_string(g);
    out += "\n";
  }
  write_file(fs::path(out_dir) / "location_group.txt", out);
  echo_config(cfg, out_dir);
  std::cout << "location group: " << to_string(decision.majority) << "\n";
  return 0;
}

int cmd_transfer(const cli::RunConfig& cfg, const std::string& ckpt_path,
                 const std::string& val_path, const std::string& test_path,
                 const std::string& out_dir) {
  nn::LoadedCheckpoint base = nn::load_checkpoint(ckpt_path);
  pipeline::FeatureDataset val = load_normalized(val_path, base.norm);
  pipeline::FeatureDataset test = load_normalized(test_path, base.norm);
  const int k = base.net.config().n_classes;

  pipeline::TransferOptions topt = cfg.transfer;
  topt.seed = cfg.seed;
  pipeline::TransferResult result = pipeline::transfer_and_fuse(
      base.net, val, labels_for(val, k), test, labels_for(test, k), topt);

  nn::save_checkpoint(result.model_a, base.norm, nullptr,
                      (fs::path(out_dir) / "transferA.bin").string());
  nn::save_checkpoint(result.model_b, base.norm, nullptr,
                      (fs::path(out_dir) / "transferB.bin").string());
  const auto names = class_names(k);
  write_file(fs::path(out_dir) / "report_transferA.json",
             result.report_a.to_json(names));
  write_file(fs::path(out_dir) / "report_transferB.json",
             result.report_b.to_json(names));
  write_file(fs::path(out_dir) / "report_fused.json",
             result.report_fused.to_json(names));
  std::string preds;
  for (int p : result.fused_predictions) preds += names[p] + "\n";
  write_file(fs::path(out_dir) / "fused_predictions.txt", preds);
  echo_config(cfg, out_dir);
  std::cout << "transferA F1 " << result.report_a.macro_f1 << ", transferB F1 "
            << result.report_b.macro_f1 << ", fused F1 "
            << result.report_fused.macro_f1 << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sensor-to-activity recognition toolkit"};
  app.require_subcommand(1);

  std::string config_path, out_dir;
  std::uint64_t seed = 0;
  int threads = 1;
  bool seed_set = false, threads_set = false;
  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--out", out_dir, "output directory");
  app.add_option("--seed", seed, "master seed (overrides config)")
      ->each([&](const std::string&) { seed_set = true; });
  app.add_option("--threads", threads, "featurization worker threads")
      ->each([&](const std::string&) { threads_set = true; });

  std::string in_dir, features_path, val_features, test_features, ckpt_path;
  bool augment_flag = false;

  CLI::App* synth = app.add_subcommand("synth", "generate a synthetic dataset");
  CLI::App* features =
      app.add_subcommand("features", "featurize an ingested dataset");
  features->add_option("--in", in_dir, "dataset directory")->required();
  features->add_flag("--augment", augment_flag,
                     "append temporal-difference features");
  CLI::App* train = app.add_subcommand("train", "train a model");
  train->add_option("--train-features", features_path, "training feature file")
      ->required();
  train->add_option("--val-features", val_features, "validation feature file")
      ->required();
  CLI::App* eval = app.add_subcommand("eval", "evaluate a checkpoint");
  eval->add_option("--features", features_path, "feature file")->required();
  eval->add_option("--checkpoint", ckpt_path, "model checkpoint")->required();
  CLI::App* predict = app.add_subcommand("predict", "write per-sample labels");
  predict->add_option("--features", features_path, "feature file")->required();
  predict->add_option("--checkpoint", ckpt_path, "model checkpoint")
      ->required();
  CLI::App* locate =
      app.add_subcommand("locate", "recognize the placement group");
  locate->add_option("--features", features_path, "feature file")->required();
  locate->add_option("--checkpoint", ckpt_path, "location-group checkpoint")
      ->required();
  CLI::App* transfer =
      app.add_subcommand("transfer", "stratified fine-tune and fuse");
  transfer->add_option("--checkpoint", ckpt_path, "base checkpoint")
      ->required();
  transfer->add_option("--val-features", val_features, "transfer data")
      ->required();
  transfer->add_option("--test-features", test_features, "held-out test data")
      ->required();

  CLI11_PARSE(app, argc, argv);

  try {
    cli::RunConfig cfg = cli::load_config(config_path);
    if (seed_set) cfg.seed = seed;
    if (threads_set) cfg.threads = threads;
    if (augment_flag) cfg.feature.augment_temporal_diff = true;
    if (out_dir.empty()) throw BadConfig("--out is required");
    fs::create_directories(out_dir);

    if (synth->parsed()) return cmd_synth(cfg, out_dir);
    if (features->parsed()) return cmd_features(cfg, in_dir, out_dir);
    if (train->parsed())
      return cmd_train(cfg, features_path, val_features, out_dir);
    if (eval->parsed()) return cmd_eval(cfg, features_path, ckpt_path, out_dir);
    if (predict->parsed())
      return cmd_predict(cfg, features_path, ckpt_path, out_dir);
    if (locate->parsed())
      return cmd_locate(cfg, features_path, ckpt_path, out_dir);
    if (transfer->parsed())
      return cmd_transfer(cfg, ckpt_path, val_features, test_features,
                          out_dir);
  } catch (const har::Error& e) {
    std::cerr << "error[" << e.error_class() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error[Unexpected]: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
