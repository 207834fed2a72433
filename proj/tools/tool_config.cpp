#include "tool_config.hpp"

#include <fstream>

#include "json.hpp"

namespace har::cli {

using nlohmann::json;

namespace {

nn::ArchKind arch_from_string(const std::string& s) {
  if (s == "plain") return nn::ArchKind::Plain;
  if (s == "residual") return nn::ArchKind::Residual;
  if (s == "dense") return nn::ArchKind::Dense;
  throw BadConfig("unknown architecture '" + s + "'");
}

std::string arch_to_string(nn::ArchKind a) {
  switch (a) {
    case nn::ArchKind::Plain: return "plain";
    case nn::ArchKind::Residual: return "residual";
    case nn::ArchKind::Dense: return "dense";
  }
  return "dense";
}

template <class T>
void get_if(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void merge_json_config(RunConfig& cfg, const std::string& path) {
  std::ifstream f(path);
  if (!f) throw IoError("cannot open config file " + path);
  json j;
  try {
    f >> j;
  } catch (const json::parse_error& e) {
    throw BadConfig("config parse error in " + path + ": " + e.what());
  }

  get_if(j, "seed", cfg.seed);
  get_if(j, "threads", cfg.threads);

  if (j.contains("synth")) {
    const json& s = j["synth"];
    get_if(s, "samples_per_class", cfg.synth.samples_per_class);
    get_if(s, "noise_level", cfg.synth.noise_level);
    get_if(s, "user_amp_perturb", cfg.synth.user_amp_perturb);
    get_if(s, "user_freq_perturb", cfg.synth.user_freq_perturb);
    get_if(s, "imbalance", cfg.synth.imbalance);
    if (s.contains("locations")) {
      cfg.synth.locations.clear();
      for (int id : s["locations"].get<std::vector<int>>())
        cfg.synth.locations.push_back(location_from_id(id));
    }
    if (s.contains("base_freqs")) {
      const auto freqs = s["base_freqs"].get<std::vector<double>>();
      if (freqs.size() != kNumActivities)
        throw BadConfig("base_freqs must list 8 frequencies");
      for (int c = 0; c < kNumActivities; ++c)
        cfg.synth.classes[c].base_freq_hz = freqs[c];
    }
  }

  if (j.contains("features")) {
    const json& s = j["features"];
    get_if(s, "window_len", cfg.window.window_len);
    get_if(s, "n_windows", cfg.window.n_windows);
    get_if(s, "stride", cfg.window.stride);
    get_if(s, "time_stats", cfg.feature.include_time_stats);
    get_if(s, "fft_spectrum", cfg.feature.include_fft_spectrum);
    get_if(s, "fft_stats", cfg.feature.include_fft_stats);
    get_if(s, "augment", cfg.feature.augment_temporal_diff);
    get_if(s, "pressure_epsilon", cfg.feature.pressure_epsilon);
  }

  if (j.contains("network")) {
    const json& s = j["network"];
    if (s.contains("architecture"))
      cfg.network.architecture =
          arch_from_string(s["architecture"].get<std::string>());
    get_if(s, "block_layers", cfg.network.block_layers);
    get_if(s, "growth_rate", cfg.network.growth_rate);
    get_if(s, "transition_compression", cfg.network.transition_compression);
    get_if(s, "hidden_width", cfg.network.hidden_width);
    get_if(s, "n_classes", cfg.network.n_classes);
    get_if(s, "recurrent_max_memory", cfg.network.recurrent_max_memory);
    if (s.contains("dropout")) {
      const json& d = s["dropout"];
      get_if(d, "input", cfg.network.dropout.input);
      get_if(d, "dense_layer", cfg.network.dropout.dense_layer);
      get_if(d, "bottleneck", cfg.network.dropout.bottleneck);
      get_if(d, "transition", cfg.network.dropout.transition);
    }
  }

  if (j.contains("train")) {
    const json& s = j["train"];
    get_if(s, "batch_size", cfg.train.batch_size);
    get_if(s, "max_epochs", cfg.train.max_epochs);
    get_if(s, "base_lr", cfg.train.schedule.base_lr);
    get_if(s, "warmup_lr", cfg.train.schedule.warmup_lr);
    get_if(s, "warmup_epochs", cfg.train.schedule.warmup_epochs);
    get_if(s, "plateau_patience", cfg.train.schedule.plateau_patience);
    get_if(s, "decay_factor", cfg.train.schedule.decay_factor);
    get_if(s, "max_drops", cfg.train.schedule.max_drops);
    get_if(s, "stop_at_f1", cfg.train.stop_at_f1);
    get_if(s, "early_stop_patience", cfg.train.early_stop_patience);
    if (s.contains("target")) {
      const std::string t = s["target"].get<std::string>();
      if (t == "activity")
        cfg.train_target = TrainTarget::Activity;
      else if (t == "location_group")
        cfg.train_target = TrainTarget::LocationGroup;
      else
        throw BadConfig("unknown train target '" + t + "'");
    }
  }

  if (j.contains("transfer")) {
    const json& s = j["transfer"];
    get_if(s, "lr", cfg.transfer.lr);
    get_if(s, "max_epochs", cfg.transfer.max_epochs);
    get_if(s, "early_stop_patience", cfg.transfer.early_stop_patience);
    get_if(s, "batch_size", cfg.transfer.batch_size);
  }

  cfg.network.seq_len = cfg.window.n_windows;
}

RunConfig load_config(const std::string& path) {
  RunConfig cfg;
  if (!path.empty()) merge_json_config(cfg, path);
  return cfg;
}

std::string resolved_json(const RunConfig& cfg) {
  json j;
  j["version"] = kVersionStamp;
  j["seed"] = cfg.seed;
  j["threads"] = cfg.threads;

  json& s = j["synth"];
  s["samples_per_class"] = cfg.synth.samples_per_class;
  s["noise_level"] = cfg.synth.noise_level;
  s["user_amp_perturb"] = cfg.synth.user_amp_perturb;
  s["user_freq_perturb"] = cfg.synth.user_freq_perturb;
  s["imbalance"] = cfg.synth.imbalance;
  {
    std::vector<int> locs;
    for (Location l : cfg.synth.locations) locs.push_back(to_id(l));
    s["locations"] = locs;
    std::vector<double> freqs;
    for (const auto& c : cfg.synth.classes) freqs.push_back(c.base_freq_hz);
    s["base_freqs"] = freqs;
  }

  json& f = j["features"];
  f["window_len"] = cfg.window.window_len;
  f["n_windows"] = cfg.window.n_windows;
  f["stride"] = cfg.window.stride;
  f["time_stats"] = cfg.feature.include_time_stats;
  f["fft_spectrum"] = cfg.feature.include_fft_spectrum;
  f["fft_stats"] = cfg.feature.include_fft_stats;
  f["augment"] = cfg.feature.augment_temporal_diff;
  f["pressure_epsilon"] = cfg.feature.pressure_epsilon;

  json& n = j["network"];
  n["architecture"] = arch_to_string(cfg.network.architecture);
  n["block_layers"] = cfg.network.block_layers;
  n["growth_rate"] = cfg.network.growth_rate;
  n["transition_compression"] = cfg.network.transition_compression;
  n["hidden_width"] = cfg.network.hidden_width;
  n["n_classes"] = cfg.network.n_classes;
  n["recurrent_max_memory"] = cfg.network.recurrent_max_memory;
  n["dropout"] = {{"input", cfg.network.dropout.input},
                  {"dense_layer", cfg.network.dropout.dense_layer},
                  {"bottleneck", cfg.network.dropout.bottleneck},
                  {"transition", cfg.network.dropout.transition}};

  json& t = j["train"];
  t["batch_size"] = cfg.train.batch_size;
  t["max_epochs"] = cfg.train.max_epochs;
  t["base_lr"] = cfg.train.schedule.base_lr;
  t["warmup_lr"] = cfg.train.schedule.warmup_lr;
  t["warmup_epochs"] = cfg.train.schedule.warmup_epochs;
  t["plateau_patience"] = cfg.train.schedule.plateau_patience;
  t["decay_factor"] = cfg.train.schedule.decay_factor;
  t["max_drops"] = cfg.train.schedule.max_drops;
  t["stop_at_f1"] = cfg.train.stop_at_f1;
  t["early_stop_patience"] = cfg.train.early_stop_patience;
  t["target"] = cfg.train_target == TrainTarget::Activity ? "activity"
                                                          : "location_group";

  json& tr = j["transfer"];
  tr["lr"] = cfg.transfer.lr;
  tr["max_epochs"] = cfg.transfer.max_epochs;
  tr["early_stop_patience"] = cfg.transfer.early_stop_patience;
  tr["batch_size"] = cfg.transfer.batch_size;

  return j.dump(2) + "\n";
}

}  // namespace har::cli
