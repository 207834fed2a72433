#pragma once

#include <vector>

namespace har::nn {

struct ScheduleConfig {
  double base_lr = 8e-5;
  double warmup_lr = 2e-5;
  int warmup_epochs = 10;
  int plateau_patience = 100;
  double decay_factor = 0.1;
  int max_drops = 2;
};

// Warmup, then a base rate that drops by decay_factor each time the best
// validation metric has not improved for `plateau_patience` consecutive
// epochs, at most max_drops times.
class LrSchedule {
public:
  explicit LrSchedule(const ScheduleConfig& cfg) : cfg_(cfg) {}

  double lr(int epoch) const {
    if (epoch < cfg_.warmup_epochs) return cfg_.warmup_lr;
    double lr = cfg_.base_lr;
    for (int d = 0; d < drops_; ++d) lr *= cfg_.decay_factor;
    return lr;
  }

  // Call once per epoch with the epoch's validation metric.
  void observe(double val_metric) {
    if (val_metric > best_) {
      best_ = val_metric;
      stale_ = 0;
    } else {
      ++stale_;
      if (stale_ >= cfg_.plateau_patience && drops_ < cfg_.max_drops) {
        ++drops_;
        stale_ = 0;
      }
    }
  }

  int drops() const { return drops_; }

private:
  ScheduleConfig cfg_;
  double best_ = -1.0;
  int stale_ = 0;
  int drops_ = 0;
};

}  // namespace har::nn
