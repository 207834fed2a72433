#pragma once

#include <string>

#include "har/pipeline/dataset.hpp"

namespace har::pipeline {

// Directory layout: one whitespace-separated text matrix per channel
// (rows = samples, 500 columns): gyr_{x,y,z}.txt, acc_{x,y,z}.txt,
// mag_{x,y,z}.txt, pressure.txt, plus ori_{w,x,y,z}.txt for orientation,
// label.txt (500 per-frame activity ids per row, majority-voted) and
// optionally location.txt (one location id per row).
RawDataset ingest(const std::string& dir);

void write_dataset(const RawDataset& ds, const std::string& dir);

}  // namespace har::pipeline
