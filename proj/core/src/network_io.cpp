#include "har/nn/checkpoint.hpp"

#include <array>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

namespace har::nn {

namespace {

constexpr char kMagic[8] = {'H', 'A', 'R', 'C', 'K', 'P', 'T', '1'};
constexpr std::uint32_t kVersion = 1;

std::uint32_t crc32(const std::string& data) {
  static const auto table = [] {
    std::array<std::uint32_t, 256> t{};
    for (std::uint32_t i = 0; i < 256; ++i) {
      std::uint32_t c = i;
      for (int k = 0; k < 8; ++k)
        c = (c & 1) ? 0xEDB88320u ^ (c >> 1) : c >> 1;
      t[i] = c;
    }
    return t;
  }();
  std::uint32_t c = 0xFFFFFFFFu;
  for (unsigned char ch : data) c = table[(c ^ ch) & 0xFF] ^ (c >> 8);
  return c ^ 0xFFFFFFFFu;
}

struct Writer {
  std::ostringstream out;
  void raw(const void* p, std::size_t n) {
    out.write(static_cast<const char*>(p), static_cast<std::streamsize>(n));
  }
  void u32(std::uint32_t v) { raw(&v, 4); }
  void i64(std::int64_t v) { raw(&v, 8); }
  void f64(double v) { raw(&v, 8); }
  void str(const std::string& s) {
    u32(static_cast<std::uint32_t>(s.size()));
    raw(s.data(), s.size());
  }
  void mat(const Eigen::MatrixXf& m) {
    u32(static_cast<std::uint32_t>(m.rows()));
    u32(static_cast<std::uint32_t>(m.cols()));
    raw(m.data(), sizeof(float) * static_cast<std::size_t>(m.size()));
  }
};

struct Reader {
  std::string data;
  std::size_t pos = 0;
  void raw(void* p, std::size_t n) {
    if (pos + n > data.size())
      throw CorruptCheckpoint("truncated checkpoint");
    std::memcpy(p, data.data() + pos, n);
    pos += n;
  }
  std::uint32_t u32() {
    std::uint32_t v;
    raw(&v, 4);
    return v;
  }
  std::int64_t i64() {
    std::int64_t v;
    raw(&v, 8);
    return v;
  }
  double f64() {
    double v;
    raw(&v, 8);
    return v;
  }
  std::string str() {
    const std::uint32_t n = u32();
    std::string s(n, '\0');
    raw(s.data(), n);
    return s;
  }
  Eigen::MatrixXf mat() {
    const std::uint32_t r = u32(), c = u32();
    Eigen::MatrixXf m(r, c);
    raw(m.data(), sizeof(float) * static_cast<std::size_t>(m.size()));
    return m;
  }
};

void write_config(Writer& w, const NetworkConfig& cfg, int input_dim) {
  w.u32(static_cast<std::uint32_t>(cfg.architecture));
  w.u32(static_cast<std::uint32_t>(cfg.block_layers.size()));
  for (int b : cfg.block_layers) w.u32(static_cast<std::uint32_t>(b));
  w.u32(static_cast<std::uint32_t>(cfg.growth_rate));
  w.f64(cfg.transition_compression);
  w.f64(cfg.dropout.input);
  w.f64(cfg.dropout.dense_layer);
  w.f64(cfg.dropout.bottleneck);
  w.f64(cfg.dropout.transition);
  w.u32(static_cast<std::uint32_t>(cfg.n_classes));
  w.u32(static_cast<std::uint32_t>(cfg.hidden_width));
  w.u32(static_cast<std::uint32_t>(cfg.seq_len));
  w.f64(cfg.recurrent_max_memory);
  w.u32(static_cast<std::uint32_t>(input_dim));
}

std::pair<NetworkConfig, int> read_config(Reader& r) {
  NetworkConfig cfg;
  cfg.architecture = static_cast<ArchKind>(r.u32());
  cfg.block_layers.resize(r.u32());
  for (auto& b : cfg.block_layers) b = static_cast<int>(r.u32());
  cfg.growth_rate = static_cast<int>(r.u32());
  cfg.transition_compression = r.f64();
  cfg.dropout.input = r.f64();
  cfg.dropout.dense_layer = r.f64();
  cfg.dropout.bottleneck = r.f64();
  cfg.dropout.transition = r.f64();
  cfg.n_classes = static_cast<int>(r.u32());
  cfg.hidden_width = static_cast<int>(r.u32());
  cfg.seq_len = static_cast<int>(r.u32());
  cfg.recurrent_max_memory = r.f64();
  const int input_dim = static_cast<int>(r.u32());
  return {cfg, input_dim};
}

}  // namespace

void save_checkpoint(Network<float>& net, const NormStats& norm,
                     Adam<float>* opt, const std::string& path) {
  Writer w;
  w.raw(kMagic, sizeof(kMagic));
  w.u32(kVersion);
  write_config(w, net.config(), net.input_dim());

  auto params = net.parameters();
  w.u32(static_cast<std::uint32_t>(params.size()));
  for (const auto& p : params) {
    w.str(p.name);
    w.mat(*p.value);
  }

  w.u32(opt ? 1 : 0);
  if (opt) {
    w.i64(opt->step_count());
    w.u32(static_cast<std::uint32_t>(opt->first_moments().size()));
    for (const auto& m : opt->first_moments()) w.mat(m);
    for (const auto& v : opt->second_moments()) w.mat(v);
  }

  Eigen::MatrixXf mean = norm.mean.transpose();
  Eigen::MatrixXf sd = norm.std.transpose();
  w.mat(mean);
  w.mat(sd);

  std::string body = w.out.str();
  const std::uint32_t sum = crc32(body);
  body.append(reinterpret_cast<const char*>(&sum), 4);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  f.write(body.data(), static_cast<std::streamsize>(body.size()));
  if (!f) throw IoError("write failed for " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw IoError("cannot open " + path);
  std::string data((std::istreambuf_iterator<char>(f)),
                   std::istreambuf_iterator<char>());
  if (data.size() < sizeof(kMagic) + 8)
    throw CorruptCheckpoint("file too short");

  std::uint32_t stored;
  std::memcpy(&stored, data.data() + data.size() - 4, 4);
  const std::string body = data.substr(0, data.size() - 4);
  if (crc32(body) != stored)
    throw CorruptCheckpoint("checksum mismatch");

  Reader r{body};
  char magic[8];
  r.raw(magic, 8);
  if (std::memcmp(magic, kMagic, 8) != 0)
    throw CorruptCheckpoint("bad magic");
  if (r.u32() != kVersion) throw CorruptCheckpoint("unsupported version");

  auto [cfg, input_dim] = read_config(r);
  Network<float> net(cfg, input_dim);
  auto params = net.parameters();

  const std::uint32_t n_tensors = r.u32();
  if (n_tensors != params.size())
    throw CorruptCheckpoint("tensor count mismatch: file has " +
                            std::to_string(n_tensors) + ", architecture needs " +
                            std::to_string(params.size()));
  for (auto& p : params) {
    const std::string name = r.str();
    Eigen::MatrixXf m = r.mat();
    if (name != p.name)
      throw CorruptCheckpoint("tensor name mismatch: file has '" + name +
                              "', architecture expects '" + p.name + "'");
    if (m.rows() != p.value->rows() || m.cols() != p.value->cols())
      throw CorruptCheckpoint("tensor shape mismatch for " + name);
    *p.value = std::move(m);
  }

  LoadedCheckpoint out{std::move(net), NormStats{}, std::nullopt};
  if (r.u32() == 1) {
    Adam<float> opt;
    opt.set_step_count(r.i64());
    const std::uint32_t n = r.u32();
    opt.first_moments().resize(n);
    opt.second_moments().resize(n);
    for (auto& m : opt.first_moments()) m = r.mat();
    for (auto& v : opt.second_moments()) v = r.mat();
    out.opt = std::move(opt);
  }
  Eigen::MatrixXf mean = r.mat();
  Eigen::MatrixXf sd = r.mat();
  out.norm.mean = mean.transpose();
  out.norm.std = sd.transpose();
  return out;
}

}  // namespace har::nn
