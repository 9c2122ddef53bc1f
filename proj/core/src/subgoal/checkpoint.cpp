#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "ddpen/subgoal/approximator.hpp"
#include "json.hpp"

namespace ddpen::subgoal {
namespace {

using nlohmann::json;

constexpr char kMagic[8] = {'D', 'D', 'P', 'E', 'N', 'S', 'G', '1'};

static_assert(sizeof(float) == 4);

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) {
    out.push_back(static_cast<char>((v >> (8 * i)) & 0xFFu));
  }
}

std::uint32_t get_u32(const std::string& in, std::size_t at) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[at + i])) << (8 * i);
  }
  return v;
}

json config_json(const ApproximatorConfig& c) {
  return {{"downsample", c.downsample},
          {"conv1_channels", c.conv1_channels},
          {"conv2_channels", c.conv2_channels},
          {"goal_embedding", c.goal_embedding},
          {"hidden", c.hidden},
          {"learning_rate", c.learning_rate},
          {"batch_size", c.batch_size},
          {"epochs", c.epochs},
          {"seed", c.seed},
          {"split_seed", c.split_seed},
          {"validation_fraction", c.validation_fraction}};
}

ApproximatorConfig config_from(const json& j) {
  ApproximatorConfig c;
  c.downsample = j.at("downsample").get<int>();
  c.conv1_channels = j.at("conv1_channels").get<int>();
  c.conv2_channels = j.at("conv2_channels").get<int>();
  c.goal_embedding = j.at("goal_embedding").get<int>();
  c.hidden = j.at("hidden").get<int>();
  c.learning_rate = j.at("learning_rate").get<double>();
  c.batch_size = j.at("batch_size").get<int>();
  c.epochs = j.at("epochs").get<int>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.split_seed = j.at("split_seed").get<std::uint64_t>();
  c.validation_fraction = j.at("validation_fraction").get<double>();
  return c;
}

}  // namespace

std::string serialize_checkpoint(const Checkpoint& ckpt) {
  const json header = {{"version", ckpt.version},
                       {"config", config_json(ckpt.config)},
                       {"map_width", ckpt.map_width},
                       {"map_height", ckpt.map_height},
                       {"resolution", ckpt.resolution},
                       {"normalization",
                        {{"half_extent_x", ckpt.half_extent_x},
                         {"half_extent_y", ckpt.half_extent_y}}},
                       {"validation_mse", ckpt.validation_mse},
                       {"validation_median_error_m", ckpt.validation_median_error_m},
                       {"baseline_median_error_m", ckpt.baseline_median_error_m},
                       {"best_epoch", ckpt.best_epoch},
                       {"weight_count", ckpt.weights.size()}};
  const std::string text = header.dump();
  std::string out(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  out.reserve(out.size() + 4 * ckpt.weights.size());
  for (const float w : ckpt.weights) {
    put_u32(out, std::bit_cast<std::uint32_t>(w));
  }
  return out;
}

Checkpoint deserialize_checkpoint(const std::string& bytes) {
  if (bytes.size() < 12 || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw CheckpointError("checkpoint: bad magic");
  }
  const std::uint32_t len = get_u32(bytes, 8);
  if (bytes.size() < 12 + static_cast<std::size_t>(len)) {
    throw CheckpointError("checkpoint: truncated header");
  }
  json h;
  try {
    h = json::parse(bytes.substr(12, len));
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("checkpoint: bad header: ") + e.what());
  }
  Checkpoint c;
  try {
    c.version = h.at("version").get<int>();
    if (c.version != Checkpoint::kVersion) {
      throw CheckpointError("checkpoint: unsupported version " + std::to_string(c.version));
    }
    c.config = config_from(h.at("config"));
    c.config.validate();
    c.map_width = h.at("map_width").get<int>();
    c.map_height = h.at("map_height").get<int>();
    c.resolution = h.at("resolution").get<double>();
    c.half_extent_x = h.at("normalization").at("half_extent_x").get<double>();
    c.half_extent_y = h.at("normalization").at("half_extent_y").get<double>();
    c.validation_mse = h.at("validation_mse").get<double>();
    c.validation_median_error_m = h.at("validation_median_error_m").get<double>();
    c.baseline_median_error_m = h.at("baseline_median_error_m").get<double>();
    c.best_epoch = h.at("best_epoch").get<int>();
    const auto count = h.at("weight_count").get<std::size_t>();
    const std::size_t base = 12 + len;
    if (bytes.size() != base + 4 * count) {
      throw CheckpointError("checkpoint: weight blob size mismatch");
    }
    c.weights.resize(count);
    for (std::size_t i = 0; i < count; ++i) {
      c.weights[i] = std::bit_cast<float>(get_u32(bytes, base + 4 * i));
    }
  } catch (const json::exception& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw CheckpointError(std::string("checkpoint: ") + e.what());
  }
  const SubGoalNet probe(c.config, c.map_width, c.map_height);
  if (probe.parameter_count() != c.weights.size()) {
    throw CheckpointError("checkpoint: weight count does not match config");
  }
  return c;
}

void save_checkpoint(const Checkpoint& ckpt, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw CheckpointError("checkpoint: cannot write " + path.string());
  }
  const std::string bytes = serialize_checkpoint(ckpt);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

Checkpoint load_checkpoint(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw CheckpointError("checkpoint: cannot read " + path.string());
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize_checkpoint(ss.str());
}

std::uint64_t checkpoint_hash(const Checkpoint& ckpt) {
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char c : serialize_checkpoint(ckpt)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace ddpen::subgoal
