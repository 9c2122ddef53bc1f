#include <algorithm>
#include <cmath>

#include "ddpen/common.hpp"
#include "ddpen/subgoal/approximator.hpp"

namespace ddpen::subgoal {
namespace {

constexpr int kKernel = 3;
constexpr int kStride = 2;
constexpr int kPad = 1;

int conv_out(int n) { return (n + 2 * kPad - kKernel) / kStride + 1; }

// Strided 3x3 convolution with zero padding, followed by ReLU.
void conv_forward(const float* in, int in_c, int in_h, int in_w, const float* w, const float* b,
                  int out_c, int out_h, int out_w, float* out) {
  for (int oc = 0; oc < out_c; ++oc) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        float acc = b[oc];
        for (int ic = 0; ic < in_c; ++ic) {
          const float* wk = w + ((oc * in_c + ic) * kKernel) * kKernel;
          const float* plane = in + ic * in_h * in_w;
          for (int ky = 0; ky < kKernel; ++ky) {
            const int iy = oy * kStride + ky - kPad;
            if (iy < 0 || iy >= in_h) {
              continue;
            }
            for (int kx = 0; kx < kKernel; ++kx) {
              const int ix = ox * kStride + kx - kPad;
              if (ix < 0 || ix >= in_w) {
                continue;
              }
              acc += wk[ky * kKernel + kx] * plane[iy * in_w + ix];
            }
          }
        }
        out[(oc * out_h + oy) * out_w + ox] = std::max(acc, 0.0f);
      }
    }
  }
}

// d_out is w.r.t. the post-ReLU output; `out` masks it. d_in may be null.
void conv_backward(const float* in, int in_c, int in_h, int in_w, const float* w,
                   const float* out, const float* d_out, int out_c, int out_h, int out_w,
                   float* d_w, float* d_b, float* d_in) {
  for (int oc = 0; oc < out_c; ++oc) {
    for (int oy = 0; oy < out_h; ++oy) {
      for (int ox = 0; ox < out_w; ++ox) {
        const int o = (oc * out_h + oy) * out_w + ox;
        if (out[o] <= 0.0f) {
          continue;
        }
        const float g = d_out[o];
        if (g == 0.0f) {
          continue;
        }
        d_b[oc] += g;
        for (int ic = 0; ic < in_c; ++ic) {
          const int wbase = ((oc * in_c + ic) * kKernel) * kKernel;
          const float* plane = in + ic * in_h * in_w;
          for (int ky = 0; ky < kKernel; ++ky) {
            const int iy = oy * kStride + ky - kPad;
            if (iy < 0 || iy >= in_h) {
              continue;
            }
            for (int kx = 0; kx < kKernel; ++kx) {
              const int ix = ox * kStride + kx - kPad;
              if (ix < 0 || ix >= in_w) {
                continue;
              }
              d_w[wbase + ky * kKernel + kx] += g * plane[iy * in_w + ix];
              if (d_in != nullptr) {
                d_in[ic * in_h * in_w + iy * in_w + ix] += g * w[wbase + ky * kKernel + kx];
              }
            }
          }
        }
      }
    }
  }
}

}  // namespace

SubGoalNet::SubGoalNet(const ApproximatorConfig& config, int map_width, int map_height)
    : cfg_(config) {
  cfg_.validate();
  pw_ = (map_width + cfg_.downsample - 1) / cfg_.downsample;
  ph_ = (map_height + cfg_.downsample - 1) / cfg_.downsample;
  w1_ = conv_out(pw_);
  h1_ = conv_out(ph_);
  w2_ = conv_out(w1_);
  h2_ = conv_out(h1_);
  features_ = cfg_.conv2_channels * w2_ * h2_ + cfg_.goal_embedding;

  std::size_t offset = 0;
  auto take = [&offset](std::size_t n) {
    const std::size_t at = offset;
    offset += n;
    return at;
  };
  const auto c1 = static_cast<std::size_t>(cfg_.conv1_channels);
  const auto c2 = static_cast<std::size_t>(cfg_.conv2_channels);
  const auto e = static_cast<std::size_t>(cfg_.goal_embedding);
  const auto h = static_cast<std::size_t>(cfg_.hidden);
  conv1_w_ = take(c1 * 9);
  conv1_b_ = take(c1);
  conv2_w_ = take(c2 * c1 * 9);
  conv2_b_ = take(c2);
  goal_w_ = take(e * 2);
  goal_b_ = take(e);
  fc1_w_ = take(h * static_cast<std::size_t>(features_));
  fc1_b_ = take(h);
  fc2_w_ = take(kOutputs * h);
  fc2_b_ = take(kOutputs);
  total_ = offset;
  params_.assign(total_, 0.0f);
}

void SubGoalNet::set_parameters(std::span<const float> values) {
  if (values.size() != total_) {
    throw CheckpointError("SubGoalNet: expected " + std::to_string(total_) + " weights, got " +
                          std::to_string(values.size()));
  }
  std::copy(values.begin(), values.end(), params_.begin());
}

void SubGoalNet::initialize(std::uint64_t seed) {
  Rng rng(seed);
  auto fill = [&](std::size_t at, std::size_t n, double fan_in, double gain) {
    const double bound = gain * std::sqrt(6.0 / fan_in);
    for (std::size_t i = 0; i < n; ++i) {
      params_[at + i] = static_cast<float>(rng.uniform(-bound, bound));
    }
  };
  const auto c1 = static_cast<std::size_t>(cfg_.conv1_channels);
  const auto c2 = static_cast<std::size_t>(cfg_.conv2_channels);
  const auto e = static_cast<std::size_t>(cfg_.goal_embedding);
  const auto h = static_cast<std::size_t>(cfg_.hidden);
  fill(conv1_w_, c1 * 9, 9.0, 1.0);
  fill(conv2_w_, c2 * c1 * 9, 9.0 * c1, 1.0);
  fill(goal_w_, e * 2, 2.0, 1.0);
  fill(fc1_w_, h * static_cast<std::size_t>(features_), features_, 1.0);
  // Start close to the straight-line prior.
  fill(fc2_w_, kOutputs * h, static_cast<double>(h), 0.01);
  std::fill(params_.begin() + static_cast<std::ptrdiff_t>(conv1_b_),
            params_.begin() + static_cast<std::ptrdiff_t>(conv1_b_ + c1), 0.0f);
}

std::vector<float> SubGoalNet::encode_map(const grid::CostMap& map) const {
  std::vector<float> pooled(static_cast<std::size_t>(pw_ * ph_), 0.0f);
  for (int y = 0; y < map.height(); ++y) {
    for (int x = 0; x < map.width(); ++x) {
      float& cell = pooled[static_cast<std::size_t>((y / cfg_.downsample) * pw_ + x / cfg_.downsample)];
      cell = std::max(cell, static_cast<float>(map.at(grid::CellIndex{x, y})));
    }
  }
  return pooled;
}

std::array<float, 2> SubGoalNet::encode_goal(const grid::CostMap& map, const Point2& goal) {
  const Point2 rel = goal - map.center();
  return {static_cast<float>(rel.x() / (map.extent_x() / 2.0)),
          static_cast<float>(rel.y() / (map.extent_y() / 2.0))};
}

const std::array<float, SubGoalNet::kOutputs>& SubGoalNet::forward(
    const float* pooled, const std::array<float, 2>& goal, Workspace& ws) const {
  const int c1 = cfg_.conv1_channels;
  const int c2 = cfg_.conv2_channels;
  const int e = cfg_.goal_embedding;
  const int h = cfg_.hidden;
  const float* p = params_.data();
  ws.input = pooled;
  ws.goal = goal;
  ws.conv1.resize(static_cast<std::size_t>(c1 * h1_ * w1_));
  ws.conv2.resize(static_cast<std::size_t>(c2 * h2_ * w2_));
  ws.embed.resize(static_cast<std::size_t>(e));
  ws.concat.resize(static_cast<std::size_t>(features_));
  ws.hidden.resize(static_cast<std::size_t>(h));

  conv_forward(pooled, 1, ph_, pw_, p + conv1_w_, p + conv1_b_, c1, h1_, w1_, ws.conv1.data());
  conv_forward(ws.conv1.data(), c1, h1_, w1_, p + conv2_w_, p + conv2_b_, c2, h2_, w2_,
               ws.conv2.data());
  for (int i = 0; i < e; ++i) {
    const float v = p[goal_b_ + i] + p[goal_w_ + 2 * i] * goal[0] + p[goal_w_ + 2 * i + 1] * goal[1];
    ws.embed[static_cast<std::size_t>(i)] = std::max(v, 0.0f);
  }
  std::copy(ws.conv2.begin(), ws.conv2.end(), ws.concat.begin());
  std::copy(ws.embed.begin(), ws.embed.end(),
            ws.concat.begin() + static_cast<std::ptrdiff_t>(ws.conv2.size()));
  for (int j = 0; j < h; ++j) {
    const float* row = p + fc1_w_ + static_cast<std::size_t>(j) * features_;
    float acc = p[fc1_b_ + j];
    for (int i = 0; i < features_; ++i) {
      acc += row[i] * ws.concat[static_cast<std::size_t>(i)];
    }
    ws.hidden[static_cast<std::size_t>(j)] = std::max(acc, 0.0f);
  }
  for (int k = 0; k < kOutputs; ++k) {
    const float* row = p + fc2_w_ + static_cast<std::size_t>(k) * h;
    float acc = p[fc2_b_ + k];
    for (int j = 0; j < h; ++j) {
      acc += row[j] * ws.hidden[static_cast<std::size_t>(j)];
    }
    ws.out[static_cast<std::size_t>(k)] = acc;
  }
  return ws.out;
}

void SubGoalNet::backward(Workspace& ws, const std::array<float, kOutputs>& d_out,
                          std::span<float> grad) const {
  const int c1 = cfg_.conv1_channels;
  const int c2 = cfg_.conv2_channels;
  const int e = cfg_.goal_embedding;
  const int h = cfg_.hidden;
  const float* p = params_.data();
  float* g = grad.data();

  std::vector<float> d_hidden(static_cast<std::size_t>(h), 0.0f);
  for (int k = 0; k < kOutputs; ++k) {
    const float dk = d_out[static_cast<std::size_t>(k)];
    g[fc2_b_ + k] += dk;
    float* grow = g + fc2_w_ + static_cast<std::size_t>(k) * h;
    const float* row = p + fc2_w_ + static_cast<std::size_t>(k) * h;
    for (int j = 0; j < h; ++j) {
      grow[j] += dk * ws.hidden[static_cast<std::size_t>(j)];
      d_hidden[static_cast<std::size_t>(j)] += dk * row[j];
    }
  }
  ws.d_concat.assign(static_cast<std::size_t>(features_), 0.0f);
  for (int j = 0; j < h; ++j) {
    if (ws.hidden[static_cast<std::size_t>(j)] <= 0.0f) {
      continue;
    }
    const float dj = d_hidden[static_cast<std::size_t>(j)];
    g[fc1_b_ + j] += dj;
    float* grow = g + fc1_w_ + static_cast<std::size_t>(j) * features_;
    const float* row = p + fc1_w_ + static_cast<std::size_t>(j) * features_;
    for (int i = 0; i < features_; ++i) {
      grow[i] += dj * ws.concat[static_cast<std::size_t>(i)];
      ws.d_concat[static_cast<std::size_t>(i)] += dj * row[i];
    }
  }
  const std::size_t conv_features = ws.conv2.size();
  for (int i = 0; i < e; ++i) {
    if (ws.embed[static_cast<std::size_t>(i)] <= 0.0f) {
      continue;
    }
    const float di = ws.d_concat[conv_features + static_cast<std::size_t>(i)];
    g[goal_b_ + i] += di;
    g[goal_w_ + 2 * i] += di * ws.goal[0];
    g[goal_w_ + 2 * i + 1] += di * ws.goal[1];
  }
  ws.d_conv1.assign(ws.conv1.size(), 0.0f);
  conv_backward(ws.conv1.data(), c1, h1_, w1_, p + conv2_w_, ws.conv2.data(), ws.d_concat.data(),
                c2, h2_, w2_, g + conv2_w_, g + conv2_b_, ws.d_conv1.data());
  conv_backward(ws.input, 1, ph_, pw_, p + conv1_w_, ws.conv1.data(), ws.d_conv1.data(), c1, h1_,
                w1_, g + conv1_w_, g + conv1_b_, nullptr);
}

}  // namespace ddpen::subgoal
