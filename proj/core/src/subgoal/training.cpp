#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <unordered_map>

#include "ddpen/common.hpp"
#include "ddpen/subgoal/approximator.hpp"

namespace ddpen::subgoal {
namespace {

using Clock = std::chrono::steady_clock;

struct Sample {
  const float* pooled = nullptr;
  std::array<float, 2> goal{};
  std::array<float, SubGoalNet::kOutputs> target{};
  std::array<Point2, 3> baseline;
  const planner::DatasetRecord* record = nullptr;
};

double median(std::vector<double> v) {
  if (v.empty()) {
    return 0.0;
  }
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  double m = v[mid];
  if (v.size() % 2 == 0) {
    m = 0.5 * (m + *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid)));
  }
  return m;
}

double mean_subgoal_error(const std::array<Point2, 3>& a, const std::vector<Point2>& b) {
  double e = 0.0;
  for (std::size_t i = 0; i < 3; ++i) {
    e += (a[i] - b.at(std::min(i, b.size() - 1))).norm();
  }
  return e / 3.0;
}

std::array<Point2, 3> decode(const std::array<float, SubGoalNet::kOutputs>& out,
                             const std::array<Point2, 3>& baseline, const grid::CostMap& map,
                             double hx, double hy) {
  std::array<Point2, 3> p;
  for (std::size_t i = 0; i < 3; ++i) {
    p[i] = clip_to_extent(map, baseline[i] + Point2(out[2 * i] * hx, out[2 * i + 1] * hy));
  }
  return p;
}

struct Adam {
  explicit Adam(std::size_t n, double lr) : m(n, 0.0), v(n, 0.0), lr(lr) {}

  void step(std::span<float> params, const std::vector<float>& grad, double scale) {
    ++t;
    const double b1t = 1.0 - std::pow(kBeta1, t);
    const double b2t = 1.0 - std::pow(kBeta2, t);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double g = grad[i] * scale;
      m[i] = kBeta1 * m[i] + (1.0 - kBeta1) * g;
      v[i] = kBeta2 * v[i] + (1.0 - kBeta2) * g * g;
      const double mh = m[i] / b1t;
      const double vh = v[i] / b2t;
      params[i] -= static_cast<float>(lr * mh / (std::sqrt(vh) + kEps));
    }
  }

  static constexpr double kBeta1 = 0.9;
  static constexpr double kBeta2 = 0.999;
  static constexpr double kEps = 1e-8;
  std::vector<double> m, v;
  double lr;
  int t = 0;
};

}  // namespace

void ApproximatorConfig::validate() const {
  if (downsample < 1 || conv1_channels < 1 || conv2_channels < 1 || goal_embedding < 1 ||
      hidden < 1 || batch_size < 1 || epochs < 1) {
    throw std::invalid_argument("ApproximatorConfig: sizes must be positive");
  }
  if (!(learning_rate > 0.0)) {
    throw std::invalid_argument("ApproximatorConfig: learning_rate must be positive");
  }
  if (!(validation_fraction > 0.0 && validation_fraction < 1.0)) {
    throw std::invalid_argument("ApproximatorConfig: validation_fraction must be in (0, 1)");
  }
}

void split_records(std::size_t count, const ApproximatorConfig& config,
                   std::vector<std::size_t>& train, std::vector<std::size_t>& validation) {
  std::vector<std::size_t> order(count);
  std::iota(order.begin(), order.end(), std::size_t{0});
  Rng rng(config.split_seed);
  for (std::size_t i = count; i > 1; --i) {
    const auto j = static_cast<std::size_t>(rng.uniform_int(0, static_cast<std::int64_t>(i - 1)));
    std::swap(order[i - 1], order[j]);
  }
  const auto n_val = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::llround(config.validation_fraction * count)));
  validation.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(n_val));
  train.assign(order.begin() + static_cast<std::ptrdiff_t>(n_val), order.end());
  std::sort(validation.begin(), validation.end());
  std::sort(train.begin(), train.end());
}

TrainingReport train_approximator(const std::vector<planner::DatasetRecord>& records,
                                  const ApproximatorConfig& config) {
  config.validate();
  if (records.size() < config.min_records) {
    throw TrainingError("train_approximator: need at least " + std::to_string(config.min_records) +
                        " records, got " + std::to_string(records.size()));
  }
  const grid::CostMap& first = *records.front().map;
  for (const auto& r : records) {
    if (r.map->width() != first.width() || r.map->height() != first.height()) {
      throw TrainingError("train_approximator: records have mixed map sizes");
    }
  }

  TrainingReport report;
  Checkpoint& ckpt = report.checkpoint;
  ckpt.config = config;
  ckpt.map_width = first.width();
  ckpt.map_height = first.height();
  ckpt.resolution = first.resolution();
  ckpt.half_extent_x = first.extent_x() / 2.0;
  ckpt.half_extent_y = first.extent_y() / 2.0;
  const double hx = ckpt.half_extent_x;
  const double hy = ckpt.half_extent_y;

  SubGoalNet net(config, ckpt.map_width, ckpt.map_height);
  net.initialize(config.seed);

  // Pool each distinct map once.
  std::unordered_map<const grid::CostMap*, std::vector<float>> pooled;
  const BaselineProvider baseline;
  std::vector<Sample> samples(records.size());
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    auto it = pooled.find(r.map.get());
    if (it == pooled.end()) {
      it = pooled.emplace(r.map.get(), net.encode_map(*r.map)).first;
    }
    Sample& s = samples[i];
    s.record = &r;
    s.pooled = it->second.data();
    s.goal = SubGoalNet::encode_goal(*r.map, r.goal);
    s.baseline = baseline.points(*r.map, r.goal);
    for (std::size_t k = 0; k < 3; ++k) {
      const Point2& t = r.subgoals.positions.at(std::min(k, r.subgoals.positions.size() - 1));
      s.target[2 * k] = static_cast<float>((t.x() - s.baseline[k].x()) / hx);
      s.target[2 * k + 1] = static_cast<float>((t.y() - s.baseline[k].y()) / hy);
    }
  }
  split_records(records.size(), config, report.train_indices, report.validation_indices);

  SubGoalNet::Workspace ws;
  auto validation_mse = [&]() {
    double sum = 0.0;
    for (const std::size_t i : report.validation_indices) {
      const auto& out = net.forward(samples[i].pooled, samples[i].goal, ws);
      for (int k = 0; k < SubGoalNet::kOutputs; ++k) {
        const double d = out[k] - samples[i].target[k];
        sum += d * d;
      }
    }
    return sum / static_cast<double>(report.validation_indices.size() * SubGoalNet::kOutputs);
  };

  double best = validation_mse();
  report.validation_curve.push_back(best);
  std::vector<float> best_weights(net.parameters().begin(), net.parameters().end());
  int best_epoch = -1;

  Adam adam(net.parameter_count(), config.learning_rate);
  std::vector<float> grad(net.parameter_count());
  std::vector<std::size_t> order = report.train_indices;
  Rng shuffle(derive_seed(config.seed, 1));
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = order.size(); i > 1; --i) {
      const auto j =
          static_cast<std::size_t>(shuffle.uniform_int(0, static_cast<std::int64_t>(i - 1)));
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t b = 0; b < order.size(); b += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t end = std::min(order.size(), b + static_cast<std::size_t>(config.batch_size));
      std::fill(grad.begin(), grad.end(), 0.0f);
      for (std::size_t n = b; n < end; ++n) {
        const Sample& s = samples[order[n]];
        const auto& out = net.forward(s.pooled, s.goal, ws);
        std::array<float, SubGoalNet::kOutputs> d_out;
        for (int k = 0; k < SubGoalNet::kOutputs; ++k) {
          d_out[k] = 2.0f * (out[k] - s.target[k]) / SubGoalNet::kOutputs;
        }
        net.backward(ws, d_out, grad);
      }
      adam.step(net.parameters(), grad, 1.0 / static_cast<double>(end - b));
    }
    const double mse = validation_mse();
    report.validation_curve.push_back(mse);
    if (mse < best) {
      best = mse;
      best_epoch = epoch;
      best_weights.assign(net.parameters().begin(), net.parameters().end());
    }
  }
  if (best_epoch < 0) {
    throw TrainingError("train_approximator: validation loss never improved over " +
                        std::to_string(config.epochs) + " epochs");
  }
  net.set_parameters(best_weights);

  std::vector<double> learned_err;
  std::vector<double> baseline_err;
  for (const std::size_t i : report.validation_indices) {
    const Sample& s = samples[i];
    const auto& out = net.forward(s.pooled, s.goal, ws);
    const auto& map = *s.record->map;
    learned_err.push_back(
        mean_subgoal_error(decode(out, s.baseline, map, hx, hy), s.record->subgoals.positions));
    baseline_err.push_back(mean_subgoal_error(s.baseline, s.record->subgoals.positions));
  }
  ckpt.validation_mse = best;
  ckpt.validation_median_error_m = median(learned_err);
  ckpt.baseline_median_error_m = median(baseline_err);
  ckpt.best_epoch = best_epoch;
  ckpt.weights = std::move(best_weights);
  return report;
}

LearnedProvider::LearnedProvider(Checkpoint ckpt)
    : ckpt_(std::move(ckpt)), net_(ckpt_.config, ckpt_.map_width, ckpt_.map_height) {
  net_.set_parameters(ckpt_.weights);
}

SubGoalPrediction LearnedProvider::predict(const SubGoalQuery& query) const {
  const auto t0 = Clock::now();
  const grid::CostMap& map = query.map;
  if (map.width() != ckpt_.map_width || map.height() != ckpt_.map_height) {
    throw CheckpointError("LearnedProvider: checkpoint expects " +
                          std::to_string(ckpt_.map_width) + "x" + std::to_string(ckpt_.map_height) +
                          " maps, got " + std::to_string(map.width()) + "x" +
                          std::to_string(map.height()));
  }
  const std::vector<float> pooled = net_.encode_map(map);
  SubGoalNet::Workspace ws;
  const auto& out = net_.forward(pooled.data(), SubGoalNet::encode_goal(map, query.goal), ws);
  SubGoalPrediction p;
  p.provider = name();
  p.positions = decode(out, baseline_.points(map, query.goal), map, ckpt_.half_extent_x,
                       ckpt_.half_extent_y);
  p.latency_s = std::chrono::duration<double>(Clock::now() - t0).count();
  return p;
}

ProviderEvaluation evaluate_provider(const SubGoalProvider& provider,
                                     const std::vector<planner::DatasetRecord>& records,
                                     const std::vector<std::size_t>& indices) {
  std::vector<std::size_t> which = indices;
  if (which.empty()) {
    which.resize(records.size());
    std::iota(which.begin(), which.end(), std::size_t{0});
  }
  ProviderEvaluation ev;
  std::vector<double> errors;
  std::vector<double> latencies;
  for (const std::size_t i : which) {
    const auto& r = records.at(i);
    const SubGoalPrediction p = provider.predict({*r.map, r.goal});
    const double e = mean_subgoal_error(p.positions, r.subgoals.positions);
    bool exact = true;
    for (std::size_t k = 0; k < 3; ++k) {
      exact = exact && p.positions[k] == r.subgoals.positions.at(
                                             std::min(k, r.subgoals.positions.size() - 1));
    }
    ev.exact_matches += exact ? 1 : 0;
    errors.push_back(e);
    latencies.push_back(p.latency_s);
  }
  ev.records = which.size();
  if (!errors.empty()) {
    ev.mean_error_m = std::accumulate(errors.begin(), errors.end(), 0.0) / errors.size();
  }
  ev.median_error_m = median(std::move(errors));
  ev.median_latency_s = median(std::move(latencies));
  return ev;
}

}  // namespace ddpen::subgoal
