#include "egoact/scorer.hpp"

#include <algorithm>
#include <cmath>

namespace egoact {

ScorerParams ScorerParams::zeros(int num_actions, int feature_dim) {
  ScorerParams p;
  p.W_p = Eigen::MatrixXd::Zero(num_actions, feature_dim);
  p.W_z = Eigen::MatrixXd::Zero(num_actions, feature_dim);
  p.b = Eigen::VectorXd::Zero(num_actions);
  return p;
}

ScorerParams ScorerParams::init(int num_actions, int feature_dim, Rng& rng) {
  ScorerParams p = zeros(num_actions, feature_dim);
  for (int a = 0; a < num_actions; ++a)
    for (int d = 0; d < feature_dim; ++d) p.W_p(a, d) = rng.uniform(-0.01, 0.01);
  for (int a = 0; a < num_actions; ++a)
    for (int d = 0; d < feature_dim; ++d) p.W_z(a, d) = rng.uniform(-0.01, 0.01);
  return p;
}

Eigen::VectorXd softmax(const Eigen::VectorXd& scores) {
  const double m = scores.maxCoeff();
  Eigen::VectorXd e = (scores.array() - m).exp();
  return e / e.sum();
}

ScorerOutput score(const ScorerParams& params, const FrameSample& frame,
                   std::span<const int> candidates) {
  const int A = params.num_actions();
  if (frame.primary.size() != params.feature_dim())
    throw ValidationError("score: primary feature dimension mismatch");
  if (candidates.empty()) throw ValidationError("score: empty candidate set");

  ScorerOutput out;
  out.scores.resize(A);
  out.argmax_secondary.resize(A);

  const Eigen::VectorXd primary = frame.primary.cast<double>();
  // Secondary dot products for the candidate set, one column per candidate.
  Eigen::MatrixXd sec_scores(A, static_cast<Eigen::Index>(candidates.size()));
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const int z = candidates[i];
    if (z < 0 || z >= static_cast<int>(frame.secondaries.size()))
      throw ValidationError("score: candidate index out of range");
    if (frame.secondaries[z].size() != params.feature_dim())
      throw ValidationError("score: secondary feature dimension mismatch");
    sec_scores.col(static_cast<Eigen::Index>(i)) =
        params.W_z * frame.secondaries[z].cast<double>();
  }
  const Eigen::VectorXd primary_part = params.W_p * primary + params.b;
  for (int a = 0; a < A; ++a) {
    int best = 0;
    double best_val = sec_scores(a, 0);
    for (Eigen::Index i = 1; i < sec_scores.cols(); ++i)
      if (sec_scores(a, i) > best_val) {  // strict: ties keep the lowest index
        best_val = sec_scores(a, i);
        best = static_cast<int>(i);
      }
    out.scores[a] = primary_part[a] + best_val;
    out.argmax_secondary[a] = candidates[static_cast<std::size_t>(best)];
  }
  out.probs = softmax(out.scores);
  return out;
}

double scorer_loss_and_grad(const ScorerParams& params, std::span<const ScorerBatchItem> batch,
                            ScorerParams& grads) {
  if (batch.empty()) throw ValidationError("loss_and_grad: empty batch");
  const int A = params.num_actions();
  grads.W_p.setZero();
  grads.W_z.setZero();
  grads.b.setZero();

  double loss = 0;
  const double inv_n = 1.0 / static_cast<double>(batch.size());
  for (const ScorerBatchItem& item : batch) {
    const FrameSample& frame = *item.frame;
    const ScorerOutput out = score(params, frame, item.candidates);
    loss -= std::log(std::max(out.probs[frame.label], 1e-300));
    // d loss / d scores = probs - onehot(label), averaged over the batch.
    Eigen::VectorXd dscores = out.probs * inv_n;
    dscores[frame.label] -= inv_n;
    const Eigen::VectorXd primary = frame.primary.cast<double>();
    grads.b += dscores;
    grads.W_p += dscores * primary.transpose();
    // The max contributes gradient only through each action's argmax region.
    for (int a = 0; a < A; ++a)
      grads.W_z.row(a) +=
          dscores[a] * frame.secondaries[out.argmax_secondary[a]].cast<double>().transpose();
  }
  return loss * inv_n;
}

std::vector<int> sample_secondaries(const FrameSample& frame, int k, Rng& rng) {
  const int n = static_cast<int>(frame.secondaries.size());
  if (k < 1) throw ConfigError("sample_secondaries: K must be >= 1");
  if (k >= n) {
    std::vector<int> all(n);
    for (int i = 0; i < n; ++i) all[i] = i;
    return all;
  }
  // Partial Fisher-Yates over an index pool, then sorted for determinism.
  std::vector<int> pool(n);
  for (int i = 0; i < n; ++i) pool[i] = i;
  for (int i = 0; i < k; ++i) {
    const int j = i + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - i)));
    std::swap(pool[i], pool[j]);
  }
  std::vector<int> out(pool.begin(), pool.begin() + k);
  std::sort(out.begin(), out.end());
  return out;
}

void ScorerTrainConfig::validate() const {
  if (learning_rate < 0) throw ConfigError("learning_rate must be >= 0");
  if (momentum < 0 || momentum >= 1) throw ConfigError("momentum must be in [0, 1)");
  if (decay_factor <= 0 || decay_factor > 1) throw ConfigError("decay_factor must be in (0, 1]");
  if (decay_interval < 1) throw ConfigError("decay_interval must be >= 1");
  if (batch_size < 1) throw ConfigError("batch_size must be >= 1");
  if (num_sampled_secondaries < 1) throw ConfigError("num_sampled_secondaries must be >= 1");
  if (max_iterations < 0) throw ConfigError("max_iterations must be >= 0");
}

namespace {

std::vector<const FrameSample*> flatten_frames(const Dataset& dataset) {
  std::vector<const FrameSample*> frames;
  for (const Sequence& seq : dataset.sequences)
    for (const Shot& shot : seq.shots)
      for (const FrameSample& f : shot.frames) frames.push_back(&f);
  return frames;
}

}  // namespace

ScorerTrainResult train_frame_model(const Dataset& train, const ScorerTrainConfig& config) {
  config.validate();
  train.validate();
  const int A = train.num_actions();
  const int D = train.feature_dim;
  const std::vector<const FrameSample*> frames = flatten_frames(train);
  if (frames.empty()) throw ValidationError("train_frame_model: dataset has no frames");

  Rng init_rng = Rng(config.seed).derive("scorer-init");
  ScorerTrainResult result;
  result.params = ScorerParams::init(A, D, init_rng);
  if (config.freeze_secondary) result.params.W_z.setZero();
  result.initial = result.params;

  ScorerParams grads = ScorerParams::zeros(A, D);
  ScorerParams velocity = ScorerParams::zeros(A, D);
  Rng epoch_rng = Rng(config.seed).derive("scorer-epochs");

  std::vector<ScorerBatchItem> order(frames.size());
  int iteration = 0;
  while (iteration < config.max_iterations) {
    // New epoch: shuffle frame order and re-sample candidate subsets.
    for (std::size_t i = 0; i < frames.size(); ++i) {
      order[i].frame = frames[i];
      order[i].candidates =
          sample_secondaries(*frames[i], config.num_sampled_secondaries, epoch_rng);
    }
    for (std::size_t i = frames.size(); i > 1; --i) {
      const std::size_t j = epoch_rng.below(i);
      std::swap(order[i - 1], order[j]);
    }
    for (std::size_t start = 0; start < order.size() && iteration < config.max_iterations;
         start += config.batch_size) {
      const std::size_t end = std::min(order.size(), start + config.batch_size);
      const double lr = config.learning_rate *
                        std::pow(config.decay_factor, iteration / config.decay_interval);
      const double loss = scorer_loss_and_grad(
          result.params, std::span(order.data() + start, end - start), grads);

      velocity.W_p = config.momentum * velocity.W_p - lr * grads.W_p;
      velocity.b = config.momentum * velocity.b - lr * grads.b;
      result.params.W_p += velocity.W_p;
      result.params.b += velocity.b;
      if (!config.freeze_secondary) {
        velocity.W_z = config.momentum * velocity.W_z - lr * grads.W_z;
        result.params.W_z += velocity.W_z;
      }
      ++iteration;
      result.history.push_back({iteration, lr, loss});
    }
  }
  return result;
}

std::vector<ScorerOutput> predict_dataset(const ScorerParams& params, const Dataset& dataset,
                                          bool use_all_secondaries, int k,
                                          std::uint64_t sample_seed) {
  std::vector<ScorerOutput> outputs;
  Rng rng = Rng(sample_seed).derive("predict");
  std::vector<int> all;
  for (const Sequence& seq : dataset.sequences)
    for (const Shot& shot : seq.shots)
      for (const FrameSample& f : shot.frames) {
        if (use_all_secondaries) {
          all.resize(f.secondaries.size());
          for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
          outputs.push_back(score(params, f, all));
        } else {
          outputs.push_back(score(params, f, sample_secondaries(f, k, rng)));
        }
      }
  return outputs;
}

double frame_accuracy_on(const ScorerParams& params, const Dataset& dataset) {
  std::size_t correct = 0, total = 0;
  for (const Sequence& seq : dataset.sequences)
    for (const Shot& shot : seq.shots)
      for (const FrameSample& f : shot.frames) {
        std::vector<int> all(f.secondaries.size());
        for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
        const ScorerOutput out = score(params, f, all);
        int pred = 0;
        out.scores.maxCoeff(&pred);
        correct += (pred == f.label);
        ++total;
      }
  return total ? static_cast<double>(correct) / static_cast<double>(total) : 0.0;
}

}  // namespace egoact
