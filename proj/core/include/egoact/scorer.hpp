#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "egoact/dataset.hpp"
#include "egoact/rng.hpp"

namespace egoact {

// Frame-level action model: per action alpha the score is
//   f(alpha) = w_p[alpha] . primary + b[alpha] + max_z w_z[alpha] . secondary_z
// with the max taken over a candidate subset of the frame's secondary
// regions. Probabilities are the softmax of the scores.
struct ScorerParams {
  Eigen::MatrixXd W_p;  // A x D, row alpha scores the primary region
  Eigen::MatrixXd W_z;  // A x D, row alpha scores secondary regions
  Eigen::VectorXd b;    // A

  int num_actions() const { return static_cast<int>(W_p.rows()); }
  int feature_dim() const { return static_cast<int>(W_p.cols()); }

  static ScorerParams zeros(int num_actions, int feature_dim);
  // Weights i.i.d. uniform in [-0.01, 0.01], biases zero.
  static ScorerParams init(int num_actions, int feature_dim, Rng& rng);
};

struct ScorerOutput {
  Eigen::VectorXd scores;            // A
  Eigen::VectorXd probs;             // A, softmax of scores
  std::vector<int> argmax_secondary; // per action, index into frame.secondaries
};

Eigen::VectorXd softmax(const Eigen::VectorXd& scores);

ScorerOutput score(const ScorerParams& params, const FrameSample& frame,
                   std::span<const int> candidates);

struct ScorerBatchItem {
  const FrameSample* frame = nullptr;
  std::vector<int> candidates;
};

// Mean softmax cross-entropy over the batch and its exact subgradient
// (argmax secondaries fixed at the forward pass). Gradients are written into
// `grads`, which must already have the parameter shapes.
double scorer_loss_and_grad(const ScorerParams& params, std::span<const ScorerBatchItem> batch,
                            ScorerParams& grads);

// Uniform sample without replacement of min(K, #secondaries) indices,
// ascending order.
std::vector<int> sample_secondaries(const FrameSample& frame, int k, Rng& rng);

struct ScorerTrainConfig {
  double learning_rate = 2e-4;
  double momentum = 0.9;
  double decay_factor = 0.1;
  int decay_interval = 30000;  // iterations between learning-rate steps
  int batch_size = 10;
  int num_sampled_secondaries = 10;  // K candidates per frame per epoch
  int max_iterations = 1000;
  std::uint64_t seed = 0;
  bool freeze_secondary = false;  // ablation: W_z held at zero

  void validate() const;
};

struct TrainRecord {
  int iteration = 0;
  double lr = 0;
  double loss = 0;
};

struct ScorerTrainResult {
  ScorerParams params;
  ScorerParams initial;
  std::vector<TrainRecord> history;  // one record per iteration
};

// SGD with classical momentum and step learning-rate decay. Frame order and
// candidate subsets are re-drawn each epoch from the config seed; results are
// bit-reproducible for equal inputs.
ScorerTrainResult train_frame_model(const Dataset& train, const ScorerTrainConfig& config);

// Frame predictions over a dataset in storage order. When use_all_secondaries
// is false, candidates are min(K, all) indices sampled from `sample_seed`.
std::vector<ScorerOutput> predict_dataset(const ScorerParams& params, const Dataset& dataset,
                                          bool use_all_secondaries, int k = 10,
                                          std::uint64_t sample_seed = 0);

// Fraction of frames whose argmax score matches the ground truth.
double frame_accuracy_on(const ScorerParams& params, const Dataset& dataset);

}  // namespace egoact
