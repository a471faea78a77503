#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <span>
#include <vector>

#include "egoact/probs.hpp"
#include "egoact/rng.hpp"

namespace egoact {

// One LSTM layer. Gate weights act on the concatenated [input; hidden]
// vector: standard cell with sigmoid input/forget/output gates and tanh
// candidate and output squashing.
struct LstmLayerParams {
  int input_dim = 0;
  int hidden_dim = 0;
  Eigen::MatrixXd W_i, W_f, W_o, W_g;  // each H x (input_dim + H)
  Eigen::VectorXd b_i, b_f, b_o, b_g;  // each H

  static LstmLayerParams zeros(int input_dim, int hidden_dim);
  // Uniform weights in [-0.08, 0.08]; forget bias starts at 1.
  static LstmLayerParams init(int input_dim, int hidden_dim, Rng& rng);
};

struct HeadParams {
  Eigen::MatrixXd W;  // A x H
  Eigen::VectorXd b;  // A

  static HeadParams zeros(int num_actions, int hidden_dim);
  static HeadParams init(int num_actions, int hidden_dim, Rng& rng);
};

// Two-level hierarchy: level 1 runs over every frame of a sequence (state
// carries across shot boundaries), level 2 consumes the level-1 output of
// each shot's last frame. Each level has its own softmax classification head.
struct HlstmParams {
  LstmLayerParams level1;  // input_dim = A
  HeadParams frame_head;
  LstmLayerParams level2;  // input_dim = H
  HeadParams shot_head;

  int num_actions() const { return static_cast<int>(frame_head.W.rows()); }
  int hidden_dim() const { return level1.hidden_dim; }

  static HlstmParams zeros(int num_actions, int hidden_dim);
  static HlstmParams init(int num_actions, int hidden_dim, Rng& rng);
};

struct LstmState {
  Eigen::VectorXd h, c;

  static LstmState zero(int hidden_dim);
};

LstmState lstm_step(const LstmLayerParams& layer, const Eigen::VectorXd& x,
                    const LstmState& state);

// Everything the backward pass needs, cached per step.
struct LstmStepTrace {
  Eigen::VectorXd z;  // [x; h_prev]
  Eigen::VectorXd i, f, o, g;
  Eigen::VectorXd c_prev, c, tanh_c;
};

struct ForwardResult {
  std::vector<Eigen::VectorXd> frame_probs;  // all frames, sequence order
  std::vector<Eigen::VectorXd> shot_probs;   // one per shot
  std::vector<int> shot_last_frame;          // frame index feeding level 2
  std::vector<LstmStepTrace> level1_trace;
  std::vector<LstmStepTrace> level2_trace;
  std::vector<Eigen::VectorXd> level1_h;  // per frame
  std::vector<Eigen::VectorXd> level2_h;  // per shot
};

ForwardResult forward_sequence(const HlstmParams& params, const ProbSequence& seq);

// Composite loss of the hierarchy: (1-beta) * sum of frame cross-entropies +
// beta * sum of shot cross-entropies.
double hlstm_loss(std::span<const Eigen::VectorXd> frame_probs,
                  std::span<const Eigen::VectorXd> shot_probs, std::span<const int> frame_labels,
                  std::span<const int> shot_labels, double beta);

// Exact gradients of hlstm_loss by backpropagation through time across both
// levels. Returns gradients in parameter shape.
HlstmParams backward_sequence(const HlstmParams& params, const ProbSequence& seq,
                              const ForwardResult& fwd, double beta);

struct HlstmTrainConfig {
  double beta = 0.0;
  double learning_rate = 0.05;
  double momentum = 0.9;
  double decay_factor = 0.1;
  int decay_interval = 10000;  // batch updates between learning-rate steps
  int batch_size = 6;          // sequences per update
  int epochs = 10;
  int hidden_dim = 64;
  std::uint64_t seed = 0;

  void validate() const;
};

struct HlstmTrainRecord {
  int epoch = 0;
  double lr = 0;
  double loss_frames = 0;  // L_N summed over the training set
  double loss_shots = 0;   // L_M summed over the training set
  double loss = 0;         // (1-beta) L_N + beta L_M
  double frame_acc = 0;
  double shot_acc = 0;
};

struct HlstmTrainResult {
  HlstmParams params;
  HlstmParams initial;
  std::vector<HlstmTrainRecord> history;  // one record per epoch
};

// Whole-sequence BPTT with momentum SGD and step decay. `init` seeds the
// parameters (phase-2 training from a phase-1 checkpoint); pass nullptr to
// initialize from the config seed.
HlstmTrainResult train_hlstm(std::span<const ProbSequence> train, const HlstmTrainConfig& config,
                             const HlstmParams* init = nullptr);

// Frame-level evaluation modes: Carry feeds the whole sequence through level
// 1 (the training-time protocol), Reset restarts the state at each shot
// boundary (shot-by-shot evaluation).
enum class EvalStateMode { Carry, Reset };

// Per-frame predictions of the level-1 head; level 2 plays no role here.
std::vector<Eigen::VectorXd> hlstm_frame_probs(const HlstmParams& params, const ProbSequence& seq,
                                               EvalStateMode mode);

double hlstm_frame_accuracy(const HlstmParams& params, std::span<const ProbSequence> sequences,
                            EvalStateMode mode);

struct BetaGridRow {
  double beta = 0;
  double train_frame_acc = 0;
  double val_frame_acc = 0;
  double final_loss = 0;
};

struct BetaGridResult {
  double best_beta = 0;
  HlstmParams best_params;
  std::vector<BetaGridRow> rows;
};

// Phase-2 training per beta from the same phase-1 initialization; the beta
// with the highest validation frame accuracy wins (lowest beta on ties).
BetaGridResult beta_grid_search(std::span<const ProbSequence> train,
                                std::span<const ProbSequence> val,
                                const HlstmTrainConfig& base_config,
                                std::span<const double> betas, const HlstmParams& phase1_init);

enum class ShotAggregation { Average, LinearWeighted };

// Shot-level prediction from its frames' probability vectors: plain mean, or
// a linear ramp where frame t of T gets weight (t+1) / sum(t+1). Ties break
// toward the lowest label id.
std::pair<int, Eigen::VectorXd> predict_shot(std::span<const Eigen::VectorXd> frame_probs,
                                             ShotAggregation mode);

}  // namespace egoact
