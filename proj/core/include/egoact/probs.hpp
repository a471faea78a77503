#pragma once

#include <Eigen/Core>
#include <cstdint>
#include <string>
#include <vector>

#include "egoact/dataset.hpp"
#include "egoact/scorer.hpp"

namespace egoact {

// Per-frame action probability vectors grouped shot-by-shot: the interface
// between the frame-level scorer and the temporal model.
struct ProbShot {
  std::vector<Eigen::VectorXd> frame_probs;  // each a length-A simplex vector
  int label = 0;
};

struct ProbSequence {
  std::string id;
  std::string subject;
  std::vector<ProbShot> shots;

  std::size_t num_frames() const;
  std::vector<int> frame_labels() const;  // shot labels replicated per frame
  std::vector<int> shot_labels() const;
};

// Scorer outputs for every frame of the dataset, keeping shot structure.
std::vector<ProbSequence> scorer_probs(const ScorerParams& params, const Dataset& dataset,
                                       bool use_all_secondaries = true, int k = 10,
                                       std::uint64_t sample_seed = 0);

// Synthetic probability sequences for temporal-model benchmarks: labels are
// taken from the dataset, and each frame emits softmax(strength * onehot(c) +
// N(0, jitter^2)) where c is the true label with probability p_correct and a
// uniformly random other label otherwise.
std::vector<ProbSequence> noisy_probs_from_labels(const Dataset& dataset, double p_correct,
                                                  double strength, double jitter,
                                                  std::uint64_t seed);

// Fraction of frames whose input argmax equals the ground truth (the
// "frame level" baseline row of the temporal ablation).
double input_frame_accuracy(const std::vector<ProbSequence>& sequences);

// JSON file round-trip so prediction files can move between pipeline stages.
void save_prob_sequences(const std::vector<ProbSequence>& sequences,
                         const std::filesystem::path& path);
std::vector<ProbSequence> load_prob_sequences(const std::filesystem::path& path);

}  // namespace egoact
