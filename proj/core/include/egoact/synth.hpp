#pragma once

#include <Eigen/Core>
#include <cstdint>

#include "egoact/dataset.hpp"

namespace egoact {

// Where the class-discriminative signal is embedded in each frame.
enum class Placement { Primary, SecondaryOnly, Both };

struct IntRange {
  int lo = 1;
  int hi = 1;
};

struct SynthConfig {
  int num_actions = 4;
  int feature_dim = 8;
  IntRange frames_per_shot{3, 6};
  IntRange shots_per_sequence{2, 5};
  int num_sequences = 8;
  int num_subjects = 2;
  double noise_sigma = 0.1;
  int num_distractor_secondaries = 3;
  Placement placement = Placement::Primary;
  Eigen::MatrixXd transition;  // A x A row-stochastic; empty means uniform
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError
};

// Unit-norm action prototypes drawn from the seed, re-sampled until all
// pairwise dot products are below 0.5. Column alpha is the prototype of
// action alpha. Exposed so tests can check the zero-noise case directly.
Eigen::MatrixXd action_prototypes(int num_actions, int feature_dim, std::uint64_t seed);

// Deterministic synthetic dataset: shot labels follow the transition matrix,
// each labeled frame carries prototype + N(0, sigma^2) in the location(s)
// selected by `placement`, and every other secondary is a pure noise
// distractor with per-coordinate scale 1/sqrt(D).
Dataset synth_generate(const SynthConfig& config);

Placement placement_from_string(const std::string& name);
std::string placement_to_string(Placement placement);

}  // namespace egoact
