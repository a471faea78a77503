#include "egoact/synth.hpp"

#include <cmath>

#include "egoact/rng.hpp"

namespace egoact {

void SynthConfig::validate() const {
  if (num_actions < 2) throw ConfigError("num_actions must be >= 2");
  if (feature_dim < 1) throw ConfigError("feature_dim must be >= 1");
  if (frames_per_shot.lo < 1 || frames_per_shot.hi < frames_per_shot.lo)
    throw ConfigError("invalid frames_per_shot range");
  if (shots_per_sequence.lo < 1 || shots_per_sequence.hi < shots_per_sequence.lo)
    throw ConfigError("invalid shots_per_sequence range");
  if (num_sequences < 1) throw ConfigError("num_sequences must be >= 1");
  if (num_subjects < 1 || num_subjects > num_sequences)
    throw ConfigError("num_subjects must be in [1, num_sequences]");
  if (noise_sigma < 0) throw ConfigError("noise_sigma must be >= 0");
  if (num_distractor_secondaries < 0) throw ConfigError("num_distractor_secondaries must be >= 0");
  if (placement == Placement::Primary && num_distractor_secondaries < 1)
    throw ConfigError("placement=primary needs at least one distractor secondary");
  if (transition.size() != 0) {
    if (transition.rows() != num_actions || transition.cols() != num_actions)
      throw ConfigError("transition matrix must be A x A");
    for (Eigen::Index r = 0; r < transition.rows(); ++r) {
      if (transition.row(r).minCoeff() < 0) throw ConfigError("transition entries must be >= 0");
      if (std::abs(transition.row(r).sum() - 1.0) > 1e-9)
        throw ConfigError("transition row " + std::to_string(r) + " does not sum to 1");
    }
  }
}

Eigen::MatrixXd action_prototypes(int num_actions, int feature_dim, std::uint64_t seed) {
  Rng rng = Rng(seed).derive("prototypes");
  Eigen::MatrixXd protos(feature_dim, num_actions);
  constexpr int kMaxDraws = 20000;
  for (int a = 0; a < num_actions; ++a) {
    int attempts = 0;
    for (;;) {
      if (++attempts > kMaxDraws)
        throw ConfigError("cannot place " + std::to_string(num_actions) +
                          " separable prototypes in dimension " + std::to_string(feature_dim));
      Eigen::VectorXd v(feature_dim);
      for (int d = 0; d < feature_dim; ++d) v[d] = rng.normal();
      const double norm = v.norm();
      if (norm < 1e-12) continue;
      v /= norm;
      bool ok = true;
      for (int b = 0; b < a && ok; ++b)
        if (protos.col(b).dot(v) >= 0.5) ok = false;
      if (ok) {
        protos.col(a) = v;
        break;
      }
    }
  }
  return protos;
}

namespace {

FeatureVector noise_vector(int dim, double scale, Rng& rng) {
  FeatureVector v(dim);
  for (int d = 0; d < dim; ++d) v[d] = static_cast<float>(scale * rng.normal());
  return v;
}

FeatureVector signal_vector(const Eigen::VectorXd& proto, double sigma, Rng& rng) {
  FeatureVector v(static_cast<int>(proto.size()));
  for (Eigen::Index d = 0; d < proto.size(); ++d)
    v[d] = static_cast<float>(proto[d] + sigma * rng.normal());
  return v;
}

int sample_row(const Eigen::MatrixXd& transition, int prev, int num_actions, Rng& rng) {
  if (transition.size() == 0) return static_cast<int>(rng.below(num_actions));
  const double u = rng.uniform();
  double acc = 0.0;
  for (int a = 0; a < num_actions; ++a) {
    acc += transition(prev, a);
    if (u < acc) return a;
  }
  return num_actions - 1;
}

}  // namespace

Dataset synth_generate(const SynthConfig& config) {
  config.validate();
  const int A = config.num_actions;
  const int D = config.feature_dim;
  const Eigen::MatrixXd protos = action_prototypes(A, D, config.seed);
  const double distractor_scale = 1.0 / std::sqrt(static_cast<double>(D));

  Dataset ds;
  ds.feature_dim = D;
  for (int a = 0; a < A; ++a)
    ds.actions.push_back({a, "verb" + std::to_string(a), "object" + std::to_string(a)});

  Rng rng = Rng(config.seed).derive("frames");
  for (int s = 0; s < config.num_sequences; ++s) {
    Sequence seq;
    char buf[16];
    std::snprintf(buf, sizeof(buf), "seq%03d", s);
    seq.id = buf;
    seq.subject = "subject" + std::to_string(s % config.num_subjects);
    const int num_shots = rng.int_in(config.shots_per_sequence.lo, config.shots_per_sequence.hi);
    int label = static_cast<int>(rng.below(A));
    for (int j = 0; j < num_shots; ++j) {
      if (j > 0) label = sample_row(config.transition, label, A, rng);
      Shot shot;
      shot.label = label;
      const int num_frames = rng.int_in(config.frames_per_shot.lo, config.frames_per_shot.hi);
      for (int f = 0; f < num_frames; ++f) {
        FrameSample frame;
        frame.label = label;
        const bool in_primary =
            config.placement == Placement::Primary || config.placement == Placement::Both;
        const bool in_secondary =
            config.placement == Placement::SecondaryOnly || config.placement == Placement::Both;
        frame.primary = in_primary ? signal_vector(protos.col(label), config.noise_sigma, rng)
                                   : noise_vector(D, distractor_scale, rng);
        const int num_secondaries = config.num_distractor_secondaries + (in_secondary ? 1 : 0);
        const int signal_pos = in_secondary ? static_cast<int>(rng.below(num_secondaries)) : -1;
        for (int z = 0; z < num_secondaries; ++z)
          frame.secondaries.push_back(z == signal_pos
                                          ? signal_vector(protos.col(label), config.noise_sigma, rng)
                                          : noise_vector(D, distractor_scale, rng));
        shot.frames.push_back(std::move(frame));
      }
      seq.shots.push_back(std::move(shot));
    }
    ds.sequences.push_back(std::move(seq));
  }
  ds.validate();
  return ds;
}

Placement placement_from_string(const std::string& name) {
  if (name == "primary") return Placement::Primary;
  if (name == "secondary_only") return Placement::SecondaryOnly;
  if (name == "both") return Placement::Both;
  throw ConfigError("unknown placement '" + name + "'");
}

std::string placement_to_string(Placement placement) {
  switch (placement) {
    case Placement::Primary: return "primary";
    case Placement::SecondaryOnly: return "secondary_only";
    case Placement::Both: return "both";
  }
  return "?";
}

}  // namespace egoact
