#pragma once

#include <Eigen/Core>
#include <filesystem>
#include <string>
#include <vector>

#include "egoact/errors.hpp"

namespace egoact {

struct ActionLabel {
  int id = 0;
  std::string verb;
  std::string object;

  bool operator==(const ActionLabel&) const = default;
};

// Feature vectors are stored in single precision: the dataset schema is f32
// and 9 significant decimal digits round-trip binary32 exactly.
using FeatureVector = Eigen::VectorXf;

struct FrameSample {
  FeatureVector primary;
  std::vector<FeatureVector> secondaries;  // never empty in a valid dataset
  int label = 0;
};

struct Shot {
  std::vector<FrameSample> frames;
  int label = 0;
};

struct Sequence {
  std::string id;
  std::string subject;
  std::vector<Shot> shots;

  // Ground-truth action ids of the shots in order.
  std::vector<int> shot_labels() const;
};

struct Dataset {
  std::vector<ActionLabel> actions;
  std::vector<Sequence> sequences;
  int feature_dim = 0;

  int num_actions() const { return static_cast<int>(actions.size()); }
  std::size_t num_frames() const;
  std::size_t num_shots() const;
  std::vector<std::string> subjects() const;  // distinct, in first-seen order

  // Checks every invariant (dense action ids, unique verb/object pairs,
  // label ranges, feature dimensions, non-empty shots and secondaries).
  // Throws ValidationError naming the offending element.
  void validate() const;
};

bool dataset_equal(const Dataset& a, const Dataset& b);

// JSON-lines serialization. Line 0 is the header
//   {"actions": [{"id": int, "verb": str, "object": str}], "feature_dim": int}
// and every following line is one sequence
//   {"id": str, "shots": [{"frames": [{"primary": [...], "secondaries":
//   [[...]]}], "label": int}], "subject": str}
// with keys sorted and floats printed to 9 significant digits, so output
// bytes are canonical for a given dataset.
std::string dataset_to_jsonl(const Dataset& dataset);
Dataset dataset_from_jsonl(const std::string& text);

Dataset load_dataset(const std::filesystem::path& path);
void save_dataset(const Dataset& dataset, const std::filesystem::path& path);

struct Split {
  Dataset train;
  Dataset test;
  std::string held_out_subject;  // empty for fixed splits
};

struct SplitSpec {
  enum class Kind { LeaveOneSubjectOut, Fixed };
  Kind kind = Kind::LeaveOneSubjectOut;
  std::vector<std::string> test_sequence_ids;  // Fixed only

  static SplitSpec leave_one_subject_out() { return {Kind::LeaveOneSubjectOut, {}}; }
  static SplitSpec fixed(std::vector<std::string> ids) { return {Kind::Fixed, std::move(ids)}; }
};

// Leave-one-subject-out yields one split per distinct subject; a fixed spec
// yields exactly one split whose test set is the listed sequence ids.
std::vector<Split> make_splits(const Dataset& dataset, const SplitSpec& spec);

// Canonical float formatting shared by every writer in the project.
std::string format_float(double value);

}  // namespace egoact
