#include "egoact/dataset.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>

namespace egoact {

using nlohmann::json;

std::vector<int> Sequence::shot_labels() const {
  std::vector<int> labels;
  labels.reserve(shots.size());
  for (const Shot& s : shots) labels.push_back(s.label);
  return labels;
}

std::size_t Dataset::num_frames() const {
  std::size_t n = 0;
  for (const Sequence& seq : sequences)
    for (const Shot& shot : seq.shots) n += shot.frames.size();
  return n;
}

std::size_t Dataset::num_shots() const {
  std::size_t n = 0;
  for (const Sequence& seq : sequences) n += seq.shots.size();
  return n;
}

std::vector<std::string> Dataset::subjects() const {
  std::vector<std::string> out;
  for (const Sequence& seq : sequences)
    if (std::find(out.begin(), out.end(), seq.subject) == out.end()) out.push_back(seq.subject);
  return out;
}

namespace {

void check_finite(const FeatureVector& v, const std::string& where) {
  if (!v.allFinite()) throw ValidationError(where + ": non-finite feature value");
}

}  // namespace

void Dataset::validate() const {
  if (feature_dim <= 0) throw ValidationError("feature_dim must be positive");
  const int A = num_actions();
  std::set<std::pair<std::string, std::string>> pairs;
  for (int i = 0; i < A; ++i) {
    if (actions[i].id != i)
      throw ValidationError("action ids must be dense 0..A-1, got id " +
                            std::to_string(actions[i].id) + " at position " + std::to_string(i));
    if (!pairs.insert({actions[i].verb, actions[i].object}).second)
      throw ValidationError("duplicate (verb, object) pair: " + actions[i].verb + "/" +
                            actions[i].object);
  }
  std::set<std::string> ids;
  for (const Sequence& seq : sequences) {
    if (!ids.insert(seq.id).second) throw ValidationError("duplicate sequence id " + seq.id);
    if (seq.shots.empty()) throw ValidationError("sequence " + seq.id + " has no shots");
    for (std::size_t si = 0; si < seq.shots.size(); ++si) {
      const Shot& shot = seq.shots[si];
      const std::string where = "sequence " + seq.id + " shot " + std::to_string(si);
      if (shot.frames.empty()) throw ValidationError(where + " has no frames");
      if (shot.label < 0 || shot.label >= A)
        throw ValidationError(where + ": unknown label id " + std::to_string(shot.label));
      for (std::size_t fi = 0; fi < shot.frames.size(); ++fi) {
        const FrameSample& f = shot.frames[fi];
        const std::string fwhere = where + " frame " + std::to_string(fi);
        if (f.label != shot.label)
          throw ValidationError(fwhere + ": frame label differs from shot label");
        if (f.primary.size() != feature_dim)
          throw ValidationError(fwhere + ": primary has dimension " +
                                std::to_string(f.primary.size()) + ", expected " +
                                std::to_string(feature_dim));
        check_finite(f.primary, fwhere + " primary");
        if (f.secondaries.empty()) throw ValidationError(fwhere + ": no secondary regions");
        for (std::size_t zi = 0; zi < f.secondaries.size(); ++zi) {
          if (f.secondaries[zi].size() != feature_dim)
            throw ValidationError(fwhere + " secondary " + std::to_string(zi) +
                                  ": dimension mismatch");
          check_finite(f.secondaries[zi], fwhere + " secondary " + std::to_string(zi));
        }
      }
    }
  }
}

bool dataset_equal(const Dataset& a, const Dataset& b) {
  if (a.feature_dim != b.feature_dim || a.actions != b.actions ||
      a.sequences.size() != b.sequences.size())
    return false;
  for (std::size_t i = 0; i < a.sequences.size(); ++i) {
    const Sequence &sa = a.sequences[i], &sb = b.sequences[i];
    if (sa.id != sb.id || sa.subject != sb.subject || sa.shots.size() != sb.shots.size())
      return false;
    for (std::size_t j = 0; j < sa.shots.size(); ++j) {
      const Shot &ta = sa.shots[j], &tb = sb.shots[j];
      if (ta.label != tb.label || ta.frames.size() != tb.frames.size()) return false;
      for (std::size_t k = 0; k < ta.frames.size(); ++k) {
        const FrameSample &fa = ta.frames[k], &fb = tb.frames[k];
        if (fa.label != fb.label || fa.primary != fb.primary ||
            fa.secondaries.size() != fb.secondaries.size())
          return false;
        for (std::size_t z = 0; z < fa.secondaries.size(); ++z)
          if (fa.secondaries[z] != fb.secondaries[z]) return false;
      }
    }
  }
  return true;
}

std::string format_float(double value) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.9g", value);
  return buf;
}

namespace {

void append_json_string(std::string& out, const std::string& s) {
  out += json(s).dump();  // handles escaping
}

void append_vector(std::string& out, const FeatureVector& v) {
  out += '[';
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (i) out += ',';
    out += format_float(static_cast<double>(v[i]));
  }
  out += ']';
}

FeatureVector parse_vector(const json& arr, const std::string& where) {
  if (!arr.is_array()) throw ValidationError(where + ": expected array of numbers");
  FeatureVector v(arr.size());
  for (std::size_t i = 0; i < arr.size(); ++i) {
    if (!arr[i].is_number()) throw ValidationError(where + ": expected array of numbers");
    v[static_cast<Eigen::Index>(i)] = static_cast<float>(arr[i].get<double>());
  }
  return v;
}

}  // namespace

std::string dataset_to_jsonl(const Dataset& dataset) {
  dataset.validate();
  std::string out;
  out += "{\"actions\":[";
  for (std::size_t i = 0; i < dataset.actions.size(); ++i) {
    const ActionLabel& a = dataset.actions[i];
    if (i) out += ',';
    out += "{\"id\":" + std::to_string(a.id) + ",\"object\":";
    append_json_string(out, a.object);
    out += ",\"verb\":";
    append_json_string(out, a.verb);
    out += '}';
  }
  out += "],\"feature_dim\":" + std::to_string(dataset.feature_dim) + "}\n";
  for (const Sequence& seq : dataset.sequences) {
    out += "{\"id\":";
    append_json_string(out, seq.id);
    out += ",\"shots\":[";
    for (std::size_t si = 0; si < seq.shots.size(); ++si) {
      const Shot& shot = seq.shots[si];
      if (si) out += ',';
      out += "{\"frames\":[";
      for (std::size_t fi = 0; fi < shot.frames.size(); ++fi) {
        const FrameSample& f = shot.frames[fi];
        if (fi) out += ',';
        out += "{\"primary\":";
        append_vector(out, f.primary);
        out += ",\"secondaries\":[";
        for (std::size_t zi = 0; zi < f.secondaries.size(); ++zi) {
          if (zi) out += ',';
          append_vector(out, f.secondaries[zi]);
        }
        out += "]}";
      }
      out += "],\"label\":" + std::to_string(shot.label) + '}';
    }
    out += "],\"subject\":";
    append_json_string(out, seq.subject);
    out += "}\n";
  }
  return out;
}

Dataset dataset_from_jsonl(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  long line_no = 0;
  Dataset ds;
  bool have_header = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    json j;
    try {
      j = json::parse(line);
    } catch (const json::parse_error& e) {
      throw ParseError(e.what(), line_no);
    }
    try {
      if (!have_header) {
        if (!j.contains("actions") || !j.contains("feature_dim"))
          throw ValidationError("header line must contain actions and feature_dim");
        for (const json& ja : j.at("actions")) {
          ActionLabel a;
          a.id = ja.at("id").get<int>();
          a.verb = ja.at("verb").get<std::string>();
          a.object = ja.at("object").get<std::string>();
          ds.actions.push_back(std::move(a));
        }
        ds.feature_dim = j.at("feature_dim").get<int>();
        have_header = true;
        continue;
      }
      Sequence seq;
      seq.id = j.at("id").get<std::string>();
      seq.subject = j.at("subject").get<std::string>();
      for (const json& js : j.at("shots")) {
        Shot shot;
        shot.label = js.at("label").get<int>();
        for (const json& jf : js.at("frames")) {
          FrameSample f;
          f.label = shot.label;
          f.primary = parse_vector(jf.at("primary"), "sequence " + seq.id + " primary");
          for (const json& jz : jf.at("secondaries"))
            f.secondaries.push_back(parse_vector(jz, "sequence " + seq.id + " secondary"));
          shot.frames.push_back(std::move(f));
        }
        seq.shots.push_back(std::move(shot));
      }
      ds.sequences.push_back(std::move(seq));
    } catch (const json::exception& e) {
      throw ParseError(e.what(), line_no);
    }
  }
  if (!have_header) throw ParseError("missing header line", 0);
  ds.validate();
  return ds;
}

Dataset load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return dataset_from_jsonl(buf.str());
}

void save_dataset(const Dataset& dataset, const std::filesystem::path& path) {
  const std::string text = dataset_to_jsonl(dataset);  // validates first
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

namespace {

Dataset subset_by(const Dataset& dataset, const std::vector<bool>& keep) {
  Dataset out;
  out.actions = dataset.actions;
  out.feature_dim = dataset.feature_dim;
  for (std::size_t i = 0; i < dataset.sequences.size(); ++i)
    if (keep[i]) out.sequences.push_back(dataset.sequences[i]);
  return out;
}

}  // namespace

std::vector<Split> make_splits(const Dataset& dataset, const SplitSpec& spec) {
  std::vector<Split> splits;
  if (spec.kind == SplitSpec::Kind::LeaveOneSubjectOut) {
    const std::vector<std::string> subs = dataset.subjects();
    if (subs.size() < 2)
      throw ValidationError("leave-one-subject-out needs at least 2 subjects, got " +
                            std::to_string(subs.size()));
    for (const std::string& sub : subs) {
      std::vector<bool> is_test(dataset.sequences.size());
      for (std::size_t i = 0; i < dataset.sequences.size(); ++i)
        is_test[i] = dataset.sequences[i].subject == sub;
      std::vector<bool> is_train = is_test;
      is_train.flip();
      splits.push_back({subset_by(dataset, is_train), subset_by(dataset, is_test), sub});
    }
  } else {
    std::set<std::string> wanted(spec.test_sequence_ids.begin(), spec.test_sequence_ids.end());
    std::set<std::string> present;
    for (const Sequence& s : dataset.sequences) present.insert(s.id);
    for (const std::string& id : wanted)
      if (!present.count(id)) throw ValidationError("fixed split names unknown sequence " + id);
    std::vector<bool> is_test(dataset.sequences.size());
    for (std::size_t i = 0; i < dataset.sequences.size(); ++i)
      is_test[i] = wanted.count(dataset.sequences[i].id) > 0;
    std::vector<bool> is_train = is_test;
    is_train.flip();
    splits.push_back({subset_by(dataset, is_train), subset_by(dataset, is_test), ""});
  }
  return splits;
}

}  // namespace egoact
