#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "sparsesel/common.hpp"

namespace sparsesel {

/// Ordered index subset of [0, p): the combinatorial decision variable.
/// Indices are kept strictly increasing and unique.
class SupportSet {
 public:
  SupportSet() = default;

  /// Sorts the input; rejects duplicates and negative indices.
  static SupportSet from_indices(std::vector<int> indices) {
    std::sort(indices.begin(), indices.end());
    for (std::size_t i = 0; i < indices.size(); ++i) {
      if (indices[i] < 0)
        throw ValidationError("SupportSet: negative index " + std::to_string(indices[i]));
      if (i > 0 && indices[i] == indices[i - 1])
        throw ValidationError("SupportSet: duplicate index " + std::to_string(indices[i]));
    }
    SupportSet s;
    s.indices_ = std::move(indices);
    return s;
  }

  const std::vector<int>& indices() const { return indices_; }
  int size() const { return static_cast<int>(indices_.size()); }
  bool empty() const { return indices_.empty(); }

  bool contains(int idx) const {
    return std::binary_search(indices_.begin(), indices_.end(), idx);
  }

  bool is_valid_for(int p) const { return indices_.empty() || indices_.back() < p; }

  SupportSet with(int idx) const {
    auto v = indices_;
    v.push_back(idx);
    return from_indices(std::move(v));
  }

  SupportSet without(int idx) const {
    auto v = indices_;
    v.erase(std::remove(v.begin(), v.end(), idx), v.end());
    SupportSet s;
    s.indices_ = std::move(v);
    return s;
  }

  bool intersects(const SupportSet& other) const {
    for (int i : indices_)
      if (other.contains(i)) return true;
    return false;
  }

  bool operator==(const SupportSet& other) const { return indices_ == other.indices_; }
  bool operator!=(const SupportSet& other) const { return !(*this == other); }
  /// Lexicographic order; used for deterministic tie-breaking.
  bool operator<(const SupportSet& other) const { return indices_ < other.indices_; }

  std::string to_string() const {
    std::string s = "{";
    for (std::size_t i = 0; i < indices_.size(); ++i) {
      if (i) s += ",";
      s += std::to_string(indices_[i]);
    }
    return s + "}";
  }

 private:
  std::vector<int> indices_;
};

}  // namespace sparsesel
