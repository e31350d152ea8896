#pragma once

#include <bit>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace fieldmix {

/// A subset of the ground set {0, ..., width-1} stored as a bit vector.
///
/// Sets over at most 64 elements live entirely in one inline word; wider
/// ground sets spill the upper words into a heap vector. The exact
/// enumeration paths only accept width <= 64 and talk to `mask()`.
class SubsetState {
 public:
  SubsetState() = default;
  explicit SubsetState(int width);

  static SubsetState from_mask(int width, std::uint64_t mask);
  static SubsetState from_elements(int width, std::span<const int> elements);

  int width() const noexcept { return width_; }
  int size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }

  bool contains(int i) const noexcept {
    const std::uint64_t w = word(i >> 6);
    return (w >> (i & 63)) & 1u;
  }
  void insert(int i);
  void erase(int i);

  SubsetState with(int i) const {
    SubsetState s = *this;
    s.insert(i);
    return s;
  }
  SubsetState without(int i) const {
    SubsetState s = *this;
    s.erase(i);
    return s;
  }

  /// Low 64 bits. Throws unless width() <= 64.
  std::uint64_t mask() const;
  bool fits_mask() const noexcept { return width_ <= 64; }

  std::vector<int> elements() const;
  bool is_subset_of(const SubsetState& other) const;

  /// Calls f(i) for each member in increasing order.
  template <class F>
  void for_each(F&& f) const {
    for (int k = 0; k < word_count(); ++k) {
      std::uint64_t w = word(k);
      while (w != 0) {
        const int b = std::countr_zero(w);
        f(k * 64 + b);
        w &= w - 1;
      }
    }
  }

  /// Most-significant word first, 16 hex digits per word.
  std::string to_hex() const;

  friend bool operator==(const SubsetState& a, const SubsetState& b) {
    return a.width_ == b.width_ && a.low_ == b.low_ && a.high_ == b.high_;
  }
  friend bool operator<(const SubsetState& a, const SubsetState& b);

  int word_count() const noexcept { return width_ <= 64 ? 1 : 1 + static_cast<int>(high_.size()); }
  std::uint64_t word(int k) const noexcept { return k == 0 ? low_ : high_[k - 1]; }

 private:
  std::uint64_t& word_ref(int k) { return k == 0 ? low_ : high_[k - 1]; }
  void check_index(int i) const;

  int width_ = 0;
  int size_ = 0;
  std::uint64_t low_ = 0;
  std::vector<std::uint64_t> high_;
};

struct SubsetHash {
  std::size_t operator()(const SubsetState& s) const noexcept;
};

}  // namespace fieldmix
