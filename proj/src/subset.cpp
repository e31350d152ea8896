#include "fieldmix/subset.hpp"

#include <cstdio>

#include "fieldmix/errors.hpp"

namespace fieldmix {

SubsetState::SubsetState(int width) : width_(width) {
  if (width < 0) throw DomainError("subset width must be nonnegative");
  if (width > 64) high_.assign(static_cast<std::size_t>((width + 63) / 64 - 1), 0);
}

SubsetState SubsetState::from_mask(int width, std::uint64_t mask) {
  SubsetState s(width);
  if (width < 64 && (mask >> width) != 0) throw DomainError("mask has bits beyond the ground set");
  s.low_ = mask;
  s.size_ = std::popcount(mask);
  return s;
}

SubsetState SubsetState::from_elements(int width, std::span<const int> elements) {
  SubsetState s(width);
  for (int i : elements) s.insert(i);
  return s;
}

void SubsetState::check_index(int i) const {
  if (i < 0 || i >= width_) {
    throw DomainError("element " + std::to_string(i) + " outside ground set of size " +
                      std::to_string(width_));
  }
}

void SubsetState::insert(int i) {
  check_index(i);
  std::uint64_t& w = word_ref(i >> 6);
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if ((w & bit) == 0) {
    w |= bit;
    ++size_;
  }
}

void SubsetState::erase(int i) {
  check_index(i);
  std::uint64_t& w = word_ref(i >> 6);
  const std::uint64_t bit = std::uint64_t{1} << (i & 63);
  if ((w & bit) != 0) {
    w &= ~bit;
    --size_;
  }
}

std::uint64_t SubsetState::mask() const {
  if (width_ > 64) throw CapabilityError("ground set wider than 64 elements has no single-word mask");
  return low_;
}

std::vector<int> SubsetState::elements() const {
  std::vector<int> out;
  out.reserve(static_cast<std::size_t>(size_));
  for_each([&](int i) { out.push_back(i); });
  return out;
}

bool SubsetState::is_subset_of(const SubsetState& other) const {
  if (other.width_ != width_) return false;
  for (int k = 0; k < word_count(); ++k) {
    if ((word(k) & ~other.word(k)) != 0) return false;
  }
  return true;
}

std::string SubsetState::to_hex() const {
  std::string out;
  char buf[17];
  for (int k = word_count() - 1; k >= 0; --k) {
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(word(k)));
    out += buf;
  }
  return out;
}

bool operator<(const SubsetState& a, const SubsetState& b) {
  if (a.width_ != b.width_) return a.width_ < b.width_;
  for (int k = a.word_count() - 1; k >= 0; --k) {
    if (a.word(k) != b.word(k)) return a.word(k) < b.word(k);
  }
  return false;
}

std::size_t SubsetHash::operator()(const SubsetState& s) const noexcept {
  std::size_t h = static_cast<std::size_t>(s.width()) * 0x9e3779b97f4a7c15ull;
  for (int k = 0; k < s.word_count(); ++k) {
    h ^= std::hash<std::uint64_t>{}(s.word(k)) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

}  // namespace fieldmix
