// Binary cone identifiers: a direction cone of the central hyperplane
// arrangement is identified by the signs every interior direction induces on
// the data points. Bit i is 1 when point i projects strictly positive.
#ifndef DEEPCORE_CONE_CODE_HPP
#define DEEPCORE_CONE_CODE_HPP

#include <bit>
#include <compare>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace deepcore {

class ConeCode {
 public:
  ConeCode() = default;

  explicit ConeCode(std::size_t length)
      : length_(length), words_((length + 63) / 64, 0) {}

  static ConeCode fromString(const std::string& bits) {
    ConeCode code(bits.size());
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] == '1') {
        code.set(i, true);
      } else if (bits[i] != '0') {
        throw std::invalid_argument("ConeCode::fromString: expected 0/1");
      }
    }
    return code;
  }

  std::size_t size() const { return length_; }

  bool test(std::size_t i) const {
    return (words_[i >> 6] >> (i & 63)) & 1u;
  }

  void set(std::size_t i, bool value) {
    const std::uint64_t mask = std::uint64_t{1} << (i & 63);
    if (value) {
      words_[i >> 6] |= mask;
    } else {
      words_[i >> 6] &= ~mask;
    }
  }

  void flip(std::size_t i) { words_[i >> 6] ^= std::uint64_t{1} << (i & 63); }

  ConeCode withFlipped(std::size_t i) const {
    ConeCode copy = *this;
    copy.flip(i);
    return copy;
  }

  std::size_t countOnes() const {
    std::size_t ones = 0;
    for (std::uint64_t w : words_) ones += std::popcount(w);
    return ones;
  }

  // Mirror cone: every point switches halfspace.
  ConeCode complemented() const {
    ConeCode copy = *this;
    for (std::uint64_t& w : copy.words_) w = ~w;
    copy.clearTail();
    return copy;
  }

  // Calls f(index) for every bit position where the two codes differ.
  template <typename F>
  void forEachDifference(const ConeCode& other, F&& f) const {
    for (std::size_t w = 0; w < words_.size(); ++w) {
      std::uint64_t diff = words_[w] ^ other.words_[w];
      while (diff != 0) {
        const int bit = std::countr_zero(diff);
        f(w * 64 + static_cast<std::size_t>(bit));
        diff &= diff - 1;
      }
    }
  }

  std::size_t hammingDistance(const ConeCode& other) const {
    std::size_t dist = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      dist += std::popcount(words_[w] ^ other.words_[w]);
    }
    return dist;
  }

  std::string toString() const {
    std::string out(length_, '0');
    for (std::size_t i = 0; i < length_; ++i) {
      if (test(i)) out[i] = '1';
    }
    return out;
  }

  friend bool operator==(const ConeCode& a, const ConeCode& b) {
    return a.length_ == b.length_ && a.words_ == b.words_;
  }

  // Any strict total order works for searchable storage of codes.
  friend std::strong_ordering operator<=>(const ConeCode& a,
                                          const ConeCode& b) {
    if (auto c = a.length_ <=> b.length_; c != 0) return c;
    return a.words_ <=> b.words_;
  }

 private:
  void clearTail() {
    if (length_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (length_ % 64)) - 1;
    }
  }

  std::size_t length_ = 0;
  std::vector<std::uint64_t> words_;
};

}  // namespace deepcore

#endif  // DEEPCORE_CONE_CODE_HPP
