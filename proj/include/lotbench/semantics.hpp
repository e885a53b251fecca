#ifndef LOTBENCH_SEMANTICS_HPP
#define LOTBENCH_SEMANTICS_HPP

// Extensional semantics of concept expressions.
//
// A concept classifies (total, num) pairs. Fraction comparisons are decided
// by integer cross-multiplication (x < a/b * n  <=>  x*b < a*n), so labels
// are exact at boundaries like n a multiple of the denominator. Meaning
// signatures concatenate the truth vectors at totals {25, 50, 100} into
// 26 + 51 + 101 = 178 bits; Hamming distance between signatures drives
// deduplication.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "lotbench/grammar.hpp"

namespace lotbench {

bool evaluate(const Expr& expr, int total, int num) noexcept;

// Truth values of a concept at a fixed total, for num = 0..total.
struct ExtensionVector {
  int total = 0;
  std::vector<std::uint8_t> bits;  // size total + 1
};

ExtensionVector extension_vector(const Expr& expr, int total);

// Hamming distance between two vectors at the same total.
// Throws LengthMismatch when the dimensions differ.
int hamming_distance(const ExtensionVector& a, const ExtensionVector& b);

// Packed concatenation of the extension vectors at the signature totals,
// in fixed order. Bit i of the concatenation lives in words[i / 64].
class MeaningSignature {
 public:
  static constexpr std::array<int, 3> kTotals = {25, 50, 100};
  static constexpr int kBits = 26 + 51 + 101;

  MeaningSignature() = default;

  static MeaningSignature of(const Expr& expr);

  // Summed Hamming distance over all 178 positions.
  int distance(const MeaningSignature& other) const noexcept;

  // Hamming distance within each per-total segment, in kTotals order.
  std::array<int, 3> segment_distances(const MeaningSignature& other) const noexcept;

  bool operator==(const MeaningSignature& other) const noexcept {
    return words_ == other.words_;
  }

  // Little-endian byte dump as lowercase hex (23 bytes, 46 chars);
  // bit i of the concatenation is bit (i % 8) of byte (i / 8).
  std::string to_hex() const;

  std::uint64_t word(int i) const noexcept { return words_[static_cast<std::size_t>(i)]; }

  struct Hash {
    std::size_t operator()(const MeaningSignature& s) const noexcept;
  };

 private:
  std::array<std::uint64_t, 3> words_{};
};

int signature_distance(const MeaningSignature& a, const MeaningSignature& b);

// Truth values over every admissible pair: total in [5, 100],
// num in [0, total]; 5136 entries in (total, num) lexicographic order.
struct FullExtension {
  static constexpr int kPairCount = 5136;

  std::vector<std::uint8_t> bits;

  int positives() const noexcept;
  int negatives() const noexcept { return kPairCount - positives(); }
};

FullExtension full_extension(const Expr& expr);

// Flat index of (total, num) within FullExtension::bits.
int full_extension_index(int total, int num) noexcept;

}  // namespace lotbench

#endif  // LOTBENCH_SEMANTICS_HPP
