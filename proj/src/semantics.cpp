#include "lotbench/semantics.hpp"

#include <bit>
#include <numeric>

namespace lotbench {

bool evaluate(const Expr& expr, int total, int num) noexcept {
  switch (expr.kind()) {
    case ExprKind::And:
      return evaluate(*expr.lhs(), total, num) && evaluate(*expr.rhs(), total, num);
    case ExprKind::Or:
      return evaluate(*expr.lhs(), total, num) || evaluate(*expr.rhs(), total, num);
    case ExprKind::Compare:
      break;
  }
  const NumericTerm& t = expr.term();
  if (t.is_fraction()) {
    // x ? a/b * n, decided exactly as x*b ? a*n.
    const long lhs = static_cast<long>(num) * t.fraction.den;
    const long rhs = static_cast<long>(t.fraction.num) * total;
    return expr.op() == CompareOp::Gt ? lhs > rhs : lhs < rhs;
  }
  switch (expr.op()) {
    case CompareOp::Eq:
      return num == t.constant;
    case CompareOp::Neq:
      return num != t.constant;
    case CompareOp::Gt:
      return num > t.constant;
    case CompareOp::Lt:
      return num < t.constant;
  }
  return false;
}

ExtensionVector extension_vector(const Expr& expr, int total) {
  ExtensionVector v;
  v.total = total;
  v.bits.resize(static_cast<std::size_t>(total) + 1);
  for (int num = 0; num <= total; ++num) {
    v.bits[static_cast<std::size_t>(num)] = evaluate(expr, total, num) ? 1 : 0;
  }
  return v;
}

int hamming_distance(const ExtensionVector& a, const ExtensionVector& b) {
  if (a.bits.size() != b.bits.size()) {
    throw LengthMismatch("extension vectors have different dimensions: " +
                         std::to_string(a.bits.size()) + " vs " +
                         std::to_string(b.bits.size()));
  }
  int d = 0;
  for (std::size_t i = 0; i < a.bits.size(); ++i) {
    d += a.bits[i] != b.bits[i];
  }
  return d;
}

MeaningSignature MeaningSignature::of(const Expr& expr) {
  MeaningSignature sig;
  int bit = 0;
  for (int total : kTotals) {
    for (int num = 0; num <= total; ++num, ++bit) {
      if (evaluate(expr, total, num)) {
        sig.words_[static_cast<std::size_t>(bit >> 6)] |= std::uint64_t{1} << (bit & 63);
      }
    }
  }
  return sig;
}

int MeaningSignature::distance(const MeaningSignature& other) const noexcept {
  int d = 0;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    d += std::popcount(words_[i] ^ other.words_[i]);
  }
  return d;
}

namespace {

// Masks selecting each per-total segment out of the packed words.
// Segment boundaries: [0, 26), [26, 77), [77, 178).
struct SegmentMasks {
  std::array<std::array<std::uint64_t, 3>, 3> mask{};
  constexpr SegmentMasks() {
    constexpr int starts[4] = {0, 26, 77, 178};
    for (int seg = 0; seg < 3; ++seg) {
      for (int bit = starts[seg]; bit < starts[seg + 1]; ++bit) {
        mask[static_cast<std::size_t>(seg)][static_cast<std::size_t>(bit >> 6)] |=
            std::uint64_t{1} << (bit & 63);
      }
    }
  }
};

constexpr SegmentMasks kSegments{};

}  // namespace

std::array<int, 3> MeaningSignature::segment_distances(
    const MeaningSignature& other) const noexcept {
  std::array<int, 3> out{};
  for (std::size_t seg = 0; seg < 3; ++seg) {
    int d = 0;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      d += std::popcount((words_[w] ^ other.words_[w]) & kSegments.mask[seg][w]);
    }
    out[seg] = d;
  }
  return out;
}

std::string MeaningSignature::to_hex() const {
  static constexpr char kDigits[] = "0123456789abcdef";
  constexpr int kBytes = (kBits + 7) / 8;  // 23
  std::string out;
  out.reserve(kBytes * 2);
  for (int i = 0; i < kBytes; ++i) {
    const auto byte = static_cast<std::uint8_t>(
        (words_[static_cast<std::size_t>(i / 8)] >> ((i % 8) * 8)) & 0xff);
    out.push_back(kDigits[byte >> 4]);
    out.push_back(kDigits[byte & 0xf]);
  }
  return out;
}

std::size_t MeaningSignature::Hash::operator()(const MeaningSignature& s) const noexcept {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (int i = 0; i < 3; ++i) {
    h ^= s.word(i);
    h *= 0x100000001b3ull;
  }
  return static_cast<std::size_t>(h);
}

int signature_distance(const MeaningSignature& a, const MeaningSignature& b) {
  return a.distance(b);
}

int full_extension_index(int total, int num) noexcept {
  // Offset of total t is sum over s in [5, t) of (s + 1) = t(t+1)/2 - 15.
  return (total * (total + 1)) / 2 - 15 + num;
}

FullExtension full_extension(const Expr& expr) {
  FullExtension ext;
  ext.bits.resize(FullExtension::kPairCount);
  std::size_t i = 0;
  for (int total = kTotalMin; total <= kTotalMax; ++total) {
    for (int num = 0; num <= total; ++num, ++i) {
      ext.bits[i] = evaluate(expr, total, num) ? 1 : 0;
    }
  }
  return ext;
}

int FullExtension::positives() const noexcept {
  return static_cast<int>(
      std::accumulate(bits.begin(), bits.end(), 0,
                      [](int acc, std::uint8_t b) { return acc + (b != 0); }));
}

}  // namespace lotbench
