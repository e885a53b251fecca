#ifndef LOTBENCH_DEDUP_HPP
#define LOTBENCH_DEDUP_HPP

// Three-part deduplication, run class by class in increasing complexity:
//
//   1. within a class, concepts with identical meaning signatures collapse
//      to the first in canonical order;
//   2. a concept whose signature lies within distance < 3 of a retained
//      concept in any lower class is discarded (the lower class keeps the
//      minimal description);
//   3. concepts without at least 10 positive and 10 negative examples over
//      the full (total, num) domain are excluded before sampling.
//
// The cross-class threshold has two readings. The summed mode (default)
// compares total Hamming distance over all 178 signature bits; the
// per-vector mode calls two concepts similar when every per-total segment
// differs in fewer than 3 places.

#include <cstdint>
#include <string>
#include <vector>

#include "lotbench/enumerate.hpp"
#include "lotbench/semantics.hpp"

namespace lotbench {

enum class DedupMode : std::uint8_t { Summed, PerVector };

std::string_view dedup_mode_text(DedupMode mode) noexcept;
std::optional<DedupMode> dedup_mode_from_text(std::string_view text) noexcept;

inline constexpr int kSimilarityThreshold = 3;   // strict: distance < 3
inline constexpr int kMinExamplesPerLabel = 10;  // eligibility floor

struct DedupAuditEntry {
  std::string discarded_id;
  std::string kept_id;  // empty for eligibility discards
  int distance = 0;     // -1 when not distance-based
  std::string reason;   // "duplicate", "similar", "ineligible"
};

// True when the two concepts count as similar under the given mode.
bool signatures_similar(const MeaningSignature& a, const MeaningSignature& b,
                        DedupMode mode) noexcept;

// Fills in Concept::signature for every member lacking one.
void compute_signatures(ConceptClass& cls, int threads = 0);

// Marks every Raw member Retained or DiscardedDuplicate. Within a group of
// identical signatures the first in canonical order wins. Returns the
// number of discards. Requires signatures.
std::size_t dedup_within_class(ConceptClass& cls,
                               std::vector<DedupAuditEntry>* audit = nullptr);

// Marks members similar to a retained member of any earlier class
// DiscardedSimilar. All prev classes must have strictly lower k (throws
// OrderViolation otherwise) and must already be deduplicated.
std::size_t dedup_across_classes(ConceptClass& cls,
                                 const std::vector<const ConceptClass*>& prev_classes,
                                 DedupMode mode, int threads = 0,
                                 std::vector<DedupAuditEntry>* audit = nullptr);

// Eligibility: at least kMinExamplesPerLabel positive and negative pairs.
bool is_eligible(const Expr& expr) noexcept;
bool is_eligible(const FullExtension& extension) noexcept;

// Demotes retained-but-ineligible members to DiscardedIneligible.
std::size_t filter_eligibility(ConceptClass& cls, int threads = 0,
                               std::vector<DedupAuditEntry>* audit = nullptr);

}  // namespace lotbench

#endif  // LOTBENCH_DEDUP_HPP
