#ifndef LOTBENCH_ENUMERATE_HPP
#define LOTBENCH_ENUMERATE_HPP

// Exhaustive generation of complexity classes.
//
// Class k holds every canonical well-typed expression with exactly k
// operators. Atoms cost 1 (constant comparison) or 2 (fraction comparison,
// which carries a multiplication); a connective adds 1 plus its children.
// Classes are built bottom-up over operator budgets and emitted sorted by
// canonical text, so enumeration is a pure function of (k, stride).
//
// The constant space is bounded by a stride: class k draws its integer
// constants from multiples of stride_for(k). The default keeps every
// constant for k <= 2 and multiples of 5 for k >= 3, which caps class 5
// around 1.2M raw expressions.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "lotbench/grammar.hpp"
#include "lotbench/semantics.hpp"

namespace lotbench {

enum class ConceptStatus : std::uint8_t {
  Raw,
  Retained,
  DiscardedDuplicate,
  DiscardedSimilar,
  DiscardedIneligible,
};

std::string_view concept_status_text(ConceptStatus s) noexcept;
std::optional<ConceptStatus> concept_status_from_text(std::string_view text) noexcept;

struct Concept {
  std::uint64_t id = 0;  // content hash of the canonical text
  ExprPtr expr;
  std::string text;  // canonical rendered form
  int complexity = 0;
  ConceptStatus status = ConceptStatus::Raw;
  std::optional<MeaningSignature> signature;

  std::string id_hex() const;
};

std::uint64_t concept_id_for(std::string_view canonical_text);
std::string concept_id_hex(std::uint64_t id);

struct ConceptClass {
  int k = 0;
  std::uint64_t generation_seed = 0;  // provenance only; enumeration is pure
  std::vector<Concept> concepts;      // sorted by canonical text

  std::vector<const Concept*> retained() const;
};

struct EnumerationOptions {
  int stride_high = 5;                     // constant stride for classes k >= 3
  std::size_t class_size_cap = 10000000;   // ResourceLimit beyond this

  int stride_for(int k) const noexcept { return k <= 2 ? 1 : stride_high; }
};

// Predicted raw size of class k before materializing anything.
std::size_t predicted_class_size(int k, const EnumerationOptions& options);

// Every canonical expression with exactly k operators, k in [1, 5].
// Throws ResourceLimit when the predicted size exceeds the cap.
ConceptClass enumerate_class(int k, const EnumerationOptions& options = {});

// Uniform without-replacement sample of the retained members; the result is
// in canonical text order. Throws InsufficientConcepts when fewer than
// `count` retained members exist.
std::vector<Concept> sample_concepts(const ConceptClass& cls, std::size_t count,
                                     std::uint64_t seed);

}  // namespace lotbench

#endif  // LOTBENCH_ENUMERATE_HPP
