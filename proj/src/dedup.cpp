#include "lotbench/dedup.hpp"

#include <unordered_map>

#include "lotbench/parallel.hpp"

namespace lotbench {

std::string_view dedup_mode_text(DedupMode mode) noexcept {
  return mode == DedupMode::Summed ? "summed" : "per-vector";
}

std::optional<DedupMode> dedup_mode_from_text(std::string_view text) noexcept {
  if (text == "summed") return DedupMode::Summed;
  if (text == "per-vector") return DedupMode::PerVector;
  return std::nullopt;
}

bool signatures_similar(const MeaningSignature& a, const MeaningSignature& b,
                        DedupMode mode) noexcept {
  if (mode == DedupMode::Summed) {
    return a.distance(b) < kSimilarityThreshold;
  }
  for (int d : a.segment_distances(b)) {
    if (d >= kSimilarityThreshold) return false;
  }
  return true;
}

void compute_signatures(ConceptClass& cls, int threads) {
  parallel_chunks(cls.concepts.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      Concept& c = cls.concepts[i];
      if (!c.signature) c.signature = MeaningSignature::of(*c.expr);
    }
  });
}

std::size_t dedup_within_class(ConceptClass& cls,
                               std::vector<DedupAuditEntry>* audit) {
  std::unordered_map<MeaningSignature, std::size_t, MeaningSignature::Hash> first_seen;
  first_seen.reserve(cls.concepts.size() * 2);
  std::size_t discarded = 0;
  for (std::size_t i = 0; i < cls.concepts.size(); ++i) {
    Concept& c = cls.concepts[i];
    if (c.status != ConceptStatus::Raw) continue;
    auto [it, inserted] = first_seen.emplace(*c.signature, i);
    if (inserted) {
      c.status = ConceptStatus::Retained;
    } else {
      c.status = ConceptStatus::DiscardedDuplicate;
      ++discarded;
      if (audit) {
        audit->push_back({c.id_hex(), cls.concepts[it->second].id_hex(), 0,
                          "duplicate"});
      }
    }
  }
  return discarded;
}

std::size_t dedup_across_classes(ConceptClass& cls,
                                 const std::vector<const ConceptClass*>& prev_classes,
                                 DedupMode mode, int threads,
                                 std::vector<DedupAuditEntry>* audit) {
  for (const ConceptClass* prev : prev_classes) {
    if (prev->k >= cls.k) {
      throw OrderViolation("previous class " + std::to_string(prev->k) +
                           " is not simpler than class " + std::to_string(cls.k));
    }
  }

  std::vector<const Concept*> prior;
  for (const ConceptClass* prev : prev_classes) {
    for (const Concept* c : prev->retained()) prior.push_back(c);
  }
  if (prior.empty()) return 0;

  // match[i] == index into prior of the first similar retained concept.
  constexpr std::size_t kNoMatch = static_cast<std::size_t>(-1);
  std::vector<std::size_t> match(cls.concepts.size(), kNoMatch);
  parallel_chunks(cls.concepts.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Concept& c = cls.concepts[i];
      if (c.status != ConceptStatus::Retained) continue;
      for (std::size_t p = 0; p < prior.size(); ++p) {
        if (signatures_similar(*c.signature, *prior[p]->signature, mode)) {
          match[i] = p;
          break;
        }
      }
    }
  });

  std::size_t discarded = 0;
  for (std::size_t i = 0; i < cls.concepts.size(); ++i) {
    if (match[i] == kNoMatch) continue;
    Concept& c = cls.concepts[i];
    c.status = ConceptStatus::DiscardedSimilar;
    ++discarded;
    if (audit) {
      const Concept& kept = *prior[match[i]];
      audit->push_back({c.id_hex(), kept.id_hex(),
                        c.signature->distance(*kept.signature), "similar"});
    }
  }
  return discarded;
}

bool is_eligible(const FullExtension& extension) noexcept {
  return extension.positives() >= kMinExamplesPerLabel &&
         extension.negatives() >= kMinExamplesPerLabel;
}

bool is_eligible(const Expr& expr) noexcept {
  // Early exit once both labels reach the floor or one side becomes
  // unreachable; equivalent to counting over the full extension.
  int positives = 0;
  int negatives = 0;
  int remaining = FullExtension::kPairCount;
  for (int total = kTotalMin; total <= kTotalMax; ++total) {
    for (int num = 0; num <= total; ++num) {
      (evaluate(expr, total, num) ? positives : negatives) += 1;
      --remaining;
      if (positives >= kMinExamplesPerLabel && negatives >= kMinExamplesPerLabel) {
        return true;
      }
      if (positives + remaining < kMinExamplesPerLabel ||
          negatives + remaining < kMinExamplesPerLabel) {
        return false;
      }
    }
  }
  return positives >= kMinExamplesPerLabel && negatives >= kMinExamplesPerLabel;
}

std::size_t filter_eligibility(ConceptClass& cls, int threads,
                               std::vector<DedupAuditEntry>* audit) {
  std::vector<std::uint8_t> ineligible(cls.concepts.size(), 0);
  parallel_chunks(cls.concepts.size(), threads, [&](std::size_t begin, std::size_t end) {
    for (std::size_t i = begin; i < end; ++i) {
      const Concept& c = cls.concepts[i];
      if (c.status == ConceptStatus::Retained && !is_eligible(*c.expr)) {
        ineligible[i] = 1;
      }
    }
  });
  std::size_t discarded = 0;
  for (std::size_t i = 0; i < cls.concepts.size(); ++i) {
    if (!ineligible[i]) continue;
    cls.concepts[i].status = ConceptStatus::DiscardedIneligible;
    ++discarded;
    if (audit) audit->push_back({cls.concepts[i].id_hex(), "", -1, "ineligible"});
  }
  return discarded;
}

}  // namespace lotbench
