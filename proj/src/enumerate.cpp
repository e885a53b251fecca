#include "lotbench/enumerate.hpp"

#include <algorithm>
#include <unordered_map>

#include "lotbench/rng.hpp"

namespace lotbench {

std::string_view concept_status_text(ConceptStatus s) noexcept {
  switch (s) {
    case ConceptStatus::Raw:
      return "raw";
    case ConceptStatus::Retained:
      return "retained";
    case ConceptStatus::DiscardedDuplicate:
      return "discarded-duplicate";
    case ConceptStatus::DiscardedSimilar:
      return "discarded-similar";
    case ConceptStatus::DiscardedIneligible:
      return "discarded-ineligible";
  }
  return "raw";
}

std::optional<ConceptStatus> concept_status_from_text(std::string_view text) noexcept {
  if (text == "raw") return ConceptStatus::Raw;
  if (text == "retained") return ConceptStatus::Retained;
  if (text == "discarded-duplicate") return ConceptStatus::DiscardedDuplicate;
  if (text == "discarded-similar") return ConceptStatus::DiscardedSimilar;
  if (text == "discarded-ineligible") return ConceptStatus::DiscardedIneligible;
  return std::nullopt;
}

std::uint64_t concept_id_for(std::string_view canonical_text) {
  return fnv1a64(canonical_text);
}

std::string concept_id_hex(std::uint64_t id) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kDigits[id & 0xf];
    id >>= 4;
  }
  return out;
}

std::string Concept::id_hex() const { return concept_id_hex(id); }

std::vector<const Concept*> ConceptClass::retained() const {
  std::vector<const Concept*> out;
  for (const Concept& c : concepts) {
    if (c.status == ConceptStatus::Retained) out.push_back(&c);
  }
  return out;
}

namespace {

struct PoolEntry {
  ExprPtr expr;
  std::string text;
};

// Atoms with one operator: x {==,!=,>,<} c for constants on the stride.
std::vector<PoolEntry> constant_atoms(int stride) {
  static constexpr CompareOp kOps[] = {CompareOp::Eq, CompareOp::Neq,
                                       CompareOp::Gt, CompareOp::Lt};
  std::vector<PoolEntry> out;
  for (CompareOp op : kOps) {
    for (int c = kConstantMin; c <= kConstantMax; c += stride) {
      ExprPtr e = Expr::compare(op, NumericTerm::make_constant(c));
      out.push_back({e, render_expression(*e)});
    }
  }
  return out;
}

// Atoms with two operators: x {>,<} f * n for the nine fractions.
std::vector<PoolEntry> fraction_atoms() {
  std::vector<PoolEntry> out;
  for (CompareOp op : {CompareOp::Gt, CompareOp::Lt}) {
    for (const Fraction& f : kFractions) {
      ExprPtr e = Expr::compare(op, NumericTerm::fraction_of_total(f));
      out.push_back({e, render_expression(*e)});
    }
  }
  return out;
}

// Number of unordered child pairs drawn from pools of the given sizes.
std::size_t pair_count(std::size_t a_size, std::size_t b_size, bool same_pool) {
  return same_pool ? a_size * (a_size + 1) / 2 : a_size * b_size;
}

std::size_t pool_size(int ops, const std::vector<std::size_t>& sizes) {
  return static_cast<std::size_t>(ops) < sizes.size()
             ? sizes[static_cast<std::size_t>(ops)]
             : 0;
}

// Sizes of the expression pools per operator budget, computed without
// materializing anything.
std::vector<std::size_t> pool_sizes(int max_ops, int stride) {
  std::vector<std::size_t> sizes(static_cast<std::size_t>(max_ops) + 1, 0);
  if (max_ops >= 1) {
    sizes[1] = 4 * static_cast<std::size_t>((kConstantMax - kConstantMin) / stride + 1);
  }
  if (max_ops >= 2) sizes[2] = 2 * kFractions.size();
  for (int j = 3; j <= max_ops; ++j) {
    std::size_t total = 0;
    for (int a = 1; a * 2 <= j - 1; ++a) {
      const int b = j - 1 - a;
      total += 2 * pair_count(pool_size(a, sizes), pool_size(b, sizes), a == b);
    }
    sizes[static_cast<std::size_t>(j)] = total;
  }
  return sizes;
}

void combine_into(std::vector<PoolEntry>& out, const std::vector<PoolEntry>& a,
                  const std::vector<PoolEntry>& b, bool same_pool) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t j_begin = same_pool ? i : 0;
    for (std::size_t j = j_begin; j < b.size(); ++j) {
      // Children ordered by canonical text; both orders map to the same
      // canonical tree, so only one is generated.
      const PoolEntry& first = a[i].text <= b[j].text ? a[i] : b[j];
      const PoolEntry& second = a[i].text <= b[j].text ? b[j] : a[i];
      for (ExprKind kind : {ExprKind::And, ExprKind::Or}) {
        ExprPtr node = kind == ExprKind::And
                           ? Expr::logical_and(first.expr, second.expr)
                           : Expr::logical_or(first.expr, second.expr);
        std::string text = "(" + first.text +
                           (kind == ExprKind::And ? " and " : " or ") +
                           second.text + ")";
        out.push_back({std::move(node), std::move(text)});
      }
    }
  }
}

}  // namespace

std::size_t predicted_class_size(int k, const EnumerationOptions& options) {
  return pool_sizes(k, options.stride_for(k)).back();
}

ConceptClass enumerate_class(int k, const EnumerationOptions& options) {
  if (k < 1 || k > 5) {
    throw ConfigError("complexity class must be in [1, 5], got " + std::to_string(k));
  }
  const std::size_t predicted = predicted_class_size(k, options);
  if (predicted > options.class_size_cap) {
    throw ResourceLimit("class " + std::to_string(k) + " would hold " +
                        std::to_string(predicted) + " expressions, above the cap of " +
                        std::to_string(options.class_size_cap) +
                        "; raise the cap or coarsen the constant stride");
  }

  const int stride = options.stride_for(k);
  std::vector<std::vector<PoolEntry>> pools(static_cast<std::size_t>(k) + 1);
  if (k >= 1) pools[1] = constant_atoms(stride);
  if (k >= 2) pools[2] = fraction_atoms();
  for (int j = 3; j <= k; ++j) {
    auto& pool = pools[static_cast<std::size_t>(j)];
    for (int a = 1; a * 2 <= j - 1; ++a) {
      const int b = j - 1 - a;
      combine_into(pool, pools[static_cast<std::size_t>(a)],
                   pools[static_cast<std::size_t>(b)], a == b);
    }
  }

  auto& final_pool = pools[static_cast<std::size_t>(k)];
  std::sort(final_pool.begin(), final_pool.end(),
            [](const PoolEntry& a, const PoolEntry& b) { return a.text < b.text; });

  ConceptClass cls;
  cls.k = k;
  cls.concepts.reserve(final_pool.size());
  std::unordered_map<std::uint64_t, const std::string*> seen_ids;
  seen_ids.reserve(final_pool.size() * 2);
  for (PoolEntry& entry : final_pool) {
    if (!cls.concepts.empty() && cls.concepts.back().text == entry.text) {
      continue;  // syntactic duplicate
    }
    Concept c;
    c.id = concept_id_for(entry.text);
    c.expr = std::move(entry.expr);
    c.text = std::move(entry.text);
    c.complexity = k;
    c.status = ConceptStatus::Raw;
    cls.concepts.push_back(std::move(c));
    auto [it, inserted] =
        seen_ids.emplace(cls.concepts.back().id, &cls.concepts.back().text);
    if (!inserted) {
      throw Error("concept id hash collision between '" + *it->second +
                  "' and '" + cls.concepts.back().text + "'");
    }
  }
  return cls;
}

std::vector<Concept> sample_concepts(const ConceptClass& cls, std::size_t count,
                                     std::uint64_t seed) {
  std::vector<const Concept*> eligible = cls.retained();
  if (eligible.size() < count) {
    throw InsufficientConcepts("class " + std::to_string(cls.k) + " has " +
                               std::to_string(eligible.size()) +
                               " retained concepts; requested " +
                               std::to_string(count));
  }
  SeededRng rng(seed);
  std::vector<std::size_t> picks = rng.sample_indices(eligible.size(), count);
  std::sort(picks.begin(), picks.end());  // back to canonical order
  std::vector<Concept> out;
  out.reserve(count);
  for (std::size_t i : picks) out.push_back(*eligible[i]);
  return out;
}

}  // namespace lotbench
