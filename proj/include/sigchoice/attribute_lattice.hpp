#pragma once

#include <cstdint>
#include <vector>

namespace sigchoice {

/// A subset of the attribute set {1..L}, stored as a bit mask where bit (a-1)
/// marks attribute a.
class AttributeSubset {
 public:
  constexpr AttributeSubset() = default;
  constexpr explicit AttributeSubset(std::uint32_t mask) : mask_(mask) {}

  constexpr std::uint32_t mask() const noexcept { return mask_; }
  int size() const noexcept;
  constexpr bool contains(int attribute) const noexcept {
    return attribute >= 1 && attribute <= 32 && ((mask_ >> (attribute - 1)) & 1U) != 0;
  }
  /// Member attributes in ascending order, 1-based.
  std::vector<int> members() const;

  friend constexpr bool operator==(AttributeSubset, AttributeSubset) = default;

 private:
  std::uint32_t mask_ = 0;
};

/// True iff every member of `a` is a member of `b`.
constexpr bool is_subset(AttributeSubset a, AttributeSubset b) noexcept {
  return (a.mask() & ~b.mask()) == 0;
}

/// The power set of {1..L} in stage order: ascending cardinality, ties broken
/// by ascending mask value. Stage indices are 1-based, so stage 1 is the empty
/// set (the null message) and stage 2^L is the full attribute set.
///
/// Immutable once built.
class AttributeLattice {
 public:
  static constexpr int kMaxAttributes = 20;

  /// Throws Error(Size) unless 0 <= L <= kMaxAttributes.
  explicit AttributeLattice(int attributes);

  int attributes() const noexcept { return attributes_; }
  /// M = 2^L.
  int size() const noexcept { return static_cast<int>(order_.size()); }

  /// Subset assigned to a 1-based stage; throws Error(Index) when out of range.
  AttributeSubset subset(int stage) const;
  /// 1-based stage of a subset of {1..L}.
  int stage_of(AttributeSubset subset) const;

  const std::vector<AttributeSubset>& order() const noexcept { return order_; }

  /// Stages j < i whose subsets are strict subsets of stage i's subset, ascending.
  std::vector<int> sub_support(int stage) const;

  /// Stages grouped by subset cardinality; level k holds every stage whose
  /// subset has k members, in ascending stage order.
  std::vector<std::vector<int>> levels() const;

 private:
  int attributes_;
  std::vector<AttributeSubset> order_;
  std::vector<int> stage_by_mask_;
};

/// Free-function form of the lattice constructor.
AttributeLattice enumerate_subsets(int attributes);

}  // namespace sigchoice
