#include "sigchoice/attribute_lattice.hpp"

#include <algorithm>
#include <bit>
#include <string>

#include "sigchoice/error.hpp"

namespace sigchoice {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Size: return "size";
    case ErrorKind::Index: return "index";
    case ErrorKind::Dimension: return "dimension";
    case ErrorKind::Numeric: return "numeric";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::NotStochastic: return "stochasticity";
    case ErrorKind::Structure: return "structure";
    case ErrorKind::EmptyData: return "empty-data";
    case ErrorKind::Parameter: return "parameter";
    case ErrorKind::Partition: return "partition";
    case ErrorKind::EmptyBin: return "empty-bin";
    case ErrorKind::Dependency: return "dependency";
    case ErrorKind::Convergence: return "convergence";
    case ErrorKind::Io: return "I/O";
    case ErrorKind::Parse: return "parse";
  }
  return "unknown";
}

int AttributeSubset::size() const noexcept { return std::popcount(mask_); }

std::vector<int> AttributeSubset::members() const {
  std::vector<int> out;
  for (std::uint32_t m = mask_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m) + 1);
  return out;
}

AttributeLattice::AttributeLattice(int attributes) : attributes_(attributes) {
  if (attributes < 0 || attributes > kMaxAttributes) {
    throw Error(ErrorKind::Size, "attribute count " + std::to_string(attributes) +
                                     " outside [0, " + std::to_string(kMaxAttributes) + "]");
  }
  const std::uint32_t count = 1U << attributes;
  order_.reserve(count);
  for (std::uint32_t mask = 0; mask < count; ++mask) order_.emplace_back(mask);
  std::stable_sort(order_.begin(), order_.end(), [](AttributeSubset a, AttributeSubset b) {
    return a.size() < b.size();
  });

  stage_by_mask_.assign(count, 0);
  for (std::size_t i = 0; i < order_.size(); ++i) {
    stage_by_mask_[order_[i].mask()] = static_cast<int>(i) + 1;
  }
}

AttributeSubset AttributeLattice::subset(int stage) const {
  if (stage < 1 || stage > size()) {
    throw Error(ErrorKind::Index, "stage " + std::to_string(stage) + " outside [1, " +
                                      std::to_string(size()) + "]");
  }
  return order_[static_cast<std::size_t>(stage - 1)];
}

int AttributeLattice::stage_of(AttributeSubset subset) const {
  if (subset.mask() >= stage_by_mask_.size()) {
    throw Error(ErrorKind::Index, "subset mask " + std::to_string(subset.mask()) +
                                      " has attributes beyond L = " + std::to_string(attributes_));
  }
  return stage_by_mask_[subset.mask()];
}

std::vector<int> AttributeLattice::sub_support(int stage) const {
  const std::uint32_t mask = subset(stage).mask();
  std::vector<int> out;
  if (mask == 0) return out;
  out.reserve((std::size_t{1} << std::popcount(mask)) - 1);
  // Standard submask walk; skips the mask itself and ends after the empty set.
  for (std::uint32_t sub = (mask - 1) & mask;; sub = (sub - 1) & mask) {
    out.push_back(stage_by_mask_[sub]);
    if (sub == 0) break;
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::vector<int>> AttributeLattice::levels() const {
  std::vector<std::vector<int>> out(static_cast<std::size_t>(attributes_) + 1);
  for (int stage = 1; stage <= size(); ++stage) {
    out[static_cast<std::size_t>(order_[static_cast<std::size_t>(stage - 1)].size())].push_back(stage);
  }
  return out;
}

AttributeLattice enumerate_subsets(int attributes) { return AttributeLattice(attributes); }

}  // namespace sigchoice
