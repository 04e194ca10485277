#include "fwsim/haplotype_store.hpp"

#include <algorithm>
#include <cassert>
#include <limits>
#include <numeric>
#include <string>

#include "fwsim/error.hpp"

namespace fwsim {
namespace {

// Short fixed-length compare; std::equal lowers to a memcmp call here.
inline bool same_point(std::span<const Allele> h, const Allele* p) {
  for (std::size_t j = 0; j < h.size(); ++j) {
    if (h[j] != p[j]) return false;
  }
  return true;
}

}  // namespace

CountTable CountTable::from_rows(std::vector<HaplotypeCount> rows) {
  if (!rows.empty()) {
    const std::size_t loci = rows.front().haplotype.size();
    for (const auto& row : rows) {
      if (row.haplotype.size() != loci) {
        throw InvalidParameter("count table: haplotypes of differing lengths");
      }
    }
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.haplotype < b.haplotype; });
  std::vector<HaplotypeCount> merged;
  merged.reserve(rows.size());
  for (auto& row : rows) {
    if (row.count == 0) continue;
    if (!merged.empty() && merged.back().haplotype == row.haplotype) {
      merged.back().count += row.count;
    } else {
      merged.push_back(std::move(row));
    }
  }
  CountTable table;
  table.rows_ = std::move(merged);
  return table;
}

CountTable CountTable::from_sorted_unique(std::vector<HaplotypeCount> rows) {
  assert(std::adjacent_find(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
           return !(a.haplotype < b.haplotype);
         }) == rows.end());
  CountTable table;
  table.rows_ = std::move(rows);
  return table;
}

std::uint64_t CountTable::total() const noexcept {
  std::uint64_t sum = 0;
  for (const auto& row : rows_) sum += row.count;
  return sum;
}

KdCountTree::KdCountTree(std::size_t loci) : loci_(loci) {
  if (loci == 0) throw InvalidParameter("k-d tree: locus count must be positive");
}

void KdCountTree::reserve(std::size_t nodes) {
  nodes_.reserve(nodes);
  points_.reserve(nodes * loci_);
}

void KdCountTree::clear() noexcept {
  nodes_.clear();
  points_.clear();
  total_ = 0;
}

void KdCountTree::throw_length_mismatch(std::size_t n) const {
  throw InvalidParameter("k-d tree: haplotype has " + std::to_string(n) + " loci, expected " +
                         std::to_string(loci_));
}

void KdCountTree::insert_or_add(std::span<const Allele> h, std::uint64_t delta) {
  check_length(h.size());
  if (delta == 0) throw InvalidParameter("k-d tree: count increment must be positive");

  auto append = [&]() -> std::int32_t {
    if (nodes_.size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max())) {
      throw InvalidParameter("k-d tree: node limit reached");
    }
    nodes_.push_back(Node{delta, -1, -1});
    points_.insert(points_.end(), h.begin(), h.end());
    total_ += delta;
    return static_cast<std::int32_t>(nodes_.size() - 1);
  };

  if (nodes_.empty()) {
    append();
    return;
  }

  std::size_t node = 0;
  std::size_t dim = 0;
  for (;;) {
    const Allele* p = points_.data() + node * loci_;
    if (same_point(h, p)) {
      nodes_[node].count += delta;
      total_ += delta;
      return;
    }
    const bool go_left = h[dim] < p[dim];
    const std::int32_t child = go_left ? nodes_[node].left : nodes_[node].right;
    if (child < 0) {
      const std::int32_t created = append();
      if (go_left) {
        nodes_[node].left = created;
      } else {
        nodes_[node].right = created;
      }
      return;
    }
    node = static_cast<std::size_t>(child);
    if (++dim == loci_) dim = 0;
  }
}

std::uint64_t KdCountTree::lookup(std::span<const Allele> h) const {
  check_length(h.size());
  if (nodes_.empty()) return 0;
  std::int32_t node = 0;
  std::size_t dim = 0;
  while (node >= 0) {
    const Allele* p = points_.data() + static_cast<std::size_t>(node) * loci_;
    if (same_point(h, p)) return nodes_[static_cast<std::size_t>(node)].count;
    node = h[dim] < p[dim] ? nodes_[static_cast<std::size_t>(node)].left
                           : nodes_[static_cast<std::size_t>(node)].right;
    if (++dim == loci_) dim = 0;
  }
  return 0;
}

CountTable KdCountTree::collect_sorted() const {
  std::vector<std::size_t> order(nodes_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [this](std::size_t a, std::size_t b) {
    const auto pa = point(a);
    const auto pb = point(b);
    return std::lexicographical_compare(pa.begin(), pa.end(), pb.begin(), pb.end());
  });
  std::vector<HaplotypeCount> rows;
  rows.reserve(order.size());
  for (std::size_t node : order) {
    rows.push_back({Haplotype(point(node)), nodes_[node].count});
  }
  return CountTable::from_sorted_unique(std::move(rows));
}

DepthStats KdCountTree::depth_stats() const {
  DepthStats stats;
  if (nodes_.empty()) return stats;
  std::vector<std::size_t> depth(nodes_.size(), 0);
  // Children are always created after their parent, so one forward pass works.
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    for (std::int32_t child : {nodes_[i].left, nodes_[i].right}) {
      if (child >= 0) depth[static_cast<std::size_t>(child)] = depth[i] + 1;
    }
    sum += static_cast<double>(depth[i]);
    stats.max = std::max(stats.max, depth[i]);
  }
  stats.mean = sum / static_cast<double>(nodes_.size());
  return stats;
}

}  // namespace fwsim
