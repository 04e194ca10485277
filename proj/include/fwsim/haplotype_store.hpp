#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace fwsim {

using Allele = std::int32_t;

// A point in Z^r: one repeat count per locus.
class Haplotype {
 public:
  Haplotype() = default;
  explicit Haplotype(std::size_t loci) : alleles_(loci, 0) {}
  Haplotype(std::initializer_list<Allele> alleles) : alleles_(alleles) {}
  explicit Haplotype(std::vector<Allele> alleles) : alleles_(std::move(alleles)) {}
  explicit Haplotype(std::span<const Allele> alleles)
      : alleles_(alleles.begin(), alleles.end()) {}

  std::size_t size() const noexcept { return alleles_.size(); }
  bool empty() const noexcept { return alleles_.empty(); }
  Allele operator[](std::size_t j) const { return alleles_[j]; }
  Allele& operator[](std::size_t j) { return alleles_[j]; }
  std::span<const Allele> alleles() const noexcept { return alleles_; }
  std::span<Allele> alleles() noexcept { return alleles_; }

  friend bool operator==(const Haplotype&, const Haplotype&) = default;
  friend auto operator<=>(const Haplotype&, const Haplotype&) = default;

 private:
  std::vector<Allele> alleles_;
};

struct HaplotypeCount {
  Haplotype haplotype;
  std::uint64_t count = 0;

  friend bool operator==(const HaplotypeCount&, const HaplotypeCount&) = default;
};

// Haplotype/count rows in strictly increasing lexicographic haplotype order,
// every count >= 1, all haplotypes of equal length.
class CountTable {
 public:
  CountTable() = default;

  // Sorts rows, merges duplicates and drops zero counts. Throws
  // InvalidParameter on mixed haplotype lengths.
  static CountTable from_rows(std::vector<HaplotypeCount> rows);

  // Takes rows already known to satisfy the invariants (checked in debug).
  static CountTable from_sorted_unique(std::vector<HaplotypeCount> rows);

  const std::vector<HaplotypeCount>& rows() const noexcept { return rows_; }
  std::size_t size() const noexcept { return rows_.size(); }
  bool empty() const noexcept { return rows_.empty(); }
  auto begin() const noexcept { return rows_.begin(); }
  auto end() const noexcept { return rows_.end(); }
  const HaplotypeCount& operator[](std::size_t i) const { return rows_[i]; }

  std::uint64_t total() const noexcept;
  // Locus count of the rows, 0 for an empty table.
  std::size_t loci() const noexcept { return rows_.empty() ? 0 : rows_.front().haplotype.size(); }

  friend bool operator==(const CountTable&, const CountTable&) = default;

 private:
  std::vector<HaplotypeCount> rows_;
};

struct StoreTotals {
  std::uint64_t distinct = 0;
  std::uint64_t total = 0;

  friend bool operator==(const StoreTotals&, const StoreTotals&) = default;
};

struct DepthStats {
  double mean = 0.0;
  std::size_t max = 0;
};

// k-d tree keyed by haplotype, holding one positive count per distinct point.
// Split dimension at depth t is t mod r; keys equal on the split coordinate
// descend right. No rebalancing and no deletion: one tree is built per
// generation from an effectively random insertion order.
class KdCountTree {
 public:
  explicit KdCountTree(std::size_t loci);

  std::size_t loci() const noexcept { return loci_; }

  void reserve(std::size_t nodes);
  // Removes every node but keeps the allocated storage.
  void clear() noexcept;

  // Adds `delta` (>= 1) to the count at `h`, creating the node if absent.
  void insert_or_add(std::span<const Allele> h, std::uint64_t delta);
  void insert_or_add(const Haplotype& h, std::uint64_t delta) {
    insert_or_add(h.alleles(), delta);
  }

  // Stored count, 0 if absent.
  std::uint64_t lookup(std::span<const Allele> h) const;
  std::uint64_t lookup(const Haplotype& h) const { return lookup(h.alleles()); }

  CountTable collect_sorted() const;
  StoreTotals totals() const noexcept { return {nodes_.size(), total_}; }
  bool empty() const noexcept { return nodes_.empty(); }

  // Nodes in insertion order; this is the engine's deterministic traversal.
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::span<const Allele> point(std::size_t node) const {
    return {points_.data() + node * loci_, loci_};
  }
  std::uint64_t count(std::size_t node) const { return nodes_[node].count; }

  DepthStats depth_stats() const;

 private:
  struct Node {
    std::uint64_t count = 0;
    std::int32_t left = -1;
    std::int32_t right = -1;
  };

  void check_length(std::size_t n) const {
    if (n != loci_) throw_length_mismatch(n);
  }
  [[noreturn]] void throw_length_mismatch(std::size_t n) const;

  std::size_t loci_;
  std::vector<Node> nodes_;
  std::vector<Allele> points_;
  std::uint64_t total_ = 0;
};

}  // namespace fwsim
