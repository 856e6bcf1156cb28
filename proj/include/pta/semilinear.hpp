#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace pta {

/// A vector in N^s with exact (overflow-checked) arithmetic.
class Vec {
 public:
  explicit Vec(std::vector<std::int64_t> entries);
  static Vec zero(int dim);

  int dim() const { return static_cast<int>(entries_.size()); }
  std::int64_t operator[](int i) const { return entries_[i]; }
  const std::vector<std::int64_t>& entries() const { return entries_; }

  Vec operator+(const Vec& other) const;
  bool is_zero() const;

  bool operator==(const Vec& other) const { return entries_ == other.entries_; }
  bool operator!=(const Vec& other) const { return entries_ != other.entries_; }
  bool operator<(const Vec& other) const { return entries_ < other.entries_; }

  std::string to_string() const;  // space-separated decimal entries

 private:
  std::vector<std::int64_t> entries_;
};

/// {base + sum m_i * periods[i] | m_i in N}. All-zero periods are dropped at
/// construction; they do not change the set.
class LinearSet {
 public:
  LinearSet(Vec base, std::vector<Vec> periods);

  const Vec& base() const { return base_; }
  const std::vector<Vec>& periods() const { return periods_; }
  int dim() const { return base_.dim(); }

 private:
  Vec base_;
  std::vector<Vec> periods_;
};

/// Finite union of linear sets of one dimension; no components means the
/// empty set.
class SemilinearSet {
 public:
  SemilinearSet(int dim, std::vector<LinearSet> components);
  static SemilinearSet empty(int dim) { return SemilinearSet(dim, {}); }

  int dim() const { return dim_; }
  const std::vector<LinearSet>& components() const { return components_; }

 private:
  int dim_;
  std::vector<LinearSet> components_;
};

bool member(const SemilinearSet& set, const Vec& d);

/// Index of a component containing d plus period coefficients that
/// reconstruct d exactly; absent iff d is not in the set.
struct MembershipWitness {
  int component;
  std::vector<std::int64_t> coefficients;
};

std::optional<MembershipWitness> membership_witness(const SemilinearSet& set,
                                                    const Vec& d);

/// System of linear equations over integer variables with per-variable
/// nonnegative lower bounds. Coefficients may be negative.
struct LinearEquation {
  std::vector<std::int64_t> coefficients;
  std::int64_t rhs;
};

struct LinearSystem {
  int num_vars;
  std::vector<LinearEquation> equations;
  std::vector<std::int64_t> lower_bounds;  // one per variable, all >= 0
};

/// Complete search for a solution of sys over the naturals (respecting the
/// lower bounds). Returns an assignment or nullopt when none exists.
std::optional<std::vector<std::int64_t>> solve_nonneg(const LinearSystem& sys);

}  // namespace pta
