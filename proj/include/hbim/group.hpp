#pragma once

// Finite groups given by Cayley tables, the builtin families, and the left and
// right regular representations on C^n = l^2(G).
//
// Haar measure on a finite group is the counting measure; every sum over G in
// this library is a plain sum. Finite groups are unimodular, so the modular
// function is identically 1 and is dropped from every formula.

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <numeric>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "hbim/errors.hpp"
#include "hbim/linalg.hpp"

namespace hbim {

/// Index of an element inside its owning group. The identity is always 0.
struct GroupElement {
  std::size_t index = 0;
  friend bool operator==(GroupElement, GroupElement) = default;
};

inline constexpr std::size_t kDefaultOrderCap = 64;

class FiniteGroup {
 public:
  using Table = std::vector<std::vector<std::size_t>>;

  /// Validates the group axioms; throws AxiomError naming the first failure.
  FiniteGroup(Table table, std::vector<std::string> labels = {},
              std::string name = {})
      : table_(std::move(table)), labels_(std::move(labels)),
        name_(std::move(name)) {
    validate();
    if (labels_.empty()) {
      for (std::size_t i = 0; i < order(); ++i) labels_.push_back(std::to_string(i));
    }
    if (name_.empty()) name_ = "custom(" + std::to_string(order()) + ")";
  }

  std::size_t order() const { return table_.size(); }
  const std::string& name() const { return name_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const Table& table() const { return table_; }

  std::size_t mul(std::size_t a, std::size_t b) const { return table_[a][b]; }
  std::size_t inv(std::size_t a) const { return inverse_[a]; }
  GroupElement mul(GroupElement a, GroupElement b) const { return {mul(a.index, b.index)}; }
  GroupElement inv(GroupElement a) const { return {inv(a.index)}; }
  GroupElement element(std::size_t i) const {
    if (i >= order()) throw DimensionError("group element index out of range");
    return {i};
  }

  bool is_abelian() const {
    for (std::size_t i = 0; i < order(); ++i)
      for (std::size_t j = 0; j < i; ++j)
        if (table_[i][j] != table_[j][i]) return false;
    return true;
  }

  std::size_t element_order(std::size_t a) const {
    std::size_t k = 1;
    for (std::size_t x = a; x != 0; x = mul(x, a)) ++k;
    return k;
  }

  /// Least common multiple of all element orders.
  std::size_t exponent() const {
    std::size_t e = 1;
    for (std::size_t i = 0; i < order(); ++i) e = std::lcm(e, element_order(i));
    return e;
  }

  /// Subgroup generated by a set of element indices, as a sorted index list.
  std::vector<std::size_t> generated_subgroup(const std::vector<std::size_t>& gens) const {
    std::vector<char> in(order(), 0);
    std::vector<std::size_t> members{0};
    in[0] = 1;
    for (std::size_t k = 0; k < members.size(); ++k) {
      for (std::size_t g : gens) {
        const std::size_t x = mul(members[k], g);
        if (!in[x]) {
          in[x] = 1;
          members.push_back(x);
        }
      }
    }
    std::sort(members.begin(), members.end());
    return members;
  }

  /// Conjugacy classes, each sorted, ordered by smallest member.
  std::vector<std::vector<std::size_t>> conjugacy_classes() const {
    std::vector<char> seen(order(), 0);
    std::vector<std::vector<std::size_t>> classes;
    for (std::size_t a = 0; a < order(); ++a) {
      if (seen[a]) continue;
      std::vector<std::size_t> cls;
      for (std::size_t g = 0; g < order(); ++g) {
        const std::size_t c = mul(mul(g, a), inv(g));
        if (!seen[c]) {
          seen[c] = 1;
          cls.push_back(c);
        }
      }
      std::sort(cls.begin(), cls.end());
      classes.push_back(std::move(cls));
    }
    return classes;
  }

 private:
  void validate() {
    const std::size_t n = table_.size();
    if (n == 0) throw AxiomError("group table is empty");
    for (std::size_t i = 0; i < n; ++i) {
      if (table_[i].size() != n) throw AxiomError("group table row " + std::to_string(i) + " has wrong length");
      for (std::size_t j = 0; j < n; ++j)
        if (table_[i][j] >= n)
          throw AxiomError("closure fails at (" + std::to_string(i) + "," + std::to_string(j) + ")");
    }
    if (!labels_.empty() && labels_.size() != n) throw AxiomError("label count does not match order");
    for (std::size_t j = 0; j < n; ++j)
      if (table_[0][j] != j || table_[j][0] != j)
        throw AxiomError("identity axiom fails at element " + std::to_string(j) +
                         " (index 0 must be the identity)");
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        for (std::size_t k = 0; k < n; ++k)
          if (table_[table_[i][j]][k] != table_[i][table_[j][k]])
            throw AxiomError("associativity fails at (" + std::to_string(i) + "," + std::to_string(j) + "," +
                             std::to_string(k) + ")");
    inverse_.assign(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t found = 0;
      for (std::size_t j = 0; j < n; ++j)
        if (table_[i][j] == 0) {
          inverse_[i] = j;
          ++found;
        }
      if (found != 1) throw AxiomError("element " + std::to_string(i) + " has no unique inverse");
    }
  }

  Table table_;
  std::vector<std::string> labels_;
  std::string name_;
  std::vector<std::size_t> inverse_;
};

// ---------------------------------------------------------------------------
// Builtin families

inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, std::size_t cap = kDefaultOrderCap);

inline FiniteGroup cyclic_group(std::size_t n, std::size_t cap = kDefaultOrderCap) {
  if (n == 0) throw ConfigError("cyclic group order must be positive");
  if (n > cap) throw SizeLimitError("cyclic group of order " + std::to_string(n) + " exceeds order cap");
  FiniteGroup::Table t(n, std::vector<std::size_t>(n));
  std::vector<std::string> labels(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) t[i][j] = (i + j) % n;
    labels[i] = i == 0 ? "e" : (i == 1 ? "a" : "a^" + std::to_string(i));
  }
  return FiniteGroup(std::move(t), std::move(labels), n == 1 ? "trivial" : "Z" + std::to_string(n));
}

/// Dihedral group of order 2n; element r^k s^b sits at index k + n*b.
inline FiniteGroup dihedral_group(std::size_t n, std::size_t cap = kDefaultOrderCap) {
  if (n == 0) throw ConfigError("dihedral parameter must be positive");
  const std::size_t order = 2 * n;
  if (order > cap) throw SizeLimitError("dihedral group of order " + std::to_string(order) + " exceeds order cap");
  FiniteGroup::Table t(order, std::vector<std::size_t>(order));
  std::vector<std::string> labels(order);
  for (std::size_t x = 0; x < order; ++x) {
    const std::size_t a = x % n, b = x / n;
    labels[x] = (a == 0 ? std::string(b ? "" : "e") : (a == 1 ? "r" : "r^" + std::to_string(a))) + (b ? "s" : "");
    for (std::size_t y = 0; y < order; ++y) {
      const std::size_t c = y % n, d = y / n;
      const std::size_t rot = b == 0 ? (a + c) % n : (a + n - c) % n;
      t[x][y] = rot + n * ((b + d) % 2);
    }
  }
  return FiniteGroup(std::move(t), std::move(labels), "D" + std::to_string(n));
}

/// Symmetric group on k points; permutations in lexicographic order, composed
/// right-to-left ((st)(i) = s(t(i))).
inline FiniteGroup symmetric_group(std::size_t k, std::size_t cap = kDefaultOrderCap) {
  if (k == 0) throw ConfigError("symmetric group degree must be positive");
  if (k > 5) throw SizeLimitError("symmetric group degree is limited to 5");
  std::size_t order = 1;
  for (std::size_t i = 2; i <= k; ++i) order *= i;
  if (order > cap) throw SizeLimitError("symmetric group of order " + std::to_string(order) + " exceeds order cap");
  std::vector<std::vector<std::size_t>> perms;
  std::vector<std::size_t> p(k);
  std::iota(p.begin(), p.end(), 0);
  do perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto index_of = [&](const std::vector<std::size_t>& q) {
    return static_cast<std::size_t>(std::lower_bound(perms.begin(), perms.end(), q) - perms.begin());
  };
  FiniteGroup::Table t(order, std::vector<std::size_t>(order));
  std::vector<std::string> labels(order);
  for (std::size_t i = 0; i < order; ++i) {
    std::string lab = "[";
    for (std::size_t x = 0; x < k; ++x) lab += std::to_string(perms[i][x]) + (x + 1 < k ? "," : "]");
    labels[i] = lab;
    for (std::size_t j = 0; j < order; ++j) {
      std::vector<std::size_t> c(k);
      for (std::size_t x = 0; x < k; ++x) c[x] = perms[i][perms[j][x]];
      t[i][j] = index_of(c);
    }
  }
  return FiniteGroup(std::move(t), std::move(labels), k == 1 ? "trivial" : "S" + std::to_string(k));
}

/// Quaternion group {±1, ±i, ±j, ±k}, indexed 1,-1,i,-i,j,-j,k,-k.
inline FiniteGroup quaternion_group() {
  // unit products u*v = sign * unit, units 0=1, 1=i, 2=j, 3=k
  static constexpr int kUnit[4][4] = {{0, 1, 2, 3}, {1, 0, 3, 2}, {2, 3, 0, 1}, {3, 2, 1, 0}};
  static constexpr int kSign[4][4] = {{1, 1, 1, 1}, {1, -1, 1, -1}, {1, -1, -1, 1}, {1, 1, -1, -1}};
  FiniteGroup::Table t(8, std::vector<std::size_t>(8));
  for (std::size_t x = 0; x < 8; ++x)
    for (std::size_t y = 0; y < 8; ++y) {
      const std::size_t u = x / 2, v = y / 2;
      int sign = kSign[u][v] * (x % 2 ? -1 : 1) * (y % 2 ? -1 : 1);
      t[x][y] = static_cast<std::size_t>(kUnit[u][v]) * 2 + (sign < 0 ? 1 : 0);
    }
  return FiniteGroup(std::move(t), {"1", "-1", "i", "-i", "j", "-j", "k", "-k"}, "Q8");
}

/// Direct product; (a_i, b_j) sits at index i*|b| + j.
inline FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b, std::size_t cap) {
  const std::size_t na = a.order(), nb = b.order(), n = na * nb;
  if (n > cap) throw SizeLimitError("product group of order " + std::to_string(n) + " exceeds order cap");
  FiniteGroup::Table t(n, std::vector<std::size_t>(n));
  std::vector<std::string> labels(n);
  for (std::size_t x = 0; x < n; ++x) {
    labels[x] = "(" + a.labels()[x / nb] + "," + b.labels()[x % nb] + ")";
    for (std::size_t y = 0; y < n; ++y)
      t[x][y] = a.mul(x / nb, y / nb) * nb + b.mul(x % nb, y % nb);
  }
  return FiniteGroup(std::move(t), std::move(labels), a.name() + "x" + b.name());
}

inline FiniteGroup klein_four_group() {
  FiniteGroup z2 = cyclic_group(2);
  FiniteGroup::Table t = direct_product(z2, z2).table();
  return FiniteGroup(std::move(t), {"e", "a", "b", "ab"}, "Klein4");
}

/// Builds a builtin group from its name: trivial, Z<n> (or C<n>), D<n> (order
/// 2n), S<k>, Q8, Klein4 (or V4), and direct products joined by 'x', e.g.
/// "Z2xZ4".
inline FiniteGroup make_builtin(std::string_view name, std::size_t cap = kDefaultOrderCap) {
  if (const auto pos = name.find('x'); pos != std::string_view::npos) {
    FiniteGroup a = make_builtin(name.substr(0, pos), cap);
    FiniteGroup b = make_builtin(name.substr(pos + 1), cap);
    return direct_product(a, b, cap);
  }
  auto number = [&](std::size_t from) -> std::size_t {
    const std::string_view digits = name.substr(from);
    if (digits.empty() || digits.size() > 6 ||
        !std::all_of(digits.begin(), digits.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }))
      throw ConfigError("unknown group name '" + std::string(name) + "'");
    return static_cast<std::size_t>(std::stoul(std::string(digits)));
  };
  if (name == "trivial" || name == "1") return cyclic_group(1, cap);
  if (name == "Q8") {
    if (cap < 8) throw SizeLimitError("Q8 exceeds order cap");
    return quaternion_group();
  }
  if (name == "Klein4" || name == "V4") {
    if (cap < 4) throw SizeLimitError("Klein4 exceeds order cap");
    return klein_four_group();
  }
  if (name.empty()) throw ConfigError("empty group name");
  switch (name[0]) {
    case 'Z':
    case 'C': return cyclic_group(number(1), cap);
    case 'D': return dihedral_group(number(1), cap);
    case 'S': return symmetric_group(number(1), cap);
    default: throw ConfigError("unknown group name '" + std::string(name) + "'");
  }
}

// ---------------------------------------------------------------------------
// Regular representations

/// (lambda_s f)(t) = f(s^-1 t): entry (t, s^-1 t) is 1.
inline CMatrix left_regular(const FiniteGroup& g, GroupElement s) {
  const std::size_t n = g.order();
  CMatrix m = CMatrix::Zero(n, n);
  const std::size_t si = g.inv(g.element(s.index).index);
  for (std::size_t t = 0; t < n; ++t) m(t, g.mul(si, t)) = 1.0;
  return m;
}

/// (rho_r f)(s) = f(sr): entry (s, sr) is 1.
inline CMatrix right_regular(const FiniteGroup& g, GroupElement r) {
  const std::size_t n = g.order();
  CMatrix m = CMatrix::Zero(n, n);
  g.element(r.index);
  for (std::size_t s = 0; s < n; ++s) m(s, g.mul(s, r.index)) = 1.0;
  return m;
}

inline CMatrix left_regular(const FiniteGroup& g, std::size_t s) { return left_regular(g, GroupElement{s}); }
inline CMatrix right_regular(const FiniteGroup& g, std::size_t r) { return right_regular(g, GroupElement{r}); }

}  // namespace hbim
