#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

namespace twistlab {

using Json = nlohmann::json;

/// Element of a finite-table group, by table index (0 is the identity).
struct FiniteIndex {
  std::uint32_t value = 0;
  auto operator<=>(const FiniteIndex&) const = default;
};

/// Freely reduced word; letter +i is the generator x_i, -i its inverse (i >= 1).
struct Word {
  std::vector<std::int32_t> letters;
  bool operator==(const Word&) const = default;
};

struct LatticeVector {
  std::vector<std::int64_t> coords;
  bool operator==(const LatticeVector&) const = default;
};

/// Element (k, h) of an extension: k indexes K, h indexes the enumeration of Lambda.
struct ExtPair {
  std::uint32_t k = 0;
  std::uint32_t h = 0;
  bool operator==(const ExtPair&) const = default;
};

/// Canonical value type for group elements. Ordering is shortlex for words,
/// (l1 length, canonical word) for lattice vectors, and index order for
/// finite backends; extension pairs order as (h, k).
class GroupElement {
 public:
  using Value = std::variant<FiniteIndex, Word, LatticeVector, ExtPair>;

  GroupElement() = default;
  GroupElement(FiniteIndex v) : value_(v) {}
  GroupElement(Word v) : value_(std::move(v)) {}
  GroupElement(LatticeVector v) : value_(std::move(v)) {}
  GroupElement(ExtPair v) : value_(v) {}

  const Value& value() const { return value_; }
  template <class T>
  const T* get_if() const { return std::get_if<T>(&value_); }

  bool operator==(const GroupElement&) const = default;
  std::strong_ordering operator<=>(const GroupElement& other) const;

  std::size_t hash() const;

 private:
  Value value_;
};

struct GroupElementHash {
  std::size_t operator()(const GroupElement& g) const { return g.hash(); }
};

enum class GroupKind { finite_table, free, int_lattice, extension };

class Group;

/// Extension data: K finite, Lambda finite, action as permutations of K indexed
/// by Lambda enumeration index, factor set as K index per (h1, h2).
struct ExtensionData;

/// Immutable, cheaply copyable group descriptor.
class Group {
 public:
  /// Validates associativity, identity at index 0 and inverses.
  static Group finite_table(std::vector<std::vector<std::uint32_t>> table);
  static Group free(int rank);
  static Group int_lattice(int dim);

  GroupKind kind() const;
  bool is_finite() const;
  /// Throws NotFinite for infinite backends.
  std::size_t order() const;

  GroupElement identity() const;
  bool contains(const GroupElement& g) const;
  bool is_identity(const GroupElement& g) const;

  GroupElement compose(const GroupElement& a, const GroupElement& b) const;
  GroupElement invert(const GroupElement& a) const;

  // Finite backends only.
  std::size_t index_of(const GroupElement& g) const;
  GroupElement element_at(std::size_t index) const;
  std::vector<GroupElement> elements() const;
  /// Composition on enumeration indices.
  std::uint32_t compose_index(std::uint32_t a, std::uint32_t b) const;
  std::uint32_t invert_index(std::uint32_t a) const;

  int rank() const;  // free
  int dim() const;   // int-lattice
  const ExtensionData& extension() const;

  /// Word length w.r.t. the standard generators (free, int-lattice). For
  /// extensions the length of (k, h) is the length of h, which is 0 for finite Lambda.
  std::size_t word_length(const GroupElement& g) const;

  /// All elements of word length <= r in shortlex order; every element for finite groups.
  std::vector<GroupElement> enumerate_ball(int r) const;
  /// |B_r| without enumerating (saturates at SIZE_MAX).
  std::size_t ball_size(int r) const;

  Json to_json() const;
  static Group from_json(const Json& j);

  Json element_to_json(const GroupElement& g) const;
  GroupElement element_from_json(const Json& j) const;
  std::string element_to_string(const GroupElement& g) const;

  /// Same descriptor: shared instance or structurally equal.
  bool operator==(const Group& other) const;

  struct Impl;

 private:
  explicit Group(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
  std::shared_ptr<const Impl> impl_;

  friend Group build_extension(const Group&, const Group&, const std::vector<std::vector<std::uint32_t>>&,
                               const std::vector<std::uint32_t>&);
};

struct ExtensionData {
  Group k;
  Group lambda;
  std::vector<std::vector<std::uint32_t>> action;  // action[h][k] = phi_h(k)
  std::vector<std::uint32_t> factor_set;           // factor_set[h1 * |Lambda| + h2]
};

/// Builds the group K x Lambda with product
/// (k1, h1)(k2, h2) = (k1 phi_h1(k2) kappa(h1, h2), h1 h2) and section s(h) = (e, h).
/// Throws InvalidAction / InvalidFactorSet with a witness.
Group build_extension(const Group& k, const Group& lambda, const std::vector<std::vector<std::uint32_t>>& action,
                      const std::vector<std::uint32_t>& factor_set);

/// Parses "x1 x2^-1" style words ("e" or "" for the identity) and freely reduces.
Word parse_word(const std::string& text, int rank);
std::string format_word(const Word& w);
Word reduce_word(std::vector<std::int32_t> letters);

}  // namespace twistlab
