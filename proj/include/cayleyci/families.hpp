// Connection sets on G = U (+) V built from codimension-1 affine pieces
// u + {v in V : <v, w> = c}, the three constructions and their polynomial
// isomorphism maps.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cayleyci/gfp.hpp"
#include "cayleyci/polyring.hpp"

namespace cayleyci {

enum class Family { rank2p3, rank4p2, rankbinom };

std::string to_string(Family f);
// Throws usage_error for unknown names.
Family parse_family(std::string_view name);

struct GroupElement {
  FpVec u;
  FpVec v;

  GroupElement operator+(const GroupElement& o) const { return {u + o.u, v + o.v}; }
  GroupElement operator-(const GroupElement& o) const { return {u - o.u, v - o.v}; }
  GroupElement operator-() const { return {-u, -v}; }
  friend bool operator==(const GroupElement&, const GroupElement&) = default;
};

struct AffineClass {
  std::string label;
  FpVec offset;      // in U, nonzero
  FpVec functional;  // in V, nonzero
  FpScalar rhs;

  bool contains(const GroupElement& g) const {
    return g.u == offset && fp_dot(g.v, functional) == rhs;
  }
  AffineClass negated() const;
  // Same point set: equal offsets and (functional, rhs) proportional.
  bool same_set(const AffineClass& o) const;
  bool disjoint(const AffineClass& o) const;
};

class ConnectionSet {
 public:
  // Validates: offsets and functionals nonzero with matching dims, classes
  // pairwise disjoint. Throws invariant_error otherwise.
  ConnectionSet(std::string family, std::string name, Modulus mod, std::size_t du, std::size_t dv,
                std::vector<AffineClass> classes, std::vector<std::vector<std::size_t>> v_labels = {});

  const std::string& family() const noexcept { return family_; }
  const std::string& name() const noexcept { return name_; }
  Modulus modulus() const noexcept { return mod_; }
  std::uint32_t p() const noexcept { return mod_.value(); }
  std::size_t du() const noexcept { return du_; }
  std::size_t dv() const noexcept { return dv_; }
  const std::vector<AffineClass>& classes() const noexcept { return classes_; }

  // U-indices labelling each V basis vector, e.g. f_0 -> {}, f_i -> {i-1},
  // f_k -> k. Used to transport coordinate permutations of U to V. Empty
  // when the set has no such structure.
  const std::vector<std::vector<std::size_t>>& v_labels() const noexcept { return v_labels_; }

  // |classes| * p^(dv - 1)
  BigInt cardinality() const;

  bool contains(const GroupElement& g) const;
  // Index of the class containing g, if any.
  std::optional<std::size_t> class_of(const GroupElement& g) const;
  std::optional<std::size_t> find_class(const AffineClass& c) const;

  // True iff S = -S at the class level.
  bool is_symmetric() const;

  ConnectionSet renamed(std::string name) const;

 private:
  std::string family_;
  std::string name_;
  Modulus mod_;
  std::size_t du_;
  std::size_t dv_;
  std::vector<AffineClass> classes_;
  std::vector<std::vector<std::size_t>> v_labels_;
};

// phi(u, v) = (u, v + (q_0(u), ..., q_{dv-1}(u))).
struct PolyMap {
  Modulus mod;
  std::size_t du;
  std::size_t dv;
  std::vector<FpPoly> components;
};

struct FamilyInstance {
  ConnectionSet S;
  ConnectionSet T;
  PolyMap phi;
};

inline constexpr std::size_t kDefaultDvCap = 300;

FamilyInstance build_family(Family family, std::int64_t p, std::size_t dv_cap = kDefaultDvCap);

// All p-subsets k' of {0..2p-2} with |k cap k'| = 1. Exactly p of them.
std::vector<std::vector<std::size_t>> b_partners(const std::vector<std::size_t>& k, std::int64_t p);

// S u -S. Negated classes identical to an existing class are dropped; a
// negated class that partially overlaps an existing class raises
// invariant_error.
ConnectionSet undirected_closure(const ConnectionSet& s);

// -S: every class negated.
ConnectionSet negated(const ConnectionSet& s);

inline bool contains(const ConnectionSet& s, const GroupElement& g) { return s.contains(g); }

// Mixed-radix indexing of Z_p^dim with coordinate 0 most significant.
// vector_count throws usage_error when p^dim does not fit in 62 bits.
std::uint64_t vector_count(Modulus mod, std::size_t dim);
std::uint64_t encode_vector(const FpVec& x);
FpVec decode_vector(std::uint64_t index, std::size_t dim, Modulus mod);

}  // namespace cayleyci
