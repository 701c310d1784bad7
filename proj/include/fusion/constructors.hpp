#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "fusion/ring.hpp"

namespace fusion {

// Multiplication table of a finite group: mult[i][j] is the index of
// elements[i] * elements[j].
struct GroupTable {
  std::string name;
  std::vector<Label> elements;
  std::vector<std::vector<std::size_t>> mult;
};

GroupTable cyclic_group(std::size_t n);
GroupTable direct_product(const GroupTable& g, const GroupTable& h);
GroupTable symmetric_group(std::size_t n);
GroupTable dihedral_group(std::size_t n);  // order 2n
GroupTable quaternion_group();

// Throws NotAGroup unless the table has a unit, inverses and is associative.
TablePtr group_ring(const GroupTable& group);

TablePtr fibonacci();
TablePtr trivial_ring();
TablePtr su2_level(int level);

std::shared_ptr<const LazyBasedRing> a1();
std::shared_ptr<const LazyBasedRing> a2();

// Letters of an A(2) word, '+' for p+ and '-' for p-. "e" is the empty word.
std::string a2_word(const Label& l);
Label a2_label(const std::string& word);

TablePtr tensor_product(const BasedRingTable& left, const BasedRingTable& right);
Label pair_label(const Label& left, const Label& right);

// Alternating words in the non-unit labels of the factors. Letters render as
// "<id>@<factor>" (factors numbered from 1) joined by '.'; the empty word is "e".
std::shared_ptr<const LazyBasedRing> free_product(std::vector<RingPtr> factors);

struct GeneratedSubring {
  std::vector<Label> labels;  // sorted
  bool complete = false;      // false if closure did not stabilize within depth
};

GeneratedSubring subring_generated(const BasedRing& ring, const Label& generator, std::size_t depth = 64);

// Restriction of the product to a fusion subring. Throws InvalidSubring if the
// subset is not pointed, not involution-invariant, or not closed.
TablePtr restrict_to_subring(const BasedRingTable& ring, const std::vector<Label>& subset);

struct DivisibilityComponent {
  Label anchor;                      // image of the subring unit
  std::vector<Label> members;        // sorted
  std::map<Label, Label> to_subring;  // anchor * b  ->  b
};

struct DivisibilityResult {
  bool divisible = false;
  std::vector<Label> subring;
  std::vector<DivisibilityComponent> components;  // on failure, the partition found so far
  std::string reason;
};

// Decomposes the ring as a right module over the subring and tests each
// connected component for isomorphism with the standard right module.
DivisibilityResult is_divisible(const BasedRingTable& ring, const std::vector<Label>& subring);

}  // namespace fusion
