#pragma once

#include <optional>
#include <string>
#include <vector>

#include "germforge/germs.hpp"

namespace germforge {

enum class GroupTag { R, L, LR, C, K };

std::string to_string(GroupTag tag);
/// Accepts R, L, LR, C, K (case-insensitive).
GroupTag parse_group_tag(const std::string& text);
bool uses_source_automorphism(GroupTag tag);
bool uses_target_automorphism(GroupTag tag);
bool uses_contact(GroupTag tag);

/// Point map x -> images(x) of a ring onto itself; acts on functions by
/// substitution. Parameters are fixed.
struct Automorphism {
  RingPtr ring;
  std::vector<Jet> images;
};

Automorphism identity_automorphism(const RingPtr& ring);
ValidityReport validate_automorphism(const Automorphism& a);
/// a∘b as point maps, i.e. x -> a(b(x)).
Automorphism compose_automorphisms(const Automorphism& a, const Automorphism& b);
/// Exact jet inverse; DomainError if the linear part is singular.
Automorphism invert_automorphism(const Automorphism& a);
/// Inverse of a substitution with invertible linear part, as jets over the
/// same variables.
std::vector<Jet> invert_substitution(const std::vector<Jet>& images);

/// Fibre-preserving automorphism (x, y) -> (x, C(x, y)) of X × Y; one
/// component per free target variable.
struct ContactElem {
  ProductRing product;
  RingPtr source;
  RingPtr target;
  std::vector<Jet> C;
};

ContactElem identity_contact(const RingPtr& source, const RingPtr& target);
/// C = U(x)·y for a matrix U over the source ring.
ContactElem contact_from_matrix(const RingPtr& source, const RingPtr& target,
                                const std::vector<std::vector<Jet>>& U);
ValidityReport validate_contact(const ContactElem& c);
/// Images substituting y -> values (jets over the source) into product jets.
std::vector<Jet> contact_images(const ContactElem& c, const std::vector<Jet>& values);

struct GroupElement {
  GroupTag tag = GroupTag::R;
  RingPtr source;
  RingPtr target;
  std::optional<Automorphism> phi;  // R, LR, K
  std::optional<Automorphism> psi;  // L, LR
  std::optional<ContactElem> contact;  // C, K
};

GroupElement identity_element(GroupTag tag, const RingPtr& source, const RingPtr& target);
ValidityReport validate_group_element(const GroupElement& g);
/// ℛ: f∘φ⁻¹; ℒ: ψ∘f; ℒℛ: ψ∘f∘φ⁻¹; 𝒞: C(x, f); 𝒦: C(x, f∘φ⁻¹).
GermMap apply(const GroupElement& g, const GermMap& f);
/// The element acting as g after h.
GroupElement compose_group(const GroupElement& g, const GroupElement& h);
GroupElement inverse_group(const GroupElement& g);

/// Matrix of source jets U with an automorphism φ; for singular targets the
/// contact element it came from is kept as a certificate.
struct LinearContact {
  std::vector<std::vector<Jet>> U;
  Automorphism phi;
  std::optional<ContactElem> certificate;
};

/// U = A(x, f∘φ⁻¹) where C_j = Σ_i A_ji y_i, each term of C_j being divided by
/// its smallest-index y variable.
LinearContact linearize_contact(const ContactElem& c, const Automorphism& phi, const GermMap& f);
/// Components of U·(f∘φ⁻¹).
std::vector<Jet> apply_linear_contact(const LinearContact& lc, const GermMap& f);

struct FilteredSubgroupSpec {
  GroupTag tag = GroupTag::R;
  int level = 0;
  /// Filtration ideal I ⊆ m of the source ring.
  std::vector<Jet> ideal;
};

bool filtered_member(const GroupElement& g, const FilteredSubgroupSpec& spec);

}  // namespace germforge
