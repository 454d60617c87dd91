// SPDX-License-Identifier: Apache-2.0
//
// Ringoids with objects |A|: presented hom-groups with bilinear composition
// tables, homomorphisms, modules and quotients; the subringoid Z_M of
// End(M); the enveloping ringoid Z[A,V] as a depth-truncated presentation
// with stabilization detection; the canonical map f_M and the functors G
// and H between A-modules and Z-modules.

#ifndef ENVRING_RINGOID_HPP_
#define ENVRING_RINGOID_HPP_

#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "envring/poly.hpp"

namespace envring {

  ////////////////////////////////////////////////////////////////////////
  // Ringoids
  ////////////////////////////////////////////////////////////////////////

  // Hom-groups are indexed by a * k + b for _aX_b (maps from b to a).
  // Elements are coordinate vectors over the generators of the presentation.
  class Ringoid {
   public:
    Ringoid() = default;
    // products[(c * k + a) * k + b][i * rank(a,b) + j] is e_i e_j in _cX_b
    // for basis vectors e_i of _cX_a and e_j of _aX_b.
    Ringoid(std::size_t                           objects,
            std::vector<FGAbGroup>                homs,
            std::vector<std::vector<std::string>> labels,
            std::vector<std::vector<Vec>>         products,
            std::vector<Vec>                      identities);

    std::size_t objects() const noexcept {
      return _k;
    }
    FGAbGroup const& hom(Element a, Element b) const {
      return _homs.at(a * _k + b);
    }
    std::vector<std::string> const& labels(Element a, Element b) const {
      return _labels.at(a * _k + b);
    }
    Vec const& basis_product(Element c, Element a, Element b, std::size_t i, std::size_t j) const;
    // Bilinear extension of the table, reduced in _cX_b.
    Vec        compose(Element c, Element a, Element b, Vec const& left, Vec const& right) const;
    Vec const& identity(Element b) const {
      return _identities.at(b);
    }
    Vec zero(Element a, Element b) const {
      return Vec(hom(a, b).rank());
    }

    // Associativity on basis triples, identities on basis vectors, and
    // relations composing to zero. Returns the first failure.
    std::optional<std::string> check_axioms() const;

   private:
    std::size_t                           _k = 0;
    std::vector<FGAbGroup>                _homs;
    std::vector<std::vector<std::string>> _labels;
    std::vector<std::vector<Vec>>         _products;
    std::vector<Vec>                      _identities;
  };

  // Per hom-group a matrix sending basis vectors of _aX_b to _aY_b.
  struct RingoidHom {
    std::vector<Matrix> maps;
  };
  std::optional<std::string> check_ringoid_hom(Ringoid const& X, Ringoid const& Y, RingoidHom const& f);

  // A left X-module: fibers and, per hom-group, the action of each basis
  // vector as a matrix from _bN to _aN.
  struct RingoidModule {
    std::vector<FGAbGroup>           fibers;
    std::vector<std::vector<Matrix>> actions;

    Matrix action(Ringoid const& X, Element a, Element b, Vec const& z) const;
  };
  // Well-definedness, identities act trivially, (z'z)n = z'(zn) on basis
  // pairs. Returns the first failure.
  std::optional<std::string> check_ringoid_module(Ringoid const& X, RingoidModule const& N);

  struct RingoidQuotient {
    Ringoid    quotient;
    RingoidHom nat;
  };
  // ideal[a * k + b] lists generators of _aJ_b. Throws NotIdeal.
  RingoidQuotient ringoid_quotient(Ringoid const& X, std::vector<std::vector<Vec>> const& ideal);

  ////////////////////////////////////////////////////////////////////////
  // Z_M
  ////////////////////////////////////////////////////////////////////////

  struct ZofModule {
    Ringoid ring;
    // The matrix in Hom(_bM, _aM) of each basis vector of _aZ_b.
    std::vector<std::vector<Matrix>> embedding;
    // Per hom-group, the span of the embedded elements as flattened
    // matrices, including the relations of the target fiber.
    std::vector<Lattice> span;

    // Coordinates of an endomorphism block, if it lies in Z_M.
    std::optional<Vec> coordinates(Element a, Element b, Matrix const& m) const;
  };

  // The subringoid of End(M) generated by the unary parts. Throws
  // InfiniteFiber.
  ZofModule z_of_module(AModule const& M);

  ////////////////////////////////////////////////////////////////////////
  // Enveloping ringoid
  ////////////////////////////////////////////////////////////////////////

  // R_{Pi,b} as a formal integer combination of canonical unary
  // polynomials, all over the object a = Pi(b,...,b).
  struct RelationVector {
    Term                              pi;
    unsigned                          arity = 0;
    Element                           a     = 0;
    std::vector<std::pair<Int, Term>> terms;
  };

  // Every canonical Pi of arity n <= depth (n = 1 omitted: its vectors
  // vanish) and weight <= depth using all its variables, up to renaming.
  // Throws NoCanonicalizer.
  std::vector<RelationVector> relation_vectors(Variety const& V, AlgebraPtr const& A, Element b, std::size_t depth);

  struct HomPresentation {
    Element           a = 0;
    Element           b = 0;
    std::vector<Term> gens;  // heaviest first
    Lattice           relations;
    // Generators not eliminated by a unit pivot; they present the group.
    std::vector<std::size_t> survivors;
    FGAbGroup                group;
    std::vector<std::size_t> raw_relations;  // indices into the relation list of b
    std::vector<Vec>         images;         // class of each generator in group
  };

  class EnvelopingRingoid {
   public:
    // Throws NoCanonicalizer, or Validation for depth 0.
    EnvelopingRingoid(Variety V, AlgebraPtr A, std::size_t depth);
    EnvelopingRingoid(EnvelopingRingoid const&)            = delete;
    EnvelopingRingoid& operator=(EnvelopingRingoid const&) = delete;

    Variety const& variety() const noexcept {
      return _V;
    }
    AlgebraPtr const& algebra() const noexcept {
      return _A;
    }
    std::size_t depth() const noexcept {
      return _depth;
    }
    Canonicalizer const& canonicalizer() const noexcept {
      return *_canon;
    }
    HomPresentation const& presentation(Element a, Element b) const {
      return _homs.at(a * _A->size() + b);
    }
    std::vector<RelationVector> const& relations(Element b) const {
      return _relations.at(b);
    }
    Ringoid const& ringoid() const noexcept {
      return _ring;
    }

    // u(b) for a unary polynomial u.
    Element source(Term const& u, Element b) const;
    // (u)_b as an element of _{u(b)}Z_b. Polynomials above the depth are
    // reduced by linearization relations that split off one occurrence of
    // x. Throws MissingGenerator for a single-occurrence polynomial above
    // the depth.
    Vec element(Term const& u, Element b) const;
    // Coordinates of a formal combination of generators of _aZ_b.
    Vec combination(Element a, Element b, std::vector<std::pair<Int, Term>> const& terms) const;

   private:
    Variety                                  _V;
    AlgebraPtr                               _A;
    std::size_t                              _depth;
    std::shared_ptr<Canonicalizer const>     _canon;
    std::vector<HomPresentation>             _homs;
    std::vector<std::vector<RelationVector>> _relations;
    std::vector<std::unordered_map<Term, std::size_t, TermHash>> _index;  // per hom-group
    Ringoid                                  _ring;
    mutable std::mutex                       _lock;
    mutable std::vector<std::unordered_map<Term, Vec, TermHash>> _memo;  // per b
  };

  struct StabilizationStep {
    std::size_t depth  = 0;  // compared against depth + 1
    bool        stable = false;
    std::string detail;
  };

  struct EnvelopeReport {
    std::shared_ptr<EnvelopingRingoid const> ringoid;  // at the accepted or last tried depth
    std::size_t                              depth      = 0;
    bool                                     stabilized = false;
    std::vector<StabilizationStep>           steps;
  };

  // Empty when the generator inclusion lo -> hi is an isomorphism of every
  // hom-group compatible with composition; otherwise the first reason.
  std::optional<std::string> compare_depths(EnvelopingRingoid const& lo, EnvelopingRingoid const& hi);

  // Tries depth, depth + 1, ... up to max_depth; never throws NotStabilized.
  EnvelopeReport compute_envelope(Variety const& V, AlgebraPtr const& A, std::size_t depth, std::size_t max_depth);
  // As compute_envelope, throwing NotStabilized on failure.
  std::shared_ptr<EnvelopingRingoid const> enveloping_ringoid(Variety const&    V,
                                                              AlgebraPtr const& A,
                                                              std::size_t       depth,
                                                              std::size_t       max_depth);

  // The kernel J of Zhat -> Z computed through the modulization of U_b:
  // basepoints and the S(U_b) vectors, closed under the translations
  // u -> omega(c_1,...,u,...,c_n). Each vector is the linearization of a
  // polynomial in distinct variables, and the window keeps those of weight
  // at most the depth. Per object a, a lattice in Z^{gens of _aZ_b}.
  std::vector<Lattice> j_lattices(EnvelopingRingoid const& Z, Element b);

  ////////////////////////////////////////////////////////////////////////
  // Canonical map and the functors G, H
  ////////////////////////////////////////////////////////////////////////

  struct CanonicalMap {
    ZofModule  target;
    RingoidHom map;  // Z -> Z_M
  };
  // f_M, checked on every relation vector (NotWellDefined names the
  // offending polynomial) and onto on every hom-group (NotWellDefined).
  CanonicalMap canonical_map(EnvelopingRingoid const& Z, ModuleAction const& M);

  // The Z-module on the fibers of M, (u)_b acting as u^M_<b>. Throws
  // NotWellDefined if a relation acts nontrivially.
  RingoidModule functor_G(EnvelopingRingoid const& Z, ModuleAction const& M);
  // The A-module with omega_{a,i} acting as (omega(a_1,...,x,...,a_n))_{a_i}.
  // Throws MissingGenerator or NotTotallyInV.
  AModule functor_H(EnvelopingRingoid const& Z, RingoidModule const& N);

  // omega(a_1, ..., x, ..., a_n) with x in position i, canonical.
  Term translation(Canonicalizer const& C, std::size_t symbol, std::span<Element const> a, std::size_t i);

}  // namespace envring

#endif  // ENVRING_RINGOID_HPP_
