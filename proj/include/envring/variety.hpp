// SPDX-License-Identifier: Apache-2.0
//
// Varieties as identity sets, with normal-form canonicalizers for the four
// shipped varieties. A canonicalizer decides equality of polynomials, that is
// terms whose constant leaves are elements of a coefficient algebra A in V.

#ifndef ENVRING_VARIETY_HPP_
#define ENVRING_VARIETY_HPP_

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "envring/terms.hpp"

namespace envring {

  enum class VarietyKind { PointedSet, Groups, AB, CRing, Custom };

  class Variety {
   public:
    Variety() = default;
    Variety(std::string name, VarietyKind kind, Signature sig, std::vector<Identity> identities);

    static Variety pointed_set();
    static Variety groups();
    static Variety ab();
    static Variety cring();
    // Accepts "groups", "ab", "cring", "pointed_set". Throws Validation.
    static Variety by_name(std::string const& name);
    static Variety custom(std::string name, Signature sig, std::vector<Identity> identities);

    std::string const& name() const noexcept {
      return _name;
    }
    VarietyKind kind() const noexcept {
      return _kind;
    }
    Signature const& signature() const noexcept {
      return _sig;
    }
    std::vector<Identity> const& identities() const noexcept {
      return _identities;
    }
    bool has_canonicalizer() const noexcept {
      return _kind != VarietyKind::Custom;
    }

   private:
    std::string           _name;
    VarietyKind           _kind = VarietyKind::Custom;
    Signature             _sig;
    std::vector<Identity> _identities;
  };

  // Every identity of V holds in B. B must carry V's signature.
  bool in_variety(Variety const& V, FinAlgebra const& B);

  // First identity of V that fails in B, with a witness tuple.
  struct IdentityFailure {
    std::size_t          identity = 0;
    std::vector<Element> tuple;
  };
  std::optional<IdentityFailure> variety_counterexample(Variety const& V, FinAlgebra const& B);

  // Normal forms for Pol_n(A, V), bound to one coefficient algebra.
  class Canonicalizer {
   public:
    virtual ~Canonicalizer() = default;

    // Canonical representative of p's class; idempotent.
    virtual Term canon(Term const& p) const = 0;

    // Size measure used to truncate windows of polynomials. At least 1, and
    // never increased by substituting a variable or a constant for a variable.
    virtual std::size_t weight(Term const& p) const = 0;

    // Canonical n-ary polynomials of weight at most max_weight, sorted by
    // (weight, term order). With `linear_orbits`, only polynomials using every
    // variable are kept, and one representative is kept per orbit under
    // permutations of the variables where the variety makes that cheap.
    virtual std::vector<Term> enumerate(unsigned n, std::size_t max_weight, bool linear_orbits) const = 0;

    AlgebraPtr const& algebra() const noexcept {
      return _A;
    }

   protected:
    explicit Canonicalizer(AlgebraPtr A) : _A(std::move(A)) {}
    AlgebraPtr _A;
  };

  // Throws NoCanonicalizer, or Validation if A does not carry V's signature or
  // does not lie in V.
  std::shared_ptr<Canonicalizer const> make_canonicalizer(Variety const& V, AlgebraPtr A);

  Term canon(Variety const& V, AlgebraPtr const& A, Term const& p);
  bool poly_equal(Variety const& V, AlgebraPtr const& A, Term const& p, Term const& q);

}  // namespace envring

#endif  // ENVRING_VARIETY_HPP_
