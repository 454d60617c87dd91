// SPDX-License-Identifier: Apache-2.0
//
// The polynomial clone Pol(A,V): canonical polynomials, composition,
// evaluation in A and along homomorphisms A -> B, and the actions on pointed
// overalgebras and modules totally in V.
//
// Expression grammar: variables x1..xn, carrier names of A (bare when they
// are identifiers, otherwise in brackets such as [(12)]), symbols applied
// prefix as f(t1,...,tn) or infix per the signature. Infix chains nest to
// the right. A bare identifier naming a nullary symbol is that symbol.

#ifndef ENVRING_POLY_HPP_
#define ENVRING_POLY_HPP_

#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "envring/overalg.hpp"

namespace envring {

  struct Polynomial {
    unsigned arity = 0;
    Term     body;

    friend bool operator==(Polynomial const&, Polynomial const&) = default;
  };

  // Parses an expression into a term with constants. Throws Parse.
  Term parse_term(std::string_view text, Signature const& sig, std::vector<std::string> const& carrier);
  // Prints so that parse_term reads the same term back.
  std::string print_term(Term const& t, Signature const& sig, std::vector<std::string> const& carrier);

  class PolyClone {
   public:
    // Throws NoCanonicalizer or Validation.
    PolyClone(Variety V, AlgebraPtr A);

    Variety const& variety() const noexcept {
      return _V;
    }
    AlgebraPtr const& algebra() const noexcept {
      return _A;
    }
    Canonicalizer const& canonicalizer() const noexcept {
      return *_canon;
    }

    // Canonicalizes t. Throws ArityMismatch if t uses a variable above arity.
    Polynomial make(Term const& t, unsigned arity) const;
    Polynomial projection(unsigned i, unsigned arity) const;
    Polynomial constant(Element c, unsigned arity) const;
    Polynomial parse(std::string_view text, unsigned arity) const;
    std::string print(Polynomial const& p) const;
    std::size_t weight(Polynomial const& p) const;

    // Pi'(Pi_1, ..., Pi_n'). Throws ArityMismatch.
    Polynomial compose(Polynomial const& outer, std::vector<Polynomial> const& inner) const;

    Element eval(Polynomial const& p, std::span<Element const> args) const;
    // Pi^{B,f}: constants mapped through f. Throws NotHom unless f is a
    // homomorphism A -> B.
    Element eval(Polynomial const& p, FinAlgebra const& B, std::vector<Element> const& f,
                 std::span<Element const> args) const;

   private:
    Variety                              _V;
    AlgebraPtr                           _A;
    std::shared_ptr<Canonicalizer const> _canon;
  };

  // Pi^P_a(p).
  PointedOveralg::Point poly_act(Polynomial const&                       p,
                                 TotallyIn<PointedOveralg> const&        P,
                                 std::span<Element const>                a,
                                 std::span<PointedOveralg::Point const> pts);

  // Pi^M on a module totally in V, with cached unary parts.
  class ModuleAction {
   public:
    explicit ModuleAction(TotallyIn<AModule> M);

    AModule const& module() const noexcept {
      return _M.get();
    }
    Vec act(Polynomial const& p, std::span<Element const> a, std::vector<Vec> const& m) const;
    // Matrix of m -> Pi^M_<b>(m) for unary Pi, cached by (body, b).
    Matrix const& unary(Polynomial const& p, Element b) const;
    ZHom          unary_hom(Polynomial const& p, Element b) const;

   private:
    TotallyIn<AModule>                                     _M;
    mutable std::mutex                                     _lock;
    mutable std::map<std::pair<Term, Element>, Matrix>     _cache;
  };

}  // namespace envring

#endif  // ENVRING_POLY_HPP_
