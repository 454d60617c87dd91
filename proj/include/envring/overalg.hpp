// SPDX-License-Identifier: Apache-2.0
//
// Pointed A-overalgebras and A-modules over a finite algebra A, their
// homomorphisms, total algebras, derived operations t^X, subobjects and
// quotients, and the standard constructions (split extensions, beta*,
// P[alpha,beta], free pointed overalgebras).
//
// Operation data is indexed by (symbol, tuple) where the tuple a in A^n is
// encoded row-major with the first coordinate most significant.

#ifndef ENVRING_OVERALG_HPP_
#define ENVRING_OVERALG_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "envring/terms.hpp"
#include "envring/variety.hpp"
#include "envring/zlinalg.hpp"

namespace envring {

  using Tuple = std::vector<Element>;

  std::size_t tuple_index(std::size_t k, std::span<Element const> a);
  Tuple       tuple_at(std::size_t k, unsigned n, std::size_t index);
  // Every tuple of {0..k-1}^n in index order.
  std::vector<Tuple> all_tuples(std::size_t k, unsigned n);

  ////////////////////////////////////////////////////////////////////////
  // Pointed overalgebras
  ////////////////////////////////////////////////////////////////////////

  class PointedOveralg {
   public:
    using Point = std::uint32_t;
    // ops[s][tuple_index(a)] is the table of omega^P_a over the product of
    // the fibers _{a_i}P, flattened row-major.
    using OpTables = std::vector<std::vector<std::vector<Point>>>;

    PointedOveralg() = default;
    // Throws Validation on malformed data or a non-pointed operation.
    PointedOveralg(AlgebraPtr                            A,
                   std::vector<std::vector<std::string>> fibers,
                   std::vector<Point>                    basepoints,
                   OpTables                              ops);

    AlgebraPtr const& base() const noexcept {
      return _A;
    }
    std::size_t fiber_size(Element a) const {
      return _fibers.at(a).size();
    }
    std::vector<std::string> const& fiber(Element a) const {
      return _fibers.at(a);
    }
    std::vector<std::vector<std::string>> const& fibers() const noexcept {
      return _fibers;
    }
    Point basepoint(Element a) const {
      return _basepoints.at(a);
    }
    std::vector<Point> const& basepoints() const noexcept {
      return _basepoints;
    }
    OpTables const& ops() const noexcept {
      return _ops;
    }

    Point apply(std::size_t symbol, std::span<Element const> a, std::span<Point const> p) const;

    // omega^P_a(*, ..., p, ..., *) with p in position i.
    Point apply_at(std::size_t symbol, std::span<Element const> a, std::size_t i, Point p) const;

   private:
    AlgebraPtr                            _A;
    std::vector<std::vector<std::string>> _fibers;
    std::vector<Point>                    _basepoints;
    OpTables                              _ops;
  };

  // Fibers {*} over every element.
  PointedOveralg trivial_overalg(AlgebraPtr A);

  // [[B, pi, iota]]. Throws NotHom or NotSplit.
  PointedOveralg overalg_from_split(FinAlgebra const&           B,
                                    AlgebraPtr                  A,
                                    std::vector<Element> const& pi,
                                    std::vector<Element> const& iota);

  // The subalgebra A(beta) of A^2 with the first projection and the diagonal.
  struct SplitAlgebra {
    AlgebraPtr           B;
    std::vector<Element> pi;
    std::vector<Element> iota;
  };
  // beta given as a block label per element. Throws NotCongruence.
  SplitAlgebra   beta_algebra(AlgebraPtr const& A, std::vector<std::uint32_t> const& beta);
  PointedOveralg beta_star(AlgebraPtr const& A, std::vector<std::uint32_t> const& beta);
  // P[alpha, beta] for congruences alpha <= beta. Throws NotCongruence.
  PointedOveralg p_alpha_beta(AlgebraPtr const&                 A,
                              std::vector<std::uint32_t> const& alpha,
                              std::vector<std::uint32_t> const& beta);

  ////////////////////////////////////////////////////////////////////////
  // Modules
  ////////////////////////////////////////////////////////////////////////

  class AModule {
   public:
    // parts[s][tuple_index(a)][i] is the matrix of omega^M_{a,i}.
    using Parts = std::vector<std::vector<std::vector<Matrix>>>;

    AModule() = default;
    // Throws IllDefinedHom if a unary part does not respect relations, or
    // Validation on shape errors.
    AModule(AlgebraPtr A, std::vector<FGAbGroup> fibers, Parts parts);

    // Every fiber the zero group.
    static AModule zero(AlgebraPtr A);

    AlgebraPtr const& base() const noexcept {
      return _A;
    }
    FGAbGroup const& fiber(Element a) const {
      return _fibers.at(a);
    }
    std::vector<FGAbGroup> const& fibers() const noexcept {
      return _fibers;
    }
    Parts const& parts() const noexcept {
      return _parts;
    }
    Matrix const& part(std::size_t symbol, std::span<Element const> a, std::size_t i) const;
    ZHom          part_hom(std::size_t symbol, std::span<Element const> a, std::size_t i) const;

    bool finite() const;

    // omega^M_a(m) = sum_i omega^M_{a,i}(m_i), reduced.
    Vec apply(std::size_t symbol, std::span<Element const> a, std::vector<Vec> const& m) const;

   private:
    AlgebraPtr             _A;
    std::vector<FGAbGroup> _fibers;
    Parts                  _parts;
  };

  // Per-fiber data of a module homomorphism, checked against the
  // homomorphism law on generators.
  struct ModuleHom {
    std::vector<Matrix> maps;
  };
  // Throws NotHom.
  void check_module_hom(AModule const& M, AModule const& N, ModuleHom const& f);
  bool is_module_hom(AModule const& M, AModule const& N, ModuleHom const& f);

  struct PointedHom {
    std::vector<std::vector<PointedOveralg::Point>> maps;
  };
  bool is_pointed_hom(PointedOveralg const& P, PointedOveralg const& Q, PointedHom const& f);

  // Pointed homomorphism from P into the underlying overalgebra of a finite
  // module, elements of M given by their index in FGAbGroup::elements().
  bool is_pointed_hom_to_module(PointedOveralg const& P, AModule const& M, PointedHom const& f);

  // Forgetful functor on a finite module: the underlying pointed overalgebra.
  PointedOveralg underlying(AModule const& M);

  ////////////////////////////////////////////////////////////////////////
  // Total algebras and derived operations
  ////////////////////////////////////////////////////////////////////////

  struct TotalAlgebra {
    AlgebraPtr               algebra;
    std::vector<Element>     pi;
    std::vector<Element>     iota;
    std::vector<std::size_t> offset;  // first carrier index of each fiber
  };

  TotalAlgebra total_algebra(PointedOveralg const& P);
  // Throws InfiniteFiber.
  TotalAlgebra total_algebra(AModule const& M);

  struct TotalityWitness {
    std::size_t          identity = 0;
    // Carrier indices of the total algebra for overalgebras; for modules,
    // the tuple of base elements at which a unary part differs.
    std::vector<Element> tuple;
    std::string          text;
  };
  std::optional<TotalityWitness> totally_in_witness(Variety const& V, PointedOveralg const& P);
  // Works for infinite fibers: compares unary parts of both sides.
  std::optional<TotalityWitness> totally_in_witness(Variety const& V, AModule const& M);
  bool                           totally_in(Variety const& V, PointedOveralg const& P);
  bool                           totally_in(Variety const& V, AModule const& M);

  // An object that has been checked to be totally in V. Constructed only
  // through check(), which throws NotTotallyInV with a witness.
  template <typename T>
  class TotallyIn {
   public:
    static TotallyIn check(Variety const& V, T x) {
      if (auto w = totally_in_witness(V, x)) {
        fail(ErrorKind::NotTotallyInV, w->text);
      }
      return TotallyIn(V, std::move(x));
    }

    T const& get() const noexcept {
      return _x;
    }
    T const* operator->() const noexcept {
      return &_x;
    }
    Variety const& variety() const noexcept {
      return _V;
    }

   private:
    TotallyIn(Variety V, T x) : _V(std::move(V)), _x(std::move(x)) {}
    Variety _V;
    T       _x;
  };

  // t^P_a(p). Constant leaves c act as the basepoint of _cP, so t may be a
  // polynomial. Throws ArityMismatch.
  PointedOveralg::Point t_action(PointedOveralg const&                 P,
                                 Term const&                           t,
                                 std::span<Element const>              a,
                                 std::span<PointedOveralg::Point const> p);
  // t^M_a(m), with constants acting as zeros.
  Vec t_action(AModule const& M, Term const& t, std::span<Element const> a, std::vector<Vec> const& m);
  // The matrix of the unary part t^M_{a,i}.
  Matrix t_part(AModule const& M, Term const& t, std::span<Element const> a, std::size_t i);

  ////////////////////////////////////////////////////////////////////////
  // Subobjects and quotients
  ////////////////////////////////////////////////////////////////////////

  struct ModuleImage {
    AModule   image;
    ModuleHom onto;   // M -> Im
    ModuleHom into;   // Im -> N
  };
  ModuleImage image_factorization(AModule const& M, AModule const& N, ModuleHom const& f);

  // Submodule given by generators per fiber. Throws NotCongruence unless
  // it is closed under every unary part.
  struct ModuleQuotient {
    AModule   quotient;
    ModuleHom nat;
  };
  ModuleQuotient quotient(AModule const& M, std::vector<std::vector<Vec>> const& submodule);

  // Congruence on P given by a block label per point of each fiber.
  // Throws NotCongruence.
  struct OveralgQuotient {
    PointedOveralg quotient;
    PointedHom     nat;
  };
  OveralgQuotient quotient(PointedOveralg const& P, std::vector<std::vector<std::uint32_t>> const& labels);

  ////////////////////////////////////////////////////////////////////////
  // Free pointed overalgebras
  ////////////////////////////////////////////////////////////////////////

  // The free pointed overalgebra on an A-set S, elements kept symbolically
  // as canonical polynomials in one variable per element of S (variable j+1
  // lies over over[j]).
  class FreePointed {
   public:
    FreePointed(Variety V, AlgebraPtr A, std::vector<Element> over);

    std::size_t generator_count() const noexcept {
      return _over.size();
    }
    Element projection(Term const& p) const;
    Term    basepoint(Element a) const;
    Term    generator(std::size_t j) const;
    Term    apply(std::size_t symbol, std::vector<Term> const& args) const;
    // Canonical elements of the fiber over a with weight <= bound.
    std::vector<Term> fiber(Element a, std::size_t bound) const;

    // The finite overalgebra with fibers cut at `bound`. Throws InfiniteFiber
    // if the cut is not closed under the operations.
    PointedOveralg materialize(std::size_t bound) const;

    // Extension of an assignment S -> Q to P -> Q, evaluated on p.
    PointedOveralg::Point extend(PointedOveralg const&                     Q,
                                 std::vector<PointedOveralg::Point> const& images,
                                 Term const&                               p) const;

    Canonicalizer const& canonicalizer() const noexcept {
      return *_canon;
    }

   private:
    Variety                              _V;
    AlgebraPtr                           _A;
    std::vector<Element>                 _over;
    std::shared_ptr<Canonicalizer const> _canon;
  };

}  // namespace envring

#endif  // ENVRING_OVERALG_HPP_
