// SPDX-License-Identifier: Apache-2.0
//
// Modulization of finite pointed overalgebras: the free module on the
// fibers, the generating set of relations, the saturated submodule K, the
// quotient module and its unit eta, plus the universal-property, identity
// transfer and functoriality checkers.

#ifndef ENVRING_MODULIZATION_HPP_
#define ENVRING_MODULIZATION_HPP_

#include <utility>
#include <vector>

#include "envring/overalg.hpp"

namespace envring {

  // Free abelian group on each fiber; unary parts send generators to
  // generators.
  AModule hat_modulize(PointedOveralg const& P);

  // Basepoints and one vector omega^P_a(p) - sum_i omega_{a,i}(p_i) per
  // operation, tuple and point tuple, each tagged by its fiber.
  std::vector<std::pair<Element, Vec>> gen_set(PointedOveralg const& P);

  struct Modulization {
    PointedOveralg       source;
    AModule              hat;
    std::vector<Lattice> K;       // per fiber, in Z^{|_aP|}
    AModule              result;  // fibers Z^{|_aP|} / K_a
    // eta[a][p], the class of generator p (the unit vector).
    std::vector<std::vector<Vec>> eta;
  };

  // Postconditions (eta a pointed homomorphism into the underlying
  // overalgebra, eta images spanning) are checked; a failure throws
  // NotWellDefined.
  Modulization modulize(PointedOveralg const& P);

  // The unique xi: MP -> M with xi o eta = zeta, where zeta[a][p] is the
  // index of the image in M.fiber(a).elements(). Throws NotWellDefined if
  // zeta does not factor, NotHom if zeta is not a pointed homomorphism.
  ModuleHom check_universal(Modulization const& mod, TotallyIn<AModule> const& M, PointedHom const& zeta);

  // For each identity satisfied by P, its two sides have equal unary parts
  // in M over every tuple.
  bool check_identity_transfer(PointedOveralg const& P, AModule const& M, std::vector<Identity> const& identities);
  bool check_identity_transfer(Modulization const& mod, std::vector<Identity> const& identities);

  // Mf for a pointed homomorphism f: P -> P'. Throws NotHom if f is not a
  // pointed homomorphism.
  ModuleHom modulize_hom(Modulization const& from, Modulization const& to, PointedHom const& f);

}  // namespace envring

#endif  // ENVRING_MODULIZATION_HPP_
