// SPDX-License-Identifier: Apache-2.0
//
// Standard small algebras and modules used by the CLI defaults, the verify
// battery and the tests.

#ifndef ENVRING_FLEET_HPP_
#define ENVRING_FLEET_HPP_

#include <string>
#include <vector>

#include "envring/overalg.hpp"
#include "envring/variety.hpp"

namespace envring {

  // Cyclic group of order n in the groups signature; C2 = {e, g}, and for
  // larger n the elements are e, g, g2, ..., g(n-1).
  AlgebraPtr cyclic_group(unsigned n);
  // Symmetric group on three letters; elements e, (12), (13), (23), (123), (132).
  AlgebraPtr symmetric_group3();
  // Z/n as an abelian group, elements "0".."n-1".
  AlgebraPtr cyclic_ab(unsigned n);
  // Z/n as a commutative ring, elements "0".."n-1".
  AlgebraPtr zmod_ring(unsigned n);
  // Pointed set {*, p1, ..., p(k-1)} with basepoint *.
  AlgebraPtr pointed_set_algebra(unsigned k);

  struct FleetEntry {
    std::string name;
    Variety     variety;
    AlgebraPtr  algebra;
  };

  // C2, Z/3, Z/4, S3 in groups; Z/2, Z/4 in ab; Z/2, Z/3 in cring; a
  // two-element pointed set.
  std::vector<FleetEntry> default_fleet();

  // The split-extension module of a group G acting on X by rho[a]:
  // (a,m)(b,n) = (ab, m + rho(a)n). The signature is the groups signature.
  AModule group_module(AlgebraPtr const& G, FGAbGroup const& X, std::vector<Matrix> const& rho);
  // X as a module over an abelian group A: (a,m) + (b,n) = (a+b, m+n).
  AModule abelian_module(AlgebraPtr const& A, FGAbGroup const& X);
  // X as a module over a commutative ring R, rho[r] the action of r:
  // (a,m)(b,n) = (ab, rho(b)m + rho(a)n).
  AModule ring_module(AlgebraPtr const& R, FGAbGroup const& X, std::vector<Matrix> const& rho);
  // Arbitrary fibers over a pointed set; the only operation is nullary.
  AModule pointed_module(AlgebraPtr const& A, std::vector<FGAbGroup> const& fibers);
  // The isomorphic module obtained by transporting along involutions tau[a]
  // of each fiber. Throws Validation unless every tau[a] squares to 1.
  AModule twist(AModule const& M, std::vector<Matrix> const& tau);

  struct FleetModule {
    std::string name;
    AModule     module;
  };
  // At least five modules over the algebra of a fleet entry, including
  // twisted copies; most have fibers of order at most 4.
  std::vector<FleetModule> fleet_modules(FleetEntry const& entry);

}  // namespace envring

#endif  // ENVRING_FLEET_HPP_
