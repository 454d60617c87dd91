// SPDX-License-Identifier: Apache-2.0
//
// Property checks over a computed enveloping ringoid: the action theorem
// (parts 1-11), the G/H round trips, the canonical map f_M, J = R at the
// ringoid's depth, and the corollaries for groups (single-generator lifts,
// the difference term, isomorphic endomorphism rings).

#ifndef ENVRING_BATTERY_HPP_
#define ENVRING_BATTERY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "envring/ringoid.hpp"

namespace envring {

  struct CheckOutcome {
    std::string name;
    bool        pass = true;
    std::string detail;
  };

  // Module homomorphisms out of M used for naturality: the identity, the
  // quotient maps onto M/2M and M/3M, and the swap of two-generator fibers
  // onto the twisted copy where the swap is an automorphism of the fiber.
  struct SampleHom {
    std::string name;
    AModule     target;
    ModuleHom   map;
  };
  std::vector<SampleHom> sample_homs(AModule const& M, Variety const& V);

  // One outcome per part, elements of the fibers enumerated exhaustively.
  // M must have finite fibers.
  std::vector<CheckOutcome> action_theorem(EnvelopingRingoid const& Z, ModuleAction const& M);

  // H(G(M)) has the unary parts of M, and G(H(G(M))) the actions of G(M).
  CheckOutcome round_trip(EnvelopingRingoid const& Z, ModuleAction const& M);

  // f_M well defined on every relation vector, onto Z_M, and a ringoid hom.
  CheckOutcome canonical_map_check(EnvelopingRingoid const& Z, ModuleAction const& M);

  // The relation lattice and the modulization kernel contain each other in
  // every hom-group.
  CheckOutcome j_equals_r(EnvelopingRingoid const& Z);

  // For the groups variety only. Every element of a coordinate box in each
  // _aZ_b is (u)_b for a single u built with the difference term; the
  // difference term on `samples` random triples; _aZ_a and _bZ_b
  // isomorphic through x a^-1 b and x b^-1 a.
  std::vector<CheckOutcome> group_corollaries(EnvelopingRingoid const& Z, std::uint64_t seed, std::size_t samples = 50);

}  // namespace envring

#endif  // ENVRING_BATTERY_HPP_
