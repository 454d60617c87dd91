// SPDX-License-Identifier: Apache-2.0
//
// The verify battery over the default fleet: variety membership, envelope
// stabilization and hom-group types, ringoid axioms, the action theorem,
// round trips, the canonical map, J = R, the group corollaries and the
// modulization checks. The report is deterministic for a fixed seed.

#ifndef ENVRING_VERIFY_HPP_
#define ENVRING_VERIFY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "envring/battery.hpp"
#include "envring/json_io.hpp"

namespace envring {

  struct VerifyOptions {
    std::uint64_t seed      = 1;
    std::size_t   max_depth = 6;
    // Names from verify_faults(), or "all".
    std::vector<std::string> faults;
    // Fleet entries to run by name; empty runs all.
    std::vector<std::string> only;
  };

  // composition, module-part, ringoid-action.
  std::vector<std::string> verify_faults();

  struct VerifyResult {
    Json        report;
    std::size_t passed = 0;
    std::size_t failed = 0;
    // One line per check, failures first.
    std::string summary;

    bool pass() const noexcept {
      return failed == 0;
    }
  };

  // Throws Validation for an unknown fault name.
  VerifyResult run_verify(VerifyOptions const& options);

  // Expected iso type of _aZ_b for the shipped varieties.
  IsoType expected_hom_type(Variety const& V, FinAlgebra const& A, Element a, Element b);

}  // namespace envring

#endif  // ENVRING_VERIFY_HPP_
