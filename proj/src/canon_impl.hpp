// SPDX-License-Identifier: Apache-2.0
//
// Factories for the shipped canonicalizers. Symbol ids follow the shipped
// signatures exactly.

#ifndef ENVRING_SRC_CANON_IMPL_HPP_
#define ENVRING_SRC_CANON_IMPL_HPP_

#include <memory>

#include "envring/variety.hpp"

namespace envring::detail {

  std::shared_ptr<Canonicalizer const> make_pointed_canon(AlgebraPtr A);
  std::shared_ptr<Canonicalizer const> make_group_canon(AlgebraPtr A);
  std::shared_ptr<Canonicalizer const> make_ab_canon(AlgebraPtr A);
  std::shared_ptr<Canonicalizer const> make_cring_canon(AlgebraPtr A);

  // Right-nested product of factors under a binary symbol; `empty` when none.
  Term right_nest(std::uint32_t symbol, std::vector<Term> const& factors, Term const& empty);

  void sort_by_weight(Canonicalizer const& c, std::vector<Term>& terms);

}  // namespace envring::detail

#endif  // ENVRING_SRC_CANON_IMPL_HPP_
