// SPDX-License-Identifier: Apache-2.0
//
// JSON formats for algebras, varieties, overalgebras, modules and ringoids,
// and the reports written by the command line tool.
//
//   algebra     {"name", "signature": [{"symbol", "arity"}], "carrier": [...],
//                "tables": {symbol: nested arrays of element names}}
//   variety     "groups" | "ab" | "cring" | "pointed_set", or
//               {"name", "signature", "identities": [{"lhs", "rhs", "arity"}]}
//   overalgebra {"base": algebra or path, "fibers": {a: {"points", "basepoint"}},
//                "ops": {symbol: {"a1,...,an": nested arrays of point names}}}
//   module      {"base", "fibers": {a: {"rank", "relations"}},
//                "ops": {symbol: {"a1,...,an": [matrix_1, ..., matrix_n]}}}
//
// Tables nest with the first argument outermost. Integers that do not fit
// in 64 bits are written as decimal strings.

#ifndef ENVRING_JSON_IO_HPP_
#define ENVRING_JSON_IO_HPP_

#include <json.hpp>
#include <string>

#include "envring/modulization.hpp"
#include "envring/ringoid.hpp"

namespace envring {

  using Json = nlohmann::ordered_json;

  inline constexpr char const* kToolVersion = "1.0.0";

  // Throws Parse for a missing or malformed file.
  Json read_json_file(std::string const& path);
  void write_json_file(std::string const& path, Json const& j);

  Json int_to_json(Int const& x);
  Int  int_from_json(Json const& j);
  Json vec_to_json(Vec const& v);
  Vec  vec_from_json(Json const& j);
  Json matrix_to_json(Matrix const& m);
  // rows x cols is checked when given.
  Matrix matrix_from_json(Json const& j, std::size_t rows, std::size_t cols);

  Json iso_type_to_json(IsoType const& t);
  Json group_to_json(FGAbGroup const& g);
  FGAbGroup group_from_json(Json const& j);

  // With a variety, the tables are matched to the variety's signature by
  // symbol name and order. Throws Parse or Validation.
  AlgebraPtr algebra_from_json(Json const& j, Variety const* V = nullptr);
  Json       algebra_to_json(FinAlgebra const& A);

  Variety variety_from_json(Json const& j);
  // A built-in name or a path to a JSON variety file.
  Variety variety_from_arg(std::string const& arg);

  // The base is an inline algebra or a path resolved against `dir`.
  AlgebraPtr     base_from_json(Json const& j, Variety const& V, std::string const& dir);
  PointedOveralg overalg_from_json(Json const& j, AlgebraPtr const& A);
  Json           overalg_to_json(PointedOveralg const& P);
  AModule        module_from_json(Json const& j, AlgebraPtr const& A);
  Json           module_to_json(AModule const& M);

  // Objects named by the carrier of the base algebra.
  Json    ringoid_to_json(Ringoid const& X, std::vector<std::string> const& objects);
  Ringoid ringoid_from_json(Json const& j);

  Json envelope_report(EnvelopeReport const& r, std::size_t max_depth);
  Json modulization_report(Modulization const& m);

}  // namespace envring

#endif  // ENVRING_JSON_IO_HPP_
