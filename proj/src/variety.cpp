// SPDX-License-Identifier: Apache-2.0

#include "envring/variety.hpp"

#include "canon_impl.hpp"

namespace envring {

  namespace {
    Term x(std::uint32_t i) {
      return Term::var(i);
    }

    // Binary, unary and nullary application shorthands over symbol ids.
    Term ap(std::uint32_t s, Term const& a, Term const& b) {
      return Term::app(s, {a, b});
    }
    Term ap(std::uint32_t s, Term const& a) {
      return Term::app(s, {a});
    }
    Term ap(std::uint32_t s) {
      return Term::app(s, std::span<Term const>());
    }

    std::vector<Identity> abelian_group_laws(std::uint32_t add, std::uint32_t neg, std::uint32_t zero) {
      return {
          {ap(add, ap(add, x(1), x(2)), x(3)), ap(add, x(1), ap(add, x(2), x(3))), 3},
          {ap(add, x(1), x(2)), ap(add, x(2), x(1)), 2},
          {ap(add, x(1), ap(zero)), x(1), 1},
          {ap(add, x(1), ap(neg, x(1))), ap(zero), 1},
      };
    }
  }  // namespace

  Variety::Variety(std::string name, VarietyKind kind, Signature sig, std::vector<Identity> identities)
      : _name(std::move(name)), _kind(kind), _sig(std::move(sig)), _identities(std::move(identities)) {
    for (auto const& id : _identities) {
      check_term(_sig, id.lhs);
      check_term(_sig, id.rhs);
      if (id.lhs.max_var() > id.arity || id.rhs.max_var() > id.arity) {
        fail(ErrorKind::ArityMismatch, "identity uses more variables than its arity");
      }
      if (id.lhs.has_constants() || id.rhs.has_constants()) {
        fail(ErrorKind::ConstantInTerm, "identities must be constant-free");
      }
    }
  }

  Variety Variety::pointed_set() {
    return Variety("pointed_set", VarietyKind::PointedSet, Signature({{"pt", 0}}), {});
  }

  Variety Variety::groups() {
    Signature sig({{"mul", 2, "*", 20}, {"inv", 1}, {"e", 0}});
    std::uint32_t const mul = 0, inv = 1, e = 2;
    std::vector<Identity> ids = {
        {ap(mul, ap(mul, x(1), x(2)), x(3)), ap(mul, x(1), ap(mul, x(2), x(3))), 3},
        {ap(mul, ap(e), x(1)), x(1), 1},
        {ap(mul, x(1), ap(e)), x(1), 1},
        {ap(mul, ap(inv, x(1)), x(1)), ap(e), 1},
        {ap(mul, x(1), ap(inv, x(1))), ap(e), 1},
    };
    return Variety("groups", VarietyKind::Groups, std::move(sig), std::move(ids));
  }

  Variety Variety::ab() {
    Signature sig({{"add", 2, "+", 10}, {"neg", 1}, {"zero", 0}});
    return Variety("ab", VarietyKind::AB, std::move(sig), abelian_group_laws(0, 1, 2));
  }

  Variety Variety::cring() {
    Signature sig({{"add", 2, "+", 10}, {"neg", 1}, {"zero", 0}, {"mul", 2, "*", 20}, {"one", 0}});
    std::uint32_t const add = 0, mul = 3, one = 4;
    auto ids = abelian_group_laws(0, 1, 2);
    ids.push_back({ap(mul, ap(mul, x(1), x(2)), x(3)), ap(mul, x(1), ap(mul, x(2), x(3))), 3});
    ids.push_back({ap(mul, x(1), x(2)), ap(mul, x(2), x(1)), 2});
    ids.push_back({ap(mul, x(1), ap(one)), x(1), 1});
    ids.push_back({ap(mul, x(1), ap(add, x(2), x(3))), ap(add, ap(mul, x(1), x(2)), ap(mul, x(1), x(3))), 3});
    return Variety("cring", VarietyKind::CRing, std::move(sig), std::move(ids));
  }

  Variety Variety::by_name(std::string const& name) {
    if (name == "groups") {
      return groups();
    }
    if (name == "ab") {
      return ab();
    }
    if (name == "cring") {
      return cring();
    }
    if (name == "pointed_set") {
      return pointed_set();
    }
    fail(ErrorKind::Validation, "unknown variety '" + name + "'");
  }

  Variety Variety::custom(std::string name, Signature sig, std::vector<Identity> identities) {
    return Variety(std::move(name), VarietyKind::Custom, std::move(sig), std::move(identities));
  }

  std::optional<IdentityFailure> variety_counterexample(Variety const& V, FinAlgebra const& B) {
    if (!(B.signature() == V.signature())) {
      fail(ErrorKind::Validation, "algebra '" + B.name() + "' does not carry the signature of " + V.name());
    }
    for (std::size_t i = 0; i < V.identities().size(); ++i) {
      if (auto w = counterexample(B, V.identities()[i])) {
        return IdentityFailure{i, std::move(*w)};
      }
    }
    return std::nullopt;
  }

  bool in_variety(Variety const& V, FinAlgebra const& B) {
    return !variety_counterexample(V, B).has_value();
  }

  std::shared_ptr<Canonicalizer const> make_canonicalizer(Variety const& V, AlgebraPtr A) {
    if (!V.has_canonicalizer()) {
      fail(ErrorKind::NoCanonicalizer, "variety '" + V.name() + "' has no normal-form procedure");
    }
    if (!A) {
      fail(ErrorKind::Validation, "missing coefficient algebra");
    }
    if (!in_variety(V, *A)) {
      fail(ErrorKind::Validation, "algebra '" + A->name() + "' is not in " + V.name());
    }
    switch (V.kind()) {
      case VarietyKind::PointedSet: return detail::make_pointed_canon(std::move(A));
      case VarietyKind::Groups: return detail::make_group_canon(std::move(A));
      case VarietyKind::AB: return detail::make_ab_canon(std::move(A));
      case VarietyKind::CRing: return detail::make_cring_canon(std::move(A));
      case VarietyKind::Custom: break;
    }
    fail(ErrorKind::NoCanonicalizer, V.name());
  }

  Term canon(Variety const& V, AlgebraPtr const& A, Term const& p) {
    return make_canonicalizer(V, A)->canon(p);
  }

  bool poly_equal(Variety const& V, AlgebraPtr const& A, Term const& p, Term const& q) {
    auto c = make_canonicalizer(V, A);
    return c->canon(p) == c->canon(q);
  }

}  // namespace envring
