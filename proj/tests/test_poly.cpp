// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "envring/fleet.hpp"
#include "envring/poly.hpp"

using namespace envring;

namespace {
  using Point = PointedOveralg::Point;

  Term random_poly(Signature const& sig, std::size_t k, unsigned n, int depth, std::mt19937_64& rng) {
    if (depth == 0 || rng() % 4 == 0) {
      std::size_t pick = rng() % (n + k);
      return pick < n ? Term::var(static_cast<std::uint32_t>(pick + 1))
                      : Term::constant(static_cast<Element>(pick - n));
    }
    std::uint32_t     s = static_cast<std::uint32_t>(rng() % sig.size());
    std::vector<Term> ch;
    for (unsigned j = 0; j < sig[s].arity; ++j) {
      ch.push_back(random_poly(sig, k, n, depth - 1, rng));
    }
    return Term::app(s, ch);
  }

  Polynomial random_pol(PolyClone const& pc, unsigned n, std::mt19937_64& rng) {
    return pc.make(random_poly(pc.algebra()->signature(), pc.algebra()->size(), n, 3, rng), n);
  }

  FleetEntry entry(std::string const& name) {
    for (auto& f : default_fleet()) {
      if (f.name == name) {
        return f;
      }
    }
    FAIL("no fleet entry " << name);
    return {};
  }
}  // namespace

TEST_CASE("composition examples") {
  PolyClone const pc(Variety::groups(), cyclic_group(2));
  auto const      xg = pc.parse("x1*g", 1);
  CHECK(pc.compose(xg, {xg}) == pc.projection(1, 1));
  auto const p = pc.parse("x1*x2*inv(x1)", 2);
  auto const q = pc.parse("x2*g", 2);
  CHECK(pc.compose(pc.projection(2, 2), {p, q}) == q);
  CHECK(pc.compose(p, {pc.projection(1, 2), pc.projection(2, 2)}) == p);
  CHECK_THROWS_AS(pc.compose(p, {q}), Error);
}

TEST_CASE("clone laws on random polynomials") {
  std::mt19937_64 rng(17);
  for (auto const& name : {"C2", "S3", "Z4ab", "Z3ring"}) {
    auto const      f = entry(name);
    PolyClone const pc(f.variety, f.algebra);
    for (int trial = 0; trial < 60; ++trial) {
      auto const o = random_pol(pc, 2, rng);
      auto const a = random_pol(pc, 2, rng), b = random_pol(pc, 2, rng);
      auto const c = random_pol(pc, 2, rng), d = random_pol(pc, 2, rng);
      CHECK(pc.compose(pc.compose(o, {a, b}), {c, d})
            == pc.compose(o, {pc.compose(a, {c, d}), pc.compose(b, {c, d})}));
      CHECK(pc.compose(pc.projection(1, 2), {a, b}) == a);
      CHECK(pc.compose(o, {pc.projection(1, 2), pc.projection(2, 2)}) == o);
    }
  }
}

TEST_CASE("evaluation") {
  auto const      C2 = cyclic_group(2);
  PolyClone const pc(Variety::groups(), C2);
  Element const   e = 0, g = 1;
  CHECK(pc.eval(pc.projection(1, 1), std::vector<Element>{g}) == g);
  CHECK(pc.eval(pc.parse("x1*g", 1), std::vector<Element>{g}) == e);

  // C2 -> C4 doubling and C2 -> S3 onto a transposition.
  auto const C4 = cyclic_group(4);
  auto const S3 = symmetric_group3();
  CHECK(pc.eval(pc.constant(g, 0), *C4, {0, 2}, {}) == 2);
  try {
    pc.eval(pc.constant(g, 0), *C4, {0, 1}, {});
    FAIL("expected an error");
  } catch (Error const& err) {
    CHECK(err.kind() == ErrorKind::NotHom);
  }
  // Pi -> Pi^{B,f} is a clone homomorphism.
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    auto const o = random_pol(pc, 2, rng);
    auto const a = random_pol(pc, 2, rng), b = random_pol(pc, 2, rng);
    for (auto const& [B, f] : std::vector<std::pair<AlgebraPtr, std::vector<Element>>>{
             {C4, {0, 2}}, {S3, {0, 1}}, {C2, {0, 1}}}) {
      for (Element u = 0; u < B->size(); ++u) {
        for (Element v = 0; v < B->size(); ++v) {
          std::vector<Element> args{u, v};
          std::vector<Element> staged{pc.eval(a, *B, f, args), pc.eval(b, *B, f, args)};
          CHECK(pc.eval(pc.compose(o, {a, b}), *B, f, args) == pc.eval(o, *B, f, staged));
        }
      }
    }
  }
}

TEST_CASE("actions on pointed overalgebras") {
  auto const      C2 = cyclic_group(2);
  auto const      S3 = symmetric_group3();
  PolyClone const pc(Variety::groups(), C2);
  std::vector<Element> const sign{0, 1, 1, 1, 0, 0}, iota{0, 1};
  auto const P = TotallyIn<PointedOveralg>::check(Variety::groups(), overalg_from_split(*S3, C2, sign, iota));

  // Split case: Pi^P_a(b) is Pi^{B,iota}(b) read in the fibers.
  std::vector<Point> pos(6);
  std::vector<std::vector<Element>> members(2);
  for (Element b = 0; b < 6; ++b) {
    pos[b] = static_cast<Point>(members[sign[b]].size());
    members[sign[b]].push_back(b);
  }
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 100; ++trial) {
    Term const raw = random_poly(C2->signature(), 2, 2, 4, rng);
    auto const p   = pc.make(raw, 2);
    for (Element u = 0; u < 6; ++u) {
      for (Element v = 0; v < 6; ++v) {
        std::vector<Element> a{sign[u], sign[v]};
        std::vector<Point>   pts{pos[u], pos[v]};
        Point const          got = poly_act(p, P, a, pts);
        CHECK(got == pos[pc.eval(p, *S3, iota, std::vector<Element>{u, v})]);
        // Representative independence.
        CHECK(t_action(P.get(), raw, a, pts) == got);
      }
    }
  }
  CHECK(poly_act(pc.projection(1, 1), P, std::vector<Element>{1}, std::vector<Point>{2}) == 2);
  CHECK(poly_act(pc.constant(1, 1), P, std::vector<Element>{0}, std::vector<Point>{1}) == P->basepoint(1));
}

TEST_CASE("homomorphisms preserve polynomial actions") {
  auto const      f = entry("C2");
  PolyClone const pc(f.variety, f.algebra);
  auto const      M = fleet_modules(f)[3].module;  // Z/4 sign
  auto const      U = underlying(M);
  auto const      q = quotient(U, {{0, 1, 0, 1}, {0, 1, 0, 1}});
  auto const      P = TotallyIn<PointedOveralg>::check(f.variety, U);
  auto const      Q = TotallyIn<PointedOveralg>::check(f.variety, q.quotient);
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 80; ++trial) {
    auto const p = random_pol(pc, 2, rng);
    for (Element a1 = 0; a1 < 2; ++a1) {
      for (Element a2 = 0; a2 < 2; ++a2) {
        for (Point u = 0; u < 4; ++u) {
          for (Point v = 0; v < 4; ++v) {
            std::vector<Element> a{a1, a2};
            Element const        t = pc.eval(p, a);
            Point const          lhs = q.nat.maps[t][poly_act(p, P, a, std::vector<Point>{u, v})];
            CHECK(lhs == poly_act(p, Q, a, std::vector<Point>{q.nat.maps[a1][u], q.nat.maps[a2][v]}));
          }
        }
      }
    }
  }
}

TEST_CASE("module actions are additive") {
  std::mt19937_64 rng(9);
  for (auto const& name : {"C2", "S3", "Z2ab", "Z3ring", "Pt2"}) {
    auto const      f = entry(name);
    PolyClone const pc(f.variety, f.algebra);
    for (auto const& fm : fleet_modules(f)) {
      if (!fm.module.finite()) {
        continue;
      }
      CAPTURE(name);
      CAPTURE(fm.name);
      ModuleAction const act(TotallyIn<AModule>::check(f.variety, fm.module));
      auto const&        M = act.module();
      std::size_t const  k = f.algebra->size();
      for (Element b = 0; b < k; ++b) {
        CHECK(act.unary(pc.projection(1, 1), b) == Matrix::identity(M.fiber(b).rank()));
        CHECK(act.unary_hom(pc.constant(0, 1), b).is_zero());
      }
      for (int trial = 0; trial < 6; ++trial) {
        auto const p = random_pol(pc, 1, rng);
        for (Element b = 0; b < k; ++b) {
          std::vector<Element> a{b};
          auto const           elems = M.fiber(b).elements();
          ZHom const           h     = act.unary_hom(p, b);
          for (auto const& m : elems) {
            for (auto const& n : elems) {
              Vec sum(m.size());
              for (std::size_t i = 0; i < m.size(); ++i) {
                sum[i] = m[i] + n[i];
              }
              Vec const lhs = act.act(p, a, {sum});
              Vec const r1 = act.act(p, a, {m}), r2 = act.act(p, a, {n});
              Vec       rhs(lhs.size());
              for (std::size_t i = 0; i < lhs.size(); ++i) {
                rhs[i] = r1[i] + r2[i];
              }
              Element const t = pc.eval(p, a);
              CHECK(M.fiber(t).equal(lhs, rhs));
              CHECK(M.fiber(t).equal(h(m), r1));
            }
          }
        }
      }
    }
  }
}

TEST_CASE("parsing and printing") {
  auto const      S3 = symmetric_group3();
  PolyClone const pc(Variety::groups(), S3);
  auto const      p = pc.parse("x1*[(12)]*inv(x2)", 2);
  CHECK(pc.eval(p, std::vector<Element>{0, 0}) == 1);
  CHECK(pc.print(pc.parse("[(123)]*x1", 1)) == "[(123)]*x1");
  std::mt19937_64 rng(10);
  for (auto const& name : {"C2", "S3", "Z4ab", "Z2ring", "Pt2"}) {
    auto const      f = entry(name);
    PolyClone const qc(f.variety, f.algebra);
    auto const&     sig = f.algebra->signature();
    for (int trial = 0; trial < 100; ++trial) {
      Term const t = random_poly(sig, f.algebra->size(), 2, 4, rng);
      CHECK(parse_term(print_term(t, sig, f.algebra->carrier()), sig, f.algebra->carrier()) == t);
    }
    (void) qc;
  }
  PolyClone const ring(Variety::cring(), zmod_ring(2));
  CHECK(ring.parse("(x1+1)*(x1+1)", 1) == ring.parse("x1*x1+1", 1));
  for (auto const* bad : {"x1*", "foo(x1)", "inv(x1,x2)", "x1 x2", "[nope]", "(x1"}) {
    CAPTURE(bad);
    CHECK_THROWS_AS(pc.parse(bad, 2), Error);
  }
  try {
    pc.parse("x3", 2);
    FAIL("expected an error");
  } catch (Error const& err) {
    CHECK(err.kind() == ErrorKind::ArityMismatch);
  }
}
