// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <set>

#include "envring/fleet.hpp"
#include "envring/modulization.hpp"
#include "oracles.hpp"

using namespace envring;

namespace {
  using Point = PointedOveralg::Point;
  using oracle::all_pointed_maps;

  FleetEntry entry(std::string const& name) {
    for (auto& f : default_fleet()) {
      if (f.name == name) {
        return f;
      }
    }
    FAIL("no fleet entry " << name);
    return {};
  }

  // |N / [N,N]| for N the fiber over the identity of a total group.
  std::size_t abelianized_kernel_order(TotalAlgebra const& T) {
    auto const&          G = *T.algebra;
    std::vector<Element> N;
    for (Element u = 0; u < G.size(); ++u) {
      if (T.pi[u] == 0) {
        N.push_back(u);
      }
    }
    auto mul = [&](Element u, Element v) { return G.apply(0, {u, v}); };
    auto inv = [&](Element u) { return G.apply(1, {u}); };
    std::set<Element> C{T.iota[0]};
    for (Element u : N) {
      for (Element v : N) {
        C.insert(mul(mul(inv(u), inv(v)), mul(u, v)));
      }
    }
    bool grew = true;
    while (grew) {
      grew = false;
      for (Element u : std::vector<Element>(C.begin(), C.end())) {
        for (Element v : std::vector<Element>(C.begin(), C.end())) {
          grew |= C.insert(mul(u, v)).second;
        }
      }
    }
    return N.size() / C.size();
  }

  std::size_t fiber_order(AModule const& M, Element a) {
    return static_cast<std::size_t>(M.fiber(a).order());
  }

  std::vector<PointedOveralg> shipped_overalgebras() {
    auto const C2 = cyclic_group(2);
    auto const S3 = symmetric_group3();
    auto const pt = entry("Pt2");
    return {
        trivial_overalg(C2),
        beta_star(C2, {0, 0}),
        beta_star(S3, {0, 1, 1, 1, 0, 0}),
        FreePointed(pt.variety, pt.algebra, {1}).materialize(1),
    };
  }
}  // namespace

TEST_CASE("hat modulization") {
  auto const C2   = cyclic_group(2);
  auto const triv = hat_modulize(trivial_overalg(C2));
  for (Element a = 0; a < 2; ++a) {
    CHECK(triv.fiber(a).iso_type() == IsoType{1, {}});
  }
  CHECK(triv.part(0, std::vector<Element>{1, 1}, 0) == Matrix::identity(1));
  auto const hat = hat_modulize(beta_star(C2, {0, 0}));
  for (Element a = 0; a < 2; ++a) {
    CHECK(hat.fiber(a).iso_type() == IsoType{2, {}});
  }
  for (auto const& per_tuple : hat.parts()) {
    for (auto const& per_i : per_tuple) {
      for (auto const& m : per_i) {
        for (std::size_t j = 0; j < m.cols(); ++j) {
          Int ones = 0;
          for (std::size_t i = 0; i < m.rows(); ++i) {
            CHECK((m(i, j) == 0 || m(i, j) == 1));
            ones += m(i, j);
          }
          CHECK(ones == 1);
        }
      }
    }
  }
}

TEST_CASE("generating set") {
  auto const C2   = cyclic_group(2);
  auto const gens = gen_set(trivial_overalg(C2));
  // Basepoints, then (1 - n) * for mul, inv and e over every tuple.
  std::vector<Int> expect{1, 1, -1, -1, -1, -1, 0, 0, 1};
  REQUIRE(gens.size() == expect.size());
  for (std::size_t j = 0; j < gens.size(); ++j) {
    CHECK(gens[j].second == Vec{expect[j]});
  }
  auto const beta = beta_star(C2, {0, 0});
  auto const g2   = gen_set(beta);
  CHECK(g2.size() == 2 + 16 + 4 + 1);
  // Unary operations contribute zero vectors.
  for (std::size_t j = 18; j < 22; ++j) {
    CHECK(g2[j].second == Vec(2));
  }
}

TEST_CASE("modulization values against the commutator oracle") {
  auto const C2 = cyclic_group(2);
  auto const S3 = symmetric_group3();
  auto const triv = modulize(trivial_overalg(C2));
  for (Element a = 0; a < 2; ++a) {
    CHECK(triv.result.fiber(a).is_trivial());
  }
  // Regression values: one Z/2 per fiber over C2 at the top congruence.
  auto const top = modulize(beta_star(C2, {0, 0}));
  for (Element a = 0; a < 2; ++a) {
    CHECK(top.result.fiber(a).iso_type() == IsoType{0, {2}});
  }
  std::vector<std::pair<AlgebraPtr, std::vector<std::uint32_t>>> const cases = {
      {C2, {0, 0}}, {S3, {0, 1, 1, 1, 0, 0}}, {S3, {0, 0, 0, 0, 0, 0}}, {cyclic_group(4), {0, 1, 0, 1}}};
  for (auto const& [A, beta] : cases) {
    auto const P   = beta_star(A, beta);
    auto const mod = modulize(P);
    auto const n   = abelianized_kernel_order(total_algebra(P));
    for (Element a = 0; a < A->size(); ++a) {
      CHECK(fiber_order(mod.result, a) == n);
    }
    CHECK(totally_in(Variety::groups(), mod.result));
  }
  // M(U M) recovers M for group modules.
  for (auto const& fm : fleet_modules(entry("C3"))) {
    if (!fm.module.finite()) {
      continue;
    }
    auto const mod = modulize(underlying(fm.module));
    for (Element a = 0; a < 3; ++a) {
      CHECK(mod.result.fiber(a).iso_type() == fm.module.fiber(a).iso_type());
    }
  }
}

TEST_CASE("eta, spanning and identity transfer on the shipped overalgebras") {
  auto const pt = entry("Pt2");
  for (auto const& P : shipped_overalgebras()) {
    Variety const V   = P.base()->size() == 2 && P.base()->signature().size() == 1 ? pt.variety : Variety::groups();
    auto const    mod = modulize(P);
    CHECK(totally_in(V, P));
    CHECK(check_identity_transfer(mod, V.identities()));
    CHECK(check_identity_transfer(mod, {Identity{Term::var(1), Term::var(1), 1}}));
    CHECK(totally_in(V, mod.result));
    if (mod.result.finite()) {
      PointedHom eta;
      for (Element a = 0; a < P.base()->size(); ++a) {
        auto& row = eta.maps.emplace_back();
        for (auto const& v : mod.eta[a]) {
          row.push_back(static_cast<Point>(mod.result.fiber(a).index_of(v)));
        }
      }
      CHECK(is_pointed_hom_to_module(P, mod.result, eta));
    }
    // Saturation is idempotent.
    std::vector<std::pair<std::size_t, Vec>> seeds;
    std::vector<IndexedMap>                  maps;
    auto const&                              A = *P.base();
    for (Element a = 0; a < A.size(); ++a) {
      for (auto const& v : mod.K[a].basis()) {
        seeds.emplace_back(a, v);
      }
    }
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      for (auto const& a : all_tuples(A.size(), A.signature()[s].arity)) {
        for (std::size_t i = 0; i < a.size(); ++i) {
          maps.push_back({a[i], A.apply(s, a), mod.hat.part(s, a, i)});
        }
      }
    }
    auto again = subgroup_saturate(mod.hat.fibers(), seeds, maps);
    for (Element a = 0; a < A.size(); ++a) {
      again[a].canonicalize();
      CHECK(again[a] == mod.K[a]);
    }
  }
  // The free pointed set on one point over p1 modulizes to Z there.
  auto const free = modulize(FreePointed(pt.variety, pt.algebra, {1}).materialize(1));
  CHECK(free.result.fiber(0).is_trivial());
  CHECK(free.result.fiber(1).iso_type() == IsoType{1, {}});
}

TEST_CASE("broken modules fail identity transfer") {
  auto const P   = beta_star(cyclic_group(2), {0, 0});
  auto const mod = modulize(P);
  auto       parts = mod.hat.parts();
  // mul at (g, e), first argument: send the generator to twice itself.
  parts[0][2][0] = parts[0][2][0] + parts[0][2][0];
  AModule const broken(P.base(), mod.hat.fibers(), parts);
  CHECK_FALSE(check_identity_transfer(P, broken, Variety::groups().identities()));
}

TEST_CASE("derived generators differ by elements of K") {
  auto const P   = beta_star(symmetric_group3(), {0, 1, 1, 1, 0, 0});
  auto const mod = modulize(P);
  auto const& A  = *P.base();
  for (unsigned n : {1u, 2u}) {
    for (auto const& t : enumerate_terms(A.signature(), n, 4)) {
      for (auto const& a : all_tuples(A.size(), n)) {
        Element const target = eval(A, t, a);
        for (unsigned i = 0; i < n; ++i) {
          for (Point p = 0; p < P.fiber_size(a[i]); ++p) {
            std::vector<Point> pts;
            for (Element aj : a) {
              pts.push_back(P.basepoint(aj));
            }
            pts[i] = p;
            Vec unit_p(P.fiber_size(a[i]));
            unit_p[p] = 1;
            Vec v     = t_part(mod.hat, t, a, i).apply(unit_p);
            v[t_action(P, t, a, pts)] -= 1;
            CHECK(mod.K[target].contains(v));
          }
        }
      }
    }
  }
}

TEST_CASE("universal property against exhaustive search") {
  struct Case {
    PointedOveralg P;
    FleetEntry     f;
  };
  auto const C2 = entry("C2");
  auto const C3 = entry("C3");
  auto const pt = entry("Pt2");
  std::vector<Case> const cases = {
      {trivial_overalg(C2.algebra), C2},
      {beta_star(C2.algebra, {0, 0}), C2},
      {beta_star(C3.algebra, {0, 0, 0}), C3},
      {FreePointed(pt.variety, pt.algebra, {1}).materialize(1), pt},
  };
  for (auto const& c : cases) {
    auto const  mod = modulize(c.P);
    std::size_t targets = 0;
    for (auto const& fm : fleet_modules(c.f)) {
      if (!fm.module.finite() || fm.module.fiber(0).order() > 4) {
        continue;
      }
      CAPTURE(fm.name);
      auto const               M = TotallyIn<AModule>::check(c.f.variety, fm.module);
      std::size_t const        k = c.P.base()->size();
      std::vector<std::size_t> sizes;
      for (Element a = 0; a < k; ++a) {
        sizes.push_back(static_cast<std::size_t>(M->fiber(a).order()));
      }
      auto const zetas = all_pointed_maps(c.P, sizes, [&](PointedHom const& h) {
        return is_pointed_hom_to_module(c.P, M.get(), h);
      });
      // Module homs MP -> M, searched over all images of the generators.
      std::size_t homs = 0;
      auto const  all  = all_pointed_maps(c.P, sizes, [](PointedHom const&) { return true; });
      for (auto const& g : all) {
        ModuleHom cand;
        bool      ok = true;
        for (Element a = 0; a < k && ok; ++a) {
          std::vector<Vec> cols;
          for (Point p : g.maps[a]) {
            cols.push_back(M->fiber(a).elements()[p]);
          }
          cand.maps.push_back(Matrix::from_columns(cols, M->fiber(a).rank()));
          for (auto const& v : mod.K[a].basis()) {
            ok = ok && M->fiber(a).is_zero(cand.maps[a].apply(v));
          }
        }
        if (ok && is_module_hom(mod.result, M.get(), cand)) {
          ++homs;
        }
      }
      CHECK(homs == zetas.size());
      for (auto const& zeta : zetas) {
        ModuleHom const xi = check_universal(mod, M, zeta);
        for (Element a = 0; a < k; ++a) {
          for (Point p = 0; p < c.P.fiber_size(a); ++p) {
            CHECK(M->fiber(a).index_of(xi.maps[a].apply(mod.eta[a][p])) == zeta.maps[a][p]);
          }
        }
      }
      ++targets;
    }
    CHECK(targets >= 3);
  }
  // M = MP with zeta = eta gives the identity.
  auto const mod  = modulize(beta_star(C2.algebra, {0, 0}));
  auto const self = TotallyIn<AModule>::check(C2.variety, mod.result);
  PointedHom eta;
  for (Element a = 0; a < 2; ++a) {
    auto& row = eta.maps.emplace_back();
    for (auto const& v : mod.eta[a]) {
      row.push_back(static_cast<Point>(mod.result.fiber(a).index_of(v)));
    }
  }
  auto const xi = check_universal(mod, self, eta);
  CHECK(is_module_hom(mod.result, mod.result, xi));
  for (Element a = 0; a < 2; ++a) {
    CHECK(ZHom(mod.result.fiber(a), mod.result.fiber(a), xi.maps[a]).same_map(ZHom::identity(mod.result.fiber(a))));
  }
}

TEST_CASE("functoriality and unit naturality") {
  auto const C2 = cyclic_group(2);
  auto const P  = beta_star(C2, {0, 0});
  auto const Q  = quotient(P, {{0, 0}, {0, 0}});
  auto const mP = modulize(P);
  auto const mQ = modulize(Q.quotient);
  PointedHom id{{{0, 1}, {0, 1}}};
  auto const one = modulize_hom(mP, mP, id);
  for (Element a = 0; a < 2; ++a) {
    CHECK(one.maps[a] == Matrix::identity(2));
  }
  auto const mq = modulize_hom(mP, mQ, Q.nat);
  for (Element a = 0; a < 2; ++a) {
    for (Point p = 0; p < 2; ++p) {
      CHECK(mQ.result.fiber(a).equal(mq.maps[a].apply(mP.eta[a][p]), mQ.eta[a][Q.nat.maps[a][p]]));
    }
  }
  // M(g o f) = Mg o Mf along P -> P/parity -> P/everything over S3.
  auto const S3   = symmetric_group3();
  auto const R    = beta_star(S3, std::vector<std::uint32_t>(6, 0));
  std::vector<std::uint32_t> const odd{0, 1, 1, 1, 0, 0};
  std::vector<std::vector<std::uint32_t>> by_parity(6), collapse(6);
  for (Element a = 0; a < 6; ++a) {
    for (Point p = 0; p < R.fiber_size(a); ++p) {
      // Points of the fiber over a are the pairs (a, a') in order of a'.
      by_parity[a].push_back(odd[p]);
    }
  }
  auto const f1 = quotient(R, by_parity);
  for (Element a = 0; a < 6; ++a) {
    collapse[a].assign(f1.quotient.fiber_size(a), 0);
  }
  auto const f2 = quotient(f1.quotient, collapse);
  PointedHom g_of_f;
  for (Element a = 0; a < 6; ++a) {
    auto& row = g_of_f.maps.emplace_back();
    for (Point p = 0; p < R.fiber_size(a); ++p) {
      row.push_back(f2.nat.maps[a][f1.nat.maps[a][p]]);
    }
  }
  auto const m0 = modulize(R), m1 = modulize(f1.quotient), m2 = modulize(f2.quotient);
  auto const h1 = modulize_hom(m0, m1, f1.nat), h2 = modulize_hom(m1, m2, f2.nat);
  auto const h  = modulize_hom(m0, m2, g_of_f);
  for (Element a = 0; a < 6; ++a) {
    CHECK(ZHom(m0.result.fiber(a), m2.result.fiber(a), h.maps[a])
              .same_map(ZHom(m0.result.fiber(a), m2.result.fiber(a), h2.maps[a] * h1.maps[a])));
  }
  try {
    modulize_hom(mP, mP, PointedHom{{{1, 0}, {0, 1}}});
    FAIL("expected an error");
  } catch (Error const& err) {
    CHECK(err.kind() == ErrorKind::NotHom);
  }
}
