// SPDX-License-Identifier: Apache-2.0

#include "envring/battery.hpp"

#include <random>

#include "envring/fleet.hpp"

namespace envring {

  namespace {

    Vec unit(std::size_t n, std::size_t i) {
      Vec v(n);
      v[i] = 1;
      return v;
    }

    Vec plus(Vec v, Vec const& w, Int const& c = 1) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] += c * w[i];
      }
      return v;
    }

    std::string at(Element a, Element b) {
      return " at (" + std::to_string(a) + "," + std::to_string(b) + ")";
    }

    // Records the first failure of a part.
    struct Part {
      CheckOutcome out;
      explicit Part(std::string name) {
        out.name = std::move(name);
      }
      bool check(bool ok, std::string const& detail) {
        if (!ok && out.pass) {
          out.pass   = false;
          out.detail = detail;
        }
        return ok;
      }
    };

    std::string poly_name(EnvelopingRingoid const& Z, Term const& u) {
      return print_term(u, Z.algebra()->signature(), Z.algebra()->carrier());
    }

  }  // namespace

  std::vector<SampleHom> sample_homs(AModule const& M, Variety const& V) {
    std::size_t const      k = M.base()->size();
    std::vector<SampleHom> out;
    ModuleHom              id;
    for (Element a = 0; a < k; ++a) {
      id.maps.push_back(Matrix::identity(M.fiber(a).rank()));
    }
    out.push_back(SampleHom{"identity", M, id});
    for (int n : {2, 3}) {
      std::vector<std::vector<Vec>> sub(k);
      for (Element a = 0; a < k; ++a) {
        for (std::size_t i = 0; i < M.fiber(a).rank(); ++i) {
          Vec v(M.fiber(a).rank());
          v[i] = n;
          sub[a].push_back(std::move(v));
        }
      }
      ModuleQuotient q = quotient(M, sub);
      out.push_back(SampleHom{"onto M/" + std::to_string(n) + "M", std::move(q.quotient), std::move(q.nat)});
    }
    std::vector<Matrix> tau;
    bool                swapped = false;
    for (Element a = 0; a < k; ++a) {
      FGAbGroup const& g = M.fiber(a);
      Matrix           t = Matrix::identity(g.rank());
      if (g.rank() == 2) {
        Matrix const s = Matrix::from_rows({{0, 1}, {1, 0}});
        bool         ok = true;
        for (auto const& r : g.relation_lattice().basis()) {
          ok = ok && g.is_zero(s.apply(r));
        }
        if (ok) {
          t       = s;
          swapped = true;
        }
      }
      tau.push_back(std::move(t));
    }
    if (swapped) {
      AModule   N = twist(M, tau);
      ModuleHom f{tau};
      check_module_hom(M, N, f);
      out.push_back(SampleHom{"swap onto the twisted copy", std::move(N), std::move(f)});
    }
    for (auto const& s : out) {
      if (!totally_in(V, s.target)) {
        fail(ErrorKind::NotTotallyInV, "sample target " + s.name + " is not totally in the variety");
      }
    }
    return out;
  }

  std::vector<CheckOutcome> action_theorem(EnvelopingRingoid const& Z, ModuleAction const& M) {
    Ringoid const&    X   = Z.ringoid();
    AModule const&    mod = M.module();
    std::size_t const k   = X.objects();
    RingoidModule const GM = functor_G(Z, M);
    std::vector<std::vector<Vec>> elems(k);
    for (Element a = 0; a < k; ++a) {
      elems[a] = mod.fiber(a).elements();
    }
    auto act = [&](Element a, Element b, Vec const& z, Vec const& m) {
      return GM.action(X, a, b, z).apply(m);
    };
    auto same = [&](Element a, Vec const& x, Vec const& y) { return mod.fiber(a).equal(x, y); };

    std::vector<CheckOutcome> out;

    Part p1("part 1: (x)_b m = m");
    for (Element b = 0; b < k; ++b) {
      for (auto const& m : elems[b]) {
        p1.check(same(b, act(b, b, X.identity(b), m), m), "identity moves an element of fiber " + std::to_string(b));
      }
    }
    out.push_back(p1.out);

    Part p2("part 2: z(x)_b = z = (x)_a z");
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        FGAbGroup const& g = X.hom(a, b);
        for (std::size_t i = 0; i < g.rank(); ++i) {
          Vec const e = unit(g.rank(), i);
          p2.check(g.equal(X.compose(a, b, b, e, X.identity(b)), e), "right identity" + at(a, b));
          p2.check(g.equal(X.compose(a, a, b, X.identity(a), e), e), "left identity" + at(a, b));
        }
      }
    }
    out.push_back(p2.out);

    Part p3("part 3: the action is bilinear");
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        std::size_t const r = X.hom(a, b).rank();
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = i; j < r; ++j) {
            Vec const z = plus(unit(r, i), unit(r, j));
            for (auto const& m : elems[b]) {
              for (auto const& n : elems[b]) {
                Vec const lhs = act(a, b, z, plus(m, n));
                Vec       rhs = plus(act(a, b, unit(r, i), m), act(a, b, unit(r, i), n));
                rhs           = plus(plus(rhs, act(a, b, unit(r, j), m)), act(a, b, unit(r, j), n));
                p3.check(same(a, lhs, rhs), "(z+z')(m+n) differs" + at(a, b));
              }
            }
          }
        }
      }
    }
    out.push_back(p3.out);

    Part p4("part 4: multiplication is bilinear");
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          std::size_t const r1 = X.hom(c, a).rank(), r2 = X.hom(a, b).rank();
          FGAbGroup const&  g  = X.hom(c, b);
          for (std::size_t i = 0; i < r1; ++i) {
            for (std::size_t j = 0; j < r2; ++j) {
              for (std::size_t l = 0; l < r2; ++l) {
                Vec const lhs = X.compose(c, a, b, unit(r1, i), plus(unit(r2, j), unit(r2, l)));
                Vec const rhs = plus(X.compose(c, a, b, unit(r1, i), unit(r2, j)),
                                     X.compose(c, a, b, unit(r1, i), unit(r2, l)));
                p4.check(g.equal(lhs, rhs), "right additivity" + at(c, b));
              }
              for (std::size_t l = 0; l < r1; ++l) {
                Vec const lhs = X.compose(c, a, b, plus(unit(r1, i), unit(r1, l)), unit(r2, j));
                Vec const rhs = plus(X.compose(c, a, b, unit(r1, i), unit(r2, j)),
                                     X.compose(c, a, b, unit(r1, l), unit(r2, j)));
                p4.check(g.equal(lhs, rhs), "left additivity" + at(c, b));
              }
            }
          }
        }
      }
    }
    out.push_back(p4.out);

    Part p5("part 5: (u)_b m = u^M(m)");
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        for (auto const& u : Z.presentation(a, b).gens) {
          Vec const    z = Z.element(u, b);
          Matrix const um = M.unary(Polynomial{1, u}, b);
          for (auto const& m : elems[b]) {
            p5.check(same(a, act(a, b, z, m), um.apply(m)), "(" + poly_name(Z, u) + ")" + at(a, b));
          }
        }
      }
    }
    out.push_back(p5.out);

    Part p6("part 6: (v)_{u(b)} (u)_b = (vu)_b");
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        for (auto const& u : Z.presentation(a, b).gens) {
          Vec const zu = Z.element(u, b);
          for (Element c = 0; c < k; ++c) {
            HomPresentation const& left = Z.presentation(c, a);
            for (auto s : left.survivors) {
              Term const& v   = left.gens[s];
              Vec const   lhs = X.compose(c, a, b, Z.element(v, a), zu);
              Vec const   rhs = Z.element(compose_terms(v, {u}), b);
              p6.check(X.hom(c, b).equal(lhs, rhs), "(" + poly_name(Z, v) + ") after (" + poly_name(Z, u) + ")" + at(a, b));
            }
          }
        }
      }
    }
    out.push_back(p6.out);

    Part p7("part 7: the action is associative");
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          std::size_t const r1 = X.hom(c, a).rank(), r2 = X.hom(a, b).rank();
          for (std::size_t i = 0; i < r1; ++i) {
            for (std::size_t j = 0; j < r2; ++j) {
              Vec const zz = X.basis_product(c, a, b, i, j);
              for (auto const& m : elems[b]) {
                Vec const lhs = act(c, b, zz, m);
                Vec const rhs = act(c, a, unit(r1, i), act(a, b, unit(r2, j), m));
                p7.check(same(c, lhs, rhs), "(z'z)m differs" + at(c, b));
              }
            }
          }
        }
      }
    }
    out.push_back(p7.out);

    Part p8("part 8: multiplication is associative");
    if (auto bad = X.check_axioms()) {
      p8.check(false, *bad);
    }
    out.push_back(p8.out);

    Part p9("part 9: 1_b = (x)_b and 0 = (a)_b");
    for (Element b = 0; b < k; ++b) {
      p9.check(X.hom(b, b).equal(X.identity(b), Z.element(Term::var(1), b)), "identity of " + std::to_string(b));
      for (Element a = 0; a < k; ++a) {
        p9.check(X.hom(a, b).is_zero(Z.element(Term::constant(a), b)), "constant" + at(a, b));
      }
    }
    out.push_back(p9.out);

    Part p10("part 10: M is a left Z-module");
    if (auto bad = check_ringoid_module(X, GM)) {
      p10.check(false, *bad);
    }
    out.push_back(p10.out);

    Part p11("part 11: the action is natural");
    for (auto const& s : sample_homs(mod, Z.variety())) {
      ModuleAction const  NA(TotallyIn<AModule>::check(Z.variety(), s.target));
      RingoidModule const GN = functor_G(Z, NA);
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          std::size_t const r = X.hom(a, b).rank();
          for (std::size_t i = 0; i < r; ++i) {
            for (auto const& m : elems[b]) {
              Vec const lhs = GN.action(X, a, b, unit(r, i)).apply(s.map.maps[b].apply(m));
              Vec const rhs = s.map.maps[a].apply(act(a, b, unit(r, i), m));
              p11.check(s.target.fiber(a).equal(lhs, rhs), s.name + at(a, b));
            }
          }
        }
      }
    }
    out.push_back(p11.out);
    return out;
  }

  CheckOutcome round_trip(EnvelopingRingoid const& Z, ModuleAction const& M) {
    Part              part("G and H are inverse");
    AModule const&    mod = M.module();
    AlgebraPtr const& A   = mod.base();
    std::size_t const k   = A->size();
    RingoidModule const GM  = functor_G(Z, M);
    AModule const       HGM = functor_H(Z, GM);
    for (std::size_t s = 0; s < A->signature().size(); ++s) {
      unsigned const n = A->signature()[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        FGAbGroup const& target = mod.fiber(A->apply(s, a));
        for (std::size_t i = 0; i < n; ++i) {
          Matrix const& x = mod.part(s, a, i);
          Matrix const& y = HGM.part(s, a, i);
          for (std::size_t j = 0; j < x.cols(); ++j) {
            part.check(target.equal(x.column(j), y.column(j)), "HG changes a unary part of " + A->signature()[s].name);
          }
        }
      }
    }
    ModuleAction const  HA(TotallyIn<AModule>::check(Z.variety(), HGM));
    RingoidModule const GHGM = functor_G(Z, HA);
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        auto const& x = GM.actions[a * k + b];
        auto const& y = GHGM.actions[a * k + b];
        for (std::size_t i = 0; i < x.size(); ++i) {
          for (std::size_t j = 0; j < x[i].cols(); ++j) {
            part.check(mod.fiber(a).equal(x[i].column(j), y[i].column(j)), "GH changes an action" + at(a, b));
          }
        }
      }
    }
    return part.out;
  }

  CheckOutcome canonical_map_check(EnvelopingRingoid const& Z, ModuleAction const& M) {
    Part part("f_M is a cofaithful ringoid hom");
    try {
      CanonicalMap const f = canonical_map(Z, M);
      if (auto bad = check_ringoid_hom(Z.ringoid(), f.target.ring, f.map)) {
        part.check(false, *bad);
      }
    } catch (Error const& e) {
      part.check(false, e.what());
    }
    return part.out;
  }

  CheckOutcome j_equals_r(EnvelopingRingoid const& Z) {
    Part              part("J = R at depth " + std::to_string(Z.depth()));
    std::size_t const k = Z.algebra()->size();
    for (Element b = 0; b < k; ++b) {
      std::vector<Lattice> const J = j_lattices(Z, b);
      for (Element a = 0; a < k; ++a) {
        Lattice const& R = Z.presentation(a, b).relations;
        part.check(J[a].contains(R), "R not inside J" + at(a, b));
        part.check(R.contains(J[a]), "J not inside R" + at(a, b));
      }
    }
    return part.out;
  }

  std::vector<CheckOutcome> group_corollaries(EnvelopingRingoid const& Z, std::uint64_t seed, std::size_t samples) {
    if (Z.variety().kind() != VarietyKind::Groups) {
      fail(ErrorKind::Validation, "group corollaries need the groups variety");
    }
    Signature const&  sig = Z.algebra()->signature();
    std::uint32_t const mul = static_cast<std::uint32_t>(sig.index_of("mul"));
    std::uint32_t const inv = static_cast<std::uint32_t>(sig.index_of("inv"));
    Ringoid const&    X   = Z.ringoid();
    std::size_t const k   = X.objects();
    auto d = [&](Term const& x, Term const& y, Term const& z) {
      return Term::app(mul, {Term::app(mul, {x, Term::app(inv, {y})}), z});
    };
    auto c = [](Element a) { return Term::constant(a); };
    Term const x = Term::var(1);

    std::vector<CheckOutcome> out;

    Part lift("every element is a single generator");
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        HomPresentation const& h = Z.presentation(a, b);
        std::size_t const      r = h.survivors.size();
        std::vector<int>       coef(r, -1);
        while (true) {
          Term t = c(a);
          Vec  want(r);
          for (std::size_t i = 0; i < r; ++i) {
            Term const& g = h.gens[h.survivors[i]];
            want[i]       = coef[i];
            if (coef[i] > 0) {
              t = d(t, c(a), g);
            } else if (coef[i] < 0) {
              t = d(t, g, c(a));
            }
          }
          lift.check(h.group.equal(Z.element(t, b), want),
                     "(" + poly_name(Z, Z.canonicalizer().canon(t)) + ")" + at(a, b));
          std::size_t p = 0;
          while (p < r && ++coef[p] == 2) {
            coef[p++] = -1;
          }
          if (p == r) {
            break;
          }
        }
      }
    }
    out.push_back(lift.out);

    Part         diff("difference term on " + std::to_string(samples) + " samples");
    std::mt19937_64 rng(seed);
    auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    for (std::size_t s = 0; s < samples; ++s) {
      Element const          a = static_cast<Element>(pick(k));
      Element const          b = static_cast<Element>(pick(k));
      auto const&            g = Z.presentation(a, b).gens;
      Term const&            u = g[pick(g.size())];
      Term const&            v = g[pick(g.size())];
      Term const&            w = g[pick(g.size())];
      FGAbGroup const&       grp = X.hom(a, b);
      Vec const lhs = Z.element(d(u, v, w), b);
      Vec const rhs = plus(plus(Z.element(u, b), Z.element(v, b), -1), Z.element(w, b));
      diff.check(grp.equal(lhs, rhs), "d(" + poly_name(Z, u) + ", " + poly_name(Z, v) + ", " + poly_name(Z, w) + ")" + at(a, b));
    }
    out.push_back(diff.out);

    Part iso("the _aZ_a are isomorphic");
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        Vec const p = Z.element(d(x, c(a), c(b)), a);  // in _bZ_a
        Vec const q = Z.element(d(x, c(b), c(a)), b);  // in _aZ_b
        iso.check(X.hom(a, a).equal(X.compose(a, b, a, q, p), X.identity(a)), "q p is not 1" + at(a, b));
        iso.check(X.hom(b, b).equal(X.compose(b, a, b, p, q), X.identity(b)), "p q is not 1" + at(a, b));
        std::size_t const r = X.hom(a, a).rank();
        auto conj = [&](Vec const& z) { return X.compose(b, a, b, X.compose(b, a, a, p, z), q); };
        for (std::size_t i = 0; i < r; ++i) {
          for (std::size_t j = 0; j < r; ++j) {
            Vec const zz = X.basis_product(a, a, a, i, j);
            iso.check(X.hom(b, b).equal(conj(zz), X.compose(b, b, b, conj(unit(r, i)), conj(unit(r, j)))),
                      "conjugation not multiplicative" + at(a, b));
          }
        }
      }
    }
    out.push_back(iso.out);
    return out;
  }

}  // namespace envring
