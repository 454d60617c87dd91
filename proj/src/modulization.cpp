// SPDX-License-Identifier: Apache-2.0

#include "envring/modulization.hpp"

namespace envring {

  namespace {
    using Point = PointedOveralg::Point;

    Vec unit(std::size_t n, std::size_t j) {
      Vec v(n);
      v[j] = 1;
      return v;
    }

    std::vector<Point> fiber_tuple_at(PointedOveralg const& P, std::span<Element const> a, std::size_t r) {
      std::vector<Point> p(a.size());
      for (std::size_t j = a.size(); j-- > 0;) {
        p[j] = static_cast<Point>(r % P.fiber_size(a[j]));
        r /= P.fiber_size(a[j]);
      }
      return p;
    }

    std::size_t fiber_tuple_count(PointedOveralg const& P, std::span<Element const> a) {
      std::size_t n = 1;
      for (Element ai : a) {
        n *= P.fiber_size(ai);
      }
      return n;
    }

  }  // namespace

  AModule hat_modulize(PointedOveralg const& P) {
    auto const&            A = *P.base();
    std::size_t const      k = A.size();
    std::vector<FGAbGroup> fibers;
    for (Element a = 0; a < k; ++a) {
      fibers.emplace_back(P.fiber_size(a));
    }
    AModule::Parts parts;
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      unsigned const n         = A.signature()[s].arity;
      auto&          per_tuple = parts.emplace_back();
      for (auto const& a : all_tuples(k, n)) {
        Element const t     = A.apply(s, a);
        auto&         per_i = per_tuple.emplace_back();
        for (unsigned i = 0; i < n; ++i) {
          Matrix m(P.fiber_size(t), P.fiber_size(a[i]));
          for (Point p = 0; p < P.fiber_size(a[i]); ++p) {
            m(P.apply_at(s, a, i, p), p) = 1;
          }
          per_i.push_back(std::move(m));
        }
      }
    }
    return AModule(P.base(), std::move(fibers), std::move(parts));
  }

  std::vector<std::pair<Element, Vec>> gen_set(PointedOveralg const& P) {
    auto const&                          A = *P.base();
    std::size_t const                    k = A.size();
    std::vector<std::pair<Element, Vec>> out;
    for (Element a = 0; a < k; ++a) {
      out.emplace_back(a, unit(P.fiber_size(a), P.basepoint(a)));
    }
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      unsigned const n = A.signature()[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        Element const     t     = A.apply(s, a);
        std::size_t const count = fiber_tuple_count(P, a);
        for (std::size_t r = 0; r < count; ++r) {
          auto const p = fiber_tuple_at(P, a, r);
          Vec        v = unit(P.fiber_size(t), P.apply(s, a, p));
          for (unsigned i = 0; i < n; ++i) {
            v[P.apply_at(s, a, i, p[i])] -= 1;
          }
          out.emplace_back(t, std::move(v));
        }
      }
    }
    return out;
  }

  Modulization modulize(PointedOveralg const& P) {
    auto const&       A = *P.base();
    std::size_t const k = A.size();
    Modulization      out;
    out.source = P;
    out.hat    = hat_modulize(P);

    std::vector<IndexedMap> maps;
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      unsigned const n = A.signature()[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        Element const t = A.apply(s, a);
        for (unsigned i = 0; i < n; ++i) {
          maps.push_back({a[i], t, out.hat.part(s, a, i)});
        }
      }
    }
    std::vector<std::pair<std::size_t, Vec>> seeds;
    for (auto& [a, v] : gen_set(P)) {
      seeds.emplace_back(a, std::move(v));
    }
    out.K = subgroup_saturate(out.hat.fibers(), seeds, maps);
    std::vector<FGAbGroup> fibers;
    for (Element a = 0; a < k; ++a) {
      out.K[a].canonicalize();
      fibers.emplace_back(out.K[a]);
    }
    out.result = AModule(P.base(), std::move(fibers), out.hat.parts());
    out.eta.resize(k);
    for (Element a = 0; a < k; ++a) {
      for (Point p = 0; p < P.fiber_size(a); ++p) {
        out.eta[a].push_back(out.result.fiber(a).reduce(unit(P.fiber_size(a), p)));
      }
    }

    // eta is a pointed homomorphism P -> U(MP).
    for (Element a = 0; a < k; ++a) {
      if (!out.result.fiber(a).is_zero(out.eta[a][P.basepoint(a)])) {
        fail(ErrorKind::NotWellDefined, "eta does not send the basepoint over " + A.element_name(a) + " to zero");
      }
    }
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      unsigned const n = A.signature()[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        Element const     t     = A.apply(s, a);
        std::size_t const count = fiber_tuple_count(P, a);
        for (std::size_t r = 0; r < count; ++r) {
          auto const       p = fiber_tuple_at(P, a, r);
          std::vector<Vec> m;
          for (unsigned i = 0; i < n; ++i) {
            m.push_back(out.eta[a[i]][p[i]]);
          }
          if (!out.result.fiber(t).equal(out.result.apply(s, a, m), out.eta[t][P.apply(s, a, p)])) {
            fail(ErrorKind::NotWellDefined, "eta is not a homomorphism at '" + A.signature()[s].name + "'");
          }
        }
      }
    }
    // Spanning: the eta images are the classes of a basis of the free group.
    for (Element a = 0; a < k; ++a) {
      Lattice span = out.K[a];
      for (auto const& v : out.eta[a]) {
        span.insert(v);
      }
      if (!span.full_rank() || span.rank() != P.fiber_size(a)) {
        fail(ErrorKind::NotWellDefined, "eta images do not span the fiber over " + A.element_name(a));
      }
      for (std::size_t j = 0; j < P.fiber_size(a); ++j) {
        if (!span.contains(unit(P.fiber_size(a), j))) {
          fail(ErrorKind::NotWellDefined, "eta images do not span the fiber over " + A.element_name(a));
        }
      }
    }
    return out;
  }

  ModuleHom check_universal(Modulization const& mod, TotallyIn<AModule> const& M, PointedHom const& zeta) {
    auto const&       P = mod.source;
    std::size_t const k = P.base()->size();
    if (!is_pointed_hom_to_module(P, M.get(), zeta)) {
      fail(ErrorKind::NotHom, "zeta is not a pointed homomorphism into the module");
    }
    ModuleHom xi;
    for (Element a = 0; a < k; ++a) {
      auto const       elems = M->fiber(a).elements();
      std::vector<Vec> cols;
      for (Point p = 0; p < P.fiber_size(a); ++p) {
        cols.push_back(elems[zeta.maps[a][p]]);
      }
      Matrix const m = Matrix::from_columns(cols, M->fiber(a).rank());
      for (auto const& v : mod.K[a].basis()) {
        if (!M->fiber(a).is_zero(m.apply(v))) {
          fail(ErrorKind::NotWellDefined, "a relation of the modulization over " + P.base()->element_name(a)
                                              + " does not vanish in the target");
        }
      }
      xi.maps.push_back(m);
    }
    check_module_hom(mod.result, M.get(), xi);
    return xi;
  }

  bool check_identity_transfer(PointedOveralg const& P, AModule const& M, std::vector<Identity> const& identities) {
    auto const& A     = *P.base();
    auto const  total = total_algebra(P);
    for (auto const& id : identities) {
      if (!satisfies(*total.algebra, id)) {
        continue;
      }
      for (auto const& a : all_tuples(A.size(), id.arity)) {
        Element const t = eval(A, id.lhs, a);
        for (std::size_t i = 0; i < id.arity; ++i) {
          Matrix const diff = t_part(M, id.lhs, a, i) - t_part(M, id.rhs, a, i);
          if (!ZHom(M.fiber(a[i]), M.fiber(t), diff).is_zero()) {
            return false;
          }
        }
      }
    }
    return true;
  }

  bool check_identity_transfer(Modulization const& mod, std::vector<Identity> const& identities) {
    return check_identity_transfer(mod.source, mod.result, identities);
  }

  ModuleHom modulize_hom(Modulization const& from, Modulization const& to, PointedHom const& f) {
    if (!is_pointed_hom(from.source, to.source, f)) {
      fail(ErrorKind::NotHom, "map is not a pointed homomorphism");
    }
    std::size_t const k = from.source.base()->size();
    ModuleHom         out;
    for (Element a = 0; a < k; ++a) {
      Matrix m(to.source.fiber_size(a), from.source.fiber_size(a));
      for (Point p = 0; p < from.source.fiber_size(a); ++p) {
        m(f.maps[a][p], p) = 1;
      }
      out.maps.push_back(std::move(m));
    }
    try {
      check_module_hom(from.result, to.result, out);
    } catch (Error const& e) {
      fail(ErrorKind::NotWellDefined, e.what());
    }
    return out;
  }

}  // namespace envring
