// SPDX-License-Identifier: Apache-2.0
//
// Independent models of the enveloping ringoid for the shipped varieties,
// each sending (u)_b to an explicit element and composition to an explicit
// product:
//   groups       Fox derivative du/dx at x = b in the group ring Z[G]
//   ab           coefficient of x in Z
//   cring        formal derivative u'(b) in R
//   pointed_set  Z on the diagonal (x -> 1), 0 elsewhere
// and an exhaustive search over maps of pointed overalgebras.

#ifndef ENVRING_TESTS_ORACLES_HPP_
#define ENVRING_TESTS_ORACLES_HPP_

#include <functional>
#include <optional>
#include <string>
#include <utility>

#include "envring/ringoid.hpp"

namespace oracle {

  using namespace envring;

  struct Model {
    // Target group of _aZ_b.
    std::function<FGAbGroup(Element a, Element b)> target;
    // Image of (u)_b.
    std::function<Vec(Term const& u, Element b)> image;
    // Image of a composite from the images of its factors in _cZ_a, _aZ_b.
    std::function<Vec(Vec const& left, Vec const& right)> multiply;
  };

  inline Model group_ring(FinAlgebra const& G) {
    std::size_t const   n   = G.size();
    auto const&         sig = G.signature();
    std::uint32_t const mul = static_cast<std::uint32_t>(sig.index_of("mul"));
    std::uint32_t const inv = static_cast<std::uint32_t>(sig.index_of("inv"));
    Element const       e   = G.table(sig.index_of("e")).at(0);
    // g * v in Z[G].
    auto shift = [&G, mul, n](Element g, Vec const& v) {
      Vec out(n);
      for (Element h = 0; h < n; ++h) {
        out[G.apply(mul, {g, h})] += v[h];
      }
      return out;
    };
    Model m;
    m.target = [n](Element, Element) { return FGAbGroup(n); };
    m.image  = [&G, n, mul, inv, e, shift](Term const& u, Element b) {
      using Val = std::pair<Element, Vec>;
      Val const r = fold<Val>(
          u,
          [&](std::uint32_t) {
            Vec d(n);
            d[e] = 1;
            return Val{b, d};
          },
          [&](Element c) { return Val{c, Vec(n)}; },
          [&](std::uint32_t s, std::span<Val> ch) {
            if (s == mul) {
              Vec d = ch[0].second;
              Vec t = shift(ch[0].first, ch[1].second);
              for (std::size_t i = 0; i < n; ++i) {
                d[i] += t[i];
              }
              return Val{G.apply(mul, {ch[0].first, ch[1].first}), d};
            }
            if (s == inv) {
              Element const p = G.apply(inv, {ch[0].first});
              Vec           d = shift(p, ch[0].second);
              for (auto& x : d) {
                x = -x;
              }
              return Val{p, d};
            }
            return Val{e, Vec(n)};
          });
      return r.second;
    };
    m.multiply = [&G, n, mul](Vec const& x, Vec const& y) {
      Vec out(n);
      for (Element g = 0; g < n; ++g) {
        for (Element h = 0; h < n; ++h) {
          out[G.apply(mul, {g, h})] += x[g] * y[h];
        }
      }
      return out;
    };
    return m;
  }

  inline Model integers(FinAlgebra const& A) {
    std::uint32_t const add = static_cast<std::uint32_t>(A.signature().index_of("add"));
    std::uint32_t const neg = static_cast<std::uint32_t>(A.signature().index_of("neg"));
    Model               m;
    m.target = [](Element, Element) { return FGAbGroup(1); };
    m.image  = [add, neg](Term const& u, Element) {
      Int const k = fold<Int>(
          u, [](std::uint32_t) { return Int(1); }, [](Element) { return Int(0); },
          [&](std::uint32_t s, std::span<Int> ch) {
            if (s == add) {
              return Int(ch[0] + ch[1]);
            }
            if (s == neg) {
              return Int(-ch[0]);
            }
            return Int(0);
          });
      return Vec{k};
    };
    m.multiply = [](Vec const& x, Vec const& y) { return Vec{x[0] * y[0]}; };
    return m;
  }

  inline Model derivative(FinAlgebra const& R) {
    auto const&         sig  = R.signature();
    std::uint32_t const add  = static_cast<std::uint32_t>(sig.index_of("add"));
    std::uint32_t const neg  = static_cast<std::uint32_t>(sig.index_of("neg"));
    std::uint32_t const mul  = static_cast<std::uint32_t>(sig.index_of("mul"));
    std::uint32_t const zero = static_cast<std::uint32_t>(sig.index_of("zero"));
    std::uint32_t const one  = static_cast<std::uint32_t>(sig.index_of("one"));
    Element const       z    = R.table(zero).at(0);
    Element const       o    = R.table(one).at(0);
    // Z/n with elements named by their residues, as built by zmod_ring.
    auto residue = [&R](Element a) { return Int(std::stoi(R.element_name(a))); };
    Int const n = Int(static_cast<long>(R.size()));
    Model     m;
    m.target = [n](Element, Element) { return FGAbGroup::cyclic_sum({n}); };
    m.image  = [&R, add, neg, mul, one, z, o, residue](Term const& u, Element b) {
      using Val = std::pair<Element, Element>;  // value and derivative
      Val const r = fold<Val>(
          u, [&](std::uint32_t) { return Val{b, o}; }, [&](Element c) { return Val{c, z}; },
          [&](std::uint32_t s, std::span<Val> ch) {
            if (s == add) {
              return Val{R.apply(add, {ch[0].first, ch[1].first}), R.apply(add, {ch[0].second, ch[1].second})};
            }
            if (s == neg) {
              return Val{R.apply(neg, {ch[0].first}), R.apply(neg, {ch[0].second})};
            }
            if (s == mul) {
              Element const d = R.apply(add, {R.apply(mul, {ch[0].second, ch[1].first}),
                                              R.apply(mul, {ch[0].first, ch[1].second})});
              return Val{R.apply(mul, {ch[0].first, ch[1].first}), d};
            }
            return Val{s == one ? o : z, z};
          });
      return Vec{residue(r.second)};
    };
    m.multiply = [](Vec const& x, Vec const& y) { return Vec{x[0] * y[0]}; };
    return m;
  }

  inline Model diagonal() {
    Model m;
    m.target = [](Element a, Element b) {
      return a == b ? FGAbGroup(1) : FGAbGroup(1, std::vector<Vec>{Vec{1}});
    };
    m.image    = [](Term const& u, Element) { return Vec{Int(u.is_var() ? 1 : 0)}; };
    m.multiply = [](Vec const& x, Vec const& y) { return Vec{x[0] * y[0]}; };
    return m;
  }

  inline Model for_variety(Variety const& V, FinAlgebra const& A) {
    switch (V.kind()) {
      case VarietyKind::Groups:
        return group_ring(A);
      case VarietyKind::AB:
        return integers(A);
      case VarietyKind::CRing:
        return derivative(A);
      default:
        return diagonal();
    }
  }

  // The model map on every hom-group is an isomorphism, kills every raw
  // relation vector, agrees with the reduction of every window generator,
  // and carries the composition table to the model product.
  inline std::optional<std::string> agrees(EnvelopingRingoid const& Z, Model const& m) {
    Ringoid const&    X = Z.ringoid();
    std::size_t const k = X.objects();
    std::vector<Matrix> maps;
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        HomPresentation const& h = Z.presentation(a, b);
        FGAbGroup const        T = m.target(a, b);
        std::vector<Vec>       cols;
        for (auto s : h.survivors) {
          cols.push_back(m.image(h.gens[s], b));
        }
        Matrix const M = Matrix::from_columns(cols, T.rank());
        for (auto const& r : h.group.relation_lattice().basis()) {
          if (!T.is_zero(M.apply(r))) {
            return "model map not well defined at " + std::to_string(a) + "," + std::to_string(b);
          }
        }
        ZHom const f(h.group, T, M);
        if (!(h.group.iso_type() == T.iso_type()) || !cokernel(f).group.is_trivial()) {
          return "model map not an isomorphism at " + std::to_string(a) + "," + std::to_string(b);
        }
        for (std::size_t g = 0; g < h.gens.size(); ++g) {
          if (!T.equal(m.image(h.gens[g], b), M.apply(h.images[g]))) {
            return "generator " + std::to_string(g) + " reduces inconsistently at " + std::to_string(a) + "," +
                   std::to_string(b);
          }
        }
        maps.push_back(M);
      }
    }
    for (Element b = 0; b < k; ++b) {
      for (auto const& rel : Z.relations(b)) {
        FGAbGroup const T = m.target(rel.a, b);
        Vec             sum(T.rank());
        for (auto const& [c, t] : rel.terms) {
          Vec const v = m.image(t, b);
          for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += c * v[i];
          }
        }
        if (!T.is_zero(sum)) {
          return "a relation vector survives in the model at object " + std::to_string(b);
        }
      }
    }
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          FGAbGroup const T  = m.target(c, b);
          std::size_t const r1 = X.hom(c, a).rank(), r2 = X.hom(a, b).rank();
          for (std::size_t i = 0; i < r1; ++i) {
            for (std::size_t j = 0; j < r2; ++j) {
              Vec const lhs = maps[c * k + b].apply(X.basis_product(c, a, b, i, j));
              Vec const rhs = m.multiply(maps[c * k + a].column(i), maps[a * k + b].column(j));
              if (!T.equal(lhs, rhs)) {
                return "composition differs from the model at " + std::to_string(c) + "," + std::to_string(a) +
                       "," + std::to_string(b);
              }
            }
          }
        }
      }
    }
    return std::nullopt;
  }

  // Every map of the fibers of P into those of Q fixing basepoints, filtered
  // by keep; a map is a vector of per-fiber point vectors.
  template <typename Keep>
  std::vector<PointedHom> all_pointed_maps(PointedOveralg const& P, std::vector<std::size_t> const& target_sizes,
                                           Keep&& keep) {
    using Point             = PointedOveralg::Point;
    std::size_t const       k = P.base()->size();
    std::vector<PointedHom> out;
    PointedHom              h;
    h.maps.resize(k);
    std::function<void(Element, Point)> go = [&](Element a, Point p) {
      if (a == k) {
        if (keep(h)) {
          out.push_back(h);
        }
        return;
      }
      if (p == P.fiber_size(a)) {
        go(a + 1, 0);
        return;
      }
      if (p == 0) {
        h.maps[a].assign(P.fiber_size(a), 0);
      }
      if (p == P.basepoint(a)) {
        h.maps[a][p] = 0;
        go(a, p + 1);
        return;
      }
      for (Point q = 0; q < target_sizes[a]; ++q) {
        h.maps[a][p] = q;
        go(a, p + 1);
      }
    };
    go(0, 0);
    return out;
  }

}  // namespace oracle

#endif  // ENVRING_TESTS_ORACLES_HPP_
