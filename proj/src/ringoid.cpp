// SPDX-License-Identifier: Apache-2.0

#include "envring/ringoid.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <set>

namespace envring {

  namespace {

    Vec add_scaled(Vec v, Int const& c, Vec const& w) {
      for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] += c * w[i];
      }
      return v;
    }

    Vec unit(std::size_t n, std::size_t i) {
      Vec v(n);
      v[i] = 1;
      return v;
    }

    std::string pair_name(Element a, Element b) {
      return "(" + std::to_string(a) + "," + std::to_string(b) + ")";
    }

    // Columns of m reduced in g, so equal maps compare equal.
    Matrix reduce_columns(FGAbGroup const& g, Matrix const& m) {
      std::vector<Vec> cols;
      for (std::size_t j = 0; j < m.cols(); ++j) {
        cols.push_back(g.reduce(m.column(j)));
      }
      return Matrix::from_columns(cols, m.rows());
    }

    bool maps_equal(FGAbGroup const& cod, Matrix const& x, Matrix const& y) {
      for (std::size_t j = 0; j < x.cols(); ++j) {
        if (!cod.equal(x.column(j), y.column(j))) {
          return false;
        }
      }
      return true;
    }

    // Every relation of dom is sent into the relations of cod.
    bool well_defined(FGAbGroup const& dom, FGAbGroup const& cod, Matrix const& m) {
      for (auto const& r : dom.relation_lattice().basis()) {
        if (!cod.is_zero(m.apply(r))) {
          return false;
        }
      }
      return true;
    }

    Vec flatten(Matrix const& m) {
      Vec v(m.rows() * m.cols());
      for (std::size_t j = 0; j < m.cols(); ++j) {
        for (std::size_t i = 0; i < m.rows(); ++i) {
          v[j * m.rows() + i] = m(i, j);
        }
      }
      return v;
    }

    Matrix unflatten(Vec const& v, std::size_t rows, std::size_t cols) {
      Matrix m(rows, cols);
      for (std::size_t j = 0; j < cols; ++j) {
        for (std::size_t i = 0; i < rows; ++i) {
          m(i, j) = v[j * rows + i];
        }
      }
      return m;
    }

    Term substitute_leaves(Term const& u, Element b, bool keep_first) {
      std::size_t seen = 0;
      return fold<Term>(
          u,
          [&](std::uint32_t i) {
            bool const first = seen++ == 0;
            return first == keep_first ? Term::var(i) : Term::constant(b);
          },
          [](Element c) { return Term::constant(c); },
          [](std::uint32_t s, std::span<Term> ch) {
            return Term::app(s, std::span<Term const>(ch.data(), ch.size()));
          });
    }

    void merge_terms(std::vector<std::pair<Int, Term>>& terms) {
      std::sort(terms.begin(), terms.end(), [](auto const& x, auto const& y) { return x.second < y.second; });
      std::vector<std::pair<Int, Term>> out;
      for (auto& [c, t] : terms) {
        if (!out.empty() && out.back().second == t) {
          out.back().first += c;
        } else {
          out.emplace_back(c, std::move(t));
        }
      }
      std::erase_if(out, [](auto const& e) { return e.first == 0; });
      terms = std::move(out);
    }

  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Ringoid
  ////////////////////////////////////////////////////////////////////////

  Ringoid::Ringoid(std::size_t                           objects,
                   std::vector<FGAbGroup>                homs,
                   std::vector<std::vector<std::string>> labels,
                   std::vector<std::vector<Vec>>         products,
                   std::vector<Vec>                      identities)
      : _k(objects),
        _homs(std::move(homs)),
        _labels(std::move(labels)),
        _products(std::move(products)),
        _identities(std::move(identities)) {
    std::size_t const k = _k;
    if (_homs.size() != k * k || _labels.size() != k * k || _products.size() != k * k * k ||
        _identities.size() != k) {
      fail(ErrorKind::Validation, "ringoid data has the wrong shape");
    }
    for (std::size_t h = 0; h < k * k; ++h) {
      if (_labels[h].size() != _homs[h].rank()) {
        fail(ErrorKind::Validation, "ringoid labels do not match the generators");
      }
    }
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          auto const& p = _products[(c * k + a) * k + b];
          if (p.size() != hom(c, a).rank() * hom(a, b).rank()) {
            fail(ErrorKind::Validation, "ringoid composition table has the wrong size");
          }
          for (auto const& v : p) {
            if (v.size() != hom(c, b).rank()) {
              fail(ErrorKind::Validation, "ringoid product of the wrong length");
            }
          }
        }
      }
      if (_identities[c].size() != hom(c, c).rank()) {
        fail(ErrorKind::Validation, "ringoid identity of the wrong length");
      }
    }
  }

  Vec const& Ringoid::basis_product(Element c, Element a, Element b, std::size_t i, std::size_t j) const {
    return _products.at((c * _k + a) * _k + b).at(i * hom(a, b).rank() + j);
  }

  Vec Ringoid::compose(Element c, Element a, Element b, Vec const& left, Vec const& right) const {
    Vec out(hom(c, b).rank());
    for (std::size_t i = 0; i < left.size(); ++i) {
      if (left[i] == 0) {
        continue;
      }
      for (std::size_t j = 0; j < right.size(); ++j) {
        if (right[j] != 0) {
          out = add_scaled(std::move(out), left[i] * right[j], basis_product(c, a, b, i, j));
        }
      }
    }
    return hom(c, b).reduce(out);
  }

  std::optional<std::string> Ringoid::check_axioms() const {
    std::size_t const k = _k;
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        FGAbGroup const& g = hom(a, b);
        for (std::size_t i = 0; i < g.rank(); ++i) {
          Vec const e = unit(g.rank(), i);
          if (!g.equal(compose(a, b, b, e, identity(b)), e) || !g.equal(compose(a, a, b, identity(a), e), e)) {
            return "identity fails on generator " + std::to_string(i) + " of " + pair_name(a, b);
          }
        }
        // Relations compose to zero on both sides.
        for (auto const& r : g.relation_lattice().basis()) {
          for (Element c = 0; c < k; ++c) {
            FGAbGroup const& gc = hom(c, a);
            for (std::size_t i = 0; i < gc.rank(); ++i) {
              if (!hom(c, b).is_zero(compose(c, a, b, unit(gc.rank(), i), r))) {
                return "composition not well defined on the right at " + pair_name(a, b);
              }
            }
            FGAbGroup const& gb = hom(b, c);
            for (std::size_t i = 0; i < gb.rank(); ++i) {
              if (!hom(a, c).is_zero(compose(a, b, c, r, unit(gb.rank(), i)))) {
                return "composition not well defined on the left at " + pair_name(a, b);
              }
            }
          }
        }
      }
    }
    for (Element d = 0; d < k; ++d) {
      for (Element c = 0; c < k; ++c) {
        for (Element a = 0; a < k; ++a) {
          for (Element b = 0; b < k; ++b) {
            std::size_t const r1 = hom(d, c).rank(), r2 = hom(c, a).rank(), r3 = hom(a, b).rank();
            for (std::size_t i = 0; i < r1; ++i) {
              for (std::size_t j = 0; j < r2; ++j) {
                Vec const ij = basis_product(d, c, a, i, j);
                for (std::size_t l = 0; l < r3; ++l) {
                  Vec const left  = compose(d, a, b, ij, unit(r3, l));
                  Vec const right = compose(d, c, b, unit(r1, i), basis_product(c, a, b, j, l));
                  if (!hom(d, b).equal(left, right)) {
                    return "associativity fails on generators " + std::to_string(i) + "," + std::to_string(j) +
                           "," + std::to_string(l) + " over objects " + std::to_string(d) + "," +
                           std::to_string(c) + "," + std::to_string(a) + "," + std::to_string(b);
                  }
                }
              }
            }
          }
        }
      }
    }
    return std::nullopt;
  }

  std::optional<std::string> check_ringoid_hom(Ringoid const& X, Ringoid const& Y, RingoidHom const& f) {
    std::size_t const k = X.objects();
    if (Y.objects() != k || f.maps.size() != k * k) {
      return "object sets or map count differ";
    }
    auto map_of = [&](Element a, Element b) -> Matrix const& { return f.maps[a * k + b]; };
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        Matrix const& m = map_of(a, b);
        if (m.cols() != X.hom(a, b).rank() || m.rows() != Y.hom(a, b).rank()) {
          return "map of the wrong shape at " + pair_name(a, b);
        }
        if (!well_defined(X.hom(a, b), Y.hom(a, b), m)) {
          return "map not well defined at " + pair_name(a, b);
        }
      }
    }
    for (Element b = 0; b < k; ++b) {
      if (!Y.hom(b, b).equal(map_of(b, b).apply(X.identity(b)), Y.identity(b))) {
        return "identity of " + std::to_string(b) + " not preserved";
      }
    }
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          std::size_t const r1 = X.hom(c, a).rank(), r2 = X.hom(a, b).rank();
          for (std::size_t i = 0; i < r1; ++i) {
            for (std::size_t j = 0; j < r2; ++j) {
              Vec const lhs = map_of(c, b).apply(X.basis_product(c, a, b, i, j));
              Vec const rhs = Y.compose(c, a, b, map_of(c, a).column(i), map_of(a, b).column(j));
              if (!Y.hom(c, b).equal(lhs, rhs)) {
                return "composition not preserved at " + std::to_string(c) + "," + std::to_string(a) + "," +
                       std::to_string(b);
              }
            }
          }
        }
      }
    }
    return std::nullopt;
  }

  ////////////////////////////////////////////////////////////////////////
  // Modules and quotients
  ////////////////////////////////////////////////////////////////////////

  Matrix RingoidModule::action(Ringoid const& X, Element a, Element b, Vec const& z) const {
    std::size_t const k = X.objects();
    auto const&       acts = actions.at(a * k + b);
    Matrix            out(fibers.at(a).rank(), fibers.at(b).rank());
    for (std::size_t i = 0; i < z.size(); ++i) {
      if (z[i] == 0) {
        continue;
      }
      Matrix scaled = acts.at(i);
      for (std::size_t r = 0; r < scaled.rows(); ++r) {
        for (std::size_t c = 0; c < scaled.cols(); ++c) {
          scaled(r, c) *= z[i];
        }
      }
      out = out + scaled;
    }
    return out;
  }

  std::optional<std::string> check_ringoid_module(Ringoid const& X, RingoidModule const& N) {
    std::size_t const k = X.objects();
    if (N.fibers.size() != k || N.actions.size() != k * k) {
      return "module data has the wrong shape";
    }
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        auto const& acts = N.actions[a * k + b];
        if (acts.size() != X.hom(a, b).rank()) {
          return "wrong number of actions at " + pair_name(a, b);
        }
        for (std::size_t i = 0; i < acts.size(); ++i) {
          if (acts[i].rows() != N.fibers[a].rank() || acts[i].cols() != N.fibers[b].rank() ||
              !well_defined(N.fibers[b], N.fibers[a], acts[i])) {
            return "action of generator " + std::to_string(i) + " of " + pair_name(a, b) + " is not a map";
          }
        }
        for (auto const& r : X.hom(a, b).relation_lattice().basis()) {
          Matrix const m = N.action(X, a, b, r);
          if (!maps_equal(N.fibers[a], m, Matrix(m.rows(), m.cols()))) {
            return "a relation of " + pair_name(a, b) + " acts nontrivially";
          }
        }
      }
      Matrix const one = N.action(X, a, a, X.identity(a));
      if (!maps_equal(N.fibers[a], one, Matrix::identity(N.fibers[a].rank()))) {
        return "identity of " + std::to_string(a) + " does not act as the identity";
      }
    }
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          std::size_t const r1 = X.hom(c, a).rank(), r2 = X.hom(a, b).rank();
          for (std::size_t i = 0; i < r1; ++i) {
            for (std::size_t j = 0; j < r2; ++j) {
              Matrix const lhs = N.action(X, c, b, X.basis_product(c, a, b, i, j));
              Matrix const rhs = N.actions[c * k + a][i] * N.actions[a * k + b][j];
              if (!maps_equal(N.fibers[c], lhs, rhs)) {
                return "action does not respect composition at " + std::to_string(c) + "," + std::to_string(a) +
                       "," + std::to_string(b);
              }
            }
          }
        }
      }
    }
    return std::nullopt;
  }

  RingoidQuotient ringoid_quotient(Ringoid const& X, std::vector<std::vector<Vec>> const& ideal) {
    std::size_t const k = X.objects();
    if (ideal.size() != k * k) {
      fail(ErrorKind::Validation, "ideal needs one generator list per hom-group");
    }
    std::vector<Lattice> J;
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        Lattice l = X.hom(a, b).relation_lattice();
        for (auto const& v : ideal[a * k + b]) {
          if (v.size() != X.hom(a, b).rank()) {
            fail(ErrorKind::Validation, "ideal generator of the wrong length at " + pair_name(a, b));
          }
          l.insert(v);
        }
        l.canonicalize();
        J.push_back(std::move(l));
      }
    }
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        for (auto const& v : ideal[a * k + b]) {
          for (Element c = 0; c < k; ++c) {
            std::size_t const rl = X.hom(c, a).rank();
            for (std::size_t i = 0; i < rl; ++i) {
              if (!J[c * k + b].contains(X.compose(c, a, b, unit(rl, i), v))) {
                fail(ErrorKind::NotIdeal, "left multiple of a generator of " + pair_name(a, b) + " escapes the ideal");
              }
            }
            std::size_t const rr = X.hom(b, c).rank();
            for (std::size_t i = 0; i < rr; ++i) {
              if (!J[a * k + c].contains(X.compose(a, b, c, v, unit(rr, i)))) {
                fail(ErrorKind::NotIdeal,
                     "right multiple of a generator of " + pair_name(a, b) + " escapes the ideal");
              }
            }
          }
        }
      }
    }
    std::vector<FGAbGroup>                homs;
    std::vector<std::vector<std::string>> labels;
    std::vector<std::vector<Vec>>         products;
    std::vector<Vec>                      identities;
    RingoidHom                            nat;
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        homs.emplace_back(J[a * k + b]);
        labels.push_back(X.labels(a, b));
        nat.maps.push_back(Matrix::identity(X.hom(a, b).rank()));
      }
    }
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          std::vector<Vec> p;
          for (std::size_t i = 0; i < X.hom(c, a).rank(); ++i) {
            for (std::size_t j = 0; j < X.hom(a, b).rank(); ++j) {
              p.push_back(homs[c * k + b].reduce(X.basis_product(c, a, b, i, j)));
            }
          }
          products.push_back(std::move(p));
        }
      }
    }
    for (Element b = 0; b < k; ++b) {
      identities.push_back(homs[b * k + b].reduce(X.identity(b)));
    }
    return RingoidQuotient{
        Ringoid(k, std::move(homs), std::move(labels), std::move(products), std::move(identities)), std::move(nat)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Z_M
  ////////////////////////////////////////////////////////////////////////

  std::optional<Vec> ZofModule::coordinates(Element a, Element b, Matrix const& m) const {
    std::size_t const k = ring.objects();
    return span.at(a * k + b).coordinates(to_sparse(flatten(m)));
  }

  ZofModule z_of_module(AModule const& M) {
    AlgebraPtr const& A = M.base();
    std::size_t const k = A->size();
    for (Element a = 0; a < k; ++a) {
      if (!M.fiber(a).is_finite()) {
        fail(ErrorKind::InfiniteFiber, "fiber over " + A->element_name(a) + " has positive free rank");
      }
    }
    auto rank = [&](Element a) { return M.fiber(a).rank(); };

    // Generators: every unary part, with its source and target.
    struct Gen {
      Element from, to;
      Matrix  m;
    };
    std::vector<Gen> gens;
    for (std::size_t s = 0; s < A->signature().size(); ++s) {
      unsigned const n = A->signature()[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        Element const target = A->apply(s, a);
        for (std::size_t i = 0; i < n; ++i) {
          gens.push_back(Gen{a[i], target, M.part(s, a, i)});
        }
      }
    }

    // Monomials keyed by their reduced columns, closed under left
    // multiplication by generators.
    std::vector<std::set<std::vector<Int>>> seen(k * k);
    std::vector<std::vector<Matrix>>        monomials(k * k);
    std::deque<std::tuple<Element, Element, Matrix>> queue;
    auto add = [&](Element a, Element b, Matrix m) {
      m = reduce_columns(M.fiber(a), m);
      if (seen[a * k + b].insert(flatten(m)).second) {
        monomials[a * k + b].push_back(m);
        queue.emplace_back(a, b, std::move(m));
      }
    };
    for (Element b = 0; b < k; ++b) {
      add(b, b, Matrix::identity(rank(b)));
    }
    while (!queue.empty()) {
      auto [a, b, m] = std::move(queue.front());
      queue.pop_front();
      for (auto const& g : gens) {
        if (g.from == a) {
          add(g.to, b, g.m * m);
        }
      }
    }

    std::vector<FGAbGroup>                homs;
    std::vector<std::vector<std::string>> labels;
    std::vector<Lattice>                  spans;
    std::vector<std::vector<Matrix>>      embedding;
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        std::size_t const ra = rank(a), rb = rank(b);
        std::vector<Vec>  zero_gens;
        for (std::size_t j = 0; j < rb; ++j) {
          for (auto const& r : M.fiber(a).relation_lattice().basis()) {
            Vec v(ra * rb);
            std::copy(r.begin(), r.end(), v.begin() + static_cast<std::ptrdiff_t>(j * ra));
            zero_gens.push_back(std::move(v));
          }
        }
        Lattice S(ra * rb);
        for (auto const& z : zero_gens) {
          S.insert(z);
        }
        for (auto const& m : monomials[a * k + b]) {
          S.insert(flatten(m));
        }
        S.canonicalize();
        std::vector<Vec> rels;
        for (auto const& z : zero_gens) {
          rels.push_back(*S.coordinates(to_sparse(z)));
        }
        homs.emplace_back(S.rank(), rels);
        std::vector<std::string> names;
        std::vector<Matrix>      mats;
        for (auto const& v : S.basis()) {
          names.push_back("m" + std::to_string(names.size() + 1));
          mats.push_back(unflatten(v, ra, rb));
        }
        labels.push_back(std::move(names));
        embedding.push_back(std::move(mats));
        spans.push_back(std::move(S));
      }
    }

    auto coords = [&](Element a, Element b, Matrix const& m) {
      auto c = spans[a * k + b].coordinates(to_sparse(flatten(m)));
      if (!c) {
        fail(ErrorKind::NotWellDefined, "composite escapes the closure at " + pair_name(a, b));
      }
      return homs[a * k + b].reduce(*c);
    };
    std::vector<std::vector<Vec>> products;
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          std::vector<Vec> p;
          for (auto const& x : embedding[c * k + a]) {
            for (auto const& y : embedding[a * k + b]) {
              p.push_back(coords(c, b, x * y));
            }
          }
          products.push_back(std::move(p));
        }
      }
    }
    std::vector<Vec> identities;
    for (Element b = 0; b < k; ++b) {
      identities.push_back(coords(b, b, Matrix::identity(rank(b))));
    }
    return ZofModule{Ringoid(k, std::move(homs), std::move(labels), std::move(products), std::move(identities)),
                     std::move(embedding), std::move(spans)};
  }

  ////////////////////////////////////////////////////////////////////////
  // Relation vectors
  ////////////////////////////////////////////////////////////////////////

  namespace {

    Element source_of(FinAlgebra const& A, Term const& u, Element b) {
      Element const args[1] = {b};
      return eval_with_constants(A, u, args, [](Element c) { return c; });
    }

    std::vector<RelationVector> relations_with(Canonicalizer const& C, Element b, std::size_t depth) {
      FinAlgebra const&           A = *C.algebra();
      std::vector<RelationVector> out;
      std::set<std::pair<Element, std::vector<std::pair<Int, Term>>>> seen;
      Term const x  = Term::var(1);
      Term const cb = Term::constant(b);
      for (unsigned n = 0; n <= depth; ++n) {
        if (n == 1) {
          continue;
        }
        for (auto const& pi : C.enumerate(n, depth, true)) {
          std::vector<std::pair<Int, Term>> terms;
          std::vector<Term>                 args(n, x);
          terms.emplace_back(1, C.canon(compose_terms(pi, args)));
          for (unsigned j = 0; j < n; ++j) {
            std::vector<Term> sub(n, cb);
            sub[j] = x;
            terms.emplace_back(-1, C.canon(compose_terms(pi, sub)));
          }
          merge_terms(terms);
          if (terms.empty()) {
            continue;
          }
          Element const a = source_of(A, terms.front().second, b);
          if (seen.emplace(a, terms).second) {
            out.push_back(RelationVector{pi, n, a, std::move(terms)});
          }
        }
      }
      return out;
    }

  }  // namespace

  std::vector<RelationVector> relation_vectors(Variety const& V, AlgebraPtr const& A, Element b, std::size_t depth) {
    auto C = make_canonicalizer(V, A);
    if (b >= A->size()) {
      fail(ErrorKind::Validation, "object outside the algebra");
    }
    return relations_with(*C, b, depth);
  }

  ////////////////////////////////////////////////////////////////////////
  // Enveloping ringoid
  ////////////////////////////////////////////////////////////////////////

  EnvelopingRingoid::EnvelopingRingoid(Variety V, AlgebraPtr A, std::size_t depth)
      : _V(std::move(V)), _A(std::move(A)), _depth(depth) {
    if (depth == 0) {
      fail(ErrorKind::Validation, "depth must be at least 1");
    }
    _canon              = make_canonicalizer(_V, _A);
    std::size_t const k = _A->size();
    _homs.resize(k * k);
    _index.resize(k * k);
    _memo.resize(k);
    _relations.resize(k);

    std::vector<Term> unary = _canon->enumerate(1, depth, false);
    std::vector<std::pair<std::size_t, Term>> keyed;
    for (auto& u : unary) {
      keyed.emplace_back(_canon->weight(u), std::move(u));
    }
    std::sort(keyed.begin(), keyed.end(), [](auto const& x, auto const& y) {
      return x.first != y.first ? x.first > y.first : x.second > y.second;
    });

    for (Element b = 0; b < k; ++b) {
      for (Element a = 0; a < k; ++a) {
        _homs[a * k + b].a = a;
        _homs[a * k + b].b = b;
      }
      for (auto const& [w, u] : keyed) {
        HomPresentation& h = _homs[source_of(*_A, u, b) * k + b];
        _index[h.a * k + b].emplace(u, h.gens.size());
        h.gens.push_back(u);
      }
      _relations[b] = relations_with(*_canon, b, depth);
      for (Element a = 0; a < k; ++a) {
        _homs[a * k + b].relations = Lattice(_homs[a * k + b].gens.size());
      }
      for (std::size_t r = 0; r < _relations[b].size(); ++r) {
        RelationVector const& rel = _relations[b][r];
        HomPresentation&      h   = _homs[rel.a * k + b];
        auto const&           idx = _index[rel.a * k + b];
        SparseVec             v;
        for (auto const& [c, t] : rel.terms) {
          v.emplace_back(static_cast<std::uint32_t>(idx.at(t)), c);
        }
        std::sort(v.begin(), v.end(), [](auto const& x, auto const& y) { return x.first < y.first; });
        h.relations.insert(std::move(v));
        h.raw_relations.push_back(r);
      }
    }

    for (auto& h : _homs) {
      h.relations.canonicalize();
      std::vector<bool> dropped(h.gens.size(), false);
      std::vector<Vec>  kept_rows;
      for (auto const& [p, row] : h.relations.rows()) {
        if (row.front().second == 1) {
          dropped[p] = true;
        }
      }
      std::vector<std::size_t> position(h.gens.size(), 0);
      for (std::size_t g = 0; g < h.gens.size(); ++g) {
        if (!dropped[g]) {
          position[g] = h.survivors.size();
          h.survivors.push_back(g);
        }
      }
      auto restrict = [&](SparseVec const& v) {
        Vec out(h.survivors.size());
        for (auto const& [i, c] : v) {
          if (!dropped[i]) {
            out[position[i]] = c;
          }
        }
        return out;
      };
      for (auto const& [p, row] : h.relations.rows()) {
        if (!dropped[p]) {
          kept_rows.push_back(restrict(row));
        }
      }
      h.group = FGAbGroup(h.survivors.size(), kept_rows);
      for (std::size_t g = 0; g < h.gens.size(); ++g) {
        SparseVec e{{static_cast<std::uint32_t>(g), Int(1)}};
        h.images.push_back(h.group.reduce(restrict(h.relations.reduce(e))));
      }
    }

    std::vector<FGAbGroup>                homs;
    std::vector<std::vector<std::string>> labels;
    for (auto const& h : _homs) {
      homs.push_back(h.group);
      std::vector<std::string> names;
      for (auto g : h.survivors) {
        names.push_back(print_term(h.gens[g], _A->signature(), _A->carrier()));
      }
      labels.push_back(std::move(names));
    }
    std::vector<std::vector<Vec>> products;
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          HomPresentation const& left  = presentation(c, a);
          HomPresentation const& right = presentation(a, b);
          std::vector<Vec>       p;
          for (auto i : left.survivors) {
            for (auto j : right.survivors) {
              Term const vu = compose_terms(left.gens[i], {right.gens[j]});
              p.push_back(element(vu, b));
            }
          }
          products.push_back(std::move(p));
        }
      }
    }
    std::vector<Vec> identities;
    for (Element b = 0; b < k; ++b) {
      identities.push_back(element(Term::var(1), b));
    }
    _ring = Ringoid(k, std::move(homs), std::move(labels), std::move(products), std::move(identities));
  }

  Element EnvelopingRingoid::source(Term const& u, Element b) const {
    return source_of(*_A, u, b);
  }

  Vec EnvelopingRingoid::element(Term const& raw, Element b) const {
    Term const u = _canon->canon(raw);
    if (u.max_var() > 1) {
      fail(ErrorKind::ArityMismatch, "element of a polynomial that is not unary");
    }
    {
      std::lock_guard<std::mutex> guard(_lock);
      auto                        it = _memo.at(b).find(u);
      if (it != _memo[b].end()) {
        return it->second;
      }
    }
    std::size_t const      k = _A->size();
    Element const          a = source(u, b);
    HomPresentation const& h = presentation(a, b);
    Vec                    out;
    auto const&            idx = _index[a * k + b];
    if (auto it = idx.find(u); it != idx.end()) {
      out = h.images[it->second];
    } else if (u.count_var(1) == 0) {
      out = Vec(h.survivors.size());
    } else if (u.count_var(1) == 1) {
      fail(ErrorKind::MissingGenerator,
           "(" + print_term(u, _A->signature(), _A->carrier()) + ")_" + _A->element_name(b) +
               " lies above depth " + std::to_string(_depth));
    } else {
      // Pi(x1, x2) = u with the first occurrence as x1: R_{Pi,b} gives
      // (u)_b = (Pi(x, b))_b + (Pi(b, x))_b.
      Vec const one = element(substitute_leaves(u, b, true), b);
      Vec const two = element(substitute_leaves(u, b, false), b);
      out           = h.group.reduce(add_scaled(one, Int(1), two));
    }
    std::lock_guard<std::mutex> guard(_lock);
    _memo[b].emplace(u, out);
    return out;
  }

  Vec EnvelopingRingoid::combination(Element a, Element b, std::vector<std::pair<Int, Term>> const& terms) const {
    HomPresentation const& h = presentation(a, b);
    Vec                    out(h.survivors.size());
    for (auto const& [c, t] : terms) {
      if (source(t, b) != a) {
        fail(ErrorKind::Validation, "polynomial does not lie over " + _A->element_name(a));
      }
      out = add_scaled(std::move(out), c, element(t, b));
    }
    return h.group.reduce(out);
  }

  ////////////////////////////////////////////////////////////////////////
  // Stabilization
  ////////////////////////////////////////////////////////////////////////

  std::optional<std::string> compare_depths(EnvelopingRingoid const& lo, EnvelopingRingoid const& hi) {
    std::size_t const k = lo.algebra()->size();
    Ringoid const&    X = lo.ringoid();
    Ringoid const&    Y = hi.ringoid();
    RingoidHom        f;
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        HomPresentation const& h = lo.presentation(a, b);
        std::vector<Vec>       cols;
        for (auto g : h.survivors) {
          cols.push_back(hi.element(h.gens[g], b));
        }
        Matrix const m = Matrix::from_columns(cols, Y.hom(a, b).rank());
        if (!well_defined(X.hom(a, b), Y.hom(a, b), m)) {
          return "inclusion not well defined at " + pair_name(a, b);
        }
        ZHom const z(X.hom(a, b), Y.hom(a, b), m);
        if (!cokernel(z).group.is_trivial()) {
          return "inclusion not onto at " + pair_name(a, b);
        }
        if (!(X.hom(a, b).iso_type() == Y.hom(a, b).iso_type())) {
          return "hom-group " + pair_name(a, b) + " changes from " + to_string(X.hom(a, b).iso_type()) + " to " +
                 to_string(Y.hom(a, b).iso_type());
        }
        f.maps.push_back(m);
      }
    }
    if (auto bad = check_ringoid_hom(X, Y, f)) {
      return *bad;
    }
    return std::nullopt;
  }

  EnvelopeReport compute_envelope(Variety const& V, AlgebraPtr const& A, std::size_t depth, std::size_t max_depth) {
    if (depth > max_depth) {
      fail(ErrorKind::Validation, "depth exceeds the maximum depth");
    }
    EnvelopeReport report;
    auto           lo = std::make_shared<EnvelopingRingoid const>(V, A, depth);
    for (std::size_t d = depth; d <= max_depth; ++d) {
      auto hi     = std::make_shared<EnvelopingRingoid const>(V, A, d + 1);
      std::optional<std::string> why;
      try {
        why = compare_depths(*lo, *hi);
      } catch (Error const& e) {
        if (e.kind() != ErrorKind::MissingGenerator) {
          throw;
        }
        why = e.what();
      }
      report.steps.push_back(StabilizationStep{d, !why, why.value_or("stable")});
      if (!why) {
        report.ringoid    = lo;
        report.depth      = d;
        report.stabilized = true;
        return report;
      }
      lo = std::move(hi);
    }
    report.ringoid = lo;
    report.depth   = lo->depth();
    return report;
  }

  std::shared_ptr<EnvelopingRingoid const> enveloping_ringoid(Variety const&    V,
                                                              AlgebraPtr const& A,
                                                              std::size_t       depth,
                                                              std::size_t       max_depth) {
    EnvelopeReport report = compute_envelope(V, A, depth, max_depth);
    if (!report.stabilized) {
      fail(ErrorKind::NotStabilized, "no stable depth up to " + std::to_string(max_depth) + ": " +
                                         report.steps.back().detail);
    }
    return report.ringoid;
  }

  ////////////////////////////////////////////////////////////////////////
  // J through the truncated modulization of U_b
  ////////////////////////////////////////////////////////////////////////

  Term translation(Canonicalizer const& C, std::size_t symbol, std::span<Element const> a, std::size_t i) {
    std::vector<Term> ch;
    for (std::size_t j = 0; j < a.size(); ++j) {
      ch.push_back(j == i ? Term::var(1) : Term::constant(a[j]));
    }
    return C.canon(Term::app(static_cast<std::uint32_t>(symbol), ch));
  }

  std::vector<Lattice> j_lattices(EnvelopingRingoid const& Z, Element b) {
    Canonicalizer const& C     = Z.canonicalizer();
    FinAlgebra const&    A     = *Z.algebra();
    std::size_t const    k     = A.size();
    std::size_t const    depth = Z.depth();
    Signature const&     sig   = A.signature();

    // Generators of U_b in the window: object and position in its fiber.
    std::vector<Term>                                                      all;
    std::unordered_map<Term, std::pair<Element, std::uint32_t>, TermHash> where;
    for (Element a = 0; a < k; ++a) {
      auto const& gens = Z.presentation(a, b).gens;
      for (std::size_t g = 0; g < gens.size(); ++g) {
        where.emplace(gens[g], std::make_pair(a, static_cast<std::uint32_t>(g)));
        all.push_back(gens[g]);
      }
    }

    // Each vector carries the polynomial in distinct variables whose
    // linearization it is; the window keeps those of weight <= depth.
    using Formal = std::map<Term, Int>;
    struct Item {
      Term   pi;
      Formal v;
    };
    std::set<Term>   seen;
    std::deque<Item> queue;
    auto push = [&](Term const& pi, Formal v) {
      Term c = C.canon(pi);
      if (C.weight(c) > depth || !seen.insert(c).second) {
        return;
      }
      std::erase_if(v, [](auto const& e) { return e.second == 0; });
      queue.push_back(Item{std::move(c), std::move(v)});
    };
    auto over = [&](Term const& t) { return where.at(t).first; };

    for (Element a = 0; a < k; ++a) {
      Term const c = C.canon(Term::constant(a));
      push(c, Formal{{c, Int(1)}});
    }
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n = sig[s].arity;
      if (n == 0) {
        continue;
      }
      std::vector<std::size_t> pick(n, 0);
      while (true) {
        std::vector<Term> args, spread;
        for (std::size_t i = 0; i < n; ++i) {
          args.push_back(all[pick[i]]);
          spread.push_back(compose_terms(all[pick[i]], {Term::var(static_cast<std::uint32_t>(i + 1))}));
        }
        Term const pi = Term::app(static_cast<std::uint32_t>(s), spread);
        if (C.weight(C.canon(pi)) <= depth) {
          Formal v;
          v[C.canon(Term::app(static_cast<std::uint32_t>(s), args))] += 1;
          for (std::size_t i = 0; i < n; ++i) {
            std::vector<Term> ch;
            for (std::size_t j = 0; j < n; ++j) {
              ch.push_back(j == i ? args[i] : Term::constant(over(args[j])));
            }
            v[C.canon(Term::app(static_cast<std::uint32_t>(s), ch))] -= 1;
          }
          push(pi, std::move(v));
        }
        std::size_t p = 0;
        while (p < n && ++pick[p] == all.size()) {
          pick[p++] = 0;
        }
        if (p == n) {
          break;
        }
      }
    }

    std::vector<Lattice> out;
    for (Element a = 0; a < k; ++a) {
      out.emplace_back(Z.presentation(a, b).gens.size());
    }
    while (!queue.empty()) {
      Item item = std::move(queue.front());
      queue.pop_front();
      if (item.v.empty()) {
        continue;
      }
      Element const a = over(item.v.begin()->first);
      SparseVec     sv;
      for (auto const& [t, c] : item.v) {
        if (over(t) != a) {
          fail(ErrorKind::Validation, "generating vector spans two fibers");
        }
        sv.emplace_back(where.at(t).second, c);
      }
      std::sort(sv.begin(), sv.end(), [](auto const& x, auto const& y) { return x.first < y.first; });
      out[a].insert(std::move(sv));
      // Translations u -> omega(c_1, ..., u, ..., c_n) with c_i = a.
      for (std::size_t s = 0; s < sig.size(); ++s) {
        unsigned const n = sig[s].arity;
        for (auto const& c : all_tuples(k, n)) {
          for (std::size_t i = 0; i < n; ++i) {
            if (c[i] != a) {
              continue;
            }
            auto wrap = [&](Term const& t) {
              std::vector<Term> ch;
              for (std::size_t j = 0; j < n; ++j) {
                ch.push_back(j == i ? t : Term::constant(c[j]));
              }
              return Term::app(static_cast<std::uint32_t>(s), ch);
            };
            Term const pi = wrap(item.pi);
            if (C.weight(C.canon(pi)) > depth) {
              continue;
            }
            Formal image;
            for (auto const& [t, coef] : item.v) {
              image[C.canon(wrap(t))] += coef;
            }
            push(pi, std::move(image));
          }
        }
      }
    }
    for (auto& l : out) {
      l.canonicalize();
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // f_M, G and H
  ////////////////////////////////////////////////////////////////////////

  namespace {

    Matrix unary_matrix(ModuleAction const& M, Term const& u, Element b) {
      return M.unary(Polynomial{1, u}, b);
    }

    // Every relation vector of Z acts as zero on M.
    void check_relations(EnvelopingRingoid const& Z, ModuleAction const& M) {
      FinAlgebra const& A = *Z.algebra();
      for (Element b = 0; b < A.size(); ++b) {
        for (auto const& rel : Z.relations(b)) {
          FGAbGroup const& target = M.module().fiber(rel.a);
          Matrix           sum(target.rank(), M.module().fiber(b).rank());
          for (auto const& [c, t] : rel.terms) {
            Matrix m = unary_matrix(M, t, b);
            for (std::size_t i = 0; i < m.rows(); ++i) {
              for (std::size_t j = 0; j < m.cols(); ++j) {
                m(i, j) *= c;
              }
            }
            sum = sum + m;
          }
          if (!maps_equal(target, sum, Matrix(sum.rows(), sum.cols()))) {
            fail(ErrorKind::NotWellDefined, "relation of " + print_term(rel.pi, A.signature(), A.carrier()) +
                                                " at " + A.element_name(b) + " acts nontrivially");
          }
        }
      }
    }

  }  // namespace

  CanonicalMap canonical_map(EnvelopingRingoid const& Z, ModuleAction const& M) {
    check_relations(Z, M);
    FinAlgebra const& A = *Z.algebra();
    std::size_t const k = A.size();
    CanonicalMap      out{z_of_module(M.module()), {}};
    Ringoid const&    X = Z.ringoid();
    Ringoid const&    Y = out.target.ring;
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        HomPresentation const& h = Z.presentation(a, b);
        std::vector<Vec>       cols;
        for (auto g : h.survivors) {
          auto c = out.target.coordinates(a, b, unary_matrix(M, h.gens[g], b));
          if (!c) {
            fail(ErrorKind::NotWellDefined, "image of (" + print_term(h.gens[g], A.signature(), A.carrier()) +
                                                ")_" + A.element_name(b) + " lies outside Z_M");
          }
          cols.push_back(Y.hom(a, b).reduce(*c));
        }
        Matrix const m = Matrix::from_columns(cols, Y.hom(a, b).rank());
        if (!well_defined(X.hom(a, b), Y.hom(a, b), m)) {
          fail(ErrorKind::NotWellDefined, "f_M not well defined at " + pair_name(a, b));
        }
        if (!cokernel(ZHom(X.hom(a, b), Y.hom(a, b), m)).group.is_trivial()) {
          fail(ErrorKind::NotWellDefined, "f_M not onto at " + pair_name(a, b));
        }
        out.map.maps.push_back(m);
      }
    }
    // Each unary part is the image of its translation.
    AModule const& mod = M.module();
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      unsigned const n = A.signature()[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        for (std::size_t i = 0; i < n; ++i) {
          Term const   u      = translation(Z.canonicalizer(), s, a, i);
          Element const target = A.apply(s, a);
          if (!maps_equal(mod.fiber(target), unary_matrix(M, u, a[i]), mod.part(s, a, i))) {
            fail(ErrorKind::NotWellDefined, "unary part of " + A.signature()[s].name + " is not the image of " +
                                                print_term(u, A.signature(), A.carrier()));
          }
        }
      }
    }
    return out;
  }

  RingoidModule functor_G(EnvelopingRingoid const& Z, ModuleAction const& M) {
    check_relations(Z, M);
    std::size_t const k = Z.algebra()->size();
    RingoidModule     N{M.module().fibers(), {}};
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        HomPresentation const& h = Z.presentation(a, b);
        std::vector<Matrix>    acts;
        for (auto g : h.survivors) {
          acts.push_back(unary_matrix(M, h.gens[g], b));
        }
        N.actions.push_back(std::move(acts));
      }
    }
    return N;
  }

  AModule functor_H(EnvelopingRingoid const& Z, RingoidModule const& N) {
    AlgebraPtr const& A = Z.algebra();
    std::size_t const k = A->size();
    if (N.fibers.size() != k || N.actions.size() != k * k) {
      fail(ErrorKind::Validation, "module data has the wrong shape");
    }
    AModule::Parts parts(A->signature().size());
    for (std::size_t s = 0; s < A->signature().size(); ++s) {
      unsigned const n = A->signature()[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        std::vector<Matrix> ps;
        Element const       target = A->apply(s, a);
        for (std::size_t i = 0; i < n; ++i) {
          Term const u = translation(Z.canonicalizer(), s, a, i);
          if (Z.canonicalizer().weight(u) > Z.depth()) {
            fail(ErrorKind::MissingGenerator, "translation " + print_term(u, A->signature(), A->carrier()) +
                                                  " lies above depth " + std::to_string(Z.depth()));
          }
          ps.push_back(reduce_columns(N.fibers[target],
                                      N.action(Z.ringoid(), target, a[i], Z.element(u, a[i]))));
        }
        parts[s].push_back(std::move(ps));
      }
    }
    AModule M(A, N.fibers, std::move(parts));
    return TotallyIn<AModule>::check(Z.variety(), std::move(M)).get();
  }

}  // namespace envring
