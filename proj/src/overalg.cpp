// SPDX-License-Identifier: Apache-2.0

#include "envring/overalg.hpp"

#include <algorithm>
#include <sstream>

namespace envring {

  std::size_t tuple_index(std::size_t k, std::span<Element const> a) {
    std::size_t idx = 0;
    for (Element x : a) {
      idx = idx * k + x;
    }
    return idx;
  }

  Tuple tuple_at(std::size_t k, unsigned n, std::size_t index) {
    Tuple a(n);
    for (std::size_t j = n; j-- > 0;) {
      a[j] = static_cast<Element>(index % k);
      index /= k;
    }
    return a;
  }

  std::vector<Tuple> all_tuples(std::size_t k, unsigned n) {
    std::size_t const  count = int_pow(k, n);
    std::vector<Tuple> out;
    out.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
      out.push_back(tuple_at(k, n, r));
    }
    return out;
  }

  namespace {
    using Point = PointedOveralg::Point;

    // Mixed-radix index of p over the given radices, first most significant.
    std::size_t mixed_index(std::span<std::size_t const> radix, std::span<Point const> p) {
      std::size_t idx = 0;
      for (std::size_t j = 0; j < p.size(); ++j) {
        idx = idx * radix[j] + p[j];
      }
      return idx;
    }

    std::vector<Point> mixed_at(std::span<std::size_t const> radix, std::size_t index) {
      std::vector<Point> p(radix.size());
      for (std::size_t j = radix.size(); j-- > 0;) {
        p[j] = static_cast<Point>(index % radix[j]);
        index /= radix[j];
      }
      return p;
    }

    std::size_t product(std::span<std::size_t const> radix) {
      std::size_t n = 1;
      for (auto r : radix) {
        n *= r;
      }
      return n;
    }

    bool is_hom(FinAlgebra const& X, FinAlgebra const& Y, std::vector<Element> const& f) {
      if (!(X.signature() == Y.signature()) || f.size() != X.size()) {
        return false;
      }
      for (Element v : f) {
        if (v >= Y.size()) {
          return false;
        }
      }
      for (std::size_t s = 0; s < X.signature().size(); ++s) {
        unsigned const n = X.signature()[s].arity;
        for (auto const& a : all_tuples(X.size(), n)) {
          Tuple img(n);
          for (unsigned j = 0; j < n; ++j) {
            img[j] = f[a[j]];
          }
          if (f[X.apply(s, a)] != Y.apply(s, img)) {
            return false;
          }
        }
      }
      return true;
    }

    std::string vec_name(Vec const& v) {
      std::ostringstream os;
      os << '(';
      for (std::size_t i = 0; i < v.size(); ++i) {
        os << (i ? "," : "") << v[i];
      }
      os << ')';
      return os.str();
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // PointedOveralg
  ////////////////////////////////////////////////////////////////////////

  PointedOveralg::PointedOveralg(AlgebraPtr                            A,
                                 std::vector<std::vector<std::string>> fibers,
                                 std::vector<Point>                    basepoints,
                                 OpTables                              ops)
      : _A(std::move(A)), _fibers(std::move(fibers)), _basepoints(std::move(basepoints)), _ops(std::move(ops)) {
    std::size_t const k = _A->size();
    if (_fibers.size() != k || _basepoints.size() != k) {
      fail(ErrorKind::Validation, "overalgebra needs one pointed fiber per element of the base");
    }
    for (std::size_t a = 0; a < k; ++a) {
      if (_basepoints[a] >= _fibers[a].size()) {
        fail(ErrorKind::Validation, "basepoint outside its fiber");
      }
    }
    auto const& sig = _A->signature();
    if (_ops.size() != sig.size()) {
      fail(ErrorKind::Validation, "overalgebra operation count does not match the signature");
    }
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n = sig[s].arity;
      if (_ops[s].size() != int_pow(k, n)) {
        fail(ErrorKind::Validation, "operation '" + sig[s].name + "' needs one table per tuple");
      }
      for (std::size_t r = 0; r < _ops[s].size(); ++r) {
        Tuple const              a = tuple_at(k, n, r);
        std::vector<std::size_t> radix;
        std::vector<Point>       stars;
        for (Element ai : a) {
          radix.push_back(_fibers[ai].size());
          stars.push_back(_basepoints[ai]);
        }
        Element const target = _A->apply(s, a);
        auto const&   tab    = _ops[s][r];
        if (tab.size() != product(radix)) {
          fail(ErrorKind::Validation, "table of '" + sig[s].name + "' has the wrong size");
        }
        for (Point v : tab) {
          if (v >= _fibers[target].size()) {
            fail(ErrorKind::Validation, "table of '" + sig[s].name + "' leaves its target fiber");
          }
        }
        if (tab[mixed_index(radix, stars)] != _basepoints[target]) {
          fail(ErrorKind::Validation, "operation '" + sig[s].name + "' does not preserve basepoints");
        }
      }
    }
  }

  Point PointedOveralg::apply(std::size_t symbol, std::span<Element const> a, std::span<Point const> p) const {
    std::vector<std::size_t> radix;
    radix.reserve(a.size());
    for (Element ai : a) {
      radix.push_back(_fibers[ai].size());
    }
    return _ops.at(symbol).at(tuple_index(_A->size(), a)).at(mixed_index(radix, p));
  }

  Point PointedOveralg::apply_at(std::size_t symbol, std::span<Element const> a, std::size_t i, Point p) const {
    std::vector<Point> pts;
    for (Element ai : a) {
      pts.push_back(_basepoints[ai]);
    }
    pts.at(i) = p;
    return apply(symbol, a, pts);
  }

  PointedOveralg trivial_overalg(AlgebraPtr A) {
    std::size_t const                     k = A->size();
    std::vector<std::vector<std::string>> fibers(k, std::vector<std::string>{"*"});
    PointedOveralg::OpTables              ops;
    for (auto const& sym : A->signature().symbols()) {
      ops.emplace_back(int_pow(k, sym.arity), std::vector<Point>{0});
    }
    return PointedOveralg(A, std::move(fibers), std::vector<Point>(k, 0), std::move(ops));
  }

  PointedOveralg overalg_from_split(FinAlgebra const&           B,
                                    AlgebraPtr                  A,
                                    std::vector<Element> const& pi,
                                    std::vector<Element> const& iota) {
    if (!is_hom(B, *A, pi)) {
      fail(ErrorKind::NotHom, "pi is not a homomorphism onto the base");
    }
    if (!is_hom(*A, B, iota)) {
      fail(ErrorKind::NotHom, "iota is not a homomorphism into the total algebra");
    }
    std::size_t const k = A->size();
    for (Element a = 0; a < k; ++a) {
      if (pi[iota[a]] != a) {
        fail(ErrorKind::NotSplit, "pi o iota differs from the identity at " + A->element_name(a));
      }
    }
    std::vector<std::vector<Element>>     members(k);
    std::vector<Point>                    pos(B.size());
    std::vector<std::vector<std::string>> fibers(k);
    for (Element b = 0; b < B.size(); ++b) {
      pos[b] = static_cast<Point>(members[pi[b]].size());
      members[pi[b]].push_back(b);
      fibers[pi[b]].push_back(B.element_name(b));
    }
    std::vector<Point> basepoints(k);
    for (Element a = 0; a < k; ++a) {
      basepoints[a] = pos[iota[a]];
    }
    PointedOveralg::OpTables ops;
    for (std::size_t s = 0; s < A->signature().size(); ++s) {
      unsigned const n = A->signature()[s].arity;
      auto&          per_tuple = ops.emplace_back();
      for (auto const& a : all_tuples(k, n)) {
        std::vector<std::size_t> radix;
        for (Element ai : a) {
          radix.push_back(members[ai].size());
        }
        auto&             tab   = per_tuple.emplace_back();
        std::size_t const count = product(radix);
        for (std::size_t r = 0; r < count; ++r) {
          auto const p = mixed_at(radix, r);
          Tuple      bs(n);
          for (unsigned j = 0; j < n; ++j) {
            bs[j] = members[a[j]][p[j]];
          }
          tab.push_back(pos[B.apply(s, bs)]);
        }
      }
    }
    return PointedOveralg(std::move(A), std::move(fibers), std::move(basepoints), std::move(ops));
  }

  SplitAlgebra beta_algebra(AlgebraPtr const& A, std::vector<std::uint32_t> const& beta) {
    if (!is_congruence_labels(*A, beta)) {
      fail(ErrorKind::NotCongruence, "beta is not a congruence of " + A->name());
    }
    std::size_t const                                    k = A->size();
    std::vector<std::pair<Element, Element>>             pairs;
    std::map<std::pair<Element, Element>, Element>       index;
    std::vector<std::string>                             names;
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        if (beta[a] == beta[b]) {
          index[{a, b}] = static_cast<Element>(pairs.size());
          pairs.emplace_back(a, b);
          names.push_back("(" + A->element_name(a) + "," + A->element_name(b) + ")");
        }
      }
    }
    std::vector<std::vector<Element>> tables;
    for (std::size_t s = 0; s < A->signature().size(); ++s) {
      unsigned const n   = A->signature()[s].arity;
      auto&          tab = tables.emplace_back();
      for (auto const& t : all_tuples(pairs.size(), n)) {
        Tuple l(n), r(n);
        for (unsigned j = 0; j < n; ++j) {
          l[j] = pairs[t[j]].first;
          r[j] = pairs[t[j]].second;
        }
        tab.push_back(index.at({A->apply(s, l), A->apply(s, r)}));
      }
    }
    SplitAlgebra out;
    out.B = std::make_shared<FinAlgebra const>(A->name() + "(beta)", A->signature(), std::move(names), std::move(tables));
    for (auto const& [a, b] : pairs) {
      out.pi.push_back(a);
    }
    for (Element a = 0; a < k; ++a) {
      out.iota.push_back(index.at({a, a}));
    }
    return out;
  }

  PointedOveralg beta_star(AlgebraPtr const& A, std::vector<std::uint32_t> const& beta) {
    auto split = beta_algebra(A, beta);
    return overalg_from_split(*split.B, A, split.pi, split.iota);
  }

  PointedOveralg p_alpha_beta(AlgebraPtr const&                 A,
                              std::vector<std::uint32_t> const& alpha,
                              std::vector<std::uint32_t> const& beta) {
    if (!is_congruence_labels(*A, alpha) || !is_congruence_labels(*A, beta)) {
      fail(ErrorKind::NotCongruence, "alpha and beta must be congruences");
    }
    std::size_t const k = A->size();
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        if (alpha[a] == alpha[b] && beta[a] != beta[b]) {
          fail(ErrorKind::NotCongruence, "alpha is not below beta");
        }
      }
    }
    // Fiber over a: the alpha-classes inside a's beta-class, each named and
    // represented by its least element.
    std::vector<std::vector<Element>>     reps(k);
    std::vector<std::vector<std::string>> fibers(k);
    std::vector<Point>                    basepoints(k);
    auto class_pos = [&](Element a, Element b) -> Point {
      for (Point j = 0; j < reps[a].size(); ++j) {
        if (alpha[reps[a][j]] == alpha[b]) {
          return j;
        }
      }
      fail(ErrorKind::Validation, "element outside the fiber");
    };
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        if (beta[b] != beta[a]) {
          continue;
        }
        bool fresh = std::none_of(reps[a].begin(), reps[a].end(), [&](Element r) { return alpha[r] == alpha[b]; });
        if (fresh) {
          reps[a].push_back(b);
          fibers[a].push_back(A->element_name(b) + "/alpha");
        }
      }
      basepoints[a] = class_pos(a, a);
    }
    PointedOveralg::OpTables ops;
    for (std::size_t s = 0; s < A->signature().size(); ++s) {
      unsigned const n         = A->signature()[s].arity;
      auto&          per_tuple = ops.emplace_back();
      for (auto const& a : all_tuples(k, n)) {
        std::vector<std::size_t> radix;
        for (Element ai : a) {
          radix.push_back(reps[ai].size());
        }
        Element const     target = A->apply(s, a);
        auto&             tab    = per_tuple.emplace_back();
        std::size_t const count  = product(radix);
        for (std::size_t r = 0; r < count; ++r) {
          auto const p = mixed_at(radix, r);
          Tuple      bs(n);
          for (unsigned j = 0; j < n; ++j) {
            bs[j] = reps[a[j]][p[j]];
          }
          tab.push_back(class_pos(target, A->apply(s, bs)));
        }
      }
    }
    return PointedOveralg(A, std::move(fibers), std::move(basepoints), std::move(ops));
  }

  ////////////////////////////////////////////////////////////////////////
  // AModule
  ////////////////////////////////////////////////////////////////////////

  AModule::AModule(AlgebraPtr A, std::vector<FGAbGroup> fibers, Parts parts)
      : _A(std::move(A)), _fibers(std::move(fibers)), _parts(std::move(parts)) {
    std::size_t const k   = _A->size();
    auto const&       sig = _A->signature();
    if (_fibers.size() != k) {
      fail(ErrorKind::Validation, "module needs one fiber per element of the base");
    }
    if (_parts.size() != sig.size()) {
      fail(ErrorKind::Validation, "module operation count does not match the signature");
    }
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n = sig[s].arity;
      if (_parts[s].size() != int_pow(k, n)) {
        fail(ErrorKind::Validation, "operation '" + sig[s].name + "' needs parts for every tuple");
      }
      for (std::size_t r = 0; r < _parts[s].size(); ++r) {
        Tuple const a = tuple_at(k, n, r);
        if (_parts[s][r].size() != n) {
          fail(ErrorKind::Validation, "operation '" + sig[s].name + "' needs one part per argument");
        }
        Element const target = _A->apply(s, a);
        for (unsigned i = 0; i < n; ++i) {
          ZHom(_fibers[a[i]], _fibers[target], _parts[s][r][i]);
        }
      }
    }
  }

  AModule AModule::zero(AlgebraPtr A) {
    std::size_t const k = A->size();
    Parts             parts;
    for (auto const& sym : A->signature().symbols()) {
      parts.emplace_back(int_pow(k, sym.arity), std::vector<Matrix>(sym.arity, Matrix(0, 0)));
    }
    return AModule(A, std::vector<FGAbGroup>(k, FGAbGroup(0)), std::move(parts));
  }

  Matrix const& AModule::part(std::size_t symbol, std::span<Element const> a, std::size_t i) const {
    return _parts.at(symbol).at(tuple_index(_A->size(), a)).at(i);
  }

  ZHom AModule::part_hom(std::size_t symbol, std::span<Element const> a, std::size_t i) const {
    return ZHom(_fibers.at(a[i]), _fibers.at(_A->apply(symbol, a)), part(symbol, a, i));
  }

  bool AModule::finite() const {
    return std::all_of(_fibers.begin(), _fibers.end(), [](FGAbGroup const& g) { return g.is_finite(); });
  }

  Vec AModule::apply(std::size_t symbol, std::span<Element const> a, std::vector<Vec> const& m) const {
    Element const target = _A->apply(symbol, a);
    Vec           out(_fibers[target].rank());
    for (std::size_t i = 0; i < a.size(); ++i) {
      Vec const v = part(symbol, a, i).apply(m.at(i));
      for (std::size_t j = 0; j < out.size(); ++j) {
        out[j] += v[j];
      }
    }
    return _fibers[target].reduce(out);
  }

  void check_module_hom(AModule const& M, AModule const& N, ModuleHom const& f) {
    std::size_t const k = M.base()->size();
    if (f.maps.size() != k || N.base()->size() != k) {
      fail(ErrorKind::NotHom, "homomorphism needs one map per fiber");
    }
    std::vector<ZHom> phi;
    try {
      for (Element a = 0; a < k; ++a) {
        phi.emplace_back(M.fiber(a), N.fiber(a), f.maps[a]);
      }
    } catch (Error const& e) {
      fail(ErrorKind::NotHom, e.what());
    }
    auto const& sig = M.base()->signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n = sig[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        Element const t = M.base()->apply(s, a);
        for (unsigned i = 0; i < n; ++i) {
          Matrix const lhs = N.part(s, a, i) * f.maps[a[i]];
          Matrix const rhs = f.maps[t] * M.part(s, a, i);
          if (!ZHom(M.fiber(a[i]), N.fiber(t), lhs - rhs).is_zero()) {
            fail(ErrorKind::NotHom, "homomorphism law fails for '" + sig[s].name + "' in argument "
                                        + std::to_string(i + 1));
          }
        }
      }
    }
  }

  bool is_module_hom(AModule const& M, AModule const& N, ModuleHom const& f) {
    try {
      check_module_hom(M, N, f);
      return true;
    } catch (Error const&) {
      return false;
    }
  }

  bool is_pointed_hom(PointedOveralg const& P, PointedOveralg const& Q, PointedHom const& f) {
    std::size_t const k = P.base()->size();
    if (f.maps.size() != k) {
      return false;
    }
    for (Element a = 0; a < k; ++a) {
      if (f.maps[a].size() != P.fiber_size(a) || f.maps[a][P.basepoint(a)] != Q.basepoint(a)) {
        return false;
      }
      for (Point q : f.maps[a]) {
        if (q >= Q.fiber_size(a)) {
          return false;
        }
      }
    }
    auto const& sig = P.base()->signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n = sig[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        std::vector<std::size_t> radix;
        for (Element ai : a) {
          radix.push_back(P.fiber_size(ai));
        }
        Element const     t     = P.base()->apply(s, a);
        std::size_t const count = product(radix);
        for (std::size_t r = 0; r < count; ++r) {
          auto const         p = mixed_at(radix, r);
          std::vector<Point> img(n);
          for (unsigned j = 0; j < n; ++j) {
            img[j] = f.maps[a[j]][p[j]];
          }
          if (f.maps[t][P.apply(s, a, p)] != Q.apply(s, a, img)) {
            return false;
          }
        }
      }
    }
    return true;
  }

  PointedOveralg underlying(AModule const& M) {
    std::size_t const                     k = M.base()->size();
    std::vector<std::vector<Vec>>         elems(k);
    std::vector<std::vector<std::string>> fibers(k);
    for (Element a = 0; a < k; ++a) {
      elems[a] = M.fiber(a).elements();
      for (auto const& v : elems[a]) {
        fibers[a].push_back(vec_name(v));
      }
    }
    PointedOveralg::OpTables ops;
    auto const&              sig = M.base()->signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n         = sig[s].arity;
      auto&          per_tuple = ops.emplace_back();
      for (auto const& a : all_tuples(k, n)) {
        std::vector<std::size_t> radix;
        for (Element ai : a) {
          radix.push_back(elems[ai].size());
        }
        Element const     t     = M.base()->apply(s, a);
        auto&             tab   = per_tuple.emplace_back();
        std::size_t const count = product(radix);
        for (std::size_t r = 0; r < count; ++r) {
          auto const       p = mixed_at(radix, r);
          std::vector<Vec> m;
          for (unsigned j = 0; j < n; ++j) {
            m.push_back(elems[a[j]][p[j]]);
          }
          tab.push_back(static_cast<Point>(M.fiber(t).index_of(M.apply(s, a, m))));
        }
      }
    }
    // The zero vector is always the first element.
    return PointedOveralg(M.base(), std::move(fibers), std::vector<Point>(k, 0), std::move(ops));
  }

  bool is_pointed_hom_to_module(PointedOveralg const& P, AModule const& M, PointedHom const& f) {
    return is_pointed_hom(P, underlying(M), f);
  }

  ////////////////////////////////////////////////////////////////////////
  // Total algebras
  ////////////////////////////////////////////////////////////////////////

  TotalAlgebra total_algebra(PointedOveralg const& P) {
    auto const&       A = *P.base();
    std::size_t const k = A.size();
    TotalAlgebra      out;
    std::vector<std::string>            names;
    std::vector<std::pair<Element, Point>> pairs;
    for (Element a = 0; a < k; ++a) {
      out.offset.push_back(pairs.size());
      for (Point p = 0; p < P.fiber_size(a); ++p) {
        names.push_back(A.element_name(a) + ":" + P.fiber(a)[p]);
        pairs.emplace_back(a, p);
        out.pi.push_back(a);
      }
    }
    for (Element a = 0; a < k; ++a) {
      out.iota.push_back(static_cast<Element>(out.offset[a] + P.basepoint(a)));
    }
    std::vector<std::vector<Element>> tables;
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      unsigned const n   = A.signature()[s].arity;
      auto&          tab = tables.emplace_back();
      for (auto const& t : all_tuples(pairs.size(), n)) {
        Tuple              a(n);
        std::vector<Point> p(n);
        for (unsigned j = 0; j < n; ++j) {
          a[j] = pairs[t[j]].first;
          p[j] = pairs[t[j]].second;
        }
        Element const target = A.apply(s, a);
        tab.push_back(static_cast<Element>(out.offset[target] + P.apply(s, a, p)));
      }
    }
    out.algebra = std::make_shared<FinAlgebra const>(A.name() + "-total", A.signature(), std::move(names),
                                                     std::move(tables));
    return out;
  }

  TotalAlgebra total_algebra(AModule const& M) {
    if (!M.finite()) {
      fail(ErrorKind::InfiniteFiber, "total algebra of a module with a fiber of positive free rank");
    }
    return total_algebra(underlying(M));
  }

  namespace {
    std::optional<TotalityWitness> witness_of(Variety const& V, TotalAlgebra const& T) {
      auto w = variety_counterexample(V, *T.algebra);
      if (!w) {
        return std::nullopt;
      }
      Identity const&    id = V.identities()[w->identity];
      std::ostringstream os;
      os << "identity " << to_string(id.lhs, V.signature()) << " = " << to_string(id.rhs, V.signature())
         << " fails in the total algebra at (";
      for (std::size_t j = 0; j < w->tuple.size(); ++j) {
        os << (j ? ", " : "") << T.algebra->element_name(w->tuple[j]);
      }
      os << ")";
      return TotalityWitness{w->identity, w->tuple, os.str()};
    }
  }  // namespace

  std::optional<TotalityWitness> totally_in_witness(Variety const& V, PointedOveralg const& P) {
    return witness_of(V, total_algebra(P));
  }

  std::optional<TotalityWitness> totally_in_witness(Variety const& V, AModule const& M) {
    auto const& A = *M.base();
    if (auto w = variety_counterexample(V, A)) {
      return TotalityWitness{w->identity, w->tuple, "the base algebra " + A.name() + " is not in " + V.name()};
    }
    // Derived operations of a module are additive, so an identity holds in
    // the total algebra exactly when both sides have equal unary parts.
    for (std::size_t id = 0; id < V.identities().size(); ++id) {
      Identity const& eq = V.identities()[id];
      for (auto const& a : all_tuples(A.size(), eq.arity)) {
        for (std::size_t i = 0; i < eq.arity; ++i) {
          Matrix const diff = t_part(M, eq.lhs, a, i) - t_part(M, eq.rhs, a, i);
          Element const t   = eval(A, eq.lhs, a);
          if (ZHom(M.fiber(a[i]), M.fiber(t), diff).is_zero()) {
            continue;
          }
          std::ostringstream os;
          os << "identity " << to_string(eq.lhs, V.signature()) << " = " << to_string(eq.rhs, V.signature())
             << " fails in argument " << i + 1 << " over (";
          for (std::size_t j = 0; j < a.size(); ++j) {
            os << (j ? ", " : "") << A.element_name(a[j]);
          }
          os << ")";
          return TotalityWitness{id, a, os.str()};
        }
      }
    }
    return std::nullopt;
  }

  bool totally_in(Variety const& V, PointedOveralg const& P) {
    return !totally_in_witness(V, P).has_value();
  }

  bool totally_in(Variety const& V, AModule const& M) {
    return !totally_in_witness(V, M).has_value();
  }

  ////////////////////////////////////////////////////////////////////////
  // Derived operations
  ////////////////////////////////////////////////////////////////////////

  Point t_action(PointedOveralg const& P, Term const& t, std::span<Element const> a, std::span<Point const> p) {
    auto const& A = *P.base();
    check_term(A.signature(), t);
    if (t.max_var() > a.size() || a.size() != p.size()) {
      fail(ErrorKind::ArityMismatch, "t_action needs one element and one point per variable");
    }
    using Pair = std::pair<Element, Point>;
    return fold<Pair>(
               t,
               [&](std::uint32_t i) { return Pair{a[i - 1], p[i - 1]}; },
               [&](Element c) { return Pair{c, P.basepoint(c)}; },
               [&](std::uint32_t s, std::span<Pair> ch) {
                 Tuple              as;
                 std::vector<Point> ps;
                 for (auto const& [x, y] : ch) {
                   as.push_back(x);
                   ps.push_back(y);
                 }
                 return Pair{A.apply(s, as), P.apply(s, as, ps)};
               })
        .second;
  }

  Vec t_action(AModule const& M, Term const& t, std::span<Element const> a, std::vector<Vec> const& m) {
    auto const& A = *M.base();
    check_term(A.signature(), t);
    if (t.max_var() > a.size() || a.size() != m.size()) {
      fail(ErrorKind::ArityMismatch, "t_action needs one element and one vector per variable");
    }
    using Pair = std::pair<Element, Vec>;
    return fold<Pair>(
               t,
               [&](std::uint32_t i) { return Pair{a[i - 1], m[i - 1]}; },
               [&](Element c) { return Pair{c, Vec(M.fiber(c).rank())}; },
               [&](std::uint32_t s, std::span<Pair> ch) {
                 Tuple            as;
                 std::vector<Vec> vs;
                 for (auto const& [x, y] : ch) {
                   as.push_back(x);
                   vs.push_back(y);
                 }
                 return Pair{A.apply(s, as), M.apply(s, as, vs)};
               })
        .second;
  }

  Matrix t_part(AModule const& M, Term const& t, std::span<Element const> a, std::size_t i) {
    auto const& A = *M.base();
    check_term(A.signature(), t);
    if (t.max_var() > a.size() || i >= a.size()) {
      fail(ErrorKind::ArityMismatch, "t_part index outside the tuple");
    }
    std::size_t const cols = M.fiber(a[i]).rank();
    using Pair             = std::pair<Element, Matrix>;
    return fold<Pair>(
               t,
               [&](std::uint32_t j) {
                 Element const aj = a[j - 1];
                 return Pair{aj, j - 1 == i ? Matrix::identity(cols) : Matrix(M.fiber(aj).rank(), cols)};
               },
               [&](Element c) { return Pair{c, Matrix(M.fiber(c).rank(), cols)}; },
               [&](std::uint32_t s, std::span<Pair> ch) {
                 Tuple as;
                 for (auto const& [x, y] : ch) {
                   as.push_back(x);
                 }
                 Element const target = A.apply(s, as);
                 Matrix        acc(M.fiber(target).rank(), cols);
                 for (std::size_t j = 0; j < ch.size(); ++j) {
                   acc = acc + M.part(s, as, j) * ch[j].second;
                 }
                 return Pair{target, std::move(acc)};
               })
        .second;
  }

  ////////////////////////////////////////////////////////////////////////
  // Images and quotients
  ////////////////////////////////////////////////////////////////////////

  ModuleImage image_factorization(AModule const& M, AModule const& N, ModuleHom const& f) {
    check_module_hom(M, N, f);
    std::size_t const      k = M.base()->size();
    std::vector<Lattice>   span(k);
    std::vector<FGAbGroup> fibers;
    ModuleHom              onto, into;
    for (Element a = 0; a < k; ++a) {
      span[a] = N.fiber(a).relation_lattice();
      for (auto const& c : f.maps[a].columns()) {
        span[a].insert(c);
      }
      span[a].canonicalize();
      std::vector<Vec> rel;
      for (auto const& [p, row] : N.fiber(a).relation_lattice().rows()) {
        rel.push_back(*span[a].coordinates(row));
      }
      fibers.emplace_back(span[a].rank(), rel);
      into.maps.push_back(span[a].matrix());
      std::vector<Vec> cols;
      for (auto const& c : f.maps[a].columns()) {
        cols.push_back(*span[a].coordinates(to_sparse(c)));
      }
      onto.maps.push_back(Matrix::from_columns(cols, span[a].rank()));
    }
    AModule::Parts parts;
    auto const&    sig = M.base()->signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n         = sig[s].arity;
      auto&          per_tuple = parts.emplace_back();
      for (auto const& a : all_tuples(k, n)) {
        Element const t     = M.base()->apply(s, a);
        auto&         per_i = per_tuple.emplace_back();
        for (unsigned i = 0; i < n; ++i) {
          Matrix const     img = N.part(s, a, i) * into.maps[a[i]];
          std::vector<Vec> cols;
          for (auto const& c : img.columns()) {
            auto co = span[t].coordinates(to_sparse(c));
            if (!co) {
              fail(ErrorKind::NotHom, "image is not closed under the module operations");
            }
            cols.push_back(std::move(*co));
          }
          per_i.push_back(Matrix::from_columns(cols, span[t].rank()));
        }
      }
    }
    return {AModule(M.base(), std::move(fibers), std::move(parts)), std::move(onto), std::move(into)};
  }

  ModuleQuotient quotient(AModule const& M, std::vector<std::vector<Vec>> const& submodule) {
    std::size_t const k = M.base()->size();
    if (submodule.size() != k) {
      fail(ErrorKind::Validation, "submodule needs generators per fiber");
    }
    std::vector<Lattice> lat(k);
    for (Element a = 0; a < k; ++a) {
      lat[a] = M.fiber(a).relation_lattice();
      for (auto const& v : submodule[a]) {
        lat[a].insert(v);
      }
    }
    auto const& sig = M.base()->signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n = sig[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        Element const t = M.base()->apply(s, a);
        for (unsigned i = 0; i < n; ++i) {
          for (auto const& v : lat[a[i]].basis()) {
            if (!lat[t].contains(M.part(s, a, i).apply(v))) {
              fail(ErrorKind::NotCongruence, "submodule is not closed under '" + sig[s].name + "'");
            }
          }
        }
      }
    }
    std::vector<FGAbGroup> fibers;
    ModuleHom              nat;
    for (Element a = 0; a < k; ++a) {
      fibers.emplace_back(lat[a]);
      nat.maps.push_back(Matrix::identity(M.fiber(a).rank()));
    }
    return {AModule(M.base(), std::move(fibers), M.parts()), std::move(nat)};
  }

  OveralgQuotient quotient(PointedOveralg const& P, std::vector<std::vector<std::uint32_t>> const& labels) {
    std::size_t const k = P.base()->size();
    if (labels.size() != k) {
      fail(ErrorKind::Validation, "congruence needs labels per fiber");
    }
    // Renumber classes by first occurrence.
    std::vector<std::vector<Point>> cls(k);
    std::vector<std::vector<Point>> reps(k);
    for (Element a = 0; a < k; ++a) {
      if (labels[a].size() != P.fiber_size(a)) {
        fail(ErrorKind::Validation, "labels do not cover the fiber");
      }
      std::map<std::uint32_t, Point> seen;
      for (Point p = 0; p < P.fiber_size(a); ++p) {
        auto [it, fresh] = seen.emplace(labels[a][p], static_cast<Point>(reps[a].size()));
        if (fresh) {
          reps[a].push_back(p);
        }
        cls[a].push_back(it->second);
      }
    }
    auto const& sig = P.base()->signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n = sig[s].arity;
      for (auto const& a : all_tuples(k, n)) {
        std::vector<std::size_t> radix;
        for (Element ai : a) {
          radix.push_back(P.fiber_size(ai));
        }
        Element const     t     = P.base()->apply(s, a);
        std::size_t const count = product(radix);
        for (std::size_t r = 0; r < count; ++r) {
          auto        p    = mixed_at(radix, r);
          Point const base = cls[t][P.apply(s, a, p)];
          for (unsigned j = 0; j < n; ++j) {
            Point const keep = p[j];
            for (Point q = 0; q < P.fiber_size(a[j]); ++q) {
              if (cls[a[j]][q] != cls[a[j]][keep]) {
                continue;
              }
              p[j] = q;
              if (cls[t][P.apply(s, a, p)] != base) {
                fail(ErrorKind::NotCongruence, "partition is not compatible with '" + sig[s].name + "'");
              }
            }
            p[j] = keep;
          }
        }
      }
    }
    std::vector<std::vector<std::string>> fibers(k);
    std::vector<Point>                    basepoints(k);
    for (Element a = 0; a < k; ++a) {
      for (Point r : reps[a]) {
        fibers[a].push_back("[" + P.fiber(a)[r] + "]");
      }
      basepoints[a] = cls[a][P.basepoint(a)];
    }
    PointedOveralg::OpTables ops;
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n         = sig[s].arity;
      auto&          per_tuple = ops.emplace_back();
      for (auto const& a : all_tuples(k, n)) {
        std::vector<std::size_t> radix;
        for (Element ai : a) {
          radix.push_back(reps[ai].size());
        }
        Element const     t     = P.base()->apply(s, a);
        auto&             tab   = per_tuple.emplace_back();
        std::size_t const count = product(radix);
        for (std::size_t r = 0; r < count; ++r) {
          auto const         q = mixed_at(radix, r);
          std::vector<Point> p(n);
          for (unsigned j = 0; j < n; ++j) {
            p[j] = reps[a[j]][q[j]];
          }
          tab.push_back(cls[t][P.apply(s, a, p)]);
        }
      }
    }
    return {PointedOveralg(P.base(), std::move(fibers), std::move(basepoints), std::move(ops)), PointedHom{cls}};
  }

  ////////////////////////////////////////////////////////////////////////
  // FreePointed
  ////////////////////////////////////////////////////////////////////////

  FreePointed::FreePointed(Variety V, AlgebraPtr A, std::vector<Element> over)
      : _V(std::move(V)), _A(std::move(A)), _over(std::move(over)), _canon(make_canonicalizer(_V, _A)) {
    for (Element a : _over) {
      if (a >= _A->size()) {
        fail(ErrorKind::Validation, "generator lies over an element outside the base");
      }
    }
  }

  Element FreePointed::projection(Term const& p) const {
    return eval_with_constants(*_A, p, _over, [](Element c) { return c; });
  }

  Term FreePointed::basepoint(Element a) const {
    return _canon->canon(Term::constant(a));
  }

  Term FreePointed::generator(std::size_t j) const {
    return _canon->canon(Term::var(static_cast<std::uint32_t>(j + 1)));
  }

  Term FreePointed::apply(std::size_t symbol, std::vector<Term> const& args) const {
    return _canon->canon(Term::app(static_cast<std::uint32_t>(symbol), args));
  }

  std::vector<Term> FreePointed::fiber(Element a, std::size_t bound) const {
    std::vector<Term> out;
    for (auto& t : _canon->enumerate(static_cast<unsigned>(_over.size()), bound, false)) {
      if (projection(t) == a) {
        out.push_back(std::move(t));
      }
    }
    return out;
  }

  PointedOveralg FreePointed::materialize(std::size_t bound) const {
    std::size_t const                     k = _A->size();
    std::vector<std::vector<Term>>        elems(k);
    std::vector<std::vector<std::string>> names(k);
    std::vector<Point>                    basepoints(k);
    auto position = [&](Element a, Term const& t) -> Point {
      auto it = std::find(elems[a].begin(), elems[a].end(), t);
      if (it == elems[a].end()) {
        fail(ErrorKind::InfiniteFiber, "free overalgebra is not closed at weight " + std::to_string(bound));
      }
      return static_cast<Point>(it - elems[a].begin());
    };
    for (Element a = 0; a < k; ++a) {
      elems[a] = fiber(a, bound);
      for (auto const& t : elems[a]) {
        names[a].push_back(to_string(t, _A->signature(), &_A->carrier()));
      }
      basepoints[a] = position(a, basepoint(a));
    }
    PointedOveralg::OpTables ops;
    auto const&              sig = _A->signature();
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n         = sig[s].arity;
      auto&          per_tuple = ops.emplace_back();
      for (auto const& a : all_tuples(k, n)) {
        std::vector<std::size_t> radix;
        for (Element ai : a) {
          radix.push_back(elems[ai].size());
        }
        Element const     t     = _A->apply(s, a);
        auto&             tab   = per_tuple.emplace_back();
        std::size_t const count = product(radix);
        for (std::size_t r = 0; r < count; ++r) {
          auto const        p = mixed_at(radix, r);
          std::vector<Term> args;
          for (unsigned j = 0; j < n; ++j) {
            args.push_back(elems[a[j]][p[j]]);
          }
          tab.push_back(position(t, apply(s, args)));
        }
      }
    }
    return PointedOveralg(_A, std::move(names), std::move(basepoints), std::move(ops));
  }

  Point FreePointed::extend(PointedOveralg const& Q, std::vector<Point> const& images, Term const& p) const {
    if (images.size() != _over.size()) {
      fail(ErrorKind::ArityMismatch, "one image per generator is required");
    }
    return t_action(Q, p, _over, images);
  }

}  // namespace envring
