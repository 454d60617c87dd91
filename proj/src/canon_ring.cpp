// SPDX-License-Identifier: Apache-2.0
//
// Normal forms for pointed sets, abelian groups and commutative rings.
//   pointed sets: a variable, a non-basepoint constant, or the basepoint
//   abelian groups: iota(a) + sum k_i x_i with integer k_i
//   commutative rings: polynomials over A with sorted monomials

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <map>

#include "canon_impl.hpp"

namespace envring::detail {

  namespace {

    ////////////////////////////////////////////////////////////////////////
    // Pointed sets
    ////////////////////////////////////////////////////////////////////////

    class PointedCanon final : public Canonicalizer {
     public:
      explicit PointedCanon(AlgebraPtr A) : Canonicalizer(std::move(A)) {
        _pt = _A->table(0).at(0);
      }

      Term canon(Term const& p) const override {
        check_term(_A->signature(), p);
        if (p.is_const() && p.root().value == _pt) {
          return basepoint();
        }
        return p;
      }

      std::size_t weight(Term const&) const override {
        return 1;
      }

      std::vector<Term> enumerate(unsigned n, std::size_t max_weight, bool linear_orbits) const override {
        std::vector<Term> out;
        if (max_weight == 0) {
          return out;
        }
        if (!linear_orbits || n == 0) {
          out.push_back(basepoint());
          for (Element c = 0; c < _A->size(); ++c) {
            if (c != _pt) {
              out.push_back(Term::constant(c));
            }
          }
        }
        if (!linear_orbits || n == 1) {
          for (std::uint32_t i = 1; i <= n; ++i) {
            out.push_back(Term::var(i));
          }
        }
        sort_by_weight(*this, out);
        return out;
      }

     private:
      Element _pt = 0;

      static Term basepoint() {
        return Term::app(0, std::span<Term const>());
      }
    };

    ////////////////////////////////////////////////////////////////////////
    // Abelian groups
    ////////////////////////////////////////////////////////////////////////

    constexpr std::uint32_t kAdd  = 0;
    constexpr std::uint32_t kNeg  = 1;
    constexpr std::uint32_t kZero = 2;
    constexpr std::uint32_t kMul  = 3;
    constexpr std::uint32_t kOne  = 4;

    struct Linear {
      Element                   a = 0;
      std::vector<std::int64_t> k;  // k[i-1] is the coefficient of x_i
    };

    class ABCanon final : public Canonicalizer {
     public:
      explicit ABCanon(AlgebraPtr A) : Canonicalizer(std::move(A)) {
        _zero = _A->table(kZero).at(0);
      }

      Term canon(Term const& p) const override {
        return to_term(eval(p));
      }

      std::size_t weight(Term const& p) const override {
        Linear const l     = eval(p);
        std::size_t  total = l.a != _zero ? 1 : 0;
        for (auto k : l.k) {
          total += static_cast<std::size_t>(std::llabs(k));
        }
        return std::max<std::size_t>(total, 1);
      }

      std::vector<Term> enumerate(unsigned n, std::size_t max_weight, bool linear_orbits) const override {
        std::vector<Term> out;
        if (max_weight == 0) {
          return out;
        }
        std::vector<std::int64_t> k(n, 0);
        for (Element a = 0; a < _A->size(); ++a) {
          std::size_t const base = a != _zero ? 1 : 0;
          if (base > max_weight) {
            continue;
          }
          fill(Linear{a, {}}, k, 0, base, max_weight, linear_orbits, out);
        }
        sort_by_weight(*this, out);
        return out;
      }

     private:
      Element _zero = 0;

      void fill(Linear                     l,
                std::vector<std::int64_t>& k,
                std::size_t                i,
                std::size_t                used,
                std::size_t                budget,
                bool                       linear_orbits,
                std::vector<Term>&         out) const {
        if (i == k.size()) {
          l.k = k;
          out.push_back(to_term(l));
          return;
        }
        std::int64_t const room = static_cast<std::int64_t>(budget - used);
        for (std::int64_t v = -room; v <= room; ++v) {
          if (linear_orbits) {
            // Every variable used, coefficients non-decreasing.
            if (v == 0 || (i > 0 && v < k[i - 1])) {
              continue;
            }
          }
          k[i] = v;
          fill(l, k, i + 1, used + static_cast<std::size_t>(std::llabs(v)), budget, linear_orbits, out);
        }
        k[i] = 0;
      }

      Linear eval(Term const& p) const {
        check_term(_A->signature(), p);
        std::size_t const n = p.max_var();
        return fold<Linear>(
            p,
            [&](std::uint32_t i) {
              Linear l{_zero, std::vector<std::int64_t>(n, 0)};
              l.k[i - 1] = 1;
              return l;
            },
            [&](Element c) { return Linear{c, std::vector<std::int64_t>(n, 0)}; },
            [&](std::uint32_t s, std::span<Linear> ch) {
              if (s == kAdd) {
                Linear l{_A->apply(kAdd, {ch[0].a, ch[1].a}), ch[0].k};
                for (std::size_t j = 0; j < n; ++j) {
                  l.k[j] += ch[1].k[j];
                }
                return l;
              }
              if (s == kNeg) {
                Linear l{_A->apply(kNeg, {ch[0].a}), ch[0].k};
                for (auto& v : l.k) {
                  v = -v;
                }
                return l;
              }
              return Linear{_zero, std::vector<std::int64_t>(n, 0)};
            });
      }

      Term to_term(Linear const& l) const {
        std::vector<Term> parts;
        if (l.a != _zero) {
          parts.push_back(Term::constant(l.a));
        }
        for (std::size_t i = 0; i < l.k.size(); ++i) {
          Term const xi = Term::var(static_cast<std::uint32_t>(i + 1));
          Term const t  = l.k[i] > 0 ? xi : Term::app(kNeg, {xi});
          for (std::int64_t j = 0; j < std::llabs(l.k[i]); ++j) {
            parts.push_back(t);
          }
        }
        return right_nest(kAdd, parts, Term::app(kZero, std::span<Term const>()));
      }
    };

    ////////////////////////////////////////////////////////////////////////
    // Commutative rings
    ////////////////////////////////////////////////////////////////////////

    using Monomial = std::vector<std::uint32_t>;  // exponents, trailing zeros trimmed

    struct MonomialOrder {
      bool operator()(Monomial const& x, Monomial const& y) const {
        auto deg = [](Monomial const& m) {
          std::size_t d = 0;
          for (auto e : m) {
            d += e;
          }
          return d;
        };
        std::size_t dx = deg(x), dy = deg(y);
        if (dx != dy) {
          return dx < dy;
        }
        // Higher powers of earlier variables first.
        std::size_t const len = std::max(x.size(), y.size());
        for (std::size_t i = 0; i < len; ++i) {
          std::uint32_t ex = i < x.size() ? x[i] : 0;
          std::uint32_t ey = i < y.size() ? y[i] : 0;
          if (ex != ey) {
            return ex > ey;
          }
        }
        return false;
      }
    };

    using Poly = std::map<Monomial, Element, MonomialOrder>;

    std::size_t degree(Monomial const& m) {
      std::size_t d = 0;
      for (auto e : m) {
        d += e;
      }
      return d;
    }

    Monomial times(Monomial x, Monomial const& y) {
      if (x.size() < y.size()) {
        x.resize(y.size(), 0);
      }
      for (std::size_t i = 0; i < y.size(); ++i) {
        x[i] += y[i];
      }
      return x;
    }

    class CRingCanon final : public Canonicalizer {
     public:
      explicit CRingCanon(AlgebraPtr A) : Canonicalizer(std::move(A)) {
        _zero = _A->table(kZero).at(0);
        _one  = _A->table(kOne).at(0);
      }

      Term canon(Term const& p) const override {
        return to_term(eval(p));
      }

      std::size_t weight(Term const& p) const override {
        return poly_weight(eval(p));
      }

      std::vector<Term> enumerate(unsigned n, std::size_t max_weight, bool linear_orbits) const override {
        std::vector<Term> out;
        if (max_weight == 0) {
          return out;
        }
        std::vector<Monomial> monos;
        Monomial              cur(n, 0);
        all_monomials(cur, 0, max_weight, monos);
        std::sort(monos.begin(), monos.end(), MonomialOrder{});
        Poly p;
        choose(monos, 0, p, 0, max_weight, n, linear_orbits, out);
        sort_by_weight(*this, out);
        return out;
      }

     private:
      Element _zero = 0;
      Element _one  = 0;

      Element add(Element a, Element b) const {
        return _A->apply(kAdd, {a, b});
      }

      Element mul(Element a, Element b) const {
        return _A->apply(kMul, {a, b});
      }

      static Monomial trimmed(Monomial m) {
        while (!m.empty() && m.back() == 0) {
          m.pop_back();
        }
        return m;
      }

      void accumulate(Poly& p, Monomial const& m, Element c) const {
        if (c == _zero) {
          return;
        }
        auto [it, fresh] = p.emplace(m, c);
        if (!fresh) {
          it->second = add(it->second, c);
          if (it->second == _zero) {
            p.erase(it);
          }
        }
      }

      Poly eval(Term const& p) const {
        check_term(_A->signature(), p);
        return fold<Poly>(
            p,
            [&](std::uint32_t i) {
              Monomial m(i, 0);
              m[i - 1] = 1;
              Poly q;
              accumulate(q, m, _one);
              return q;
            },
            [&](Element c) {
              Poly q;
              accumulate(q, {}, c);
              return q;
            },
            [&](std::uint32_t s, std::span<Poly> ch) {
              switch (s) {
                case kAdd: {
                  Poly q = std::move(ch[0]);
                  for (auto const& [m, c] : ch[1]) {
                    accumulate(q, m, c);
                  }
                  return q;
                }
                case kNeg: {
                  Poly q;
                  for (auto const& [m, c] : ch[0]) {
                    accumulate(q, m, _A->apply(kNeg, {c}));
                  }
                  return q;
                }
                case kMul: {
                  Poly q;
                  for (auto const& [m1, c1] : ch[0]) {
                    for (auto const& [m2, c2] : ch[1]) {
                      accumulate(q, times(m1, m2), mul(c1, c2));
                    }
                  }
                  return q;
                }
                case kOne: {
                  Poly q;
                  accumulate(q, {}, _one);
                  return q;
                }
                default: return Poly{};
              }
            });
      }

      std::size_t monomial_cost(Monomial const& m, Element c) const {
        std::size_t const d = degree(m);
        return d + ((c != _one || d == 0) ? 1 : 0);
      }

      std::size_t poly_weight(Poly const& p) const {
        std::size_t total = 0;
        for (auto const& [m, c] : p) {
          total += monomial_cost(m, c);
        }
        return std::max<std::size_t>(total, 1);
      }

      Term to_term(Poly const& p) const {
        std::vector<Term> parts;
        for (auto const& [m, c] : p) {
          std::vector<Term> factors;
          if (c != _one || degree(m) == 0) {
            factors.push_back(Term::constant(c));
          }
          for (std::size_t i = 0; i < m.size(); ++i) {
            for (std::uint32_t j = 0; j < m[i]; ++j) {
              factors.push_back(Term::var(static_cast<std::uint32_t>(i + 1)));
            }
          }
          parts.push_back(right_nest(kMul, factors, Term()));
        }
        return right_nest(kAdd, parts, Term::app(kZero, std::span<Term const>()));
      }

      void all_monomials(Monomial& cur, std::size_t i, std::size_t budget, std::vector<Monomial>& out) const {
        if (i == cur.size()) {
          out.push_back(trimmed(cur));
          return;
        }
        for (std::uint32_t e = 0; e <= budget; ++e) {
          cur[i] = e;
          all_monomials(cur, i + 1, budget - e, out);
        }
        cur[i] = 0;
      }

      void choose(std::vector<Monomial> const& monos,
                  std::size_t                  from,
                  Poly&                        p,
                  std::size_t                  used,
                  std::size_t                  budget,
                  unsigned                     n,
                  bool                         linear_orbits,
                  std::vector<Term>&           out) const {
        if (!linear_orbits || uses_all(p, n)) {
          out.push_back(to_term(p));
        }
        for (std::size_t j = from; j < monos.size(); ++j) {
          for (Element c = 0; c < _A->size(); ++c) {
            if (c == _zero) {
              continue;
            }
            std::size_t const cost = monomial_cost(monos[j], c);
            if (used + cost > budget) {
              continue;
            }
            p.emplace(monos[j], c);
            choose(monos, j + 1, p, used + cost, budget, n, linear_orbits, out);
            p.erase(monos[j]);
          }
        }
      }

      static bool uses_all(Poly const& p, unsigned n) {
        std::vector<bool> seen(n, false);
        for (auto const& [m, c] : p) {
          for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] > 0) {
              seen[i] = true;
            }
          }
        }
        return std::all_of(seen.begin(), seen.end(), [](bool b) { return b; });
      }
    };
  }  // namespace

  std::shared_ptr<Canonicalizer const> make_pointed_canon(AlgebraPtr A) {
    return std::make_shared<PointedCanon>(std::move(A));
  }

  std::shared_ptr<Canonicalizer const> make_ab_canon(AlgebraPtr A) {
    return std::make_shared<ABCanon>(std::move(A));
  }

  std::shared_ptr<Canonicalizer const> make_cring_canon(AlgebraPtr A) {
    return std::make_shared<CRingCanon>(std::move(A));
  }

}  // namespace envring::detail
