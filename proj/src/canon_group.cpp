// SPDX-License-Identifier: Apache-2.0
//
// Reduced words in the free product of a finite group A with the free group
// on x_1..x_n. A word alternates between non-identity elements of A and
// powers x_i^k (k != 0) of distinct adjacent variables.

#include <algorithm>
#include <cstdint>
#include <cstdlib>

#include "canon_impl.hpp"

namespace envring::detail {

  namespace {
    constexpr std::uint32_t kMul = 0;
    constexpr std::uint32_t kInv = 1;
    constexpr std::uint32_t kE   = 2;

    struct Letter {
      bool          is_const = false;
      Element       c        = 0;
      std::uint32_t var      = 0;
      std::int64_t  k        = 0;
    };

    using Word = std::vector<Letter>;

    class GroupCanon final : public Canonicalizer {
     public:
      explicit GroupCanon(AlgebraPtr A) : Canonicalizer(std::move(A)) {
        _e = _A->table(kE).at(0);
      }

      Term canon(Term const& p) const override {
        return to_term(eval(p));
      }

      std::size_t weight(Term const& p) const override {
        return word_weight(eval(p));
      }

      std::vector<Term> enumerate(unsigned n, std::size_t max_weight, bool linear_orbits) const override {
        std::vector<Term> out;
        if (max_weight >= 1 && (!linear_orbits || n == 0)) {
          out.push_back(to_term({}));
        }
        Word w;
        grow(w, 0, n, max_weight, linear_orbits, 0, out);
        sort_by_weight(*this, out);
        return out;
      }

     private:
      Element _e = 0;

      Element mul(Element a, Element b) const {
        return _A->apply(kMul, {a, b});
      }

      Element inv(Element a) const {
        return _A->apply(kInv, {a});
      }

      void push(Word& w, Letter l) const {
        if (l.is_const) {
          if (l.c == _e) {
            return;
          }
          if (!w.empty() && w.back().is_const) {
            Element m = mul(w.back().c, l.c);
            w.pop_back();
            if (m != _e) {
              w.push_back(Letter{true, m, 0, 0});
            }
            return;
          }
          w.push_back(l);
          return;
        }
        if (l.k == 0) {
          return;
        }
        if (!w.empty() && !w.back().is_const && w.back().var == l.var) {
          std::int64_t k = w.back().k + l.k;
          w.pop_back();
          if (k != 0) {
            w.push_back(Letter{false, 0, l.var, k});
          }
          return;
        }
        w.push_back(l);
      }

      Word eval(Term const& p) const {
        check_term(_A->signature(), p);
        return fold<Word>(
            p,
            [](std::uint32_t i) { return Word{Letter{false, 0, i, 1}}; },
            [&](Element c) {
              Word w;
              push(w, Letter{true, c, 0, 0});
              return w;
            },
            [&](std::uint32_t s, std::span<Word> ch) {
              if (s == kMul) {
                Word w = std::move(ch[0]);
                for (auto const& l : ch[1]) {
                  push(w, l);
                }
                return w;
              }
              if (s == kInv) {
                Word w;
                for (auto it = ch[0].rbegin(); it != ch[0].rend(); ++it) {
                  push(w, it->is_const ? Letter{true, inv(it->c), 0, 0} : Letter{false, 0, it->var, -it->k});
                }
                return w;
              }
              return Word{};
            });
      }

      static std::size_t word_weight(Word const& w) {
        std::size_t total = 0;
        for (auto const& l : w) {
          total += l.is_const ? 1 : static_cast<std::size_t>(std::llabs(l.k));
        }
        return std::max<std::size_t>(total, 1);
      }

      static Term to_term(Word const& w) {
        std::vector<Term> factors;
        for (auto const& l : w) {
          if (l.is_const) {
            factors.push_back(Term::constant(l.c));
            continue;
          }
          Term letter = l.k > 0 ? Term::var(l.var) : Term::app(kInv, {Term::var(l.var)});
          for (std::int64_t j = 0; j < std::llabs(l.k); ++j) {
            factors.push_back(letter);
          }
        }
        return right_nest(kMul, factors, Term::app(kE, std::span<Term const>()));
      }

      // Depth-first generation of reduced words. With linear_orbits the
      // variables first appear in the order x_1, x_2, ...
      void grow(Word&              w,
                std::size_t        used,
                unsigned           n,
                std::size_t        budget,
                bool               linear_orbits,
                std::uint32_t      seen,
                std::vector<Term>& out) const {
        if (!w.empty() && (!linear_orbits || seen == n)) {
          out.push_back(to_term(w));
        }
        if (used >= budget) {
          return;
        }
        bool const after_const = !w.empty() && w.back().is_const;
        if (!after_const) {
          for (Element c = 0; c < _A->size(); ++c) {
            if (c == _e) {
              continue;
            }
            w.push_back(Letter{true, c, 0, 0});
            grow(w, used + 1, n, budget, linear_orbits, seen, out);
            w.pop_back();
          }
        }
        std::uint32_t const top = linear_orbits ? std::min<std::uint32_t>(n, seen + 1) : n;
        for (std::uint32_t i = 1; i <= top; ++i) {
          if (!w.empty() && !w.back().is_const && w.back().var == i) {
            continue;
          }
          std::uint32_t const next_seen = std::max(seen, i);
          for (std::size_t a = 1; used + a <= budget; ++a) {
            for (std::int64_t sign : {1, -1}) {
              w.push_back(Letter{false, 0, i, sign * static_cast<std::int64_t>(a)});
              grow(w, used + a, n, budget, linear_orbits, next_seen, out);
              w.pop_back();
            }
          }
        }
      }
    };
  }  // namespace

  std::shared_ptr<Canonicalizer const> make_group_canon(AlgebraPtr A) {
    return std::make_shared<GroupCanon>(std::move(A));
  }

  Term right_nest(std::uint32_t symbol, std::vector<Term> const& factors, Term const& empty) {
    if (factors.empty()) {
      return empty;
    }
    Term acc = factors.back();
    for (std::size_t j = factors.size() - 1; j-- > 0;) {
      acc = Term::app(symbol, {factors[j], acc});
    }
    return acc;
  }

  void sort_by_weight(Canonicalizer const& c, std::vector<Term>& terms) {
    std::vector<std::pair<std::size_t, Term>> keyed;
    keyed.reserve(terms.size());
    for (auto& t : terms) {
      keyed.emplace_back(c.weight(t), std::move(t));
    }
    std::sort(keyed.begin(), keyed.end());
    keyed.erase(std::unique(keyed.begin(), keyed.end()), keyed.end());
    terms.clear();
    for (auto& [w, t] : keyed) {
      terms.push_back(std::move(t));
    }
  }

}  // namespace envring::detail
