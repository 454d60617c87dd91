// SPDX-License-Identifier: Apache-2.0

#include "envring/terms.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <unordered_set>

namespace envring {

  std::string_view to_string(ErrorKind kind) noexcept {
    switch (kind) {
      case ErrorKind::ArityMismatch: return "ArityMismatch";
      case ErrorKind::UnknownSymbol: return "UnknownSymbol";
      case ErrorKind::ConstantInTerm: return "ConstantInTerm";
      case ErrorKind::NoCanonicalizer: return "NoCanonicalizer";
      case ErrorKind::IllDefinedHom: return "IllDefinedHom";
      case ErrorKind::InfiniteFiber: return "InfiniteFiber";
      case ErrorKind::NotSplit: return "NotSplit";
      case ErrorKind::NotHom: return "NotHom";
      case ErrorKind::NotCongruence: return "NotCongruence";
      case ErrorKind::NotTotallyInV: return "NotTotallyInV";
      case ErrorKind::NotWellDefined: return "NotWellDefined";
      case ErrorKind::NotStabilized: return "NotStabilized";
      case ErrorKind::MissingGenerator: return "MissingGenerator";
      case ErrorKind::NotIdeal: return "NotIdeal";
      case ErrorKind::Parse: return "Parse";
      case ErrorKind::Validation: return "Validation";
    }
    return "Unknown";
  }

  ////////////////////////////////////////////////////////////////////////
  // Signature
  ////////////////////////////////////////////////////////////////////////

  Signature::Signature(std::vector<Symbol> symbols) : _symbols(std::move(symbols)) {
    std::unordered_set<std::string> seen;
    for (auto const& s : _symbols) {
      if (s.name.empty()) {
        fail(ErrorKind::Validation, "empty symbol name");
      }
      if (!seen.insert(s.name).second) {
        fail(ErrorKind::Validation, "duplicate symbol name '" + s.name + "'");
      }
    }
  }

  std::optional<std::size_t> Signature::find(std::string_view name) const {
    for (std::size_t i = 0; i < _symbols.size(); ++i) {
      if (_symbols[i].name == name) {
        return i;
      }
    }
    return std::nullopt;
  }

  std::size_t Signature::index_of(std::string_view name) const {
    if (auto i = find(name)) {
      return *i;
    }
    fail(ErrorKind::UnknownSymbol, std::string(name));
  }

  bool operator==(Signature const& x, Signature const& y) {
    if (x.size() != y.size()) {
      return false;
    }
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (x[i].name != y[i].name || x[i].arity != y[i].arity) {
        return false;
      }
    }
    return true;
  }

  ////////////////////////////////////////////////////////////////////////
  // Term
  ////////////////////////////////////////////////////////////////////////

  Term Term::var(std::uint32_t index) {
    if (index == 0) {
      fail(ErrorKind::ArityMismatch, "variable indices start at 1");
    }
    return Term({Node{Node::Kind::Var, index, 0}});
  }

  Term Term::constant(Element c) {
    return Term({Node{Node::Kind::Const, c, 0}});
  }

  Term Term::app(std::uint32_t symbol, std::span<Term const> children) {
    std::size_t total = 1;
    for (auto const& c : children) {
      total += c.size();
    }
    std::vector<Node> nodes;
    nodes.reserve(total);
    nodes.push_back(Node{Node::Kind::App, symbol, static_cast<std::uint32_t>(children.size())});
    for (auto const& c : children) {
      nodes.insert(nodes.end(), c._nodes.begin(), c._nodes.end());
    }
    return Term(std::move(nodes));
  }

  std::size_t subtree_end(std::span<Node const> nodes, std::size_t pos) {
    std::size_t need = 1;
    while (need > 0) {
      need = need - 1 + nodes[pos].arity;
      ++pos;
    }
    return pos;
  }

  std::vector<Term> Term::children() const {
    std::vector<Term> out;
    if (_nodes.empty() || _nodes[0].kind != Node::Kind::App) {
      return out;
    }
    std::size_t pos = 1;
    for (std::uint32_t j = 0; j < _nodes[0].arity; ++j) {
      std::size_t end = subtree_end(_nodes, pos);
      out.push_back(Term(std::vector<Node>(_nodes.begin() + static_cast<std::ptrdiff_t>(pos),
                                           _nodes.begin() + static_cast<std::ptrdiff_t>(end))));
      pos = end;
    }
    return out;
  }

  std::uint32_t Term::max_var() const noexcept {
    std::uint32_t m = 0;
    for (auto const& nd : _nodes) {
      if (nd.kind == Node::Kind::Var) {
        m = std::max(m, nd.value);
      }
    }
    return m;
  }

  bool Term::has_constants() const noexcept {
    return std::any_of(_nodes.begin(), _nodes.end(), [](Node const& nd) {
      return nd.kind == Node::Kind::Const;
    });
  }

  std::size_t Term::count_var(std::uint32_t index) const noexcept {
    return static_cast<std::size_t>(
        std::count_if(_nodes.begin(), _nodes.end(), [index](Node const& nd) {
          return nd.kind == Node::Kind::Var && nd.value == index;
        }));
  }

  std::size_t Term::hash() const noexcept {
    std::uint64_t h = 1469598103934665603ULL;
    for (auto const& nd : _nodes) {
      std::uint64_t v = (static_cast<std::uint64_t>(nd.kind) << 56)
                        ^ (static_cast<std::uint64_t>(nd.arity) << 40) ^ nd.value;
      h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
      h *= 1099511628211ULL;
    }
    return static_cast<std::size_t>(h);
  }

  namespace {
    std::strong_ordering compare_at(std::span<Node const> x,
                                    std::size_t           px,
                                    std::span<Node const> y,
                                    std::size_t           py) {
      std::size_t ex = subtree_end(x, px);
      std::size_t ey = subtree_end(y, py);
      if (auto c = (ex - px) <=> (ey - py); c != 0) {
        return c;
      }
      Node const& nx = x[px];
      Node const& ny = y[py];
      if (auto c = static_cast<int>(nx.kind) <=> static_cast<int>(ny.kind); c != 0) {
        return c;
      }
      if (auto c = nx.value <=> ny.value; c != 0) {
        return c;
      }
      if (auto c = nx.arity <=> ny.arity; c != 0) {
        return c;
      }
      std::size_t cx = px + 1;
      std::size_t cy = py + 1;
      for (std::uint32_t j = 0; j < nx.arity; ++j) {
        if (auto c = compare_at(x, cx, y, cy); c != 0) {
          return c;
        }
        cx = subtree_end(x, cx);
        cy = subtree_end(y, cy);
      }
      return std::strong_ordering::equal;
    }
  }  // namespace

  std::strong_ordering operator<=>(Term const& x, Term const& y) {
    if (x.empty() || y.empty()) {
      return x.size() <=> y.size();
    }
    return compare_at(x.nodes(), 0, y.nodes(), 0);
  }

  ////////////////////////////////////////////////////////////////////////
  // FinAlgebra
  ////////////////////////////////////////////////////////////////////////

  std::size_t int_pow(std::size_t base, std::size_t exp) {
    std::size_t r = 1;
    for (std::size_t i = 0; i < exp; ++i) {
      if (base != 0 && r > (std::size_t(1) << 40) / base) {
        fail(ErrorKind::Validation, "table size overflow");
      }
      r *= base;
    }
    return r;
  }

  FinAlgebra::FinAlgebra(std::string                       name,
                         Signature                         signature,
                         std::vector<std::string>          carrier,
                         std::vector<std::vector<Element>> tables)
      : _name(std::move(name)),
        _signature(std::move(signature)),
        _carrier(std::move(carrier)),
        _tables(std::move(tables)) {
    if (_tables.size() != _signature.size()) {
      fail(ErrorKind::Validation,
           "algebra '" + _name + "' has " + std::to_string(_tables.size())
               + " tables for " + std::to_string(_signature.size()) + " symbols");
    }
    std::unordered_set<std::string> seen;
    for (auto const& c : _carrier) {
      if (!seen.insert(c).second) {
        fail(ErrorKind::Validation, "duplicate carrier name '" + c + "'");
      }
    }
    std::size_t const k = _carrier.size();
    for (std::size_t s = 0; s < _signature.size(); ++s) {
      std::size_t expect = int_pow(k, _signature[s].arity);
      if (_tables[s].size() != expect) {
        fail(ErrorKind::Validation,
             "table for '" + _signature[s].name + "' has " + std::to_string(_tables[s].size())
                 + " entries, expected " + std::to_string(expect));
      }
      for (Element v : _tables[s]) {
        if (v >= k) {
          fail(ErrorKind::Validation, "table for '" + _signature[s].name + "' leaves the carrier");
        }
      }
    }
  }

  std::optional<Element> FinAlgebra::find_element(std::string_view name) const {
    for (std::size_t i = 0; i < _carrier.size(); ++i) {
      if (_carrier[i] == name) {
        return static_cast<Element>(i);
      }
    }
    return std::nullopt;
  }

  Element FinAlgebra::apply(std::size_t symbol, std::span<Element const> args) const {
    auto const& tab = _tables.at(symbol);
    std::size_t idx = 0;
    for (Element a : args) {
      idx = idx * _carrier.size() + a;
    }
    return tab[idx];
  }

  ////////////////////////////////////////////////////////////////////////
  // Evaluation
  ////////////////////////////////////////////////////////////////////////

  void check_term(Signature const& sig, Term const& t) {
    for (auto const& nd : t.nodes()) {
      if (nd.kind != Node::Kind::App) {
        continue;
      }
      if (nd.value >= sig.size()) {
        fail(ErrorKind::UnknownSymbol, "symbol id " + std::to_string(nd.value));
      }
      if (sig[nd.value].arity != nd.arity) {
        fail(ErrorKind::UnknownSymbol,
             "symbol '" + sig[nd.value].name + "' used with arity " + std::to_string(nd.arity));
      }
    }
  }

  Element eval_with_constants(FinAlgebra const&                      A,
                              Term const&                            t,
                              std::span<Element const>               args,
                              std::function<Element(Element)> const& constant_image) {
    check_term(A.signature(), t);
    if (t.max_var() > args.size()) {
      fail(ErrorKind::ArityMismatch,
           "term uses x" + std::to_string(t.max_var()) + " but " + std::to_string(args.size())
               + " arguments were given");
    }
    return fold<Element>(
        t,
        [&](std::uint32_t i) { return args[i - 1]; },
        [&](Element c) { return constant_image(c); },
        [&](std::uint32_t s, std::span<Element> ch) { return A.apply(s, ch); });
  }

  Element eval(FinAlgebra const& A, Term const& t, std::span<Element const> args) {
    return eval_with_constants(A, t, args, [](Element c) -> Element {
      fail(ErrorKind::ConstantInTerm, "constant " + std::to_string(c) + " in a plain term");
    });
  }

  std::vector<Element> eval_all(FinAlgebra const& A, Term const& t, unsigned n) {
    check_term(A.signature(), t);
    if (t.max_var() > n) {
      fail(ErrorKind::ArityMismatch, "term arity exceeds " + std::to_string(n));
    }
    if (t.has_constants()) {
      fail(ErrorKind::ConstantInTerm, "eval_all needs a constant-free term");
    }
    std::size_t const k     = A.size();
    std::size_t const count = int_pow(k, n);
    using Column            = std::vector<Element>;
    return fold<Column>(
        t,
        [&](std::uint32_t i) {
          Column      col(count);
          std::size_t stride = int_pow(k, n - i);
          for (std::size_t r = 0; r < count; ++r) {
            col[r] = static_cast<Element>((r / stride) % k);
          }
          return col;
        },
        [&](Element) { return Column(); },
        [&](std::uint32_t s, std::span<Column> ch) {
          Column      out(count);
          auto const& tab = A.table(s);
          for (std::size_t r = 0; r < count; ++r) {
            std::size_t idx = 0;
            for (auto const& c : ch) {
              idx = idx * k + c[r];
            }
            out[r] = tab[idx];
          }
          return out;
        });
  }

  Term compose_terms(Term const& outer, std::span<Term const> inner) {
    if (outer.max_var() > inner.size()) {
      fail(ErrorKind::ArityMismatch,
           "outer term uses x" + std::to_string(outer.max_var()) + " but only "
               + std::to_string(inner.size()) + " terms were supplied");
    }
    return fold<Term>(
        outer,
        [&](std::uint32_t i) { return inner[i - 1]; },
        [](Element c) { return Term::constant(c); },
        [](std::uint32_t s, std::span<Term> ch) { return Term::app(s, ch); });
  }

  std::optional<std::vector<Element>> counterexample(FinAlgebra const& A, Identity const& id) {
    auto const lhs = eval_all(A, id.lhs, id.arity);
    auto const rhs = eval_all(A, id.rhs, id.arity);
    for (std::size_t r = 0; r < lhs.size(); ++r) {
      if (lhs[r] != rhs[r]) {
        std::vector<Element> tuple(id.arity);
        std::size_t          rem = r;
        for (std::size_t j = id.arity; j-- > 0;) {
          tuple[j] = static_cast<Element>(rem % A.size());
          rem /= A.size();
        }
        return tuple;
      }
    }
    return std::nullopt;
  }

  bool satisfies(FinAlgebra const& A, Identity const& id) {
    return !counterexample(A, id).has_value();
  }

  bool is_congruence_labels(FinAlgebra const& A, std::vector<std::uint32_t> const& labels) {
    std::size_t const k = A.size();
    if (labels.size() != k) {
      fail(ErrorKind::Validation, "partition does not cover the carrier");
    }
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      unsigned const n = A.signature()[s].arity;
      if (n == 0) {
        continue;
      }
      std::size_t const    count = int_pow(k, n);
      std::vector<Element> args(n);
      for (std::size_t r = 0; r < count; ++r) {
        std::size_t rem = r;
        for (std::size_t j = n; j-- > 0;) {
          args[j] = static_cast<Element>(rem % k);
          rem /= k;
        }
        Element const base = A.apply(s, args);
        // Changing one argument within its block must stay within a block.
        for (unsigned j = 0; j < n; ++j) {
          Element const keep = args[j];
          for (Element b = 0; b < k; ++b) {
            if (b == keep || labels[b] != labels[keep]) {
              continue;
            }
            args[j] = b;
            if (labels[A.apply(s, args)] != labels[base]) {
              return false;
            }
          }
          args[j] = keep;
        }
      }
    }
    return true;
  }

  bool is_congruence(FinAlgebra const& A, std::vector<std::vector<Element>> const& blocks) {
    std::vector<std::uint32_t> labels(A.size(), UINT32_MAX);
    for (std::size_t b = 0; b < blocks.size(); ++b) {
      for (Element a : blocks[b]) {
        if (a >= A.size() || labels[a] != UINT32_MAX) {
          fail(ErrorKind::Validation, "blocks are not a partition of the carrier");
        }
        labels[a] = static_cast<std::uint32_t>(b);
      }
    }
    if (std::find(labels.begin(), labels.end(), UINT32_MAX) != labels.end()) {
      fail(ErrorKind::Validation, "partition does not cover the carrier");
    }
    return is_congruence_labels(A, labels);
  }

  ////////////////////////////////////////////////////////////////////////
  // Enumeration
  ////////////////////////////////////////////////////////////////////////

  namespace {
    void extend_children(std::vector<std::vector<Term>> const& by_size,
                         std::uint32_t                         symbol,
                         unsigned                              arity,
                         std::size_t                           remaining,
                         std::vector<Term>&                    chosen,
                         std::vector<Term>&                    out) {
      std::size_t const left = arity - chosen.size();
      if (left == 0) {
        if (remaining == 0) {
          out.push_back(Term::app(symbol, chosen));
        }
        return;
      }
      // Each later child needs at least one node.
      for (std::size_t s = 1; s + (left - 1) <= remaining; ++s) {
        if (left == 1 && s != remaining) {
          continue;
        }
        for (auto const& t : by_size[s]) {
          chosen.push_back(t);
          extend_children(by_size, symbol, arity, remaining - s, chosen, out);
          chosen.pop_back();
        }
      }
    }
  }  // namespace

  std::vector<Term> enumerate_terms(Signature const& sig, unsigned n, std::size_t max_size) {
    std::vector<std::vector<Term>> by_size(max_size + 1);
    if (max_size >= 1) {
      for (std::uint32_t i = 1; i <= n; ++i) {
        by_size[1].push_back(Term::var(i));
      }
      for (std::size_t s = 0; s < sig.size(); ++s) {
        if (sig[s].arity == 0) {
          by_size[1].push_back(Term::app(static_cast<std::uint32_t>(s), {}));
        }
      }
    }
    for (std::size_t size = 2; size <= max_size; ++size) {
      for (std::size_t s = 0; s < sig.size(); ++s) {
        unsigned const arity = sig[s].arity;
        if (arity == 0 || arity > size - 1) {
          continue;
        }
        std::vector<Term> chosen;
        extend_children(by_size, static_cast<std::uint32_t>(s), arity, size - 1, chosen, by_size[size]);
      }
    }
    std::vector<Term> out;
    for (auto& bucket : by_size) {
      out.insert(out.end(), std::make_move_iterator(bucket.begin()), std::make_move_iterator(bucket.end()));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Printing
  ////////////////////////////////////////////////////////////////////////

  std::string to_string(Term const&                     t,
                        Signature const&                sig,
                        std::vector<std::string> const* constant_names) {
    struct Piece {
      std::string text;
      int         precedence;
    };
    Piece p = fold<Piece>(
        t,
        [](std::uint32_t i) { return Piece{"x" + std::to_string(i), 100}; },
        [&](Element c) {
          if (constant_names != nullptr && c < constant_names->size()) {
            return Piece{(*constant_names)[c], 100};
          }
          return Piece{"c" + std::to_string(c), 100};
        },
        [&](std::uint32_t s, std::span<Piece> ch) {
          Symbol const& sym = sig[s];
          if (ch.empty()) {
            return Piece{sym.name, 100};
          }
          if (ch.size() == 2 && !sym.infix.empty()) {
            // Right-nested chains print without parentheses.
            std::string lhs = ch[0].precedence <= sym.precedence ? "(" + ch[0].text + ")" : ch[0].text;
            std::string rhs = ch[1].precedence < sym.precedence ? "(" + ch[1].text + ")" : ch[1].text;
            return Piece{lhs + sym.infix + rhs, sym.precedence};
          }
          std::string out = sym.name + "(";
          for (std::size_t j = 0; j < ch.size(); ++j) {
            out += (j ? "," : "") + ch[j].text;
          }
          return Piece{out + ")", 100};
        });
    return p.text;
  }

}  // namespace envring
