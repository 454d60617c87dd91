// SPDX-License-Identifier: Apache-2.0
//
// Signatures, terms, finite algebras and term evaluation.
//
// A Term is stored as a flat preorder node list. Application nodes carry
// their arity so a term can be walked without consulting its signature;
// symbol ids index into whatever Signature the term is interpreted against.

#ifndef ENVRING_TERMS_HPP_
#define ENVRING_TERMS_HPP_

#include <algorithm>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "envring/error.hpp"

namespace envring {

  using Element = std::uint32_t;

  struct Symbol {
    std::string name;
    unsigned    arity = 0;
    // Binary symbols may be written infix by the expression parser.
    std::string infix      = {};
    int         precedence = 0;
  };

  class Signature {
   public:
    Signature() = default;
    explicit Signature(std::vector<Symbol> symbols);

    std::size_t size() const noexcept {
      return _symbols.size();
    }

    Symbol const& operator[](std::size_t i) const {
      return _symbols.at(i);
    }

    std::vector<Symbol> const& symbols() const noexcept {
      return _symbols;
    }

    std::optional<std::size_t> find(std::string_view name) const;

    // Throws UnknownSymbol.
    std::size_t index_of(std::string_view name) const;

    // Same names and arities, in the same order.
    friend bool operator==(Signature const& x, Signature const& y);

   private:
    std::vector<Symbol> _symbols;
  };

  struct Node {
    enum class Kind : std::uint8_t { Var = 0, Const = 1, App = 2 };
    Kind          kind  = Kind::Var;
    std::uint32_t value = 0;  // variable index (1-based), element, or symbol
    std::uint32_t arity = 0;  // App only

    friend bool operator==(Node const&, Node const&) = default;
  };

  class Term {
   public:
    Term() = default;

    static Term var(std::uint32_t index);
    static Term constant(Element c);
    static Term app(std::uint32_t symbol, std::span<Term const> children);
    static Term app(std::uint32_t symbol, std::initializer_list<Term> children) {
      return app(symbol, std::span<Term const>(children.begin(), children.size()));
    }

    std::span<Node const> nodes() const noexcept {
      return _nodes;
    }

    // Node count; variables and constants count one each.
    std::size_t size() const noexcept {
      return _nodes.size();
    }

    bool empty() const noexcept {
      return _nodes.empty();
    }

    Node const& root() const {
      return _nodes.front();
    }

    bool is_var() const {
      return root().kind == Node::Kind::Var;
    }
    bool is_const() const {
      return root().kind == Node::Kind::Const;
    }
    bool is_app() const {
      return root().kind == Node::Kind::App;
    }

    std::vector<Term> children() const;

    // Largest variable index occurring, 0 if none.
    std::uint32_t max_var() const noexcept;
    bool          has_constants() const noexcept;
    std::size_t   count_var(std::uint32_t index) const noexcept;

    std::size_t hash() const noexcept;

    friend bool operator==(Term const&, Term const&) = default;
    // Total order used everywhere for determinism: by size, then head
    // (variables by index < constants by id < applications by symbol), then
    // children left to right under the same order.
    friend std::strong_ordering operator<=>(Term const& x, Term const& y);

   private:
    explicit Term(std::vector<Node> nodes) : _nodes(std::move(nodes)) {}
    std::vector<Node> _nodes;
  };

  struct TermHash {
    std::size_t operator()(Term const& t) const noexcept {
      return t.hash();
    }
  };

  // Index one past the subtree rooted at `pos`.
  std::size_t subtree_end(std::span<Node const> nodes, std::size_t pos);

  // Structural recursion over a term. `app` receives the symbol id and the
  // already-folded children in order.
  template <typename T, typename VarF, typename ConstF, typename AppF>
  T fold(Term const& t, VarF&& on_var, ConstF&& on_const, AppF&& on_app) {
    auto const     nodes = t.nodes();
    std::vector<T> stack;
    stack.reserve(nodes.size());
    for (std::size_t p = nodes.size(); p-- > 0;) {
      Node const& nd = nodes[p];
      switch (nd.kind) {
        case Node::Kind::Var:
          stack.push_back(on_var(nd.value));
          break;
        case Node::Kind::Const:
          stack.push_back(on_const(static_cast<Element>(nd.value)));
          break;
        case Node::Kind::App: {
          std::size_t const k    = nd.arity;
          std::size_t const base = stack.size() - k;
          std::reverse(stack.begin() + static_cast<std::ptrdiff_t>(base), stack.end());
          T value = on_app(nd.value, std::span<T>(stack.data() + base, k));
          stack.resize(base);
          stack.push_back(std::move(value));
          break;
        }
      }
    }
    return std::move(stack.back());
  }

  class FinAlgebra {
   public:
    FinAlgebra() = default;
    // Tables are flattened row-major, first argument most significant.
    // Throws Validation on a malformed table.
    FinAlgebra(std::string                     name,
               Signature                       signature,
               std::vector<std::string>        carrier,
               std::vector<std::vector<Element>> tables);

    std::string const& name() const noexcept {
      return _name;
    }
    Signature const& signature() const noexcept {
      return _signature;
    }
    std::size_t size() const noexcept {
      return _carrier.size();
    }
    std::vector<std::string> const& carrier() const noexcept {
      return _carrier;
    }
    std::string const& element_name(Element a) const {
      return _carrier.at(a);
    }
    std::optional<Element> find_element(std::string_view name) const;

    std::vector<Element> const& table(std::size_t symbol) const {
      return _tables.at(symbol);
    }
    std::vector<std::vector<Element>> const& tables() const noexcept {
      return _tables;
    }

    Element apply(std::size_t symbol, std::span<Element const> args) const;
    Element apply(std::size_t symbol, std::initializer_list<Element> args) const {
      return apply(symbol, std::span<Element const>(args.begin(), args.size()));
    }

    friend bool operator==(FinAlgebra const&, FinAlgebra const&) = default;

   private:
    std::string                       _name;
    Signature                         _signature;
    std::vector<std::string>          _carrier;
    std::vector<std::vector<Element>> _tables;
  };

  using AlgebraPtr = std::shared_ptr<FinAlgebra const>;

  // Checked power for table sizes.
  std::size_t int_pow(std::size_t base, std::size_t exp);

  // t^A(args). Throws ArityMismatch, UnknownSymbol, ConstantInTerm.
  Element eval(FinAlgebra const& A, Term const& t, std::span<Element const> args);
  inline Element eval(FinAlgebra const& A, Term const& t, std::initializer_list<Element> args) {
    return eval(A, t, std::span<Element const>(args.begin(), args.size()));
  }

  // Evaluation where constant leaves are sent through `constant_image`.
  Element eval_with_constants(FinAlgebra const&                     A,
                              Term const&                           t,
                              std::span<Element const>              args,
                              std::function<Element(Element)> const& constant_image);

  // Values of t over every tuple of A^n, tuples in mixed-radix order with the
  // first coordinate most significant.
  std::vector<Element> eval_all(FinAlgebra const& A, Term const& t, unsigned n);

  // Checks that the symbols and arities in t exist in sig.
  void check_term(Signature const& sig, Term const& t);

  // t' with x_i replaced by ts[i-1]. Throws ArityMismatch.
  Term compose_terms(Term const& outer, std::span<Term const> inner);
  inline Term compose_terms(Term const& outer, std::initializer_list<Term> inner) {
    return compose_terms(outer, std::span<Term const>(inner.begin(), inner.size()));
  }

  struct Identity {
    Term     lhs;
    Term     rhs;
    unsigned arity = 0;
  };

  bool satisfies(FinAlgebra const& A, Identity const& id);
  std::optional<std::vector<Element>> counterexample(FinAlgebra const& A,
                                                     Identity const&   id);

  // Partition given as blocks; must cover the carrier.
  bool is_congruence(FinAlgebra const& A, std::vector<std::vector<Element>> const& blocks);
  // Partition given as a block label per element.
  bool is_congruence_labels(FinAlgebra const& A, std::vector<std::uint32_t> const& labels);

  // Every constant-free term over sig in variables x_1..x_n with at most
  // max_size nodes, in the Term order.
  std::vector<Term> enumerate_terms(Signature const& sig, unsigned n, std::size_t max_size);

  // Plain-text rendering, prefix form with infix for symbols that declare it.
  std::string to_string(Term const&                     t,
                        Signature const&                sig,
                        std::vector<std::string> const* constant_names = nullptr);

}  // namespace envring

#endif  // ENVRING_TERMS_HPP_
