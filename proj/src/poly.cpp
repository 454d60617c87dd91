// SPDX-License-Identifier: Apache-2.0

#include "envring/poly.hpp"

#include <algorithm>
#include <cctype>

namespace envring {

  namespace {
    bool is_ident_char(char c) {
      return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
    }

    bool is_variable_name(std::string_view s) {
      return s.size() >= 2 && s[0] == 'x'
          && std::all_of(s.begin() + 1, s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })
          && s[1] != '0';
    }

    class Parser {
     public:
      Parser(std::string_view text, Signature const& sig, std::vector<std::string> const& carrier)
          : _text(text), _sig(sig), _carrier(carrier) {}

      Term run() {
        Term t = expr(0);
        skip();
        if (_pos != _text.size()) {
          error("unexpected '" + std::string(_text.substr(_pos, 1)) + "'");
        }
        return t;
      }

     private:
      [[noreturn]] void error(std::string const& what) const {
        fail(ErrorKind::Parse, what + " at offset " + std::to_string(_pos) + " in '" + std::string(_text) + "'");
      }

      void skip() {
        while (_pos < _text.size() && std::isspace(static_cast<unsigned char>(_text[_pos]))) {
          ++_pos;
        }
      }

      bool eat(char c) {
        skip();
        if (_pos < _text.size() && _text[_pos] == c) {
          ++_pos;
          return true;
        }
        return false;
      }

      // The binary infix symbol starting here with the longest operator text.
      std::optional<std::size_t> infix_here() {
        skip();
        std::optional<std::size_t> best;
        for (std::size_t s = 0; s < _sig.size(); ++s) {
          auto const& sym = _sig[s];
          if (sym.arity == 2 && !sym.infix.empty() && _text.substr(_pos, sym.infix.size()) == sym.infix
              && (!best || _sig[*best].infix.size() < sym.infix.size())) {
            best = s;
          }
        }
        return best;
      }

      Term expr(int min_prec) {
        Term lhs = primary();
        while (true) {
          auto s = infix_here();
          if (!s || _sig[*s].precedence < min_prec) {
            return lhs;
          }
          _pos += _sig[*s].infix.size();
          // Right-nested: the right operand may contain the same operator.
          Term rhs = expr(_sig[*s].precedence);
          lhs      = Term::app(static_cast<std::uint32_t>(*s), {lhs, rhs});
        }
      }

      Term primary() {
        skip();
        if (eat('(')) {
          Term t = expr(0);
          if (!eat(')')) {
            error("expected ')'");
          }
          return t;
        }
        if (eat('[')) {
          auto const close = _text.find(']', _pos);
          if (close == std::string_view::npos) {
            error("unterminated '['");
          }
          std::string const name(_text.substr(_pos, close - _pos));
          _pos = close + 1;
          return constant(name);
        }
        std::size_t const start = _pos;
        while (_pos < _text.size() && is_ident_char(_text[_pos])) {
          ++_pos;
        }
        if (start == _pos) {
          error(_pos < _text.size() ? "unexpected '" + std::string(1, _text[_pos]) + "'" : "unexpected end");
        }
        std::string const name(_text.substr(start, _pos - start));
        if (is_variable_name(name)) {
          return Term::var(static_cast<std::uint32_t>(std::stoul(name.substr(1))));
        }
        if (auto s = _sig.find(name)) {
          unsigned const n = _sig[*s].arity;
          if (n == 0) {
            if (eat('(') && !eat(')')) {
              error("nullary '" + name + "' takes no arguments");
            }
            return Term::app(static_cast<std::uint32_t>(*s), std::span<Term const>());
          }
          if (!eat('(')) {
            error("expected '(' after '" + name + "'");
          }
          std::vector<Term> args;
          do {
            args.push_back(expr(0));
          } while (eat(','));
          if (!eat(')')) {
            error("expected ')'");
          }
          if (args.size() != n) {
            fail(ErrorKind::ArityMismatch, "'" + name + "' applied to " + std::to_string(args.size())
                                               + " arguments, expects " + std::to_string(n));
          }
          return Term::app(static_cast<std::uint32_t>(*s), args);
        }
        return constant(name);
      }

      Term constant(std::string const& name) {
        auto it = std::find(_carrier.begin(), _carrier.end(), name);
        if (it == _carrier.end()) {
          error("unknown name '" + name + "'");
        }
        return Term::constant(static_cast<Element>(it - _carrier.begin()));
      }

      std::string_view                _text;
      Signature const&                _sig;
      std::vector<std::string> const& _carrier;
      std::size_t                     _pos = 0;
    };
  }  // namespace

  Term parse_term(std::string_view text, Signature const& sig, std::vector<std::string> const& carrier) {
    return Parser(text, sig, carrier).run();
  }

  std::string print_term(Term const& t, Signature const& sig, std::vector<std::string> const& carrier) {
    std::vector<std::string> names;
    for (auto const& c : carrier) {
      bool const plain = !c.empty() && std::all_of(c.begin(), c.end(), is_ident_char) && !is_variable_name(c)
                      && !sig.find(c);
      names.push_back(plain ? c : "[" + c + "]");
    }
    return to_string(t, sig, &names);
  }

  ////////////////////////////////////////////////////////////////////////
  // PolyClone
  ////////////////////////////////////////////////////////////////////////

  PolyClone::PolyClone(Variety V, AlgebraPtr A)
      : _V(std::move(V)), _A(std::move(A)), _canon(make_canonicalizer(_V, _A)) {}

  Polynomial PolyClone::make(Term const& t, unsigned arity) const {
    check_term(_A->signature(), t);
    if (t.max_var() > arity) {
      fail(ErrorKind::ArityMismatch, "polynomial uses x" + std::to_string(t.max_var()) + " but has arity "
                                         + std::to_string(arity));
    }
    for (auto const& node : t.nodes()) {
      if (node.kind == Node::Kind::Const && node.value >= _A->size()) {
        fail(ErrorKind::Validation, "constant outside the coefficient algebra");
      }
    }
    return {arity, _canon->canon(t)};
  }

  Polynomial PolyClone::projection(unsigned i, unsigned arity) const {
    return make(Term::var(i), arity);
  }

  Polynomial PolyClone::constant(Element c, unsigned arity) const {
    return make(Term::constant(c), arity);
  }

  Polynomial PolyClone::parse(std::string_view text, unsigned arity) const {
    return make(parse_term(text, _A->signature(), _A->carrier()), arity);
  }

  std::string PolyClone::print(Polynomial const& p) const {
    return print_term(p.body, _A->signature(), _A->carrier());
  }

  std::size_t PolyClone::weight(Polynomial const& p) const {
    return _canon->weight(p.body);
  }

  Polynomial PolyClone::compose(Polynomial const& outer, std::vector<Polynomial> const& inner) const {
    if (inner.size() != outer.arity) {
      fail(ErrorKind::ArityMismatch, "composition needs " + std::to_string(outer.arity) + " inner polynomials");
    }
    unsigned const n = inner.empty() ? 0 : inner.front().arity;
    std::vector<Term> bodies;
    for (auto const& p : inner) {
      if (p.arity != n) {
        fail(ErrorKind::ArityMismatch, "inner polynomials must share one arity");
      }
      bodies.push_back(p.body);
    }
    return {n, _canon->canon(compose_terms(outer.body, bodies))};
  }

  Element PolyClone::eval(Polynomial const& p, std::span<Element const> args) const {
    if (args.size() != p.arity) {
      fail(ErrorKind::ArityMismatch, "evaluation needs " + std::to_string(p.arity) + " arguments");
    }
    return eval_with_constants(*_A, p.body, args, [](Element c) { return c; });
  }

  Element PolyClone::eval(Polynomial const& p, FinAlgebra const& B, std::vector<Element> const& f,
                          std::span<Element const> args) const {
    bool const in_range = std::all_of(f.begin(), f.end(), [&](Element v) { return v < B.size(); });
    if (!(B.signature() == _A->signature()) || f.size() != _A->size() || !in_range) {
      fail(ErrorKind::NotHom, "map is not a homomorphism from " + _A->name() + " to " + B.name());
    }
    for (std::size_t s = 0; s < B.signature().size(); ++s) {
      unsigned const n = B.signature()[s].arity;
      for (auto const& a : all_tuples(_A->size(), n)) {
        Tuple img(n);
        for (unsigned j = 0; j < n; ++j) {
          img[j] = f[a[j]];
        }
        if (f[_A->apply(s, a)] != B.apply(s, img)) {
          fail(ErrorKind::NotHom, "map is not a homomorphism from " + _A->name() + " to " + B.name());
        }
      }
    }
    if (args.size() != p.arity) {
      fail(ErrorKind::ArityMismatch, "evaluation needs " + std::to_string(p.arity) + " arguments");
    }
    return eval_with_constants(B, p.body, args, [&](Element c) { return f[c]; });
  }

  ////////////////////////////////////////////////////////////////////////
  // Actions
  ////////////////////////////////////////////////////////////////////////

  PointedOveralg::Point poly_act(Polynomial const&                       p,
                                 TotallyIn<PointedOveralg> const&        P,
                                 std::span<Element const>                a,
                                 std::span<PointedOveralg::Point const> pts) {
    if (a.size() != p.arity || pts.size() != p.arity) {
      fail(ErrorKind::ArityMismatch, "action needs " + std::to_string(p.arity) + " arguments");
    }
    return t_action(P.get(), p.body, a, pts);
  }

  ModuleAction::ModuleAction(TotallyIn<AModule> M) : _M(std::move(M)) {}

  Vec ModuleAction::act(Polynomial const& p, std::span<Element const> a, std::vector<Vec> const& m) const {
    if (a.size() != p.arity || m.size() != p.arity) {
      fail(ErrorKind::ArityMismatch, "action needs " + std::to_string(p.arity) + " arguments");
    }
    return t_action(_M.get(), p.body, a, m);
  }

  Matrix const& ModuleAction::unary(Polynomial const& p, Element b) const {
    if (p.arity != 1) {
      fail(ErrorKind::ArityMismatch, "unary part of a polynomial of arity " + std::to_string(p.arity));
    }
    std::lock_guard<std::mutex> guard(_lock);
    auto key = std::make_pair(p.body, b);
    auto it  = _cache.find(key);
    if (it == _cache.end()) {
      Element const one[] = {b};
      it = _cache.emplace(std::move(key), t_part(_M.get(), p.body, one, 0)).first;
    }
    return it->second;
  }

  ZHom ModuleAction::unary_hom(Polynomial const& p, Element b) const {
    Element const one[] = {b};
    Element const target =
        eval_with_constants(*_M->base(), p.body, one, [](Element c) { return c; });
    return ZHom(_M->fiber(b), _M->fiber(target), unary(p, b));
  }

}  // namespace envring
