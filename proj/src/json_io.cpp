// SPDX-License-Identifier: Apache-2.0

#include "envring/json_io.hpp"

#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

namespace envring {

  namespace {

    [[noreturn]] void parse_fail(std::string const& what) {
      fail(ErrorKind::Parse, what);
    }

    Json const& field(Json const& j, char const* key, std::string const& where) {
      if (!j.is_object() || !j.contains(key)) {
        parse_fail(where + ": missing \"" + key + "\"");
      }
      return j.at(key);
    }

    std::string get_string(Json const& j, std::string const& where) {
      if (!j.is_string()) {
        parse_fail(where + ": expected a string");
      }
      return j.get<std::string>();
    }

    std::size_t get_size(Json const& j, std::string const& where) {
      if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() >= 0)) {
        parse_fail(where + ": expected a natural number");
      }
      return j.get<std::size_t>();
    }

    // Element given by name, or by index when an integer.
    template <typename Lookup>
    std::uint32_t name_or_index(Json const& j, std::size_t size, Lookup&& lookup, std::string const& where) {
      if (j.is_number_integer()) {
        auto const i = j.get<std::int64_t>();
        if (i < 0 || static_cast<std::size_t>(i) >= size) {
          fail(ErrorKind::Validation, where + ": index " + std::to_string(i) + " out of range");
        }
        return static_cast<std::uint32_t>(i);
      }
      std::string const name = get_string(j, where);
      auto const        r    = lookup(name);
      if (!r) {
        fail(ErrorKind::Validation, where + ": unknown element \"" + name + "\"");
      }
      return *r;
    }

    // Nested arrays with the given dimensions, first outermost, flattened
    // row-major.
    template <typename Leaf>
    void flatten(Json const& j, std::span<std::size_t const> dims, Leaf&& leaf, std::string const& where) {
      if (dims.empty()) {
        leaf(j);
        return;
      }
      if (!j.is_array() || j.size() != dims[0]) {
        fail(ErrorKind::Validation, where + ": expected an array of length " + std::to_string(dims[0]));
      }
      for (auto const& x : j) {
        flatten(x, dims.subspan(1), leaf, where);
      }
    }

    template <typename Leaf>
    Json nest(std::span<std::size_t const> dims, std::size_t& pos, Leaf&& leaf) {
      if (dims.empty()) {
        return leaf(pos++);
      }
      Json out = Json::array();
      for (std::size_t i = 0; i < dims[0]; ++i) {
        out.push_back(nest(dims.subspan(1), pos, leaf));
      }
      return out;
    }

    std::string tuple_key(FinAlgebra const& A, std::span<Element const> a) {
      std::string key;
      for (std::size_t i = 0; i < a.size(); ++i) {
        key += (i ? "," : "") + A.element_name(a[i]);
      }
      return key;
    }

    Json signature_to_json(Signature const& sig) {
      Json out = Json::array();
      for (auto const& s : sig.symbols()) {
        Json e = {{"symbol", s.name}, {"arity", s.arity}};
        if (!s.infix.empty()) {
          e["infix"]      = s.infix;
          e["precedence"] = s.precedence;
        }
        out.push_back(std::move(e));
      }
      return out;
    }

    Signature signature_from_json(Json const& j) {
      if (!j.is_array()) {
        parse_fail("signature: expected an array");
      }
      std::vector<Symbol> symbols;
      for (auto const& e : j) {
        Symbol s;
        s.name  = get_string(field(e, "symbol", "signature"), "signature symbol");
        s.arity = static_cast<unsigned>(get_size(field(e, "arity", "signature"), "signature arity"));
        if (e.contains("infix")) {
          s.infix      = get_string(e.at("infix"), "signature infix");
          s.precedence = e.value("precedence", 0);
        }
        symbols.push_back(std::move(s));
      }
      return Signature(std::move(symbols));
    }

    Json lattice_rows(Lattice const& l) {
      Json out = Json::array();
      for (auto const& v : l.basis()) {
        out.push_back(vec_to_json(v));
      }
      return out;
    }

    Element element_of(FinAlgebra const& A, std::string const& name, std::string const& where) {
      auto const e = A.find_element(name);
      if (!e) {
        fail(ErrorKind::Validation, where + ": unknown element \"" + name + "\"");
      }
      return *e;
    }

    // Splits "a1,...,an" into base elements; "" is the empty tuple.
    Tuple parse_key(FinAlgebra const& A, std::string const& key, unsigned arity, std::string const& where) {
      Tuple out;
      if (!key.empty()) {
        std::stringstream ss(key);
        std::string       part;
        while (std::getline(ss, part, ',')) {
          out.push_back(element_of(A, part, where));
        }
      }
      if (out.size() != arity) {
        fail(ErrorKind::Validation, where + ": tuple \"" + key + "\" has the wrong length");
      }
      return out;
    }

  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Files and numbers
  ////////////////////////////////////////////////////////////////////////

  Json read_json_file(std::string const& path) {
    std::ifstream in(path);
    if (!in) {
      parse_fail("cannot open " + path);
    }
    try {
      return Json::parse(in);
    } catch (nlohmann::json::exception const& e) {
      parse_fail(path + ": " + e.what());
    }
  }

  void write_json_file(std::string const& path, Json const& j) {
    std::ofstream out(path);
    if (!out) {
      fail(ErrorKind::Validation, "cannot write " + path);
    }
    out << j.dump(2) << '\n';
  }

  Json int_to_json(Int const& x) {
    if (x >= std::numeric_limits<std::int64_t>::min() && x <= std::numeric_limits<std::int64_t>::max()) {
      return static_cast<std::int64_t>(x);
    }
    return x.str();
  }

  Int int_from_json(Json const& j) {
    if (j.is_number_integer()) {
      return Int(j.get<std::int64_t>());
    }
    if (j.is_string()) {
      try {
        return Int(j.get<std::string>());
      } catch (std::exception const&) {
        parse_fail("bad integer \"" + j.get<std::string>() + "\"");
      }
    }
    parse_fail("expected an integer");
  }

  Json vec_to_json(Vec const& v) {
    Json out = Json::array();
    for (auto const& x : v) {
      out.push_back(int_to_json(x));
    }
    return out;
  }

  Vec vec_from_json(Json const& j) {
    if (!j.is_array()) {
      parse_fail("expected an integer array");
    }
    Vec out;
    for (auto const& x : j) {
      out.push_back(int_from_json(x));
    }
    return out;
  }

  Json matrix_to_json(Matrix const& m) {
    Json out = Json::array();
    for (std::size_t i = 0; i < m.rows(); ++i) {
      out.push_back(vec_to_json(m.row(i)));
    }
    return out;
  }

  Matrix matrix_from_json(Json const& j, std::size_t rows, std::size_t cols) {
    if (!j.is_array() || j.size() != rows) {
      fail(ErrorKind::Validation, "matrix: expected " + std::to_string(rows) + " rows");
    }
    Matrix m(rows, cols);
    for (std::size_t i = 0; i < rows; ++i) {
      Vec const r = vec_from_json(j[i]);
      if (r.size() != cols) {
        fail(ErrorKind::Validation, "matrix: expected " + std::to_string(cols) + " columns");
      }
      for (std::size_t c = 0; c < cols; ++c) {
        m(i, c) = r[c];
      }
    }
    return m;
  }

  Json iso_type_to_json(IsoType const& t) {
    Json tor = Json::array();
    for (auto const& d : t.torsion) {
      tor.push_back(int_to_json(d));
    }
    return {{"free_rank", t.free_rank}, {"torsion", tor}};
  }

  Json group_to_json(FGAbGroup const& g) {
    return {{"rank", g.rank()}, {"relations", lattice_rows(g.relation_lattice())}, {"iso_type", iso_type_to_json(g.iso_type())}};
  }

  FGAbGroup group_from_json(Json const& j) {
    if (j.is_object() && j.contains("orders")) {
      return FGAbGroup::cyclic_sum(vec_from_json(j.at("orders")));
    }
    std::size_t const n = get_size(field(j, "rank", "group"), "group rank");
    std::vector<Vec>  rel;
    if (j.contains("relations")) {
      for (auto const& r : j.at("relations")) {
        rel.push_back(vec_from_json(r));
        if (rel.back().size() != n) {
          fail(ErrorKind::Validation, "group: relation of the wrong length");
        }
      }
    }
    return FGAbGroup(n, rel);
  }

  ////////////////////////////////////////////////////////////////////////
  // Algebras and varieties
  ////////////////////////////////////////////////////////////////////////

  AlgebraPtr algebra_from_json(Json const& j, Variety const* V) {
    if (!j.is_object()) {
      parse_fail("algebra: expected an object");
    }
    std::string const name = j.contains("name") ? get_string(j.at("name"), "algebra name") : "A";
    Signature         sig;
    if (V) {
      sig = V->signature();
      if (j.contains("signature")) {
        Signature const given = signature_from_json(j.at("signature"));
        for (auto const& s : given.symbols()) {
          auto const i = sig.find(s.name);
          if (!i || sig[*i].arity != s.arity) {
            fail(ErrorKind::Validation, "algebra " + name + ": symbol " + s.name + " is not in the signature of " + V->name());
          }
        }
        if (given.size() != sig.size()) {
          fail(ErrorKind::Validation, "algebra " + name + ": signature differs from " + V->name());
        }
      }
    } else {
      sig = signature_from_json(field(j, "signature", "algebra"));
    }
    Json const& carrier_j = field(j, "carrier", "algebra");
    if (!carrier_j.is_array()) {
      parse_fail("algebra carrier: expected an array");
    }
    std::vector<std::string> carrier;
    for (auto const& c : carrier_j) {
      carrier.push_back(get_string(c, "carrier"));
    }
    std::size_t const k = carrier.size();
    auto lookup = [&carrier](std::string const& n) -> std::optional<std::uint32_t> {
      for (std::size_t i = 0; i < carrier.size(); ++i) {
        if (carrier[i] == n) {
          return static_cast<std::uint32_t>(i);
        }
      }
      return std::nullopt;
    };
    Json const&                       tables_j = field(j, "tables", "algebra");
    std::vector<std::vector<Element>> tables;
    for (auto const& s : sig.symbols()) {
      if (!tables_j.contains(s.name)) {
        fail(ErrorKind::Validation, "algebra " + name + ": no table for " + s.name);
      }
      std::vector<std::size_t> dims(s.arity, k);
      std::vector<Element>     t;
      std::string const        where = "table " + s.name;
      flatten(tables_j.at(s.name), dims, [&](Json const& x) { t.push_back(name_or_index(x, k, lookup, where)); }, where);
      tables.push_back(std::move(t));
    }
    if (tables_j.size() != sig.size()) {
      fail(ErrorKind::Validation, "algebra " + name + ": tables for symbols outside the signature");
    }
    return std::make_shared<FinAlgebra const>(name, sig, std::move(carrier), std::move(tables));
  }

  Json algebra_to_json(FinAlgebra const& A) {
    Json tables = Json::object();
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      std::vector<std::size_t> dims(A.signature()[s].arity, A.size());
      std::size_t              pos = 0;
      tables[A.signature()[s].name] =
          nest(dims, pos, [&](std::size_t i) { return Json(A.element_name(A.table(s)[i])); });
    }
    return {{"name", A.name()}, {"signature", signature_to_json(A.signature())}, {"carrier", A.carrier()}, {"tables", tables}};
  }

  Variety variety_from_json(Json const& j) {
    if (j.is_string()) {
      try {
        return Variety::by_name(j.get<std::string>());
      } catch (Error const& e) {
        parse_fail(e.what());
      }
    }
    std::string const     name = j.contains("name") ? get_string(j.at("name"), "variety name") : "V";
    Signature const       sig  = signature_from_json(field(j, "signature", "variety"));
    std::vector<Identity> ids;
    if (j.contains("identities")) {
      for (auto const& e : j.at("identities")) {
        Identity id;
        id.lhs   = parse_term(get_string(field(e, "lhs", "identity"), "identity lhs"), sig, {});
        id.rhs   = parse_term(get_string(field(e, "rhs", "identity"), "identity rhs"), sig, {});
        id.arity = std::max(id.lhs.max_var(), id.rhs.max_var());
        if (e.contains("arity")) {
          id.arity = std::max<unsigned>(id.arity, static_cast<unsigned>(get_size(e.at("arity"), "identity arity")));
        }
        ids.push_back(std::move(id));
      }
    }
    return Variety::custom(name, sig, std::move(ids));
  }

  Variety variety_from_arg(std::string const& arg) {
    for (char const* n : {"groups", "ab", "cring", "pointed_set"}) {
      if (arg == n) {
        return Variety::by_name(arg);
      }
    }
    return variety_from_json(read_json_file(arg));
  }

  ////////////////////////////////////////////////////////////////////////
  // Overalgebras and modules
  ////////////////////////////////////////////////////////////////////////

  AlgebraPtr base_from_json(Json const& j, Variety const& V, std::string const& dir) {
    Json const& b = field(j, "base", "input");
    if (b.is_string()) {
      std::filesystem::path p(b.get<std::string>());
      if (p.is_relative() && !dir.empty()) {
        p = std::filesystem::path(dir) / p;
      }
      return algebra_from_json(read_json_file(p.string()), &V);
    }
    return algebra_from_json(b, &V);
  }

  PointedOveralg overalg_from_json(Json const& j, AlgebraPtr const& Ap) {
    FinAlgebra const&                     A = *Ap;
    std::size_t const                     k = A.size();
    Json const&                           fibers_j = field(j, "fibers", "overalgebra");
    std::vector<std::vector<std::string>> fibers(k);
    std::vector<PointedOveralg::Point>    base(k);
    for (Element a = 0; a < k; ++a) {
      std::string const& an = A.element_name(a);
      if (!fibers_j.contains(an)) {
        fail(ErrorKind::Validation, "overalgebra: no fiber over " + an);
      }
      Json const& f      = fibers_j.at(an);
      Json const& points = f.is_array() ? f : field(f, "points", "fiber " + an);
      if (!points.is_array() || points.empty()) {
        fail(ErrorKind::Validation, "fiber " + an + ": expected a nonempty list of points");
      }
      for (auto const& p : points) {
        fibers[a].push_back(get_string(p, "fiber " + an));
      }
      std::string const bp = f.is_object() && f.contains("basepoint") ? get_string(f.at("basepoint"), "basepoint")
                                                                       : fibers[a].front();
      auto const it = std::find(fibers[a].begin(), fibers[a].end(), bp);
      if (it == fibers[a].end()) {
        fail(ErrorKind::Validation, "fiber " + an + ": basepoint " + bp + " is not a point");
      }
      base[a] = static_cast<PointedOveralg::Point>(it - fibers[a].begin());
    }
    Json const&              ops_j = field(j, "ops", "overalgebra");
    Signature const&         sig   = A.signature();
    PointedOveralg::OpTables ops(sig.size());
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n = sig[s].arity;
      if (!ops_j.contains(sig[s].name)) {
        fail(ErrorKind::Validation, "overalgebra: no operation " + sig[s].name);
      }
      Json const& by_tuple = ops_j.at(sig[s].name);
      ops[s].resize(int_pow(k, n));
      std::vector<bool> seen(ops[s].size());
      for (auto const& [key, table] : by_tuple.items()) {
        std::string const where = sig[s].name + "[" + key + "]";
        Tuple const       a     = parse_key(A, key, n, where);
        Element const     top   = A.apply(s, a);
        std::size_t const idx   = tuple_index(k, a);
        std::vector<std::size_t> dims;
        for (auto ai : a) {
          dims.push_back(fibers[ai].size());
        }
        auto lookup = [&](std::string const& name) -> std::optional<std::uint32_t> {
          auto const it = std::find(fibers[top].begin(), fibers[top].end(), name);
          if (it == fibers[top].end()) {
            return std::nullopt;
          }
          return static_cast<std::uint32_t>(it - fibers[top].begin());
        };
        std::vector<PointedOveralg::Point> t;
        flatten(table, dims, [&](Json const& x) { t.push_back(name_or_index(x, fibers[top].size(), lookup, where)); }, where);
        ops[s][idx] = std::move(t);
        seen[idx]   = true;
      }
      for (std::size_t idx = 0; idx < seen.size(); ++idx) {
        if (!seen[idx]) {
          fail(ErrorKind::Validation, "overalgebra: " + sig[s].name + " has no table at (" +
                                          tuple_key(A, tuple_at(k, n, idx)) + ")");
        }
      }
    }
    return PointedOveralg(Ap, std::move(fibers), std::move(base), std::move(ops));
  }

  Json overalg_to_json(PointedOveralg const& P) {
    FinAlgebra const& A      = *P.base();
    Json              fibers = Json::object();
    for (Element a = 0; a < A.size(); ++a) {
      fibers[A.element_name(a)] = {{"points", P.fiber(a)}, {"basepoint", P.fiber(a)[P.basepoint(a)]}};
    }
    Json ops = Json::object();
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      unsigned const n        = A.signature()[s].arity;
      Json           by_tuple = Json::object();
      for (Tuple const& a : all_tuples(A.size(), n)) {
        Element const            top = A.apply(s, a);
        std::vector<std::size_t> dims;
        for (auto ai : a) {
          dims.push_back(P.fiber_size(ai));
        }
        auto const& table = P.ops()[s][tuple_index(A.size(), a)];
        std::size_t pos   = 0;
        by_tuple[tuple_key(A, a)] = nest(dims, pos, [&](std::size_t i) { return Json(P.fiber(top)[table[i]]); });
      }
      ops[A.signature()[s].name] = std::move(by_tuple);
    }
    return {{"base", algebra_to_json(A)}, {"fibers", fibers}, {"ops", ops}};
  }

  AModule module_from_json(Json const& j, AlgebraPtr const& Ap) {
    FinAlgebra const&      A        = *Ap;
    std::size_t const      k        = A.size();
    Json const&            fibers_j = field(j, "fibers", "module");
    std::vector<FGAbGroup> fibers;
    for (Element a = 0; a < k; ++a) {
      if (!fibers_j.contains(A.element_name(a))) {
        fail(ErrorKind::Validation, "module: no fiber over " + A.element_name(a));
      }
      fibers.push_back(group_from_json(fibers_j.at(A.element_name(a))));
    }
    Json const&      ops_j = field(j, "ops", "module");
    Signature const& sig   = A.signature();
    AModule::Parts   parts(sig.size());
    for (std::size_t s = 0; s < sig.size(); ++s) {
      unsigned const n = sig[s].arity;
      parts[s].resize(int_pow(k, n));
      if (n == 0) {
        continue;
      }
      if (!ops_j.contains(sig[s].name)) {
        fail(ErrorKind::Validation, "module: no operation " + sig[s].name);
      }
      Json const&       by_tuple = ops_j.at(sig[s].name);
      std::vector<bool> seen(parts[s].size());
      for (auto const& [key, mats] : by_tuple.items()) {
        std::string const where = sig[s].name + "[" + key + "]";
        Tuple const       a     = parse_key(A, key, n, where);
        Element const     top   = A.apply(s, a);
        if (!mats.is_array() || mats.size() != n) {
          fail(ErrorKind::Validation, where + ": expected " + std::to_string(n) + " matrices");
        }
        std::size_t const idx = tuple_index(k, a);
        for (std::size_t i = 0; i < n; ++i) {
          parts[s][idx].push_back(matrix_from_json(mats[i], fibers[top].rank(), fibers[a[i]].rank()));
        }
        seen[idx] = true;
      }
      for (std::size_t idx = 0; idx < seen.size(); ++idx) {
        if (!seen[idx]) {
          fail(ErrorKind::Validation, "module: " + sig[s].name + " has no matrices at (" +
                                          tuple_key(A, tuple_at(k, n, idx)) + ")");
        }
      }
    }
    return AModule(Ap, std::move(fibers), std::move(parts));
  }

  Json module_to_json(AModule const& M) {
    FinAlgebra const& A      = *M.base();
    Json              fibers = Json::object();
    for (Element a = 0; a < A.size(); ++a) {
      fibers[A.element_name(a)] = group_to_json(M.fiber(a));
    }
    Json ops = Json::object();
    for (std::size_t s = 0; s < A.signature().size(); ++s) {
      unsigned const n = A.signature()[s].arity;
      if (n == 0) {
        continue;
      }
      Json by_tuple = Json::object();
      for (Tuple const& a : all_tuples(A.size(), n)) {
        Json mats = Json::array();
        for (std::size_t i = 0; i < n; ++i) {
          mats.push_back(matrix_to_json(M.part(s, a, i)));
        }
        by_tuple[tuple_key(A, a)] = std::move(mats);
      }
      ops[A.signature()[s].name] = std::move(by_tuple);
    }
    return {{"base", algebra_to_json(A)}, {"fibers", fibers}, {"ops", ops}};
  }

  ////////////////////////////////////////////////////////////////////////
  // Ringoids and reports
  ////////////////////////////////////////////////////////////////////////

  Json ringoid_to_json(Ringoid const& X, std::vector<std::string> const& objects) {
    std::size_t const k = X.objects();
    Json              homs = Json::array();
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        homs.push_back({{"a", objects.at(a)}, {"b", objects.at(b)}, {"labels", X.labels(a, b)},
                        {"group", group_to_json(X.hom(a, b))}});
      }
    }
    Json identities = Json::object();
    for (Element b = 0; b < k; ++b) {
      identities[objects[b]] = vec_to_json(X.identity(b));
    }
    Json products = Json::array();
    for (Element c = 0; c < k; ++c) {
      for (Element a = 0; a < k; ++a) {
        for (Element b = 0; b < k; ++b) {
          std::size_t const r1 = X.hom(c, a).rank(), r2 = X.hom(a, b).rank();
          Json              table = Json::array();
          for (std::size_t i = 0; i < r1; ++i) {
            Json row = Json::array();
            for (std::size_t jj = 0; jj < r2; ++jj) {
              row.push_back(vec_to_json(X.basis_product(c, a, b, i, jj)));
            }
            table.push_back(std::move(row));
          }
          products.push_back({{"c", objects[c]}, {"a", objects[a]}, {"b", objects[b]}, {"table", table}});
        }
      }
    }
    return {{"objects", objects}, {"homs", homs}, {"identities", identities}, {"products", products}};
  }

  Ringoid ringoid_from_json(Json const& j) {
    Json const&              objs = field(j, "objects", "ringoid");
    std::vector<std::string> objects;
    for (auto const& o : objs) {
      objects.push_back(get_string(o, "ringoid object"));
    }
    std::size_t const k      = objects.size();
    Json const&       homs_j = field(j, "homs", "ringoid");
    if (!homs_j.is_array() || homs_j.size() != k * k) {
      fail(ErrorKind::Validation, "ringoid: expected " + std::to_string(k * k) + " hom-groups");
    }
    std::vector<FGAbGroup>                homs;
    std::vector<std::vector<std::string>> labels;
    for (auto const& h : homs_j) {
      homs.push_back(group_from_json(field(h, "group", "hom")));
      std::vector<std::string> l;
      for (auto const& x : field(h, "labels", "hom")) {
        l.push_back(get_string(x, "label"));
      }
      labels.push_back(std::move(l));
    }
    std::vector<Vec> identities;
    Json const&      ids_j = field(j, "identities", "ringoid");
    for (auto const& o : objects) {
      identities.push_back(vec_from_json(field(ids_j, o.c_str(), "identities")));
    }
    Json const& prod_j = field(j, "products", "ringoid");
    if (!prod_j.is_array() || prod_j.size() != k * k * k) {
      fail(ErrorKind::Validation, "ringoid: expected " + std::to_string(k * k * k) + " product tables");
    }
    std::vector<std::vector<Vec>> products;
    for (std::size_t idx = 0; idx < prod_j.size(); ++idx) {
      std::size_t const c = idx / (k * k), a = (idx / k) % k, b = idx % k;
      std::vector<std::size_t> dims{homs[c * k + a].rank(), homs[a * k + b].rank()};
      std::vector<Vec>         t;
      flatten(field(prod_j[idx], "table", "products"), dims, [&](Json const& x) { t.push_back(vec_from_json(x)); },
              "products");
      products.push_back(std::move(t));
    }
    return Ringoid(k, std::move(homs), std::move(labels), std::move(products), std::move(identities));
  }

  Json envelope_report(EnvelopeReport const& r, std::size_t max_depth) {
    EnvelopingRingoid const& Z   = *r.ringoid;
    FinAlgebra const&        A   = *Z.algebra();
    Signature const&         sig = A.signature();
    Json                     steps = Json::array();
    for (auto const& s : r.steps) {
      steps.push_back({{"depth", s.depth}, {"stable", s.stable}, {"detail", s.detail}});
    }
    Json homs = Json::array();
    for (Element a = 0; a < A.size(); ++a) {
      for (Element b = 0; b < A.size(); ++b) {
        HomPresentation const& h    = Z.presentation(a, b);
        Json                   gens = Json::array();
        for (auto const& g : h.gens) {
          gens.push_back(print_term(g, sig, A.carrier()));
        }
        homs.push_back({{"a", A.element_name(a)},
                        {"b", A.element_name(b)},
                        {"generators", gens},
                        {"relation_matrix", lattice_rows(h.relations)},
                        {"survivors", h.survivors},
                        {"iso_type", iso_type_to_json(h.group.iso_type())}});
      }
    }
    return {{"tool", "envring"},
            {"version", kToolVersion},
            {"report", "envelope"},
            {"variety", Z.variety().name()},
            {"algebra", algebra_to_json(A)},
            {"depth", r.depth},
            {"max_depth", max_depth},
            {"stabilized", r.stabilized},
            {"steps", steps},
            {"homs", homs},
            {"ringoid", ringoid_to_json(Z.ringoid(), A.carrier())}};
  }

  Json modulization_report(Modulization const& m) {
    FinAlgebra const& A      = *m.source.base();
    Json              fibers = Json::array();
    for (Element a = 0; a < A.size(); ++a) {
      Json eta = Json::object();
      for (std::size_t p = 0; p < m.source.fiber_size(a); ++p) {
        eta[m.source.fiber(a)[p]] = vec_to_json(m.eta[a][p]);
      }
      fibers.push_back({{"object", A.element_name(a)},
                        {"points", m.source.fiber(a)},
                        {"basepoint", m.source.fiber(a)[m.source.basepoint(a)]},
                        {"K", lattice_rows(m.K[a])},
                        {"presentation", group_to_json(m.result.fiber(a))},
                        {"iso_type", iso_type_to_json(m.result.fiber(a).iso_type())},
                        {"eta", eta}});
    }
    return {{"tool", "envring"},
            {"version", kToolVersion},
            {"report", "modulize"},
            {"fibers", fibers},
            {"module", module_to_json(m.result)}};
  }

}  // namespace envring
