// SPDX-License-Identifier: Apache-2.0

#include "envring/fleet.hpp"

#include <array>

namespace envring {

  namespace {
    std::vector<std::string> numbered(unsigned n) {
      std::vector<std::string> names;
      for (unsigned i = 0; i < n; ++i) {
        names.push_back(std::to_string(i));
      }
      return names;
    }

    std::vector<Element> binary_table(unsigned n, auto&& f) {
      std::vector<Element> t;
      t.reserve(n * n);
      for (unsigned a = 0; a < n; ++a) {
        for (unsigned b = 0; b < n; ++b) {
          t.push_back(static_cast<Element>(f(a, b)));
        }
      }
      return t;
    }

    std::vector<Element> unary_table(unsigned n, auto&& f) {
      std::vector<Element> t;
      for (unsigned a = 0; a < n; ++a) {
        t.push_back(static_cast<Element>(f(a)));
      }
      return t;
    }
  }  // namespace

  AlgebraPtr cyclic_group(unsigned n) {
    std::vector<std::string> names{"e"};
    for (unsigned i = 1; i < n; ++i) {
      names.push_back(i == 1 ? "g" : "g" + std::to_string(i));
    }
    std::vector<std::vector<Element>> tables = {
        binary_table(n, [n](unsigned a, unsigned b) { return (a + b) % n; }),
        unary_table(n, [n](unsigned a) { return (n - a) % n; }),
        {0},
    };
    return std::make_shared<FinAlgebra const>("C" + std::to_string(n), Variety::groups().signature(),
                                              std::move(names), std::move(tables));
  }

  AlgebraPtr symmetric_group3() {
    // Permutations of {0,1,2} as images of 0,1,2.
    std::array<std::array<unsigned, 3>, 6> const perms = {{
        {0, 1, 2},
        {1, 0, 2},
        {2, 1, 0},
        {0, 2, 1},
        {1, 2, 0},
        {2, 0, 1},
    }};
    auto index = [&](std::array<unsigned, 3> const& p) {
      for (unsigned i = 0; i < 6; ++i) {
        if (perms[i] == p) {
          return i;
        }
      }
      return 0u;
    };
    // (a*b)(i) = a(b(i))
    auto mul = [&](unsigned a, unsigned b) {
      std::array<unsigned, 3> p{};
      for (unsigned i = 0; i < 3; ++i) {
        p[i] = perms[a][perms[b][i]];
      }
      return index(p);
    };
    auto inv = [&](unsigned a) {
      std::array<unsigned, 3> p{};
      for (unsigned i = 0; i < 3; ++i) {
        p[perms[a][i]] = i;
      }
      return index(p);
    };
    std::vector<std::vector<Element>> tables = {binary_table(6, mul), unary_table(6, inv), {0}};
    return std::make_shared<FinAlgebra const>(
        "S3", Variety::groups().signature(),
        std::vector<std::string>{"e", "(12)", "(13)", "(23)", "(123)", "(132)"}, std::move(tables));
  }

  AlgebraPtr cyclic_ab(unsigned n) {
    std::vector<std::vector<Element>> tables = {
        binary_table(n, [n](unsigned a, unsigned b) { return (a + b) % n; }),
        unary_table(n, [n](unsigned a) { return (n - a) % n; }),
        {0},
    };
    return std::make_shared<FinAlgebra const>("Z" + std::to_string(n), Variety::ab().signature(),
                                              numbered(n), std::move(tables));
  }

  AlgebraPtr zmod_ring(unsigned n) {
    std::vector<std::vector<Element>> tables = {
        binary_table(n, [n](unsigned a, unsigned b) { return (a + b) % n; }),
        unary_table(n, [n](unsigned a) { return (n - a) % n; }),
        {0},
        binary_table(n, [n](unsigned a, unsigned b) { return (a * b) % n; }),
        {static_cast<Element>(1 % n)},
    };
    return std::make_shared<FinAlgebra const>("Z" + std::to_string(n) + "ring", Variety::cring().signature(),
                                              numbered(n), std::move(tables));
  }

  AlgebraPtr pointed_set_algebra(unsigned k) {
    std::vector<std::string> names{"*"};
    for (unsigned i = 1; i < k; ++i) {
      names.push_back("p" + std::to_string(i));
    }
    return std::make_shared<FinAlgebra const>("Pt" + std::to_string(k), Variety::pointed_set().signature(),
                                              std::move(names), std::vector<std::vector<Element>>{{0}});
  }

  std::vector<FleetEntry> default_fleet() {
    return {
        {"C2", Variety::groups(), cyclic_group(2)},
        {"C3", Variety::groups(), cyclic_group(3)},
        {"C4", Variety::groups(), cyclic_group(4)},
        {"S3", Variety::groups(), symmetric_group3()},
        {"Z2ab", Variety::ab(), cyclic_ab(2)},
        {"Z4ab", Variety::ab(), cyclic_ab(4)},
        {"Z2ring", Variety::cring(), zmod_ring(2)},
        {"Z3ring", Variety::cring(), zmod_ring(3)},
        {"Pt2", Variety::pointed_set(), pointed_set_algebra(2)},
    };
  }

}  // namespace envring

namespace envring {

  namespace {
    Matrix scalar(std::size_t n, Int c) {
      Matrix m(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        m(i, i) = c;
      }
      return m;
    }

    AModule::Parts empty_parts(FinAlgebra const& A) {
      AModule::Parts parts;
      for (auto const& sym : A.signature().symbols()) {
        parts.emplace_back(int_pow(A.size(), sym.arity));
      }
      return parts;
    }

    Matrix power(Matrix const& m, unsigned k) {
      Matrix out = Matrix::identity(m.rows());
      for (unsigned i = 0; i < k; ++i) {
        out = out * m;
      }
      return out;
    }

    Matrix swap2() {
      return Matrix::from_rows({{0, 1}, {1, 0}});
    }
  }  // namespace

  AModule group_module(AlgebraPtr const& G, FGAbGroup const& X, std::vector<Matrix> const& rho) {
    std::size_t const k = G->size();
    std::size_t const n = X.rank();
    if (rho.size() != k) {
      fail(ErrorKind::Validation, "group action needs one matrix per element");
    }
    auto parts = empty_parts(*G);
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        parts[0][a * k + b] = {Matrix::identity(n), rho[a]};
      }
      parts[1][a] = {-rho[G->apply(1, {a})]};
    }
    parts[2][0] = {};
    return AModule(G, std::vector<FGAbGroup>(k, X), std::move(parts));
  }

  AModule abelian_module(AlgebraPtr const& A, FGAbGroup const& X) {
    std::size_t const k = A->size();
    std::size_t const n = X.rank();
    auto              parts = empty_parts(*A);
    for (auto& p : parts[0]) {
      p = {Matrix::identity(n), Matrix::identity(n)};
    }
    for (auto& p : parts[1]) {
      p = {scalar(n, -1)};
    }
    return AModule(A, std::vector<FGAbGroup>(k, X), std::move(parts));
  }

  AModule ring_module(AlgebraPtr const& R, FGAbGroup const& X, std::vector<Matrix> const& rho) {
    std::size_t const k = R->size();
    std::size_t const n = X.rank();
    if (rho.size() != k) {
      fail(ErrorKind::Validation, "ring action needs one matrix per element");
    }
    auto parts = empty_parts(*R);
    for (auto& p : parts[0]) {
      p = {Matrix::identity(n), Matrix::identity(n)};
    }
    for (auto& p : parts[1]) {
      p = {scalar(n, -1)};
    }
    for (Element a = 0; a < k; ++a) {
      for (Element b = 0; b < k; ++b) {
        parts[3][a * k + b] = {rho[b], rho[a]};
      }
    }
    return AModule(R, std::vector<FGAbGroup>(k, X), std::move(parts));
  }

  AModule pointed_module(AlgebraPtr const& A, std::vector<FGAbGroup> const& fibers) {
    return AModule(A, fibers, empty_parts(*A));
  }

  AModule twist(AModule const& M, std::vector<Matrix> const& tau) {
    auto const&       A = *M.base();
    std::size_t const k = A.size();
    if (tau.size() != k) {
      fail(ErrorKind::Validation, "twist needs one involution per fiber");
    }
    for (Element a = 0; a < k; ++a) {
      ZHom const t(M.fiber(a), M.fiber(a), tau[a]);
      if (!t.after(t).same_map(ZHom::identity(M.fiber(a)))) {
        fail(ErrorKind::Validation, "twist matrices must be involutions");
      }
    }
    auto parts = M.parts();
    for (std::size_t s = 0; s < parts.size(); ++s) {
      unsigned const n = A.signature()[s].arity;
      for (std::size_t r = 0; r < parts[s].size(); ++r) {
        Tuple const   a = tuple_at(k, n, r);
        Element const t = A.apply(s, a);
        for (unsigned i = 0; i < n; ++i) {
          parts[s][r][i] = tau[t] * parts[s][r][i] * tau[a[i]];
        }
      }
    }
    return AModule(M.base(), M.fibers(), std::move(parts));
  }

  std::vector<FleetModule> fleet_modules(FleetEntry const& entry) {
    AlgebraPtr const& A = entry.algebra;
    std::size_t const k = A->size();
    FGAbGroup const   z2 = FGAbGroup::cyclic_sum({2});
    FGAbGroup const   z3 = FGAbGroup::cyclic_sum({3});
    FGAbGroup const   z4 = FGAbGroup::cyclic_sum({4});
    FGAbGroup const   v4 = FGAbGroup::cyclic_sum({2, 2});
    auto const        ones = [&](std::size_t n) { return std::vector<Matrix>(k, Matrix::identity(n)); };
    // Involution on the fiber over the last element only.
    auto const last_only = [&](std::size_t n, Matrix const& m) {
      auto taus  = ones(n);
      taus.back() = m;
      return taus;
    };
    std::vector<FleetModule> out;
    out.push_back({"zero", AModule::zero(A)});

    switch (entry.variety.kind()) {
      case VarietyKind::Groups: {
        // Group elements are indexed so that the sign and a generator's
        // powers are easy to read off: C_n uses g^a at index a, S3 lists
        // the identity, the three transpositions, then the 3-cycles.
        bool const       s3 = k == 6;
        auto const       sign = [&](Element a) -> Int { return s3 ? (a >= 1 && a <= 3 ? -1 : 1) : (a % 2 ? -1 : 1); };
        std::vector<Matrix> sgn1;
        for (Element a = 0; a < k; ++a) {
          sgn1.push_back(scalar(1, sign(a)));
        }
        out.push_back({"Z/2 trivial", group_module(A, z2, ones(1))});
        if (k % 2 == 0) {
          out.push_back({"Z/3 sign", group_module(A, z3, sgn1)});
          out.push_back({"Z/4 sign", group_module(A, z4, sgn1)});
        } else {
          out.push_back({"Z/3 trivial", group_module(A, z3, ones(1))});
          out.push_back({"Z/4 trivial", group_module(A, z4, ones(1))});
        }
        std::vector<Matrix> rho2;
        if (s3) {
          // S3 = GL(2,2) acting on the nonzero vectors v0=(1,0), v1=(0,1), v2=(1,1).
          std::array<std::array<int, 3>, 6> const perms = {{
              {0, 1, 2}, {1, 0, 2}, {2, 1, 0}, {0, 2, 1}, {1, 2, 0}, {2, 0, 1},
          }};
          std::array<Vec, 3> const v = {Vec{1, 0}, Vec{0, 1}, Vec{1, 1}};
          for (auto const& p : perms) {
            rho2.push_back(Matrix::from_columns({v[p[0]], v[p[1]]}, 2));
          }
        } else if (k % 2 == 0) {
          for (Element a = 0; a < k; ++a) {
            rho2.push_back(power(swap2(), a));
          }
        } else {
          for (Element a = 0; a < k; ++a) {
            rho2.push_back(power(Matrix::from_rows({{0, 1}, {1, 1}}), a));
          }
        }
        out.push_back({"(Z/2)^2", group_module(A, v4, rho2)});
        out.push_back({"Z/3 twisted", twist(out[2].module, last_only(1, scalar(1, -1)))});
        out.push_back({"(Z/2)^2 twisted", twist(out[4].module, last_only(2, swap2()))});
        out.push_back({"Z trivial", group_module(A, FGAbGroup(1), ones(1))});
        break;
      }
      case VarietyKind::AB: {
        out.push_back({"Z/2", abelian_module(A, z2)});
        out.push_back({"Z/3", abelian_module(A, z3)});
        out.push_back({"Z/4", abelian_module(A, z4)});
        out.push_back({"(Z/2)^2", abelian_module(A, v4)});
        out.push_back({"Z/3 twisted", twist(out[2].module, last_only(1, scalar(1, -1)))});
        out.push_back({"(Z/2)^2 twisted", twist(out[4].module, last_only(2, swap2()))});
        out.push_back({"Z", abelian_module(A, FGAbGroup(1))});
        break;
      }
      case VarietyKind::CRing: {
        // Modules over Z/n: sums of Z/n, each r acting as the scalar r.
        Int const  n     = static_cast<Int>(k);
        auto const scalars = [&](std::size_t r) {
          std::vector<Matrix> rho;
          for (Element a = 0; a < k; ++a) {
            rho.push_back(scalar(r, a));
          }
          return rho;
        };
        FGAbGroup const zn  = FGAbGroup::cyclic_sum({n});
        FGAbGroup const zn2 = FGAbGroup::cyclic_sum({n, n});
        out.push_back({"R", ring_module(A, zn, scalars(1))});
        out.push_back({"R^2", ring_module(A, zn2, scalars(2))});
        out.push_back({"R^2 twisted", twist(out[2].module, last_only(2, swap2()))});
        out.push_back({"R^2 twisted at 0", twist(out[2].module, [&] {
                         auto taus = ones(2);
                         taus.front() = swap2();
                         return taus;
                       }())});
        out.push_back({"R twisted", twist(out[1].module, last_only(1, scalar(1, -1)))});
        break;
      }
      case VarietyKind::PointedSet: {
        std::vector<FGAbGroup> mixed;
        for (Element a = 0; a < k; ++a) {
          mixed.push_back(a == 0 ? z2 : z3);
        }
        out.push_back({"Z/2 everywhere", pointed_module(A, std::vector<FGAbGroup>(k, z2))});
        out.push_back({"Z/2 and Z/3", pointed_module(A, mixed)});
        out.push_back({"(Z/2)^2 everywhere", pointed_module(A, std::vector<FGAbGroup>(k, v4))});
        out.push_back({"Z/4 everywhere", pointed_module(A, std::vector<FGAbGroup>(k, z4))});
        out.push_back({"Z everywhere", pointed_module(A, std::vector<FGAbGroup>(k, FGAbGroup(1)))});
        break;
      }
      case VarietyKind::Custom:
        break;
    }
    return out;
  }

}  // namespace envring
