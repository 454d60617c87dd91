// SPDX-License-Identifier: Apache-2.0
//
// Exact integer linear algebra over arbitrary-precision integers: dense
// matrices with Hermite and Smith normal forms, sparse lattices kept in
// echelon form, finitely generated abelian groups as presentations, and the
// homomorphisms between them.

#ifndef ENVRING_ZLINALG_HPP_
#define ENVRING_ZLINALG_HPP_

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "envring/error.hpp"

namespace envring {

  using Int = boost::multiprecision::cpp_int;
  using Vec = std::vector<Int>;

  // Floor division and the matching non-negative remainder for b > 0.
  Int floor_div(Int const& a, Int const& b);
  Int mod_floor(Int const& a, Int const& b);

  // g = s*a + t*b with g = gcd(a, b) >= 0.
  struct Xgcd {
    Int g, s, t;
  };
  Xgcd xgcd(Int const& a, Int const& b);

  class Matrix {
   public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols) : _rows(rows), _cols(cols), _data(rows * cols) {}
    // Row-major nested initializer, all rows of equal length.
    static Matrix from_rows(std::vector<std::vector<Int>> const& rows, std::size_t cols = 0);
    static Matrix from_columns(std::vector<Vec> const& cols, std::size_t rows);
    static Matrix identity(std::size_t n);

    std::size_t rows() const noexcept {
      return _rows;
    }
    std::size_t cols() const noexcept {
      return _cols;
    }

    Int& operator()(std::size_t i, std::size_t j) {
      return _data[i * _cols + j];
    }
    Int const& operator()(std::size_t i, std::size_t j) const {
      return _data[i * _cols + j];
    }

    Vec column(std::size_t j) const;
    Vec row(std::size_t i) const;
    std::vector<Vec> columns() const;
    Matrix transpose() const;
    bool is_zero() const;
    Vec apply(Vec const& v) const;

    friend Matrix operator*(Matrix const& x, Matrix const& y);
    friend Matrix operator+(Matrix const& x, Matrix const& y);
    friend Matrix operator-(Matrix const& x, Matrix const& y);
    friend Matrix operator-(Matrix const& x);
    friend bool   operator==(Matrix const&, Matrix const&) = default;

   private:
    std::size_t _rows = 0;
    std::size_t _cols = 0;
    std::vector<Int> _data;
  };

  std::string to_string(Matrix const& m);

  Int det(Matrix const& m);
  bool is_unimodular(Matrix const& m);

  struct HnfResult {
    Matrix      H;
    Matrix      U;
    std::size_t rank = 0;  // number of nonzero columns, which come first
  };

  // Column Hermite normal form H = M*U. Nonzero columns come first; the pivot
  // (first nonzero entry) of each is positive and sits in a strictly lower
  // row than the previous one; entries to the left of a pivot are reduced
  // into [0, pivot).
  HnfResult hnf(Matrix const& M);

  struct SnfResult {
    Matrix S, U, V;
    Matrix U_inv, V_inv;
  };

  // S = U*M*V diagonal with non-negative d_1 | d_2 | ...
  SnfResult snf(Matrix const& M);

  // Basis columns of {v : M v = 0}.
  std::vector<Vec> integer_kernel(Matrix const& M);

  ////////////////////////////////////////////////////////////////////////
  // Sparse vectors and lattices
  ////////////////////////////////////////////////////////////////////////

  using SparseVec = std::vector<std::pair<std::uint32_t, Int>>;

  SparseVec to_sparse(Vec const& v);
  Vec       to_dense(SparseVec const& v, std::size_t n);
  // y += c * x
  void axpy(SparseVec& y, Int const& c, SparseVec const& x);
  Int  coefficient(SparseVec const& v, std::uint32_t index);

  // A subgroup of Z^n kept as an echelon basis keyed by pivot, where the
  // pivot of a vector is its first nonzero index. After canonicalize() the
  // basis is the Hermite basis: positive pivots, entries at later pivots
  // reduced into [0, pivot).
  class Lattice {
   public:
    Lattice() = default;
    explicit Lattice(std::size_t n) : _n(n) {}

    std::size_t ambient() const noexcept {
      return _n;
    }
    std::size_t rank() const noexcept {
      return _rows.size();
    }
    bool full_rank() const noexcept {
      return _rows.size() == _n;
    }

    // Returns true if the lattice grew.
    bool insert(SparseVec v);
    bool insert(Vec const& v) {
      return insert(to_sparse(v));
    }

    // Canonical coset representative of v modulo the lattice.
    SparseVec reduce(SparseVec v) const;
    Vec       reduce(Vec const& v) const;

    bool contains(SparseVec const& v) const {
      return reduce(v).empty();
    }
    bool contains(Vec const& v) const {
      return contains(to_sparse(v));
    }
    bool contains(Lattice const& other) const;

    // Coordinates of v in the current basis (basis order = pivot order), or
    // nothing if v is not in the lattice.
    std::optional<Vec> coordinates(SparseVec v) const;

    void canonicalize();

    std::map<std::uint32_t, SparseVec> const& rows() const noexcept {
      return _rows;
    }
    std::vector<Vec> basis() const;
    // Basis vectors as columns.
    Matrix matrix() const;

    friend bool operator==(Lattice const& x, Lattice const& y);

   private:
    std::size_t                        _n = 0;
    std::map<std::uint32_t, SparseVec> _rows;
  };

  Lattice lattice_of(std::size_t n, std::vector<Vec> const& generators);

  ////////////////////////////////////////////////////////////////////////
  // Finitely generated abelian groups
  ////////////////////////////////////////////////////////////////////////

  struct IsoType {
    std::size_t      free_rank = 0;
    std::vector<Int> torsion;  // invariant factors > 1, each dividing the next

    friend bool operator==(IsoType const&, IsoType const&) = default;
  };

  std::string to_string(IsoType const& t);

  // Z^n modulo a relation lattice.
  class FGAbGroup {
   public:
    FGAbGroup() = default;
    explicit FGAbGroup(std::size_t n) : _relations(n) {}
    FGAbGroup(std::size_t n, std::vector<Vec> const& relations);
    explicit FGAbGroup(Lattice relations);

    // Z/d_1 + ... + Z/d_k, with d = 0 meaning Z.
    static FGAbGroup cyclic_sum(std::vector<Int> const& orders);

    std::size_t rank() const noexcept {
      return _relations.ambient();
    }
    Lattice const& relation_lattice() const noexcept {
      return _relations;
    }
    // HNF basis of the relations as columns.
    Matrix relations() const {
      return _relations.matrix();
    }

    Vec  reduce(Vec const& v) const;
    bool is_zero(Vec const& v) const;
    bool equal(Vec const& v, Vec const& w) const;

    IsoType iso_type() const;
    bool    is_finite() const noexcept {
      return _relations.full_rank();
    }
    bool is_trivial() const;
    // Throws InfiniteFiber.
    Int order() const;
    // Canonical representatives of every element, in a fixed order. Throws
    // InfiniteFiber.
    std::vector<Vec> elements() const;
    // Position of an element in elements(); v need not be reduced.
    std::size_t index_of(Vec const& v) const;

    friend bool operator==(FGAbGroup const&, FGAbGroup const&) = default;

   private:
    Lattice _relations;
  };

  class ZHom {
   public:
    ZHom() = default;
    // Throws IllDefinedHom if some relation of dom is not sent into the
    // relations of cod.
    ZHom(FGAbGroup dom, FGAbGroup cod, Matrix m);

    static ZHom identity(FGAbGroup const& g);
    static ZHom zero(FGAbGroup const& dom, FGAbGroup const& cod);

    FGAbGroup const& domain() const noexcept {
      return _dom;
    }
    FGAbGroup const& codomain() const noexcept {
      return _cod;
    }
    Matrix const& matrix() const noexcept {
      return _m;
    }

    Vec  operator()(Vec const& v) const;
    bool is_zero() const;
    // Equality as maps of groups.
    bool same_map(ZHom const& other) const;

    // (*this) after g.
    ZHom after(ZHom const& g) const;
    friend ZHom operator+(ZHom const& x, ZHom const& y);
    friend ZHom operator-(ZHom const& x);
    friend ZHom operator-(ZHom const& x, ZHom const& y);

   private:
    FGAbGroup _dom;
    FGAbGroup _cod;
    Matrix    _m;
  };

  struct SubgroupResult {
    FGAbGroup group;
    ZHom      map;  // inclusion into the domain, or projection onto it
  };

  SubgroupResult kernel(ZHom const& f);
  SubgroupResult image(ZHom const& f);
  SubgroupResult cokernel(ZHom const& f);

  // A map between two components of an indexed family of groups.
  struct IndexedMap {
    std::size_t from = 0;
    std::size_t to   = 0;
    Matrix      m;
  };

  // Smallest family of subgroups containing the seeds and closed under the
  // maps, each returned as the preimage lattice in its ambient Z^n (so it
  // contains the relations). Worklist is FIFO over (component, vector).
  std::vector<Lattice> subgroup_saturate(std::vector<FGAbGroup> const&                 groups,
                                         std::vector<std::pair<std::size_t, Vec>> const& seeds,
                                         std::vector<IndexedMap> const&                maps);

}  // namespace envring

#endif  // ENVRING_ZLINALG_HPP_
