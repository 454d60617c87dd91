// SPDX-License-Identifier: Apache-2.0

#include "envring/zlinalg.hpp"

#include <algorithm>
#include <deque>
#include <sstream>

namespace envring {

  Int floor_div(Int const& a, Int const& b) {
    Int q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0))) {
      --q;
    }
    return q;
  }

  Int mod_floor(Int const& a, Int const& b) {
    Int r = a % b;
    if (r < 0) {
      r += b;
    }
    return r;
  }

  Xgcd xgcd(Int const& a, Int const& b) {
    Int old_r = a, r = b;
    Int old_s = 1, s = 0;
    Int old_t = 0, t = 1;
    while (r != 0) {
      Int q   = old_r / r;
      Int tmp = old_r - q * r;
      old_r   = r;
      r       = tmp;
      tmp     = old_s - q * s;
      old_s   = s;
      s       = tmp;
      tmp     = old_t - q * t;
      old_t   = t;
      t       = tmp;
    }
    if (old_r < 0) {
      return {-old_r, -old_s, -old_t};
    }
    return {old_r, old_s, old_t};
  }

  ////////////////////////////////////////////////////////////////////////
  // Matrix
  ////////////////////////////////////////////////////////////////////////

  Matrix Matrix::from_rows(std::vector<std::vector<Int>> const& rows, std::size_t cols) {
    if (!rows.empty()) {
      cols = rows.front().size();
    }
    Matrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      if (rows[i].size() != cols) {
        fail(ErrorKind::Validation, "ragged matrix rows");
      }
      for (std::size_t j = 0; j < cols; ++j) {
        m(i, j) = rows[i][j];
      }
    }
    return m;
  }

  Matrix Matrix::from_columns(std::vector<Vec> const& cols, std::size_t rows) {
    Matrix m(rows, cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (cols[j].size() != rows) {
        fail(ErrorKind::Validation, "column length mismatch");
      }
      for (std::size_t i = 0; i < rows; ++i) {
        m(i, j) = cols[j][i];
      }
    }
    return m;
  }

  Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) {
      m(i, i) = 1;
    }
    return m;
  }

  Vec Matrix::column(std::size_t j) const {
    Vec v(_rows);
    for (std::size_t i = 0; i < _rows; ++i) {
      v[i] = (*this)(i, j);
    }
    return v;
  }

  Vec Matrix::row(std::size_t i) const {
    return Vec(_data.begin() + static_cast<std::ptrdiff_t>(i * _cols),
               _data.begin() + static_cast<std::ptrdiff_t>((i + 1) * _cols));
  }

  std::vector<Vec> Matrix::columns() const {
    std::vector<Vec> out;
    out.reserve(_cols);
    for (std::size_t j = 0; j < _cols; ++j) {
      out.push_back(column(j));
    }
    return out;
  }

  Matrix Matrix::transpose() const {
    Matrix t(_cols, _rows);
    for (std::size_t i = 0; i < _rows; ++i) {
      for (std::size_t j = 0; j < _cols; ++j) {
        t(j, i) = (*this)(i, j);
      }
    }
    return t;
  }

  bool Matrix::is_zero() const {
    return std::all_of(_data.begin(), _data.end(), [](Int const& x) { return x == 0; });
  }

  Vec Matrix::apply(Vec const& v) const {
    if (v.size() != _cols) {
      fail(ErrorKind::Validation, "matrix-vector size mismatch");
    }
    Vec out(_rows);
    for (std::size_t i = 0; i < _rows; ++i) {
      Int acc = 0;
      for (std::size_t j = 0; j < _cols; ++j) {
        if (v[j] != 0) {
          acc += (*this)(i, j) * v[j];
        }
      }
      out[i] = std::move(acc);
    }
    return out;
  }

  Matrix operator*(Matrix const& x, Matrix const& y) {
    if (x.cols() != y.rows()) {
      fail(ErrorKind::Validation, "matrix product size mismatch");
    }
    Matrix out(x.rows(), y.cols());
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t k = 0; k < x.cols(); ++k) {
        Int const& a = x(i, k);
        if (a == 0) {
          continue;
        }
        for (std::size_t j = 0; j < y.cols(); ++j) {
          out(i, j) += a * y(k, j);
        }
      }
    }
    return out;
  }

  Matrix operator+(Matrix const& x, Matrix const& y) {
    if (x.rows() != y.rows() || x.cols() != y.cols()) {
      fail(ErrorKind::Validation, "matrix sum size mismatch");
    }
    Matrix out = x;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < x.cols(); ++j) {
        out(i, j) += y(i, j);
      }
    }
    return out;
  }

  Matrix operator-(Matrix const& x) {
    Matrix out = x;
    for (std::size_t i = 0; i < x.rows(); ++i) {
      for (std::size_t j = 0; j < x.cols(); ++j) {
        out(i, j) = -out(i, j);
      }
    }
    return out;
  }

  Matrix operator-(Matrix const& x, Matrix const& y) {
    return x + (-y);
  }

  std::string to_string(Matrix const& m) {
    std::ostringstream os;
    os << '[';
    for (std::size_t i = 0; i < m.rows(); ++i) {
      os << (i ? ",[" : "[");
      for (std::size_t j = 0; j < m.cols(); ++j) {
        os << (j ? "," : "") << m(i, j);
      }
      os << ']';
    }
    os << ']';
    return os.str();
  }

  // Fraction-free Gaussian elimination.
  Int det(Matrix const& m) {
    if (m.rows() != m.cols()) {
      fail(ErrorKind::Validation, "determinant of a non-square matrix");
    }
    std::size_t const n = m.rows();
    if (n == 0) {
      return 1;
    }
    Matrix a    = m;
    Int    sign = 1;
    Int    prev = 1;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      if (a(k, k) == 0) {
        std::size_t p = k + 1;
        while (p < n && a(p, k) == 0) {
          ++p;
        }
        if (p == n) {
          return 0;
        }
        for (std::size_t j = 0; j < n; ++j) {
          std::swap(a(k, j), a(p, j));
        }
        sign = -sign;
      }
      for (std::size_t i = k + 1; i < n; ++i) {
        for (std::size_t j = k + 1; j < n; ++j) {
          a(i, j) = (a(i, j) * a(k, k) - a(i, k) * a(k, j)) / prev;
        }
      }
      prev = a(k, k);
    }
    return sign * a(n - 1, n - 1);
  }

  bool is_unimodular(Matrix const& m) {
    if (m.rows() != m.cols()) {
      return false;
    }
    Int d = det(m);
    return d == 1 || d == -1;
  }

  ////////////////////////////////////////////////////////////////////////
  // Hermite and Smith forms
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // col_j += c * col_i on both matrices.
    void add_col(Matrix& a, std::size_t j, Int const& c, std::size_t i) {
      if (c == 0) {
        return;
      }
      for (std::size_t r = 0; r < a.rows(); ++r) {
        if (a(r, i) != 0) {
          a(r, j) += c * a(r, i);
        }
      }
    }

    void swap_cols(Matrix& a, std::size_t i, std::size_t j) {
      if (i == j) {
        return;
      }
      for (std::size_t r = 0; r < a.rows(); ++r) {
        std::swap(a(r, i), a(r, j));
      }
    }

    void negate_col(Matrix& a, std::size_t j) {
      for (std::size_t r = 0; r < a.rows(); ++r) {
        a(r, j) = -a(r, j);
      }
    }

    void add_row(Matrix& a, std::size_t i, Int const& c, std::size_t j) {
      if (c == 0) {
        return;
      }
      for (std::size_t k = 0; k < a.cols(); ++k) {
        if (a(j, k) != 0) {
          a(i, k) += c * a(j, k);
        }
      }
    }

    void swap_rows(Matrix& a, std::size_t i, std::size_t j) {
      if (i == j) {
        return;
      }
      for (std::size_t k = 0; k < a.cols(); ++k) {
        std::swap(a(i, k), a(j, k));
      }
    }

    void negate_row(Matrix& a, std::size_t i) {
      for (std::size_t k = 0; k < a.cols(); ++k) {
        a(i, k) = -a(i, k);
      }
    }

    Int abs_int(Int const& x) {
      return x < 0 ? Int(-x) : x;
    }
  }  // namespace

  HnfResult hnf(Matrix const& M) {
    HnfResult res{M, Matrix::identity(M.cols()), 0};
    Matrix&   H = res.H;
    Matrix&   U = res.U;
    std::size_t const n = M.cols();
    std::size_t       k = 0;
    for (std::size_t r = 0; r < M.rows() && k < n; ++r) {
      while (true) {
        std::size_t best = n;
        for (std::size_t j = k; j < n; ++j) {
          if (H(r, j) != 0 && (best == n || abs_int(H(r, j)) < abs_int(H(r, best)))) {
            best = j;
          }
        }
        if (best == n) {
          break;
        }
        swap_cols(H, k, best);
        swap_cols(U, k, best);
        bool clean = true;
        for (std::size_t j = k + 1; j < n; ++j) {
          if (H(r, j) == 0) {
            continue;
          }
          Int q = -(H(r, j) / H(r, k));
          add_col(H, j, q, k);
          add_col(U, j, q, k);
          if (H(r, j) != 0) {
            clean = false;
          }
        }
        if (clean) {
          break;
        }
      }
      if (k < n && H(r, k) != 0) {
        if (H(r, k) < 0) {
          negate_col(H, k);
          negate_col(U, k);
        }
        for (std::size_t j = 0; j < k; ++j) {
          Int q = -floor_div(H(r, j), H(r, k));
          add_col(H, j, q, k);
          add_col(U, j, q, k);
        }
        ++k;
      }
    }
    res.rank = k;
    return res;
  }

  SnfResult snf(Matrix const& M) {
    std::size_t const m = M.rows();
    std::size_t const n = M.cols();
    SnfResult res{M, Matrix::identity(m), Matrix::identity(n), Matrix::identity(m), Matrix::identity(n)};
    Matrix& S = res.S;

    // Elementary operations, mirrored into the transforms and their inverses.
    auto row_add = [&](std::size_t i, Int const& c, std::size_t j) {
      add_row(S, i, c, j);
      add_row(res.U, i, c, j);
      add_col(res.U_inv, j, Int(-c), i);
    };
    auto row_swap = [&](std::size_t i, std::size_t j) {
      swap_rows(S, i, j);
      swap_rows(res.U, i, j);
      swap_cols(res.U_inv, i, j);
    };
    auto row_neg = [&](std::size_t i) {
      negate_row(S, i);
      negate_row(res.U, i);
      negate_col(res.U_inv, i);
    };
    auto col_add = [&](std::size_t j, Int const& c, std::size_t i) {
      add_col(S, j, c, i);
      add_col(res.V, j, c, i);
      add_row(res.V_inv, i, Int(-c), j);
    };
    auto col_swap = [&](std::size_t i, std::size_t j) {
      swap_cols(S, i, j);
      swap_cols(res.V, i, j);
      swap_rows(res.V_inv, i, j);
    };

    for (std::size_t t = 0; t < std::min(m, n); ++t) {
      // Smallest nonzero entry of the trailing block.
      std::size_t bi = m, bj = n;
      for (std::size_t i = t; i < m; ++i) {
        for (std::size_t j = t; j < n; ++j) {
          if (S(i, j) != 0 && (bi == m || abs_int(S(i, j)) < abs_int(S(bi, bj)))) {
            bi = i;
            bj = j;
          }
        }
      }
      if (bi == m) {
        break;
      }
      row_swap(t, bi);
      col_swap(t, bj);
      while (true) {
        bool clean = true;
        for (std::size_t i = t + 1; i < m; ++i) {
          if (S(i, t) != 0) {
            row_add(i, Int(-(S(i, t) / S(t, t))), t);
            clean = clean && S(i, t) == 0;
          }
        }
        for (std::size_t j = t + 1; j < n; ++j) {
          if (S(t, j) != 0) {
            col_add(j, Int(-(S(t, j) / S(t, t))), t);
            clean = clean && S(t, j) == 0;
          }
        }
        if (!clean) {
          std::size_t ci = t, cj = t;
          for (std::size_t i = t + 1; i < m; ++i) {
            if (S(i, t) != 0 && abs_int(S(i, t)) < abs_int(S(ci, cj))) {
              ci = i;
              cj = t;
            }
          }
          for (std::size_t j = t + 1; j < n; ++j) {
            if (S(t, j) != 0 && abs_int(S(t, j)) < abs_int(S(ci, cj))) {
              ci = t;
              cj = j;
            }
          }
          row_swap(t, ci);
          col_swap(t, cj);
          continue;
        }
        // Divisibility of the trailing block by the pivot.
        std::size_t bad = m;
        for (std::size_t i = t + 1; i < m && bad == m; ++i) {
          for (std::size_t j = t + 1; j < n; ++j) {
            if (S(i, j) % S(t, t) != 0) {
              bad = i;
              break;
            }
          }
        }
        if (bad == m) {
          break;
        }
        row_add(t, Int(1), bad);
      }
      if (S(t, t) < 0) {
        row_neg(t);
      }
    }
    return res;
  }

  std::vector<Vec> integer_kernel(Matrix const& M) {
    HnfResult h = hnf(M);
    std::vector<Vec> out;
    for (std::size_t j = h.rank; j < M.cols(); ++j) {
      out.push_back(h.U.column(j));
    }
    return out;
  }

  ////////////////////////////////////////////////////////////////////////
  // Sparse vectors
  ////////////////////////////////////////////////////////////////////////

  SparseVec to_sparse(Vec const& v) {
    SparseVec out;
    for (std::size_t i = 0; i < v.size(); ++i) {
      if (v[i] != 0) {
        out.emplace_back(static_cast<std::uint32_t>(i), v[i]);
      }
    }
    return out;
  }

  Vec to_dense(SparseVec const& v, std::size_t n) {
    Vec out(n);
    for (auto const& [i, c] : v) {
      if (i >= n) {
        fail(ErrorKind::Validation, "sparse index out of range");
      }
      out[i] = c;
    }
    return out;
  }

  void axpy(SparseVec& y, Int const& c, SparseVec const& x) {
    if (c == 0 || x.empty()) {
      return;
    }
    SparseVec out;
    out.reserve(y.size() + x.size());
    auto iy = y.begin();
    auto ix = x.begin();
    while (iy != y.end() || ix != x.end()) {
      if (ix == x.end() || (iy != y.end() && iy->first < ix->first)) {
        out.push_back(std::move(*iy));
        ++iy;
      } else if (iy == y.end() || ix->first < iy->first) {
        out.emplace_back(ix->first, c * ix->second);
        ++ix;
      } else {
        Int s = iy->second + c * ix->second;
        if (s != 0) {
          out.emplace_back(iy->first, std::move(s));
        }
        ++iy;
        ++ix;
      }
    }
    y = std::move(out);
  }

  Int coefficient(SparseVec const& v, std::uint32_t index) {
    auto it = std::lower_bound(v.begin(), v.end(), index, [](auto const& e, std::uint32_t i) {
      return e.first < i;
    });
    if (it != v.end() && it->first == index) {
      return it->second;
    }
    return 0;
  }

  namespace {
    void scale(SparseVec& v, Int const& c) {
      for (auto& e : v) {
        e.second *= c;
      }
    }

    SparseVec::iterator first_at_or_after(SparseVec& v, std::uint32_t pos) {
      return std::lower_bound(v.begin(), v.end(), pos, [](auto const& e, std::uint32_t i) {
        return e.first < i;
      });
    }
  }  // namespace

  ////////////////////////////////////////////////////////////////////////
  // Lattice
  ////////////////////////////////////////////////////////////////////////

  bool Lattice::insert(SparseVec v) {
    bool grew = false;
    while (!v.empty()) {
      std::uint32_t const p = v.front().first;
      if (p >= _n) {
        fail(ErrorKind::Validation, "lattice vector outside the ambient rank");
      }
      auto it = _rows.find(p);
      if (it == _rows.end()) {
        if (v.front().second < 0) {
          scale(v, Int(-1));
        }
        _rows.emplace(p, std::move(v));
        return true;
      }
      SparseVec& row = it->second;
      Int const  d   = row.front().second;
      Int const  a   = v.front().second;
      if (a % d == 0) {
        axpy(v, Int(-(a / d)), row);
        continue;
      }
      // Replace the row by the gcd combination; v keeps the eliminated rest.
      Xgcd      x = xgcd(d, a);
      SparseVec next;
      axpy(next, x.s, row);
      axpy(next, x.t, v);
      SparseVec rest = v;
      scale(rest, Int(d / x.g));
      axpy(rest, Int(-(a / x.g)), row);
      row  = std::move(next);
      v    = std::move(rest);
      grew = true;
    }
    return grew;
  }

  SparseVec Lattice::reduce(SparseVec v) const {
    std::uint32_t pos = 0;
    while (true) {
      auto e = first_at_or_after(v, pos);
      if (e == v.end()) {
        break;
      }
      std::uint32_t const p  = e->first;
      auto                it = _rows.find(p);
      if (it != _rows.end()) {
        Int const& d = it->second.front().second;
        Int        q = floor_div(e->second, d);
        if (q != 0) {
          axpy(v, Int(-q), it->second);
        }
      }
      pos = p + 1;
    }
    return v;
  }

  Vec Lattice::reduce(Vec const& v) const {
    return to_dense(reduce(to_sparse(v)), v.size());
  }

  bool Lattice::contains(Lattice const& other) const {
    for (auto const& [p, row] : other._rows) {
      if (!contains(row)) {
        return false;
      }
    }
    return true;
  }

  std::optional<Vec> Lattice::coordinates(SparseVec v) const {
    Vec         out(_rows.size());
    std::size_t k = 0;
    for (auto const& [p, row] : _rows) {
      if (!v.empty() && v.front().first < p) {
        return std::nullopt;
      }
      Int c = coefficient(v, p);
      if (c != 0) {
        Int const& d = row.front().second;
        if (c % d != 0) {
          return std::nullopt;
        }
        out[k] = c / d;
        axpy(v, Int(-out[k]), row);
      }
      ++k;
    }
    if (!v.empty()) {
      return std::nullopt;
    }
    return out;
  }

  void Lattice::canonicalize() {
    for (auto it = _rows.begin(); it != _rows.end(); ++it) {
      SparseVec& row = it->second;
      for (auto jt = std::next(it); jt != _rows.end(); ++jt) {
        Int c = coefficient(row, jt->first);
        if (c == 0) {
          continue;
        }
        Int q = floor_div(c, jt->second.front().second);
        if (q != 0) {
          axpy(row, Int(-q), jt->second);
        }
      }
    }
  }

  std::vector<Vec> Lattice::basis() const {
    std::vector<Vec> out;
    out.reserve(_rows.size());
    for (auto const& [p, row] : _rows) {
      out.push_back(to_dense(row, _n));
    }
    return out;
  }

  Matrix Lattice::matrix() const {
    return Matrix::from_columns(basis(), _n);
  }

  bool operator==(Lattice const& x, Lattice const& y) {
    if (x._n != y._n || x._rows.size() != y._rows.size()) {
      return false;
    }
    return x.contains(y) && y.contains(x);
  }

  Lattice lattice_of(std::size_t n, std::vector<Vec> const& generators) {
    Lattice l(n);
    for (auto const& g : generators) {
      l.insert(g);
    }
    l.canonicalize();
    return l;
  }

  ////////////////////////////////////////////////////////////////////////
  // FGAbGroup
  ////////////////////////////////////////////////////////////////////////

  std::string to_string(IsoType const& t) {
    std::ostringstream os;
    os << '(' << t.free_rank << ",[";
    for (std::size_t i = 0; i < t.torsion.size(); ++i) {
      os << (i ? "," : "") << t.torsion[i];
    }
    os << "])";
    return os.str();
  }

  FGAbGroup::FGAbGroup(std::size_t n, std::vector<Vec> const& relations)
      : _relations(lattice_of(n, relations)) {}

  FGAbGroup::FGAbGroup(Lattice relations) : _relations(std::move(relations)) {
    _relations.canonicalize();
  }

  FGAbGroup FGAbGroup::cyclic_sum(std::vector<Int> const& orders) {
    std::vector<Vec> rel;
    for (std::size_t i = 0; i < orders.size(); ++i) {
      if (orders[i] != 0) {
        Vec v(orders.size());
        v[i] = orders[i];
        rel.push_back(std::move(v));
      }
    }
    return FGAbGroup(orders.size(), rel);
  }

  Vec FGAbGroup::reduce(Vec const& v) const {
    if (v.size() != rank()) {
      fail(ErrorKind::Validation, "vector length does not match group rank");
    }
    return _relations.reduce(v);
  }

  bool FGAbGroup::is_zero(Vec const& v) const {
    return _relations.contains(v);
  }

  bool FGAbGroup::equal(Vec const& v, Vec const& w) const {
    Vec d(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
      d[i] = v[i] - w[i];
    }
    return is_zero(d);
  }

  IsoType FGAbGroup::iso_type() const {
    IsoType     t;
    SnfResult   s       = snf(relations());
    std::size_t nonzero = 0;
    for (std::size_t i = 0; i < std::min(s.S.rows(), s.S.cols()); ++i) {
      if (s.S(i, i) != 0) {
        ++nonzero;
        if (s.S(i, i) != 1) {
          t.torsion.push_back(s.S(i, i));
        }
      }
    }
    t.free_rank = rank() - nonzero;
    return t;
  }

  bool FGAbGroup::is_trivial() const {
    if (!is_finite()) {
      return false;
    }
    for (auto const& [p, row] : _relations.rows()) {
      if (row.front().second != 1) {
        return false;
      }
    }
    return true;
  }

  Int FGAbGroup::order() const {
    if (!is_finite()) {
      fail(ErrorKind::InfiniteFiber, "group has positive free rank");
    }
    Int o = 1;
    for (auto const& [p, row] : _relations.rows()) {
      o *= row.front().second;
    }
    return o;
  }

  std::vector<Vec> FGAbGroup::elements() const {
    Int const o = order();
    if (o > 1'000'000) {
      fail(ErrorKind::InfiniteFiber, "group too large to enumerate");
    }
    std::size_t const n = rank();
    Vec               moduli(n);
    for (auto const& [p, row] : _relations.rows()) {
      moduli[p] = row.front().second;
    }
    std::vector<Vec> out;
    Vec              cur(n);
    auto const       count = static_cast<std::size_t>(o);
    out.reserve(count);
    for (std::size_t r = 0; r < count; ++r) {
      out.push_back(cur);
      for (std::size_t j = n; j-- > 0;) {
        if (++cur[j] < moduli[j]) {
          break;
        }
        cur[j] = 0;
      }
    }
    return out;
  }

  std::size_t FGAbGroup::index_of(Vec const& v) const {
    Vec         r   = reduce(v);
    std::size_t idx = 0;
    for (auto const& [p, row] : _relations.rows()) {
      idx = idx * static_cast<std::size_t>(row.front().second) + static_cast<std::size_t>(r[p]);
    }
    if (!is_finite()) {
      fail(ErrorKind::InfiniteFiber, "index into an infinite group");
    }
    return idx;
  }

  ////////////////////////////////////////////////////////////////////////
  // ZHom
  ////////////////////////////////////////////////////////////////////////

  ZHom::ZHom(FGAbGroup dom, FGAbGroup cod, Matrix m)
      : _dom(std::move(dom)), _cod(std::move(cod)), _m(std::move(m)) {
    if (_m.rows() != _cod.rank() || _m.cols() != _dom.rank()) {
      fail(ErrorKind::IllDefinedHom,
           "matrix is " + std::to_string(_m.rows()) + "x" + std::to_string(_m.cols())
               + ", groups have ranks " + std::to_string(_dom.rank()) + " -> "
               + std::to_string(_cod.rank()));
    }
    for (auto const& r : _dom.relation_lattice().basis()) {
      if (!_cod.is_zero(_m.apply(r))) {
        fail(ErrorKind::IllDefinedHom, "a relation of the domain maps to a nonzero element");
      }
    }
  }

  ZHom ZHom::identity(FGAbGroup const& g) {
    return ZHom(g, g, Matrix::identity(g.rank()));
  }

  ZHom ZHom::zero(FGAbGroup const& dom, FGAbGroup const& cod) {
    return ZHom(dom, cod, Matrix(cod.rank(), dom.rank()));
  }

  Vec ZHom::operator()(Vec const& v) const {
    return _cod.reduce(_m.apply(v));
  }

  bool ZHom::is_zero() const {
    for (std::size_t j = 0; j < _m.cols(); ++j) {
      if (!_cod.is_zero(_m.column(j))) {
        return false;
      }
    }
    return true;
  }

  bool ZHom::same_map(ZHom const& other) const {
    if (!(_dom == other._dom) || !(_cod == other._cod)) {
      return false;
    }
    return (*this - other).is_zero();
  }

  ZHom ZHom::after(ZHom const& g) const {
    if (!(g._cod == _dom)) {
      fail(ErrorKind::IllDefinedHom, "composition of non-matching homomorphisms");
    }
    return ZHom(g._dom, _cod, _m * g._m);
  }

  ZHom operator+(ZHom const& x, ZHom const& y) {
    return ZHom(x._dom, x._cod, x._m + y._m);
  }

  ZHom operator-(ZHom const& x) {
    return ZHom(x._dom, x._cod, -x._m);
  }

  ZHom operator-(ZHom const& x, ZHom const& y) {
    return ZHom(x._dom, x._cod, x._m - y._m);
  }

  ////////////////////////////////////////////////////////////////////////
  // Kernels, images, cokernels
  ////////////////////////////////////////////////////////////////////////

  namespace {
    // Present a sublattice S of Z^n containing the relations L of G as the
    // group S/L, with the inclusion of generators.
    SubgroupResult present_sub(FGAbGroup const& ambient, Lattice sub) {
      sub.canonicalize();
      std::vector<Vec> gens = sub.basis();
      std::vector<Vec> rel;
      for (auto const& [p, row] : ambient.relation_lattice().rows()) {
        auto c = sub.coordinates(row);
        if (!c) {
          fail(ErrorKind::Validation, "subgroup does not contain the relations");
        }
        rel.push_back(std::move(*c));
      }
      FGAbGroup g(gens.size(), rel);
      Matrix    inc = Matrix::from_columns(gens, ambient.rank());
      return {g, ZHom(g, ambient, inc)};
    }
  }  // namespace

  SubgroupResult kernel(ZHom const& f) {
    std::size_t const n = f.domain().rank();
    std::size_t const m = f.codomain().rank();
    Matrix const      B = f.codomain().relations();
    Matrix            C(m, n + B.cols());
    for (std::size_t i = 0; i < m; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        C(i, j) = f.matrix()(i, j);
      }
      for (std::size_t j = 0; j < B.cols(); ++j) {
        C(i, n + j) = B(i, j);
      }
    }
    Lattice k(n);
    for (auto const& v : integer_kernel(C)) {
      k.insert(Vec(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(n)));
    }
    for (auto const& [p, row] : f.domain().relation_lattice().rows()) {
      k.insert(row);
    }
    return present_sub(f.domain(), std::move(k));
  }

  SubgroupResult image(ZHom const& f) {
    Lattice l = f.codomain().relation_lattice();
    for (auto const& c : f.matrix().columns()) {
      l.insert(c);
    }
    return present_sub(f.codomain(), std::move(l));
  }

  SubgroupResult cokernel(ZHom const& f) {
    Lattice l = f.codomain().relation_lattice();
    for (auto const& c : f.matrix().columns()) {
      l.insert(c);
    }
    FGAbGroup q(std::move(l));
    return {q, ZHom(f.codomain(), q, Matrix::identity(q.rank()))};
  }

  std::vector<Lattice> subgroup_saturate(std::vector<FGAbGroup> const&                 groups,
                                         std::vector<std::pair<std::size_t, Vec>> const& seeds,
                                         std::vector<IndexedMap> const&                maps) {
    std::vector<Lattice> out;
    out.reserve(groups.size());
    for (auto const& g : groups) {
      out.push_back(g.relation_lattice());
    }
    std::vector<std::vector<std::size_t>> by_source(groups.size());
    for (std::size_t k = 0; k < maps.size(); ++k) {
      auto const& mp = maps[k];
      if (mp.from >= groups.size() || mp.to >= groups.size()
          || mp.m.cols() != groups[mp.from].rank() || mp.m.rows() != groups[mp.to].rank()) {
        fail(ErrorKind::Validation, "saturation map does not fit the family");
      }
      by_source[mp.from].push_back(k);
    }
    std::deque<std::pair<std::size_t, Vec>> work;
    for (auto const& [a, v] : seeds) {
      if (out.at(a).insert(v)) {
        work.emplace_back(a, v);
      }
    }
    while (!work.empty()) {
      auto [a, v] = std::move(work.front());
      work.pop_front();
      for (std::size_t k : by_source[a]) {
        auto const& mp = maps[k];
        Vec         w  = mp.m.apply(v);
        if (out[mp.to].insert(w)) {
          work.emplace_back(mp.to, std::move(w));
        }
      }
    }
    for (auto& l : out) {
      l.canonicalize();
    }
    return out;
  }

}  // namespace envring
