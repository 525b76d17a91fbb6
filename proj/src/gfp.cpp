#include "cayleyci/gfp.hpp"

#include <algorithm>
#include <optional>
#include <ostream>
#include <sstream>

namespace cayleyci {

bool is_prime(std::int64_t n) {
  if (n < 2) {
    return false;
  }
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      return false;
    }
  }
  return true;
}

Modulus::Modulus(std::int64_t p) : p_(0) {
  if (p > 65521 || !is_prime(p)) {
    throw usage_error("modulus must be a prime below 2^16, got " + std::to_string(p));
  }
  p_ = static_cast<std::uint32_t>(p);
}

std::uint32_t Modulus::pow(std::uint32_t a, std::uint64_t e) const noexcept {
  std::uint32_t result = 1 % p_;
  std::uint32_t base = a % p_;
  while (e > 0) {
    if (e & 1U) {
      result = mul(result, base);
    }
    base = mul(base, base);
    e >>= 1U;
  }
  return result;
}

std::uint32_t Modulus::inv(std::uint32_t a) const {
  if (a % p_ == 0) {
    throw std::domain_error("zero has no inverse mod " + std::to_string(p_));
  }
  return pow(a, p_ - 2);
}

Modulus require_odd_prime(std::int64_t p) {
  if (p < 3 || p % 2 == 0 || !is_prime(p)) {
    throw usage_error("p must be an odd prime, got " + std::to_string(p));
  }
  return Modulus(p);
}

namespace {

void require_same(Modulus a, Modulus b) {
  if (!(a == b)) {
    throw usage_error("modulus mismatch");
  }
}

void require_dim(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw usage_error(std::string("dimension mismatch in ") + what + ": " + std::to_string(a) +
                      " vs " + std::to_string(b));
  }
}

}  // namespace

FpScalar FpScalar::operator+(FpScalar o) const {
  require_same(mod_, o.mod_);
  return {mod_.add(value_, o.value_), mod_};
}

FpScalar FpScalar::operator-(FpScalar o) const {
  require_same(mod_, o.mod_);
  return {mod_.sub(value_, o.value_), mod_};
}

FpScalar FpScalar::operator*(FpScalar o) const {
  require_same(mod_, o.mod_);
  return {mod_.mul(value_, o.value_), mod_};
}

FpVec::FpVec(std::span<const std::int64_t> values, Modulus mod) : mod_(mod) {
  coords_.reserve(values.size());
  for (auto v : values) {
    coords_.push_back(mod.reduce(v));
  }
}

FpVec::FpVec(std::initializer_list<std::int64_t> values, Modulus mod)
    : FpVec(std::span<const std::int64_t>(values.begin(), values.size()), mod) {}

FpVec FpVec::unit(std::size_t dim, std::size_t index, Modulus mod) {
  FpVec v(dim, mod);
  v.coords_.at(index) = 1;
  return v;
}

FpVec FpVec::ones(std::size_t dim, Modulus mod) {
  FpVec v(dim, mod);
  std::fill(v.coords_.begin(), v.coords_.end(), 1U);
  return v;
}

bool FpVec::is_zero() const noexcept {
  return std::all_of(coords_.begin(), coords_.end(), [](auto c) { return c == 0; });
}

FpVec& FpVec::operator+=(const FpVec& o) {
  require_same(mod_, o.mod_);
  require_dim(dim(), o.dim(), "vector add");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    coords_[i] = mod_.add(coords_[i], o.coords_[i]);
  }
  return *this;
}

FpVec& FpVec::operator-=(const FpVec& o) {
  require_same(mod_, o.mod_);
  require_dim(dim(), o.dim(), "vector sub");
  for (std::size_t i = 0; i < coords_.size(); ++i) {
    coords_[i] = mod_.sub(coords_[i], o.coords_[i]);
  }
  return *this;
}

FpVec FpVec::operator-() const {
  FpVec r = *this;
  for (auto& c : r.coords_) {
    c = mod_.neg(c);
  }
  return r;
}

FpVec FpVec::scaled(std::uint32_t c) const {
  FpVec r = *this;
  for (auto& x : r.coords_) {
    x = mod_.mul(x, c % mod_.value());
  }
  return r;
}

std::vector<std::int64_t> FpVec::to_ints() const {
  return {coords_.begin(), coords_.end()};
}

std::string FpVec::str() const {
  std::ostringstream os;
  os << *this;
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const FpVec& v) {
  os << '(';
  for (std::size_t i = 0; i < v.dim(); ++i) {
    os << (i ? "," : "") << v[i];
  }
  return os << ')';
}

FpScalar fp_dot(const FpVec& a, const FpVec& b) {
  require_same(a.modulus(), b.modulus());
  require_dim(a.dim(), b.dim(), "fp_dot");
  const auto mod = a.modulus();
  std::uint64_t acc = 0;
  for (std::size_t i = 0; i < a.dim(); ++i) {
    acc += static_cast<std::uint64_t>(a[i]) * b[i];
    // keeps acc far from overflow for p < 2^16
    if ((i & 0xFFU) == 0xFFU) {
      acc %= mod.value();
    }
  }
  return {static_cast<std::int64_t>(acc % mod.value()), mod};
}

FpMat FpMat::identity(std::size_t n, Modulus mod) {
  FpMat m(n, n, mod);
  for (std::size_t i = 0; i < n; ++i) {
    m.entries_[i * n + i] = 1;
  }
  return m;
}

FpMat FpMat::from_rows(std::span<const FpVec> rows, std::size_t cols, Modulus mod) {
  FpMat m(rows.size(), cols, mod);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    require_same(rows[r].modulus(), mod);
    require_dim(rows[r].dim(), cols, "from_rows");
    for (std::size_t c = 0; c < cols; ++c) {
      m.entries_[r * cols + c] = rows[r][c];
    }
  }
  return m;
}

FpVec FpMat::row(std::size_t r) const {
  FpVec v(cols_, mod_);
  for (std::size_t c = 0; c < cols_; ++c) {
    v.set(c, at(r, c));
  }
  return v;
}

FpVec FpMat::operator*(const FpVec& x) const {
  require_same(mod_, x.modulus());
  require_dim(cols_, x.dim(), "matrix-vector product");
  FpVec y(rows_, mod_);
  for (std::size_t r = 0; r < rows_; ++r) {
    std::uint64_t acc = 0;
    for (std::size_t c = 0; c < cols_; ++c) {
      acc = (acc + static_cast<std::uint64_t>(at(r, c)) * x[c]) % mod_.value();
    }
    y.set(r, static_cast<std::int64_t>(acc));
  }
  return y;
}

FpVec FpMat::left_multiply(const FpVec& lambda) const {
  require_same(mod_, lambda.modulus());
  require_dim(rows_, lambda.dim(), "left multiply");
  FpVec y(cols_, mod_);
  for (std::size_t c = 0; c < cols_; ++c) {
    std::uint64_t acc = 0;
    for (std::size_t r = 0; r < rows_; ++r) {
      acc = (acc + static_cast<std::uint64_t>(lambda[r]) * at(r, c)) % mod_.value();
    }
    y.set(c, static_cast<std::int64_t>(acc));
  }
  return y;
}

FpMat FpMat::operator*(const FpMat& o) const {
  require_same(mod_, o.mod_);
  require_dim(cols_, o.rows_, "matrix product");
  FpMat m(rows_, o.cols_, mod_);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t c = 0; c < o.cols_; ++c) {
      std::uint64_t acc = 0;
      for (std::size_t k = 0; k < cols_; ++k) {
        acc = (acc + static_cast<std::uint64_t>(at(r, k)) * o.at(k, c)) % mod_.value();
      }
      m.entries_[r * o.cols_ + c] = static_cast<std::uint32_t>(acc);
    }
  }
  return m;
}

FpMat FpMat::block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
  if (r0 + nr > rows_ || c0 + nc > cols_) {
    throw usage_error("block out of range");
  }
  FpMat m(nr, nc, mod_);
  for (std::size_t r = 0; r < nr; ++r) {
    for (std::size_t c = 0; c < nc; ++c) {
      m.entries_[r * nc + c] = at(r0 + r, c0 + c);
    }
  }
  return m;
}

namespace {

// Reduced row echelon form of a dense row-major working matrix, in place.
// Only the first `pivot_cols` columns are eligible for pivots. Returns the
// pivot column of each pivot row, in order.
std::vector<std::size_t> row_reduce(std::vector<std::vector<std::uint32_t>>& rows,
                                    std::size_t pivot_cols, Modulus mod) {
  std::vector<std::size_t> pivots;
  std::size_t next_row = 0;
  for (std::size_t col = 0; col < pivot_cols && next_row < rows.size(); ++col) {
    std::optional<std::size_t> found;
    for (std::size_t r = next_row; r < rows.size(); ++r) {
      if (rows[r][col] != 0) {
        found = r;
        break;
      }
    }
    if (!found) {
      continue;
    }
    std::swap(rows[next_row], rows[*found]);
    auto& prow = rows[next_row];
    const auto scale = mod.inv(prow[col]);
    for (auto& e : prow) {
      e = mod.mul(e, scale);
    }
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == next_row || rows[r][col] == 0) {
        continue;
      }
      const auto factor = rows[r][col];
      auto& target = rows[r];
      for (std::size_t c = 0; c < target.size(); ++c) {
        target[c] = mod.sub(target[c], mod.mul(factor, prow[c]));
      }
    }
    pivots.push_back(col);
    ++next_row;
  }
  return pivots;
}

std::vector<std::vector<std::uint32_t>> to_rows(const FpMat& a) {
  std::vector<std::vector<std::uint32_t>> rows(a.rows(), std::vector<std::uint32_t>(a.cols()));
  for (std::size_t r = 0; r < a.rows(); ++r) {
    for (std::size_t c = 0; c < a.cols(); ++c) {
      rows[r][c] = a.at(r, c);
    }
  }
  return rows;
}

}  // namespace

LinearResult solve_linear(const FpMat& a, const FpVec& b) {
  require_same(a.modulus(), b.modulus());
  require_dim(a.rows(), b.dim(), "solve_linear");
  const auto mod = a.modulus();
  const std::size_t m = a.rows();
  const std::size_t n = a.cols();

  // [A | b | I_m]: the identity block records which combination of the
  // original rows each working row is.
  auto rows = to_rows(a);
  for (std::size_t r = 0; r < m; ++r) {
    rows[r].push_back(b[r]);
    for (std::size_t k = 0; k < m; ++k) {
      rows[r].push_back(r == k ? 1U : 0U);
    }
  }
  const auto pivots = row_reduce(rows, n, mod);

  for (std::size_t r = pivots.size(); r < m; ++r) {
    if (rows[r][n] == 0) {
      continue;
    }
    // 0 = rows[r][n] != 0; normalise so that lambda^T b = 1.
    const auto scale = mod.inv(rows[r][n]);
    FpVec lambda(m, mod);
    for (std::size_t k = 0; k < m; ++k) {
      lambda.set(k, mod.mul(rows[r][n + 1 + k], scale));
    }
    if (!a.left_multiply(lambda).is_zero() || fp_dot(lambda, b).value() != 1) {
      throw invariant_error("solve_linear produced an invalid infeasibility witness");
    }
    return Infeasible{std::move(lambda)};
  }

  FpVec x(n, mod);
  for (std::size_t r = 0; r < pivots.size(); ++r) {
    x.set(pivots[r], rows[r][n]);
  }
  if (!(a * x == b)) {
    throw invariant_error("solve_linear produced a vector that does not solve the system");
  }
  return Solution{std::move(x)};
}

std::size_t mat_rank(const FpMat& a) {
  auto rows = to_rows(a);
  return row_reduce(rows, a.cols(), a.modulus()).size();
}

std::vector<FpVec> nullspace_basis(const FpMat& a) {
  const auto mod = a.modulus();
  auto rows = to_rows(a);
  const auto pivots = row_reduce(rows, a.cols(), mod);
  std::vector<bool> is_pivot(a.cols(), false);
  for (auto c : pivots) {
    is_pivot[c] = true;
  }
  std::vector<FpVec> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) {
      continue;
    }
    FpVec v(a.cols(), mod);
    v.set(free, 1);
    for (std::size_t r = 0; r < pivots.size(); ++r) {
      v.set(pivots[r], mod.neg(rows[r][free]));
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

std::vector<FpVec> hyperplane_basis(const FpVec& w) {
  if (w.is_zero()) {
    throw usage_error("hyperplane functional must be nonzero");
  }
  const FpVec rows[] = {w};
  return nullspace_basis(FpMat::from_rows(rows, w.dim(), w.modulus()));
}

}  // namespace cayleyci
