#include "cayleyci/polyring.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace cayleyci {

// ---- Monomial ----

Monomial Monomial::variable(std::size_t nvars, std::size_t i, std::uint16_t power) {
  std::vector<std::uint16_t> e(nvars, 0);
  e.at(i) = power;
  return Monomial(std::move(e));
}

Monomial Monomial::from_support(std::size_t nvars, std::span<const std::size_t> support) {
  std::vector<std::uint16_t> e(nvars, 0);
  for (auto i : support) {
    e.at(i) = 1;
  }
  return Monomial(std::move(e));
}

unsigned Monomial::degree() const noexcept {
  return std::accumulate(exps_.begin(), exps_.end(), 0U);
}

unsigned Monomial::support() const noexcept {
  return static_cast<unsigned>(std::count_if(exps_.begin(), exps_.end(), [](auto e) { return e > 0; }));
}

bool Monomial::is_multilinear() const noexcept {
  return std::all_of(exps_.begin(), exps_.end(), [](auto e) { return e <= 1; });
}

std::vector<std::size_t> Monomial::support_indices() const {
  std::vector<std::size_t> idx;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] > 0) {
      idx.push_back(i);
    }
  }
  return idx;
}

Monomial Monomial::operator*(const Monomial& o) const {
  if (nvars() != o.nvars()) {
    throw usage_error("monomial variable count mismatch");
  }
  auto e = exps_;
  for (std::size_t i = 0; i < e.size(); ++i) {
    e[i] = static_cast<std::uint16_t>(e[i] + o.exps_[i]);
  }
  return Monomial(std::move(e));
}

std::string Monomial::str() const {
  std::string out;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] == 0) {
      continue;
    }
    if (!out.empty()) {
      out += '*';
    }
    out += "x" + std::to_string(i + 1);
    if (exps_[i] > 1) {
      out += "^" + std::to_string(exps_[i]);
    }
  }
  return out.empty() ? "1" : out;
}

FpRing::value_type FpRing::from_big(const BigInt& v) const {
  BigInt r = v % mod.value();
  if (r < 0) {
    r += mod.value();
  }
  return r.convert_to<std::uint32_t>();
}

// ---- Poly ----

template <class Ring>
Poly<Ring> Poly<Ring>::constant(std::size_t nvars, Ring ring, const coeff_type& c) {
  Poly p(nvars, ring);
  p.add_term(Monomial::one(nvars), c);
  return p;
}

template <class Ring>
Poly<Ring> Poly<Ring>::variable(std::size_t nvars, std::size_t i, Ring ring) {
  Poly p(nvars, ring);
  p.add_term(Monomial::variable(nvars, i), ring.from_int(1));
  return p;
}

template <class Ring>
Poly<Ring> Poly<Ring>::term(const Monomial& m, const coeff_type& c, Ring ring) {
  Poly p(m.nvars(), ring);
  p.add_term(m, c);
  return p;
}

template <class Ring>
bool Poly<Ring>::is_constant() const {
  return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.degree() == 0);
}

template <class Ring>
typename Poly<Ring>::coeff_type Poly<Ring>::constant_term() const {
  return coeff(Monomial::one(nvars_));
}

template <class Ring>
typename Poly<Ring>::coeff_type Poly<Ring>::coeff(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? ring_.from_int(0) : it->second;
}

template <class Ring>
void Poly<Ring>::add_term(const Monomial& m, const coeff_type& c) {
  if (m.nvars() != nvars_) {
    throw usage_error("monomial has " + std::to_string(m.nvars()) + " variables, polynomial has " +
                      std::to_string(nvars_));
  }
  if (ring_.is_zero(c)) {
    return;
  }
  auto [it, inserted] = terms_.try_emplace(m, c);
  if (!inserted) {
    it->second = ring_.add(it->second, c);
    if (ring_.is_zero(it->second)) {
      terms_.erase(it);
    }
  }
}

template <class Ring>
void Poly<Ring>::require_compatible(const Poly& o) const {
  if (nvars_ != o.nvars_ || !(ring_ == o.ring_)) {
    throw usage_error("incompatible polynomials");
  }
}

template <class Ring>
Poly<Ring>& Poly<Ring>::operator+=(const Poly& o) {
  require_compatible(o);
  for (const auto& [m, c] : o.terms_) {
    add_term(m, c);
  }
  return *this;
}

template <class Ring>
Poly<Ring>& Poly<Ring>::operator-=(const Poly& o) {
  require_compatible(o);
  for (const auto& [m, c] : o.terms_) {
    add_term(m, ring_.sub(ring_.from_int(0), c));
  }
  return *this;
}

template <class Ring>
Poly<Ring> Poly<Ring>::operator-() const {
  Poly r(nvars_, ring_);
  r -= *this;
  return r;
}

template <class Ring>
Poly<Ring> Poly<Ring>::operator*(const Poly& o) const {
  require_compatible(o);
  Poly r(nvars_, ring_);
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : o.terms_) {
      r.add_term(m1 * m2, ring_.mul(c1, c2));
    }
  }
  return r;
}

template <class Ring>
Poly<Ring> Poly<Ring>::scaled(const coeff_type& c) const {
  Poly r(nvars_, ring_);
  for (const auto& [m, x] : terms_) {
    r.add_term(m, ring_.mul(x, c));
  }
  return r;
}

template <class Ring>
Poly<Ring> Poly<Ring>::pow(unsigned e) const {
  Poly result = constant(nvars_, ring_, ring_.from_int(1));
  for (unsigned i = 0; i < e; ++i) {
    result = result * *this;
  }
  return result;
}

template <class Ring>
std::string Poly<Ring>::str() const {
  if (terms_.empty()) {
    return "0";
  }
  std::string out;
  // highest monomial first reads more naturally
  for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
    if (!out.empty()) {
      out += " + ";
    }
    const auto& [m, c] = *it;
    const auto cs = ring_.str(c);
    if (m.degree() == 0) {
      out += cs;
    } else if (cs == "1") {
      out += m.str();
    } else {
      out += cs + "*" + m.str();
    }
  }
  return out;
}

template class Poly<IntRing>;
template class Poly<FpRing>;

FpPoly reduce_mod(const IntPoly& f, Modulus mod) {
  FpRing ring{mod};
  FpPoly r(f.nvars(), ring);
  for (const auto& [m, c] : f.terms()) {
    r.add_term(m, ring.from_big(c));
  }
  return r;
}

ExactDivision divide_exact(const IntPoly& f, const BigInt& d) {
  IntPoly q(f.nvars(), IntRing{});
  for (const auto& [m, c] : f.terms()) {
    if (c % d != 0) {
      return {std::nullopt, m};
    }
    q.add_term(m, c / d);
  }
  return {std::move(q), std::nullopt};
}

namespace {

template <class Ring>
Poly<Ring> shifted(const Poly<Ring>& f, const std::vector<typename Ring::value_type>& alpha) {
  using coeff_type = typename Ring::value_type;
  const auto& ring = f.ring();
  if (alpha.size() != f.nvars()) {
    throw usage_error("shift vector has " + std::to_string(alpha.size()) + " entries, polynomial has " +
                      std::to_string(f.nvars()) + " variables");
  }
  Poly<Ring> out(f.nvars(), ring);
  struct Partial {
    std::vector<std::uint16_t> exps;
    coeff_type coeff;
  };
  std::vector<Partial> partials;
  std::vector<Partial> next;
  for (const auto& [m, c] : f.terms()) {
    partials.assign(1, Partial{std::vector<std::uint16_t>(f.nvars(), 0), c});
    for (std::size_t i = 0; i < f.nvars(); ++i) {
      const unsigned e = m[i];
      if (e == 0) {
        continue;
      }
      if (ring.is_zero(alpha[i])) {
        for (auto& part : partials) {
          part.exps[i] = static_cast<std::uint16_t>(e);
        }
        continue;
      }
      // (x_i + a)^e = sum_j C(e, j) a^(e-j) x_i^j
      std::vector<coeff_type> apow(e + 1, ring.from_int(1));
      for (unsigned j = 1; j <= e; ++j) {
        apow[j] = ring.mul(apow[j - 1], alpha[i]);
      }
      next.clear();
      for (const auto& part : partials) {
        for (unsigned j = 0; j <= e; ++j) {
          auto factor = ring.mul(ring.from_big(binomial(e, j)), apow[e - j]);
          if (ring.is_zero(factor)) {
            continue;
          }
          Partial q{part.exps, ring.mul(part.coeff, factor)};
          q.exps[i] = static_cast<std::uint16_t>(j);
          next.push_back(std::move(q));
        }
      }
      std::swap(partials, next);
    }
    for (auto& part : partials) {
      out.add_term(Monomial(std::move(part.exps)), part.coeff);
    }
  }
  return out;
}

}  // namespace

FpPoly delta(const FpPoly& f, const FpVec& alpha) {
  if (!(alpha.modulus() == f.ring().mod)) {
    throw usage_error("delta: modulus mismatch");
  }
  std::vector<std::uint32_t> a(alpha.coords().begin(), alpha.coords().end());
  return shifted(f, a) - f;
}

IntPoly delta(const IntPoly& f, std::span<const std::int64_t> alpha) {
  std::vector<BigInt> a(alpha.begin(), alpha.end());
  return shifted(f, a) - f;
}

FpScalar eval(const FpPoly& f, const FpVec& x) {
  const auto mod = f.ring().mod;
  if (x.dim() != f.nvars() || !(x.modulus() == mod)) {
    throw usage_error("eval: point does not match polynomial");
  }
  std::uint32_t acc = 0;
  for (const auto& [m, c] : f.terms()) {
    std::uint32_t t = c;
    for (std::size_t i = 0; i < m.nvars() && t != 0; ++i) {
      if (m[i] != 0) {
        t = mod.mul(t, mod.pow(x[i], m[i]));
      }
    }
    acc = mod.add(acc, t);
  }
  return {acc, mod};
}

BigInt eval(const IntPoly& f, std::span<const std::int64_t> x) {
  if (x.size() != f.nvars()) {
    throw usage_error("eval: point does not match polynomial");
  }
  BigInt acc = 0;
  for (const auto& [m, c] : f.terms()) {
    BigInt t = c;
    for (std::size_t i = 0; i < m.nvars(); ++i) {
      if (m[i] != 0) {
        t *= boost::multiprecision::pow(BigInt(x[i]), m[i]);
      }
    }
    acc += t;
  }
  return acc;
}

// ---- combinatorics ----

BigInt factorial(unsigned n) {
  BigInt r = 1;
  for (unsigned i = 2; i <= n; ++i) {
    r *= i;
  }
  return r;
}

BigInt binomial(unsigned n, unsigned k) {
  if (k > n) {
    return 0;
  }
  k = std::min(k, n - k);
  BigInt r = 1;
  for (unsigned i = 1; i <= k; ++i) {
    r = r * (n - k + i) / i;
  }
  return r;
}

std::vector<std::vector<std::size_t>> k_subsets(std::size_t n, std::size_t k) {
  std::vector<std::vector<std::size_t>> out;
  if (k > n) {
    return out;
  }
  std::vector<std::size_t> cur(k);
  std::iota(cur.begin(), cur.end(), 0);
  while (true) {
    out.push_back(cur);
    // advance to the next combination in lexicographic order
    std::size_t i = k;
    while (i > 0 && cur[i - 1] == n - k + i - 1) {
      --i;
    }
    if (i == 0) {
      break;
    }
    ++cur[i - 1];
    for (std::size_t j = i; j < k; ++j) {
      cur[j] = cur[j - 1] + 1;
    }
  }
  return out;
}

std::vector<Monomial> monomials_of_degree(std::size_t nvars, unsigned d) {
  std::vector<Monomial> out;
  std::vector<std::uint16_t> e(nvars, 0);
  auto rec = [&](auto&& self, std::size_t i, unsigned left) -> void {
    if (i + 1 == nvars) {
      e[i] = static_cast<std::uint16_t>(left);
      out.emplace_back(e);
      return;
    }
    for (unsigned x = 0; x <= left; ++x) {
      e[i] = static_cast<std::uint16_t>(x);
      self(self, i + 1, left - x);
    }
  };
  if (nvars > 0) {
    rec(rec, 0, d);
  }
  return out;
}

std::vector<Monomial> multilinear_monomials(std::size_t nvars, unsigned d) {
  std::vector<Monomial> out;
  for (const auto& s : k_subsets(nvars, d)) {
    out.push_back(Monomial::from_support(nvars, s));
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---- rank 2p+3 polynomials ----

std::vector<Monomial> monomials_M(std::int64_t p) {
  require_odd_prime(p);
  auto all = monomials_of_degree(static_cast<std::size_t>(p + 1), static_cast<unsigned>(p));
  std::erase_if(all, [](const Monomial& m) { return m.support() < 2; });
  return all;
}

std::pair<std::vector<Monomial>, std::vector<Monomial>> split_by_variable(
    std::span<const Monomial> monomials, std::size_t i) {
  std::pair<std::vector<Monomial>, std::vector<Monomial>> out;
  for (const auto& m : monomials) {
    (m[i] == 0 ? out.first : out.second).push_back(m);
  }
  return out;
}

BigInt multinomial_c(const Monomial& n, std::int64_t p) {
  require_odd_prime(p);
  if (n.degree() != p || n.support() < 2) {
    throw usage_error("multinomial_c: " + n.str() + " is not a degree-" + std::to_string(p) +
                      " monomial in at least two variables");
  }
  BigInt denom = 1;
  for (auto e : n.exps()) {
    denom *= factorial(e);
  }
  const BigInt num = factorial(static_cast<unsigned>(p - 1));
  if (num % denom != 0) {
    throw invariant_error("multinomial_c: non-integral quotient for " + n.str());
  }
  return num / denom;
}

std::vector<FpPoly> build_r(std::int64_t p) {
  const auto mod = require_odd_prime(p);
  const FpRing ring{mod};
  const auto nvars = static_cast<std::size_t>(p + 1);
  std::vector<FpPoly> r(nvars + 1, FpPoly(nvars, ring));
  for (const auto& n : monomials_M(p)) {
    const auto k = static_cast<std::int64_t>(n.support());
    const auto c = ring.from_big(multinomial_c(n, p));
    r[0].add_term(n, ring.mul(ring.from_int(k - 2), c));
    for (std::size_t i = 1; i <= nvars; ++i) {
      const std::int64_t weight = n[i - 1] == 0 ? 1 - k : 2 - k;
      r[i].add_term(n, ring.mul(ring.from_int(weight), c));
    }
  }
  return r;
}

std::vector<FpPoly> build_l(std::int64_t p) {
  const auto mod = require_odd_prime(p);
  const FpRing ring{mod};
  const auto nvars = static_cast<std::size_t>(2 * p - 1);
  std::vector<FpPoly> l(nvars, FpPoly(nvars, ring));
  for (const auto& n : multilinear_monomials(nvars, static_cast<unsigned>(p))) {
    for (std::size_t i = 0; i < nvars; ++i) {
      if (n[i] == 0) {
        l[i].add_term(n, 1);
      }
    }
  }
  return l;
}

// ---- identity checks ----

namespace {

template <class Ring>
void compare_polys(Verdict& v, const Poly<Ring>& lhs, const Poly<Ring>& rhs) {
  ++v.items_checked;
  const auto diff = lhs - rhs;
  if (!diff.is_zero()) {
    const auto& [m, c] = *diff.terms().begin();
    v.fail("coefficient of " + m.str() + " differs by " + diff.ring().str(c));
  }
}

IntPoly sum_of_variables(std::size_t nvars) {
  IntPoly s(nvars, IntRing{});
  for (std::size_t i = 0; i < nvars; ++i) {
    s.add_term(Monomial::variable(nvars, i), 1);
  }
  return s;
}

}  // namespace

Verdict check_lemma1(std::int64_t p) {
  require_odd_prime(p);
  const auto nvars = static_cast<std::size_t>(p + 1);
  const auto pe = static_cast<unsigned>(p);
  const auto M = monomials_M(p);
  const auto s = sum_of_variables(nvars);

  Verdict out{.check = "lemma1", .detail = "power sums of s and s_i expanded over Z"};

  Verdict a{.check = "lemma1(a)", .detail = "s^p = sum x_j^p + sum_M p c_n x^n"};
  IntPoly rhs(nvars, IntRing{});
  for (std::size_t j = 0; j < nvars; ++j) {
    rhs.add_term(Monomial::variable(nvars, j, static_cast<std::uint16_t>(p)), 1);
  }
  for (const auto& n : M) {
    rhs.add_term(n, BigInt(p) * multinomial_c(n, p));
  }
  compare_polys(a, s.pow(pe), rhs);
  out.add_part(std::move(a));

  for (std::size_t i = 0; i < nvars; ++i) {
    Verdict b{.check = "lemma1(b) i=" + std::to_string(i + 1),
              .detail = "s_i^p = sum_{j!=i} x_j^p + sum_{M_i^0} p c_n x^n"};
    const auto si = s - IntPoly::variable(nvars, i, IntRing{});
    IntPoly rhs_i(nvars, IntRing{});
    for (std::size_t j = 0; j < nvars; ++j) {
      if (j != i) {
        rhs_i.add_term(Monomial::variable(nvars, j, static_cast<std::uint16_t>(p)), 1);
      }
    }
    for (const auto& n : split_by_variable(M, i).first) {
      rhs_i.add_term(n, BigInt(p) * multinomial_c(n, p));
    }
    compare_polys(b, si.pow(pe), rhs_i);
    out.add_part(std::move(b));
  }
  return out;
}

Verdict check_lemma2(std::int64_t p) {
  const auto mod = require_odd_prime(p);
  const auto nvars = static_cast<std::size_t>(p + 1);
  const auto pe = static_cast<unsigned>(p);
  const FpRing ring{mod};

  Verdict out{.check = "lemma2", .detail = "sum r_j = (p s^p - sum s_j^p)/p = sum_M (k-1) c_n x^n"};

  const auto r = build_r(p);
  FpPoly lhs(nvars, ring);
  for (const auto& rj : r) {
    lhs += rj;
  }

  const auto s = sum_of_variables(nvars);
  IntPoly numerator = s.pow(pe).scaled(BigInt(p));
  for (std::size_t j = 0; j < nvars; ++j) {
    numerator -= (s - IntPoly::variable(nvars, j, IntRing{})).pow(pe);
  }

  Verdict div{.check = "lemma2 divisibility", .detail = "every coefficient of p s^p - sum s_j^p divisible by p"};
  div.items_checked = numerator.size();
  auto q = divide_exact(numerator, BigInt(p));
  if (!q.quotient) {
    div.fail("coefficient of " + q.failing->str() + " not divisible by p");
    out.add_part(std::move(div));
    return out;
  }
  out.add_part(std::move(div));
  const auto rhs = reduce_mod(*q.quotient, mod);

  FpPoly closed(nvars, ring);
  for (const auto& n : monomials_M(p)) {
    const auto k = static_cast<std::int64_t>(n.support());
    closed.add_term(n, ring.mul(ring.from_int(k - 1), ring.from_big(multinomial_c(n, p))));
  }

  Verdict eq1{.check = "lemma2 sum r_j vs quotient"};
  compare_polys(eq1, lhs, rhs);
  out.add_part(std::move(eq1));
  Verdict eq2{.check = "lemma2 quotient vs closed form"};
  compare_polys(eq2, rhs, closed);
  out.add_part(std::move(eq2));
  return out;
}

Verdict check_lemma5(std::int64_t p, const Monomial& n, std::span<const std::uint8_t> m) {
  require_odd_prime(p);
  const auto nvars = static_cast<std::size_t>(2 * p - 1);
  if (n.nvars() != nvars || !n.is_multilinear() || n.degree() != p) {
    throw usage_error("check_lemma5: n must be a multilinear degree-p monomial in 2p-1 variables");
  }
  if (m.size() != nvars || std::any_of(m.begin(), m.end(), [](auto b) { return b > 1; })) {
    throw usage_error("check_lemma5: m must be a 0/1 vector of length 2p-1");
  }

  std::string mstr;
  for (auto b : m) {
    mstr += static_cast<char>('0' + b);
  }
  Verdict v{.check = "lemma5 n=" + n.str() + " m=" + mstr,
            .detail = "Delta_m x^n = x^(n\\m) * sum_{k proper subset of n&m} x^k"};

  std::vector<std::int64_t> shift(m.begin(), m.end());
  const auto direct = delta(IntPoly::term(n, 1, IntRing{}), shift);

  std::vector<std::size_t> common;
  std::vector<std::uint16_t> outside(nvars, 0);
  for (std::size_t i = 0; i < nvars; ++i) {
    if (n[i] == 1 && m[i] == 1) {
      common.push_back(i);
    } else if (n[i] == 1) {
      outside[i] = 1;
    }
  }
  IntPoly closed(nvars, IntRing{});
  const Monomial prefix(outside);
  // proper subsets of the common support, by bitmask
  const std::size_t full = std::size_t{1} << common.size();
  for (std::size_t mask = 0; mask + 1 < full; ++mask) {
    std::vector<std::size_t> k;
    for (std::size_t b = 0; b < common.size(); ++b) {
      if (mask >> b & 1U) {
        k.push_back(common[b]);
      }
    }
    closed.add_term(prefix * Monomial::from_support(nvars, k), 1);
  }
  compare_polys(v, direct, closed);
  return v;
}

Verdict check_lemma6(std::int64_t p) {
  const auto mod = require_odd_prime(p);
  const auto nvars = static_cast<std::size_t>(2 * p - 1);
  const FpRing ring{mod};
  const auto l = build_l(p);

  Verdict out{.check = "lemma6", .detail = "difference identities for l_1..l_{2p-1}"};

  FpPoly total(nvars, ring);
  for (const auto& li : l) {
    total += li;
  }

  for (std::size_t i = 0; i < nvars; ++i) {
    Verdict a{.check = "lemma6(a) i=" + std::to_string(i + 1), .detail = "Delta_{e_i} l_i = 0"};
    compare_polys(a, delta(l[i], FpVec::unit(nvars, i, mod)), FpPoly(nvars, ring));
    out.add_part(std::move(a));
  }

  Verdict b{.check = "lemma6(b)", .detail = "Delta_{sum e_j}(sum l_j) = -1"};
  compare_polys(b, delta(total, FpVec::ones(nvars, mod)), FpPoly::constant(nvars, ring, mod.neg(1)));
  out.add_part(std::move(b));

  for (std::size_t i = 0; i < nvars; ++i) {
    Verdict c{.check = "lemma6(c) i=" + std::to_string(i + 1),
              .detail = "Delta_{sum_{j!=i} e_j}(l_i + sum l_j) = 0"};
    auto shift = FpVec::ones(nvars, mod);
    shift.set(i, 0);
    compare_polys(c, delta(l[i] + total, shift), FpPoly(nvars, ring));
    out.add_part(std::move(c));
  }

  const auto pu = static_cast<unsigned>(p);
  Verdict binom{.check = "lemma6 binomials",
                .detail = "C(2p-1-j, p-j) = 0 for 1<=j<p; C(2p-1, p) = 1; C(2p-2-j, p-1-j) = 0 for j<p-1 (mod p)"};
  for (unsigned j = 1; j < pu; ++j) {
    ++binom.items_checked;
    if (binomial(2 * pu - 1 - j, pu - j) % p != 0) {
      binom.fail("C(" + std::to_string(2 * pu - 1 - j) + "," + std::to_string(pu - j) + ") not divisible by p");
    }
  }
  ++binom.items_checked;
  if (binomial(2 * pu - 1, pu) % p != 1) {
    binom.fail("C(2p-1,p) is not 1 mod p");
  }
  for (unsigned j = 0; j + 1 < pu; ++j) {
    ++binom.items_checked;
    if (binomial(2 * pu - 2 - j, pu - 1 - j) % p != 0) {
      binom.fail("C(" + std::to_string(2 * pu - 2 - j) + "," + std::to_string(pu - 1 - j) +
                 ") not divisible by p");
    }
  }
  out.add_part(std::move(binom));
  return out;
}

Verdict check_power_congruence(std::int64_t p) {
  require_odd_prime(p);
  Verdict v{.check = "power congruence", .detail = "(t+p)^p - t^p = 0 mod p^2 coefficientwise"};
  const auto t = IntPoly::variable(1, 0, IntRing{});
  const auto shifted_t = t + IntPoly::constant(1, IntRing{}, BigInt(p));
  const auto diff = shifted_t.pow(static_cast<unsigned>(p)) - t.pow(static_cast<unsigned>(p));
  const BigInt p2 = BigInt(p) * p;
  for (const auto& [m, c] : diff.terms()) {
    ++v.items_checked;
    if (c % p2 != 0) {
      v.fail("coefficient " + c.str() + " of " + m.str() + " not divisible by p^2");
    }
  }
  return v;
}

}  // namespace cayleyci
