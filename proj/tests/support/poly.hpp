#pragma once

// Polynomial fields with exact coefficients, differentiated symbolically.
// Used as an oracle for jets and covariant derivatives.

#include <functional>
#include <map>
#include <vector>

#include "geoinv/jet.hpp"
#include "geoinv/random.hpp"

namespace oracle {

using geoinv::Rational;

struct Poly {
  std::map<std::vector<int>, Rational> terms;  // exponent vector -> coefficient

  Rational at(const std::vector<Rational>& x) const
  {
    Rational s(0);
    for (const auto& [e, c] : terms) {
      Rational m = c;
      for (std::size_t k = 0; k < e.size(); ++k)
        for (int p = 0; p < e[k]; ++p) m *= x[k];
      s += m;
    }
    return s;
  }

  Poly d(int k) const
  {
    Poly out;
    for (const auto& [e, c] : terms) {
      if (e[static_cast<std::size_t>(k)] == 0) continue;
      auto f = e;
      --f[static_cast<std::size_t>(k)];
      out.terms[f] += c * e[static_cast<std::size_t>(k)];
    }
    return out;
  }
};

inline Poly operator+(Poly a, const Poly& b)
{
  for (const auto& [e, c] : b.terms) a.terms[e] += c;
  return a;
}

inline Poly operator-(const Poly& a) 
{
  Poly out = a;
  for (auto& [e, c] : out.terms) c = -c;
  return out;
}

inline Poly operator-(const Poly& a, const Poly& b) { return a + (-b); }

inline Poly operator*(const Poly& a, const Poly& b)
{
  Poly out;
  for (const auto& [ea, ca] : a.terms)
    for (const auto& [eb, cb] : b.terms) {
      auto e = ea;
      for (std::size_t k = 0; k < e.size(); ++k) e[k] += eb[k];
      out.terms[e] += ca * cb;
    }
  return out;
}

/// Random polynomial of degree <= 2 in n variables.
inline Poly random_poly(int n, geoinv::Sampler& rng)
{
  Poly p;
  std::vector<int> e(static_cast<std::size_t>(n), 0);
  p.terms[e] = rng.draw<Rational>();
  for (int k = 0; k < n; ++k) {
    auto f = e;
    f[static_cast<std::size_t>(k)] = 1;
    p.terms[f] = rng.draw<Rational>();
    for (int l = k; l < n; ++l) {
      auto g = f;
      ++g[static_cast<std::size_t>(l)];
      p.terms[g] = rng.draw<Rational>();
    }
  }
  return p;
}

/// Components in flat row-major order, mirroring geoinv::Tensor.
struct PolyTensor {
  int dim = 0, upper = 0, lower = 0;
  std::vector<Poly> c;

  PolyTensor(int n, int u, int l) : dim(n), upper(u), lower(l)
  {
    std::size_t size = 1;
    for (int k = 0; k < u + l; ++k) size *= static_cast<std::size_t>(n);
    c.resize(size);
    for (auto& p : c) p.terms[std::vector<int>(static_cast<std::size_t>(n), 0)] = Rational(0);
  }

  int rank() const { return upper + lower; }

  std::size_t flat(const std::vector<int>& idx) const
  {
    std::size_t f = 0;
    for (int i : idx) f = f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(i);
    return f;
  }

  Poly& operator()(const std::vector<int>& idx) { return c[flat(idx)]; }
  const Poly& operator()(const std::vector<int>& idx) const { return c[flat(idx)]; }

  geoinv::JetTensor<Rational> jet(const std::vector<Rational>& x) const
  {
    geoinv::Tensor<Rational> v(dim, upper, lower), g(dim, upper, lower + 1);
    for (std::size_t f = 0; f < c.size(); ++f) {
      v[static_cast<Eigen::Index>(f)] = c[f].at(x);
      for (int k = 0; k < dim; ++k) g[static_cast<Eigen::Index>(f * static_cast<std::size_t>(dim) + static_cast<std::size_t>(k))] = c[f].d(k).at(x);
    }
    return {v, g};
  }
};

inline void for_each(int n, int rank, const std::function<void(const std::vector<int>&)>& f)
{
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  for (;;) {
    f(idx);
    int k = rank - 1;
    while (k >= 0 && ++idx[static_cast<std::size_t>(k)] == n) idx[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) return;
  }
}

inline PolyTensor random_field(int n, int upper, int lower, geoinv::Sampler& rng)
{
  PolyTensor t(n, upper, lower);
  for (auto& p : t.c) p = random_poly(n, rng);
  return t;
}

/// Symmetric in the two lower slots of a (1,2) field.
inline PolyTensor random_connection(int n, geoinv::Sampler& rng)
{
  PolyTensor t(n, 1, 2);
  for_each(n, 3, [&](const std::vector<int>& i) {
    if (i[1] <= i[2]) {
      t(i) = random_poly(n, rng);
      t({i[0], i[2], i[1]}) = t(i);
    }
  });
  return t;
}

/// Component-wise outer product with the same slot layout as geoinv::outer.
inline PolyTensor outer(const PolyTensor& a, const PolyTensor& b)
{
  PolyTensor out(a.dim, a.upper + b.upper, a.lower + b.lower);
  for_each(a.dim, out.rank(), [&](const std::vector<int>& i) {
    std::vector<int> ia, ib;
    for (int k = 0; k < a.upper; ++k) ia.push_back(i[static_cast<std::size_t>(k)]);
    for (int k = 0; k < b.upper; ++k) ib.push_back(i[static_cast<std::size_t>(a.upper + k)]);
    for (int k = 0; k < a.lower; ++k) ia.push_back(i[static_cast<std::size_t>(a.upper + b.upper + k)]);
    for (int k = 0; k < b.lower; ++k) ib.push_back(i[static_cast<std::size_t>(a.upper + b.upper + a.lower + k)]);
    out(i) = a(ia) * b(ib);
  });
  return out;
}

/// Covariant derivative of a polynomial field against a polynomial
/// connection, written out with symbolic partial derivatives.
inline PolyTensor covariant(const PolyTensor& t, const PolyTensor& l)
{
  const int n = t.dim;
  PolyTensor out(n, t.upper, t.lower + 1);
  for_each(n, out.rank(), [&](const std::vector<int>& i) {
    const int k = i.back();
    std::vector<int> base(i.begin(), i.end() - 1);
    Poly s = t(base).d(k);
    for (int slot = 0; slot < t.rank(); ++slot)
      for (int a = 0; a < n; ++a) {
        auto j = base;
        j[static_cast<std::size_t>(slot)] = a;
        if (slot < t.upper)
          s = s + l({base[static_cast<std::size_t>(slot)], a, k}) * t(j);
        else
          s = s - l({a, base[static_cast<std::size_t>(slot)], k}) * t(j);
      }
    out(i) = s;
  });
  return out;
}

inline std::vector<Rational> random_point(int n, geoinv::Sampler& rng)
{
  std::vector<Rational> x;
  for (int k = 0; k < n; ++k) x.push_back(rng.draw<Rational>());
  return x;
}

}  // namespace oracle
