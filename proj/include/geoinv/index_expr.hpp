#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "geoinv/connection.hpp"

namespace geoinv::expr {

struct Pos {
  int line = 1;
  int column = 1;
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

enum class Kind { Number, Ref, Add, Sub, Mul, Div, Neg, Alt, Sym, Cd };

/// `text` holds the literal of a number or the name of a reference. For
/// alt/sym, `a` and `b` name the index pair; for cd, `a` is the new index.
struct Node {
  Kind kind;
  Pos pos;
  std::string text;
  std::string upper;
  std::string lower;
  char a = 0;
  char b = 0;
  std::vector<NodePtr> args;
};

/// Structural equality; source positions are ignored.
bool same(const Node& x, const Node& y);

NodePtr parse(std::string_view source);
std::string print(const Node& e);

/// Free indices of a checked expression, in slot order.
struct Indices {
  std::string upper;
  std::string lower;
};

Indices free_indices(const Node& e);

/// Names reserved for the Kronecker delta.
inline bool is_delta_name(std::string_view name) { return name == "d" || name == "delta"; }

template <typename Scalar>
struct Binding {
  Tensor<Scalar> value;
  std::optional<Tensor<Scalar>> grad;  // present for jet-bearing bindings
};

/// A name can carry several tensors of different valence (R{i;jmn} and R{;ij}).
template <typename Scalar>
using Bindings = std::map<std::string, std::vector<Binding<Scalar>>>;

template <typename Scalar>
void bind(Bindings<Scalar>& b, const std::string& name, const JetTensor<Scalar>& jet)
{
  b[name].push_back({jet.value, jet.grad});
}

template <typename Scalar>
void bind(Bindings<Scalar>& b, const std::string& name, const Tensor<Scalar>& t)
{
  b[name].push_back({t, std::nullopt});
}

/// Result tensor: upper slots sorted by index name, then lower slots sorted.
template <typename Scalar>
struct Result {
  Tensor<Scalar> tensor;
  std::string upper;
  std::string lower;
};

namespace detail {

template <typename Scalar>
struct Value {
  Tensor<Scalar> value;
  std::optional<Tensor<Scalar>> grad;
  std::string upper;
  std::string lower;
};

template <typename Scalar>
Scalar literal(const std::string& text)
{
  if constexpr (is_exact_v<Scalar>) {
    return parse_rational(text);
  } else {
    return static_cast<Scalar>(std::stod(text));
  }
}

template <typename Scalar>
void contract_repeated(Value<Scalar>& v)
{
  for (;;) {
    std::size_t ui = std::string::npos, li = std::string::npos;
    for (std::size_t k = 0; k < v.upper.size() && ui == std::string::npos; ++k) {
      const auto pos = v.lower.find(v.upper[k]);
      if (pos != std::string::npos) {
        ui = k;
        li = pos;
      }
    }
    if (ui == std::string::npos) return;
    v.value = contract(v.value, static_cast<int>(ui), static_cast<int>(li));
    if (v.grad) *v.grad = contract(*v.grad, static_cast<int>(ui), static_cast<int>(li));
    v.upper.erase(ui, 1);
    v.lower.erase(li, 1);
  }
}

template <typename Scalar>
Value<Scalar> reorder(const Value<Scalar>& v, const std::string& upper, const std::string& lower)
{
  std::vector<int> perm;
  for (char c : upper) perm.push_back(static_cast<int>(v.upper.find(c)));
  for (char c : lower) perm.push_back(static_cast<int>(v.upper.size() + v.lower.find(c)));
  Value<Scalar> out{permute(v.value, std::span<const int>(perm)), std::nullopt, upper, lower};
  if (v.grad) {
    perm.push_back(v.value.rank());
    out.grad = permute(*v.grad, std::span<const int>(perm));
  }
  return out;
}

template <typename Scalar>
int slot_of(const Value<Scalar>& v, char c, const Node& e)
{
  if (auto p = v.upper.find(c); p != std::string::npos) return static_cast<int>(p);
  if (auto p = v.lower.find(c); p != std::string::npos) return static_cast<int>(v.upper.size() + p);
  throw EvalError(std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column) + ": index '" + std::string(1, c) +
                  "' is not free");
}

template <typename Scalar>
struct Evaluator {
  const Bindings<Scalar>& bindings;
  const ConnectionSpace<Scalar>* space;
  int dim;

  [[noreturn]] void fail(const Node& e, const std::string& msg) const
  {
    throw EvalError(std::to_string(e.pos.line) + ":" + std::to_string(e.pos.column) + ": " + msg);
  }

  Value<Scalar> constant(Tensor<Scalar> t, std::string upper, std::string lower) const
  {
    Tensor<Scalar> g(t.dim(), t.upper(), t.lower() + 1);
    return {std::move(t), std::move(g), std::move(upper), std::move(lower)};
  }

  Value<Scalar> ref(const Node& e) const
  {
    const int up = static_cast<int>(e.upper.size());
    const int lo = static_cast<int>(e.lower.size());
    Value<Scalar> v;
    if (is_delta_name(e.text)) {
      if (up != 1 || lo != 1) fail(e, "the delta takes one upper and one lower index");
      v = constant(delta<Scalar>(dim), e.upper, e.lower);
    } else {
      auto it = bindings.find(e.text);
      if (it == bindings.end()) fail(e, "unbound name '" + e.text + "'");
      const Binding<Scalar>* hit = nullptr;
      for (const auto& b : it->second)
        if (b.value.upper() == up && b.value.lower() == lo) hit = &b;
      if (!hit) fail(e, "no binding of '" + e.text + "' with " + std::to_string(up) + " upper and " + std::to_string(lo) +
                            " lower indices");
      if (hit->value.dim() != dim) fail(e, "dimension mismatch for '" + e.text + "'");
      v = {hit->value, hit->grad, e.upper, e.lower};
    }
    contract_repeated(v);
    return v;
  }

  Value<Scalar> product(Value<Scalar> x, Value<Scalar> y) const
  {
    Value<Scalar> out;
    out.value = outer(x.value, y.value);
    if (x.grad && y.grad) out.grad = jet_mul(JetTensor<Scalar>{x.value, *x.grad}, JetTensor<Scalar>{y.value, *y.grad}).grad;
    out.upper = x.upper + y.upper;
    out.lower = x.lower + y.lower;
    contract_repeated(out);
    return out;
  }

  Value<Scalar> sum(const Node& e, Value<Scalar> x, const Value<Scalar>& y, const Scalar& sign) const
  {
    const auto yy = reorder(y, x.upper, x.lower);
    if (!x.value.same_shape(yy.value)) fail(e, "operands have different valence");
    x.value += sign * yy.value;
    if (x.grad && yy.grad)
      *x.grad += sign * *yy.grad;
    else
      x.grad.reset();
    return x;
  }

  Value<Scalar> run(const Node& e) const
  {
    switch (e.kind) {
      case Kind::Number:
        return constant(scalar_tensor<Scalar>(dim, literal<Scalar>(e.text)), "", "");
      case Kind::Ref:
        return ref(e);
      case Kind::Add:
        return sum(e, run(*e.args[0]), run(*e.args[1]), Scalar(1));
      case Kind::Sub:
        return sum(e, run(*e.args[0]), run(*e.args[1]), Scalar(-1));
      case Kind::Neg: {
        auto v = run(*e.args[0]);
        v.value = -v.value;
        if (v.grad) *v.grad = -*v.grad;
        return v;
      }
      case Kind::Mul:
        return product(run(*e.args[0]), run(*e.args[1]));
      case Kind::Div: {
        auto x = run(*e.args[0]);
        const auto y = run(*e.args[1]);
        if (y.value.rank() != 0) fail(e, "division by a tensor with free indices");
        const Scalar q = y.value[0];
        if (is_zero(q)) fail(e, "division by zero");
        const Scalar inv = Scalar(1) / q;
        if (x.grad && y.grad) {
          // (x/q)_{,k} = x_{,k}/q - x q_{,k}/q^2
          Tensor<Scalar> g = inv * *x.grad;
          g -= (inv * inv) * outer(x.value, *y.grad);
          x.grad = std::move(g);
        } else {
          x.grad.reset();
        }
        x.value = inv * x.value;
        return x;
      }
      case Kind::Alt:
      case Kind::Sym: {
        auto v = run(*e.args[0]);
        const int a = slot_of(v, e.a, e);
        const int b = slot_of(v, e.b, e);
        if (v.value.is_upper_slot(a) != v.value.is_upper_slot(b)) fail(e, "alternated indices must have the same position");
        if (e.kind == Kind::Alt) {
          v.value = alternate(v.value, a, b);
          if (v.grad) *v.grad = alternate(*v.grad, a, b);
        } else {
          v.value = sym_pair(v.value, a, b);
          if (v.grad) *v.grad = sym_pair(*v.grad, a, b);
        }
        return v;
      }
      case Kind::Cd: {
        auto v = run(*e.args[0]);
        if (!space) fail(e, "cd needs a connection space");
        if (!v.grad) fail(e, "cd needs first derivatives, and this operand has none");
        Value<Scalar> out;
        out.value = covariant_derivative(JetTensor<Scalar>{v.value, *v.grad}, space->sym().value);
        out.upper = v.upper;
        out.lower = v.lower + e.a;
        contract_repeated(out);
        return out;
      }
    }
    fail(e, "unknown node");
  }
};

}  // namespace detail

/// Evaluates a parsed expression. Repeated indices (one upper, one lower)
/// are summed; cd uses the symmetric part of `space`.
template <typename Scalar>
Result<Scalar> evaluate(const Node& e, const Bindings<Scalar>& bindings, const ConnectionSpace<Scalar>* space, int dim)
{
  free_indices(e);  // index errors surface before any arithmetic
  detail::Evaluator<Scalar> ev{bindings, space, dim};
  auto v = ev.run(e);
  std::string up = v.upper, lo = v.lower;
  std::sort(up.begin(), up.end());
  std::sort(lo.begin(), lo.end());
  auto sorted = detail::reorder(v, up, lo);
  return {std::move(sorted.value), up, lo};
}

template <typename Scalar>
Result<Scalar> evaluate(std::string_view source, const Bindings<Scalar>& bindings, const ConnectionSpace<Scalar>* space,
                        int dim)
{
  return evaluate(*parse(source), bindings, space, dim);
}

/// Entry of a result addressed by index values given in lexicographic order
/// of all free index names.
template <typename Scalar>
std::vector<int> lexicographic_permutation(const Result<Scalar>& r)
{
  std::string names = r.upper + r.lower;
  std::vector<int> order(names.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = static_cast<int>(k);
  std::sort(order.begin(), order.end(), [&](int x, int y) { return names[static_cast<std::size_t>(x)] < names[static_cast<std::size_t>(y)]; });
  return order;  // order[k] = slot holding the k-th name
}

}  // namespace geoinv::expr
