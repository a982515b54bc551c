// Copyright 2026 The riskagent Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "riskagent/lang/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "riskagent/util/strings.hpp"

namespace riskagent::lang {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double v) { return util::format_double(v); }

// ---------------------------------------------------------------------------
// Scalar core shared by both evaluators. Any failure throws EvalError.

[[noreturn]] void domain_error(std::string op, std::vector<double> args, const std::string& what) {
  std::string msg = "domain error in '" + op + "'";
  if (!args.empty()) {
    msg += " with operand";
    msg += args.size() > 1 ? "s " : " ";
    for (std::size_t i = 0; i < args.size(); ++i) msg += (i ? ", " : "") + fmt(args[i]);
  }
  msg += ": " + what;
  throw EvalError(std::move(op), std::move(args), msg);
}

double checked(double result, std::string_view op, std::vector<double> args) {
  if (!std::isfinite(result)) domain_error(std::string(op), std::move(args), "result is not finite");
  return result;
}

double apply_arith(BinaryOp op, double a, double b) {
  auto name = to_string(op);
  switch (op) {
    case BinaryOp::add: return checked(a + b, name, {a, b});
    case BinaryOp::sub: return checked(a - b, name, {a, b});
    case BinaryOp::mul: return checked(a * b, name, {a, b});
    case BinaryOp::div:
      if (b == 0.0) domain_error("/", {a, b}, "division by zero");
      return checked(a / b, name, {a, b});
    default: break;
  }
  throw std::logic_error("not an arithmetic operator");
}

double apply_builtin(Builtin fn, std::span<const double> x) {
  auto name = to_string(fn);
  std::vector<double> args(x.begin(), x.end());
  switch (fn) {
    case Builtin::exp: return checked(std::exp(x[0]), name, args);
    case Builtin::ln:
      if (x[0] <= 0.0) domain_error("ln", args, "logarithm of a non-positive number");
      return std::log(x[0]);
    case Builtin::log10:
      if (x[0] <= 0.0) domain_error("log10", args, "logarithm of a non-positive number");
      return std::log10(x[0]);
    case Builtin::sqrt:
      if (x[0] < 0.0) domain_error("sqrt", args, "square root of a negative number");
      return std::sqrt(x[0]);
    case Builtin::pow: return checked(std::pow(x[0], x[1]), name, args);
    case Builtin::abs: return std::fabs(x[0]);
    case Builtin::min: return std::min(x[0], x[1]);
    case Builtin::max: return std::max(x[0], x[1]);
    case Builtin::floor: return std::floor(x[0]);
    case Builtin::ceil: return std::ceil(x[0]);
    case Builtin::round: return std::round(x[0]);
  }
  throw std::logic_error("unknown builtin");
}

bool compare(BinaryOp op, double a, double b) {
  switch (op) {
    case BinaryOp::lt: return a < b;
    case BinaryOp::le: return a <= b;
    case BinaryOp::gt: return a > b;
    case BinaryOp::ge: return a >= b;
    case BinaryOp::eq: return a == b;
    case BinaryOp::ne: return a != b;
    default: break;
  }
  throw std::logic_error("not a comparison");
}

bool is_arith(BinaryOp op) {
  return op == BinaryOp::add || op == BinaryOp::sub || op == BinaryOp::mul || op == BinaryOp::div;
}

// ---------------------------------------------------------------------------
// Binding validation

void check_unit(const ParamDecl& p, const BindingEntry& e) {
  if (e.unit && p.unit && *e.unit != *p.unit)
    throw BindingError(p.name, "unit \"" + *e.unit + "\" does not match declared unit \"" + *p.unit + "\"");
}

Value validated_exact(const ParamDecl& p, const BindingEntry& e) {
  switch (p.kind) {
    case ParamKind::boolean:
      if (!std::holds_alternative<bool>(e.value)) throw BindingError(p.name, "expected true or false");
      return e.value;
    case ParamKind::number: {
      if (!std::holds_alternative<double>(e.value)) throw BindingError(p.name, "expected a number");
      double v = std::get<double>(e.value);
      if (!std::isfinite(v)) throw BindingError(p.name, "value is not finite");
      check_unit(p, e);
      if (p.domain && !p.domain->contains(v))
        throw BindingError(p.name, "value " + fmt(v) + " is outside the declared domain");
      return e.value;
    }
    case ParamKind::enumeration: {
      if (!std::holds_alternative<std::string>(e.value)) throw BindingError(p.name, "expected an enum label");
      const auto& label = std::get<std::string>(e.value);
      if (!p.has_label(label)) throw BindingError(p.name, "label \"" + label + "\" is not in the declared label set");
      return e.value;
    }
  }
  throw std::logic_error("unknown parameter kind");
}

void check_known_names(const Program& prog, const Binding& binding) {
  for (const auto& [name, entry] : binding)
    if (!prog.find_param(name)) throw BindingError(name, "no such parameter");
}

void attach_bands(EvalOutcome& out, std::span<const InterpretationBand> bands) {
  if (bands.empty()) return;
  for (auto& o : out.outputs) {
    auto mine = bands_for(bands, o.name);
    o.bands = o.is_point() && !out.ranged ? band_lookup(mine, o.lo) : band_lookup(mine, o.lo, o.hi);
  }
}

// ---------------------------------------------------------------------------
// Point evaluation

class PointEvaluator {
 public:
  PointEvaluator(const Program& p, std::vector<Value> params)
      : prog_(p), params_(std::move(params)), lets_(p.lets.size()) {}

  Value eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::number: return e.number;
      case Expr::Kind::boolean: return e.boolean;
      case Expr::Kind::label: return e.text;
      case Expr::Kind::ident: {
        auto slot = static_cast<std::size_t>(e.slot);
        if (!e.is_let) return params_.at(slot);
        // Lets are evaluated on first use, so a let that is never reached
        // cannot fail the evaluation.
        if (!lets_[slot]) lets_[slot] = eval(*prog_.lets[slot].value);
        return *lets_[slot];
      }
      case Expr::Kind::unary: {
        Value v = eval(*e.args[0]);
        if (e.unary_op == UnaryOp::negate) return -std::get<double>(v);
        return !std::get<bool>(v);
      }
      case Expr::Kind::binary: {
        if (e.binary_op == BinaryOp::logical_and) {
          if (!std::get<bool>(eval(*e.args[0]))) return false;
          return std::get<bool>(eval(*e.args[1]));
        }
        if (e.binary_op == BinaryOp::logical_or) {
          if (std::get<bool>(eval(*e.args[0]))) return true;
          return std::get<bool>(eval(*e.args[1]));
        }
        Value a = eval(*e.args[0]);
        Value b = eval(*e.args[1]);
        if (is_arith(e.binary_op)) return apply_arith(e.binary_op, std::get<double>(a), std::get<double>(b));
        if (std::holds_alternative<double>(a)) return compare(e.binary_op, std::get<double>(a), std::get<double>(b));
        bool same = std::get<std::string>(a) == std::get<std::string>(b);
        return e.binary_op == BinaryOp::eq ? same : !same;
      }
      case Expr::Kind::conditional:
        return std::get<bool>(eval(*e.args[0])) ? eval(*e.args[1]) : eval(*e.args[2]);
      case Expr::Kind::call: {
        double xs[2] = {0.0, 0.0};
        for (std::size_t i = 0; i < e.args.size(); ++i) xs[i] = std::get<double>(eval(*e.args[i]));
        return apply_builtin(e.fn, std::span<const double>(xs, e.args.size()));
      }
    }
    throw std::logic_error("unknown expression kind");
  }

 private:
  const Program& prog_;
  std::vector<Value> params_;
  std::vector<std::optional<Value>> lets_;
};

OutputResult point_result(const OutputDecl& o, const Value& v) {
  OutputResult r;
  r.name = o.name;
  if (const bool* b = std::get_if<bool>(&v)) {
    r.type = ValueType::boolean;
    r.lo = r.hi = *b ? 1.0 : 0.0;
  } else {
    r.type = ValueType::number;
    r.lo = r.hi = std::get<double>(v);
  }
  return r;
}

// ---------------------------------------------------------------------------
// Abstract evaluation over intervals, boolean sets and label sets.

struct Abstract {
  ValueType type = ValueType::number;
  bool empty = false;  // every completion reaching this node fails
  double lo = 0.0;
  double hi = 0.0;
  bool may_false = false;
  bool may_true = false;
  std::vector<std::string> labels;  // sorted
  std::string warning;              // some completion may fail

  static Abstract number(double lo, double hi) {
    Abstract a;
    a.lo = lo;
    a.hi = hi;
    return a;
  }
  static Abstract boolean(bool f, bool t) {
    Abstract a;
    a.type = ValueType::boolean;
    a.may_false = f;
    a.may_true = t;
    return a;
  }
  static Abstract failed(std::string why, ValueType type) {
    Abstract a;
    a.type = type;
    a.empty = true;
    a.warning = std::move(why);
    return a;
  }

  bool is_point() const {
    switch (type) {
      case ValueType::number: return lo == hi;
      case ValueType::boolean: return may_false != may_true;
      default: return labels.size() == 1;
    }
  }
};

std::string first_warning(std::initializer_list<const Abstract*> xs) {
  for (const auto* x : xs)
    if (!x->warning.empty()) return x->warning;
  return {};
}

double mul_ext(double a, double b) {
  if (a == 0.0 || b == 0.0) return 0.0;
  return a * b;
}

Abstract hull_of(std::initializer_list<double> corners) {
  double lo = kInf;
  double hi = -kInf;
  for (double c : corners) {
    if (std::isnan(c)) return Abstract::number(-kInf, kInf);
    lo = std::min(lo, c);
    hi = std::max(hi, c);
  }
  return Abstract::number(lo, hi);
}

// Flags possible overflow and collapses ranges where every completion fails.
Abstract finish_numeric(Abstract r, std::string_view op, const std::string& inherited) {
  r.warning = inherited;
  if (r.lo == kInf || r.hi == -kInf) return Abstract::failed("'" + std::string(op) + "' overflows for every completion", ValueType::number);
  if ((std::isinf(r.lo) || std::isinf(r.hi)) && r.warning.empty())
    r.warning = "'" + std::string(op) + "' may produce a non-finite result";
  return r;
}

class AbstractEvaluator {
 public:
  AbstractEvaluator(const Program& p, std::vector<Abstract> params)
      : prog_(p), params_(std::move(params)), lets_(p.lets.size()) {}

  Abstract eval(const Expr& e) {
    switch (e.kind) {
      case Expr::Kind::number: return Abstract::number(e.number, e.number);
      case Expr::Kind::boolean: return Abstract::boolean(!e.boolean, e.boolean);
      case Expr::Kind::label: {
        Abstract a;
        a.type = ValueType::label;
        a.labels = {e.text};
        return a;
      }
      case Expr::Kind::ident: {
        auto slot = static_cast<std::size_t>(e.slot);
        if (!e.is_let) return params_.at(slot);
        if (!lets_[slot]) lets_[slot] = eval(*prog_.lets[slot].value);
        return *lets_[slot];
      }
      case Expr::Kind::unary: {
        Abstract v = eval(*e.args[0]);
        if (v.empty) return v;
        if (e.unary_op == UnaryOp::negate) {
          double lo = -v.hi;
          v.hi = -v.lo;
          v.lo = lo;
          return v;
        }
        std::swap(v.may_false, v.may_true);
        return v;
      }
      case Expr::Kind::binary: return binary(e);
      case Expr::Kind::conditional: {
        Abstract c = eval(*e.args[0]);
        if (c.empty) return c;
        if (!c.may_false) return with_warning(eval(*e.args[1]), c.warning);
        if (!c.may_true) return with_warning(eval(*e.args[2]), c.warning);
        return join(eval(*e.args[1]), eval(*e.args[2]), c.warning);
      }
      case Expr::Kind::call: return call(e);
    }
    throw std::logic_error("unknown expression kind");
  }

  static Abstract join(Abstract a, Abstract b, const std::string& extra = {}) {
    if (a.empty && b.empty) return a;
    if (a.empty) return with_warning(std::move(b), a.warning);
    if (b.empty) return with_warning(std::move(a), b.warning);
    Abstract r = a;
    r.warning = first_warning({&a, &b});
    switch (a.type) {
      case ValueType::number:
        r.lo = std::min(a.lo, b.lo);
        r.hi = std::max(a.hi, b.hi);
        break;
      case ValueType::boolean:
        r.may_false = a.may_false || b.may_false;
        r.may_true = a.may_true || b.may_true;
        break;
      default: {
        std::vector<std::string> u;
        std::set_union(a.labels.begin(), a.labels.end(), b.labels.begin(), b.labels.end(), std::back_inserter(u));
        r.labels = std::move(u);
      }
    }
    return with_warning(std::move(r), extra);
  }

  static Abstract with_warning(Abstract a, const std::string& w) {
    if (a.warning.empty() && !w.empty()) a.warning = w;
    return a;
  }

 private:
  const Program& prog_;
  std::vector<Abstract> params_;
  std::vector<std::optional<Abstract>> lets_;

  Abstract logical(const Expr& e) {
    bool is_and = e.binary_op == BinaryOp::logical_and;
    Abstract a = eval(*e.args[0]);
    if (a.empty) return a;
    // The short-circuit value of the left operand decides alone.
    bool decides = is_and ? a.may_false : a.may_true;
    bool continues = is_and ? a.may_true : a.may_false;
    if (!continues) return a;
    Abstract b = eval(*e.args[1]);
    if (b.empty) {
      if (!decides) return b;
      Abstract r = Abstract::boolean(is_and, !is_and);
      r.warning = b.warning;
      return r;
    }
    Abstract r;
    if (is_and) {
      r = Abstract::boolean(a.may_false || b.may_false, b.may_true);
    } else {
      r = Abstract::boolean(b.may_false, a.may_true || b.may_true);
    }
    r.warning = first_warning({&a, &b});
    return r;
  }

  Abstract binary(const Expr& e) {
    if (e.binary_op == BinaryOp::logical_and || e.binary_op == BinaryOp::logical_or) return logical(e);
    Abstract a = eval(*e.args[0]);
    if (a.empty) return a;
    Abstract b = eval(*e.args[1]);
    if (b.empty) return b;
    std::string inherited = first_warning({&a, &b});
    auto op = e.binary_op;

    if (a.type == ValueType::number && b.type == ValueType::number) {
      if (a.is_point() && b.is_point()) {
        if (!is_arith(op)) {
          bool v = compare(op, a.lo, b.lo);
          auto r = Abstract::boolean(!v, v);
          r.warning = inherited;
          return r;
        }
        try {
          double v = apply_arith(op, a.lo, b.lo);
          auto r = Abstract::number(v, v);
          r.warning = inherited;
          return r;
        } catch (const EvalError& err) {
          return Abstract::failed(err.what(), ValueType::number);
        }
      }
      if (!is_arith(op)) {
        auto r = compare_ranges(op, a, b);
        r.warning = inherited;
        return r;
      }
      return arith_ranges(op, a, b, inherited);
    }
    // Enum equality over label sets.
    bool definitely_equal = a.labels.size() == 1 && b.labels.size() == 1 && a.labels[0] == b.labels[0];
    std::vector<std::string> common;
    std::set_intersection(a.labels.begin(), a.labels.end(), b.labels.begin(), b.labels.end(), std::back_inserter(common));
    bool may_equal = !common.empty();
    bool may_differ = !definitely_equal;
    Abstract r = op == BinaryOp::eq ? Abstract::boolean(may_differ, may_equal) : Abstract::boolean(may_equal, may_differ);
    r.warning = inherited;
    return r;
  }

  static Abstract compare_ranges(BinaryOp op, const Abstract& a, const Abstract& b) {
    bool t = false;
    bool f = false;
    switch (op) {
      case BinaryOp::lt:
        t = a.hi < b.lo;
        f = a.lo >= b.hi;
        break;
      case BinaryOp::le:
        t = a.hi <= b.lo;
        f = a.lo > b.hi;
        break;
      case BinaryOp::gt:
        t = a.lo > b.hi;
        f = a.hi <= b.lo;
        break;
      case BinaryOp::ge:
        t = a.lo >= b.hi;
        f = a.hi < b.lo;
        break;
      case BinaryOp::eq:
        f = a.hi < b.lo || b.hi < a.lo;
        break;
      case BinaryOp::ne:
        t = a.hi < b.lo || b.hi < a.lo;
        break;
      default: break;
    }
    // t and f are "definitely" verdicts; otherwise both outcomes are possible.
    if (t) return Abstract::boolean(false, true);
    if (f) return Abstract::boolean(true, false);
    return Abstract::boolean(true, true);
  }

  static Abstract arith_ranges(BinaryOp op, const Abstract& a, const Abstract& b, std::string inherited) {
    auto name = to_string(op);
    switch (op) {
      case BinaryOp::add: {
        double lo = a.lo + b.lo;
        double hi = a.hi + b.hi;
        return finish_numeric(Abstract::number(std::isnan(lo) ? -kInf : lo, std::isnan(hi) ? kInf : hi), name, inherited);
      }
      case BinaryOp::sub: {
        double lo = a.lo - b.hi;
        double hi = a.hi - b.lo;
        return finish_numeric(Abstract::number(std::isnan(lo) ? -kInf : lo, std::isnan(hi) ? kInf : hi), name, inherited);
      }
      case BinaryOp::mul:
        return finish_numeric(hull_of({mul_ext(a.lo, b.lo), mul_ext(a.lo, b.hi), mul_ext(a.hi, b.lo), mul_ext(a.hi, b.hi)}),
                              name, inherited);
      case BinaryOp::div: {
        if (b.lo == 0.0 && b.hi == 0.0)
          return Abstract::failed("domain error in '/': division by zero for every completion", ValueType::number);
        if (b.lo <= 0.0 && b.hi >= 0.0) {
          auto r = Abstract::number(-kInf, kInf);
          r.warning = inherited.empty() ? "domain error possible in '/': divisor range [" + fmt(b.lo) + ", " +
                                              fmt(b.hi) + "] contains zero"
                                        : inherited;
          return r;
        }
        return finish_numeric(hull_of({a.lo / b.lo, a.lo / b.hi, a.hi / b.lo, a.hi / b.hi}), name, inherited);
      }
      default: break;
    }
    throw std::logic_error("not arithmetic");
  }

  Abstract call(const Expr& e) {
    std::vector<Abstract> xs;
    for (const auto& arg : e.args) {
      xs.push_back(eval(*arg));
      if (xs.back().empty) return xs.back();
    }
    std::string inherited;
    for (const auto& x : xs)
      if (inherited.empty()) inherited = x.warning;
    bool all_points = std::all_of(xs.begin(), xs.end(), [](const Abstract& x) { return x.is_point(); });
    if (all_points) {
      double vals[2] = {xs[0].lo, xs.size() > 1 ? xs[1].lo : 0.0};
      try {
        double v = apply_builtin(e.fn, std::span<const double>(vals, xs.size()));
        auto r = Abstract::number(v, v);
        r.warning = inherited;
        return r;
      } catch (const EvalError& err) {
        return Abstract::failed(err.what(), ValueType::number);
      }
    }
    auto name = to_string(e.fn);
    const Abstract& x = xs[0];
    auto possible = [&](const std::string& what) {
      return inherited.empty() ? "domain error possible in '" + std::string(name) + "': " + what : inherited;
    };
    switch (e.fn) {
      case Builtin::exp: return finish_numeric(Abstract::number(std::exp(x.lo), std::exp(x.hi)), name, inherited);
      case Builtin::ln:
      case Builtin::log10: {
        auto f = [&](double v) { return e.fn == Builtin::ln ? std::log(v) : std::log10(v); };
        if (x.hi <= 0.0)
          return Abstract::failed("domain error in '" + std::string(name) + "': argument range [" + fmt(x.lo) + ", " +
                                      fmt(x.hi) + "] is non-positive",
                                  ValueType::number);
        if (x.lo <= 0.0) {
          auto r = Abstract::number(-kInf, f(x.hi));
          r.warning = possible("argument range [" + fmt(x.lo) + ", " + fmt(x.hi) + "] includes non-positive values");
          return r;
        }
        return finish_numeric(Abstract::number(f(x.lo), f(x.hi)), name, inherited);
      }
      case Builtin::sqrt: {
        if (x.hi < 0.0)
          return Abstract::failed("domain error in 'sqrt': argument range [" + fmt(x.lo) + ", " + fmt(x.hi) +
                                      "] is negative",
                                  ValueType::number);
        if (x.lo < 0.0) {
          auto r = Abstract::number(0.0, std::sqrt(x.hi));
          r.warning = possible("argument range [" + fmt(x.lo) + ", " + fmt(x.hi) + "] includes negative values");
          return r;
        }
        return finish_numeric(Abstract::number(std::sqrt(x.lo), std::sqrt(x.hi)), name, inherited);
      }
      case Builtin::pow: return pow_ranges(x, xs[1], inherited);
      case Builtin::abs: {
        if (x.lo >= 0.0) return finish_numeric(Abstract::number(std::fabs(x.lo), std::fabs(x.hi)), name, inherited);
        if (x.hi <= 0.0) return finish_numeric(Abstract::number(std::fabs(x.hi), std::fabs(x.lo)), name, inherited);
        return finish_numeric(Abstract::number(0.0, std::max(-x.lo, x.hi)), name, inherited);
      }
      case Builtin::min:
        return finish_numeric(Abstract::number(std::min(x.lo, xs[1].lo), std::min(x.hi, xs[1].hi)), name, inherited);
      case Builtin::max:
        return finish_numeric(Abstract::number(std::max(x.lo, xs[1].lo), std::max(x.hi, xs[1].hi)), name, inherited);
      case Builtin::floor: return finish_numeric(Abstract::number(std::floor(x.lo), std::floor(x.hi)), name, inherited);
      case Builtin::ceil: return finish_numeric(Abstract::number(std::ceil(x.lo), std::ceil(x.hi)), name, inherited);
      case Builtin::round: return finish_numeric(Abstract::number(std::round(x.lo), std::round(x.hi)), name, inherited);
    }
    throw std::logic_error("unknown builtin");
  }

  static Abstract pow_ranges(const Abstract& base, const Abstract& ex, const std::string& inherited) {
    auto corners = [&](double blo, double bhi) {
      return hull_of({std::pow(blo, ex.lo), std::pow(blo, ex.hi), std::pow(bhi, ex.lo), std::pow(bhi, ex.hi)});
    };
    if (base.lo > 0.0) return finish_numeric(corners(base.lo, base.hi), "pow", inherited);
    // Fixed integer exponent: handle the sign of the base explicitly.
    if (ex.is_point() && std::floor(ex.lo) == ex.lo && std::fabs(ex.lo) < 1e15) {
      double n = ex.lo;
      bool even = std::fmod(n, 2.0) == 0.0;
      bool straddles = base.lo <= 0.0 && base.hi >= 0.0;
      if (n < 0.0 && straddles) {
        auto r = Abstract::number(-kInf, kInf);
        r.warning = inherited.empty() ? "domain error possible in 'pow': base range includes zero with a negative exponent"
                                      : inherited;
        if (base.lo == 0.0 && base.hi == 0.0)
          return Abstract::failed("domain error in 'pow': zero base with a negative exponent", ValueType::number);
        return r;
      }
      double a = std::pow(base.lo, n);
      double b = std::pow(base.hi, n);
      Abstract r = hull_of({a, b});
      if (even && straddles && n > 0.0) r.lo = n == 0.0 ? 1.0 : std::pow(0.0, n);
      if (n == 0.0) r = Abstract::number(1.0, 1.0);
      return finish_numeric(r, "pow", inherited);
    }
    if (base.lo >= 0.0 && ex.lo > 0.0) return finish_numeric(corners(base.lo, base.hi), "pow", inherited);
    auto r = Abstract::number(-kInf, kInf);
    r.warning = inherited.empty()
                    ? "domain error possible in 'pow': base range [" + fmt(base.lo) + ", " + fmt(base.hi) +
                          "] admits non-positive values with a non-integer or negative exponent"
                    : inherited;
    return r;
  }
};

// ---------------------------------------------------------------------------
// Range estimation driver

struct ParamSpace {
  // Exactly one of: enumerated candidates, or an abstract value.
  std::vector<Abstract> candidates;
  Abstract abstract;
  bool enumerated = false;
};

Abstract point_abstract(const Value& v) {
  if (const bool* b = std::get_if<bool>(&v)) return Abstract::boolean(!*b, *b);
  if (const double* d = std::get_if<double>(&v)) return Abstract::number(*d, *d);
  Abstract a;
  a.type = ValueType::enumeration;
  a.labels = {std::get<std::string>(v)};
  return a;
}

Abstract label_set(std::vector<std::string> labels) {
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  Abstract a;
  a.type = ValueType::enumeration;
  a.labels = std::move(labels);
  return a;
}

ParamSpace discrete(std::vector<Abstract> cands, Abstract hull) {
  ParamSpace s;
  s.abstract = std::move(hull);
  if (cands.size() <= kEnumerationCutoff) {
    s.candidates = std::move(cands);
    s.enumerated = s.candidates.size() > 1;
    if (s.candidates.size() == 1) s.abstract = s.candidates.front();
  }
  return s;
}

ParamSpace numeric_space(const ParamDecl& p, double lo, double hi) {
  if (p.domain && p.domain->is_finite_set()) {
    std::vector<Abstract> cands;
    for (double v : p.domain->values)
      if (v >= lo && v <= hi) cands.push_back(Abstract::number(v, v));
    if (cands.empty()) throw BindingError(p.name, "range contains no value of the declared value set");
    Abstract hull = Abstract::number(cands.front().lo, cands.back().lo);
    return discrete(std::move(cands), hull);
  }
  ParamSpace s;
  s.abstract = Abstract::number(lo, hi);
  return s;
}

ParamSpace space_for(const ParamDecl& p, const BindingEntry* e) {
  using Kind = BindingEntry::Kind;
  Kind kind = e ? e->kind : Kind::unknown;
  if (kind == Kind::exact) {
    ParamSpace s;
    s.abstract = point_abstract(validated_exact(p, *e));
    return s;
  }
  switch (p.kind) {
    case ParamKind::boolean:
      if (kind != Kind::unknown) throw BindingError(p.name, "boolean parameters accept true, false or UNKNOWN");
      return discrete({Abstract::boolean(true, false), Abstract::boolean(false, true)}, Abstract::boolean(true, true));
    case ParamKind::enumeration: {
      std::vector<std::string> labels = p.labels;
      if (kind == Kind::label_set) {
        for (const auto& l : e->labels)
          if (!p.has_label(l)) throw BindingError(p.name, "label \"" + l + "\" is not in the declared label set");
        labels = e->labels;
      } else if (kind != Kind::unknown) {
        throw BindingError(p.name, "enum parameters accept a label, a label set or UNKNOWN");
      }
      Abstract hull = label_set(labels);
      std::vector<Abstract> cands;
      for (const auto& l : hull.labels) cands.push_back(label_set({l}));
      return discrete(std::move(cands), hull);
    }
    case ParamKind::number: {
      if (kind == Kind::label_set) throw BindingError(p.name, "number parameters accept a number, [lo, hi] or UNKNOWN");
      if (e) check_unit(p, *e);
      if (kind == Kind::interval) {
        if (!(e->lo <= e->hi) || !std::isfinite(e->lo) || !std::isfinite(e->hi))
          throw BindingError(p.name, "interval bounds must be finite with lo <= hi");
        double lo = e->lo;
        double hi = e->hi;
        if (p.domain) {
          lo = std::max(lo, p.domain->min);
          hi = std::min(hi, p.domain->max);
          if (lo > hi) throw BindingError(p.name, "interval does not intersect the declared domain");
        }
        return numeric_space(p, lo, hi);
      }
      if (!p.domain) throw BindingError(p.name, "unboundable: UNKNOWN number parameter has no declared domain");
      return numeric_space(p, p.domain->min, p.domain->max);
    }
  }
  throw std::logic_error("unknown parameter kind");
}

OutputResult abstract_result(const OutputDecl& o, const Abstract& a) {
  OutputResult r;
  r.name = o.name;
  r.type = a.type == ValueType::boolean ? ValueType::boolean : ValueType::number;
  if (a.type == ValueType::boolean) {
    r.lo = a.may_false ? 0.0 : 1.0;
    r.hi = a.may_true ? 1.0 : 0.0;
  } else {
    r.lo = a.lo;
    r.hi = a.hi;
  }
  if (!a.warning.empty()) {
    r.partial = true;
    r.partial_reason = a.warning;
  }
  return r;
}

}  // namespace

const OutputResult* EvalOutcome::find(std::string_view name) const {
  for (const auto& o : outputs)
    if (o.name == name) return &o;
  return nullptr;
}

std::string OutputResult::render() const {
  auto show = [&](double v) {
    if (type == ValueType::boolean) return std::string(v != 0.0 ? "true" : "false");
    return fmt(v);
  };
  std::string out = name;
  if (is_point()) {
    out += " = " + show(lo);
  } else if (type == ValueType::boolean) {
    out += " in {false, true}";
  } else {
    out += " in [" + show(lo) + ", " + show(hi) + "]";
  }
  if (!bands.empty()) {
    std::vector<std::string> labels;
    for (const auto& b : bands) labels.push_back(b.label);
    out += (bands.size() == 1 ? "  [band: " : "  [bands: ") + util::join(labels, ", ") + "]";
    for (const auto& b : bands)
      if (!b.statement.empty()) out += "\n  " + b.label + ": " + b.statement;
  }
  if (partial) out += "\n  warning: " + partial_reason;
  return out;
}

std::string EvalOutcome::render() const {
  std::string out = ranged ? "OK (range estimate)" : "OK";
  for (const auto& o : outputs) out += "\n" + o.render();
  if (!missing.empty()) out += "\nmissing or ranged parameters: " + util::join(missing, ", ");
  return out;
}

namespace {

nlohmann::json finite_or_null(double v) {
  if (std::isfinite(v)) return v;
  return nullptr;
}

nlohmann::json band_json(const InterpretationBand& b) {
  return {{"output", b.output},
          {"lower", finite_or_null(b.lower)},
          {"upper", finite_or_null(b.upper)},
          {"bounds", std::string(to_string(b.bounds))},
          {"label", b.label},
          {"statement", b.statement}};
}

InterpretationBand band_from(const nlohmann::json& j) {
  InterpretationBand b;
  b.output = j.at("output").get<std::string>();
  b.lower = j.at("lower").is_null() ? -kInf : j.at("lower").get<double>();
  b.upper = j.at("upper").is_null() ? kInf : j.at("upper").get<double>();
  b.bounds = bounds_from_string(j.value("bounds", std::string("[)")));
  b.label = j.value("label", std::string());
  b.statement = j.value("statement", std::string());
  return b;
}

}  // namespace

nlohmann::json EvalOutcome::to_json() const {
  nlohmann::json outs = nlohmann::json::array();
  for (const auto& o : outputs) {
    nlohmann::json j{{"name", o.name}, {"type", std::string(to_string(o.type))}};
    if (o.is_point() && !ranged) {
      if (o.type == ValueType::boolean) j["value"] = o.lo != 0.0;
      else j["value"] = o.lo;
    }
    j["lo"] = o.type == ValueType::boolean ? nlohmann::json(o.lo != 0.0) : finite_or_null(o.lo);
    j["hi"] = o.type == ValueType::boolean ? nlohmann::json(o.hi != 0.0) : finite_or_null(o.hi);
    j["partial"] = o.partial;
    if (o.partial) j["partial_reason"] = o.partial_reason;
    nlohmann::json bands = nlohmann::json::array();
    for (const auto& b : o.bands) bands.push_back(band_json(b));
    j["bands"] = bands;
    outs.push_back(j);
  }
  return {{"ranged", ranged}, {"missing", missing}, {"outputs", outs}};
}

EvalOutcome EvalOutcome::from_json(const nlohmann::json& j) {
  EvalOutcome out;
  out.ranged = j.at("ranged").get<bool>();
  out.missing = j.at("missing").get<std::vector<std::string>>();
  for (const auto& o : j.at("outputs")) {
    OutputResult r;
    r.name = o.at("name").get<std::string>();
    r.type = o.at("type").get<std::string>() == "boolean" ? ValueType::boolean : ValueType::number;
    auto read = [&](const char* key, double inf) {
      const auto& v = o.at(key);
      if (v.is_boolean()) return v.get<bool>() ? 1.0 : 0.0;
      return v.is_null() ? inf : v.get<double>();
    };
    r.lo = read("lo", -kInf);
    r.hi = read("hi", kInf);
    r.partial = o.value("partial", false);
    r.partial_reason = o.value("partial_reason", std::string());
    for (const auto& b : o.at("bands")) r.bands.push_back(band_from(b));
    out.outputs.push_back(std::move(r));
  }
  return out;
}

EvalOutcome eval_point(const Program& program, const Binding& binding,
                       std::span<const InterpretationBand> bands) {
  check_known_names(program, binding);
  std::vector<Value> params;
  params.reserve(program.params.size());
  for (const auto& p : program.params) {
    auto it = binding.find(p.name);
    if (it == binding.end()) throw BindingError(p.name, "parameter is not bound");
    if (!it->second.is_exact())
      throw BindingError(p.name, "point evaluation needs an exact value, got " + it->second.render());
    params.push_back(validated_exact(p, it->second));
  }
  PointEvaluator ev(program, std::move(params));
  EvalOutcome out;
  for (const auto& o : program.outputs) out.outputs.push_back(point_result(o, ev.eval(*o.value)));
  attach_bands(out, bands);
  return out;
}

EvalOutcome eval_interval(const Program& program, const Binding& binding,
                          std::span<const InterpretationBand> bands) {
  check_known_names(program, binding);
  EvalOutcome out;
  std::vector<ParamSpace> spaces;
  for (const auto& p : program.params) {
    auto it = binding.find(p.name);
    const BindingEntry* e = it == binding.end() ? nullptr : &it->second;
    if (!e || !e->is_exact()) out.missing.push_back(p.name);
    spaces.push_back(space_for(p, e));
  }
  out.ranged = !out.missing.empty();

  // Cap the cross product by demoting the widest enumerations to abstract
  // propagation.
  auto combos = [&] {
    double n = 1.0;
    for (const auto& s : spaces)
      if (s.enumerated) n *= static_cast<double>(s.candidates.size());
    return n;
  };
  while (combos() > static_cast<double>(kMaxCombinations)) {
    auto widest = std::max_element(spaces.begin(), spaces.end(), [](const ParamSpace& a, const ParamSpace& b) {
      return (a.enumerated ? a.candidates.size() : 0) < (b.enumerated ? b.candidates.size() : 0);
    });
    widest->enumerated = false;
    widest->candidates.clear();
  }

  std::vector<std::size_t> radix;
  std::vector<std::size_t> which;
  for (std::size_t i = 0; i < spaces.size(); ++i)
    if (spaces[i].enumerated) {
      which.push_back(i);
      radix.push_back(spaces[i].candidates.size());
    }
  std::vector<std::size_t> digits(which.size(), 0);

  std::vector<std::optional<Abstract>> acc(program.outputs.size());
  std::string excluded_reason;
  std::size_t excluded = 0;
  while (true) {
    std::vector<Abstract> params;
    params.reserve(spaces.size());
    for (const auto& s : spaces) params.push_back(s.abstract);
    for (std::size_t k = 0; k < which.size(); ++k) params[which[k]] = spaces[which[k]].candidates[digits[k]];

    AbstractEvaluator ev(program, std::move(params));
    std::vector<Abstract> results;
    bool failed = false;
    for (const auto& o : program.outputs) {
      results.push_back(ev.eval(*o.value));
      if (results.back().empty) {
        failed = true;
        if (excluded_reason.empty()) excluded_reason = results.back().warning;
      }
    }
    // A completion either evaluates every output or fails as a whole.
    if (failed) {
      ++excluded;
    } else {
      for (std::size_t i = 0; i < results.size(); ++i)
        acc[i] = acc[i] ? AbstractEvaluator::join(*acc[i], results[i]) : results[i];
    }

    std::size_t k = 0;
    while (k < digits.size() && ++digits[k] == radix[k]) digits[k++] = 0;
    if (k == digits.size()) break;
  }

  for (std::size_t i = 0; i < program.outputs.size(); ++i) {
    if (!acc[i]) throw EvalError("range", {}, "no completion of the binding evaluates: " + excluded_reason);
    auto r = abstract_result(program.outputs[i], *acc[i]);
    if (excluded > 0 && !r.partial) {
      r.partial = true;
      r.partial_reason = excluded_reason;
    }
    out.outputs.push_back(std::move(r));
  }
  attach_bands(out, bands);
  return out;
}

EvalOutcome evaluate(const Program& program, const Binding& binding, std::span<const InterpretationBand> bands) {
  bool exact = true;
  for (const auto& p : program.params) {
    auto it = binding.find(p.name);
    if (it == binding.end() || !it->second.is_exact()) exact = false;
  }
  return exact ? eval_point(program, binding, bands) : eval_interval(program, binding, bands);
}

}  // namespace riskagent::lang
