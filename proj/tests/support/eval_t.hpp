#pragma once

#include <functional>
#include <memory>
#include <stdexcept>
#include <variant>
#include <vector>

#include "osa/systt.hpp"

// An independent evaluator for oracle terms, by environment semantics
// rather than rewriting: values are numbers or functions, variables are
// looked up in an environment, and the recursor iterates its step function.
// Used to cross-check the rewriting machine.

namespace osa::testing {

struct SemVal;
using SemFn = std::function<SemVal(const SemVal&)>;

struct SemVal {
  std::variant<Nat, SemFn> v;

  Nat num() const {
    if (!std::holds_alternative<Nat>(v)) {
      throw std::logic_error("evaluator: expected a number");
    }
    return std::get<Nat>(v);
  }

  SemVal apply(const SemVal& arg) const {
    if (!std::holds_alternative<SemFn>(v)) {
      throw std::logic_error("evaluator: expected a function");
    }
    return std::get<SemFn>(v)(arg);
  }
};

// Environment: values of enclosing binders, innermost last.
inline SemVal eval_term(const Term& t, std::vector<SemVal> env,
                        const std::function<Nat(Nat)>& f) {
  using Kind = TermNode::Kind;
  switch (t->kind) {
    case Kind::Var: {
      const auto i = static_cast<std::size_t>(t->index);
      if (i >= env.size()) throw std::logic_error("evaluator: open term");
      return env[env.size() - 1 - i];
    }
    case Kind::Lam: {
      Term body = t->a;
      return SemVal{SemFn{[body, env, &f](const SemVal& arg) {
        auto inner = env;
        inner.push_back(arg);
        return eval_term(body, std::move(inner), f);
      }}};
    }
    case Kind::App:
      return eval_term(t->a, env, f).apply(eval_term(t->b, env, f));
    case Kind::Zero:
      return SemVal{Nat{0}};
    case Kind::Suc:
      return SemVal{eval_term(t->a, env, f).num() + 1};
    case Kind::Rec: {
      const Nat count = eval_term(t->a, env, f).num();
      SemVal acc = eval_term(t->b, env, f);
      SemVal step = eval_term(t->c, env, f);
      for (Nat i = 0; i < count; ++i) {
        acc = step.apply(SemVal{i}).apply(acc);
      }
      return acc;
    }
    case Kind::Phi:
      return SemVal{SemFn{[&f](const SemVal& arg) {
        return SemVal{f(arg.num())};
      }}};
  }
  throw std::logic_error("evaluator: unknown term");
}

// t(f)(u) for a closed t : (0 -> 0) -> 0 -> 0.
inline Nat eval_applied(const Term& t, const std::function<Nat(Nat)>& f,
                        Nat u) {
  return eval_term(t, {}, f).apply(SemVal{SemFn{[&f](const SemVal& arg) {
                      return SemVal{f(arg.num())};
                    }}})
      .apply(SemVal{u})
      .num();
}

}  // namespace osa::testing
