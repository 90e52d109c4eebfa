/*
 * Copyright (c) 2026 The netsense Authors
 *
 * Licensed under the Apache License Version 2.0 with LLVM Exceptions
 * (the "License"); you may not use this file except in compliance with
 * the License. You may obtain a copy of the License at
 *
 *   https://llvm.org/LICENSE.txt
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */
#pragma once

// A deliberately small senders algebra: just / then / bulk / exec_on,
// awaited with sync_wait. Senders are lazy, move-only and single-shot;
// nothing runs until sync_wait walks the chain.
//
//   auto sndr = just(std::span(data), std::span(result))
//             | exec_on(sched, bulk(n, [](std::size_t i, std::size_t dev, auto d, auto r) {...}));
//   sync_wait(std::move(sndr));

#include <netsense/exec/scheduler.hpp>

#include <concepts>
#include <cstddef>
#include <exception>
#include <functional>
#include <stdexcept>
#include <string>
#include <tuple>
#include <type_traits>
#include <utility>

namespace netsense::exec {

/// A task inside an awaited chain failed. what() carries the diagnostic of
/// the original failure.
class chain_failure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A sender was awaited after it had already been consumed.
class usage_error : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

namespace detail {

// Tracks single ownership of a sender. Moving from a sender marks the source
// as spent, so any later attempt to run it is reported.
class one_shot {
 public:
  one_shot() = default;
  one_shot(one_shot&& other) noexcept : spent_(std::exchange(other.spent_, true)) {}
  one_shot& operator=(one_shot&& other) noexcept {
    spent_ = std::exchange(other.spent_, true);
    return *this;
  }
  one_shot(const one_shot&) = delete;
  one_shot& operator=(const one_shot&) = delete;

  bool spent() const noexcept { return spent_; }

  void consume() {
    if (spent_) {
      throw usage_error("sender awaited more than once");
    }
    spent_ = true;
  }

 private:
  bool spent_ = false;
};

}  // namespace detail

template <class S>
concept sender = std::move_constructible<std::remove_cvref_t<S>> &&
                 requires(std::remove_cvref_t<S>&& s, const Scheduler& sched) {
                   typename std::remove_cvref_t<S>::value_type;
                   { std::move(s).run(sched) } -> std::same_as<typename std::remove_cvref_t<S>::value_type>;
                   { std::as_const(s).spent() } -> std::convertible_to<bool>;
                 };

template <class... Ts>
class just_sender {
 public:
  using value_type = std::tuple<Ts...>;

  explicit just_sender(Ts... values) : values_(std::move(values)...) {}

  value_type run(const Scheduler&) && {
    guard_.consume();
    return std::move(values_);
  }

  bool spent() const noexcept { return guard_.spent(); }

 private:
  value_type values_;
  detail::one_shot guard_;
};

namespace detail {

template <class F, class Tuple>
struct then_result;

template <class F, class... Ts>
struct then_result<F, std::tuple<Ts...>> {
  using raw = std::invoke_result_t<F&, Ts...>;
  using type = std::conditional_t<std::is_void_v<raw>, std::tuple<>, std::tuple<raw>>;
};

}  // namespace detail

template <sender S, class F>
class then_sender {
 public:
  using value_type = typename detail::then_result<F, typename S::value_type>::type;

  then_sender(S inner, F fn) : inner_(std::move(inner)), fn_(std::move(fn)) {}

  value_type run(const Scheduler& sched) && {
    guard_.consume();
    auto values = std::move(inner_).run(sched);
    if constexpr (std::is_void_v<typename detail::then_result<F, typename S::value_type>::raw>) {
      std::apply(fn_, std::move(values));
      return {};
    } else {
      return value_type(std::apply(fn_, std::move(values)));
    }
  }

  bool spent() const noexcept { return guard_.spent(); }

 private:
  S inner_;
  F fn_;
  detail::one_shot guard_;
};

template <sender S, class F>
class bulk_sender {
 public:
  using value_type = typename S::value_type;

  bulk_sender(S inner, std::size_t n, F fn) : inner_(std::move(inner)), n_(n), fn_(std::move(fn)) {}

  value_type run(const Scheduler& sched) && {
    guard_.consume();
    auto values = std::move(inner_).run(sched);
    auto task = [this, &values](std::size_t index, std::size_t resource_id) {
      std::apply([&](auto&... payload) { fn_(index, resource_id, payload...); }, values);
    };
    sched.bulk(n_, task);
    return values;
  }

  bool spent() const noexcept { return guard_.spent(); }

 private:
  S inner_;
  std::size_t n_;
  F fn_;
  detail::one_shot guard_;
};

template <sender S>
class exec_on_sender {
 public:
  using value_type = typename S::value_type;

  exec_on_sender(Scheduler sched, S inner) : sched_(std::move(sched)), inner_(std::move(inner)) {}

  value_type run(const Scheduler&) && {
    guard_.consume();
    return std::move(inner_).run(sched_);
  }

  bool spent() const noexcept { return guard_.spent(); }

 private:
  Scheduler sched_;
  S inner_;
  detail::one_shot guard_;
};

// Pipeable partial applications. `s | closure` is closure(s).
template <class Fn>
class closure {
 public:
  explicit closure(Fn fn) : fn_(std::move(fn)) {}

  template <sender S>
  auto operator()(S&& s) && {
    return std::move(fn_)(std::forward<S>(s));
  }

 private:
  Fn fn_;
};

template <class T>
struct is_closure : std::false_type {};
template <class Fn>
struct is_closure<closure<Fn>> : std::true_type {};

template <class C>
concept sender_closure = is_closure<std::remove_cvref_t<C>>::value;

template <sender S, sender_closure C>
auto operator|(S&& s, C&& c) {
  return std::move(c)(std::forward<S>(s));
}

/// Sender that yields `values` unchanged.
template <class... Ts>
just_sender<std::decay_t<Ts>...> just(Ts&&... values) {
  return just_sender<std::decay_t<Ts>...>(std::forward<Ts>(values)...);
}

/// Applies `fn` to the completion values of `s`. A void result completes
/// with an empty tuple.
template <sender S, class F>
auto then(S&& s, F&& fn) {
  return then_sender<std::remove_cvref_t<S>, std::decay_t<F>>(std::forward<S>(s), std::forward<F>(fn));
}

template <class F>
auto then(F&& fn) {
  return closure([fn = std::forward<F>(fn)]<class S>(S&& s) mutable {
    return then(std::forward<S>(s), std::move(fn));
  });
}

/// Invokes `fn(index, resource_id, payload...)` once for each index in
/// [0, n) on the bound scheduler, then forwards the payload unchanged.
/// Invocations for distinct indices may run concurrently, so `fn` must only
/// write to slots its index owns.
template <sender S, class F>
auto bulk(S&& s, std::size_t n, F&& fn) {
  return bulk_sender<std::remove_cvref_t<S>, std::decay_t<F>>(std::forward<S>(s), n, std::forward<F>(fn));
}

template <class F>
auto bulk(std::size_t n, F&& fn) {
  return closure([n, fn = std::forward<F>(fn)]<class S>(S&& s) mutable {
    return bulk(std::forward<S>(s), n, std::move(fn));
  });
}

/// Runs every stage of `s` on `sched`'s resources.
template <sender S>
auto exec_on(Scheduler sched, S&& s) {
  return exec_on_sender<std::remove_cvref_t<S>>(std::move(sched), std::forward<S>(s));
}

// exec_on(sched, bulk(n, f)) as in `just(...) | exec_on(sched, bulk(n, f))`.
template <sender_closure C>
auto exec_on(Scheduler sched, C&& inner) {
  return closure([sched = std::move(sched), inner = std::forward<C>(inner)]<class S>(S&& s) mutable {
    return exec_on(std::move(sched), std::move(inner)(std::forward<S>(s)));
  });
}

/// Launches the chain and blocks until it completes. All task side effects
/// are visible to the caller on return. A failing task surfaces as
/// chain_failure; awaiting a consumed sender throws usage_error.
template <sender S>
  requires(!std::is_lvalue_reference_v<S>)
typename S::value_type sync_wait(S&& s) {
  if (s.spent()) {
    throw usage_error("sender awaited more than once");
  }
  try {
    return std::move(s).run(Scheduler{});
  } catch (const chain_failure&) {
    throw;
  } catch (const usage_error&) {
    throw;
  } catch (const std::exception& e) {
    throw chain_failure(e.what());
  } catch (...) {
    throw chain_failure("task failed with a non-standard exception");
  }
}

}  // namespace netsense::exec
