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

#include <netsense/partition.hpp>

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstddef>
#include <deque>
#include <exception>
#include <memory>
#include <mutex>
#include <span>
#include <stdexcept>
#include <thread>
#include <type_traits>
#include <utility>
#include <vector>

namespace netsense::exec {

// Non-owning reference to a callable `void(std::size_t index, std::size_t resource_id)`.
class index_fn {
 public:
  template <class F>
    requires(!std::is_same_v<std::remove_cvref_t<F>, index_fn> &&
             std::is_invocable_v<F&, std::size_t, std::size_t>)
  index_fn(F& f) noexcept  // NOLINT(google-explicit-constructor)
      : obj_(const_cast<void*>(static_cast<const void*>(std::addressof(f)))),
        call_([](void* obj, std::size_t i, std::size_t r) {
          (*static_cast<F*>(obj))(i, r);
        }) {}

  void operator()(std::size_t index, std::size_t resource_id) const {
    call_(obj_, index, resource_id);
  }

 private:
  void* obj_;
  void (*call_)(void*, std::size_t, std::size_t);
};

namespace detail {

// Completion tracking for one bulk launch spread over one or more pools.
class bulk_state {
 public:
  bulk_state(index_fn fn, std::size_t chunks) : fn_(fn), pending_(chunks) {}

  void run(Span range, std::size_t resource_id) noexcept {
    if (!failed_.load(std::memory_order_relaxed)) {
      try {
        for (std::size_t i = range.offset; i < range.end(); ++i) {
          fn_(i, resource_id);
        }
      } catch (...) {
        record(std::current_exception());
      }
    }
    // Notify under the lock: the waiter may destroy *this as soon as it
    // observes pending_ == 0.
    std::lock_guard lock(mutex_);
    if (--pending_ == 0) {
      done_.notify_all();
    }
  }

  void wait_and_rethrow() {
    std::unique_lock lock(mutex_);
    done_.wait(lock, [this] { return pending_ == 0; });
    if (error_) {
      std::rethrow_exception(error_);
    }
  }

 private:
  void record(std::exception_ptr e) noexcept {
    std::lock_guard lock(mutex_);
    if (!error_) {
      error_ = std::move(e);
    }
    failed_.store(true, std::memory_order_relaxed);
  }

  index_fn fn_;
  std::size_t pending_;
  std::atomic<bool> failed_{false};
  std::mutex mutex_;
  std::condition_variable done_;
  std::exception_ptr error_;
};

class worker_pool {
 public:
  explicit worker_pool(std::size_t workers) {
    if (workers == 0) {
      throw std::invalid_argument("worker pool needs at least one worker");
    }
    threads_.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      threads_.emplace_back([this] { work(); });
    }
  }

  worker_pool(const worker_pool&) = delete;
  worker_pool& operator=(const worker_pool&) = delete;

  ~worker_pool() {
    {
      std::lock_guard lock(mutex_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) {
      t.join();
    }
  }

  std::size_t size() const noexcept { return threads_.size(); }

  // Number of jobs post_range() will create for a range of this length.
  std::size_t chunk_count(std::size_t length) const noexcept {
    return std::min(threads_.size(), length);
  }

  void post_range(bulk_state& state, Span range, std::size_t resource_id) {
    const std::size_t chunks = chunk_count(range.length);
    {
      std::lock_guard lock(mutex_);
      for (std::size_t c = 0; c < chunks; ++c) {
        jobs_.push_back(job{&state, even_piece(range, chunks, c), resource_id});
      }
    }
    cv_.notify_all();
  }

 private:
  struct job {
    bulk_state* state;
    Span range;
    std::size_t resource_id;
  };

  void work() {
    for (;;) {
      job next;
      {
        std::unique_lock lock(mutex_);
        cv_.wait(lock, [this] { return stop_ || !jobs_.empty(); });
        if (jobs_.empty()) {
          return;
        }
        next = jobs_.front();
        jobs_.pop_front();
      }
      next.state->run(next.range, next.resource_id);
    }
  }

  std::mutex mutex_;
  std::condition_variable cv_;
  std::deque<job> jobs_;
  bool stop_ = false;
  std::vector<std::thread> threads_;
};

class resource_impl {
 public:
  virtual ~resource_impl() = default;
  virtual std::size_t resource_count() const noexcept = 0;
  virtual std::size_t workers_per_resource() const noexcept = 0;
  virtual void bulk(std::size_t n, index_fn fn) const = 0;
};

class inline_resource final : public resource_impl {
 public:
  std::size_t resource_count() const noexcept override { return 1; }
  std::size_t workers_per_resource() const noexcept override { return 1; }
  void bulk(std::size_t n, index_fn fn) const override {
    for (std::size_t i = 0; i < n; ++i) {
      fn(i, 0);
    }
  }
};

class pool_resource final : public resource_impl {
 public:
  explicit pool_resource(std::size_t workers) : pool_(workers) {}

  std::size_t resource_count() const noexcept override { return 1; }
  std::size_t workers_per_resource() const noexcept override { return pool_.size(); }

  void bulk(std::size_t n, index_fn fn) const override {
    if (n == 0) {
      return;
    }
    bulk_state state(fn, pool_.chunk_count(n));
    pool_.post_range(state, Span{0, n}, 0);
    state.wait_and_rethrow();
  }

 private:
  mutable worker_pool pool_;
};

// Resource r executes span r of the even split of [0, n).
class group_resource final : public resource_impl {
 public:
  explicit group_resource(std::span<const std::size_t> workers) {
    if (workers.empty()) {
      throw std::invalid_argument("group scheduler needs at least one resource");
    }
    pools_.reserve(workers.size());
    for (std::size_t w : workers) {
      pools_.push_back(std::make_unique<worker_pool>(w));
      max_workers_ = std::max(max_workers_, w);
    }
  }

  std::size_t resource_count() const noexcept override { return pools_.size(); }
  std::size_t workers_per_resource() const noexcept override { return max_workers_; }

  void bulk(std::size_t n, index_fn fn) const override {
    if (n == 0) {
      return;
    }
    const PartitionPlan plan = partition_even(n, pools_.size());
    std::size_t chunks = 0;
    for (std::size_t r = 0; r < pools_.size(); ++r) {
      chunks += pools_[r]->chunk_count(plan.spans[r].length);
    }
    bulk_state state(fn, chunks);
    for (std::size_t r = 0; r < pools_.size(); ++r) {
      pools_[r]->post_range(state, plan.spans[r], r);
    }
    state.wait_and_rethrow();
  }

 private:
  std::vector<std::unique_ptr<worker_pool>> pools_;
  std::size_t max_workers_ = 0;
};

}  // namespace detail

/// Handle to the execution resources that run bulk work.
///
/// Copies share the same underlying resources; a default-constructed
/// scheduler runs everything inline on the awaiting thread.
class Scheduler {
 public:
  Scheduler() : impl_(inline_impl()) {}

  std::size_t resource_count() const noexcept { return impl_->resource_count(); }
  std::size_t workers_per_resource() const noexcept { return impl_->workers_per_resource(); }

  /// Invokes `f(index, resource_id)` once for every index in [0, n) and
  /// returns when all invocations have finished. The first exception thrown
  /// by `f` is rethrown here.
  template <class F>
  void bulk(std::size_t n, F&& f) const {
    impl_->bulk(n, index_fn(f));
  }

  friend bool operator==(const Scheduler& a, const Scheduler& b) noexcept {
    return a.impl_ == b.impl_;
  }

 private:
  explicit Scheduler(std::shared_ptr<const detail::resource_impl> impl) : impl_(std::move(impl)) {}

  static std::shared_ptr<const detail::resource_impl> inline_impl() {
    static const auto instance = std::make_shared<const detail::inline_resource>();
    return instance;
  }

  friend Scheduler make_pool_scheduler(std::size_t);
  friend Scheduler make_group_scheduler(std::span<const std::size_t>);

  std::shared_ptr<const detail::resource_impl> impl_;
};

inline Scheduler make_inline_scheduler() { return Scheduler{}; }

inline Scheduler make_pool_scheduler(std::size_t workers) {
  if (workers == 0) {
    throw std::invalid_argument("make_pool_scheduler: workers must be positive");
  }
  return Scheduler(std::make_shared<const detail::pool_resource>(workers));
}

/// One emulated device per entry; each entry is that device's worker count.
inline Scheduler make_group_scheduler(std::span<const std::size_t> workers_per_pool) {
  if (workers_per_pool.empty()) {
    throw std::invalid_argument("make_group_scheduler: resource list is empty");
  }
  if (std::ranges::find(workers_per_pool, std::size_t{0}) != workers_per_pool.end()) {
    throw std::invalid_argument("make_group_scheduler: workers must be positive");
  }
  return Scheduler(std::make_shared<const detail::group_resource>(workers_per_pool));
}

// host cores / resource count, at least 1
inline std::size_t default_workers_per_resource(std::size_t resources) {
  const std::size_t cores = std::max<std::size_t>(1, std::thread::hardware_concurrency());
  return std::max<std::size_t>(1, cores / std::max<std::size_t>(1, resources));
}

inline Scheduler make_group_scheduler(std::size_t resources, std::size_t workers_per_resource) {
  const std::vector<std::size_t> workers(resources, workers_per_resource);
  return make_group_scheduler(std::span<const std::size_t>(workers));
}

/// A fixed set of emulated devices. get_scheduler() may be called any number
/// of times and always refers to the same pools.
class ResourceGroup {
 public:
  explicit ResourceGroup(std::size_t resources)
      : ResourceGroup(resources, default_workers_per_resource(resources)) {}
  ResourceGroup(std::size_t resources, std::size_t workers_per_resource)
      : sched_(make_group_scheduler(resources, workers_per_resource)) {}

  Scheduler get_scheduler() const noexcept { return sched_; }

 private:
  Scheduler sched_;
};

}  // namespace netsense::exec
