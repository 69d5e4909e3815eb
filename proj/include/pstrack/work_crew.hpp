#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

#include "pstrack/errors.hpp"

namespace pstrack {

/// Fixed pool of p workers with static stride scheduling: worker w handles
/// jobs w, w + p, w + 2p, ... The calling thread acts as worker 0, so a
/// crew of size 1 starts no threads. Threads live as long as the crew.
class work_crew {
 public:
  explicit work_crew(std::size_t workers = 1) : size_(workers) {
    if (workers == 0) throw domain_error("a work crew needs at least one worker");
    errors_.resize(workers);
    threads_.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) threads_.emplace_back([this, w] { worker_loop(w); });
  }

  work_crew(const work_crew&) = delete;
  work_crew& operator=(const work_crew&) = delete;

  ~work_crew() {
    {
      std::lock_guard lock(mutex_);
      stopping_ = true;
      ++generation_;
    }
    wake_.notify_all();
    for (auto& t : threads_) t.join();
  }

  std::size_t size() const noexcept { return size_; }

  /// Runs task(worker) once on every worker and waits for all of them.
  /// The first exception thrown by any worker is rethrown here.
  void run_on_all(const std::function<void(std::size_t)>& task) {
    if (size_ == 1) {
      task(0);
      return;
    }
    {
      std::lock_guard lock(mutex_);
      task_ = &task;
      pending_ = size_ - 1;
      for (auto& e : errors_) e = nullptr;
      ++generation_;
    }
    wake_.notify_all();
    try {
      task(0);
    } catch (...) {
      errors_[0] = std::current_exception();
    }
    {
      std::unique_lock lock(mutex_);
      done_.wait(lock, [this] { return pending_ == 0; });
      task_ = nullptr;
    }
    for (auto& e : errors_)
      if (e) std::rethrow_exception(e);
  }

  /// Calls job(index, worker) for index in [0, count) with stride scheduling.
  template <class Job>
  void for_each(std::size_t count, Job&& job) {
    run_on_all([&](std::size_t w) {
      for (std::size_t i = w; i < count; i += size_) job(i, w);
    });
  }

 private:
  void worker_loop(std::size_t w) {
    std::size_t seen = 0;
    while (true) {
      const std::function<void(std::size_t)>* task = nullptr;
      {
        std::unique_lock lock(mutex_);
        wake_.wait(lock, [&] { return generation_ != seen; });
        seen = generation_;
        if (stopping_) return;
        task = task_;
      }
      try {
        (*task)(w);
      } catch (...) {
        errors_[w] = std::current_exception();
      }
      {
        std::lock_guard lock(mutex_);
        if (--pending_ == 0) done_.notify_one();
      }
    }
  }

  std::size_t size_;
  std::vector<std::thread> threads_;
  std::vector<std::exception_ptr> errors_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* task_ = nullptr;
  std::size_t pending_ = 0;
  std::size_t generation_ = 0;
  bool stopping_ = false;
};

}  // namespace pstrack
