#include "abp/threads.hpp"

#include <algorithm>
#include <atomic>
#include <condition_variable>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace abp {

namespace {

std::atomic<int> g_configured{0};

// Set while a thread executes job indices; nested parallel_for calls run
// serially instead of deadlocking on the pool.
thread_local bool tl_in_job = false;

int env_threads() {
  const char* e = std::getenv("ABP_THREADS");
  if (!e || !*e) return 0;
  int v = std::atoi(e);
  return v > 0 ? v : 0;
}

// Process-lifetime pool. One job at a time (run() is serialized); the caller
// participates, pool threads claim a share each. Indices are handed out from
// a shared counter, so scheduling varies run to run -- callers must only do
// disjoint writes, which is all the engine needs.
class Pool {
 public:
  static Pool& instance() {
    static Pool p;
    return p;
  }

  int capacity() const { return int(threads_.size()) + 1; }

  void run(std::size_t n, int extra_workers, const std::function<void(std::size_t)>& fn) {
    std::lock_guard<std::mutex> serial(run_mutex_);
    {
      std::lock_guard<std::mutex> lk(m_);
      job_ = &fn;
      next_.store(0, std::memory_order_relaxed);
      total_ = n;
      error_ = nullptr;
      unclaimed_ = extra_workers;
      remaining_ = extra_workers;
      ++epoch_;
    }
    cv_.notify_all();
    drain();
    {
      std::unique_lock<std::mutex> lk(m_);
      cv_done_.wait(lk, [&] { return remaining_ == 0; });
      job_ = nullptr;
      if (error_) {
        std::exception_ptr e = error_;
        error_ = nullptr;
        std::rethrow_exception(e);
      }
    }
  }

 private:
  Pool() {
    unsigned hw = std::thread::hardware_concurrency();
    int extra = hw > 1 ? int(hw) - 1 : 0;
    threads_.reserve(extra);
    for (int i = 0; i < extra; ++i) threads_.emplace_back([this] { worker(); });
  }

  void worker() {
    std::uint64_t seen = 0;
    for (;;) {
      {
        std::unique_lock<std::mutex> lk(m_);
        cv_.wait(lk, [&] { return epoch_ != seen; });
        seen = epoch_;
        if (unclaimed_ == 0) continue;  // late wakeup, share already taken
        --unclaimed_;
      }
      drain();
      {
        std::lock_guard<std::mutex> lk(m_);
        if (--remaining_ == 0) cv_done_.notify_all();
      }
    }
  }

  void drain() {
    bool prev = tl_in_job;
    tl_in_job = true;
    for (;;) {
      std::size_t i = next_.fetch_add(1, std::memory_order_relaxed);
      if (i >= total_) break;
      try {
        (*job_)(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(m_);
        if (!error_) error_ = std::current_exception();
      }
    }
    tl_in_job = prev;
  }

  std::vector<std::thread> threads_;
  std::mutex run_mutex_, m_;
  std::condition_variable cv_, cv_done_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::atomic<std::size_t> next_{0};
  std::size_t total_ = 0;
  int unclaimed_ = 0;
  int remaining_ = 0;
  std::uint64_t epoch_ = 0;
  std::exception_ptr error_;
};

}  // namespace

int worker_count() {
  int e = env_threads();
  if (e > 0) return e;
  int c = g_configured.load(std::memory_order_relaxed);
  if (c > 0) return c;
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? int(hw) : 1;
}

void set_worker_count(int n) { g_configured.store(n > 0 ? n : 0, std::memory_order_relaxed); }

void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  if (n == 0) return;
  int w = worker_count();
  if (tl_in_job || w <= 1 || n == 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  Pool& p = Pool::instance();
  int extra = std::min({int(n), w, p.capacity()}) - 1;
  if (extra <= 0) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  p.run(n, extra, fn);
}

}  // namespace abp
