#include "core/parallel.hpp"

#include <algorithm>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <thread>
#include <vector>

namespace recho {

namespace {

class Pool {
 public:
  explicit Pool(std::size_t workers) {
    for (std::size_t i = 0; i < workers; ++i) {
      threads_.emplace_back([this, i] { run(i); });
    }
  }

  ~Pool() {
    {
      std::unique_lock lk(m_);
      stop_ = true;
    }
    cv_.notify_all();
    for (auto& t : threads_) t.join();
  }

  std::size_t size() const { return threads_.size(); }

  void dispatch(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
    const std::size_t parts = threads_.size() + 1;
    const std::size_t chunk = (n + parts - 1) / parts;
    {
      std::unique_lock lk(m_);
      job_ = &fn;
      job_n_ = n;
      job_chunk_ = chunk;
      done_ = 0;
      ++generation_;
    }
    cv_.notify_all();
    // This thread takes the last chunk.
    const std::size_t begin = threads_.size() * chunk;
    if (begin < n) fn(begin, std::min(n, begin + chunk));
    std::unique_lock lk(m_);
    cv_done_.wait(lk, [this] { return done_ == threads_.size(); });
    job_ = nullptr;
  }

 private:
  void run(std::size_t id) {
    std::size_t seen = 0;
    for (;;) {
      const std::function<void(std::size_t, std::size_t)>* job = nullptr;
      std::size_t n = 0, chunk = 0;
      {
        std::unique_lock lk(m_);
        cv_.wait(lk, [&] { return stop_ || generation_ != seen; });
        if (stop_) return;
        seen = generation_;
        job = job_;
        n = job_n_;
        chunk = job_chunk_;
      }
      const std::size_t begin = id * chunk;
      if (job && begin < n) (*job)(begin, std::min(n, begin + chunk));
      {
        std::unique_lock lk(m_);
        ++done_;
      }
      cv_done_.notify_one();
    }
  }

  std::vector<std::thread> threads_;
  std::mutex m_;
  std::condition_variable cv_, cv_done_;
  const std::function<void(std::size_t, std::size_t)>* job_ = nullptr;
  std::size_t job_n_ = 0, job_chunk_ = 0, done_ = 0, generation_ = 0;
  bool stop_ = false;
};

std::size_t configured_workers() {
  std::size_t n = std::thread::hardware_concurrency();
  if (n == 0) n = 1;
  if (const char* env = std::getenv("RUPTURE_ECHO_THREADS")) {
    const long cap = std::strtol(env, nullptr, 10);
    if (cap >= 1) n = std::min<std::size_t>(n, static_cast<std::size_t>(cap));
  }
  return n;
}

Pool& pool() {
  static Pool p(configured_workers() - 1);
  return p;
}

}  // namespace

std::size_t worker_count() { return pool().size() + 1; }

void parallel_for(std::size_t n, const std::function<void(std::size_t, std::size_t)>& fn) {
  if (n == 0) return;
  if (pool().size() == 0 || n == 1) {
    fn(0, n);
    return;
  }
  pool().dispatch(n, fn);
}

}  // namespace recho
