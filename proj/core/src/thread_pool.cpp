#include "digholo/thread_pool.hpp"

#include <algorithm>

namespace digholo {

ThreadPool::ThreadPool(int threadCount) { resize(threadCount); }

ThreadPool::~ThreadPool() { stop(); }

void ThreadPool::stop() {
  {
    std::lock_guard<std::mutex> lock(mutex_);
    quit_ = true;
  }
  wake_.notify_all();
  for (auto& t : workers_) t.join();
  workers_.clear();
  quit_ = false;
}

void ThreadPool::resize(int threadCount) {
  threadCount = std::max(1, threadCount);
  if (threadCount == size()) return;
  stop();
  for (int i = 1; i < threadCount; ++i) workers_.emplace_back([this] { workerLoop(); });
}

void ThreadPool::runChunk() {
  for (;;) {
    std::size_t idx;
    const std::function<void(std::size_t)>* job;
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!job_ || next_ >= count_) return;
      idx = next_++;
      job = job_;
    }
    try {
      (*job)(idx);
    } catch (...) {
      std::lock_guard<std::mutex> lock(mutex_);
      if (!error_) error_ = std::current_exception();
    }
    {
      std::lock_guard<std::mutex> lock(mutex_);
      if (++finished_ == count_) done_.notify_all();
    }
  }
}

void ThreadPool::workerLoop() {
  std::size_t seen = 0;
  for (;;) {
    {
      std::unique_lock<std::mutex> lock(mutex_);
      wake_.wait(lock, [&] { return quit_ || generation_ != seen; });
      if (quit_) return;
      seen = generation_;
    }
    runChunk();
  }
}

void ThreadPool::parallelFor(std::size_t count, const std::function<void(std::size_t)>& fn) {
  if (count == 0) return;
  if (workers_.empty() || count == 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  {
    std::lock_guard<std::mutex> lock(mutex_);
    job_ = &fn;
    count_ = count;
    next_ = 0;
    finished_ = 0;
    error_ = nullptr;
    ++generation_;
  }
  wake_.notify_all();
  runChunk();
  std::exception_ptr err;
  {
    std::unique_lock<std::mutex> lock(mutex_);
    done_.wait(lock, [&] { return finished_ == count_; });
    job_ = nullptr;
    err = error_;
    error_ = nullptr;
  }
  if (err) std::rethrow_exception(err);
}

}  // namespace digholo
