#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace digholo {

// Fixed-size worker pool. parallelFor blocks until every index is done.
class ThreadPool {
 public:
  explicit ThreadPool(int threadCount = 1);
  ~ThreadPool();
  ThreadPool(const ThreadPool&) = delete;
  ThreadPool& operator=(const ThreadPool&) = delete;

  void resize(int threadCount);
  int size() const { return static_cast<int>(workers_.size()) + 1; }

  void parallelFor(std::size_t count, const std::function<void(std::size_t)>& fn);

 private:
  void stop();
  void workerLoop();
  void runChunk();

  std::vector<std::thread> workers_;
  std::mutex mutex_;
  std::condition_variable wake_;
  std::condition_variable done_;
  const std::function<void(std::size_t)>* job_ = nullptr;
  std::size_t count_ = 0;
  std::size_t next_ = 0;
  std::size_t finished_ = 0;
  std::size_t generation_ = 0;
  bool quit_ = false;
  std::exception_ptr error_;
};

}  // namespace digholo
