#pragma once

#include <condition_variable>
#include <cstddef>
#include <exception>
#include <functional>
#include <mutex>
#include <thread>
#include <vector>

namespace qtask {

/// One-shot DAG executor over a fixed-size worker pool. Jobs become ready
/// when all their predecessors finished; ready jobs are pulled from a shared
/// queue, which balances work dynamically. The first exception thrown by a
/// job aborts the remaining jobs (their bodies are skipped so the run always
/// drains) and is rethrown from run().
class TaskPool {
 public:
  using JobId = std::size_t;

  explicit TaskPool(unsigned threads);

  JobId add(std::function<void()> fn);
  void add_edge(JobId before, JobId after);

  /// Executes the DAG; blocks until every job finished.
  void run();

 private:
  struct Job {
    std::function<void()> fn;
    std::vector<JobId> succs;
    std::size_t pending = 0;
  };

  void worker();
  void finish_job(JobId id, std::unique_lock<std::mutex>& lock);

  unsigned threads_;
  std::vector<Job> jobs_;
  std::vector<JobId> ready_;
  std::size_t remaining_ = 0;
  bool aborted_ = false;
  std::exception_ptr error_;
  std::mutex mutex_;
  std::condition_variable cv_;
};

}  // namespace qtask
