#include "qtask/executor.hpp"

#include <algorithm>

namespace qtask {

TaskPool::TaskPool(unsigned threads) : threads_(std::max(threads, 1u)) {}

TaskPool::JobId TaskPool::add(std::function<void()> fn) {
  jobs_.push_back(Job{std::move(fn), {}, 0});
  return jobs_.size() - 1;
}

void TaskPool::add_edge(JobId before, JobId after) {
  jobs_[before].succs.push_back(after);
  jobs_[after].pending++;
}

void TaskPool::finish_job(JobId id, std::unique_lock<std::mutex>& lock) {
  for (JobId s : jobs_[id].succs) {
    if (--jobs_[s].pending == 0) {
      ready_.push_back(s);
    }
  }
  --remaining_;
  if (remaining_ == 0 || !ready_.empty()) {
    lock.unlock();
    cv_.notify_all();
    lock.lock();
  }
}

void TaskPool::worker() {
  std::unique_lock<std::mutex> lock(mutex_);
  while (true) {
    cv_.wait(lock, [&] { return !ready_.empty() || remaining_ == 0; });
    if (remaining_ == 0) {
      return;
    }
    if (ready_.empty()) {
      continue;
    }
    const JobId id = ready_.back();
    ready_.pop_back();
    const bool skip = aborted_;
    lock.unlock();
    std::exception_ptr err;
    if (!skip && jobs_[id].fn) {
      try {
        jobs_[id].fn();
      } catch (...) {
        err = std::current_exception();
      }
    }
    lock.lock();
    if (err && !error_) {
      error_ = err;
      aborted_ = true;
    }
    finish_job(id, lock);
  }
}

void TaskPool::run() {
  {
    std::unique_lock<std::mutex> lock(mutex_);
    remaining_ = jobs_.size();
    for (JobId id = 0; id < jobs_.size(); ++id) {
      if (jobs_[id].pending == 0) {
        ready_.push_back(id);
      }
    }
  }
  if (jobs_.empty()) {
    return;
  }
  const unsigned count = std::min<std::size_t>(threads_, jobs_.size());
  std::vector<std::thread> workers;
  workers.reserve(count);
  for (unsigned t = 0; t < count; ++t) {
    workers.emplace_back([this] { worker(); });
  }
  for (auto& w : workers) {
    w.join();
  }
  if (error_) {
    std::rethrow_exception(error_);
  }
}

}  // namespace qtask
