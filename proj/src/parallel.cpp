// Copyright 2026 The dynsparse Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "parallel.hpp"

#include <atomic>
#include <condition_variable>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

namespace dynsparse {

ExecBackend ExecBackend::threaded(int nthreads) {
  if (nthreads < 1)
    throw Error(ErrorCode::InvalidArgument, "threaded backend needs nthreads >= 1");
  return ExecBackend(Kind::Threaded, nthreads);
}

namespace detail {
namespace {

struct Job {
  const std::function<void(int)>* task = nullptr;
  int nchunks = 0;
  std::atomic<int> next{0};
  std::atomic<int> pending{0};
  std::mutex error_mutex;
  std::exception_ptr error;
};

class ThreadPool {
 public:
  ~ThreadPool() {
    {
      std::lock_guard lk(m_);
      stop_ = true;
    }
    wake_.notify_all();
    for (auto& t : workers_) t.join();
  }

  void run(int nchunks, const std::function<void(int)>& task) {
    // One job at a time; concurrent callers queue here.
    std::lock_guard serial(run_mutex_);
    auto job = std::make_shared<Job>();
    job->task = &task;
    job->nchunks = nchunks;
    job->pending = nchunks;
    {
      std::lock_guard lk(m_);
      while (static_cast<int>(workers_.size()) < nchunks - 1)
        workers_.emplace_back([this] { worker_loop(); });
      job_ = job;
      ++generation_;
    }
    wake_.notify_all();
    drain(*job);
    {
      std::unique_lock lk(m_);
      done_.wait(lk, [&] { return job->pending.load() == 0; });
      job_.reset();
    }
    if (job->error) std::rethrow_exception(job->error);
  }

 private:
  void worker_loop() {
    std::uint64_t seen = 0;
    for (;;) {
      std::shared_ptr<Job> job;
      {
        std::unique_lock lk(m_);
        wake_.wait(lk, [&] { return stop_ || (generation_ != seen && job_); });
        if (stop_) return;
        seen = generation_;
        job = job_;
      }
      drain(*job);
    }
  }

  void drain(Job& job) {
    for (int c = job.next.fetch_add(1); c < job.nchunks; c = job.next.fetch_add(1)) {
      try {
        (*job.task)(c);
      } catch (...) {
        std::lock_guard lk(job.error_mutex);
        if (!job.error) job.error = std::current_exception();
      }
      if (job.pending.fetch_sub(1) == 1) {
        std::lock_guard lk(m_);
        done_.notify_all();
      }
    }
  }

  std::mutex run_mutex_;
  std::mutex m_;
  std::condition_variable wake_;
  std::condition_variable done_;
  std::vector<std::thread> workers_;
  std::shared_ptr<Job> job_;
  std::uint64_t generation_ = 0;
  bool stop_ = false;
};

ThreadPool& pool() {
  static ThreadPool instance;
  return instance;
}

}  // namespace

void run_chunks(int nchunks, const std::function<void(int)>& task) {
  if (nchunks <= 1) {
    for (int c = 0; c < nchunks; ++c) task(c);
    return;
  }
  pool().run(nchunks, task);
}

}  // namespace detail
}  // namespace dynsparse
