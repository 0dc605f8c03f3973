#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <functional>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "tabletop/io/tree.hpp"

namespace tabletop::service {

enum class JobState { Queued, Running, Done, Failed };
std::string_view to_string(JobState state);

struct JobStatus {
  std::string id;
  JobState state = JobState::Queued;
  io::Json result;          // set when Done
  std::string error_code;   // set when Failed
  std::string error;

  io::Json to_json() const;
};

// FIFO of background computations run by a fixed set of workers.
class JobQueue {
 public:
  explicit JobQueue(int workers = 1);
  ~JobQueue();
  JobQueue(const JobQueue&) = delete;
  JobQueue& operator=(const JobQueue&) = delete;

  std::string submit(std::function<io::Json()> work);
  std::optional<JobStatus> status(const std::string& id) const;
  // Blocks until the job finishes or the timeout passes.
  std::optional<JobStatus> wait(const std::string& id, std::chrono::milliseconds timeout) const;

 private:
  void worker();

  mutable std::mutex mutex_;
  mutable std::condition_variable changed_;
  std::map<std::string, JobStatus> jobs_;
  std::deque<std::pair<std::string, std::function<io::Json()>>> pending_;
  std::vector<std::thread> threads_;
  std::uint64_t next_id_ = 1;
  bool stopping_ = false;
};

}  // namespace tabletop::service
