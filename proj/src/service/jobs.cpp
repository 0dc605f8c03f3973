#include "tabletop/service/jobs.hpp"

#include "tabletop/error.hpp"

namespace tabletop::service {

std::string_view to_string(JobState state) {
  switch (state) {
    case JobState::Queued: return "queued";
    case JobState::Running: return "running";
    case JobState::Done: return "done";
    case JobState::Failed: return "failed";
  }
  return "unknown";
}

io::Json JobStatus::to_json() const {
  io::Json j = io::Json::object();
  j["job_id"] = id;
  j["status"] = std::string(to_string(state));
  if (state == JobState::Done) j["result"] = result;
  if (state == JobState::Failed) {
    j["error"] = error_code;
    j["message"] = error;
  }
  return j;
}

JobQueue::JobQueue(int workers) {
  for (int i = 0; i < std::max(1, workers); ++i) threads_.emplace_back([this] { worker(); });
}

JobQueue::~JobQueue() {
  {
    std::lock_guard lock(mutex_);
    stopping_ = true;
  }
  changed_.notify_all();
  for (auto& t : threads_) t.join();
}

std::string JobQueue::submit(std::function<io::Json()> work) {
  std::string id;
  {
    std::lock_guard lock(mutex_);
    id = "job-" + std::to_string(next_id_++);
    jobs_[id] = JobStatus{id, JobState::Queued, {}, {}, {}};
    pending_.emplace_back(id, std::move(work));
  }
  changed_.notify_all();
  return id;
}

std::optional<JobStatus> JobQueue::status(const std::string& id) const {
  std::lock_guard lock(mutex_);
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

std::optional<JobStatus> JobQueue::wait(const std::string& id,
                                        std::chrono::milliseconds timeout) const {
  std::unique_lock lock(mutex_);
  changed_.wait_for(lock, timeout, [&] {
    const auto it = jobs_.find(id);
    return it == jobs_.end() || it->second.state == JobState::Done ||
           it->second.state == JobState::Failed;
  });
  const auto it = jobs_.find(id);
  if (it == jobs_.end()) return std::nullopt;
  return it->second;
}

void JobQueue::worker() {
  for (;;) {
    std::pair<std::string, std::function<io::Json()>> job;
    {
      std::unique_lock lock(mutex_);
      changed_.wait(lock, [&] { return stopping_ || !pending_.empty(); });
      if (stopping_) return;
      job = std::move(pending_.front());
      pending_.pop_front();
      jobs_[job.first].state = JobState::Running;
    }
    JobStatus done{job.first, JobState::Done, {}, {}, {}};
    try {
      done.result = job.second();
    } catch (const Error& e) {
      done.state = JobState::Failed;
      done.error_code = std::string(to_string(e.code()));
      done.error = e.what();
    } catch (const std::exception& e) {
      done.state = JobState::Failed;
      done.error_code = "InternalError";
      done.error = e.what();
    }
    {
      std::lock_guard lock(mutex_);
      jobs_[job.first] = std::move(done);
    }
    changed_.notify_all();
  }
}

}  // namespace tabletop::service
