// Copyright 2026 The forgevar Authors. All Rights Reserved.
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

#include <algorithm>
#include <condition_variable>
#include <deque>
#include <mutex>
#include <set>
#include <thread>

#include "forgevar/error.hpp"
#include "forgevar/graph.hpp"

namespace fs = std::filesystem;

namespace forgevar {

namespace {

struct Job {
  const ConcreteTarget* target = nullptr;
  std::optional<std::string> stored;
  bool force_dirty = false;
};

enum class Outcome { UpToDate, Built, Failed };

struct JobResult {
  const ConcreteTarget* target = nullptr;
  Outcome outcome = Outcome::Built;
  std::optional<std::string> fingerprint;
  int exit_code = 0;
  std::string output;
};

JobResult run_job(const TargetGraph& graph, const Job& job, const ExecuteOptions& options) {
  const ConcreteTarget& t = *job.target;
  JobResult result;
  result.target = &t;
  try {
    if (!job.force_dirty) {
      result.fingerprint = current_fingerprint(graph, t, options.root);
      if (result.fingerprint && job.stored == result.fingerprint &&
          fs::exists(options.root / t.path)) {
        result.outcome = Outcome::UpToDate;
        return result;
      }
    }
    if (options.dry_run) {
      result.outcome = Outcome::Built;
      return result;
    }
    fs::path out = options.root / t.path;
    if (out.has_parent_path()) fs::create_directories(out.parent_path());
    CommandResult ran = options.runner(t.command, options.root);
    result.exit_code = ran.exit_code;
    result.output = std::move(ran.output);
    if (ran.exit_code != 0) {
      result.outcome = Outcome::Failed;
      return result;
    }
    if (!result.fingerprint) result.fingerprint = current_fingerprint(graph, t, options.root);
    result.outcome = Outcome::Built;
  } catch (const std::exception& e) {
    result.outcome = Outcome::Failed;
    if (result.exit_code == 0) result.exit_code = 1;
    result.output += std::string(e.what()) + "\n";
  }
  return result;
}

// A fixed set of workers pulling jobs; results come back through a queue the
// coordinating thread drains.
class WorkerPool {
 public:
  WorkerPool(int workers, const TargetGraph& graph, const ExecuteOptions& options)
      : graph_(graph), options_(options) {
    for (int i = 0; i < workers; ++i) threads_.emplace_back([this] { work(); });
  }

  ~WorkerPool() {
    {
      std::lock_guard lock(mutex_);
      stopping_ = true;
    }
    jobs_ready_.notify_all();
    for (auto& t : threads_) t.join();
  }

  void submit(Job job) {
    {
      std::lock_guard lock(mutex_);
      jobs_.push_back(std::move(job));
    }
    jobs_ready_.notify_one();
  }

  JobResult next_result() {
    std::unique_lock lock(mutex_);
    results_ready_.wait(lock, [this] { return !results_.empty(); });
    JobResult r = std::move(results_.front());
    results_.pop_front();
    return r;
  }

 private:
  void work() {
    while (true) {
      Job job;
      {
        std::unique_lock lock(mutex_);
        jobs_ready_.wait(lock, [this] { return stopping_ || !jobs_.empty(); });
        if (jobs_.empty()) return;
        job = std::move(jobs_.front());
        jobs_.pop_front();
      }
      JobResult result = run_job(graph_, job, options_);
      {
        std::lock_guard lock(mutex_);
        results_.push_back(std::move(result));
      }
      results_ready_.notify_one();
    }
  }

  const TargetGraph& graph_;
  const ExecuteOptions& options_;
  std::mutex mutex_;
  std::condition_variable jobs_ready_;
  std::condition_variable results_ready_;
  std::deque<Job> jobs_;
  std::deque<JobResult> results_;
  bool stopping_ = false;
  std::vector<std::thread> threads_;
};

void validate_sources(const TargetGraph& graph, const fs::path& root) {
  for (const auto& [path, t] : graph.targets()) {
    for (const auto& dep : t.dependencies) {
      if (graph.find(dep) == nullptr && !fs::exists(root / dep)) {
        throw Error(ErrorKind::MissingSource,
                    "'" + dep + "' (needed by '" + path + "') does not exist");
      }
    }
  }
}

}  // namespace

BuildReport execute(const TargetGraph& graph, StateStore& store, const ExecuteOptions& options) {
  graph.check_acyclic();
  validate_sources(graph, options.root);

  const auto dependents = graph.dependents();
  std::map<std::string, std::size_t> waiting;
  std::set<std::string> ready;
  for (const auto& [path, t] : graph.targets()) {
    std::set<std::string> node_deps;
    for (const auto& dep : t.dependencies) {
      if (graph.find(dep)) node_deps.insert(dep);
    }
    waiting[path] = node_deps.size();
    if (node_deps.empty()) ready.insert(path);
  }

  BuildReport report;
  std::set<std::string> rebuilt;
  std::set<std::string> failed;
  std::ostream* log = options.log;

  {
    WorkerPool pool(std::max(1, options.jobs), graph, options);
    std::size_t in_flight = 0;
    while (true) {
      while (!ready.empty() && in_flight < static_cast<std::size_t>(std::max(1, options.jobs))) {
        const ConcreteTarget* t = graph.find(*ready.begin());
        ready.erase(ready.begin());
        Job job{t, store.get(t->path), false};
        if (options.dry_run) {
          job.force_dirty = std::any_of(t->dependencies.begin(), t->dependencies.end(),
                                        [&](const std::string& d) { return rebuilt.count(d); });
        }
        pool.submit(std::move(job));
        ++in_flight;
      }
      if (in_flight == 0) break;

      JobResult r = pool.next_result();
      --in_flight;
      const std::string& path = r.target->path;
      switch (r.outcome) {
        case Outcome::UpToDate:
          report.up_to_date.push_back(path);
          break;
        case Outcome::Built:
          report.built.push_back(path);
          rebuilt.insert(path);
          if (!options.dry_run) store.set(path, *r.fingerprint);
          if (log) *log << r.target->command << '\n' << r.output;
          break;
        case Outcome::Failed:
          failed.insert(path);
          store.erase(path);
          report.failed.push_back({path, r.exit_code, r.output});
          if (log) {
            *log << "error: building " << path << " failed (exit " << r.exit_code << ")\n"
                 << "  " << r.target->command << '\n'
                 << r.output;
            if (!r.output.empty() && r.output.back() != '\n') *log << '\n';
          }
          continue;
      }
      for (const auto& dependent : dependents.at(path)) {
        if (--waiting[dependent] == 0) ready.insert(dependent);
      }
    }
  }

  // Whatever never ran is blocked by a failure; blame the smallest failed
  // ancestor so the report does not depend on scheduling.
  std::map<std::string, std::optional<std::string>> blame_memo;
  std::function<std::optional<std::string>(const std::string&)> blame =
      [&](const std::string& path) -> std::optional<std::string> {
    if (auto it = blame_memo.find(path); it != blame_memo.end()) return it->second;
    std::optional<std::string> best;
    for (const auto& dep : graph.find(path)->dependencies) {
      if (!graph.find(dep)) continue;
      std::optional<std::string> candidate = failed.count(dep) ? std::optional(dep) : blame(dep);
      if (candidate && (!best || *candidate < *best)) best = candidate;
    }
    blame_memo[path] = best;
    return best;
  };
  std::set<std::string> finished(rebuilt.begin(), rebuilt.end());
  finished.insert(failed.begin(), failed.end());
  finished.insert(report.up_to_date.begin(), report.up_to_date.end());
  for (const auto& [path, t] : graph.targets()) {
    if (finished.count(path)) continue;
    report.skipped.push_back({path, blame(path).value_or("?")});
  }

  std::sort(report.built.begin(), report.built.end());
  std::sort(report.up_to_date.begin(), report.up_to_date.end());
  std::sort(report.failed.begin(), report.failed.end(),
            [](const FailedTarget& a, const FailedTarget& b) { return a.path < b.path; });
  report.up_to_date_count = report.up_to_date.size();

  if (!options.dry_run) store.save();
  if (log) *log << format_summary(report);
  return report;
}

}  // namespace forgevar
