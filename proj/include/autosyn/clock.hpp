#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace autosyn {

// Global reference clock. NOW starts at -t_start; NEXT at 0 (the genesis
// round boundary). NOW advances one tick at a time, never past NEXT; NEXT is
// extended by Round-Update once every waited-on party and the functionality
// set have reported since the last update.
class AutoClock {
 public:
  AutoClock(int64_t t_start, int64_t t_run) : now_(-t_start), next_(0), t_run_(t_run) {}

  int64_t now() const { return now_; }    // clock-read
  int64_t next() const { return next_; }
  int64_t t_run() const { return t_run_; }
  void set_t_run(int64_t v) { t_run_ = v; }

  // Wait set: honest, clock-registered parties. Corrupted and time-unaware
  // parties are removed and never gate Round-Update.
  void register_party(int id) { reports_.emplace(id, Report{}); }
  void deregister_party(int id) { reports_.erase(id); }
  bool registered(int id) const { return reports_.count(id) != 0; }

  // IncrementTime: one step of the steady pace, gated by NEXT.
  bool advance() {
    if (now_ >= next_) return false;
    ++now_;
    return true;
  }

  // clock-update from a party; ⊥ reports flag the party but carry no value.
  void report(int id, std::optional<int64_t> t_next) {
    auto it = reports_.find(id);
    if (it == reports_.end()) return;
    it->second.flagged = true;
    it->second.value = t_next;
    try_round_update();
  }

  // clock-update from the functionality set (the scheduler flags them as one).
  void functionalities_ready() {
    func_ready_ = true;
    try_round_update();
  }

  // Majority value among non-⊥ reports; ties break to the smallest value.
  static std::optional<int64_t> majority(const std::vector<std::optional<int64_t>>& vals) {
    std::map<int64_t, int> counts;
    for (const auto& v : vals)
      if (v) ++counts[*v];
    std::optional<int64_t> best;
    int best_n = 0;
    for (const auto& [v, n] : counts)
      if (n > best_n) {  // map order makes the first maximum the smallest value
        best = v;
        best_n = n;
      }
    return best;
  }

  bool try_round_update() {
    if (!func_ready_ || reports_.empty()) return false;
    std::vector<std::optional<int64_t>> vals;
    vals.reserve(reports_.size());
    for (const auto& [id, r] : reports_) {
      if (!r.flagged) return false;
      vals.push_back(r.value);
    }
    auto v = majority(vals);
    if (!v) return false;  // every report ⊥: no round boundary can be agreed
    // max() guard: stale minority reports must not drag NEXT behind NOW
    next_ = std::max(now_, t_run_ + *v);
    for (auto& [id, r] : reports_) r.flagged = false;
    func_ready_ = false;
    ++round_updates_;
    return true;
  }

  int64_t round_updates() const { return round_updates_; }

 private:
  struct Report {
    bool flagged = false;
    std::optional<int64_t> value;
  };

  int64_t now_;
  int64_t next_;
  int64_t t_run_;
  bool func_ready_ = false;
  int64_t round_updates_ = 0;
  std::map<int, Report> reports_;
};

}  // namespace autosyn
