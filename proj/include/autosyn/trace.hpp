#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <string_view>

#include <json.hpp>

namespace autosyn {

// Line-oriented event log. One JSON object per line; first line carries the
// schema tag so downstream tooling can reject unknown layouts.
class TraceWriter {
 public:
  TraceWriter() = default;

  explicit TraceWriter(const std::string& path) : out_(path) {
    nlohmann::ordered_json h;
    h["schema"] = "autosyn-trace/1";
    line(h);
  }

  bool open() const { return out_.is_open(); }

  void event(int64_t tick, std::string_view kind, int party, std::string_view detail) {
    if (!out_.is_open()) return;
    nlohmann::ordered_json j;
    j["t"] = tick;
    j["kind"] = std::string(kind);
    if (party >= 0) j["party"] = party;
    if (!detail.empty()) j["detail"] = std::string(detail);
    line(j);
  }

  void line(const nlohmann::ordered_json& j) {
    if (!out_.is_open()) return;
    out_ << j.dump() << '\n';
    ++lines_;
  }

  int64_t lines() const { return lines_; }

 private:
  std::ofstream out_;
  int64_t lines_ = 0;
};

}  // namespace autosyn
