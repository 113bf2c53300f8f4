#pragma once

#include <sstream>
#include <string>
#include <string_view>

#include "mwsn/types.hpp"

namespace mwsn {

/// Line-oriented event log. Each line is
///   <time> <node> <KIND> <detail>
/// with the time fixed to microseconds. Disabled logs cost one branch.
class TraceLog {
 public:
  explicit TraceLog(bool enabled = false) : enabled_(enabled) {}

  bool enabled() const noexcept { return enabled_; }
  void line(double time, NodeId node, std::string_view kind, std::string_view detail);
  std::string str() const { return out_.str(); }

 private:
  bool enabled_;
  std::ostringstream out_;
};

}  // namespace mwsn
