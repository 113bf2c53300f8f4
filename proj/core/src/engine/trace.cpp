#include "mwsn/engine/trace.hpp"

#include <cstdio>

namespace mwsn {

void TraceLog::line(double time, NodeId node, std::string_view kind, std::string_view detail) {
  if (!enabled_) return;
  char stamp[32];
  std::snprintf(stamp, sizeof stamp, "%.6f", time);
  out_ << stamp << ' ';
  if (node == kNoNode) {
    out_ << '-';
  } else {
    out_ << node;
  }
  out_ << ' ' << kind;
  if (!detail.empty()) out_ << ' ' << detail;
  out_ << '\n';
}

}  // namespace mwsn
