#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace specgr {

struct Interaction {
  std::string user;
  std::string item;
  std::int64_t ts = 0;  // epoch seconds
};

using InteractionLog = std::vector<Interaction>;

// JSON lines, one {"user": str, "item": str, "ts": int} object per line.
// Blank lines are skipped; anything else malformed is a FormatError naming
// the line and its byte offset.
InteractionLog read_interactions(std::istream& in);
InteractionLog read_interactions(const std::string& path);
void write_interactions(std::ostream& out, const InteractionLog& log);

}  // namespace specgr
