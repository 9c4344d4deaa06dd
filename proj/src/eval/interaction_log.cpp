#include "specgr/interaction_log.hpp"

#include "specgr/errors.hpp"

#include <fmt/format.h>
#include <json.hpp>

#include <fstream>

namespace specgr {

InteractionLog read_interactions(std::istream& in) {
  InteractionLog log;
  std::string line;
  std::size_t line_no = 0;
  std::int64_t offset = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::int64_t start = offset;
    offset += static_cast<std::int64_t>(line.size()) + 1;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    try {
      const auto j = nlohmann::json::parse(line);
      Interaction r;
      r.user = j.at("user").get<std::string>();
      r.item = j.at("item").get<std::string>();
      r.ts = j.at("ts").get<std::int64_t>();
      log.push_back(std::move(r));
    } catch (const nlohmann::json::exception& e) {
      throw FormatError(fmt::format("interaction line {} (byte offset {}): {}", line_no, start, e.what()));
    }
  }
  return log;
}

InteractionLog read_interactions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError(fmt::format("cannot open {}", path));
  return read_interactions(in);
}

void write_interactions(std::ostream& out, const InteractionLog& log) {
  for (const Interaction& r : log) {
    out << nlohmann::json{{"user", r.user}, {"item", r.item}, {"ts", r.ts}}.dump() << '\n';
  }
}

}  // namespace specgr
