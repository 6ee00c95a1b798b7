#pragma once

// Event log persistence, one JSON object per line with fixed key order:
//   {"i":0,"kind":"create","obj":1,"substrate":"computer","content_b64":"...","src":null}
// Destroy lines carry null substrate, content_b64 and src.

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "prenelab/core/base64.hpp"
#include "prenelab/registry/world.hpp"

namespace prenelab::registry {

inline std::string to_jsonl_line(const Event& e) {
  nlohmann::ordered_json j;
  j["i"] = e.index;
  j["kind"] = std::string(to_string(e.kind));
  j["obj"] = e.obj;
  j["substrate"] = e.substrate ? nlohmann::ordered_json(to_string(*e.substrate)) : nlohmann::ordered_json(nullptr);
  j["content_b64"] = e.content ? nlohmann::ordered_json(base64_encode(*e.content)) : nlohmann::ordered_json(nullptr);
  j["src"] = e.src ? nlohmann::ordered_json(*e.src) : nlohmann::ordered_json(nullptr);
  return j.dump();
}

inline void write_jsonl(std::ostream& out, std::span<const Event> events) {
  for (const auto& e : events) out << to_jsonl_line(e) << '\n';
}

inline std::string to_jsonl(std::span<const Event> events) {
  std::ostringstream out;
  write_jsonl(out, events);
  return out.str();
}

inline Event parse_jsonl_line(std::string_view line, std::size_t line_no) {
  auto fail = [&](const std::string& why) {
    throw Error(Errc::Parse, "line " + std::to_string(line_no) + ": " + why);
  };
  const auto j = nlohmann::json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) fail("not a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "i" && key != "kind" && key != "obj" && key != "substrate" && key != "content_b64" && key != "src") {
      fail("unknown field '" + key + "'");
    }
  }
  auto get_uint = [&](const char* key) -> std::uint64_t {
    if (!j.contains(key) || !j[key].is_number_unsigned()) fail(std::string("'") + key + "' must be an unsigned integer");
    return j[key].get<std::uint64_t>();
  };
  Event e;
  e.index = get_uint("i");
  e.obj = get_uint("obj");
  if (!j.contains("kind") || !j["kind"].is_string()) fail("'kind' must be a string");
  const auto kind = j["kind"].get<std::string>();
  if (kind == "create") {
    e.kind = EventKind::Create;
  } else if (kind == "destroy") {
    e.kind = EventKind::Destroy;
  } else if (kind == "transcribe") {
    e.kind = EventKind::Transcribe;
  } else {
    fail("unknown kind '" + kind + "'");
  }
  if (j.contains("substrate") && !j["substrate"].is_null()) {
    if (!j["substrate"].is_string()) fail("'substrate' must be a string");
    e.substrate = parse_substrate(j["substrate"].get<std::string>());
    if (!e.substrate) fail("unknown substrate '" + j["substrate"].get<std::string>() + "'");
  }
  if (j.contains("content_b64") && !j["content_b64"].is_null()) {
    if (!j["content_b64"].is_string()) fail("'content_b64' must be a string");
    e.content = base64_decode(j["content_b64"].get<std::string>());
    if (!e.content) fail("'content_b64' is not valid base64");
  }
  if (j.contains("src") && !j["src"].is_null()) e.src = get_uint("src");
  return e;
}

inline std::vector<Event> read_jsonl(std::istream& in) {
  std::vector<Event> events;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    events.push_back(parse_jsonl_line(line, line_no));
  }
  return events;
}

inline std::vector<Event> parse_jsonl(const std::string& text) {
  std::istringstream in(text);
  return read_jsonl(in);
}

}  // namespace prenelab::registry
