#pragma once

// Append-only world log of stored objects. Time t counts applied events: the
// world "at t" is the state after events 0 .. t-1, so t ranges over
// [0, log size] and t = 0 is the empty world.

#include <algorithm>
#include <cctype>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "prenelab/core/error.hpp"

namespace prenelab::registry {

using ObjectId = std::uint64_t;
using EventIndex = std::uint64_t;

enum class SubstrateKind { NucleicAcid, Brain, Computer, Document, Other };

struct Substrate {
  SubstrateKind kind = SubstrateKind::Other;
  std::string other_name;  // only for Other

  static Substrate nucleic_acid() { return {SubstrateKind::NucleicAcid, {}}; }
  static Substrate brain() { return {SubstrateKind::Brain, {}}; }
  static Substrate computer() { return {SubstrateKind::Computer, {}}; }
  static Substrate document() { return {SubstrateKind::Document, {}}; }
  static Substrate other(std::string name) { return {SubstrateKind::Other, std::move(name)}; }

  friend bool operator==(const Substrate&, const Substrate&) = default;
};

inline std::string to_string(const Substrate& s) {
  switch (s.kind) {
    case SubstrateKind::NucleicAcid: return "nucleic_acid";
    case SubstrateKind::Brain: return "brain";
    case SubstrateKind::Computer: return "computer";
    case SubstrateKind::Document: return "document";
    case SubstrateKind::Other: return "other:" + s.other_name;
  }
  return "other:";
}

inline std::optional<Substrate> parse_substrate(std::string_view text) {
  if (text == "nucleic_acid") return Substrate::nucleic_acid();
  if (text == "brain") return Substrate::brain();
  if (text == "computer") return Substrate::computer();
  if (text == "document") return Substrate::document();
  if (text.starts_with("other:") && text.size() > 6) return Substrate::other(std::string(text.substr(6)));
  return std::nullopt;
}

/// Documents compare case-insensitively with runs of whitespace collapsed to
/// one space and trimmed; every other substrate compares raw bytes.
inline std::string normalize(std::string_view content, const Substrate& substrate) {
  if (substrate.kind != SubstrateKind::Document) return std::string(content);
  std::string out;
  bool pending_space = false;
  for (char c : content) {
    const auto uc = static_cast<unsigned char>(c);
    if (std::isspace(uc)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out += ' ';
    pending_space = false;
    out += static_cast<char>(std::tolower(uc));
  }
  return out;
}

struct StoredObject {
  ObjectId id = 0;
  Substrate substrate;
  std::string content;
  EventIndex created_at = 0;
  std::optional<EventIndex> destroyed_at;
  std::optional<ObjectId> source;

  [[nodiscard]] bool alive_at(EventIndex t) const noexcept {
    return created_at < t && (!destroyed_at || t <= *destroyed_at);
  }

  friend bool operator==(const StoredObject&, const StoredObject&) = default;
};

enum class EventKind { Create, Destroy, Transcribe };

inline std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::Create: return "create";
    case EventKind::Destroy: return "destroy";
    case EventKind::Transcribe: return "transcribe";
  }
  return "create";
}

/// Create: new object `obj` (optionally copied from `src`).
/// Destroy: object `obj` ceases to exist.
/// Transcribe: new object `obj` in another substrate with the content of `src`.
struct Event {
  EventIndex index = 0;
  EventKind kind = EventKind::Create;
  ObjectId obj = 0;
  std::optional<Substrate> substrate;
  std::optional<std::string> content;
  std::optional<ObjectId> src;

  friend bool operator==(const Event&, const Event&) = default;
};

/// Recognizer: accepts objects whose normalized content equals `pattern`.
class Prene {
 public:
  Prene(std::string id, std::string pattern) : id_(std::move(id)), pattern_(std::move(pattern)) {}

  /// The prene stored by `content` on `substrate`.
  static Prene of(std::string id, std::string_view content, const Substrate& substrate) {
    return Prene(std::move(id), normalize(content, substrate));
  }

  [[nodiscard]] const std::string& id() const noexcept { return id_; }
  [[nodiscard]] const std::string& pattern() const noexcept { return pattern_; }

  [[nodiscard]] bool accepts(const StoredObject& object) const {
    return normalize(object.content, object.substrate) == pattern_;
  }

 private:
  std::string id_;
  std::string pattern_;
};

struct Classification {
  bool gene = false;
  bool meme = false;
  bool turene = false;
  bool extinct = true;

  friend bool operator==(const Classification&, const Classification&) = default;
};

struct Lineage {
  std::vector<ObjectId> nodes;                          // increasing id
  std::vector<std::pair<ObjectId, ObjectId>> edges;     // (source, copy), by copy id

  friend bool operator==(const Lineage&, const Lineage&) = default;
};

class World {
 public:
  [[nodiscard]] const std::vector<Event>& log() const noexcept { return log_; }
  [[nodiscard]] const std::vector<StoredObject>& objects() const noexcept { return objects_; }
  [[nodiscard]] EventIndex now() const noexcept { return log_.size(); }

  [[nodiscard]] const StoredObject* find(ObjectId id) const {
    auto it = by_id_.find(id);
    return it == by_id_.end() ? nullptr : &objects_[it->second];
  }

  /// Validates and appends. Throws InvalidEvent leaving the world unchanged.
  void append(Event event) {
    auto fail = [&](const std::string& why) {
      throw Error(Errc::InvalidEvent, "event " + std::to_string(event.index) + ": " + why);
    };
    if (event.index != log_.size()) fail("index must be " + std::to_string(log_.size()));
    const EventIndex at = event.index;

    auto require_alive = [&](ObjectId id, const char* role) -> const StoredObject& {
      const StoredObject* o = find(id);
      if (!o || o->destroyed_at) {
        fail(std::string(role) + " object " + std::to_string(id) + " is not alive");
      }
      return *o;
    };

    StoredObject created;
    switch (event.kind) {
      case EventKind::Create: {
        if (find(event.obj)) fail("object id " + std::to_string(event.obj) + " already used");
        if (!event.substrate || !event.content) fail("create needs substrate and content");
        if (event.src) require_alive(*event.src, "source");
        created = StoredObject{event.obj, *event.substrate, *event.content, at, std::nullopt, event.src};
        break;
      }
      case EventKind::Transcribe: {
        if (find(event.obj)) fail("object id " + std::to_string(event.obj) + " already used");
        if (!event.src || !event.substrate) fail("transcribe needs source and substrate");
        const StoredObject& src = require_alive(*event.src, "source");
        if (src.substrate == *event.substrate) fail("transcribe must change substrate");
        if (event.content && *event.content != src.content) fail("transcribe content must equal the source's");
        event.content = src.content;
        created = StoredObject{event.obj, *event.substrate, src.content, at, std::nullopt, event.src};
        break;
      }
      case EventKind::Destroy: {
        require_alive(event.obj, "destroyed");
        event.substrate.reset();
        event.content.reset();
        event.src.reset();
        objects_[by_id_.at(event.obj)].destroyed_at = at;
        log_.push_back(std::move(event));
        return;
      }
    }
    by_id_.emplace(created.id, objects_.size());
    by_content_[normalize(created.content, created.substrate)].push_back(objects_.size());
    objects_.push_back(std::move(created));
    log_.push_back(std::move(event));
  }

  ObjectId create(Substrate substrate, std::string content, std::optional<ObjectId> src = std::nullopt) {
    const ObjectId id = next_id();
    append(Event{now(), EventKind::Create, id, std::move(substrate), std::move(content), src});
    return id;
  }

  ObjectId transcribe(ObjectId src, Substrate substrate) {
    const ObjectId id = next_id();
    append(Event{now(), EventKind::Transcribe, id, std::move(substrate), std::nullopt, src});
    return id;
  }

  void destroy(ObjectId id) { append(Event{now(), EventKind::Destroy, id, std::nullopt, std::nullopt, std::nullopt}); }

  static World replay(std::span<const Event> events) {
    World w;
    for (const auto& e : events) w.append(e);
    return w;
  }

  /// Accepting objects alive at t, optionally restricted to one substrate kind.
  [[nodiscard]] std::size_t copy_number(const Prene& prene, EventIndex t,
                                        std::optional<SubstrateKind> only = std::nullopt) const {
    check_time(t);
    auto it = by_content_.find(prene.pattern());
    if (it == by_content_.end()) return 0;
    std::size_t count = 0;
    for (std::size_t idx : it->second) {
      const StoredObject& o = objects_[idx];
      if (o.created_at >= t) break;  // indices are in creation order
      if (only && o.substrate.kind != *only) continue;
      if (o.alive_at(t) && prene.accepts(o)) ++count;
    }
    return count;
  }

  [[nodiscard]] bool extinct(const Prene& prene, EventIndex t) const { return copy_number(prene, t) == 0; }

  [[nodiscard]] Classification classify(const Prene& prene, EventIndex t) const {
    Classification c;
    c.gene = copy_number(prene, t, SubstrateKind::NucleicAcid) > 0;
    c.meme = copy_number(prene, t, SubstrateKind::Brain) > 0;
    c.turene = copy_number(prene, t, SubstrateKind::Computer) > 0;
    c.extinct = extinct(prene, t);
    return c;
  }

  /// Every accepting object ever logged, with the source links among them.
  [[nodiscard]] Lineage lineage(const Prene& prene) const {
    Lineage out;
    auto it = by_content_.find(prene.pattern());
    if (it == by_content_.end()) return out;
    std::unordered_map<ObjectId, bool> member;
    for (std::size_t idx : it->second) {
      const StoredObject& o = objects_[idx];
      if (!prene.accepts(o)) continue;
      out.nodes.push_back(o.id);
      member[o.id] = true;
    }
    for (std::size_t idx : it->second) {
      const StoredObject& o = objects_[idx];
      if (o.source && member.contains(o.id) && member.contains(*o.source)) out.edges.emplace_back(*o.source, o.id);
    }
    std::sort(out.nodes.begin(), out.nodes.end());
    std::sort(out.edges.begin(), out.edges.end(), [](auto& a, auto& b) { return a.second < b.second; });
    return out;
  }

 private:
  void check_time(EventIndex t) const {
    if (t > log_.size()) {
      throw Error(Errc::InvalidArgument,
                  "time " + std::to_string(t) + " is beyond the log (" + std::to_string(log_.size()) + " events)");
    }
  }

  [[nodiscard]] ObjectId next_id() const {
    ObjectId id = objects_.size() + 1;
    while (find(id)) ++id;
    return id;
  }

  std::vector<Event> log_;
  std::vector<StoredObject> objects_;
  std::unordered_map<ObjectId, std::size_t> by_id_;
  /// normalized content -> object indices, in creation order
  std::unordered_map<std::string, std::vector<std::size_t>> by_content_;
};

/// Every Create after the opening run of sourceless Creates copies its
/// source's content exactly, and every stored content is already normalized
/// (so every substrate recognizes the same bytes).
inline bool is_faithful(std::span<const Event> events) {
  std::unordered_map<ObjectId, std::string> content;
  bool genesis = true;
  for (const auto& e : events) {
    if (e.kind == EventKind::Create && !e.src) {
      if (!genesis) return false;
    } else {
      genesis = false;
    }
    if (e.kind == EventKind::Destroy) continue;
    std::string c = e.content ? *e.content : (e.src && content.contains(*e.src) ? content[*e.src] : std::string());
    if (e.substrate && normalize(c, *e.substrate) != c) return false;
    if (e.src && content.contains(*e.src) && content[*e.src] != c) return false;
    content[e.obj] = std::move(c);
  }
  return true;
}

}  // namespace prenelab::registry
