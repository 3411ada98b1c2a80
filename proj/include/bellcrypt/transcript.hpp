#pragma once

// Protocol transcripts: an ordered, append-only list of events with a stable
// line format
//   event <run_id> <step> <actor> <action> <payload_hex> <channel>
// An empty payload is written as "-".

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace bellcrypt {

inline constexpr std::string_view kTranscriptVersion = "PWV1";

using Bytes = std::vector<std::uint8_t>;

inline std::string to_hex(const Bytes& b) {
  if (b.empty()) return "-";
  static constexpr char digits[] = "0123456789abcdef";
  std::string s;
  s.reserve(2 * b.size());
  for (auto v : b) {
    s.push_back(digits[v >> 4]);
    s.push_back(digits[v & 15]);
  }
  return s;
}

inline Bytes from_hex(std::string_view s) {
  if (s == "-") return {};
  if (s.size() % 2 != 0) throw std::invalid_argument("odd-length hex payload");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw std::invalid_argument(std::string("bad hex digit '") + c + "'");
  };
  Bytes b;
  for (std::size_t i = 0; i < s.size(); i += 2)
    b.push_back(static_cast<std::uint8_t>(nibble(s[i]) * 16 + nibble(s[i + 1])));
  return b;
}

/// Who can observe a message. Classical point-to-point and quantum transfers are seen
/// by both endpoints and by an external eavesdropper; broadcasts by everyone; local
/// events (measurements, private inputs) only by their owner.
struct Channel {
  enum class Kind { Local, Classical, Broadcast, Quantum };
  Kind kind = Kind::Local;
  std::string from;
  std::string to;

  static Channel local(std::string owner) { return {Kind::Local, std::move(owner), {}}; }
  static Channel classical(std::string f, std::string t) { return {Kind::Classical, std::move(f), std::move(t)}; }
  static Channel broadcast(std::string f) { return {Kind::Broadcast, std::move(f), {}}; }
  static Channel quantum(std::string f, std::string t) { return {Kind::Quantum, std::move(f), std::move(t)}; }

  std::string str() const {
    switch (kind) {
      case Kind::Local: return "local:" + from;
      case Kind::Classical: return "classical:" + from + ">" + to;
      case Kind::Broadcast: return "broadcast";
      case Kind::Quantum: return "quantum:" + from + ">" + to;
    }
    return {};
  }

  bool visible_to(std::string_view party) const {
    switch (kind) {
      case Kind::Local: return party == from;
      case Kind::Broadcast: return true;
      case Kind::Classical:
      case Kind::Quantum: return party == from || party == to || party == kEavesdropper;
    }
    return false;
  }

  static constexpr std::string_view kEavesdropper = "eve";
};

struct Event {
  int step = 0;
  std::string actor;  // controller@station, e.g. bob@C
  std::string action;
  Bytes payload;
  Channel channel;

  /// Fields after the run id; also the unit of an observer's classical view.
  std::string body() const {
    return std::to_string(step) + " " + actor + " " + action + " " + to_hex(payload) + " " + channel.str();
  }
};

struct ProtocolTranscript {
  std::uint64_t run_id = 0;
  std::vector<Event> events;

  void append(Event e) { events.push_back(std::move(e)); }

  std::string event_line(const Event& e) const {
    std::ostringstream os;
    os << "event " << std::hex << run_id << std::dec << " " << e.body();
    return os.str();
  }

  std::vector<std::string> lines() const {
    std::vector<std::string> out;
    out.reserve(events.size());
    for (const auto& e : events) out.push_back(event_line(e));
    return out;
  }

  /// Concatenated bodies of the events `party` can observe.
  std::string view_of(std::string_view party) const {
    std::string v;
    for (const auto& e : events) {
      if (!e.channel.visible_to(party)) continue;
      v += e.body();
      v += '\n';
    }
    return v;
  }

  bool has_action(std::string_view action) const {
    for (const auto& e : events)
      if (e.action == action) return true;
    return false;
  }
};

}  // namespace bellcrypt
