#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <vector>

namespace pcka {

// One element of an event identity path. Events built by the term
// elaborator carry structured tags (operand side, parallel delimiters,
// Kleene copy index); hand-built structures use free-form names.
struct Tag {
  enum class Kind : std::uint8_t { name, left, right, start, finish, copy };

  Kind kind = Kind::name;
  int index = 0;     // copy only
  std::string text;  // name only

  static Tag name(std::string s) { return Tag{Kind::name, 0, std::move(s)}; }
  static Tag side(Kind k) { return Tag{k, 0, {}}; }
  static Tag copy(int i) { return Tag{Kind::copy, i, {}}; }

  friend auto operator<=>(const Tag&, const Tag&) = default;

  std::string str() const {
    switch (kind) {
      case Kind::name: return text;
      case Kind::left: return "L";
      case Kind::right: return "R";
      case Kind::start: return "s";
      case Kind::finish: return "t";
      case Kind::copy: return std::to_string(index);
    }
    return "?";
  }
};

// Structured event identity. Uniqueness inside a composed structure is
// guaranteed by construction: operand positions are prepended, Kleene
// copy indices appended, so operand event sets stay disjoint.
struct EventId {
  std::vector<Tag> path;

  static EventId named(std::string s) {
    return EventId{{Tag::name(std::move(s))}};
  }

  EventId prefixed(Tag t) const {
    EventId r;
    r.path.reserve(path.size() + 1);
    r.path.push_back(std::move(t));
    r.path.insert(r.path.end(), path.begin(), path.end());
    return r;
  }

  EventId suffixed(Tag t) const {
    EventId r = *this;
    r.path.push_back(std::move(t));
    return r;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < path.size(); ++i) {
      if (i) s += '.';
      s += path[i].str();
    }
    return s;
  }

  friend auto operator<=>(const EventId&, const EventId&) = default;
};

}  // namespace pcka
