#pragma once

#include <string>

#include "chronokg/model.hpp"

namespace chronokg {

// Canonical token and line rendering shared by the writers, the violation
// reports, and the CLI. Output is byte-deterministic: single spaces, LF line
// endings, edges rendered field by field.

inline std::string escape_lexical(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\\\"; break;
      case '"': out += "\\\""; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default: out += c;
    }
  }
  return out;
}

inline std::string format_term(const Term& t) {
  if (t.is_entity()) return "<" + t.iri() + ">";
  return "\"" + escape_lexical(t.lexical()) + "\"^^<" + t.datatype() + ">";
}

inline std::string format_triple(const Triple& t) {
  return "<" + t.head + "> <" + t.relation + "> " + format_term(t.tail) + " .";
}

inline std::string format_quintuple(const Quintuple& q) {
  return "<" + q.head + "> <" + q.relation + "> " + format_term(q.tail) + " " +
         to_string(q.valid_from) + " " + to_string(q.valid_until) + " .";
}

}  // namespace chronokg
