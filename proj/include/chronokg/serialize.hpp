#pragma once

#include <charconv>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "chronokg/event_log.hpp"
#include "chronokg/format.hpp"
#include "chronokg/graph.hpp"
#include "chronokg/ontology.hpp"

namespace chronokg {

enum class ParseErrorKind {
  Syntax,          // token stream does not match the grammar
  UnknownKeyword,  // line starts with an unrecognized keyword
  BadTimePoint,    // unparsable or out-of-range timestamp
  BadTerm,         // malformed identifier or literal token
  DuplicateDecl,   // identifier declared twice
  Semantic,        // event rejected at append time (ordering, rules, ...)
};

inline const char* to_string(ParseErrorKind k) {
  switch (k) {
    case ParseErrorKind::Syntax: return "syntax";
    case ParseErrorKind::UnknownKeyword: return "unknown_keyword";
    case ParseErrorKind::BadTimePoint: return "bad_timepoint";
    case ParseErrorKind::BadTerm: return "bad_term";
    case ParseErrorKind::DuplicateDecl: return "duplicate_decl";
    case ParseErrorKind::Semantic: return "semantic";
  }
  return "";
}

struct ParseError {
  int line;    // 1-based
  int column;  // 1-based
  ParseErrorKind kind;
  std::string message;

  friend bool operator==(const ParseError&, const ParseError&) = default;
};

inline std::string to_string(const ParseError& e) {
  return std::to_string(e.line) + ":" + std::to_string(e.column) + ": " +
         to_string(e.kind) + ": " + e.message;
}

/// Outcome of a whole-input parse: a value, or at least one error and no
/// value. Parsers keep going after the first problem so one pass reports
/// everything.
template <typename T>
struct ParseOutcome {
  std::optional<T> value;
  std::vector<ParseError> errors;

  bool ok() const { return value.has_value(); }
};

namespace detail {

struct Token {
  enum class Kind { Iri, Literal, Word, Dot };
  Kind kind;
  std::string text;      // iri body, literal lexical, or word
  std::string datatype;  // literal only
  int column;
};

inline std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = (nl == std::string_view::npos)
                                ? text.substr(pos)
                                : text.substr(pos, nl - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    lines.push_back(line);
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  // A trailing newline does not create a phantom last line.
  if (!lines.empty() && lines.back().empty()) lines.pop_back();
  return lines;
}

/// Splits one line into tokens. Returns false after recording an error; the
/// caller skips the line but keeps scanning the rest of the input.
inline bool tokenize_line(std::string_view line, int lineno,
                          std::vector<Token>* out, std::vector<ParseError>* errors) {
  std::size_t i = 0;
  auto col = [&](std::size_t at) { return static_cast<int>(at) + 1; };
  while (i < line.size()) {
    const char c = line[i];
    if (c == ' ' || c == '\t') {
      ++i;
      continue;
    }
    if (c == '#') break;  // comment to end of line
    if (c == '<') {
      const std::size_t start = i++;
      std::string body;
      while (i < line.size() && line[i] != '>') {
        if (line[i] == ' ' || line[i] == '\t' || line[i] == '<') {
          errors->push_back({lineno, col(i), ParseErrorKind::BadTerm,
                             "identifier contains whitespace or '<'"});
          return false;
        }
        body += line[i++];
      }
      if (i == line.size()) {
        errors->push_back({lineno, col(start), ParseErrorKind::BadTerm,
                           "unterminated '<' identifier"});
        return false;
      }
      ++i;  // consume '>'
      if (body.empty()) {
        errors->push_back({lineno, col(start), ParseErrorKind::BadTerm, "empty identifier"});
        return false;
      }
      out->push_back({Token::Kind::Iri, std::move(body), {}, col(start)});
      continue;
    }
    if (c == '"') {
      const std::size_t start = i++;
      std::string lexical;
      bool closed = false;
      while (i < line.size()) {
        const char d = line[i];
        if (d == '\\') {
          if (i + 1 == line.size()) break;
          const char e = line[i + 1];
          switch (e) {
            case '\\': lexical += '\\'; break;
            case '"': lexical += '"'; break;
            case 'n': lexical += '\n'; break;
            case 'r': lexical += '\r'; break;
            case 't': lexical += '\t'; break;
            default:
              errors->push_back({lineno, col(i), ParseErrorKind::BadTerm,
                                 std::string("unknown escape '\\") + e + "'"});
              return false;
          }
          i += 2;
          continue;
        }
        if (d == '"') {
          closed = true;
          ++i;
          break;
        }
        lexical += d;
        ++i;
      }
      if (!closed) {
        errors->push_back({lineno, col(start), ParseErrorKind::BadTerm,
                           "unterminated string literal"});
        return false;
      }
      if (i + 1 >= line.size() || line[i] != '^' || line[i + 1] != '^') {
        errors->push_back({lineno, col(i), ParseErrorKind::BadTerm,
                           "literal needs a '^^<datatype>' suffix"});
        return false;
      }
      i += 2;
      if (i == line.size() || line[i] != '<') {
        errors->push_back({lineno, col(i), ParseErrorKind::BadTerm,
                           "literal needs a '^^<datatype>' suffix"});
        return false;
      }
      const std::size_t dt_start = i++;
      std::string datatype;
      while (i < line.size() && line[i] != '>') {
        if (line[i] == ' ' || line[i] == '\t') {
          errors->push_back({lineno, col(i), ParseErrorKind::BadTerm,
                             "datatype contains whitespace"});
          return false;
        }
        datatype += line[i++];
      }
      if (i == line.size() || datatype.empty()) {
        errors->push_back({lineno, col(dt_start), ParseErrorKind::BadTerm,
                           "malformed datatype identifier"});
        return false;
      }
      ++i;  // consume '>'
      out->push_back({Token::Kind::Literal, std::move(lexical), std::move(datatype),
                      col(start)});
      continue;
    }
    // Bare word: '.' terminator, timestamp, or keyword.
    const std::size_t start = i;
    std::string word;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t' && line[i] != '#') {
      word += line[i++];
    }
    if (word == ".") {
      out->push_back({Token::Kind::Dot, ".", {}, col(start)});
    } else {
      out->push_back({Token::Kind::Word, std::move(word), {}, col(start)});
    }
  }
  return true;
}

inline std::optional<std::int64_t> parse_int64(std::string_view s) {
  if (s.empty()) return std::nullopt;
  std::int64_t v = 0;
  const char* first = s.data();
  const char* last = s.data() + s.size();
  if (*first == '+') ++first;  // from_chars rejects an explicit plus
  auto [ptr, ec] = std::from_chars(first, last, v);
  if (ec != std::errc() || ptr != last) return std::nullopt;
  return v;
}

inline std::optional<TimePoint> parse_time_word(std::string_view s) {
  if (s == "inf" || s == "+inf") return TimePoint::pos_inf();
  if (s == "-inf") return TimePoint::neg_inf();
  if (auto v = parse_int64(s)) return TimePoint::at(*v);
  return std::nullopt;
}

/// Reads `tokens[at]` as a validity bound. nullopt means an error was
/// recorded.
inline std::optional<TimePoint> expect_time(const std::vector<Token>& tokens,
                                            std::size_t at, int lineno,
                                            std::string_view line,
                                            std::vector<ParseError>* errors) {
  if (at >= tokens.size()) {
    errors->push_back({lineno, static_cast<int>(line.size()) + 1, ParseErrorKind::Syntax,
                       "expected timestamp before end of line"});
    return std::nullopt;
  }
  const Token& tok = tokens[at];
  if (tok.kind != Token::Kind::Word) {
    errors->push_back({lineno, tok.column, ParseErrorKind::Syntax, "expected timestamp"});
    return std::nullopt;
  }
  auto t = parse_time_word(tok.text);
  if (!t) {
    errors->push_back({lineno, tok.column, ParseErrorKind::BadTimePoint,
                       "cannot parse timestamp '" + tok.text + "'"});
  }
  return t;
}

inline std::optional<Term> token_to_term(const Token& tok) {
  if (tok.kind == Token::Kind::Iri) return Term::entity(tok.text);
  if (tok.kind == Token::Kind::Literal) return Term::literal(tok.text, tok.datatype);
  return std::nullopt;
}

struct EdgeHead {
  std::string head;
  std::string relation;
  Term tail;
};

/// Parses the `<h> <r> <t>` prefix common to every edge-bearing line.
inline std::optional<EdgeHead> expect_edge_head(const std::vector<Token>& tokens,
                                                std::size_t at, int lineno,
                                                std::string_view line,
                                                std::vector<ParseError>* errors) {
  auto missing = [&](const char* what) {
    errors->push_back({lineno, static_cast<int>(line.size()) + 1, ParseErrorKind::Syntax,
                       std::string("expected ") + what + " before end of line"});
  };
  if (at >= tokens.size()) {
    missing("entity");
    return std::nullopt;
  }
  if (tokens[at].kind != Token::Kind::Iri) {
    errors->push_back({lineno, tokens[at].column, ParseErrorKind::Syntax,
                       "expected entity '<id>'"});
    return std::nullopt;
  }
  if (at + 1 >= tokens.size()) {
    missing("relation");
    return std::nullopt;
  }
  if (tokens[at + 1].kind != Token::Kind::Iri) {
    errors->push_back({lineno, tokens[at + 1].column, ParseErrorKind::Syntax,
                       "expected relation '<id>'"});
    return std::nullopt;
  }
  if (at + 2 >= tokens.size()) {
    missing("term");
    return std::nullopt;
  }
  auto tail = token_to_term(tokens[at + 2]);
  if (!tail) {
    errors->push_back({lineno, tokens[at + 2].column, ParseErrorKind::Syntax,
                       "expected term (entity or literal)"});
    return std::nullopt;
  }
  return EdgeHead{tokens[at].text, tokens[at + 1].text, std::move(*tail)};
}

inline bool expect_dot_end(const std::vector<Token>& tokens, std::size_t at, int lineno,
                           std::string_view line, std::vector<ParseError>* errors) {
  if (at >= tokens.size()) {
    errors->push_back({lineno, static_cast<int>(line.size()) + 1, ParseErrorKind::Syntax,
                       "expected '.' before end of line"});
    return false;
  }
  if (tokens[at].kind != Token::Kind::Dot) {
    errors->push_back({lineno, tokens[at].column, ParseErrorKind::Syntax, "expected '.'"});
    return false;
  }
  if (at + 1 < tokens.size()) {
    errors->push_back({lineno, tokens[at + 1].column, ParseErrorKind::Syntax,
                       "unexpected tokens after '.'"});
    return false;
  }
  return true;
}

}  // namespace detail

/// Line grammar: `<head> <relation> <term> .` with `#` comments and blank
/// lines ignored. Duplicate edges collapse silently; the store is a set.
inline ParseOutcome<StandardKG> parse_triples(std::string_view text) {
  ParseOutcome<StandardKG> out;
  StandardKG g;
  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const int lineno = static_cast<int>(n) + 1;
    std::vector<detail::Token> tokens;
    if (!detail::tokenize_line(lines[n], lineno, &tokens, &out.errors)) continue;
    if (tokens.empty()) continue;
    auto head = detail::expect_edge_head(tokens, 0, lineno, lines[n], &out.errors);
    if (!head) continue;
    if (!detail::expect_dot_end(tokens, 3, lineno, lines[n], &out.errors)) continue;
    g.add(Triple(std::move(head->head), std::move(head->relation), std::move(head->tail)));
  }
  if (out.errors.empty()) out.value = std::move(g);
  return out;
}

/// Line grammar: `<head> <relation> <term> <from> <until> .` where the
/// bounds are integer ticks, `-inf`, or `inf`. A reversed interval parses;
/// the order rule rejects it at validation.
inline ParseOutcome<ReminiscentKG> parse_quintuples(std::string_view text) {
  ParseOutcome<ReminiscentKG> out;
  ReminiscentKG g;
  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const int lineno = static_cast<int>(n) + 1;
    std::vector<detail::Token> tokens;
    if (!detail::tokenize_line(lines[n], lineno, &tokens, &out.errors)) continue;
    if (tokens.empty()) continue;
    auto head = detail::expect_edge_head(tokens, 0, lineno, lines[n], &out.errors);
    if (!head) continue;
    auto from = detail::expect_time(tokens, 3, lineno, lines[n], &out.errors);
    if (!from) continue;
    auto until = detail::expect_time(tokens, 4, lineno, lines[n], &out.errors);
    if (!until) continue;
    if (!detail::expect_dot_end(tokens, 5, lineno, lines[n], &out.errors)) continue;
    g.add(Quintuple::unchecked(std::move(head->head), std::move(head->relation),
                               std::move(head->tail), *from, *until));
  }
  if (out.errors.empty()) out.value = std::move(g);
  return out;
}

/// Line-oriented ontology declarations:
///
///   concept <id>            datatype <id>           relation <id>
///   typing <id>             time_domain <lo> <hi>
///   rule domain <rel> <concept>
///   rule range <rel> <concept-or-datatype>
///   rule functional <rel>
///   trule no_overlap <rel>
///   trule functional_instant <rel>
///
/// Declarations may appear in any order; rules are resolved after all
/// declarations are read. Loaded ontologies have a closed vocabulary.
inline ParseOutcome<TemporalOntology> parse_ontology(std::string_view text) {
  ParseOutcome<TemporalOntology> out;
  TemporalOntology onto;
  onto.base.closed_vocabulary = true;

  struct RuleLine {
    int lineno;
    std::vector<detail::Token> tokens;
  };
  std::vector<RuleLine> rule_lines;
  std::optional<int> typing_line;

  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const int lineno = static_cast<int>(n) + 1;
    std::vector<detail::Token> tokens;
    if (!detail::tokenize_line(lines[n], lineno, &tokens, &out.errors)) continue;
    if (tokens.empty()) continue;
    if (tokens[0].kind != detail::Token::Kind::Word) {
      out.errors.push_back({lineno, tokens[0].column, ParseErrorKind::Syntax,
                            "expected a declaration keyword"});
      continue;
    }
    const std::string& kw = tokens[0].text;

    auto one_iri = [&]() -> std::optional<std::string> {
      if (tokens.size() != 2 || tokens[1].kind != detail::Token::Kind::Iri) {
        const int column = tokens.size() > 1 ? tokens[1].column
                                             : static_cast<int>(lines[n].size()) + 1;
        out.errors.push_back({lineno, column, ParseErrorKind::Syntax,
                              "expected exactly one '<id>' after '" + kw + "'"});
        return std::nullopt;
      }
      return tokens[1].text;
    };

    if (kw == "concept" || kw == "datatype") {
      auto id = one_iri();
      if (!id) continue;
      if (onto.base.concepts.count(*id) || onto.base.datatypes.count(*id)) {
        out.errors.push_back({lineno, tokens[1].column, ParseErrorKind::DuplicateDecl,
                              "'" + *id + "' is already declared"});
        continue;
      }
      (kw == "concept" ? onto.base.concepts : onto.base.datatypes).insert(*id);
    } else if (kw == "relation") {
      auto id = one_iri();
      if (!id) continue;
      if (!onto.base.relations.insert(*id).second) {
        out.errors.push_back({lineno, tokens[1].column, ParseErrorKind::DuplicateDecl,
                              "relation '" + *id + "' is already declared"});
      }
    } else if (kw == "typing") {
      auto id = one_iri();
      if (!id) continue;
      if (onto.base.typing_relation) {
        out.errors.push_back({lineno, tokens[1].column, ParseErrorKind::DuplicateDecl,
                              "typing relation is already declared"});
        continue;
      }
      onto.base.typing_relation = *id;
      typing_line = lineno;
    } else if (kw == "time_domain") {
      if (onto.time_domain) {
        out.errors.push_back({lineno, tokens[0].column, ParseErrorKind::DuplicateDecl,
                              "time domain is already declared"});
        continue;
      }
      if (tokens.size() != 3) {
        out.errors.push_back({lineno, static_cast<int>(lines[n].size()) + 1,
                              ParseErrorKind::Syntax,
                              "expected 'time_domain <lo> <hi>'"});
        continue;
      }
      std::optional<std::int64_t> lo, hi;
      if (tokens[1].kind == detail::Token::Kind::Word) lo = detail::parse_int64(tokens[1].text);
      if (tokens[2].kind == detail::Token::Kind::Word) hi = detail::parse_int64(tokens[2].text);
      if (!lo || !hi) {
        const int column = !lo ? tokens[1].column : tokens[2].column;
        out.errors.push_back({lineno, column, ParseErrorKind::BadTimePoint,
                              "time domain bounds must be finite integers"});
        continue;
      }
      if (*lo > *hi) {
        out.errors.push_back({lineno, tokens[1].column, ParseErrorKind::Syntax,
                              "time domain is empty (lo > hi)"});
        continue;
      }
      onto.time_domain = TimeDomain{*lo, *hi};
    } else if (kw == "rule" || kw == "trule") {
      rule_lines.push_back({lineno, std::move(tokens)});
    } else {
      out.errors.push_back({lineno, tokens[0].column, ParseErrorKind::UnknownKeyword,
                            "unknown keyword '" + kw + "'"});
    }
  }

  // Resolve rules once the vocabulary is complete.
  auto declared_relation = [&](const detail::Token& tok, int lineno) -> bool {
    if (tok.kind != detail::Token::Kind::Iri) {
      out.errors.push_back({lineno, tok.column, ParseErrorKind::Syntax,
                            "expected relation '<id>'"});
      return false;
    }
    if (!onto.base.relations.count(tok.text)) {
      out.errors.push_back({lineno, tok.column, ParseErrorKind::BadTerm,
                            "rule references undeclared relation '" + tok.text + "'"});
      return false;
    }
    return true;
  };

  for (const auto& rl : rule_lines) {
    const auto& tokens = rl.tokens;
    const bool temporal = tokens[0].text == "trule";
    if (tokens.size() < 2 || tokens[1].kind != detail::Token::Kind::Word) {
      out.errors.push_back({rl.lineno, tokens.size() > 1 ? tokens[1].column : 1,
                            ParseErrorKind::Syntax, "expected a rule kind"});
      continue;
    }
    const std::string& kind = tokens[1].text;
    if (!temporal && kind == "domain") {
      if (tokens.size() != 4) {
        out.errors.push_back({rl.lineno, 1, ParseErrorKind::Syntax,
                              "expected 'rule domain <rel> <concept>'"});
        continue;
      }
      if (!declared_relation(tokens[2], rl.lineno)) continue;
      if (tokens[3].kind != detail::Token::Kind::Iri ||
          !onto.base.concepts.count(tokens[3].text)) {
        out.errors.push_back({rl.lineno, tokens[3].column, ParseErrorKind::BadTerm,
                              "rule references undeclared concept"});
        continue;
      }
      onto.base.rules.push_back(Rule::domain(tokens[2].text, tokens[3].text));
    } else if (!temporal && kind == "range") {
      if (tokens.size() != 4) {
        out.errors.push_back({rl.lineno, 1, ParseErrorKind::Syntax,
                              "expected 'rule range <rel> <concept-or-datatype>'"});
        continue;
      }
      if (!declared_relation(tokens[2], rl.lineno)) continue;
      if (tokens[3].kind != detail::Token::Kind::Iri) {
        out.errors.push_back({rl.lineno, tokens[3].column, ParseErrorKind::Syntax,
                              "expected '<id>'"});
        continue;
      }
      const std::string& target = tokens[3].text;
      if (onto.base.concepts.count(target)) {
        onto.base.rules.push_back(Rule::range_concept(tokens[2].text, target));
      } else if (onto.base.datatypes.count(target)) {
        onto.base.rules.push_back(Rule::range_datatype(tokens[2].text, target));
      } else {
        out.errors.push_back({rl.lineno, tokens[3].column, ParseErrorKind::BadTerm,
                              "range target '" + target + "' is neither a concept nor a datatype"});
      }
    } else if (!temporal && kind == "functional") {
      if (tokens.size() != 3) {
        out.errors.push_back({rl.lineno, 1, ParseErrorKind::Syntax,
                              "expected 'rule functional <rel>'"});
        continue;
      }
      if (!declared_relation(tokens[2], rl.lineno)) continue;
      onto.base.rules.push_back(Rule::functional(tokens[2].text));
    } else if (temporal && (kind == "no_overlap" || kind == "functional_instant")) {
      if (tokens.size() != 3) {
        out.errors.push_back({rl.lineno, 1, ParseErrorKind::Syntax,
                              "expected 'trule " + kind + " <rel>'"});
        continue;
      }
      if (!declared_relation(tokens[2], rl.lineno)) continue;
      onto.temporal_rules.push_back(kind == "no_overlap"
                                        ? TemporalRule::no_overlap(tokens[2].text)
                                        : TemporalRule::functional_at_instant(tokens[2].text));
    } else {
      out.errors.push_back({rl.lineno, tokens[1].column, ParseErrorKind::UnknownKeyword,
                            "unknown rule kind '" + kind + "'"});
    }
  }

  if (onto.base.typing_relation && typing_line &&
      !onto.base.relations.count(*onto.base.typing_relation)) {
    out.errors.push_back({*typing_line, 1, ParseErrorKind::BadTerm,
                          "typing relation '" + *onto.base.typing_relation +
                              "' is not a declared relation"});
  }
  for (const Rule& r : onto.base.rules) {
    if ((r.kind == Rule::Kind::Domain || r.kind == Rule::Kind::RangeConcept) &&
        !onto.base.typing_relation) {
      out.errors.push_back({1, 1, ParseErrorKind::BadTerm,
                            "domain/range rules need a 'typing <id>' declaration"});
      break;
    }
  }
  if (onto.time_domain) {
    onto.temporal_rules.push_back(TemporalRule::within_time_domain());
  }

  if (out.errors.empty()) out.value = std::move(onto);
  return out;
}

/// Result of parsing an event log. Append rejections surface both as
/// `Semantic` parse errors (with the source line) and, separately, as the
/// structured append errors for callers that need the violation payloads.
struct EventLogParse {
  std::optional<ChangeLog> log;
  std::vector<ParseError> errors;
  std::vector<std::pair<int, AppendError>> append_errors;  // line -> rejection

  bool ok() const { return log.has_value(); }
};

/// Line grammar, one event per line, no terminating dot:
///
///   <commit> ASSERT <h> <r> <t> <from> <until>
///   <commit> CLOSE <h> <r> <t> <until>
///   <commit> RETRACT <h> <r> <t>
///
/// Events replay through ChangeLog::append against the given ontology;
/// rejected events are reported with their line number and skipped.
inline EventLogParse parse_event_log(std::string_view text,
                                     TemporalOntology ontology = {}) {
  EventLogParse out;
  ChangeLog log(std::move(ontology));

  const auto lines = detail::split_lines(text);
  for (std::size_t n = 0; n < lines.size(); ++n) {
    const int lineno = static_cast<int>(n) + 1;
    std::vector<detail::Token> tokens;
    if (!detail::tokenize_line(lines[n], lineno, &tokens, &out.errors)) continue;
    if (tokens.empty()) continue;

    if (tokens[0].kind != detail::Token::Kind::Word) {
      out.errors.push_back({lineno, tokens[0].column, ParseErrorKind::Syntax,
                            "expected a commit timestamp"});
      continue;
    }
    auto commit = detail::parse_int64(tokens[0].text);
    if (!commit) {
      out.errors.push_back({lineno, tokens[0].column, ParseErrorKind::BadTimePoint,
                            "commit timestamp must be a finite integer"});
      continue;
    }
    if (tokens.size() < 2 || tokens[1].kind != detail::Token::Kind::Word) {
      out.errors.push_back({lineno,
                            tokens.size() > 1 ? tokens[1].column
                                              : static_cast<int>(lines[n].size()) + 1,
                            ParseErrorKind::Syntax, "expected ASSERT, CLOSE, or RETRACT"});
      continue;
    }
    const std::string& kw = tokens[1].text;

    std::optional<ChangeEvent> event;
    if (kw == "ASSERT") {
      auto head = detail::expect_edge_head(tokens, 2, lineno, lines[n], &out.errors);
      if (!head) continue;
      auto from = detail::expect_time(tokens, 5, lineno, lines[n], &out.errors);
      if (!from) continue;
      auto until = detail::expect_time(tokens, 6, lineno, lines[n], &out.errors);
      if (!until) continue;
      if (tokens.size() > 7) {
        out.errors.push_back({lineno, tokens[7].column, ParseErrorKind::Syntax,
                              "unexpected tokens after ASSERT payload"});
        continue;
      }
      event = make_assert(*commit,
                          Quintuple::unchecked(std::move(head->head), std::move(head->relation),
                                               std::move(head->tail), *from, *until));
    } else if (kw == "CLOSE") {
      auto head = detail::expect_edge_head(tokens, 2, lineno, lines[n], &out.errors);
      if (!head) continue;
      auto until = detail::expect_time(tokens, 5, lineno, lines[n], &out.errors);
      if (!until) continue;
      if (!until->finite()) {
        out.errors.push_back({lineno, tokens[5].column, ParseErrorKind::BadTimePoint,
                              "close timestamp must be finite"});
        continue;
      }
      if (tokens.size() > 6) {
        out.errors.push_back({lineno, tokens[6].column, ParseErrorKind::Syntax,
                              "unexpected tokens after CLOSE payload"});
        continue;
      }
      event = make_close(*commit,
                         Triple(std::move(head->head), std::move(head->relation),
                                std::move(head->tail)),
                         until->tick());
    } else if (kw == "RETRACT") {
      auto head = detail::expect_edge_head(tokens, 2, lineno, lines[n], &out.errors);
      if (!head) continue;
      if (tokens.size() > 5) {
        out.errors.push_back({lineno, tokens[5].column, ParseErrorKind::Syntax,
                              "unexpected tokens after RETRACT payload"});
        continue;
      }
      event = make_retract(*commit, Triple(std::move(head->head), std::move(head->relation),
                                           std::move(head->tail)));
    } else {
      out.errors.push_back({lineno, tokens[1].column, ParseErrorKind::UnknownKeyword,
                            "unknown event keyword '" + kw + "'"});
      continue;
    }

    if (auto err = log.append(*event)) {
      out.errors.push_back({lineno, 1, ParseErrorKind::Semantic, err->message});
      out.append_errors.emplace_back(lineno, std::move(*err));
    }
  }

  if (out.errors.empty()) out.log = std::move(log);
  return out;
}

// --- writers -------------------------------------------------------------
//
// Canonical form: edges sorted, single spaces, LF endings, trailing newline.
// parse(write(v)) == v and write is a fixed point over parse for any valid
// input.

inline std::string write_triples(const StandardKG& g) {
  std::string out;
  for (const Triple& t : g.edges()) {
    out += format_triple(t);
    out += '\n';
  }
  return out;
}

inline std::string write_quintuples(const ReminiscentKG& g) {
  std::string out;
  for (const Quintuple& q : g.edges()) {
    out += format_quintuple(q);
    out += '\n';
  }
  return out;
}

inline std::string format_event(const ChangeEvent& e) {
  std::string out = std::to_string(e.commit);
  if (const auto* a = std::get_if<AssertAction>(&e.action)) {
    const Quintuple& q = a->edge;
    out += " ASSERT <" + q.head + "> <" + q.relation + "> " + format_term(q.tail) + " " +
           to_string(q.valid_from) + " " + to_string(q.valid_until);
  } else if (const auto* c = std::get_if<CloseAction>(&e.action)) {
    out += " CLOSE <" + c->key.head + "> <" + c->key.relation + "> " +
           format_term(c->key.tail) + " " + std::to_string(c->new_valid_until);
  } else {
    const auto& r = std::get<RetractAction>(e.action);
    out += " RETRACT <" + r.key.head + "> <" + r.key.relation + "> " + format_term(r.key.tail);
  }
  return out;
}

inline std::string write_event_log(const ChangeLog& log) {
  std::string out;
  for (const ChangeEvent& e : log.events()) {
    out += format_event(e);
    out += '\n';
  }
  return out;
}

// --- small helpers for CLI argument parsing ------------------------------

/// Parses a single `<iri>` or `"lexical"^^<datatype>` token.
inline std::optional<Term> parse_term_text(std::string_view text) {
  std::vector<detail::Token> tokens;
  std::vector<ParseError> errors;
  if (!detail::tokenize_line(text, 1, &tokens, &errors)) return std::nullopt;
  if (tokens.size() != 1) return std::nullopt;
  return detail::token_to_term(tokens[0]);
}

/// Parses a single `<iri>` token.
inline std::optional<std::string> parse_iri_text(std::string_view text) {
  std::vector<detail::Token> tokens;
  std::vector<ParseError> errors;
  if (!detail::tokenize_line(text, 1, &tokens, &errors)) return std::nullopt;
  if (tokens.size() != 1 || tokens[0].kind != detail::Token::Kind::Iri) return std::nullopt;
  return tokens[0].text;
}

enum class GraphFileKind { Triples, Quintuples };

/// Sniffs whether a graph file holds triples or quintuples from its first
/// data line (4 vs 6 tokens). Empty files count as triples.
inline GraphFileKind detect_graph_kind(std::string_view text) {
  for (std::string_view line : detail::split_lines(text)) {
    std::vector<detail::Token> tokens;
    std::vector<ParseError> errors;
    if (!detail::tokenize_line(line, 1, &tokens, &errors)) continue;
    if (tokens.empty()) continue;
    return tokens.size() >= 6 ? GraphFileKind::Quintuples : GraphFileKind::Triples;
  }
  return GraphFileKind::Triples;
}

}  // namespace chronokg
