// chronokg: command-line front end for the time-aware knowledge graph
// library. Subcommands: validate, snapshot, query, diff, classify, history,
// replay. Exit codes: 0 success, 1 rule violations found, 2 parse error,
// 3 usage error.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "chronokg/chronokg.hpp"

namespace {

using nlohmann::json;
using namespace chronokg;

constexpr int kOk = 0;
constexpr int kViolations = 1;
constexpr int kParseError = 2;
constexpr int kUsage = 3;

/// Thrown to unwind to main with a message and exit code.
struct CliFailure {
  int code;
  std::string message;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliFailure{kParseError, "cannot read '" + path + "'"};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::optional<std::string>& out_path, const std::string& text) {
  if (!out_path) {
    std::cout << text;
    return;
  }
  std::ofstream out(*out_path, std::ios::binary);
  if (!out) throw CliFailure{kParseError, "cannot write '" + *out_path + "'"};
  out << text;
}

void report_parse_errors(const std::string& path, const std::vector<ParseError>& errors) {
  for (const ParseError& e : errors) {
    std::cerr << path << ":" << to_string(e) << "\n";
  }
}

Calendar resolve_calendar(const std::string& name) {
  const auto c = calendar_from_name(name);
  if (!c) throw CliFailure{kUsage, "unknown calendar '" + name + "'"};
  return *c;
}

std::int64_t resolve_tick(const std::string& text, Calendar calendar, const char* flag) {
  const auto tick = parse_tick(text, calendar);
  if (!tick) {
    throw CliFailure{kUsage, std::string(flag) + ": cannot parse instant '" + text +
                                 "' with the " + to_string(calendar) + " calendar"};
  }
  return *tick;
}

ViewKind resolve_kind(const std::string& name) {
  const auto kind = view_kind_from_name(name);
  if (!kind) throw CliFailure{kUsage, "unknown view kind '" + name + "'"};
  return *kind;
}

TemporalOntology load_ontology(const std::optional<std::string>& path) {
  if (!path) return {};
  const auto parsed = parse_ontology(read_file(*path));
  if (!parsed.ok()) {
    report_parse_errors(*path, parsed.errors);
    throw CliFailure{kParseError, "ontology '" + *path + "' did not parse"};
  }
  return *parsed.value;
}

/// Loads a log for commands that need a clean replay; any problem exits 2.
ChangeLog load_log(const std::string& path, const TemporalOntology& ontology) {
  const auto parsed = parse_event_log(read_file(path), ontology);
  if (!parsed.ok()) {
    report_parse_errors(path, parsed.errors);
    throw CliFailure{kParseError, "log '" + path + "' did not replay cleanly"};
  }
  return *parsed.log;
}

// --- json rendering -------------------------------------------------------

json term_to_json(const Term& t) {
  if (t.is_entity()) return json{{"kind", "entity"}, {"iri", t.iri()}};
  return json{{"kind", "literal"}, {"lexical", t.lexical()}, {"datatype", t.datatype()}};
}

json triple_to_json(const Triple& t) {
  return json{{"head", t.head}, {"relation", t.relation}, {"tail", term_to_json(t.tail)}};
}

json quintuple_to_json(const Quintuple& q) {
  json j = triple_to_json(q.project());
  j["valid_from"] = to_string(q.valid_from);
  j["valid_until"] = to_string(q.valid_until);
  return j;
}

json offender_to_json(const Offender& o) {
  if (const auto* t = std::get_if<Triple>(&o)) return triple_to_json(*t);
  return quintuple_to_json(std::get<Quintuple>(o));
}

json violation_to_json(const Violation& v) {
  json offenders = json::array();
  for (const Offender& o : v.offenders) offenders.push_back(offender_to_json(o));
  return json{{"rule", describe(v.source)},
              {"message", v.message},
              {"offenders", std::move(offenders)}};
}

json event_to_json(const ChangeEvent& e) {
  json j{{"commit", e.commit}};
  if (const auto* a = std::get_if<AssertAction>(&e.action)) {
    j["action"] = "assert";
    j["edge"] = quintuple_to_json(a->edge);
  } else if (const auto* c = std::get_if<CloseAction>(&e.action)) {
    j["action"] = "close";
    j["key"] = triple_to_json(c->key);
    j["valid_until"] = c->new_valid_until;
  } else {
    j["action"] = "retract";
    j["key"] = triple_to_json(std::get<RetractAction>(e.action).key);
  }
  return j;
}

void emit_json(const json& j) { std::cout << j.dump() << "\n"; }

// --- subcommands ----------------------------------------------------------

struct CommonFlags {
  std::string calendar = "year";
  std::string format = "text";
};

void add_calendar_flag(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--calendar", flags->calendar, "instant syntax: year or days-since-epoch")
      ->envname("CHRONOKG_CALENDAR")
      ->check(CLI::IsMember({"year", "days-since-epoch"}));
}

void add_format_flag(CLI::App* cmd, CommonFlags* flags) {
  cmd->add_option("--format", flags->format, "report format")
      ->check(CLI::IsMember({"text", "json"}));
}

int run_validate(const std::optional<std::string>& ontology_path,
                 const std::optional<std::string>& graph_path,
                 const std::optional<std::string>& log_path, const CommonFlags& flags) {
  if (graph_path.has_value() == log_path.has_value()) {
    throw CliFailure{kUsage, "validate needs exactly one of --graph or --log"};
  }
  const TemporalOntology ontology = load_ontology(ontology_path);

  std::vector<Violation> violations;
  std::vector<std::pair<int, Violation>> line_violations;  // log path only

  if (graph_path) {
    const std::string text = read_file(*graph_path);
    if (detect_graph_kind(text) == GraphFileKind::Quintuples) {
      const auto parsed = parse_quintuples(text);
      if (!parsed.ok()) {
        report_parse_errors(*graph_path, parsed.errors);
        return kParseError;
      }
      violations = validate_reminiscent(*parsed.value, ontology);
    } else {
      const auto parsed = parse_triples(text);
      if (!parsed.ok()) {
        report_parse_errors(*graph_path, parsed.errors);
        return kParseError;
      }
      violations = validate_standard(*parsed.value, ontology.base);
    }
  } else {
    const auto parsed = parse_event_log(read_file(*log_path), ontology);
    if (!parsed.ok()) {
      // Rule-violation rejections report as violations (exit 1); anything
      // else is a log integrity problem (exit 2).
      bool structural = false;
      for (const ParseError& e : parsed.errors) {
        if (e.kind != ParseErrorKind::Semantic) structural = true;
      }
      for (const auto& [line, err] : parsed.append_errors) {
        if (err.kind != AppendErrorKind::RuleViolation) structural = true;
      }
      if (structural) {
        report_parse_errors(*log_path, parsed.errors);
        return kParseError;
      }
      for (const auto& [line, err] : parsed.append_errors) {
        for (const Violation& v : err.violations) line_violations.emplace_back(line, v);
      }
    }
  }

  if (flags.format == "json") {
    json arr = json::array();
    for (const Violation& v : violations) arr.push_back(violation_to_json(v));
    for (const auto& [line, v] : line_violations) {
      json j = violation_to_json(v);
      j["line"] = line;
      arr.push_back(std::move(j));
    }
    emit_json(json{{"violations", std::move(arr)}});
  } else {
    for (const Violation& v : violations) std::cout << to_string(v) << "\n";
    for (const auto& [line, v] : line_violations) {
      std::cout << "line " << line << ": " << to_string(v) << "\n";
    }
  }
  return violations.empty() && line_violations.empty() ? kOk : kViolations;
}

int run_snapshot(const std::string& log_path, const std::string& kind_name,
                 const std::string& at_text, const std::optional<std::string>& out_path,
                 const std::optional<std::string>& ontology_path, const CommonFlags& flags) {
  const Calendar calendar = resolve_calendar(flags.calendar);
  const ViewKind kind = resolve_kind(kind_name);
  const std::int64_t at = resolve_tick(at_text, calendar, "--at");
  const ChangeLog log = load_log(log_path, load_ontology(ontology_path));
  const Snapshot snap = snapshot(log, kind, at);
  write_output(out_path, kind == ViewKind::Mutable ? write_triples(snap.standard())
                                                   : write_quintuples(snap.reminiscent()));
  return kOk;
}

Pattern build_pattern(const std::vector<std::string>& fields,
                      const std::optional<std::string>& valid_at_text, bool active_only,
                      Calendar calendar) {
  if (fields.size() != 3) {
    throw CliFailure{kUsage, "pattern needs exactly three fields: head relation tail"};
  }
  Pattern p;
  if (fields[0] != "?") {
    const auto head = parse_iri_text(fields[0]);
    if (!head) throw CliFailure{kUsage, "pattern head must be '<id>' or '?'"};
    p.head = *head;
  }
  if (fields[1] != "?") {
    const auto rel = parse_iri_text(fields[1]);
    if (!rel) throw CliFailure{kUsage, "pattern relation must be '<id>' or '?'"};
    p.relation = *rel;
  }
  if (fields[2] != "?") {
    const auto tail = parse_term_text(fields[2]);
    if (!tail) throw CliFailure{kUsage, "pattern tail must be a term or '?'"};
    p.tail = *tail;
  }
  if (valid_at_text) p.valid_at = resolve_tick(*valid_at_text, calendar, "--valid-at");
  p.active_only = active_only;
  return p;
}

int run_query(const std::optional<std::string>& graph_path,
              const std::optional<std::string>& log_path, const std::string& kind_name,
              const std::optional<std::string>& at_text,
              const std::vector<std::string>& fields,
              const std::optional<std::string>& valid_at_text, bool active_only,
              const std::optional<std::string>& ontology_path, const CommonFlags& flags) {
  if (graph_path.has_value() == log_path.has_value()) {
    throw CliFailure{kUsage, "query needs exactly one of --graph or --log"};
  }
  const Calendar calendar = resolve_calendar(flags.calendar);
  const Pattern pattern = build_pattern(fields, valid_at_text, active_only, calendar);

  std::vector<Triple> triples;
  std::vector<Quintuple> quintuples;
  bool store_is_static = false;

  auto match_static = [&](const StandardKG& g) {
    store_is_static = true;
    try {
      triples = match(g, pattern);
    } catch (const std::invalid_argument& e) {
      throw CliFailure{kUsage, e.what()};
    }
  };

  if (graph_path) {
    const std::string text = read_file(*graph_path);
    if (detect_graph_kind(text) == GraphFileKind::Quintuples) {
      const auto parsed = parse_quintuples(text);
      if (!parsed.ok()) {
        report_parse_errors(*graph_path, parsed.errors);
        return kParseError;
      }
      quintuples = match(*parsed.value, pattern);
    } else {
      const auto parsed = parse_triples(text);
      if (!parsed.ok()) {
        report_parse_errors(*graph_path, parsed.errors);
        return kParseError;
      }
      match_static(*parsed.value);
    }
  } else {
    if (!at_text) throw CliFailure{kUsage, "query over a log needs --at"};
    const ViewKind kind = resolve_kind(kind_name);
    const std::int64_t at = resolve_tick(*at_text, calendar, "--at");
    const ChangeLog log = load_log(*log_path, load_ontology(ontology_path));
    const Snapshot snap = snapshot(log, kind, at);
    if (kind == ViewKind::Mutable) {
      match_static(snap.standard());
    } else {
      quintuples = match(snap.reminiscent(), pattern);
    }
  }

  if (flags.format == "json") {
    json arr = json::array();
    if (store_is_static) {
      for (const Triple& t : triples) arr.push_back(triple_to_json(t));
    } else {
      for (const Quintuple& q : quintuples) arr.push_back(quintuple_to_json(q));
    }
    emit_json(json{{"edges", std::move(arr)}});
  } else {
    for (const Triple& t : triples) std::cout << format_triple(t) << "\n";
    for (const Quintuple& q : quintuples) std::cout << format_quintuple(q) << "\n";
  }
  return kOk;
}

int run_diff(const std::string& log_path, const std::string& kind_name,
             const std::string& from_text, const std::string& to_text,
             const std::optional<std::string>& ontology_path, const CommonFlags& flags) {
  const Calendar calendar = resolve_calendar(flags.calendar);
  const ViewKind kind = resolve_kind(kind_name);
  const std::int64_t from = resolve_tick(from_text, calendar, "--from");
  const std::int64_t to = resolve_tick(to_text, calendar, "--to");
  if (from > to) throw CliFailure{kUsage, "--from exceeds --to"};

  const ChangeLog log = load_log(log_path, load_ontology(ontology_path));
  const GraphDiff d = diff(log, kind, from, to);

  if (flags.format == "json") {
    json added = json::array(), removed = json::array(), rewritten = json::array();
    for (const Triple& t : d.added_triples) added.push_back(triple_to_json(t));
    for (const Quintuple& q : d.added) added.push_back(quintuple_to_json(q));
    for (const Triple& t : d.removed_triples) removed.push_back(triple_to_json(t));
    for (const Quintuple& q : d.removed) removed.push_back(quintuple_to_json(q));
    for (const auto& [old_q, new_q] : d.rewritten) {
      rewritten.push_back(
          json{{"old", quintuple_to_json(old_q)}, {"new", quintuple_to_json(new_q)}});
    }
    emit_json(json{{"added", std::move(added)},
                   {"removed", std::move(removed)},
                   {"rewritten", std::move(rewritten)}});
  } else {
    for (const Triple& t : d.added_triples) std::cout << "added " << format_triple(t) << "\n";
    for (const Quintuple& q : d.added) std::cout << "added " << format_quintuple(q) << "\n";
    for (const Triple& t : d.removed_triples) {
      std::cout << "removed " << format_triple(t) << "\n";
    }
    for (const Quintuple& q : d.removed) {
      std::cout << "removed " << format_quintuple(q) << "\n";
    }
    for (const auto& [old_q, new_q] : d.rewritten) {
      std::cout << "rewritten <" << old_q.head << "> <" << old_q.relation << "> "
                << format_term(old_q.tail) << " " << to_string(old_q.valid_from) << " "
                << to_string(old_q.valid_until) << " -> " << to_string(new_q.valid_until)
                << "\n";
    }
  }
  return kOk;
}

int run_classify(const std::optional<std::string>& graph_path,
                 const std::optional<std::string>& log_path, const CommonFlags& flags) {
  if (graph_path.has_value() == log_path.has_value()) {
    throw CliFailure{kUsage, "classify needs exactly one of --graph or --log"};
  }
  TaxonomyCell cell;
  if (graph_path) {
    const std::string text = read_file(*graph_path);
    if (detect_graph_kind(text) == GraphFileKind::Quintuples) {
      const auto parsed = parse_quintuples(text);
      if (!parsed.ok()) {
        report_parse_errors(*graph_path, parsed.errors);
        return kParseError;
      }
      cell = classify(*parsed.value);
    } else {
      const auto parsed = parse_triples(text);
      if (!parsed.ok()) {
        report_parse_errors(*graph_path, parsed.errors);
        return kParseError;
      }
      cell = classify(*parsed.value);
    }
  } else {
    cell = classify(load_log(*log_path, {}));
  }
  if (flags.format == "json") {
    emit_json(json{{"cell", to_string(cell)}});
  } else {
    std::cout << to_string(cell) << "\n";
  }
  return kOk;
}

int run_history(const std::string& log_path, const std::vector<std::string>& fields,
                const std::optional<std::string>& ontology_path, const CommonFlags& flags) {
  if (fields.size() != 3) {
    throw CliFailure{kUsage, "history needs a full key: head relation tail"};
  }
  const auto head = parse_iri_text(fields[0]);
  const auto rel = parse_iri_text(fields[1]);
  const auto tail = parse_term_text(fields[2]);
  if (!head || !rel || !tail) {
    throw CliFailure{kUsage, "history key fields must be terms, e.g. <UK> <member> <EU>"};
  }
  const ChangeLog log = load_log(log_path, load_ontology(ontology_path));
  const auto events = history(log, Triple(*head, *rel, *tail));
  if (flags.format == "json") {
    json arr = json::array();
    for (const ChangeEvent& e : events) arr.push_back(event_to_json(e));
    emit_json(json{{"events", std::move(arr)}});
  } else {
    for (const ChangeEvent& e : events) std::cout << format_event(e) << "\n";
  }
  return kOk;
}

int run_replay(const std::string& log_path, const std::optional<std::string>& out_path,
               const std::optional<std::string>& ontology_path) {
  const ChangeLog log = load_log(log_path, load_ontology(ontology_path));
  write_output(out_path, write_event_log(log));
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"time-aware knowledge graph toolkit"};
  app.require_subcommand(1);

  // validate
  auto* validate_cmd =
      app.add_subcommand("validate", "check a graph or log against ontology rules");
  std::optional<std::string> v_ontology, v_graph, v_log;
  CommonFlags v_flags;
  validate_cmd->add_option("--ontology", v_ontology, "ontology file");
  validate_cmd->add_option("--graph", v_graph, "triple or quintuple file");
  validate_cmd->add_option("--log", v_log, "event log file");
  add_format_flag(validate_cmd, &v_flags);

  // snapshot
  auto* snapshot_cmd = app.add_subcommand("snapshot", "materialize a view at an instant");
  std::string s_log, s_kind, s_at;
  std::optional<std::string> s_out, s_ontology;
  CommonFlags s_flags;
  snapshot_cmd->add_option("--log", s_log, "event log file")->required();
  snapshot_cmd->add_option("--kind", s_kind, "mutable | semi-incremental | incremental")
      ->required();
  snapshot_cmd->add_option("--at", s_at, "instant")->required();
  snapshot_cmd->add_option("--out", s_out, "output file (stdout when omitted)");
  snapshot_cmd->add_option("--ontology", s_ontology, "ontology file");
  add_calendar_flag(snapshot_cmd, &s_flags);

  // query
  auto* query_cmd = app.add_subcommand("query", "match a pattern against a store");
  std::optional<std::string> q_graph, q_log, q_at, q_valid_at, q_ontology;
  std::string q_kind = "incremental";
  std::vector<std::string> q_fields;
  bool q_active_only = false;
  CommonFlags q_flags;
  query_cmd->add_option("--graph", q_graph, "triple or quintuple file");
  query_cmd->add_option("--log", q_log, "event log file");
  query_cmd->add_option("--kind", q_kind, "view kind when querying a log");
  query_cmd->add_option("--at", q_at, "snapshot instant when querying a log");
  query_cmd->add_option("--valid-at", q_valid_at, "keep edges valid at this instant");
  query_cmd->add_flag("--active-only", q_active_only, "keep edges with valid_until = inf");
  query_cmd->add_option("--ontology", q_ontology, "ontology file");
  query_cmd->add_option("pattern", q_fields, "head relation tail, '?' is a wildcard")
      ->expected(3);
  add_calendar_flag(query_cmd, &q_flags);
  add_format_flag(query_cmd, &q_flags);

  // diff
  auto* diff_cmd = app.add_subcommand("diff", "compare two instants of a view");
  std::string d_log, d_kind, d_from, d_to;
  std::optional<std::string> d_ontology;
  CommonFlags d_flags;
  diff_cmd->add_option("--log", d_log, "event log file")->required();
  diff_cmd->add_option("--kind", d_kind, "view kind")->required();
  diff_cmd->add_option("--from", d_from, "earlier instant")->required();
  diff_cmd->add_option("--to", d_to, "later instant")->required();
  diff_cmd->add_option("--ontology", d_ontology, "ontology file");
  add_calendar_flag(diff_cmd, &d_flags);
  add_format_flag(diff_cmd, &d_flags);

  // classify
  auto* classify_cmd = app.add_subcommand("classify", "name the taxonomy cell of a store");
  std::optional<std::string> c_graph, c_log;
  CommonFlags c_flags;
  classify_cmd->add_option("--graph", c_graph, "triple or quintuple file");
  classify_cmd->add_option("--log", c_log, "event log file");
  add_format_flag(classify_cmd, &c_flags);

  // history
  auto* history_cmd = app.add_subcommand("history", "trace every event touching a key");
  std::string h_log;
  std::vector<std::string> h_fields;
  std::optional<std::string> h_ontology;
  CommonFlags h_flags;
  history_cmd->add_option("--log", h_log, "event log file")->required();
  history_cmd->add_option("key", h_fields, "head relation tail")->expected(3);
  history_cmd->add_option("--ontology", h_ontology, "ontology file");
  add_format_flag(history_cmd, &h_flags);

  // replay
  auto* replay_cmd = app.add_subcommand("replay", "re-emit a log in canonical form");
  std::string r_log;
  std::optional<std::string> r_out, r_ontology;
  replay_cmd->add_option("--log", r_log, "event log file")->required();
  replay_cmd->add_option("--out", r_out, "output file (stdout when omitted)");
  replay_cmd->add_option("--ontology", r_ontology, "ontology file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }

  try {
    if (validate_cmd->parsed()) return run_validate(v_ontology, v_graph, v_log, v_flags);
    if (snapshot_cmd->parsed()) {
      return run_snapshot(s_log, s_kind, s_at, s_out, s_ontology, s_flags);
    }
    if (query_cmd->parsed()) {
      return run_query(q_graph, q_log, q_kind, q_at, q_fields, q_valid_at, q_active_only,
                       q_ontology, q_flags);
    }
    if (diff_cmd->parsed()) return run_diff(d_log, d_kind, d_from, d_to, d_ontology, d_flags);
    if (classify_cmd->parsed()) return run_classify(c_graph, c_log, c_flags);
    if (history_cmd->parsed()) return run_history(h_log, h_fields, h_ontology, h_flags);
    if (replay_cmd->parsed()) return run_replay(r_log, r_out, r_ontology);
  } catch (const CliFailure& f) {
    std::cerr << "error: " << f.message << "\n";
    return f.code;
  }
  return kUsage;
}
