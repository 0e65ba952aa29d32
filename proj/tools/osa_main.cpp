// Command-line front end: run registered machines, reproduce lifted tape
// runs, emit flow graphs, and reduce oracle terms.
//
// Exit codes: 0 the run reached an end state (or the command is not a run),
// 2 fuel ran out, 3 the machine got stuck, 64 bad usage or parse errors,
// 1 anything else (I/O failures, internal errors).

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "osa/casebook.hpp"
#include "osa/oracle_text.hpp"
#include "osa/systt.hpp"
#include "osa/trace_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitFuel = 2;
constexpr int kExitStuck = 3;
constexpr int kExitUsage = 64;

constexpr osa::Nat kDefaultFuel = 10000;

int status_code(osa::RunStatus status) {
  switch (status) {
    case osa::RunStatus::Terminated: return kExitOk;
    case osa::RunStatus::FuelExhausted: return kExitFuel;
    case osa::RunStatus::Stuck: return kExitStuck;
  }
  return kExitError;
}

const char* status_note(osa::RunStatus status) {
  return status == osa::RunStatus::FuelExhausted ? "fuel exhausted" : "stuck";
}

// The default fuel honors OSA_FUEL when set.
std::optional<osa::Nat> env_fuel(std::string& error) {
  const char* raw = std::getenv("OSA_FUEL");
  if (!raw) return std::nullopt;
  std::string text(raw);
  osa::Nat value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') {
      error = "OSA_FUEL must be a number, got '" + text + "'";
      return std::nullopt;
    }
    value = value * 10 + static_cast<osa::Nat>(c - '0');
  }
  if (text.empty()) {
    error = "OSA_FUEL is empty";
    return std::nullopt;
  }
  return value;
}

bool write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) return false;
  out << content;
  return static_cast<bool>(out);
}

bool parse_nat_arg(const std::string& text, osa::Nat& out) {
  if (text.empty()) return false;
  osa::Nat value = 0;
  for (char c : text) {
    if (c < '0' || c > '9') return false;
    value = value * 10 + static_cast<osa::Nat>(c - '0');
  }
  out = value;
  return true;
}

// Accepts "a,b,c", "[a,b,c]" and "[]".
bool parse_nat_list(std::string text, std::vector<osa::Nat>& out) {
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') return false;
    text = text.substr(1, text.size() - 2);
  }
  out.clear();
  if (text.empty()) return true;
  std::string cur;
  for (char c : text + ",") {
    if (c == ',') {
      osa::Nat value = 0;
      if (!parse_nat_arg(cur, value)) return false;
      out.push_back(value);
      cur.clear();
    } else if (c != ' ') {
      cur += c;
    }
  }
  return true;
}

bool parse_bit_list(const std::string& text, std::vector<bool>& out) {
  std::vector<osa::Nat> raw;
  if (!parse_nat_list(text, raw)) return false;
  out.clear();
  for (osa::Nat v : raw) {
    if (v > 1) return false;
    out.push_back(v == 1);
  }
  return true;
}

struct RunOptions {
  std::string machine;
  std::string input;
  std::string oracle;
  std::string format = "text";
  std::string pattern;
  std::string extend = "repeat-last";
  osa::Nat n = 2;
  osa::Nat fuel = kDefaultFuel;
};

bool parse_extend(const std::string& text, osa::TapeExtend& out) {
  if (text == "repeat-last") {
    out = osa::TapeExtend::RepeatLast;
  } else if (text == "cycle") {
    out = osa::TapeExtend::Cycle;
  } else if (text == "constant") {
    out = osa::TapeExtend::Constant;
  } else {
    return false;
  }
  return true;
}

template <class U, class V, class X, class Y, class R>
int run_and_print(const osa::OsaSpec<U, V, X, Y, R>& machine, const U& input,
                  osa::Oracle<X, Y>& oracle, const RunOptions& opt) {
  auto out = osa::run(machine, oracle, input, opt.fuel);
  if (opt.format == "json") {
    osa::Json doc;
    doc["status"] = osa::repr(out.status);
    if (out.status == osa::RunStatus::Terminated) {
      doc["output"] = osa::repr(machine.pi(out.final_state()));
    }
    doc.update(osa::trace_to_json(out.trace));
    std::cout << osa::dump_json(doc);
  } else {
    std::cout << osa::render_trace_text(out.trace);
    if (out.status == osa::RunStatus::Terminated) {
      std::cout << "= " << osa::repr(machine.pi(out.final_state())) << "\n";
    }
  }
  if (out.status != osa::RunStatus::Terminated) {
    std::cerr << status_note(out.status) << " after " << out.trace.steps_used
              << " transitions\n";
  }
  return status_code(out.status);
}

int cmd_run(const RunOptions& opt) {
  std::function<osa::Nat(osa::Nat)> oracle_fn;
  if (!opt.oracle.empty()) {
    auto parsed = osa::parse_nat_oracle(opt.oracle);
    if (!parsed.ok()) {
      std::cerr << parsed.error << "\n";
      return kExitUsage;
    }
    oracle_fn = parsed.fn;
  }
  osa::Oracle<osa::Nat, osa::Nat> oracle(
      oracle_fn ? oracle_fn : [](const osa::Nat&) -> osa::Nat {
        throw std::logic_error("machine asked a question but no --oracle "
                               "was given");
      });

  if (opt.machine == "euclid") {
    std::string text = opt.input;
    if (!text.empty() && text.front() == '(' && text.back() == ')') {
      text = text.substr(1, text.size() - 2);
    }
    std::vector<osa::Nat> values;
    if (!parse_nat_list(text, values) || values.size() != 2) {
      std::cerr << "euclid expects --input (a,b)\n";
      return kExitUsage;
    }
    return run_and_print(osa::euclid_machine(),
                         std::make_pair(values[0], values[1]), oracle, opt);
  }
  if (opt.machine == "max") {
    osa::Nat n = 0;
    if (!parse_nat_arg(opt.input, n)) {
      std::cerr << "max expects --input <nat>\n";
      return kExitUsage;
    }
    return run_and_print(osa::max_machine(), n, oracle, opt);
  }
  if (opt.machine == "least-even") {
    osa::Nat u = 0;
    if (!parse_nat_arg(opt.input, u)) {
      std::cerr << "least-even expects --input <nat>\n";
      return kExitUsage;
    }
    auto machine = osa::least_element_machine(
        osa::LeastElementContext{[](osa::Nat v) { return v % 2 == 0; }});
    return run_and_print(machine.osa, u, oracle, opt);
  }
  if (opt.machine == "tape-inner") {
    std::vector<bool> bits;
    osa::TapeExtend extend = osa::TapeExtend::RepeatLast;
    if (!parse_bit_list(opt.pattern, bits) || bits.empty()) {
      std::cerr << "tape-inner expects --pattern with bits, e.g. 0,1,1\n";
      return kExitUsage;
    }
    if (!parse_extend(opt.extend, extend)) {
      std::cerr << "--extend must be repeat-last, cycle, or constant\n";
      return kExitUsage;
    }
    std::vector<osa::Nat> u;
    if (!parse_nat_list(opt.input, u)) {
      std::cerr << "tape-inner expects --input [p1,p2,...]\n";
      return kExitUsage;
    }
    auto machine = osa::tape_machine(osa::make_tape_context(bits, extend,
                                                            opt.n));
    return run_and_print(machine.osa, u, oracle, opt);
  }
  std::cerr << "unknown machine '" << opt.machine
            << "' (euclid, max, least-even, tape-inner)\n";
  return kExitUsage;
}

struct TapeOptions {
  std::string pattern;
  std::string extend = "repeat-last";
  std::string format = "text";
  std::string emit_trace;
  std::string emit_path;
  osa::Nat n = 2;
  osa::Nat fuel = kDefaultFuel;
};

int cmd_tape(const TapeOptions& opt) {
  std::vector<bool> bits;
  osa::TapeExtend extend = osa::TapeExtend::RepeatLast;
  if (!parse_bit_list(opt.pattern, bits) || bits.empty()) {
    std::cerr << "tape expects --pattern with bits, e.g. 0,1,1\n";
    return kExitUsage;
  }
  if (!parse_extend(opt.extend, extend)) {
    std::cerr << "--extend must be repeat-last, cycle, or constant\n";
    return kExitUsage;
  }
  osa::TapeContext ctx;
  try {
    ctx = osa::make_tape_context(bits, extend, opt.n);
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  auto witness = osa::tape_witness(ctx, opt.fuel);
  const auto& trace = witness.outcome.trace;

  if (!opt.emit_trace.empty() &&
      !write_file(opt.emit_trace, osa::render_omega_trace_text(trace))) {
    std::cerr << "cannot write " << opt.emit_trace << "\n";
    return kExitError;
  }
  if (!opt.emit_path.empty()) {
    auto path = osa::projected_omega_path(trace, osa::tape_projection());
    if (!write_file(opt.emit_path, osa::render_path_text(path))) {
      std::cerr << "cannot write " << opt.emit_path << "\n";
      return kExitError;
    }
  }

  if (opt.format == "json") {
    osa::Json doc;
    doc["status"] = osa::repr(witness.status);
    if (witness.status == osa::RunStatus::Terminated) {
      doc["witness"] = witness.v;
    }
    doc.update(osa::omega_trace_to_json(trace));
    std::cout << osa::dump_json(doc);
  } else {
    std::cout << osa::render_omega_trace_text(trace);
  }
  if (witness.status != osa::RunStatus::Terminated) {
    std::cerr << status_note(witness.status) << " after " << trace.steps_used
              << " transitions\n";
    return status_code(witness.status);
  }
  if (!osa::tape_q(ctx)(witness.v)) {
    std::cerr << "extracted witness fails the target property: "
              << osa::repr(witness.v) << "\n";
    return kExitError;
  }
  if (opt.format != "json") {
    std::cout << "v = " << osa::repr(witness.v) << "\n";
  }
  return kExitOk;
}

struct GraphOptions {
  std::string machine;
  std::string format = "dot";
  std::string out;
  std::optional<osa::Nat> lift_level;
};

int cmd_graph(const GraphOptions& opt) {
  osa::FlowGraph graph;
  std::set<osa::Vertex> initial;
  std::set<osa::Vertex> final_atoms;
  if (opt.machine == "least-element") {
    graph = osa::least_element_graph();
    initial = osa::least_element_initial_atoms();
    final_atoms = osa::least_element_final_atoms();
  } else if (opt.machine == "tape") {
    graph = osa::tape_graph();
    initial = osa::tape_initial_atoms();
    final_atoms = osa::tape_final_atoms();
  } else {
    std::cerr << "unknown graph '" << opt.machine
              << "' (least-element, tape)\n";
    return kExitUsage;
  }
  if (opt.lift_level) {
    graph = osa::lift_cfg(graph, initial, final_atoms, *opt.lift_level);
  }
  const std::string rendered =
      opt.format == "json" ? osa::dump_json(osa::graph_to_json(graph))
                           : osa::emit_dot(graph, "machine");
  if (!opt.out.empty()) {
    if (!write_file(opt.out, rendered)) {
      std::cerr << "cannot write " << opt.out << "\n";
      return kExitError;
    }
    return kExitOk;
  }
  std::cout << rendered;
  return kExitOk;
}

struct ReduceOptions {
  std::string term;
  std::string oracle = "id";
  std::string format = "text";
  osa::Nat input = 0;
  osa::Nat fuel = kDefaultFuel;
};

int cmd_treduce(const ReduceOptions& opt) {
  auto parsed = osa::parse_term(opt.term);
  if (!parsed.ok()) {
    std::cerr << "term parse error at offset " << parsed.offset << ": "
              << parsed.error << "\n";
    return kExitUsage;
  }
  if (auto err = osa::check_type(parsed.term, osa::realizer_type())) {
    std::cerr << "type error: " << *err << "\n";
    return kExitUsage;
  }
  auto oracle = osa::parse_nat_oracle(opt.oracle);
  if (!oracle.ok()) {
    std::cerr << oracle.error << "\n";
    return kExitUsage;
  }
  auto run = osa::normalize_with_oracle(parsed.term, oracle.fn, opt.input,
                                        opt.fuel);
  if (opt.format == "json") {
    osa::Json doc;
    doc["status"] = osa::repr(run.status);
    if (run.pair) {
      doc["pair"] = {run.pair->first, run.pair->second};
    }
    doc.update(osa::trace_to_json(run.outcome.trace));
    std::cout << osa::dump_json(doc);
  } else {
    std::cout << osa::render_trace_text(run.outcome.trace);
    if (run.pair) {
      std::cout << "= (" << run.pair->first << "," << run.pair->second
                << ")\n";
    }
  }
  if (run.status != osa::RunStatus::Terminated) {
    std::cerr << status_note(run.status) << " after "
              << run.outcome.trace.steps_used << " transitions\n";
  }
  return status_code(run.status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"execution engine for oracle-consulting machines"};
  app.require_subcommand(1);

  std::string fuel_error;
  const osa::Nat default_fuel = env_fuel(fuel_error).value_or(kDefaultFuel);
  if (!fuel_error.empty()) {
    std::cerr << fuel_error << "\n";
    return kExitUsage;
  }

  RunOptions run_opt;
  run_opt.fuel = default_fuel;
  auto* run_cmd = app.add_subcommand("run", "run a registered machine");
  run_cmd->add_option("--machine", run_opt.machine,
                      "euclid, max, least-even, or tape-inner")
      ->required();
  run_cmd->add_option("--input", run_opt.input, "machine input");
  run_cmd->add_option("--oracle", run_opt.oracle, "oracle description");
  run_cmd->add_option("--fuel", run_opt.fuel, "transition budget");
  run_cmd->add_option("--format", run_opt.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  run_cmd->add_option("--pattern", run_opt.pattern,
                      "tape labels (tape-inner only)");
  run_cmd->add_option("--extend", run_opt.extend,
                      "repeat-last, cycle, or constant (tape-inner only)");
  run_cmd->add_option("--N", run_opt.n, "run length (tape-inner only)");

  TapeOptions tape_opt;
  tape_opt.fuel = default_fuel;
  auto* tape_cmd = app.add_subcommand(
      "tape", "run the lifted tape machine and extract a witness");
  tape_cmd->add_option("--pattern", tape_opt.pattern, "tape labels, e.g. 0,1,1")
      ->required();
  tape_cmd->add_option("--extend", tape_opt.extend,
                       "repeat-last, cycle, or constant");
  tape_cmd->add_option("--N", tape_opt.n, "witness length")->required();
  tape_cmd->add_option("--fuel", tape_opt.fuel, "transition budget");
  tape_cmd->add_option("--format", tape_opt.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));
  tape_cmd->add_option("--emit-trace", tape_opt.emit_trace,
                       "write the text trace to a file");
  tape_cmd->add_option("--emit-path", tape_opt.emit_path,
                       "write the projected graph path to a file");

  GraphOptions graph_opt;
  auto* graph_cmd =
      app.add_subcommand("graph", "emit a machine's flow graph");
  graph_cmd->add_option("--machine", graph_opt.machine,
                        "least-element or tape")
      ->required();
  graph_cmd
      ->add_option("--lift-level", graph_opt.lift_level,
                   "emit the lifted graph up to this level")
      ->expected(1);
  graph_cmd->add_option("--format", graph_opt.format, "dot or json")
      ->check(CLI::IsMember({"dot", "json"}));
  graph_cmd->add_option("--out", graph_opt.out, "write to a file");

  ReduceOptions reduce_opt;
  reduce_opt.fuel = default_fuel;
  auto* reduce_cmd =
      app.add_subcommand("treduce", "reduce a term against an oracle");
  reduce_cmd->add_option("--term", reduce_opt.term, "term text")->required();
  reduce_cmd->add_option("--input", reduce_opt.input, "numeral input");
  reduce_cmd->add_option("--oracle", reduce_opt.oracle, "oracle description");
  reduce_cmd->add_option("--fuel", reduce_opt.fuel, "transition budget");
  reduce_cmd->add_option("--format", reduce_opt.format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (run_cmd->parsed()) return cmd_run(run_opt);
    if (tape_cmd->parsed()) return cmd_tape(tape_opt);
    if (graph_cmd->parsed()) return cmd_graph(graph_opt);
    if (reduce_cmd->parsed()) return cmd_treduce(reduce_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitUsage;
}
