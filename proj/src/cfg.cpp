#include "osa/cfg.hpp"

#include <algorithm>
#include <stdexcept>

namespace osa {

Vertex Vertex::named(std::string name) {
  Vertex v;
  v.kind = Kind::Atom;
  v.atom = std::move(name);
  return v;
}

Vertex Vertex::leveled(Phase phase, Nat level, std::string name) {
  Vertex v;
  v.kind = Kind::Leveled;
  v.phase = phase;
  v.level = level;
  v.atom = std::move(name);
  return v;
}

Vertex Vertex::star() {
  Vertex v;
  v.kind = Kind::Star;
  return v;
}

std::string Vertex::render() const {
  switch (kind) {
    case Kind::Star:
      return "star";
    case Kind::Atom:
      return atom;
    case Kind::Leveled:
      return std::string("(") + (phase == Phase::Bot ? "bot" : "top") + " " +
             std::to_string(level) + "," + atom + ")";
  }
  return "?";
}

FlowGraph& FlowGraph::add_plain(const Vertex& from, const Vertex& to) {
  vertices.insert(from);
  vertices.insert(to);
  plain_edges.insert({from, to});
  return *this;
}

FlowGraph& FlowGraph::add_oracle(const Vertex& from, const Vertex& to) {
  vertices.insert(from);
  vertices.insert(to);
  oracle_edges.insert({from, to});
  return *this;
}

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += "\"";
  return out;
}

std::vector<std::string> rendered_sorted(const std::set<Vertex>& vs) {
  std::vector<std::string> out;
  out.reserve(vs.size());
  for (const auto& v : vs) out.push_back(v.render());
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::string, std::string>> rendered_sorted(
    const std::set<Edge>& es) {
  std::vector<std::pair<std::string, std::string>> out;
  out.reserve(es.size());
  for (const auto& [a, b] : es) out.emplace_back(a.render(), b.render());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::string emit_dot(const FlowGraph& graph, const std::string& name) {
  std::string out = "digraph " + name + " {\n";
  for (const auto& v : rendered_sorted(graph.vertices)) {
    out += "  " + quoted(v) + ";\n";
  }
  for (const auto& [a, b] : rendered_sorted(graph.plain_edges)) {
    out += "  " + quoted(a) + " -> " + quoted(b) + ";\n";
  }
  for (const auto& [a, b] : rendered_sorted(graph.oracle_edges)) {
    out += "  " + quoted(a) + " -> " + quoted(b) + " [style=dotted];\n";
  }
  out += "}\n";
  return out;
}

CfgVerdict verify_cfg(const FlowGraph& graph,
                      const std::vector<ProjectedStep>& steps) {
  CfgVerdict verdict;
  for (const auto& step : steps) {
    if (!graph.vertices.count(step.from) || !graph.vertices.count(step.to)) {
      verdict.violations.push_back({step, "vertex not declared"});
      continue;
    }
    const auto& edges = step.oracle ? graph.oracle_edges : graph.plain_edges;
    if (!edges.count({step.from, step.to})) {
      verdict.violations.push_back(
          {step, step.oracle ? "missing oracle edge" : "missing plain edge"});
    }
  }
  return verdict;
}

FlowGraph lift_cfg(const FlowGraph& inner, const std::set<Vertex>& omega_i,
                   const std::set<Vertex>& omega_e, Nat max_level) {
  for (const auto& v : inner.vertices) {
    if (v.kind != Vertex::Kind::Atom) {
      throw std::invalid_argument("inner graph vertices must be atoms");
    }
  }
  auto require_subset = [&](const std::set<Vertex>& sub, const char* what) {
    for (const auto& v : sub) {
      if (!inner.vertices.count(v)) {
        throw std::invalid_argument(std::string(what) +
                                    " atom missing from the inner graph: " +
                                    v.render());
      }
    }
  };
  require_subset(omega_i, "initial");
  require_subset(omega_e, "final");

  using P = Vertex::Phase;
  FlowGraph out;
  out.vertices.insert(Vertex::star());
  for (Nat level = 0; level <= max_level; ++level) {
    for (const auto& v : inner.vertices) {
      out.vertices.insert(Vertex::leveled(P::Bot, level, v.atom));
      out.vertices.insert(Vertex::leveled(P::Top, level, v.atom));
    }
  }

  for (Nat level = 0; level <= max_level; ++level) {
    // Inner plain edges run at every level.
    for (const auto& [p, q] : inner.plain_edges) {
      out.plain_edges.insert({Vertex::leveled(P::Bot, level, p.atom),
                              Vertex::leveled(P::Bot, level, q.atom)});
    }
    // An inner query p -> q splits into a stage fetch (bot to top), the
    // answered query (top to bot), and, one level up, a fresh inner run
    // whose eventual final state hands its value back down.
    for (const auto& [p, q] : inner.oracle_edges) {
      const Vertex bot_p = Vertex::leveled(P::Bot, level, p.atom);
      const Vertex top_p = Vertex::leveled(P::Top, level, p.atom);
      const Vertex bot_q = Vertex::leveled(P::Bot, level, q.atom);
      out.oracle_edges.insert({bot_p, top_p});
      out.oracle_edges.insert({top_p, bot_q});
      if (level < max_level) {
        for (const auto& u : omega_i) {
          out.plain_edges.insert(
              {top_p, Vertex::leveled(P::Bot, level + 1, u.atom)});
        }
        for (const auto& u : omega_e) {
          out.plain_edges.insert(
              {Vertex::leveled(P::Bot, level + 1, u.atom), bot_q});
        }
      }
    }
  }
  // A level-0 pop leaves the machine: final atoms at the bottom level flow
  // into the star vertex.
  for (const auto& u : omega_e) {
    out.plain_edges.insert({Vertex::leveled(P::Bot, 0, u.atom),
                            Vertex::star()});
  }
  return out;
}

}  // namespace osa
