#pragma once

#include <string>

#include <json.hpp>

#include "osa/cfg.hpp"
#include "osa/dclift.hpp"
#include "osa/engine.hpp"

// Serialization of runs and graphs.  The text forms are stable: golden
// files recorded from these renderers are compared byte for byte.

namespace osa {

using Json = nlohmann::ordered_json;

// One line per state.  The first line is the initial state; later lines
// show the transition arrow, the produced state and, for oracle answers,
// the question and answer.
template <class R, class X, class Y>
std::string render_trace_text(const Trace<R, X, Y>& trace) {
  std::string out;
  for (const auto& e : trace.entries) {
    switch (e.kind) {
      case TransitionKind::Initial:
        out += repr(e.state);
        break;
      case TransitionKind::Step:
        out += "▷ " + repr(e.state);
        break;
      case TransitionKind::OracleQuery:
        out += "▷f " + repr(e.state) + " ? " + repr(*e.question) +
               " -> " + repr(*e.answer);
        break;
    }
    out += "\n";
  }
  return out;
}

template <class R, class X, class Y>
std::string render_omega_trace_text(const OmegaTrace<R, X, Y>& trace) {
  std::string out;
  for (const auto& e : trace.entries) {
    switch (e.kind) {
      case OmegaKind::Initial:
        out += repr(e.state);
        break;
      case OmegaKind::Oracle1:
        out += "▷1 " + repr(e.state) + " ? " + repr(*e.question) +
               " -> " + repr(*e.answer_first);
        break;
      case OmegaKind::Oracle2:
        out += "▷2 " + repr(e.state) + " ? " + repr(*e.question) +
               " -> " + repr(*e.answer_second);
        break;
      default:
        out += "▷ω(" + repr(e.kind) + ") " + repr(e.state);
        break;
    }
    out += "\n";
  }
  return out;
}

template <class R, class X, class Y>
Json trace_to_json(const Trace<R, X, Y>& trace) {
  Json entries = Json::array();
  for (const auto& e : trace.entries) {
    Json entry;
    entry["state"] = repr(e.state);
    switch (e.kind) {
      case TransitionKind::Initial: entry["kind"] = "initial"; break;
      case TransitionKind::Step: entry["kind"] = "step"; break;
      case TransitionKind::OracleQuery:
        entry["kind"] = "query";
        entry["question"] = repr(*e.question);
        entry["answer"] = repr(*e.answer);
        break;
    }
    entries.push_back(std::move(entry));
  }
  Json out;
  out["entries"] = std::move(entries);
  out["steps_used"] = trace.steps_used;
  return out;
}

template <class R, class X, class Y>
Json omega_trace_to_json(const OmegaTrace<R, X, Y>& trace) {
  Json entries = Json::array();
  for (const auto& e : trace.entries) {
    Json entry;
    entry["state"] = repr(e.state);
    switch (e.kind) {
      case OmegaKind::Initial:
        entry["kind"] = "initial";
        break;
      case OmegaKind::Oracle1:
        entry["kind"] = "oracle1";
        entry["question"] = repr(*e.question);
        entry["answer"] = repr(*e.answer_first);
        break;
      case OmegaKind::Oracle2:
        entry["kind"] = "oracle2";
        entry["question"] = repr(*e.question);
        entry["answer"] = repr(*e.answer_second);
        break;
      default:
        entry["kind"] = "step";
        entry["rule"] = repr(e.kind);
        break;
    }
    entries.push_back(std::move(entry));
  }
  Json out;
  out["entries"] = std::move(entries);
  out["steps_used"] = trace.steps_used;
  return out;
}

inline Json graph_to_json(const FlowGraph& graph) {
  Json vertices = Json::array();
  for (const auto& v : graph.vertices) vertices.push_back(v.render());
  auto edges_json = [](const std::set<Edge>& edges) {
    Json out = Json::array();
    for (const auto& [a, b] : edges) {
      out.push_back(Json::array({a.render(), b.render()}));
    }
    return out;
  };
  Json out;
  out["vertices"] = std::move(vertices);
  out["plain_edges"] = edges_json(graph.plain_edges);
  out["oracle_edges"] = edges_json(graph.oracle_edges);
  return out;
}

// Path files: one rendered vertex per line.
inline std::string render_path_text(const std::vector<Vertex>& path) {
  std::string out;
  for (const auto& v : path) out += v.render() + "\n";
  return out;
}

inline std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace osa
