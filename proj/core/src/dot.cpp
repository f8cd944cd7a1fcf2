#include "grafcat/dot.hpp"

#include <sstream>

namespace grafcat {

namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string to_dot(const JKGraph& g, const std::string& name) {
  std::ostringstream out;
  out << "graph " << quoted(name) << " {\n";
  for (const auto& v : g.vertices) out << "  " << quoted("v:" + v) << " [label=" << quoted(v) << "];\n";
  auto end_of = [&](const Id& arc) -> std::string {
    // The node an arc's flag is attached to, or an anchor for a port.
    if (auto h = g.flag_of_arc(arc)) return quoted("v:" + g.vertex_of(*h));
    return quoted("port:" + arc);
  };
  for (const auto& p : ports(g))
    out << "  " << quoted("port:" + p) << " [shape=point, style=invis];\n";
  for (const auto& e : edges(g)) {
    out << "  " << end_of(e.first) << " -- " << end_of(e.second) << " [label=" << quoted(e.first + "/" + e.second)
        << "];\n";
  }
  out << "}\n";
  return out.str();
}

}  // namespace grafcat
