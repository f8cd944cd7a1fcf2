#pragma once

#include <string>

#include "grafcat/graph.hpp"

namespace grafcat {

/// Graphviz source: vertices are nodes, inner edges join nodes, and each
/// port is a half-edge ending at an invisible anchor. Isolated edges join
/// two anchors.
std::string to_dot(const JKGraph& g, const std::string& name = "G");

}  // namespace grafcat
