#pragma once

#include <stdexcept>
#include <string>

namespace cimgraph {

// Thrown on contract violations: malformed inputs to serializers, unknown
// ids handed to mutators, incomplete graphs handed to the topology passes.
// Recoverable per-line input problems are reported as diagnostics instead.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cimgraph
