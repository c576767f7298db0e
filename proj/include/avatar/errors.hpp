#pragma once

#include <stdexcept>
#include <string>

namespace avatar {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Malformed input file; carries line/column where known.
struct ParseError : Error {
    ParseError(const std::string& msg, int line = 0, int column = 0)
        : Error(line > 0 ? msg + " (line " + std::to_string(line) +
                               (column > 0 ? ", column " + std::to_string(column) : "") + ")"
                         : msg),
          line(line),
          column(column) {}
    int line;
    int column;
};

// Structurally valid file whose content violates a declared schema.
struct SchemaError : Error {
    using Error::Error;
};

// Pipeline references a component id absent from the knowledge base or pool.
struct UnknownComponentError : Error {
    explicit UnknownComponentError(const std::string& id)
        : Error("unknown component id: " + id), component_id(id) {}
    std::string component_id;
};

struct InvariantError : Error {
    using Error::Error;
};

}  // namespace avatar
