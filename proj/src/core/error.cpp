#include "nowcast/core/error.hpp"

namespace nowcast {

ParseError::ParseError(const std::string& what, std::size_t line)
    : Error("line " + std::to_string(line) + ": " + what), line_(line) {}

ParseError::ParseError(const std::string& what) : Error(what) {}

}  // namespace nowcast
