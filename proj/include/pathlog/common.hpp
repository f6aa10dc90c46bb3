#pragma once

#include <stdexcept>
#include <string>

namespace pathlog {

// Node identifiers and labels are opaque non-empty strings without whitespace.
using NodeId = std::string;
using Label = std::string;

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed textual input (graph files, queries, datalog, XML, XPath).
class ParseError : public Error {
public:
    explicit ParseError(const std::string& msg) : Error(msg) {}
};

// Structurally valid input that violates a semantic precondition
// (dangling node refs, label conflicts, unsafe programs, bad start sets).
class ValidationError : public Error {
public:
    explicit ValidationError(const std::string& msg) : Error(msg) {}
};

// Requests outside the supported fragment (negation where it is not allowed,
// inverting goto, XPath axes beyond child/descendant, ...).
class UnsupportedError : public Error {
public:
    explicit UnsupportedError(const std::string& msg) : Error(msg) {}
};

} // namespace pathlog
