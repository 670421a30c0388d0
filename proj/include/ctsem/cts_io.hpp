#pragma once

#include "ctsem/cts.hpp"

namespace ctsem
{

/// Parsed CTS file. Source lines are kept for diagnostics.
struct cts_document
{
    std::string text;
    cts system;
    std::map< std::string, int > section_lines; // first line of each keyword
};

/// Line-oriented format, '#' starts a comment:
///
///   conditions: k1 k2
///   order: k2 <= k1
///   alphabet: a b
///   states: x y
///   accepting: y
///   trans: x a k2 y
///
/// Throws syntax_error, and antisymmetry_violation or dangling_reference
/// prefixed with the offending line.
[[nodiscard]] cts_document parse_cts( const std::string& text );

/// Canonical text: names in carrier order, the order as its covering pairs,
/// transitions sorted. parse_cts . print_cts is the identity on systems.
[[nodiscard]] std::string print_cts( const cts& c );

} // namespace ctsem
