#pragma once

#include "lexer.hpp"
#include "tycus/pcq.hpp"
#include "tycus/shacl.hpp"

// Token-level entry points shared between the .pcq, .shc and .lam parsers.
namespace tycus::detail {

PathPtr parse_path_tokens(Lexer& lex);
Pattern parse_pattern(Lexer& lex);
Pcq parse_query_tokens(Lexer& lex);
ConstraintPtr parse_constraint_tokens(Lexer& lex);

// Parses consecutive `shape ...` declarations; stops at the first token that
// does not begin one. Does not check reference resolution.
ShapeSet parse_shape_block(Lexer& lex);

}  // namespace tycus::detail
