#pragma once

#include <cstdint>
#include <string>

#include "combstruct/structures.hpp"

namespace combstruct {

/// Parses a structure spec:
///   {"kind": "assembly", "builtin": "permutations"}
///   {"kind": "multiset", "builtin": "polynomials", "params": {"q": 2}}
///   {"kind": "assembly", "builtin": "esf", "params": {"kappa": 0.5}}
///   {"kind": "selection", "m": [1, 1, 1], "name": "custom", "meta": {"kappa": 1, "y": 1}}
/// "kind" may be omitted for builtins. Throws DomainError on bad input.
StructureSpec parse_spec(const std::string& json_text);
StructureSpec load_spec(const std::string& path);

/// Canonical JSON for a spec (sorted keys, no whitespace).
std::string spec_to_json(const StructureSpec& spec);

/// 64-bit FNV-1a of the canonical JSON, as 16 hex digits.
std::string spec_hash(const StructureSpec& spec);

}  // namespace combstruct
