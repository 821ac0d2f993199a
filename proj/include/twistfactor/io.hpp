#pragma once

#include <string>

#include "json.hpp"

#include "twistfactor/attacks.hpp"
#include "twistfactor/instance.hpp"
#include "twistfactor/lattice.hpp"

namespace twistfactor {

using Json = nlohmann::ordered_json;

// Big integers always travel as decimal strings.
Json int_to_json(const Int& v);
Int int_from_json(const Json& j, const char* field);

// {"n", "p"?, "q"?, "curve": {"a", "b"}, "d", "counts": {"affine", "projective"},
//  "twist_counts"?: {...}, "traces"?: {"ap", "aq"}, "seed"}
Json instance_to_json(const AttackInstance& instance);
// Validates the curve, p q = n, and that traces (when present) reproduce
// every count.
AttackInstance instance_from_json(const Json& j);

// {"outcome", "p"?, "q"?, "reason"?, "method", "divisors_tried",
//  "coppersmith_calls", "twists_tried"?, "wall_ms"}. Deterministic mode
// writes wall_ms = 0.
Json report_to_json(const AttackReport& report, bool deterministic);

// {"rows": [[dec-string, ...], ...]}
Json matrix_to_json(const IntMatrix& m);
IntMatrix matrix_from_json(const Json& j);

Json read_json_file(const std::string& path);
// Two-space indented dump with a trailing newline.
std::string to_text(const Json& j);

}  // namespace twistfactor
