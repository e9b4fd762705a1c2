#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "nrgit/scenario.hpp"

namespace nrgit {

using Report = nlohmann::ordered_json;

Report cmd_analyze(const Scenario& s);
// Throws Refusal when CDRS fails, BoundExhausted when a slice search runs out.
Report cmd_quotient(const Scenario& s);
// Throws Refusal when CDRS holds or WUU fails.
Report cmd_blowup(const Scenario& s, bool chain_quotient = true);

struct IdentityOptions {
  int pbw_bound = 3;  // |k| bound and comultiplication degree
  size_t letters = 2;
  size_t weight_tuples = 5;
  uint64_t seed = 0;
};
Report cmd_verify_identities(const IdentityOptions& opt);

// Indented key/value rendering of a report tree.
std::string render_text(const Report& r);

}  // namespace nrgit
