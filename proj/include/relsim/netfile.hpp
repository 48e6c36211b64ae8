#pragma once

#include <stdexcept>
#include <string>

#include "relsim/engine.hpp"
#include "relsim/model.hpp"

namespace relsim {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Reads the sectioned plain-text network format:
///
///   FORMAT v1
///   BASE_MVA <mva>
///   PARAMS <beta> <eta> <xi> <W> <sigma>
///   AREA <id> <contact_min> <response_min>
///   BUS <id> <area>
///   LINE <id> <from> <to> <x_pu> <rating_mw> <lambda_per_y> <mu_per_h> <reclose_h> <resp_area>
///   GEN <id> <bus> <pmax_mw> <priority> <lambda_per_y> <mu_per_h>
///   LOAD <id> <bus> <dmax_mw>
///
/// '#' starts a comment. BASE_MVA and PARAMS may be omitted (defaults
/// apply). The parsed model must pass validate(); violations are reported
/// as ParseError.
NetworkModel parse_network(const std::string& path);
NetworkModel parse_network_text(const std::string& text, const std::string& origin = "<string>");

/// Canonical serialization; parse(serialize(m)) reproduces m exactly.
std::string serialize_network(const NetworkModel& model);

/// Reads the hourly demand-factor table: one row per hour, one column per
/// area, whitespace separated, values in [0, 1]. The row count defines the
/// year length.
DemandProfile parse_profile(const std::string& path, int n_areas);
DemandProfile parse_profile_text(const std::string& text, int n_areas,
                                 const std::string& origin = "<string>");

}  // namespace relsim
