#pragma once

#include <string>

#include <json.hpp>

#include "moduli/cmat.hpp"
#include "moduli/counterex.hpp"
#include "moduli/ineq.hpp"
#include "moduli/orbit.hpp"

namespace moduli::serialize {

using json = nlohmann::json;

/// Matrices travel as {rows, cols, re:[...], im:[...]}, row-major; doubles are
/// emitted with shortest-round-trip formatting, so decode(encode(x)) is
/// bit-exact for every finite value.
json to_json(const CMat& m);
CMat cmat_from_json(const json& j);

json to_json(const orbit::OrbitCertificate& cert);
orbit::OrbitCertificate certificate_from_json(const json& j);

json to_json(const counterex::CounterReport& rep);
json to_json(const ineq::IneqReport& rep);
json to_json(const ineq::ExploreSummary& s);

std::string write_text(const json& j);
json read_file(const std::string& path);
void write_file(const std::string& path, const json& j);

}  // namespace moduli::serialize
