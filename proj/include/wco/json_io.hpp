#pragma once

#include <complex>
#include <string>

#include <json.hpp>

namespace wco {

using Json = nlohmann::ordered_json;

/// Serializes with a fixed float format (%.16e) so equal documents are byte-identical.
/// Non-finite numbers become null.
std::string dump_json(const Json& doc, int indent = 2);

Json complex_to_json(std::complex<double> z);

}  // namespace wco
