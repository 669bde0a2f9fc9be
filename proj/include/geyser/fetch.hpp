#pragma once

#include <string>

namespace geyser {

/// HTTP GET url and write the response body verbatim to out_path. Nothing
/// is written on failure. Throws NetworkError (unreachable / transport) or
/// HttpStatusError (non-2xx). Parsing never touches the network; it reads
/// the saved file.
void fetch_to_file(const std::string& url, const std::string& out_path);

} // namespace geyser
