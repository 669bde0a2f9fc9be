#include "geyser/fetch.hpp"

#include <fstream>

#include <httplib.h>

#include "geyser/errors.hpp"

namespace geyser {

namespace {

struct SplitUrl {
    std::string base;    // scheme://host[:port]
    std::string target;  // path + query, at least "/"
};

SplitUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos)
        throw NetworkError("malformed url (missing scheme): " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    SplitUrl out;
    if (path_start == std::string::npos) {
        out.base = url;
        out.target = "/";
    } else {
        out.base = url.substr(0, path_start);
        out.target = url.substr(path_start);
    }
    if (out.base.size() == scheme_end + 3)
        throw NetworkError("malformed url (empty host): " + url);
    return out;
}

} // namespace

void fetch_to_file(const std::string& url, const std::string& out_path) {
    const SplitUrl split = split_url(url);
#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
    if (split.base.rfind("https://", 0) == 0)
        throw NetworkError("built without TLS support; https urls unavailable");
#endif
    httplib::Client client(split.base);
    client.set_follow_location(true);
    client.set_connection_timeout(30, 0);
    client.set_read_timeout(60, 0);

    const httplib::Result res = client.Get(split.target);
    if (!res) throw NetworkError("GET " + url + " failed: " + httplib::to_string(res.error()));
    if (res->status < 200 || res->status >= 300)
        throw HttpStatusError("GET " + url + " returned status " + std::to_string(res->status),
                              res->status);

    std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
    if (!out) throw NetworkError("cannot open output file: " + out_path);
    out.write(res->body.data(), static_cast<std::streamsize>(res->body.size()));
    out.close();
    if (!out) throw NetworkError("short write to output file: " + out_path);
}

} // namespace geyser
