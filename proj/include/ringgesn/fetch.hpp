#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <system_error>

// <resolv.h>, pulled in by httplib, defines a `_res` macro that breaks Eigen
// headers included after it; include Eigen first so include order never matters.
#include <Eigen/Core>
#include <httplib.h>

#include "ringgesn/errors.hpp"
#include "ringgesn/tudataset.hpp"
#include "ringgesn/zip.hpp"

namespace ringgesn {

inline constexpr const char* kDefaultBaseUrl = "https://www.chrsmrrs.com/graphkerneldatasets";

/// Maps the short names used in the literature onto public archive names.
inline std::string canonical_dataset_name(std::string name) {
    std::string upper = name;
    std::transform(upper.begin(), upper.end(), upper.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    if (upper == "IMDB-B" || upper == "IMDB-2" || upper == "IMDB-BINARY") return "IMDB-BINARY";
    if (upper == "IMDB-M" || upper == "IMDB-MULTI") return "IMDB-MULTI";
    if (upper == "REDDIT" || upper == "REDDIT-B" || upper == "REDDIT-BINARY") return "REDDIT-BINARY";
    if (upper == "MUTAG" || upper == "NCI1" || upper == "COLLAB") return upper;
    return name;
}

namespace detail {

struct ParsedUrl {
    std::string scheme_host_port;
    std::string path_prefix;
};

inline ParsedUrl split_url(const std::string& url) {
    const auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) throw FetchError("fetch error: base URL lacks a scheme: " + url);
    const auto path_start = url.find('/', scheme_end + 3);
    ParsedUrl p;
    p.scheme_host_port = url.substr(0, path_start);
    p.path_prefix = path_start == std::string::npos ? "" : url.substr(path_start);
    while (!p.path_prefix.empty() && p.path_prefix.back() == '/') p.path_prefix.pop_back();
    return p;
}

inline std::string download(const std::string& base_url, const std::string& file) {
    const auto url = split_url(base_url);
    httplib::Client client(url.scheme_host_port);
    client.set_follow_location(true);
    client.set_connection_timeout(30);
    client.set_read_timeout(300);
    auto res = client.Get(url.path_prefix + "/" + file);
    if (!res) throw FetchError("fetch error: " + httplib::to_string(res.error()) + " (" + base_url + ")");
    if (res->status != 200) throw FetchError("fetch error: HTTP " + std::to_string(res->status), res->status);
    return std::move(res->body);
}

/// Relative output path for an archive member, with a leading "<name>/" removed.
inline std::filesystem::path member_path(const std::string& entry, const std::string& name) {
    std::string rel = entry;
    if (rel.rfind(name + "/", 0) == 0) rel = rel.substr(name.size() + 1);
    const std::filesystem::path p(rel);
    if (p.is_absolute()) throw ExtractionError("zip: absolute member path " + entry);
    for (const auto& part : p)
        if (part == "..") throw ExtractionError("zip: member path escapes the archive: " + entry);
    return p;
}

}  // namespace detail

/// Extracts a dataset archive into `<cache>/<name>/` atomically: members go to
/// a scratch directory that is renamed into place only after every member was
/// written and `<name>_A.txt` was found.
inline std::filesystem::path install_archive(const std::string& archive, const std::string& name,
                                             const std::filesystem::path& cache_directory) {
    namespace fs = std::filesystem;
    const auto entries = read_zip(archive);
    fs::create_directories(cache_directory);
    std::random_device rd;
    const fs::path scratch = cache_directory / ("." + name + ".partial-" + std::to_string(rd()));
    try {
        fs::create_directories(scratch);
        bool found = false;
        for (const auto& e : entries) {
            const auto rel = detail::member_path(e.name, name);
            if (rel.empty()) continue;
            const auto dst = scratch / rel;
            fs::create_directories(dst.parent_path());
            std::ofstream out(dst, std::ios::binary);
            out.write(e.data.data(), static_cast<std::streamsize>(e.data.size()));
            if (!out) throw ExtractionError("cannot write " + dst.string());
            found = found || rel == fs::path(name + "_A.txt");
        }
        if (!found) throw ExtractionError("zip: archive has no " + name + "_A.txt");
        const fs::path target = dataset_directory(cache_directory, name);
        fs::remove_all(target);
        fs::rename(scratch, target);
        return target;
    } catch (...) {
        std::error_code ec;
        fs::remove_all(scratch, ec);
        throw;
    }
}

/// Returns `<cache>/<name>`, downloading `<base_url>/<name>.zip` first unless
/// the dataset is already cached. Failures leave the cache untouched.
inline std::filesystem::path fetch_dataset(const std::string& name, const std::string& base_url,
                                           const std::filesystem::path& cache_directory) {
    if (dataset_present(cache_directory, name)) return dataset_directory(cache_directory, name);
    const std::string archive = detail::download(base_url, name + ".zip");
    return install_archive(archive, name, cache_directory);
}

}  // namespace ringgesn
